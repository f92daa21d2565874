//! Subcommand implementations. Each writes its report and returns the verdict.

use std::io::Write;

use serde_json::{json, Value};
use walkmat::canonical::{self, IsoCertificate};
use walkmat::json::int_value;
use walkmat::oracle::{self, RankStats};
use walkmat::reconstruct::{self, ReconstructionInput, ReconstructionResult};
use walkmat::spectral;
use walkmat::{linalg, par, WalkMatrix};

use crate::input::{self, SetSpec};
use crate::render;
use crate::{Cli, CliError, Command, Output, Outcome, Pair, Single};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    let table = cli.output == Output::Table;
    match &cli.command {
        Command::Walk(one) => walk(cli, one, table, out),
        Command::Mainpoly(one) => mainpoly(cli, one, table, out),
        Command::Spectral { input, numeric } => spectral_cmd(cli, input, *numeric, table, out),
        Command::Restrict { input, projector } => restrict(cli, input, *projector, table, out),
        Command::Reconstruct { input, edges, numeric } => reconstruct_cmd(cli, input, *edges, *numeric, table, out),
        Command::Canon { input, labels } => canon(cli, input, *labels, table, out),
        Command::Iso(pair) => iso(cli, pair, table, out),
        Command::Equiv(pair) => equiv(cli, pair, table, out),
        Command::Stats { n, trials, seed, jobs, random_set } => {
            let seed = seed.unwrap_or(oracle::DEFAULT_SEED);
            stats(n, *trials, seed, *jobs, *random_set, table, out)
        }
        Command::Roundtrip { n, jobs } => roundtrip(*n, *jobs, table, out),
    }
}

fn set_spec(set: &Option<String>) -> Result<Option<SetSpec>> {
    set.as_deref().map(input::parse_set).transpose()
}

fn load_walk(cli: &Cli, path: &str, set: &Option<String>) -> Result<WalkMatrix> {
    input::load(path, cli.format)?.walk(set_spec(set)?.as_ref())
}

/// One JSON document per line.
fn emit(out: &mut dyn Write, v: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string(v).map_err(|e| CliError::data(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn data(e: impl std::fmt::Display) -> CliError {
    CliError::data(e.to_string())
}

fn walk(cli: &Cli, one: &Single, table: bool, out: &mut dyn Write) -> Result<Outcome> {
    let w = load_walk(cli, &one.input, &one.set)?;
    if table {
        write!(out, "{}", w.to_text())?;
    } else {
        emit(out, &w.to_json())?;
    }
    Ok(Outcome::Success)
}

fn mainpoly(cli: &Cli, one: &Single, table: bool, out: &mut dyn Write) -> Result<Outcome> {
    let w = load_walk(cli, &one.input, &one.set)?;
    let sum = spectral::summarize(&w).map_err(data)?;
    if table {
        writeln!(out, "rank {} of {}", sum.rank, w.order())?;
        writeln!(out, "main_poly {}", sum.main_poly)?;
    } else {
        emit(
            out,
            &json!({
                "n": w.order(),
                "rank": sum.rank,
                "main_poly": render::poly(&sum.main_poly),
                "text": sum.main_poly.to_string(),
            }),
        )?;
    }
    Ok(Outcome::Success)
}

fn spectral_cmd(cli: &Cli, one: &Single, numeric: bool, table: bool, out: &mut dyn Write) -> Result<Outcome> {
    let w = load_walk(cli, &one.input, &one.set)?;
    let sum = spectral::summarize(&w).map_err(data)?;
    let real = if numeric { Some(spectral::realize(&w, spectral::ROOT_TOL).map_err(data)?) } else { None };
    if table {
        writeln!(out, "rank {} of {}", sum.rank, w.order())?;
        writeln!(out, "main_poly {}", sum.main_poly)?;
        if let Some(cp) = &sum.char_poly {
            writeln!(out, "char_poly {cp}")?;
        }
        if let Some(r) = &real {
            let mu: Vec<String> = r.mu.iter().map(|m| format!("{m:.10}")).collect();
            writeln!(out, "mu {}", mu.join(" "))?;
        }
    } else {
        emit(out, &sum.to_json(real.as_ref()))?;
    }
    Ok(Outcome::Success)
}

fn restrict(cli: &Cli, one: &Single, projector: bool, table: bool, out: &mut dyn Write) -> Result<Outcome> {
    let w = load_walk(cli, &one.input, &one.set)?;
    let dec = spectral::decompose(&w).map_err(data)?;
    if table {
        writeln!(out, "A_W")?;
        write!(out, "{}", render::table(&dec.a_w, None))?;
        if projector {
            writeln!(out, "P")?;
            write!(out, "{}", render::table(&dec.projector, None))?;
        }
    } else {
        let mut doc = json!({ "n": w.order(), "rank": dec.summary.rank, "a_w": render::matrix(&dec.a_w) });
        if projector {
            doc["projector"] = render::matrix(&dec.projector);
        }
        emit(out, &doc)?;
    }
    Ok(Outcome::Success)
}

fn reconstruct_cmd(
    cli: &Cli,
    one: &Single,
    edges: Option<usize>,
    numeric: bool,
    table: bool,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let w = load_walk(cli, &one.input, &one.set)?;
    let n = w.order();
    let result = if numeric && n >= 2 && linalg::rank(w.matrix()) + 2 == n {
        reconstruct::rank_n2_numeric(&w, edges).unwrap_or_else(|e| match e {
            reconstruct::ReconstructError::MissingEdgeCount => {
                ReconstructionResult::Undetermined(reconstruct::UndeterminedReason::MissingEdgeCount)
            }
            _ => ReconstructionResult::Undetermined(reconstruct::UndeterminedReason::NoValidCandidate),
        })
    } else {
        reconstruct::reconstruct(&ReconstructionInput { w, edge_count_hint: edges })
    };
    let doc = result.to_json();
    if table {
        match &doc.reason {
            Some(r) => writeln!(out, "{} {}", doc.status, serde_json::to_value(r).map_err(data)?.as_str().unwrap_or(""))?,
            None => writeln!(out, "{}", doc.status)?,
        }
        for g in &doc.graphs {
            writeln!(out, "{g}")?;
        }
    } else {
        emit(out, &doc)?;
    }
    Ok(match result {
        ReconstructionResult::Undetermined(_) => Outcome::Inconclusive,
        _ => Outcome::Success,
    })
}

fn canon(cli: &Cli, one: &Single, labels: bool, table: bool, out: &mut dyn Write) -> Result<Outcome> {
    let w = load_walk(cli, &one.input, &one.set)?;
    let lf = canonical::lex_form(&w);
    // row `p` of the lex form is input row `order[p]`
    let order = canonical::invert(&lf.perm);
    let row_labels = render::labels(&canonical::one_based(&order));
    if table {
        write!(out, "{}", render::table(&lf.matrix, labels.then_some(row_labels.as_slice())))?;
        writeln!(out, "permutation {}", canonical::cycle_notation(&lf.perm))?;
    } else {
        let mut doc = json!({
            "lex_form": render::matrix(&lf.matrix),
            "permutation": canonical::one_based(&lf.perm),
            "cycles": canonical::cycle_notation(&lf.perm),
            "ties": lf.ties.iter().map(|t| canonical::one_based(t)).collect::<Vec<_>>(),
        });
        if labels {
            doc["labels"] = json!(row_labels);
        }
        emit(out, &doc)?;
    }
    Ok(Outcome::Success)
}

fn iso(cli: &Cli, pair: &Pair, table: bool, out: &mut dyn Write) -> Result<Outcome> {
    let a = input::load(&pair.first, cli.format)?;
    let b = input::load(&pair.second, cli.format)?;
    let (g1, g2) = (a.graph()?, b.graph()?);
    let s1 = set_spec(&pair.set)?.unwrap_or(SetSpec::All).resolve(g1.order())?;
    let s2 = set_spec(&pair.set2)?.unwrap_or(SetSpec::All).resolve(g2.order())?;
    let cert = canonical::certify_isomorphism(g1, &s1, g2, &s2).map_err(data)?;
    let perms: Vec<&Vec<usize>> = match &cert {
        IsoCertificate::Isomorphic(p) => vec![p],
        IsoCertificate::IsomorphicPair(p, q) => vec![p, q],
        _ => Vec::new(),
    };
    let doc = cert.to_json();
    if table {
        match &doc.reason {
            Some(r) => writeln!(out, "{} {}", doc.verdict, serde_json::to_value(r).map_err(data)?.as_str().unwrap_or(""))?,
            None => writeln!(out, "{}", doc.verdict)?,
        }
        for p in &perms {
            writeln!(out, "{}", canonical::cycle_notation(p))?;
        }
    } else {
        let mut v = serde_json::to_value(&doc).map_err(data)?;
        if !perms.is_empty() {
            v["cycles"] = json!(perms.iter().map(|p| canonical::cycle_notation(p)).collect::<Vec<_>>());
        }
        emit(out, &v)?;
    }
    Ok(match cert {
        IsoCertificate::Isomorphic(_) | IsoCertificate::IsomorphicPair(..) => Outcome::Success,
        IsoCertificate::NotIsomorphic => Outcome::Negative,
        IsoCertificate::Inconclusive(_) => Outcome::Inconclusive,
    })
}

fn equiv(cli: &Cli, pair: &Pair, table: bool, out: &mut dyn Write) -> Result<Outcome> {
    let w1 = load_walk(cli, &pair.first, &pair.set)?;
    let w2 = load_walk(cli, &pair.second, &pair.set2)?;
    let equivalent = w1.order() == w2.order() && canonical::walk_equivalent(&w1, &w2);
    let ranks = [linalg::rank(w1.matrix()), linalg::rank(w2.matrix())];
    if table {
        let verdict = if equivalent { "walk_equivalent" } else { "not_walk_equivalent" };
        writeln!(out, "{verdict} (ranks {} and {})", ranks[0], ranks[1])?;
    } else {
        emit(out, &json!({ "walk_equivalent": equivalent, "ranks": ranks }))?;
    }
    Ok(if equivalent { Outcome::Success } else { Outcome::Negative })
}

fn stats_json(s: &RankStats) -> Value {
    // [rank, count] pairs in ascending rank
    let hist: Vec<[usize; 2]> = s.rank_histogram.iter().map(|(&r, &c)| [r, c]).collect();
    json!({
        "n": s.n,
        "trials": s.trials,
        "seed": int_value(&s.seed.into()),
        "random_set": s.random_set,
        "full_rank_count": s.full_rank_count,
        "full_rank_fraction": s.full_rank_fraction(),
        "rank_histogram": hist,
    })
}

fn stats(
    orders: &[usize],
    trials: usize,
    seed: u64,
    jobs: Option<usize>,
    random_set: bool,
    table: bool,
    out: &mut dyn Write,
) -> Result<Outcome> {
    if table {
        writeln!(out, "{:>4} {:>8} {:>9} {:>8}  histogram", "n", "trials", "full_rank", "fraction")?;
    }
    for &n in orders {
        let s = par::with_jobs(jobs, || oracle::rank_statistics_with(n, trials, seed, random_set));
        if table {
            let hist: Vec<String> = s.rank_histogram.iter().map(|(r, c)| format!("{r}:{c}")).collect();
            writeln!(
                out,
                "{:>4} {:>8} {:>9} {:>8.4}  {}",
                s.n,
                s.trials,
                s.full_rank_count,
                s.full_rank_fraction(),
                hist.join(" ")
            )?;
        } else {
            writeln!(out, "{}", stats_json(&s))?;
        }
    }
    Ok(Outcome::Success)
}

fn roundtrip(n: usize, jobs: Option<usize>, table: bool, out: &mut dyn Write) -> Result<Outcome> {
    let rep = par::with_jobs(jobs, || oracle::exhaustive_roundtrip(n)).map_err(data)?;
    if table {
        writeln!(out, "n {} classes {}", rep.n, rep.classes)?;
        writeln!(out, "{:>4} {:>8} {:>8} {:>6}", "rank", "classes", "ok", "pairs")?;
        for (r, s) in &rep.by_rank {
            writeln!(out, "{:>4} {:>8} {:>8} {:>6}", r, s.classes, s.ok, s.pairs)?;
        }
        for f in &rep.failures {
            writeln!(out, "failure {f}")?;
        }
    } else {
        for line in rep.json_lines() {
            writeln!(out, "{line}")?;
        }
        writeln!(out, "{}", rep.summary_json())?;
    }
    Ok(if rep.failures.is_empty() { Outcome::Success } else { Outcome::Negative })
}
