//! Ordered data-parallel maps. With the `parallel` feature work runs on the
//! rayon pool; without it, or through the `_seq` variants, it runs in order on
//! the calling thread. Output order always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seq(items, f)
    }
}

pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// `f(0), f(1), ..., f(count - 1)`.
pub fn map_range<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_range_seq(count, f)
    }
}

pub fn map_range_seq<U, F>(count: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..count).map(f).collect()
}

/// Runs `f` with at most `jobs` worker threads (`None`: the global pool).
pub fn with_jobs<R, F>(jobs: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        match jobs {
            Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
                Ok(pool) => pool.install(f),
                Err(_) => f(),
            },
            None => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        f()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        let par = map(&xs, |x| x * x);
        assert_eq!(par, map_seq(&xs, |x| x * x));
        assert_eq!(map_range(5, |i| i + 1), vec![1, 2, 3, 4, 5]);
        assert_eq!(with_jobs(Some(2), || map_range(3, |i| i)), vec![0, 1, 2]);
    }
}
