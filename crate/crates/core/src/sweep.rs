//! Data-parallel sweeps over finite case lists with order-independent results.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::Result;
use crate::exactnum::{Monomial, Var};
use crate::report::Witness;

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("WICK_THREADS")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            builder = builder.num_threads(n);
        }
        builder.build().expect("thread pool")
    })
}

/// Run `check` on `0..count` and return the failure with the smallest index.
pub fn first_failure<F>(count: usize, check: F) -> Result<Option<Witness>>
where
    F: Fn(usize) -> Result<Option<Witness>> + Sync + Send,
{
    let found = pool().install(|| {
        (0..count)
            .into_par_iter()
            .map(&check)
            .find_first(|r| !matches!(r, Ok(None)))
    });
    match found {
        None => Ok(None),
        Some(r) => r,
    }
}

/// Map `f` over `0..count` in parallel, keeping index order.
pub fn par_map<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    pool().install(|| (0..count).into_par_iter().map(f).collect())
}

/// All monomials in the `2n` chart variables with every exponent at most `dmax`,
/// in increasing lexicographic order.
pub fn monomials(n: usize, dmax: u16) -> Vec<Monomial> {
    let vars = Var::all(n);
    let mut out = vec![Monomial::one()];
    for v in vars {
        let mut next = Vec::with_capacity(out.len() * (dmax as usize + 1));
        for m in &out {
            for e in 0..=dmax {
                let mut m2 = *m;
                m2.0[v.slot()] = e;
                next.push(m2);
            }
        }
        out = next;
    }
    out.sort();
    out
}
