//! Data-parallel helpers. With the `parallel` feature these run on rayon;
//! without it, or after [`set_parallel(false)`], they fall back to plain
//! iterators. Results are identical either way because every reduction in
//! the crate is an exact, order-independent sum.

use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Toggle parallel execution at runtime. Has no effect when the crate is
/// built without the `parallel` feature.
pub fn set_parallel(on: bool) {
    ENABLED.store(on, Ordering::Relaxed);
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && ENABLED.load(Ordering::Relaxed)
}

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Map over `items` and fold the results with an associative, commutative
/// operation.
pub fn map_reduce<T, R, F, G>(items: &[T], identity: R, f: F, op: G) -> R
where
    T: Sync,
    R: Send + Sync + Clone,
    F: Fn(&T) -> R + Sync + Send,
    G: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).reduce(|| identity.clone(), &op);
    }
    items.iter().map(f).fold(identity, op)
}
