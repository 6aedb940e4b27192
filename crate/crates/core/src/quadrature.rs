//! Quadrature rules shared by the entropy integrals.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::hermite::GaussHermite;

/// Gauss-Hermite rule with `n` nodes, built once per size and shared.
pub fn gauss_hermite(n: usize) -> Arc<GaussHermite> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    map.entry(n)
        .or_insert_with(|| {
            let deg = NonZeroUsize::new(n).expect("at least one node");
            Arc::new(GaussHermite::new(deg))
        })
        .clone()
}

/// `int_a^b f` by tanh-sinh quadrature; endpoint singularities are tolerated.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    ::quadrature::double_exponential::integrate(f, a, b, tol).integral
}
