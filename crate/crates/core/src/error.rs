use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name} = {value}: expected {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("input-referred excess noise is undefined at T = 1 with eps_tm = {eps_tm} > 0")]
    UndefinedExcessNoise { eps_tm: f64 },

    #[error("non-physical covariance triplet (a = {a}, b = {b}, c = {c})")]
    NonPhysical { a: f64, b: f64, c: f64 },

    #[error("Fock truncation of {mode} mode leaves tail {tail:e} above bound; use cutoff >= {suggested}")]
    Truncation {
        mode: &'static str,
        tail: f64,
        suggested: usize,
    },

    #[error("quadrature for {what} did not converge (node doubling changed result by {delta:e})")]
    Quadrature { what: &'static str, delta: f64 },

    #[error("mode count mismatch: state has {state} modes, transform acts on {transform}")]
    DimensionMismatch { state: usize, transform: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check(ok: bool, name: &'static str, value: f64, expected: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, expected })
    }
}
