//! Covariance-matrix security analysis: scissor and baseline triplets,
//! symplectic spectrum, Holevo bound and the thermal-loss PLOB bound.

use crate::error::{check, Error, Result};
use crate::model::{ChannelParams, ProtocolParams, QSParams};
use crate::scalar::Real;
use crate::scissor::thermal_with_factor;

/// `(a, b, c)` of the two-mode CM `[[a I, c Z], [c Z, b I]]` in shot-noise units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceTriplet<R> {
    pub a: R,
    pub b: R,
    pub c: R,
}

impl<R: Real> CovarianceTriplet<R> {
    pub fn new(a: R, b: R, c: R) -> Self {
        Self { a, b, c }
    }

    pub fn vacuum() -> Self {
        Self::new(R::one(), R::one(), R::zero())
    }

    /// `ab - c^2`.
    pub fn det_block(&self) -> R {
        self.a * self.b - self.c * self.c
    }

    fn non_physical(&self) -> Error {
        Error::NonPhysical {
            a: self.a.as_f64(),
            b: self.b.as_f64(),
            c: self.c.as_f64(),
        }
    }
}

/// Symplectic eigenvalues of the joint state and Bob-conditioned Alice mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticSpectrum<R> {
    pub lambda1: R,
    pub lambda2: R,
    pub lambda3: R,
}

/// Post-selected CM triplet and average success probability for squeezing `delta`.
pub fn cm_triplet<R: Real>(delta: R, chan: &ChannelParams<R>, qs: &QSParams<R>) -> Result<(CovarianceTriplet<R>, R)> {
    check(delta >= R::one(), "delta", delta.as_f64(), ">= 1")?;
    let one = R::one();
    let two = R::lit(2.0);
    let four = R::lit(4.0);
    let eight = R::lit(8.0);
    let t = chan.transmittance();
    let g2 = qs.gain_sq();
    let gam2 = delta * delta - one;
    let t_noise = t * (two * gam2 + chan.eps_tm());
    let f = R::lit(0.5) + t_noise / four;
    let s = two * f + one;
    let (_, pbar) = thermal_with_factor(f, t_noise, qs);
    let np = (g2 + one) * pbar;
    let gt = gam2 * t;

    // 2F - gamma^2 T = 1 + T eps_tm / 2 + gamma^2 T, always >= 1.
    let a = delta * delta / np
        * (eight * (gt + (s - gt) * (g2 * s + two * f)) / (s * s * s) - g2 * (two * f - gt) / (f * f))
        - one;
    let b = four / np * (four * (g2 * s + f) / (s * s) - g2 / f) - one;
    let c = eight * delta * gam2.sqrt() * qs.gain() * t.sqrt() / (np * s * s);
    Ok((CovarianceTriplet::new(a, b, c), pbar))
}

/// Textbook entanglement-based triplet of Gaussian-modulated coherent states
/// over the same channel without the scissor.
pub fn noqs_triplet<R: Real>(proto: &ProtocolParams<R>, chan: &ChannelParams<R>) -> CovarianceTriplet<R> {
    let v = proto.v();
    let t = chan.transmittance();
    CovarianceTriplet::new(
        v,
        t * (v - R::one()) + R::one() + chan.eps_rec(),
        (t * proto.va() * (v + R::one())).sqrt(),
    )
}

pub fn symplectic_spectrum<R: Real>(cm: &CovarianceTriplet<R>) -> Result<SymplecticSpectrum<R>> {
    let tol = R::lit(1e-9);
    let &CovarianceTriplet { a, b, c } = cm;
    let det = cm.det_block();
    let sum = a + b;
    let disc = sum * sum - R::lit(4.0) * c * c;
    if !(a >= R::one() - tol && b >= R::one() - tol && det > R::zero() && disc >= R::zero()) {
        return Err(cm.non_physical());
    }
    let root = disc.sqrt();
    let half = R::lit(0.5);
    let spec = SymplecticSpectrum {
        lambda1: half * (root + (b - a)),
        lambda2: half * (root - (b - a)),
        lambda3: (a * det / b).sqrt(),
    };
    if spec.lambda1 < R::one() - tol || spec.lambda2 < R::one() - tol {
        return Err(cm.non_physical());
    }
    Ok(spec)
}

/// Von Neumann entropy (bits) of a single-mode thermal state of symplectic eigenvalue `x`.
pub fn entropy_g<R: Real>(x: R) -> R {
    let one = R::one();
    let y = (x - one) / R::lit(2.0);
    if y <= R::zero() {
        return R::zero();
    }
    let nats = if x - one < R::lit(1e-6) {
        y * (one - y.ln()) + y * y / R::lit(2.0)
    } else {
        (one + y) * y.ln_1p() - y * y.ln()
    };
    nats / R::LN_2()
}

/// Holevo information (bits) available to Eve under reverse reconciliation
/// with homodyne detection at Bob.
pub fn holevo_bound<R: Real>(cm: &CovarianceTriplet<R>) -> Result<R> {
    let s = symplectic_spectrum(cm)?;
    let chi = entropy_g(s.lambda1) + entropy_g(s.lambda2) - entropy_g(s.lambda3);
    Ok(chi.max(R::zero()))
}

/// Gaussian mutual information `1/2 log2(ab / (ab - c^2))`.
pub fn mutual_information_gaussian<R: Real>(cm: &CovarianceTriplet<R>) -> Result<R> {
    let det = cm.det_block();
    if !(det > R::zero() && cm.a > R::zero() && cm.b > R::zero()) {
        return Err(cm.non_physical());
    }
    Ok(R::lit(0.5) * (cm.a * cm.b / det).log2())
}

/// Mean thermal photon number of the equivalent thermal-loss channel.
pub fn equivalent_nbar<R: Real>(chan: &ChannelParams<R>) -> R {
    chan.eps_rec() / (R::lit(2.0) * chan.one_minus_t())
}

/// Repeaterless secret-key capacity bound (bits/use) for a thermal-loss
/// channel; zero once the thermal photon number reaches `T / (1 - T)`.
pub fn tl_plob_bound<R: Real>(chan: &ChannelParams<R>) -> Result<R> {
    let one_minus_t = chan.one_minus_t();
    check(
        one_minus_t > R::zero(),
        "transmittance",
        chan.transmittance().as_f64(),
        "< 1",
    )?;
    let t = chan.transmittance();
    let n = equivalent_nbar(chan);
    if n >= t / one_minus_t {
        return Ok(R::zero());
    }
    let h = if n > R::zero() {
        (n + R::one()) * n.ln_1p() - n * n.ln()
    } else {
        R::zero()
    };
    let nats = -(one_minus_t.ln() + n * t.ln()) - h;
    Ok((nats / R::LN_2()).max(R::zero()))
}
