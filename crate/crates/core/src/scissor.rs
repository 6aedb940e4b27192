//! Closed-form output of the single-photon quantum scissor.
//!
//! All states are returned in the heralded branch where the scissor acts as
//! `|0> + a|1> -> |0> + g a|1>`; the opposite detector gives the same state
//! with `a -> -a` and is folded in by Bob's sign flip, so the returned
//! success probability always counts both detectors.

use num_complex::Complex;

use crate::model::{f1, f2, ChannelParams, ProtocolParams, QSParams};
use crate::scalar::Real;

/// Density operator on `span{|0>, |1>}`; `rho01 = <0|rho|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState<R> {
    pub rho00: R,
    pub rho01: Complex<R>,
    pub rho11: R,
}

impl<R: Real> QubitState<R> {
    pub fn vacuum() -> Self {
        Self {
            rho00: R::one(),
            rho01: Complex::new(R::zero(), R::zero()),
            rho11: R::zero(),
        }
    }

    /// `<1|rho|0>`.
    pub fn rho10(&self) -> Complex<R> {
        self.rho01.conj()
    }

    pub fn trace(&self) -> R {
        self.rho00 + self.rho11
    }

    /// Determinant `rho00 rho11 - |rho01|^2`; nonnegative for a physical state.
    pub fn det(&self) -> R {
        self.rho00 * self.rho11 - self.rho01.norm_sqr()
    }

    pub fn is_physical(&self, tol: R) -> bool {
        (self.trace() - R::one()).abs() <= tol && self.rho00 >= -tol && self.rho11 >= -tol && self.det() >= -tol
    }

    /// `<psi|rho|psi>` for the normalised truncation of `|0> + beta|1>`.
    pub fn fidelity_truncated_coherent(&self, beta: Complex<R>) -> R {
        let norm = R::one() + beta.norm_sqr();
        let cross = (beta * self.rho01).re;
        (self.rho00 + cross + cross + beta.norm_sqr() * self.rho11) / norm
    }

    fn from_unnormalized(u00: R, u01: Complex<R>, u11: R) -> Self {
        let p = u00 + u11;
        Self {
            rho00: u00 / p,
            rho01: u01 / p,
            rho11: u11 / p,
        }
    }
}

/// Output state and total success probability for a coherent input `alpha`.
pub fn post_selected_state<R: Real>(
    alpha: Complex<R>,
    chan: &ChannelParams<R>,
    qs: &QSParams<R>,
) -> (QubitState<R>, R) {
    let c = CoherentTerms::new(alpha, chan, qs);
    let gt = qs.gain() * chan.transmittance().sqrt();
    let u01 = alpha.conj() * (R::lit(2.0) * gt / ((c.g2 + R::one()) * c.s * c.s));
    let state = QubitState::from_unnormalized(c.u00, u01, c.u11);
    (state, c.p_succ())
}

/// Total (two-detector) success probability for a coherent input `alpha`.
pub fn success_probability<R: Real>(alpha: Complex<R>, chan: &ChannelParams<R>, qs: &QSParams<R>) -> R {
    CoherentTerms::new(alpha, chan, qs).p_succ()
}

/// Weak-signal approximation `(1 + |g alpha|^2) / (1 + g^2)` of the success probability.
pub fn rl_approx_success<R: Real>(alpha: Complex<R>, qs: &QSParams<R>) -> R {
    let g2 = qs.gain_sq();
    (R::one() + g2 * alpha.norm_sqr()) / (R::one() + g2)
}

/// Matrix elements with the common factor `exp(-T|alpha|^2 / (2F1 + 1))` removed.
struct CoherentTerms<R> {
    g2: R,
    s: R,
    k: R,
    u00: R,
    u11: R,
}

impl<R: Real> CoherentTerms<R> {
    fn new(alpha: Complex<R>, chan: &ChannelParams<R>, qs: &QSParams<R>) -> Self {
        let two = R::lit(2.0);
        let g2 = qs.gain_sq();
        let f = f1(chan);
        let s = two * f + R::one();
        let k = chan.transmittance() * alpha.norm_sqr();
        let u00 = two * (two * f * s + k) / ((g2 + R::one()) * s * s * s);
        // e1/s - e2/(4F), with 2F - 1 = eps_rec / 2 taken exactly.
        let two_f_minus_one = chan.eps_rec() / two;
        let bracket = (two_f_minus_one - s * (-k / (two * f * s)).exp_m1()) / (R::lit(4.0) * f * s);
        let u11 = two * g2 / (g2 + R::one()) * bracket;
        Self { g2, s, k, u00, u11 }
    }

    fn p_succ(&self) -> R {
        // Log-space so that large |alpha| underflows gracefully to zero.
        ((R::lit(2.0) * (self.u00 + self.u11)).ln() - self.k / self.s).exp()
    }
}

/// Diagonal output state and success probability `P_succ(V_A)` for a
/// thermal input of variance `V_A` (Gaussian-modulated ensemble).
pub fn thermal_post_selected_state<R: Real>(
    proto: &ProtocolParams<R>,
    chan: &ChannelParams<R>,
    qs: &QSParams<R>,
) -> (QubitState<R>, R) {
    thermal_with_factor(
        f2(chan, proto.va()),
        chan.transmittance() * (proto.va() + chan.eps_tm()),
        qs,
    )
}

/// Shared by the thermal state and the entanglement-based average success
/// probability; `t_noise = 2 (2F - 1)` is passed separately to avoid cancellation.
pub(crate) fn thermal_with_factor<R: Real>(f: R, t_noise: R, qs: &QSParams<R>) -> (QubitState<R>, R) {
    let two = R::lit(2.0);
    let four = R::lit(4.0);
    let g2 = qs.gain_sq();
    let s = two * f + R::one();
    let w00 = two * f / (s * s);
    let w11 = g2 * (t_noise / two) / (four * f * s);
    let p = four / (g2 + R::one()) * (w00 + w11);
    let state = QubitState {
        rho00: w00 / (w00 + w11),
        rho01: Complex::new(R::zero(), R::zero()),
        rho11: w11 / (w00 + w11),
    };
    (state, p)
}

/// Unnormalised scissor output conditioned on Alice's x-quadrature value,
/// with the Gaussian factor `exp(-T x^2 / (2F1 + 1))` split off.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ConditionalTerms<R> {
    pub w00: R,
    pub w01: R,
    pub w11: R,
    /// Exponent of the split-off Gaussian factor.
    pub log_e1: R,
}

impl<R: Real> ConditionalTerms<R> {
    pub fn new(x: R, proto: &ProtocolParams<R>, chan: &ChannelParams<R>, qs: &QSParams<R>) -> Self {
        let one = R::one();
        let two = R::lit(2.0);
        let sqrt2 = R::SQRT_2();
        let t = chan.transmittance();
        let g2 = qs.gain_sq();
        let f = f1(chan);
        let s = two * f + one;
        let u = t * proto.va();
        let d = u + two * s;
        let tx2 = t * x * x;
        let norm = g2 + one;

        let w00 = sqrt2
            * (R::lit(8.0) * f * s * s + u * (R::lit(8.0) * f * f + R::lit(6.0) * f + one) + two * t * d * x * x)
            / (norm * s * s * s.sqrt() * d * d.sqrt());
        let w01 = two * qs.gain() * (two * t).sqrt() * x / (norm * s * s.sqrt() * d.sqrt());

        // 2 sqrt2 e1 / sqrt(s D) - e2 / sqrt(F (u + 4F)), rewritten as
        // 2 sqrt2 e1 / sqrt(s D) * (1 - exp(ln(ratio) - T x^2 / (2 F s))).
        let two_f_minus_one = chan.eps_rec() / two;
        let z = (u * (one - R::lit(6.0) * f) - two * (R::lit(6.0) * f + one) * two_f_minus_one)
            / (R::lit(8.0) * f * (u + R::lit(4.0) * f));
        let expo = z.ln_1p() / two - tx2 / (two * f * s);
        let w11 = g2 / norm * two * sqrt2 / (s * d).sqrt() * (-expo.exp_m1());

        Self {
            w00,
            w01,
            w11,
            log_e1: -tx2 / s,
        }
    }

    /// `P^PS(x) / e1`.
    pub fn weight(&self) -> R {
        self.w00 + self.w11
    }

    pub fn state(&self) -> QubitState<R> {
        QubitState::from_unnormalized(self.w00, Complex::new(self.w01, R::zero()), self.w11)
    }
}

/// Normalised output state conditioned on Alice's quadrature value `x_a`,
/// together with the unnormalised single-detector weight `P^PS(x_a)`.
pub fn conditional_state<R: Real>(
    x_a: R,
    proto: &ProtocolParams<R>,
    chan: &ChannelParams<R>,
    qs: &QSParams<R>,
) -> (QubitState<R>, R) {
    let c = ConditionalTerms::new(x_a, proto, chan, qs);
    (c.state(), c.weight() * c.log_e1.exp())
}
