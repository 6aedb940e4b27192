//! Non-Gaussian quadrature densities and the exact Alice-Bob mutual information.
//!
//! Densities use `<x|0>^2 = exp(-x^2)/sqrt(pi)` and `<x|1> = sqrt(2) x <x|0>`.
//! Mutual information does not depend on that scale; every entropy routine
//! accepts an axis rescaling so this can be checked directly.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::gaussian::{cm_triplet, mutual_information_gaussian};
use crate::quadrature::{gauss_hermite, tanh_sinh};
use crate::scissor::{thermal_post_selected_state, ConditionalTerms};
use crate::{ChannelParams, ProtocolParams, QSParams, QubitState};

/// Default outer Gauss-Hermite size.
pub const DEFAULT_NODES: usize = 96;
/// Largest outer size tried before giving up.
pub const MAX_NODES: usize = 768;
/// Node-doubling stability demanded of the returned mutual information (bits).
pub const NODE_TOLERANCE: f64 = 1e-9;

/// Half-width of the integration window in units of the vacuum spread.
const WINDOW: f64 = 12.0;
const INNER_TOL: f64 = 1e-15;

/// `f(x) = (c0 + c1 x + c2 x^2) exp(-x^2) / sqrt(pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureDensity {
    pub coeff_gauss: f64,
    /// Cross term from `Re(rho01)`; zero for phase-averaged states.
    pub coeff_x: f64,
    pub coeff_x2: f64,
}

impl QuadratureDensity {
    /// x-quadrature distribution of a qubit state.
    pub fn from_state(st: &QubitState) -> Self {
        Self {
            coeff_gauss: st.rho00,
            coeff_x: 2.0 * std::f64::consts::SQRT_2 * st.rho01.re,
            coeff_x2: 2.0 * st.rho11,
        }
    }

    fn poly(&self, x: f64) -> f64 {
        self.coeff_gauss + x * (self.coeff_x + x * self.coeff_x2)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.poly(x) * (-x * x).exp() / PI.sqrt()
    }

    /// `int f dx`, exact for this family.
    pub fn normalization(&self) -> f64 {
        self.coeff_gauss + 0.5 * self.coeff_x2
    }

    /// Differential entropy (bits) of the density of `scale * X`.
    pub fn entropy_bits(&self, scale: f64) -> f64 {
        // h = -int f ln q + E[x^2] + ln(sqrt(pi)); the log term is integrated
        // numerically, split where q may touch zero.
        let ln_scale = scale.ln();
        let integrand = |y: f64| {
            let x = y / scale;
            let q = self.poly(x);
            if q <= 0.0 {
                return 0.0;
            }
            let f = q * (-x * x).exp() / PI.sqrt() / scale;
            -f * (q.ln() - x * x - 0.5 * PI.ln() - ln_scale)
        };
        let half = WINDOW * scale;
        let vertex = if self.coeff_x2 > 0.0 {
            -self.coeff_x / (2.0 * self.coeff_x2) * scale
        } else {
            f64::INFINITY
        };
        let nats = if vertex.abs() < half {
            tanh_sinh(integrand, -half, vertex, INNER_TOL) + tanh_sinh(integrand, vertex, half, INNER_TOL)
        } else {
            tanh_sinh(integrand, -half, half, INNER_TOL)
        };
        nats / LN_2
    }
}

/// Bob's post-selected x-quadrature density for Gaussian modulation.
pub fn output_density(proto: &ProtocolParams, chan: &ChannelParams, qs: &QSParams) -> QuadratureDensity {
    QuadratureDensity::from_state(&thermal_post_selected_state(proto, chan, qs).0)
}

/// Bob's post-selected density given Alice's x-quadrature value `x_a`.
pub fn conditional_density(x_a: f64, proto: &ProtocolParams, chan: &ChannelParams, qs: &QSParams) -> QuadratureDensity {
    QuadratureDensity::from_state(&ConditionalTerms::new(x_a, proto, chan, qs).state())
}

/// Outer-quadrature layout: Alice's Gaussian density times the Gaussian part
/// of the herald weight, mapped onto the Hermite weight `exp(-u^2)`.
struct AliceAverage {
    /// `x = u * stretch`.
    stretch: f64,
}

impl AliceAverage {
    fn new(proto: &ProtocolParams, chan: &ChannelParams) -> Self {
        let s = 2.0 * crate::model::f1(chan) + 1.0;
        let kappa = 2.0 / proto.va() + chan.transmittance() / s;
        Self {
            stretch: kappa.sqrt().recip(),
        }
    }
}

/// Exact mutual information (bits) between Alice's x-modulation and Bob's
/// post-selected x-quadrature, with node doubling until stable.
pub fn mutual_information_exact(proto: &ProtocolParams, chan: &ChannelParams, qs: &QSParams) -> Result<f64> {
    mutual_information_exact_scaled(proto, chan, qs, 1.0)
}

/// As [`mutual_information_exact`], with Bob's axis rescaled by `scale`.
pub fn mutual_information_exact_scaled(
    proto: &ProtocolParams,
    chan: &ChannelParams,
    qs: &QSParams,
    scale: f64,
) -> Result<f64> {
    let mut n = DEFAULT_NODES;
    let mut prev = mutual_information_at_nodes(proto, chan, qs, n, scale);
    loop {
        let next = mutual_information_at_nodes(proto, chan, qs, 2 * n, scale);
        let delta = (next - prev).abs();
        if delta < NODE_TOLERANCE {
            return Ok(next);
        }
        n *= 2;
        if 2 * n > MAX_NODES {
            return Err(Error::Quadrature {
                what: "mutual information",
                delta,
            });
        }
        prev = next;
    }
}

/// Mutual information (bits) with a fixed outer rule of `nodes` points.
pub fn mutual_information_at_nodes(
    proto: &ProtocolParams,
    chan: &ChannelParams,
    qs: &QSParams,
    nodes: usize,
    scale: f64,
) -> f64 {
    let h_b = output_density(proto, chan, qs).entropy_bits(scale);
    let (num, den) = conditional_entropy_sums(proto, chan, qs, nodes, scale);
    h_b - num / den
}

/// `(sum w_i W(x_i) h(x_i), sum w_i W(x_i))` over the outer rule.
fn conditional_entropy_sums(
    proto: &ProtocolParams,
    chan: &ChannelParams,
    qs: &QSParams,
    nodes: usize,
    scale: f64,
) -> (f64, f64) {
    let layout = AliceAverage::new(proto, chan);
    let gh = gauss_hermite(nodes);
    let mut num = 0.0;
    let mut den = 0.0;
    // h(x_A) is even and the rule is symmetric: evaluate nonnegative nodes
    // only and double the strictly positive ones.
    for &(u, wq) in gh.as_node_weight_pairs().iter().filter(|(u, _)| *u >= 0.0) {
        let terms = ConditionalTerms::new(u * layout.stretch, proto, chan, qs);
        let w = wq * terms.weight() * if u > 0.0 { 2.0 } else { 1.0 };
        num += w * QuadratureDensity::from_state(&terms.state()).entropy_bits(scale);
        den += w;
    }
    (num, den)
}

/// `2 int f_XA(x) P^PS(x) dx`, which must reproduce the thermal success probability.
pub fn average_success_probability(proto: &ProtocolParams, chan: &ChannelParams, qs: &QSParams, nodes: usize) -> f64 {
    let layout = AliceAverage::new(proto, chan);
    let gh = gauss_hermite(nodes);
    let sum = gh.integrate(|u| ConditionalTerms::new(u * layout.stretch, proto, chan, qs).weight());
    2.0 * sum * layout.stretch / (PI * proto.va() / 2.0).sqrt()
}

/// Gaussian-approximation mutual information on the scissor triplet.
pub fn mutual_information_gaussian_qs(proto: &ProtocolParams, chan: &ChannelParams, qs: &QSParams) -> Result<f64> {
    let (cm, _) = cm_triplet(proto.delta(), chan, qs)?;
    mutual_information_gaussian(&cm)
}
