//! Brute-force simulation of channel plus scissor, used to check the closed forms.
//!
//! Nothing here calls the analytic scissor or covariance formulas; the only
//! shared inputs are the channel parameters.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::state::{FockState, ModeInput, MAX_MODES};
use super::transform::{BeamSplitter, ModeTransform};
use crate::error::{check, Error, Result};
use crate::quadrature::gauss_hermite;
use crate::{ChannelParams, CovarianceTriplet, ProtocolParams, QSParams, QubitState};

/// Default per-mode photon cutoff.
pub const DEFAULT_CUTOFF: usize = 25;
/// Hermite nodes for averaging coherent inputs over Alice's p-quadrature.
pub const DEFAULT_P_NODES: usize = 32;

/// What enters the signal port(s).
#[derive(Debug, Clone, PartialEq)]
pub enum InputKind {
    Coherent(Complex64),
    /// Thermal state of modulation variance `va` (mean photon number `va / 2`).
    Thermal {
        va: f64,
    },
    /// Two-mode squeezed vacuum; the first arm stays with Alice.
    Tmsv {
        delta: f64,
    },
    /// Mixture `sum w_k |alpha_k><alpha_k|`.
    CoherentMixture(Vec<(f64, Complex64)>),
}

/// Which detector heralds success.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detector {
    D1,
    D2,
}

/// Input of the circuit: signal mode(s), single photon, vacuum, then a
/// thermal noise mode of mean `noise_nbar`.
pub fn build_input(kind: &InputKind, noise_nbar: f64, cutoff: usize) -> Result<FockState> {
    let rest = |signal: Option<ModeInput>| {
        let mut v: Vec<(&'static str, ModeInput)> = Vec::with_capacity(4);
        if let Some(s) = signal {
            v.push(("signal", s));
        }
        v.push(("photon", ModeInput::Fock(1)));
        v.push(("vacuum", ModeInput::Vacuum));
        v.push((
            "noise",
            ModeInput::Thermal {
                mean_photons: noise_nbar,
            },
        ));
        v
    };
    match kind {
        InputKind::Coherent(a) => FockState::product(&rest(Some(ModeInput::Coherent(*a))), cutoff),
        InputKind::Thermal { va } => {
            FockState::product(&rest(Some(ModeInput::Thermal { mean_photons: va / 2.0 })), cutoff)
        }
        InputKind::CoherentMixture(points) => {
            FockState::product(&rest(Some(ModeInput::CoherentMixture(points.clone()))), cutoff)
        }
        InputKind::Tmsv { delta } => {
            check(*delta >= 1.0, "delta", *delta, ">= 1")?;
            let lambda = (delta * delta - 1.0).sqrt() / delta;
            FockState::tmsv_then(lambda, &rest(None)[..], cutoff)
        }
    }
}

/// Apply a mode transform; the number of modes must match.
pub fn apply_interferometer(state: &FockState, gamma: &ModeTransform) -> Result<FockState> {
    state.apply(gamma)
}

/// Heralded remainder of a detection.
#[derive(Debug, Clone)]
pub struct Herald {
    /// Normalised state of the undetected modes; `None` when `prob == 0`.
    pub state: Option<FockState>,
    /// Single-pattern probability: at least one photon at `d1`, none at `d2`.
    pub prob: f64,
}

/// Non-resolving click on `mode_d1` together with vacuum on `mode_d2`.
pub fn project_success(state: &FockState, mode_d1: usize, mode_d2: usize) -> Result<Herald> {
    if mode_d1 == mode_d2 || mode_d1.max(mode_d2) >= state.modes() {
        return Err(Error::DimensionMismatch {
            state: state.modes(),
            transform: mode_d1.max(mode_d2) + 1,
        });
    }
    let kept = state
        .filter(|o| o[mode_d1] >= 1 && o[mode_d2] == 0)
        .trace_out(&[mode_d1, mode_d2]);
    let prob = kept.trace();
    let state = (prob > 0.0).then(|| kept.scaled(1.0 / prob));
    Ok(Herald { state, prob })
}

/// How the channel is realised with a beam splitter and a thermal mode.
#[derive(Debug, Clone, Copy)]
struct Realisation {
    t: f64,
    nbar: f64,
    /// Amplitude rescaling of the signal before the splitter.
    gain: f64,
}

impl Realisation {
    /// At `T = 1` with transmitter noise the input-referred noise diverges; an
    /// equivalent channel is a 50:50 splitter with a brighter input and a
    /// thermal environment carrying the receiver noise.
    fn of(chan: &ChannelParams) -> Result<Self> {
        if chan.one_minus_t() > 0.0 {
            Ok(Self {
                t: chan.transmittance(),
                nbar: chan.eps()? / 2.0,
                gain: 1.0,
            })
        } else if chan.eps_tm() == 0.0 {
            Ok(Self {
                t: 1.0,
                nbar: 0.0,
                gain: 1.0,
            })
        } else {
            Ok(Self {
                t: 0.5,
                nbar: chan.eps_rec(),
                gain: std::f64::consts::SQRT_2,
            })
        }
    }
}

/// Scissor output simulated in the Fock basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleQubit {
    pub state: QubitState,
    /// Total success probability, both detectors counted.
    pub p_succ: f64,
    /// Single-pattern probability of the simulated detector.
    pub p_herald: f64,
}

fn run_circuit(input: &FockState, off: usize, t: f64, qs: &QSParams, detector: Detector) -> Result<Herald> {
    let gamma = ModeTransform::scissor_circuit(input.modes(), off, t, qs.mu())?;
    let out = apply_interferometer(input, &gamma)?;
    let (d1, d2) = match detector {
        Detector::D1 => (off, off + 1),
        Detector::D2 => (off + 1, off),
    };
    project_success(&out, d1, d2)
}

fn qubit_of(herald: Herald, bob: usize, env: usize) -> OracleQubit {
    let prob = herald.prob;
    let state = match herald.state {
        Some(st) => {
            // Undetected modes are renumbered after the projection.
            let bob_mode = bob - 2;
            let env_mode = env - 2;
            let traced: Vec<usize> = (0..st.modes()).filter(|&m| m != bob_mode).collect();
            debug_assert!(traced.contains(&env_mode));
            let rho = st.trace_out(&traced).single_mode_matrix(2);
            QubitState {
                rho00: rho[0][0].re,
                rho01: rho[0][1],
                rho11: rho[1][1].re,
            }
        }
        None => QubitState::vacuum(),
    };
    OracleQubit {
        state,
        p_succ: 2.0 * prob,
        p_herald: prob,
    }
}

/// Output for a coherent input, heralded by `detector`.
pub fn oracle_state_branch(
    alpha: Complex64,
    chan: &ChannelParams,
    qs: &QSParams,
    cutoff: usize,
    detector: Detector,
) -> Result<OracleQubit> {
    let r = Realisation::of(chan)?;
    let input = build_input(&InputKind::Coherent(alpha * r.gain), r.nbar, cutoff)?;
    Ok(qubit_of(run_circuit(&input, 0, r.t, qs, detector)?, 2, 3))
}

/// Output for a coherent input, heralded by the first detector.
pub fn oracle_state(alpha: Complex64, chan: &ChannelParams, qs: &QSParams, cutoff: usize) -> Result<OracleQubit> {
    oracle_state_branch(alpha, chan, qs, cutoff, Detector::D1)
}

/// Output for a thermal input of modulation variance `va`.
pub fn oracle_thermal_state(
    proto: &ProtocolParams,
    chan: &ChannelParams,
    qs: &QSParams,
    cutoff: usize,
) -> Result<OracleQubit> {
    let r = Realisation::of(chan)?;
    let va = proto.va() * r.gain * r.gain;
    let input = build_input(&InputKind::Thermal { va }, r.nbar, cutoff)?;
    Ok(qubit_of(run_circuit(&input, 0, r.t, qs, Detector::D1)?, 2, 3))
}

/// Output for coherent inputs `x_a + i p` averaged over Alice's Gaussian
/// p-quadrature (variance `va / 4`). `p_herald` is the unnormalised weight
/// `P^PS(x_a)`.
pub fn oracle_conditional_state(
    x_a: f64,
    proto: &ProtocolParams,
    chan: &ChannelParams,
    qs: &QSParams,
    cutoff: usize,
    p_nodes: usize,
) -> Result<OracleQubit> {
    let r = Realisation::of(chan)?;
    let spread = (proto.va() / 2.0).sqrt();
    let points: Vec<(f64, Complex64)> = gauss_hermite(p_nodes)
        .as_node_weight_pairs()
        .iter()
        .map(|&(u, w)| (w / PI.sqrt(), Complex64::new(x_a, spread * u) * r.gain))
        .collect();
    let input = build_input(&InputKind::CoherentMixture(points), r.nbar, cutoff)?;
    Ok(qubit_of(run_circuit(&input, 0, r.t, qs, Detector::D1)?, 2, 3))
}

/// Smallest cutoff that [`oracle_cm`] accepts for squeezing `delta` on `chan`.
pub fn cm_min_cutoff(delta: f64, chan: &ChannelParams) -> Result<usize> {
    let eb = EbRealisation::of(delta, chan)?;
    let lambda = (eb.delta * eb.delta - 1.0).sqrt() / eb.delta;
    Ok(super::state::tmsv_min_cutoff(lambda).max(super::state::thermal_min_cutoff(eb.nbar)))
}

/// Entanglement-based realisation of the channel.
#[derive(Debug, Clone, Copy)]
struct EbRealisation {
    delta: f64,
    t: f64,
    nbar: f64,
    /// Pure loss on Alice's arm, if any.
    alice_t: Option<f64>,
}

impl EbRealisation {
    /// At `T = 1` with receiver noise `e`, the state entering the scissor,
    /// with CM `(V, V + e, sqrt(V^2 - 1))`, is reproduced by a stronger squeezer
    /// `V' = (2V + e) / (2 - e)`, pure loss `1 - e/2` on Bob's arm and pure loss
    /// `(V - 1) / (V' - 1)` on Alice's arm.
    fn of(delta: f64, chan: &ChannelParams) -> Result<Self> {
        check(delta >= 1.0, "delta", delta, ">= 1")?;
        if chan.one_minus_t() > 0.0 || chan.eps_tm() == 0.0 {
            let r = Realisation::of(chan)?;
            return Ok(Self {
                delta,
                t: r.t,
                nbar: r.nbar,
                alice_t: None,
            });
        }
        let e = chan.eps_rec();
        check(e < 2.0, "eps_tm", chan.eps_tm(), "< 2 at T = 1")?;
        let v = 2.0 * delta * delta - 1.0;
        let v2 = (2.0 * v + e) / (2.0 - e);
        Ok(Self {
            delta: ((v2 + 1.0) / 2.0).sqrt(),
            t: 1.0 - e / 2.0,
            nbar: 0.0,
            alice_t: Some((v - 1.0) / (v2 - 1.0)),
        })
    }
}

/// Post-selected Alice-Bob covariance triplet and average success
/// probability from the entanglement-based circuit.
pub fn oracle_cm(delta: f64, chan: &ChannelParams, qs: &QSParams, cutoff: usize) -> Result<(CovarianceTriplet, f64)> {
    let eb = EbRealisation::of(delta, chan)?;
    let mut state = build_input(&InputKind::Tmsv { delta: eb.delta }, eb.nbar, cutoff)?;
    // Modes: 0 Alice, 1 signal, 2 photon, 3 vacuum, 4 noise.
    if let Some(ta) = eb.alice_t {
        state = with_extra_vacuum(&state)?;
        let loss = ModeTransform::from_splitters(state.modes(), &[BeamSplitter::with_transmittance(0, 5, ta)])?;
        state = apply_interferometer(&state, &loss)?.trace_out(&[5]);
    }
    let herald = run_circuit(&state, 1, eb.t, qs, Detector::D1)?;
    let Some(post) = herald.state else {
        return Err(Error::InvalidParameter {
            name: "herald probability",
            value: 0.0,
            expected: "> 0",
        });
    };
    // After the projection: 0 Alice, 1 Bob, 2 noise.
    let joint = post.trace_out(&[2]);
    let cm = CovarianceTriplet::new(
        joint.quadrature_moment(0, 0),
        joint.quadrature_moment(1, 1),
        joint.quadrature_moment(0, 1),
    );
    Ok((cm, 2.0 * herald.prob))
}

fn with_extra_vacuum(state: &FockState) -> Result<FockState> {
    if state.modes() + 1 > MAX_MODES {
        return Err(Error::DimensionMismatch {
            state: MAX_MODES,
            transform: state.modes() + 1,
        });
    }
    Ok(state.with_modes(state.modes() + 1))
}
