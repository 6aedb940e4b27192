//! Truncated multimode Fock states stored as mixtures of sparse pure states.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::BuildHasherDefault;

use num_complex::Complex64;

use super::transform::{LadderTable, ModeTransform};
use crate::error::{Error, Result};

/// Largest number of modes a state may carry.
pub const MAX_MODES: usize = 6;
/// Probability mass allowed above the cutoff of any input mode.
pub const TAIL_BOUND: f64 = 1e-10;
/// Amplitudes whose cumulative tail is below this are never materialised.
const PRECISION_FLOOR: f64 = 1e-17;

/// Photon numbers, one entry per mode; unused trailing entries stay zero.
pub type Occupation = [u8; MAX_MODES];

/// Deterministic hashing keeps summation order, and hence results, reproducible.
type Amplitudes = HashMap<Occupation, Complex64, BuildHasherDefault<DefaultHasher>>;

/// One weighted pure state of a mixture.
#[derive(Debug, Clone, Default)]
pub struct PureComponent {
    pub weight: f64,
    pub amps: Amplitudes,
}

impl PureComponent {
    fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }
}

/// Density operator `sum_k w_k |psi_k><psi_k|` on `modes` truncated modes.
#[derive(Debug, Clone)]
pub struct FockState {
    modes: usize,
    cutoff: usize,
    components: Vec<PureComponent>,
}

/// Single-mode state fed into one input port.
#[derive(Debug, Clone, PartialEq)]
pub enum ModeInput {
    Vacuum,
    Fock(u8),
    Coherent(Complex64),
    Thermal {
        mean_photons: f64,
    },
    /// Phase-space mixture `sum w_k |alpha_k><alpha_k|`.
    CoherentMixture(Vec<(f64, Complex64)>),
}

/// Photon-number-sector expansion of one input: a list of mixture branches,
/// each a list of `(n, amplitude)`.
type Expansion = Vec<(f64, Vec<(u8, Complex64)>)>;

impl FockState {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn components(&self) -> &[PureComponent] {
        &self.components
    }

    pub fn trace(&self) -> f64 {
        self.components.iter().map(|c| c.weight * c.norm_sqr()).sum()
    }

    /// Number of stored basis amplitudes, summed over components.
    pub fn support_size(&self) -> usize {
        self.components.iter().map(|c| c.amps.len()).sum()
    }

    /// Product state of single-mode inputs, each truncated at `cutoff`.
    pub fn product(inputs: &[(&'static str, ModeInput)], cutoff: usize) -> Result<Self> {
        if inputs.len() > MAX_MODES || cutoff > u8::MAX as usize {
            return Err(Error::DimensionMismatch {
                state: MAX_MODES,
                transform: inputs.len(),
            });
        }
        let mut components = vec![PureComponent {
            weight: 1.0,
            amps: std::iter::once(([0u8; MAX_MODES], Complex64::new(1.0, 0.0))).collect(),
        }];
        for (mode, (name, input)) in inputs.iter().enumerate() {
            let expansion = expand(name, input, cutoff)?;
            let mut next = Vec::with_capacity(components.len() * expansion.len());
            for comp in &components {
                for (w, amps) in &expansion {
                    let mut out = Amplitudes::default();
                    for (occ, a) in &comp.amps {
                        for &(n, b) in amps {
                            let mut o = *occ;
                            o[mode] = n;
                            out.insert(o, a * b);
                        }
                    }
                    next.push(PureComponent {
                        weight: comp.weight * w,
                        amps: out,
                    });
                }
            }
            components = next;
        }
        Ok(Self {
            modes: inputs.len(),
            cutoff,
            components,
        })
    }

    /// Prepend a two-mode squeezed vacuum `sqrt(1 - l^2) sum l^n |n, n>` on
    /// modes `(0, 1)` in front of `rest`.
    pub fn tmsv_then(lambda: f64, rest: &[(&'static str, ModeInput)], cutoff: usize) -> Result<Self> {
        let l2 = lambda * lambda;
        let tail = l2.powi(cutoff as i32 + 1);
        if tail > TAIL_BOUND {
            return Err(Error::Truncation {
                mode: "two-mode squeezed",
                tail,
                suggested: tmsv_min_cutoff(lambda),
            });
        }
        let tail_rest = Self::product(rest, cutoff)?;
        if rest.len() + 2 > MAX_MODES {
            return Err(Error::DimensionMismatch {
                state: MAX_MODES,
                transform: rest.len() + 2,
            });
        }
        let top = cutoff.min(floor_index(|n| l2.powi(n as i32 + 1)));
        let norm = (1.0 - l2).sqrt();
        let components = tail_rest
            .components
            .into_iter()
            .map(|comp| {
                let mut out = Amplitudes::default();
                for (occ, a) in &comp.amps {
                    let mut amp = norm;
                    for n in 0..=top {
                        let mut o = [0u8; MAX_MODES];
                        o[0] = n as u8;
                        o[1] = n as u8;
                        o[2..].copy_from_slice(&occ[..MAX_MODES - 2]);
                        out.insert(o, a * amp);
                        amp *= lambda;
                    }
                }
                PureComponent {
                    weight: comp.weight,
                    amps: out,
                }
            })
            .collect();
        Ok(Self {
            modes: rest.len() + 2,
            cutoff,
            components,
        })
    }

    /// Apply the number-basis unitary of a passive mode transform.
    pub fn apply(&self, transform: &ModeTransform) -> Result<Self> {
        if transform.modes() != self.modes {
            return Err(Error::DimensionMismatch {
                state: self.modes,
                transform: transform.modes(),
            });
        }
        let mut state = self.clone();
        for bs in transform.splitters() {
            let (max_i, max_j) = state
                .components
                .iter()
                .flat_map(|c| c.amps.keys())
                .fold((0, 0), |acc, o| {
                    (acc.0.max(o[bs.i] as usize), acc.1.max(o[bs.j] as usize))
                });
            let table = LadderTable::new(bs, max_i, max_j);
            for comp in &mut state.components {
                let mut out = Amplitudes::default();
                out.reserve(comp.amps.len());
                for (occ, a) in &comp.amps {
                    let (n, l) = (occ[bs.i] as usize, occ[bs.j] as usize);
                    let m = n + l;
                    for (k, &u) in table.column(n, l).iter().enumerate() {
                        if u == 0.0 {
                            continue;
                        }
                        let mut o = *occ;
                        o[bs.i] = k as u8;
                        o[bs.j] = (m - k) as u8;
                        *out.entry(o).or_default() += a * u;
                    }
                }
                comp.amps = out;
            }
        }
        Ok(state)
    }

    /// Keep only basis states accepted by `keep`.
    pub fn filter<F: Fn(&Occupation) -> bool>(&self, keep: F) -> Self {
        let components = self
            .components
            .iter()
            .map(|c| PureComponent {
                weight: c.weight,
                amps: c.amps.iter().filter(|(o, _)| keep(o)).map(|(o, a)| (*o, *a)).collect(),
            })
            .filter(|c| !c.amps.is_empty())
            .collect();
        Self {
            modes: self.modes,
            cutoff: self.cutoff,
            components,
        }
    }

    /// Partial trace over `traced` modes; the remaining modes keep their order.
    pub fn trace_out(&self, traced: &[usize]) -> Self {
        let kept: Vec<usize> = (0..self.modes).filter(|m| !traced.contains(m)).collect();
        let mut components = Vec::new();
        for comp in &self.components {
            let mut groups: HashMap<Occupation, Amplitudes, BuildHasherDefault<DefaultHasher>> = HashMap::default();
            for (occ, a) in &comp.amps {
                let mut env = [0u8; MAX_MODES];
                for (slot, &m) in traced.iter().enumerate() {
                    env[slot] = occ[m];
                }
                let mut sys = [0u8; MAX_MODES];
                for (slot, &m) in kept.iter().enumerate() {
                    sys[slot] = occ[m];
                }
                *groups.entry(env).or_default().entry(sys).or_default() += *a;
            }
            let mut keys: Vec<Occupation> = groups.keys().copied().collect();
            keys.sort_unstable();
            for k in keys {
                components.push(PureComponent {
                    weight: comp.weight,
                    amps: groups.remove(&k).unwrap_or_default(),
                });
            }
        }
        Self {
            modes: kept.len(),
            cutoff: self.cutoff,
            components,
        }
    }

    /// Same state with `modes` modes, the new trailing ones in vacuum.
    pub fn with_modes(&self, modes: usize) -> Self {
        Self {
            modes: modes.max(self.modes).min(MAX_MODES),
            ..self.clone()
        }
    }

    /// Multiply every weight by `factor`.
    pub fn scaled(mut self, factor: f64) -> Self {
        for c in &mut self.components {
            c.weight *= factor;
        }
        self
    }

    /// `<n|rho|m>` of a single-mode state, for `n, m < dim`.
    pub fn single_mode_matrix(&self, dim: usize) -> Vec<Vec<Complex64>> {
        let mut rho = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for comp in &self.components {
            for (o1, a1) in &comp.amps {
                for (o2, a2) in &comp.amps {
                    let (n, m) = (o1[0] as usize, o2[0] as usize);
                    if n < dim && m < dim {
                        rho[n][m] += comp.weight * a1 * a2.conj();
                    }
                }
            }
        }
        rho
    }

    /// `Re <X_p X_q>` with `X = a + a^dag`.
    pub fn quadrature_moment(&self, p: usize, q: usize) -> f64 {
        self.components
            .iter()
            .map(|comp| {
                let xp = apply_x(&comp.amps, p);
                let xq = if p == q { xp.clone() } else { apply_x(&comp.amps, q) };
                let dot: Complex64 = xp.iter().filter_map(|(o, a)| xq.get(o).map(|b| a.conj() * b)).sum();
                comp.weight * dot.re
            })
            .sum()
    }

    /// `<a_p^dag a_p>`.
    pub fn mean_photons(&self, p: usize) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * c.amps.iter().map(|(o, a)| o[p] as f64 * a.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// `<a_p>`.
    pub fn mean_field(&self, p: usize) -> Complex64 {
        self.components
            .iter()
            .map(|c| {
                let s: Complex64 = c
                    .amps
                    .iter()
                    .filter(|(o, _)| o[p] > 0)
                    .filter_map(|(o, a)| {
                        let mut lower = *o;
                        lower[p] -= 1;
                        c.amps.get(&lower).map(|b| b.conj() * a * (o[p] as f64).sqrt())
                    })
                    .sum();
                s * c.weight
            })
            .sum()
    }
}

fn apply_x(amps: &Amplitudes, p: usize) -> Amplitudes {
    let mut out = Amplitudes::default();
    for (occ, a) in amps {
        let n = occ[p] as usize;
        if n > 0 {
            let mut o = *occ;
            o[p] -= 1;
            *out.entry(o).or_default() += a * (n as f64).sqrt();
        }
        let mut o = *occ;
        o[p] += 1;
        *out.entry(o).or_default() += a * ((n + 1) as f64).sqrt();
    }
    out
}

/// Smallest `n` whose tail `tail(n)` drops below the precision floor.
fn floor_index<F: Fn(usize) -> f64>(tail: F) -> usize {
    (0..=u8::MAX as usize)
        .find(|&n| tail(n) < PRECISION_FLOOR)
        .unwrap_or(u8::MAX as usize)
}

fn min_index<F: Fn(usize) -> f64>(tail: F) -> usize {
    (0..=u8::MAX as usize)
        .find(|&n| tail(n) <= TAIL_BOUND)
        .unwrap_or(u8::MAX as usize + 1)
}

/// Poisson mass above `n` for mean `mean`, summed upward from `n + 1`.
pub fn poisson_tail(mean: f64, n: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let k0 = (n + 1) as f64;
    let mut term = (-mean + k0 * mean.ln() - ln_factorial(n + 1)).exp();
    let mut sum: f64 = 0.0;
    let mut k = k0;
    while term > 1e-30 * sum.max(1e-300) || k < mean {
        sum += term;
        k += 1.0;
        term *= mean / k;
        if k > k0 + 10_000.0 {
            break;
        }
    }
    sum
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

pub fn thermal_tail(mean: f64, n: usize) -> f64 {
    (mean / (1.0 + mean)).powi(n as i32 + 1)
}

pub fn coherent_min_cutoff(mean: f64) -> usize {
    min_index(|n| poisson_tail(mean, n))
}

pub fn thermal_min_cutoff(mean: f64) -> usize {
    min_index(|n| thermal_tail(mean, n))
}

/// Cutoff needed by a squeezed vacuum of parameter `lambda`.
pub fn tmsv_min_cutoff(lambda: f64) -> usize {
    min_index(|n| (lambda * lambda).powi(n as i32 + 1))
}

fn coherent_amplitudes(alpha: Complex64, top: usize) -> Vec<(u8, Complex64)> {
    let mut out = Vec::with_capacity(top + 1);
    let mut amp = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..=top {
        out.push((n as u8, amp));
        amp = amp * alpha / ((n + 1) as f64).sqrt();
    }
    out
}

fn expand(name: &'static str, input: &ModeInput, cutoff: usize) -> Result<Expansion> {
    let violation = |tail: f64, suggested: usize| Error::Truncation {
        mode: name,
        tail,
        suggested,
    };
    let one = Complex64::new(1.0, 0.0);
    Ok(match input {
        ModeInput::Vacuum => vec![(1.0, vec![(0, one)])],
        ModeInput::Fock(n) => {
            if *n as usize > cutoff {
                return Err(violation(1.0, *n as usize));
            }
            vec![(1.0, vec![(*n, one)])]
        }
        ModeInput::Coherent(alpha) => {
            let mean = alpha.norm_sqr();
            let tail = poisson_tail(mean, cutoff);
            if tail > TAIL_BOUND {
                return Err(violation(tail, coherent_min_cutoff(mean)));
            }
            let top = cutoff.min(floor_index(|n| poisson_tail(mean, n)));
            vec![(1.0, coherent_amplitudes(*alpha, top))]
        }
        ModeInput::Thermal { mean_photons } => {
            let mean = *mean_photons;
            let tail = thermal_tail(mean, cutoff);
            if tail > TAIL_BOUND {
                return Err(violation(tail, thermal_min_cutoff(mean)));
            }
            let top = cutoff.min(floor_index(|n| thermal_tail(mean, n)));
            let ratio = mean / (1.0 + mean);
            (0..=top)
                .map(|n| (ratio.powi(n as i32) / (1.0 + mean), vec![(n as u8, one)]))
                .collect()
        }
        ModeInput::CoherentMixture(points) => {
            let tail: f64 = points.iter().map(|(w, a)| w * poisson_tail(a.norm_sqr(), cutoff)).sum();
            if tail > TAIL_BOUND {
                let suggested = (cutoff..=u8::MAX as usize)
                    .find(|&n| {
                        points
                            .iter()
                            .map(|(w, a)| w * poisson_tail(a.norm_sqr(), n))
                            .sum::<f64>()
                            <= TAIL_BOUND
                    })
                    .unwrap_or(u8::MAX as usize + 1);
                return Err(violation(tail, suggested));
            }
            points
                .iter()
                .map(|&(w, a)| {
                    let top = cutoff.min(floor_index(|n| poisson_tail(a.norm_sqr(), n)));
                    (w, coherent_amplitudes(a, top))
                })
                .collect()
        }
    })
}
