//! Secret-key rates, per-distance optimisation, sweeps and crossover search.

use rayon::prelude::*;

use crate::error::{check, Result};
use crate::gaussian::{cm_triplet, holevo_bound, noqs_triplet, tl_plob_bound};
use crate::info::{mutual_information_at_nodes, mutual_information_exact, DEFAULT_NODES};
use crate::optimize::{golden_section_max, log_space, nelder_mead_max, SimplexOptions};
use crate::{ChannelParams, CovarianceTriplet, ProtocolParams, QSParams};

/// Box for the `(V_A, g)` search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptBounds {
    pub va_min: f64,
    pub va_max: f64,
    pub gain_min: f64,
    pub gain_max: f64,
}

impl Default for OptBounds {
    fn default() -> Self {
        Self {
            va_min: 0.01,
            va_max: 50.0,
            gain_min: 1.0,
            gain_max: 100.0,
        }
    }
}

impl OptBounds {
    pub fn validate(&self) -> Result<()> {
        check(
            self.va_min > 0.0 && self.va_min < self.va_max && self.va_max.is_finite(),
            "va range",
            self.va_min,
            "0 < va_min < va_max < inf",
        )?;
        check(
            self.gain_min >= 1.0 && self.gain_min < self.gain_max && self.gain_max.is_finite(),
            "gain range",
            self.gain_min,
            "1 <= gain_min < gain_max < inf",
        )
    }
}

/// Resolution of the optimiser.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptSettings {
    pub grid_va: usize,
    pub grid_gain: usize,
    /// Outer quadrature size used while searching; the reported point is
    /// always re-evaluated with node doubling.
    pub search_nodes: usize,
    pub simplex: SimplexOptions,
}

impl Default for OptSettings {
    fn default() -> Self {
        Self {
            grid_va: 16,
            grid_gain: 16,
            search_nodes: DEFAULT_NODES,
            simplex: SimplexOptions::default(),
        }
    }
}

/// Scissor-assisted key rate with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsRate {
    /// `max(raw, 0)`.
    pub rate: f64,
    /// `P̄ (beta I - chi)` before clamping.
    pub raw: f64,
    pub i_ab: f64,
    pub chi: f64,
    pub pbar_succ: f64,
    pub cm: CovarianceTriplet,
}

/// Key rate per channel use with the scissor in front of Bob's homodyne.
pub fn qs_key_rate(proto: &ProtocolParams, chan: &ChannelParams, qs: &QSParams) -> Result<QsRate> {
    let i_ab = mutual_information_exact(proto, chan, qs)?;
    assemble(proto, chan, qs, i_ab)
}

fn assemble(proto: &ProtocolParams, chan: &ChannelParams, qs: &QSParams, i_ab: f64) -> Result<QsRate> {
    let (cm, pbar) = cm_triplet(proto.delta(), chan, qs)?;
    let chi = holevo_bound(&cm)?;
    let raw = pbar * (proto.beta() * i_ab - chi);
    Ok(QsRate {
        rate: raw.max(0.0),
        raw,
        i_ab,
        chi,
        pbar_succ: pbar,
        cm,
    })
}

/// Raw rate with a fixed outer quadrature; the optimiser's objective.
fn qs_raw_fast(va: f64, g: f64, beta: f64, chan: &ChannelParams, nodes: usize) -> f64 {
    let (Ok(proto), Ok(qs)) = (ProtocolParams::new(va, beta), QSParams::from_gain(g)) else {
        return f64::NEG_INFINITY;
    };
    let i_ab = mutual_information_at_nodes(&proto, chan, &qs, nodes, 1.0);
    match assemble(&proto, chan, &qs, i_ab) {
        Ok(r) if r.raw.is_finite() => r.raw,
        _ => f64::NEG_INFINITY,
    }
}

/// Unclamped baseline rate `beta I_AB - chi_BE` without the scissor.
pub fn gg02_key_rate_raw(proto: &ProtocolParams, chan: &ChannelParams) -> f64 {
    let t = chan.transmittance();
    let i_ab = 0.5 * (t * proto.va() / (1.0 + chan.eps_rec())).ln_1p() / std::f64::consts::LN_2;
    match holevo_bound(&noqs_triplet(proto, chan)) {
        Ok(chi) => proto.beta() * i_ab - chi,
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Baseline Gaussian-modulated coherent-state rate, clamped at zero.
pub fn gg02_key_rate(proto: &ProtocolParams, chan: &ChannelParams) -> f64 {
    gg02_key_rate_raw(proto, chan).max(0.0)
}

/// Baseline rate maximised over `V_A` within the bounds: `(va_opt, raw rate)`.
pub fn optimize_gg02(chan: &ChannelParams, beta: f64, bounds: &OptBounds) -> (f64, f64) {
    let raw = |ln_va: f64| {
        ProtocolParams::new(ln_va.exp(), beta)
            .map(|p| gg02_key_rate_raw(&p, chan))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let grid = log_space(bounds.va_min, bounds.va_max, 64);
    let (best, _) = grid.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &va)| {
        let v = raw(va.ln());
        if v > acc.1 {
            (i, v)
        } else {
            acc
        }
    });
    let lo = grid[best.saturating_sub(1)].ln();
    let hi = grid[(best + 1).min(grid.len() - 1)].ln();
    let (x, v) = golden_section_max(raw, lo, hi, 1e-7);
    (x.exp(), v)
}

/// Outcome classification for a sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateStatus {
    Ok,
    NoPositiveRate,
}

impl RateStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RateStatus::Ok => "ok",
            RateStatus::NoPositiveRate => "no-positive-rate",
        }
    }
}

/// One optimised point of the rate-versus-distance curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub distance_km: f64,
    pub eps_tm: f64,
    pub va_opt: f64,
    pub gain_opt: f64,
    pub pbar_succ: f64,
    pub i_ab_exact: f64,
    pub chi_be_gauss: f64,
    pub rate_qs: f64,
    /// Unclamped scissor rate at the reported parameters.
    pub rate_qs_raw: f64,
    pub rate_noqs: f64,
    pub va_noqs: f64,
    /// Infinite on a lossless link.
    pub tl_plob: f64,
    pub status: RateStatus,
}

/// Optimise the scissor rate over `(V_A, g)` at one distance.
///
/// A log-spaced grid is scanned first (gain-major, so ties keep the smaller
/// gain and then the smaller `V_A`), then refined by a simplex in log space.
pub fn optimize_point(
    distance_km: f64,
    eps_tm: f64,
    beta: f64,
    bounds: &OptBounds,
    settings: &OptSettings,
) -> Result<RatePoint> {
    bounds.validate()?;
    check(
        settings.grid_va >= 2 && settings.grid_gain >= 2,
        "grid size",
        settings.grid_va.min(settings.grid_gain) as f64,
        ">= 2 per axis",
    )?;
    ProtocolParams::new(1.0, beta)?;
    let chan = ChannelParams::new(distance_km, eps_tm)?;
    let nodes = settings.search_nodes;
    let vas = log_space(bounds.va_min, bounds.va_max, settings.grid_va);
    let gains = log_space(bounds.gain_min, bounds.gain_max, settings.grid_gain);

    let mut grid_best = (vas[0], gains[0], f64::NEG_INFINITY);
    for &g in &gains {
        for &va in &vas {
            let v = qs_raw_fast(va, g, beta, &chan, nodes);
            if v > grid_best.2 {
                grid_best = (va, g, v);
            }
        }
    }

    let lower = [bounds.va_min.ln(), bounds.gain_min.ln()];
    let upper = [bounds.va_max.ln(), bounds.gain_max.ln()];
    let step = [
        (upper[0] - lower[0]) / (settings.grid_va - 1) as f64,
        (upper[1] - lower[1]) / (settings.grid_gain - 1) as f64,
    ];
    let (x, v) = nelder_mead_max(
        |x| qs_raw_fast(x[0].exp(), x[1].exp(), beta, &chan, nodes),
        &[grid_best.0.ln(), grid_best.1.ln()],
        &step,
        &lower,
        &upper,
        settings.simplex,
    );
    let (va, g) = if v > grid_best.2 {
        (x[0].exp(), x[1].exp())
    } else {
        (grid_best.0, grid_best.1)
    };

    let proto = ProtocolParams::new(va, beta)?;
    let qs = QSParams::from_gain(g)?;
    let r = qs_key_rate(&proto, &chan, &qs)?;
    let (va_noqs, noqs_raw) = optimize_gg02(&chan, beta, bounds);
    let tl_plob = if chan.one_minus_t() > 0.0 {
        tl_plob_bound(&chan)?
    } else {
        f64::INFINITY
    };
    let status = if r.raw > 0.0 {
        RateStatus::Ok
    } else {
        RateStatus::NoPositiveRate
    };
    let (va_opt, gain_opt) = match status {
        RateStatus::Ok => (va, g),
        RateStatus::NoPositiveRate => (grid_best.0, grid_best.1),
    };
    Ok(RatePoint {
        distance_km,
        eps_tm,
        va_opt,
        gain_opt,
        pbar_succ: r.pbar_succ,
        i_ab_exact: r.i_ab,
        chi_be_gauss: r.chi,
        rate_qs: r.rate,
        rate_qs_raw: r.raw,
        rate_noqs: noqs_raw.max(0.0),
        va_noqs,
        tl_plob,
        status,
    })
}

/// A sweep row: the grid coordinates and the optimisation outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub distance_km: f64,
    pub eps_tm: f64,
    pub result: Result<RatePoint>,
}

/// Optimise every `(eps_tm, distance)` pair in parallel; rows come back
/// sorted by noise, then distance, independent of scheduling.
pub fn sweep(
    distances: &[f64],
    eps_list: &[f64],
    beta: f64,
    bounds: &OptBounds,
    settings: &OptSettings,
) -> Vec<SweepRow> {
    let mut eps_sorted = eps_list.to_vec();
    eps_sorted.sort_by(f64::total_cmp);
    let mut dist_sorted = distances.to_vec();
    dist_sorted.sort_by(f64::total_cmp);
    let jobs: Vec<(f64, f64)> = eps_sorted
        .iter()
        .flat_map(|&e| dist_sorted.iter().map(move |&d| (e, d)))
        .collect();
    jobs.par_iter()
        .map(|&(eps_tm, distance_km)| SweepRow {
            distance_km,
            eps_tm,
            result: optimize_point(distance_km, eps_tm, beta, bounds, settings),
        })
        .collect()
}

/// Result of a crossover search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossover {
    Found { distance_km: f64 },
    NotFound,
}

/// Scan range and step for [`crossover_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverScan {
    pub d_min_km: f64,
    pub d_max_km: f64,
    pub coarse_step_km: f64,
}

impl Default for CrossoverScan {
    fn default() -> Self {
        Self {
            d_min_km: 0.0,
            d_max_km: 500.0,
            coarse_step_km: 25.0,
        }
    }
}

/// Whether the optimised scissor curve is at or above the baseline here.
pub fn qs_beats_baseline(point: &RatePoint) -> bool {
    point.rate_qs > 0.0 && (point.rate_noqs == 0.0 || point.rate_qs >= point.rate_noqs)
}

/// Smallest distance (to 1 km) where the optimised scissor rate reaches the
/// optimised baseline, or stays positive after the baseline has died.
pub fn crossover_distance(
    eps_tm: f64,
    beta: f64,
    bounds: &OptBounds,
    settings: &OptSettings,
    scan: &CrossoverScan,
) -> Result<Crossover> {
    check(
        scan.coarse_step_km >= 1.0,
        "coarse_step_km",
        scan.coarse_step_km,
        ">= 1",
    )?;
    check(scan.d_min_km <= scan.d_max_km, "d_max_km", scan.d_max_km, ">= d_min_km")?;
    let wins = |d: f64| optimize_point(d, eps_tm, beta, bounds, settings).map(|p| qs_beats_baseline(&p));

    let mut prev = None;
    let mut d = scan.d_min_km;
    while d <= scan.d_max_km + 1e-9 {
        if wins(d)? {
            let Some(mut lo): Option<f64> = prev else {
                return Ok(Crossover::Found { distance_km: d });
            };
            let mut hi = d;
            while hi - lo > 1.0 {
                let mid = ((lo + hi) / 2.0).round();
                if mid <= lo || mid >= hi {
                    break;
                }
                if wins(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Crossover::Found { distance_km: hi });
        }
        prev = Some(d);
        d += scan.coarse_step_km;
    }
    Ok(Crossover::NotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gg02_lossless_is_shannon() {
        let chan = ChannelParams::new(0.0, 0.0).unwrap();
        for va in [0.04, 1.0, 7.5] {
            let p = ProtocolParams::new(va, 1.0).unwrap();
            assert_relative_eq!(
                gg02_key_rate(&p, &chan),
                0.5 * (1.0f64 + va).log2(),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn bounds_validation() {
        assert!(OptBounds::default().validate().is_ok());
        let bad = OptBounds {
            gain_min: 0.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn vanishing_modulation_gives_vanishing_rate() {
        let chan = ChannelParams::new(50.0, 0.0).unwrap();
        let p = ProtocolParams::new(1e-6, 1.0).unwrap();
        let q = QSParams::from_gain(1.5).unwrap();
        let r = qs_key_rate(&p, &chan, &q).unwrap();
        assert!(r.rate < 1e-6);
    }
}
