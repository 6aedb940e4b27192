//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use qscissor::fock::{cm_min_cutoff, oracle_cm, oracle_state};
use qscissor::info::{mutual_information_at_nodes, mutual_information_gaussian_qs};
use qscissor::keyrate::{crossover_distance, sweep, CrossoverScan, OptSettings, SweepRow};
use qscissor::{
    cm_triplet, gg02_key_rate, optimize_point, output_density, post_selected_state, rl_approx_success,
    success_probability, thermal_post_selected_state, ChannelParams, Complex64, Crossover, OptBounds, ProtocolParams,
    QSParams, RatePoint,
};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: u32, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let in_time = budget.is_none_or(|b| took <= b);
    let pass = out.pass && in_time;
    let timing = match budget {
        Some(b) if !in_time => format!(", over budget {:.1}s > {:.0}s", took.as_secs_f64(), b.as_secs_f64()),
        _ => format!(", {:.1}s", took.as_secs_f64()),
    };
    println!(
        "[{}] {id:>2} {name}: {}{timing}",
        if pass { "PASS" } else { "FAIL" },
        out.detail
    );
    pass
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    (x - target).abs() <= rel * target.abs()
}

fn points(rows: Vec<SweepRow>) -> Result<Vec<RatePoint>, String> {
    rows.into_iter()
        .map(|r| {
            r.result
                .map_err(|e| format!("{} km, eps {}: {e}", r.distance_km, r.eps_tm))
        })
        .collect()
}

fn gg02_anchor() -> Outcome {
    let rate = gg02_key_rate(
        &ProtocolParams::new(0.04, 1.0).unwrap(),
        &ChannelParams::new(0.0, 0.0).unwrap(),
    );
    Outcome {
        pass: (rate - 2.83e-2).abs() <= 1e-4,
        detail: format!("rate {rate:.6} (target 0.0283 +- 1e-4)"),
    }
}

fn oracle_state_grid() -> Outcome {
    let alphas = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.2, 0.0),
        Complex64::new(0.5, 0.3),
        Complex64::new(1.5, 0.0),
    ];
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    for &alpha in &alphas {
        for g in [1.0, 2.0, 4.0] {
            for t in [1.0, 0.5, 0.1] {
                for eps in [0.0, 0.05] {
                    let chan = ChannelParams::from_transmittance(t, eps).unwrap();
                    let qs = QSParams::from_gain(g).unwrap();
                    let (st, p) = post_selected_state(alpha, &chan, &qs);
                    let o = match oracle_state(alpha, &chan, &qs, 25) {
                        Ok(o) => o,
                        Err(e) => {
                            return Outcome {
                                pass: false,
                                detail: format!("oracle failed at alpha={alpha} g={g} T={t} eps={eps}: {e}"),
                            }
                        }
                    };
                    let d = (st.rho00 - o.state.rho00)
                        .abs()
                        .max((st.rho11 - o.state.rho11).abs())
                        .max((st.rho01 - o.state.rho01).norm())
                        .max((p - o.p_succ).abs());
                    worst = worst.max(d);
                    cells += 1;
                }
            }
        }
    }
    Outcome {
        pass: worst <= 1e-6,
        detail: format!("{cells} cells, max |diff| {worst:.2e} (limit 1e-6)"),
    }
}

fn oracle_cm_grid() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    let mut vacuum_worst: f64 = 0.0;
    let mut vacuum_bad = Vec::new();
    for delta in [1.0, 1.2, 1.5, 2.0] {
        for g in [1.0, 2.0] {
            for t in [1.0, 0.5] {
                for eps in [0.0, 0.05] {
                    let chan = ChannelParams::from_transmittance(t, eps).unwrap();
                    let qs = QSParams::from_gain(g).unwrap();
                    let n = cm_min_cutoff(delta, &chan).unwrap().max(25);
                    let ((cm, p), (o, op)) = match (cm_triplet(delta, &chan, &qs), oracle_cm(delta, &chan, &qs, n)) {
                        (Ok(a), Ok(b)) => (a, b),
                        (a, b) => {
                            return Outcome {
                                pass: false,
                                detail: format!("delta={delta} g={g} T={t} eps={eps}: {:?} / {:?}", a.err(), b.err()),
                            }
                        }
                    };
                    let d = (cm.a - o.a)
                        .abs()
                        .max((cm.b - o.b).abs())
                        .max((cm.c - o.c).abs())
                        .max((p - op).abs());
                    worst = worst.max(d);
                    cells += 1;
                    if delta == 1.0 {
                        let v = [cm, o]
                            .iter()
                            .map(|m| (m.a - 1.0).abs().max((m.b - 1.0).abs()).max(m.c.abs()))
                            .fold(0.0, f64::max);
                        vacuum_worst = vacuum_worst.max(v);
                        if v > 1e-9 {
                            vacuum_bad.push(format!("(g={g},T={t},eps={eps}: b={:.6})", cm.b));
                        }
                    }
                }
            }
        }
    }
    let mut detail = format!(
        "{cells} cells, max |diff| {worst:.2e} (limit 1e-6); delta=1 max |(a,b,c)-(1,1,0)| {vacuum_worst:.2e} (limit 1e-9)"
    );
    if !vacuum_bad.is_empty() {
        detail.push_str(&format!("; delta=1 off vacuum at {}", vacuum_bad.join(" ")));
    }
    Outcome {
        pass: worst <= 1e-6 && vacuum_worst <= 1e-9,
        detail,
    }
}

fn table_one(bounds: &OptBounds, settings: &OptSettings) -> Outcome {
    let targets = [
        (0.0, 0.05, 1.00),
        (100.0, 0.8, 1.36),
        (200.0, 3.5, 2.38),
        (300.0, 11.5, 4.36),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    let mut prev = (0.0, 0.0);
    for (d, va_t, g_t) in targets {
        match optimize_point(d, 0.0, 1.0, bounds, settings) {
            Ok(p) => {
                let ok = within(p.va_opt, va_t, 0.25) && within(p.gain_opt, g_t, 0.25);
                let mono = p.va_opt >= prev.0 && p.gain_opt >= prev.1;
                pass &= ok && mono;
                prev = (p.va_opt, p.gain_opt);
                parts.push(format!("{d:.0} km ({:.3}, {:.3})", p.va_opt, p.gain_opt));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{d:.0} km error {e}"));
            }
        }
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn crossovers(bounds: &OptBounds, settings: &OptSettings) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (eps, target) in [(0.0, 200.0), (0.05, 150.0)] {
        match crossover_distance(eps, 1.0, bounds, settings, &CrossoverScan::default()) {
            Ok(Crossover::Found { distance_km }) => {
                pass &= (distance_km - target).abs() <= 25.0;
                parts.push(format!("eps {eps}: {distance_km:.0} km (target {target:.0} +- 25)"));
            }
            Ok(Crossover::NotFound) => {
                pass = false;
                parts.push(format!("eps {eps}: none in 0-500 km (target {target:.0} +- 25)"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("eps {eps}: error {e}"));
            }
        }
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn noise_cutoff(bounds: &OptBounds, settings: &OptSettings) -> Outcome {
    let distances: Vec<f64> = (0..=50).map(|k| 10.0 * k as f64).collect();
    match points(sweep(&distances, &[0.06], 1.0, bounds, settings)) {
        Ok(pts) => {
            let positive: Vec<String> = pts
                .iter()
                .filter(|p| p.rate_qs > 0.0)
                .map(|p| format!("{:.0} km ({:.2e})", p.distance_km, p.rate_qs))
                .collect();
            Outcome {
                pass: positive.is_empty(),
                detail: if positive.is_empty() {
                    format!("{} points, none positive", pts.len())
                } else {
                    format!("positive at {}", positive.join(", "))
                },
            }
        }
        Err(e) => Outcome { pass: false, detail: e },
    }
}

fn success_trend(bounds: &OptBounds, settings: &OptSettings) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, target) in [(0.0, 0.50), (200.0, 0.15)] {
        match optimize_point(d, 0.0, 1.0, bounds, settings) {
            Ok(p) => {
                pass &= (p.pbar_succ - target).abs() <= 0.05;
                parts.push(format!("{d:.0} km: {:.4} (target {target} +- 0.05)", p.pbar_succ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{d:.0} km: error {e}"));
            }
        }
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn bound_respect(bounds: &OptBounds, settings: &OptSettings) -> Outcome {
    let distances: Vec<f64> = (1..=50).map(|k| 10.0 * k as f64).collect();
    let eps = [0.01, 0.02, 0.03, 0.04, 0.05];
    match points(sweep(&distances, &eps, 1.0, bounds, settings)) {
        Ok(pts) => {
            let bad: Vec<String> = pts
                .iter()
                .filter(|p| p.rate_qs > p.tl_plob)
                .map(|p| format!("{:.0} km eps {}", p.distance_km, p.eps_tm))
                .collect();
            let tightest = pts
                .iter()
                .filter(|p| p.rate_qs > 0.0)
                .map(|p| p.rate_qs / p.tl_plob)
                .fold(0.0, f64::max);
            Outcome {
                pass: bad.is_empty(),
                detail: format!(
                    "{} points, {} violations, max rate/bound {tightest:.3}{}",
                    pts.len(),
                    bad.len(),
                    if bad.is_empty() {
                        String::new()
                    } else {
                        format!(" at {}", bad.join(", "))
                    }
                ),
            }
        }
        Err(e) => Outcome { pass: false, detail: e },
    }
}

fn gaussian_overestimate(bounds: &OptBounds, settings: &OptSettings) -> Outcome {
    let distances: Vec<f64> = (0..=50).map(|k| 10.0 * k as f64).collect();
    let pts = match points(sweep(&distances, &[0.0], 1.0, bounds, settings)) {
        Ok(p) => p,
        Err(e) => return Outcome { pass: false, detail: e },
    };
    let mut bad = Vec::new();
    let mut min_gap = f64::INFINITY;
    for p in &pts {
        let proto = ProtocolParams::new(p.va_opt, 1.0).unwrap();
        let chan = ChannelParams::new(p.distance_km, 0.0).unwrap();
        let qs = QSParams::from_gain(p.gain_opt).unwrap();
        match mutual_information_gaussian_qs(&proto, &chan, &qs) {
            Ok(ig) => {
                min_gap = min_gap.min(ig - p.i_ab_exact);
                if ig < p.i_ab_exact {
                    bad.push(format!("{:.0} km", p.distance_km));
                }
            }
            Err(e) => bad.push(format!("{:.0} km ({e})", p.distance_km)),
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{} points, min I_G - I {min_gap:.3e}{}",
            pts.len(),
            if bad.is_empty() {
                String::new()
            } else {
                format!(", violated at {}", bad.join(", "))
            }
        ),
    }
}

fn property_suites() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut failures = Vec::new();

    let mut worst_state: f64 = 0.0;
    for _ in 0..10_000 {
        let chan = ChannelParams::new(rng.random_range(0.0..500.0), rng.random_range(0.0..0.1)).unwrap();
        let qs = QSParams::from_gain(rng.random_range(1.0..100.0)).unwrap();
        let alpha = Complex64::from_polar(rng.random_range(0.0..6.0), rng.random_range(0.0..std::f64::consts::TAU));
        let (st, _) = post_selected_state(alpha, &chan, &qs);
        let proto = ProtocolParams::new(rng.random_range(0.01..50.0), 1.0).unwrap();
        let (th, _) = thermal_post_selected_state(&proto, &chan, &qs);
        for s in [st, th] {
            worst_state = worst_state.max((s.trace() - 1.0).abs());
            if !s.is_physical(1e-12) {
                worst_state = f64::INFINITY;
            }
        }
    }
    if worst_state > 1e-12 {
        failures.push(format!("qubit trace/PSD {worst_state:.1e}"));
    }

    let mut worst_norm: f64 = 0.0;
    let mut worst_neg: f64 = 0.0;
    let mut worst_nodes: f64 = 0.0;
    for _ in 0..64 {
        let proto = ProtocolParams::new(rng.random_range(0.01..50.0), 1.0).unwrap();
        let chan = ChannelParams::new(rng.random_range(0.0..500.0), rng.random_range(0.0..0.1)).unwrap();
        let qs = QSParams::from_gain(rng.random_range(1.0..100.0)).unwrap();
        let d = output_density(&proto, &chan, &qs);
        let gh = qscissor::quadrature::gauss_hermite(20);
        worst_norm = worst_norm.max((gh.integrate(|u| d.pdf(u) * (u * u).exp()) - 1.0).abs());
        let a = mutual_information_at_nodes(&proto, &chan, &qs, 192, 1.0);
        let b = mutual_information_at_nodes(&proto, &chan, &qs, 384, 1.0);
        worst_neg = worst_neg.max(-a.min(b));
        worst_nodes = worst_nodes.max((a - b).abs());
    }
    if worst_norm > 1e-10 {
        failures.push(format!("density normalisation {worst_norm:.1e}"));
    }
    if worst_neg > 1e-9 {
        failures.push(format!("negative MI {worst_neg:.1e}"));
    }
    if worst_nodes > 1e-9 {
        failures.push(format!("node doubling {worst_nodes:.1e}"));
    }

    let lossless = ChannelParams::from_transmittance(1.0, 0.0).unwrap();
    let mut rl_bad = 0;
    for i in 0..=40 {
        for j in 0..=40 {
            let a = Complex64::new((2.0 * i as f64 / 40.0).sqrt(), 0.0);
            let qs = QSParams::from_gain(1.0 + 2.0 * j as f64 / 40.0).unwrap();
            if success_probability(a, &lossless, &qs) > rl_approx_success(a, &qs) + 1e-15 {
                rl_bad += 1;
            }
        }
    }
    if rl_bad > 0 {
        failures.push(format!(
            "{rl_bad} grid points with exact success above the approximation"
        ));
    }

    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!(
                "trace/PSD {worst_state:.1e} over 2x10^4 states, normalisation {worst_norm:.1e}, min MI {:.1e}, node doubling {worst_nodes:.1e}, success ordering on 41x41 grid",
                -worst_neg
            )
        } else {
            failures.join("; ")
        },
    }
}

fn main() {
    let bounds = OptBounds::default();
    let settings = OptSettings::default();
    let results = [
        run(1, "GG02 anchor", Some(Duration::from_secs(1)), gg02_anchor),
        run(
            2,
            "oracle equivalence (state)",
            Some(Duration::from_secs(120)),
            oracle_state_grid,
        ),
        run(3, "oracle equivalence (covariance)", None, oracle_cm_grid),
        run(4, "optimised parameters", Some(Duration::from_secs(1800)), || {
            table_one(&bounds, &settings)
        }),
        run(5, "crossover distances", None, || crossovers(&bounds, &settings)),
        run(6, "noise cutoff at eps_tm = 0.06", None, || {
            noise_cutoff(&bounds, &settings)
        }),
        run(7, "success probability trend", None, || {
            success_trend(&bounds, &settings)
        }),
        run(8, "rate below TL-PLOB", None, || bound_respect(&bounds, &settings)),
        run(9, "Gaussian MI overestimates", None, || {
            gaussian_overestimate(&bounds, &settings)
        }),
        run(10, "property suites", None, property_suites),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
