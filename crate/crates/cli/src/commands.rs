use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use qscissor::fock::{cm_min_cutoff, oracle_cm, oracle_state};
use qscissor::info::mutual_information_gaussian_qs;
use qscissor::keyrate::{crossover_distance, sweep, CrossoverScan, OptSettings};
use qscissor::{
    cm_triplet, mutual_information_exact, optimize_point, post_selected_state, ChannelParams, Complex64, Crossover,
    Error, OptBounds, ProtocolParams, QSParams, RatePoint,
};

use crate::args::{CrossoverArgs, Grid, MiArgs, OptimizeArgs, StateArgs, SweepArgs, VerifyArgs};
use crate::report::{num, CSV_HEADER};

/// Failure classes, one per exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::UndefinedExcessNoise { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn usage(ok: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(msg()))
    }
}

pub fn distance_grid(d_min: f64, d_max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    usage(d_min.is_finite() && d_max.is_finite() && d_min >= 0.0, || {
        format!("distance range must be finite and nonnegative, got [{d_min}, {d_max}]")
    })?;
    usage(d_min <= d_max, || format!("--d-min {d_min} exceeds --d-max {d_max}"))?;
    usage(step > 0.0 && step.is_finite(), || {
        format!("--d-step must be positive, got {step}")
    })?;
    let count = ((d_max - d_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| d_min + k as f64 * step).collect())
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let distances = distance_grid(a.d_min, a.d_max, a.d_step)?;
    usage(!a.eps.is_empty(), || "--eps needs at least one value".into())?;
    usage(a.eps.iter().all(|e| *e >= 0.0 && e.is_finite()), || {
        format!("--eps values must be finite and nonnegative, got {:?}", a.eps)
    })?;
    let bounds: OptBounds = a.bounds.into();
    bounds.validate()?;
    ProtocolParams::new(1.0, a.beta)?;

    let rows = sweep(&distances, &a.eps, a.beta, &bounds, &OptSettings::default());

    let mut buf = Vec::new();
    let mut failed = 0usize;
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut buf);
        let write = |w: &mut csv::Writer<&mut Vec<u8>>, rec: Vec<String>| {
            w.write_record(rec).map_err(|e| CliError::Io(e.to_string()))
        };
        write(&mut w, CSV_HEADER.iter().map(|s| s.to_string()).collect())?;
        for row in &rows {
            let rec = match &row.result {
                Ok(p) => csv_row(p),
                Err(e) => {
                    failed += 1;
                    let mut rec = vec![num(row.distance_km), num(row.eps_tm)];
                    rec.extend(std::iter::repeat_n(String::from("nan"), CSV_HEADER.len() - 3));
                    rec.push(format!("error: {e}"));
                    rec
                }
            };
            write(&mut w, rec)?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    }

    match &a.out {
        Some(path) => {
            let mut f = File::create(path).map_err(|e| io_err(path, e))?;
            f.write_all(&buf).map_err(|e| io_err(path, e))?;
        }
        None => out.write_all(&buf).map_err(|e| CliError::Io(e.to_string()))?,
    }
    if failed > 0 {
        return Err(CliError::Numerical(format!(
            "{failed} sweep point(s) failed; see the status column"
        )));
    }
    Ok(())
}

fn csv_row(p: &RatePoint) -> Vec<String> {
    vec![
        num(p.distance_km),
        num(p.eps_tm),
        num(p.va_opt),
        num(p.gain_opt),
        num(p.pbar_succ),
        num(p.i_ab_exact),
        num(p.chi_be_gauss),
        num(p.rate_qs),
        num(p.rate_noqs),
        num(p.tl_plob),
        p.status.as_str().to_string(),
    ]
}

pub fn cmd_optimize(a: &OptimizeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let bounds: OptBounds = a.bounds.into();
    let p = optimize_point(a.distance, a.eps, a.beta, &bounds, &OptSettings::default())?;
    let lines = [
        ("distance_km", num(p.distance_km)),
        ("eps_tm", num(p.eps_tm)),
        ("va_opt", num(p.va_opt)),
        ("gain_opt", num(p.gain_opt)),
        ("pbar_succ", num(p.pbar_succ)),
        ("i_ab_exact", num(p.i_ab_exact)),
        ("chi_be_gauss", num(p.chi_be_gauss)),
        ("rate_qs", num(p.rate_qs)),
        ("rate_qs_raw", num(p.rate_qs_raw)),
        ("rate_noqs", num(p.rate_noqs)),
        ("va_noqs", num(p.va_noqs)),
        ("tl_plob", num(p.tl_plob)),
        ("status", p.status.as_str().to_string()),
    ];
    print_pairs(out, &lines)
}

pub fn cmd_state(a: &StateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let chan = ChannelParams::with_loss(a.distance, a.loss_db_per_km, a.eps)?;
    let qs = QSParams::from_gain(a.gain)?;
    let alpha = Complex64::new(a.alpha_re, a.alpha_im);
    usage(alpha.norm().is_finite(), || {
        format!("alpha must be finite, got {alpha}")
    })?;
    let (st, p) = post_selected_state(alpha, &chan, &qs);
    print_pairs(
        out,
        &[
            ("transmittance", num(chan.transmittance())),
            ("rho00", num(st.rho00)),
            ("rho01_re", num(st.rho01.re)),
            ("rho01_im", num(st.rho01.im)),
            ("rho11", num(st.rho11)),
            ("p_succ", num(p)),
        ],
    )
}

pub fn cmd_mi(a: &MiArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let proto = ProtocolParams::new(a.va, 1.0)?;
    let chan = ChannelParams::with_loss(a.distance, a.loss_db_per_km, a.eps)?;
    let qs = QSParams::from_gain(a.gain)?;
    let exact = mutual_information_exact(&proto, &chan, &qs)?;
    let gauss = mutual_information_gaussian_qs(&proto, &chan, &qs)?;
    print_pairs(out, &[("i_exact", num(exact)), ("i_gaussian", num(gauss))])
}

pub fn cmd_crossover(a: &CrossoverArgs, out: &mut dyn Write) -> Result<(), CliError> {
    usage(a.eps >= 0.0 && a.eps.is_finite(), || {
        format!("--eps must be nonnegative, got {}", a.eps)
    })?;
    let bounds: OptBounds = a.bounds.into();
    let scan = CrossoverScan {
        d_min_km: a.d_min,
        d_max_km: a.d_max,
        coarse_step_km: a.coarse_step,
    };
    let value = match crossover_distance(a.eps, a.beta, &bounds, &OptSettings::default(), &scan)? {
        Crossover::Found { distance_km } => num(distance_km),
        Crossover::NotFound => "not-found".to_string(),
    };
    print_pairs(out, &[("eps_tm", num(a.eps)), ("crossover_km", value)])
}

/// One line of the oracle report.
struct Check {
    name: String,
    deviation: Result<f64, Error>,
}

fn state_cells(grid: Grid) -> Vec<(Complex64, f64, f64, f64)> {
    let alphas = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.2, 0.0),
        Complex64::new(0.5, 0.3),
        Complex64::new(1.5, 0.0),
    ];
    let mut cells = Vec::new();
    for &a in &alphas {
        for g in [1.0, 2.0, 4.0] {
            for t in [1.0, 0.5, 0.1] {
                for eps in [0.0, 0.05] {
                    cells.push((a, g, t, eps));
                }
            }
        }
    }
    match grid {
        Grid::Acceptance => cells,
        Grid::Quick => vec![cells[0], cells[27], cells[41], cells[65]],
    }
}

fn cm_cells(grid: Grid) -> Vec<(f64, f64, f64, f64)> {
    let mut cells = Vec::new();
    for delta in [1.0, 1.2, 1.5, 2.0] {
        for g in [1.0, 2.0] {
            for t in [1.0, 0.5] {
                for eps in [0.0, 0.05] {
                    cells.push((delta, g, t, eps));
                }
            }
        }
    }
    match grid {
        Grid::Acceptance => cells,
        Grid::Quick => vec![cells[0], cells[13], cells[31]],
    }
}

fn state_check(alpha: Complex64, g: f64, t: f64, eps: f64, cutoff: usize) -> Check {
    let name = format!("state alpha={alpha} g={g} T={t} eps_tm={eps}");
    let deviation = (|| {
        let chan = ChannelParams::from_transmittance(t, eps)?;
        let qs = QSParams::from_gain(g)?;
        let (st, p) = post_selected_state(alpha, &chan, &qs);
        let o = oracle_state(alpha, &chan, &qs, cutoff)?;
        Ok((st.rho00 - o.state.rho00)
            .abs()
            .max((st.rho11 - o.state.rho11).abs())
            .max((st.rho01 - o.state.rho01).norm())
            .max((p - o.p_succ).abs()))
    })();
    Check { name, deviation }
}

fn cm_check(delta: f64, g: f64, t: f64, eps: f64, cutoff: usize) -> Check {
    let mut name = format!("cm delta={delta} g={g} T={t} eps_tm={eps}");
    let deviation = (|| {
        let chan = ChannelParams::from_transmittance(t, eps)?;
        let qs = QSParams::from_gain(g)?;
        // The squeezed pair needs more photons than the coherent cells.
        let n = cutoff.max(cm_min_cutoff(delta, &chan)?);
        if n > cutoff {
            name.push_str(&format!(" (cutoff raised to {n})"));
        }
        let (cm, p) = cm_triplet(delta, &chan, &qs)?;
        let (o, op) = oracle_cm(delta, &chan, &qs, n)?;
        Ok((cm.a - o.a)
            .abs()
            .max((cm.b - o.b).abs())
            .max((cm.c - o.c).abs())
            .max((p - op).abs()))
    })();
    Check { name, deviation }
}

pub fn cmd_verify_oracle(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    use rayon::prelude::*;
    let tol = 1e-6;
    let mut checks: Vec<Check> = state_cells(a.grid)
        .par_iter()
        .map(|&(al, g, t, e)| state_check(al, g, t, e, a.cutoff))
        .collect();
    checks.extend(
        cm_cells(a.grid)
            .par_iter()
            .map(|&(d, g, t, e)| cm_check(d, g, t, e, a.cutoff))
            .collect::<Vec<_>>(),
    );

    let mut bad = 0usize;
    let mut worst: f64 = 0.0;
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| CliError::Io(e.to_string()));
    w(out, format!("cutoff = {}", a.cutoff))?;
    for c in &checks {
        let line = match &c.deviation {
            Ok(d) => {
                worst = worst.max(*d);
                let ok = *d <= tol;
                bad += usize::from(!ok);
                format!("{} {:.3e} {}", if ok { "ok  " } else { "FAIL" }, d, c.name)
            }
            Err(Error::Truncation { mode, tail, suggested }) => {
                bad += 1;
                format!(
                    "WARN truncation of {mode} mode (tail {tail:.1e}), use --cutoff {suggested}: {}",
                    c.name
                )
            }
            Err(e) => {
                bad += 1;
                format!("FAIL {e}: {}", c.name)
            }
        };
        w(out, line)?;
    }
    w(
        out,
        format!(
            "checks = {}, failed = {bad}, max_deviation = {worst:.3e}, tolerance = {tol:e}",
            checks.len()
        ),
    )?;
    if bad > 0 {
        return Err(CliError::Numerical(format!("{bad} oracle check(s) failed")));
    }
    Ok(())
}

fn print_pairs(out: &mut dyn Write, pairs: &[(&str, String)]) -> Result<(), CliError> {
    for (k, v) in pairs {
        writeln!(out, "{k}={v}").map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

pub fn stdout() -> io::StdoutLock<'static> {
    io::stdout().lock()
}
