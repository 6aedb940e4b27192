use qscissor::fock::{
    oracle_cm, oracle_conditional_state, oracle_state, oracle_state_branch, oracle_thermal_state, Detector,
};
use qscissor::{
    cm_triplet, conditional_state, post_selected_state, thermal_post_selected_state, ChannelParams, Complex64,
    ProtocolParams, QSParams, QubitState,
};

fn chan_t(t: f64, eps: f64) -> ChannelParams {
    ChannelParams::from_transmittance(t, eps).unwrap()
}

fn max_diff(a: &QubitState, b: &QubitState) -> f64 {
    (a.rho00 - b.rho00)
        .abs()
        .max((a.rho11 - b.rho11).abs())
        .max((a.rho01 - b.rho01).norm())
}

#[test]
fn coherent_grid_matches_closed_form() {
    let alphas = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.2, 0.0),
        Complex64::new(0.5, 0.3),
        Complex64::new(1.5, 0.0),
    ];
    for &alpha in &alphas {
        for g in [1.0, 2.0, 4.0] {
            for t in [1.0, 0.5, 0.1] {
                for eps in [0.0, 0.05] {
                    let chan = chan_t(t, eps);
                    let qs = QSParams::from_gain(g).unwrap();
                    let (st, p) = post_selected_state(alpha, &chan, &qs);
                    let o = oracle_state(alpha, &chan, &qs, 25).unwrap();
                    let d = max_diff(&st, &o.state).max((p - o.p_succ).abs());
                    assert!(d < 1e-6, "alpha={alpha} g={g} t={t} eps={eps}: {d:e}");
                }
            }
        }
    }
}

#[test]
fn second_detector_is_the_mirrored_input() {
    let chan = chan_t(0.5, 0.05);
    let qs = QSParams::from_gain(2.0).unwrap();
    let alpha = Complex64::new(0.5, 0.3);
    let d2 = oracle_state_branch(alpha, &chan, &qs, 25, Detector::D2).unwrap();
    let (mirrored, p) = post_selected_state(-alpha, &chan, &qs);
    assert!(max_diff(&d2.state, &mirrored) < 1e-6);
    assert!((d2.p_succ - p).abs() < 1e-6);
}

#[test]
fn thermal_input_matches_closed_form() {
    for (va, g, t, eps) in [(0.8, 1.36, 0.3, 0.0), (2.0, 2.0, 0.5, 0.05), (0.3, 1.0, 1.0, 0.05)] {
        let proto = ProtocolParams::new(va, 1.0).unwrap();
        let chan = chan_t(t, eps);
        let qs = QSParams::from_gain(g).unwrap();
        let (st, p) = thermal_post_selected_state(&proto, &chan, &qs);
        let o = oracle_thermal_state(&proto, &chan, &qs, 40).unwrap();
        let d = max_diff(&st, &o.state).max((p - o.p_succ).abs());
        assert!(d < 1e-6, "va={va} g={g} t={t} eps={eps}: {d:e}");
    }
}

#[test]
fn conditional_state_matches_p_average() {
    for (x, va, g, t, eps) in [
        (0.0, 0.8, 1.36, 0.5, 0.0),
        (0.7, 1.5, 2.0, 0.5, 0.05),
        (-0.4, 0.5, 1.5, 1.0, 0.02),
    ] {
        let proto = ProtocolParams::new(va, 1.0).unwrap();
        let chan = chan_t(t, eps);
        let qs = QSParams::from_gain(g).unwrap();
        let (st, w) = conditional_state(x, &proto, &chan, &qs);
        let o = oracle_conditional_state(x, &proto, &chan, &qs, 30, 40).unwrap();
        assert!(max_diff(&st, &o.state) < 1e-6, "x={x}: {:?} vs {:?}", st, o.state);
        assert!(
            (w - o.p_herald).abs() < 1e-6 * w.max(1.0),
            "x={x}: {w} vs {}",
            o.p_herald
        );
    }
}

#[test]
fn covariance_matches_on_noiseless_cells() {
    for delta in [1.2, 1.5, 2.0] {
        for g in [1.0, 2.0] {
            for t in [1.0, 0.5] {
                let chan = chan_t(t, 0.0);
                let qs = QSParams::from_gain(g).unwrap();
                let (cm, pbar) = cm_triplet(delta, &chan, &qs).unwrap();
                let n = qscissor::fock::cm_min_cutoff(delta, &chan).unwrap().max(25);
                let (o, op) = oracle_cm(delta, &chan, &qs, n).unwrap();
                let d = (cm.a - o.a)
                    .abs()
                    .max((cm.b - o.b).abs())
                    .max((cm.c - o.c).abs())
                    .max((pbar - op).abs());
                assert!(d < 1e-6, "delta={delta} g={g} t={t}: {cm:?} {o:?} {pbar} {op}");
            }
        }
    }
}

#[test]
fn covariance_matches_with_noise() {
    for delta in [1.2, 2.0] {
        for t in [1.0, 0.5] {
            let chan = chan_t(t, 0.05);
            let qs = QSParams::from_gain(2.0).unwrap();
            let (cm, pbar) = cm_triplet(delta, &chan, &qs).unwrap();
            let n = qscissor::fock::cm_min_cutoff(delta, &chan).unwrap().max(25);
            let (o, op) = oracle_cm(delta, &chan, &qs, n).unwrap();
            let d = (cm.a - o.a)
                .abs()
                .max((cm.b - o.b).abs())
                .max((cm.c - o.c).abs())
                .max((pbar - op).abs());
            assert!(d < 1e-6, "delta={delta} t={t}: {cm:?} {o:?} {pbar} {op}");
        }
    }
}

#[test]
fn doubling_the_cutoff_changes_nothing() {
    let alphas = [
        Complex64::new(0.2, 0.0),
        Complex64::new(0.5, 0.3),
        Complex64::new(1.5, 0.0),
    ];
    for &alpha in &alphas {
        for g in [1.0, 4.0] {
            for t in [1.0, 0.1] {
                for eps in [0.0, 0.05] {
                    let chan = chan_t(t, eps);
                    let qs = QSParams::from_gain(g).unwrap();
                    let a = oracle_state(alpha, &chan, &qs, 25).unwrap();
                    let b = oracle_state(alpha, &chan, &qs, 50).unwrap();
                    let d = max_diff(&a.state, &b.state).max((a.p_succ - b.p_succ).abs());
                    assert!(d < 1e-8, "alpha={alpha} g={g} t={t} eps={eps}: {d:e}");
                }
            }
        }
    }
    let chan = chan_t(0.5, 0.05);
    let qs = QSParams::from_gain(2.0).unwrap();
    let n = qscissor::fock::cm_min_cutoff(1.5, &chan).unwrap().max(25);
    let (a, pa) = oracle_cm(1.5, &chan, &qs, n).unwrap();
    let (b, pb) = oracle_cm(1.5, &chan, &qs, 2 * n).unwrap();
    let d = (a.a - b.a)
        .abs()
        .max((a.b - b.b).abs())
        .max((a.c - b.c).abs())
        .max((pa - pb).abs());
    assert!(d < 1e-8, "{d:e}");
}

#[test]
fn interferometer_preserves_trace_and_heralds_at_most_half() {
    use qscissor::fock::{apply_interferometer, build_input, project_success, InputKind, ModeTransform};
    let input = build_input(&InputKind::Coherent(Complex64::new(0.5, 0.0)), 0.025, 20).unwrap();
    let gamma = ModeTransform::scissor_circuit(4, 0, 0.5, 0.2).unwrap();
    let out = apply_interferometer(&input, &gamma).unwrap();
    assert!((out.trace() - input.trace()).abs() < 1e-10);
    let h = project_success(&out, 0, 1).unwrap();
    assert!(h.prob > 0.0 && h.prob <= 0.5);
}

#[test]
fn loss_row_scales_the_mean_field() {
    use qscissor::fock::{apply_interferometer, build_input, InputKind, ModeTransform};
    let alpha = Complex64::new(0.7, -0.4);
    let t: f64 = 0.3;
    let input = build_input(&InputKind::Coherent(alpha), 0.0, 25).unwrap();
    // Channel splitter alone: signal mode 0 against the noise mode 3.
    let loss = ModeTransform::from_splitters(4, &[qscissor::fock::BeamSplitter::with_transmittance(0, 3, t)]).unwrap();
    let out = apply_interferometer(&input, &loss).unwrap();
    assert!((out.mean_field(0) - alpha * t.sqrt()).norm() < 1e-9);
}

#[test]
fn project_success_edge_cases() {
    use qscissor::fock::{project_success, FockState, ModeInput};
    let vac = FockState::product(
        &[
            ("a", ModeInput::Vacuum),
            ("b", ModeInput::Vacuum),
            ("c", ModeInput::Fock(1)),
        ],
        5,
    )
    .unwrap();
    let h = project_success(&vac, 0, 1).unwrap();
    assert_eq!(h.prob, 0.0);
    assert!(h.state.is_none());
    let one = FockState::product(
        &[
            ("a", ModeInput::Fock(1)),
            ("b", ModeInput::Vacuum),
            ("c", ModeInput::Fock(1)),
        ],
        5,
    )
    .unwrap();
    let h = project_success(&one, 0, 1).unwrap();
    assert!((h.prob - 1.0).abs() < 1e-15);
    assert!((h.state.unwrap().mean_photons(0) - 1.0).abs() < 1e-15);
    assert!(project_success(&one, 0, 0).is_err());
}

#[test]
fn uncorrelated_pair_gives_vacuum_covariance() {
    for (t, g) in [(1.0, 1.0), (0.5, 2.0)] {
        let chan = chan_t(t, 0.0);
        let qs = QSParams::from_gain(g).unwrap();
        let (o, _) = oracle_cm(1.0, &chan, &qs, 25).unwrap();
        assert!(
            (o.a - 1.0).abs() < 1e-9 && (o.b - 1.0).abs() < 1e-9 && o.c.abs() < 1e-9,
            "{o:?}"
        );
    }
}
