//! Protocol-level invariants over grids of anchor overlaps.

use signalscope::hilbert::{binary_entropy, PureState};
use signalscope::machines::{cone_geometry, machine_by_fidelity_excess, qubit_pair_from_overlap, super_machine, ConeGeometry, MachineKind};
use signalscope::signaling::{
    bound_from_entropy, build_probe, entanglement_entropies, run_protocol, sweep, DEFAULT_THRESHOLD,
};

fn grid(n: usize) -> Vec<f64> {
    (1..n).map(|i| i as f64 / n as f64).collect()
}

fn geometry(s: f64, kind: MachineKind) -> ConeGeometry {
    cone_geometry(&qubit_pair_from_overlap(s).unwrap(), kind, &PureState::zero()).unwrap()
}

fn interior(g: &ConeGeometry, samples: usize) -> Vec<f64> {
    (1..=samples)
        .map(|k| g.theta_q + (g.theta_target - g.theta_q) * k as f64 / (samples + 1) as f64)
        .collect()
}

#[test]
fn super_cloners_shrink_output_overlap_below_input_overlap() {
    for s in grid(25) {
        let g = geometry(s, MachineKind::Clone);
        for theta in interior(&g, 5).into_iter().chain([g.theta_target]) {
            let m = super_machine(&g, theta).unwrap();
            assert!(m.fidelity > g.optimal_fidelity());
            assert!(m.output_overlap() < s, "s={s} θ'={theta}");
        }
    }
}

#[test]
fn fidelity_and_overlap_are_monotone_in_angle() {
    for kind in [MachineKind::Clone, MachineKind::Delete] {
        for s in grid(20) {
            let g = geometry(s, kind);
            let machines: Vec<_> = std::iter::once(g.theta_q)
                .chain(interior(&g, 8))
                .chain([g.theta_target])
                .map(|t| super_machine(&g, t).unwrap())
                .collect();
            for w in machines.windows(2) {
                assert!(w[1].fidelity > w[0].fidelity, "{kind} s={s}");
                match kind {
                    MachineKind::Clone => assert!(w[1].output_overlap() < w[0].output_overlap()),
                    MachineKind::Delete => assert!(w[1].output_overlap() > w[0].output_overlap()),
                }
            }
        }
    }
}

#[test]
fn entropy_moves_up_for_cloning_and_down_for_deleting() {
    for kind in [MachineKind::Clone, MachineKind::Delete] {
        for s in grid(20) {
            let g = geometry(s, kind);
            let probe = build_probe(&qubit_pair_from_overlap(s).unwrap(), kind, &PureState::zero()).unwrap();
            let boundary = run_protocol(&probe, &super_machine(&g, g.theta_q).unwrap(), DEFAULT_THRESHOLD).unwrap();
            assert!(boundary.delta.abs() <= 1e-10);
            for theta in interior(&g, 6) {
                let r = run_protocol(&probe, &super_machine(&g, theta).unwrap(), DEFAULT_THRESHOLD).unwrap();
                match kind {
                    MachineKind::Clone => assert!(r.delta > 0.0, "s={s}"),
                    MachineKind::Delete => assert!(r.delta < 0.0, "s={s}"),
                }
            }
        }
    }
}

#[test]
fn verdict_tracks_overlap_change() {
    // H((1+x)/2) is strictly decreasing in x, so the entropy shift is a
    // function of the two overlaps alone.
    for threshold in [1e-9, 1e-4, 1e-2] {
        for s in grid(10) {
            let g = geometry(s, MachineKind::Clone);
            let probe = build_probe(&qubit_pair_from_overlap(s).unwrap(), MachineKind::Clone, &PureState::zero()).unwrap();
            for theta in interior(&g, 4) {
                let r = run_protocol(&probe, &super_machine(&g, theta).unwrap(), threshold).unwrap();
                let shift = binary_entropy((1.0 + r.overlap_after) / 2.0).unwrap()
                    - binary_entropy((1.0 + r.overlap_before) / 2.0).unwrap();
                assert!((shift - r.delta).abs() <= 1e-10);
                assert_eq!(r.signaling, shift.abs() > threshold);
                assert_eq!(r.signaling, r.delta.abs() > threshold);
                assert_eq!(r.delta, r.entropy_after - r.entropy_before);
            }
        }
    }
}

#[test]
fn bound_inverts_protocol_entropy() {
    for kind in [MachineKind::Clone, MachineKind::Delete] {
        for s in grid(12) {
            let g = geometry(s, kind);
            let pair = qubit_pair_from_overlap(s).unwrap();
            let probe = build_probe(&pair, kind, &PureState::zero()).unwrap();
            for frac in [0.0, 0.3, 0.7, 1.0] {
                let m = machine_by_fidelity_excess(&g, frac * g.epsilon_max()).unwrap();
                let r = run_protocol(&probe, &m, DEFAULT_THRESHOLD).unwrap();
                let b = bound_from_entropy(&pair, kind, r.entropy_after, 0.0).unwrap();
                assert!(!b.out_of_model);
                assert!((b.fidelity_interval.0 - m.fidelity).abs() <= 1e-8, "{kind} s={s} {b:?} {}", m.fidelity);
                assert!((b.fidelity_interval.1 - m.fidelity).abs() <= 1e-8);
            }
        }
    }
}

/// Forward map by bisection on the protocol itself, independent of the
/// closed-form entropy used inside `bound_from_entropy`.
fn theta_for_delta(g: &ConeGeometry, probe: &signalscope::signaling::ProbeState, delta: f64) -> f64 {
    let (mut lo, mut hi) = (g.theta_q, g.theta_target);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let d = run_protocol(probe, &super_machine(g, mid).unwrap(), 0.0).unwrap().delta;
        if d < delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn noisy_reading_interval_matches_protocol_bisection() {
    let s = 0.5;
    let g = geometry(s, MachineKind::Clone);
    let pair = qubit_pair_from_overlap(s).unwrap();
    let probe = build_probe(&pair, MachineKind::Clone, &PureState::zero()).unwrap();
    let before = probe.entropy().unwrap();
    let b = bound_from_entropy(&pair, MachineKind::Clone, before + 0.05, 0.01).unwrap();
    let (t_lo, t_hi) = (theta_for_delta(&g, &probe, 0.04), theta_for_delta(&g, &probe, 0.06));
    assert!((b.theta_interval.0 - t_lo).abs() < 1e-9);
    assert!((b.theta_interval.1 - t_hi).abs() < 1e-9);
    assert!((b.fidelity_interval.0 - g.fidelity_at(t_lo)).abs() < 1e-9);
    assert!((b.fidelity_interval.1 - g.fidelity_at(t_hi)).abs() < 1e-9);
    assert!(b.fidelity_interval.0 > g.optimal_fidelity() && b.fidelity_interval.1 < 1.0);
}

#[test]
fn protocol_states_are_pure_across_the_cut() {
    for kind in [MachineKind::Clone, MachineKind::Delete] {
        for s in grid(10) {
            let g = geometry(s, kind);
            let probe = build_probe(&qubit_pair_from_overlap(s).unwrap(), kind, &PureState::zero()).unwrap();
            let (a, b) = entanglement_entropies(&probe.state).unwrap();
            assert!((a - b).abs() <= 1e-10);
            let want = match kind {
                MachineKind::Clone => binary_entropy((1.0 + s) / 2.0).unwrap(),
                MachineKind::Delete => binary_entropy((1.0 + s * s) / 2.0).unwrap(),
            };
            assert!((a - want).abs() <= 1e-10);
            let m = super_machine(&g, g.theta_target).unwrap();
            let evolved = signalscope::hilbert::apply_on_subsystem(&m.operator, &probe.state, &[1]).unwrap();
            assert!((evolved.norm() - 1.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn sweep_rows_are_monotone_and_end_at_exact_machine() {
    for kind in [MachineKind::Clone, MachineKind::Delete] {
        for s in [0.2, 0.5, 0.8] {
            let g = geometry(s, kind);
            let eps: Vec<f64> = (0..=10).map(|i| g.epsilon_max() * i as f64 / 10.0).collect();
            let rows = sweep(kind, &[s], &eps, DEFAULT_THRESHOLD).unwrap();
            let mags: Vec<f64> = rows.iter().map(|r| r.delta.unwrap().abs()).collect();
            assert!(mags.windows(2).all(|w| w[1] > w[0]), "{kind} {s} {mags:?}");
            let probe = build_probe(&qubit_pair_from_overlap(s).unwrap(), kind, &PureState::zero()).unwrap();
            let exact = run_protocol(&probe, &super_machine(&g, g.theta_target).unwrap(), DEFAULT_THRESHOLD).unwrap();
            assert!((rows[10].delta.unwrap() - exact.delta).abs() <= 1e-9);
        }
    }
}
