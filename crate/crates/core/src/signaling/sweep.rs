use serde::Serialize;

use super::{build_probe, run_protocol};
use crate::hilbert::PureState;
use crate::machines::{
    cone_geometry, degenerate_machine, machine_by_fidelity_excess, optimal_fidelity_for_overlap,
    qubit_pair_from_overlap, LinearMachine, MachineKind, StatePair,
};
use crate::{Error, Execution, Result};

/// Slack on `ε ≤ 1 − F_optimal` before a cell is declared infeasible.
const FEASIBILITY_SLACK: f64 = 1e-12;

/// One `(s, ε)` cell. Machine-dependent fields are `None` when `ε` exceeds
/// `1 − F_optimal`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub kind: MachineKind,
    pub s: f64,
    pub epsilon: f64,
    pub theta_prime: Option<f64>,
    pub fidelity: Option<f64>,
    pub optimal_fidelity: f64,
    pub entropy_before: f64,
    pub entropy_after: Option<f64>,
    pub delta: Option<f64>,
    pub signaling: bool,
    pub feasible: bool,
}

/// Machine beating the quantum optimum by `epsilon`, or `None` when
/// `epsilon > 1 − F_optimal`. At `s ∈ {0, 1}` only `epsilon = 0` is feasible
/// and the exact (quantum-attainable) machine is returned.
pub fn machine_for_excess(pair: &StatePair, kind: MachineKind, blank: &PureState, epsilon: f64) -> Result<Option<LinearMachine>> {
    match cone_geometry(pair, kind, blank) {
        Ok(geom) => {
            let eps_max = geom.epsilon_max();
            if epsilon > eps_max + FEASIBILITY_SLACK {
                return Ok(None);
            }
            machine_by_fidelity_excess(&geom, epsilon.min(eps_max)).map(Some)
        }
        Err(Error::DegenerateGeometry { .. }) => {
            if epsilon > FEASIBILITY_SLACK {
                return Ok(None);
            }
            degenerate_machine(pair, kind, blank).map(Some)
        }
        Err(e) => Err(e),
    }
}

/// Runs the protocol for anchor overlap `s` and fidelity excess `epsilon`.
pub fn evaluate_cell(kind: MachineKind, s: f64, epsilon: f64, threshold: f64) -> Result<SweepRecord> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::OutOfRange {
            value: epsilon,
            low: 0.0,
            high: 1.0,
        });
    }
    let pair = qubit_pair_from_overlap(s)?;
    let blank = PureState::zero();
    let probe = build_probe(&pair, kind, &blank)?;
    let optimal = optimal_fidelity_for_overlap(s, kind);
    let infeasible = |entropy_before| SweepRecord {
        kind,
        s,
        epsilon,
        theta_prime: None,
        fidelity: None,
        optimal_fidelity: optimal,
        entropy_before,
        entropy_after: None,
        delta: None,
        signaling: false,
        feasible: false,
    };

    let Some(machine) = machine_for_excess(&pair, kind, &blank, epsilon)? else {
        return Ok(infeasible(probe.entropy()?));
    };
    let report = run_protocol(&probe, &machine, threshold)?;
    Ok(SweepRecord {
        kind,
        s,
        epsilon,
        theta_prime: Some(machine.theta_prime),
        fidelity: Some(report.machine_fidelity),
        optimal_fidelity: report.optimal_fidelity,
        entropy_before: report.entropy_before,
        entropy_after: Some(report.entropy_after),
        delta: Some(report.delta),
        signaling: report.signaling,
        feasible: true,
    })
}

/// Protocol grid over `s × ε`, rows ordered by `s` then `ε`.
pub fn sweep(kind: MachineKind, s_grid: &[f64], epsilon_grid: &[f64], threshold: f64) -> Result<Vec<SweepRecord>> {
    sweep_with(Execution::default(), kind, s_grid, epsilon_grid, threshold)
}

pub fn sweep_with(
    exec: Execution,
    kind: MachineKind,
    s_grid: &[f64],
    epsilon_grid: &[f64],
    threshold: f64,
) -> Result<Vec<SweepRecord>> {
    let cells: Vec<(f64, f64)> = s_grid
        .iter()
        .flat_map(|&s| epsilon_grid.iter().map(move |&e| (s, e)))
        .collect();
    exec.map(&cells, |&(s, e)| evaluate_cell(kind, s, e, threshold))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_excess_column_has_zero_delta() {
        let s: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        for kind in [MachineKind::Clone, MachineKind::Delete] {
            for r in sweep(kind, &s, &[0.0], 1e-9).unwrap() {
                assert!(r.feasible);
                assert!(r.delta.unwrap().abs() <= 1e-10, "{r:?}");
                assert!(!r.signaling);
            }
        }
    }

    #[test]
    fn delta_grows_with_excess() {
        let geom_max = 1.0 - optimal_fidelity_for_overlap(0.5, MachineKind::Clone);
        let eps: Vec<f64> = (0..=8).map(|i| geom_max * i as f64 / 8.0).collect();
        let rows = sweep(MachineKind::Clone, &[0.5], &eps, 1e-9).unwrap();
        let deltas: Vec<f64> = rows.iter().map(|r| r.delta.unwrap()).collect();
        assert!(deltas.windows(2).all(|w| w[1] > w[0]), "{deltas:?}");
    }

    #[test]
    fn endpoint_matches_exact_machine() {
        let eps_max = 1.0 - optimal_fidelity_for_overlap(0.5, MachineKind::Clone);
        let r = evaluate_cell(MachineKind::Clone, 0.5, eps_max, 1e-9).unwrap();
        let want = crate::hilbert::binary_entropy(0.625).unwrap() - crate::hilbert::binary_entropy(0.75).unwrap();
        assert_abs_diff_eq!(r.delta.unwrap(), want, epsilon = 1e-9);
    }

    #[test]
    fn infeasible_cells_are_marked() {
        let rows = sweep(MachineKind::Delete, &[0.0, 0.5], &[0.0, 0.5], 1e-9).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows.iter().map(|r| r.feasible).collect::<Vec<_>>(), [true, false, true, false]);
        assert!(rows[1].delta.is_none());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let s: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
        let eps = [0.0, 0.001, 0.005];
        let a = sweep_with(Execution::Sequential, MachineKind::Clone, &s, &eps, 1e-9).unwrap();
        let b = sweep_with(Execution::Parallel, MachineKind::Clone, &s, &eps, 1e-9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_inputs_error() {
        assert!(evaluate_cell(MachineKind::Clone, 1.2, 0.0, 1e-9).is_err());
        assert!(evaluate_cell(MachineKind::Clone, 0.5, -0.1, 1e-9).is_err());
    }
}
