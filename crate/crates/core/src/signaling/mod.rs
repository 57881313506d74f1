//! Detection protocol: a machine acts on the B half of an entangled probe and
//! the A half's entropy is compared before and after.
//!
//! For the cloning probe `(|0⟩|ψ⟩|0⟩ + |1⟩|φ⟩|0⟩)/√2` the A-part state has
//! eigenvalues `(1 ± x)/2`, where `x` is the overlap of the two B branches.
//! Any machine that changes that overlap changes the A-part entropy. Deleting
//! uses `(|0⟩|ψ⟩|ψ⟩ + |1⟩|φ⟩|φ⟩)/√2` instead.

mod bound;
mod plan;
mod sweep;

use serde::Serialize;

pub use bound::{bound_from_entropy, entropy_at_angle, PowerBound};
pub use plan::{filter_success_probability, maximally_entangled_pair, optimal_filter, plan_experiment, ExperimentPlan};
pub use sweep::{evaluate_cell, machine_for_excess, sweep, sweep_with, SweepRecord};

use crate::hilbert::{apply_on_subsystem, PureState};
use crate::machines::{anchor_states, optimal_fidelity_for_overlap, LinearMachine, MachineKind, StatePair};
use crate::{Error, Result, C64};

/// Default detection threshold for noiseless simulation, in bits.
pub const DEFAULT_THRESHOLD: f64 = 1e-9;

const ANCHOR_TOL: f64 = 1e-10;
const EVOLVED_NORM_TOL: f64 = 1e-8;
const PURITY_TOL: f64 = 1e-10;

/// Bipartite probe with a qubit on A and the two-register machine space on B.
#[derive(Debug, Clone)]
pub struct ProbeState {
    /// Dims `[2, d_B]`.
    pub state: PureState,
    pub kind: MachineKind,
    pub anchor_pair: StatePair,
    pub blank: PureState,
    /// B-part states correlated with `|0⟩_A` and `|1⟩_A`.
    pub branches: StatePair,
}

impl ProbeState {
    /// A-part entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        Ok(entanglement_entropies(&self.state)?.0)
    }
}

/// `(|0⟩_A|b₁⟩_B + |1⟩_A|b₂⟩_B)/√2`, regrouped as `[2, d_B]`.
fn branch_state(branches: &StatePair) -> Result<PureState> {
    let h = C64::from(std::f64::consts::FRAC_1_SQRT_2);
    let joint = PureState::zero().tensor(&branches.psi).amplitudes() * h
        + PureState::one().tensor(&branches.phi).amplitudes() * h;
    PureState::new(joint, vec![2, branches.psi.dim()])
}

pub fn build_probe(pair: &StatePair, kind: MachineKind, blank: &PureState) -> Result<ProbeState> {
    let (branches, _) = anchor_states(pair, kind, blank)?;
    Ok(ProbeState {
        state: branch_state(&branches)?,
        kind,
        anchor_pair: pair.clone(),
        blank: blank.clone(),
        branches,
    })
}

/// `(S(ρ_A), S(ρ_B))` in bits for a state with dims `[d_A, d_B]`.
pub fn entanglement_entropies(state: &PureState) -> Result<(f64, f64)> {
    let rho = state.density();
    Ok((rho.partial_trace(&[0])?.entropy()?, rho.partial_trace(&[1])?.entropy()?))
}

/// Outcome of one protocol run. Entropies are in bits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalingReport {
    pub kind: MachineKind,
    pub s: f64,
    pub theta_prime: f64,
    pub entropy_before: f64,
    pub entropy_after: f64,
    pub delta: f64,
    pub threshold: f64,
    pub signaling: bool,
    pub machine_fidelity: f64,
    pub optimal_fidelity: f64,
    pub overlap_before: f64,
    pub overlap_after: f64,
}

/// Applies `I_A ⊗ machine` to the probe and reports the A-part entropy change.
pub fn run_protocol(probe: &ProbeState, machine: &LinearMachine, threshold: f64) -> Result<SignalingReport> {
    if machine.kind != probe.kind {
        return Err(Error::KindMismatch {
            machine: machine.kind.to_string(),
            probe: probe.kind.to_string(),
        });
    }
    let deviation = machine
        .anchor_inputs
        .psi
        .distance(&probe.branches.psi)?
        .max(machine.anchor_inputs.phi.distance(&probe.branches.phi)?);
    if deviation > ANCHOR_TOL {
        return Err(Error::AnchorMismatch { deviation });
    }

    let evolved = apply_on_subsystem(&machine.operator, &probe.state, &[1])?.into_pure(EVOLVED_NORM_TOL)?;

    let (before_a, before_b) = entanglement_entropies(&probe.state)?;
    let (after_a, after_b) = entanglement_entropies(&evolved)?;
    for (a, b) in [(before_a, before_b), (after_a, after_b)] {
        if (a - b).abs() > PURITY_TOL {
            return Err(Error::PurityViolation { a, b });
        }
    }

    let delta = after_a - before_a;
    let s = probe.anchor_pair.overlap;
    Ok(SignalingReport {
        kind: probe.kind,
        s,
        theta_prime: machine.theta_prime,
        entropy_before: before_a,
        entropy_after: after_a,
        delta,
        threshold,
        signaling: delta.abs() > threshold,
        machine_fidelity: machine.fidelity,
        optimal_fidelity: optimal_fidelity_for_overlap(s, probe.kind),
        overlap_before: probe.branches.psi.inner(&probe.branches.phi)?.norm(),
        overlap_after: machine.output_overlap(),
    })
}
