use nalgebra::DMatrix;
use serde::Serialize;

use super::build_probe;
use crate::hilbert::{apply_on_subsystem, binary_entropy, schmidt_decompose, PureState};
use crate::machines::{MachineKind, StatePair};
use crate::{Result, C64};

/// Numbers needed to prepare the probe and recognise its unperturbed entropy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentPlan {
    pub kind: MachineKind,
    pub s: f64,
    /// Square of the larger Schmidt coefficient of the probe across A|B.
    pub schmidt_a2: f64,
    /// `H(a²)` in bits.
    pub target_entropy: f64,
    /// Best single-shot success probability of filtering a maximally
    /// entangled pair down to Schmidt coefficients `(a, b)` on one side.
    pub filter_success_probability: f64,
}

/// One-sided filter `diag(1, b/a)` in the Schmidt basis. Its largest singular
/// value is 1, so it is a valid measurement branch.
pub fn optimal_filter(a2: f64) -> DMatrix<C64> {
    let a2 = a2.clamp(0.5, 1.0);
    let ratio = ((1.0 - a2) / a2).sqrt();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::from(1.0), C64::from(ratio)]))
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn maximally_entangled_pair() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState::from_real(&[h, 0.0, 0.0, h], vec![2, 2]).expect("unit vector")
}

/// Squared norm left after applying `filter` to the A side of a maximally
/// entangled pair.
pub fn filter_success_probability(filter: &DMatrix<C64>) -> Result<f64> {
    let filtered = apply_on_subsystem(filter, &maximally_entangled_pair(), &[0])?;
    Ok(filtered.norm().powi(2))
}

pub fn plan_experiment(pair: &StatePair, kind: MachineKind) -> Result<ExperimentPlan> {
    let probe = build_probe(pair, kind, &PureState::zero())?;
    let schmidt = schmidt_decompose(&probe.state, 1)?;
    let a2 = schmidt.coefficients[0].powi(2).clamp(0.5, 1.0);
    Ok(ExperimentPlan {
        kind,
        s: pair.overlap,
        schmidt_a2: a2,
        target_entropy: binary_entropy(a2)?,
        filter_success_probability: filter_success_probability(&optimal_filter(a2))?,
    })
}
