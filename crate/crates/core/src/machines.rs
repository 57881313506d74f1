//! State-dependent cloning and deleting machines for a pair of nonorthogonal
//! qubit states.
//!
//! Every symmetric pair is described by a half-angle `θ` about a common axis:
//! `(cos θ e₊ + sin θ e₋, cos θ e₊ − sin θ e₋)` has overlap `cos 2θ`. The
//! unitarity-forced output pair, the ideal target pair and every candidate
//! machine output pair share the same axis, so a machine is fixed by one angle.
//!
//! A machine with output half-angle `θ'` has average fidelity
//! `cos(θ_target − θ')`. Quantum machines must sit at `θ' = θ_q`, where the
//! output overlap equals the input overlap. Angles strictly between `θ_q` and
//! `θ_target` give linear, non-unitary machines that beat the quantum optimum.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::hilbert::PureState;
use crate::{Error, Result, C64};

const PHASE_TOL: f64 = 1e-12;
/// Slack allowed when an angle or fidelity lands a rounding error outside its interval.
const ANGLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MachineKind {
    Clone,
    Delete,
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MachineKind::Clone => "clone",
            MachineKind::Delete => "delete",
        })
    }
}

impl FromStr for MachineKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "clone" => Ok(MachineKind::Clone),
            "delete" => Ok(MachineKind::Delete),
            other => Err(format!("unknown machine kind '{other}' (expected clone or delete)")),
        }
    }
}

/// Two states whose inner product is real and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    pub psi: PureState,
    pub phi: PureState,
    pub overlap: f64,
}

impl StatePair {
    pub fn new(psi: PureState, phi: PureState) -> Result<Self> {
        let ip = psi.inner(&phi)?;
        if ip.im.abs() > PHASE_TOL || ip.re < -PHASE_TOL {
            return Err(Error::OverlapPhase { re: ip.re, im: ip.im });
        }
        Ok(Self {
            psi,
            phi,
            overlap: ip.re.clamp(0.0, 1.0),
        })
    }

    pub fn states(&self) -> [&PureState; 2] {
        [&self.psi, &self.phi]
    }
}

/// `cos θ|0⟩ ± sin θ|1⟩` with `cos 2θ = s`.
pub fn qubit_pair_from_overlap(s: f64) -> Result<StatePair> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange {
            value: s,
            low: 0.0,
            high: 1.0,
        });
    }
    let t = half_angle(s);
    let (c, sn) = (t.cos(), t.sin());
    let mut pair = StatePair::new(
        PureState::from_real(&[c, sn], vec![2])?,
        PureState::from_real(&[c, -sn], vec![2])?,
    )?;
    pair.overlap = s;
    Ok(pair)
}

/// Half-angle `θ ∈ [0, π/4]` of a symmetric pair with overlap `cos 2θ`.
pub fn half_angle(overlap: f64) -> f64 {
    0.5 * overlap.clamp(0.0, 1.0).acos()
}

/// Overlaps `(forced output overlap, target overlap)` for anchor overlap `s`.
pub fn cone_overlaps(s: f64, kind: MachineKind) -> (f64, f64) {
    match kind {
        MachineKind::Clone => (s, s * s),
        MachineKind::Delete => (s * s, s),
    }
}

/// `(θ_q, θ_target)` for anchor overlap `s`; defined for every `s ∈ [0, 1]`.
pub fn cone_angles(s: f64, kind: MachineKind) -> (f64, f64) {
    let (q, t) = cone_overlaps(s, kind);
    (half_angle(q), half_angle(t))
}

/// Best quantum fidelity `cos(θ_target − θ_q)`; equals 1 at `s ∈ {0, 1}`.
pub fn optimal_fidelity_for_overlap(s: f64, kind: MachineKind) -> f64 {
    let (q, t) = cone_angles(s, kind);
    (t - q).cos()
}

/// Input and ideal target pairs on the two-register B-space.
///
/// Cloning takes `|ψ⟩|0⟩, |φ⟩|0⟩` towards `|ψ⟩|ψ⟩, |φ⟩|φ⟩`; deleting runs the
/// other way.
pub fn anchor_states(pair: &StatePair, kind: MachineKind, blank: &PureState) -> Result<(StatePair, StatePair)> {
    if blank.dim() != pair.psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: pair.psi.dim(),
            found: blank.dim(),
        });
    }
    let with_blank = StatePair::new(pair.psi.tensor(blank), pair.phi.tensor(blank))?;
    let doubled = StatePair::new(pair.psi.tensor(&pair.psi), pair.phi.tensor(&pair.phi))?;
    Ok(match kind {
        MachineKind::Clone => (with_blank, doubled),
        MachineKind::Delete => (doubled, with_blank),
    })
}

/// The three coaxial cones of one cloning or deleting problem.
#[derive(Debug, Clone)]
pub struct ConeGeometry {
    pub kind: MachineKind,
    /// Anchor overlap `s` of the underlying qubit pair.
    pub s: f64,
    pub inputs: StatePair,
    pub targets: StatePair,
    pub e_plus: DVector<C64>,
    pub e_minus: DVector<C64>,
    pub dims: Vec<usize>,
    pub theta_in: f64,
    pub theta_q: f64,
    pub theta_target: f64,
}

impl ConeGeometry {
    /// Closed interval of admissible machine angles, ordered `(low, high)`.
    pub fn admissible(&self) -> (f64, f64) {
        (self.theta_q.min(self.theta_target), self.theta_q.max(self.theta_target))
    }

    pub fn optimal_fidelity(&self) -> f64 {
        (self.theta_target - self.theta_q).cos()
    }

    /// Largest fidelity excess a linear machine can add: `1 − F_optimal`.
    pub fn epsilon_max(&self) -> f64 {
        1.0 - self.optimal_fidelity()
    }

    /// Machine fidelity at output half-angle `θ'`.
    pub fn fidelity_at(&self, theta_prime: f64) -> f64 {
        (self.theta_target - theta_prime).cos()
    }
}

pub fn cone_geometry(pair: &StatePair, kind: MachineKind, blank: &PureState) -> Result<ConeGeometry> {
    let s = pair.overlap;
    if s <= PHASE_TOL || s >= 1.0 - PHASE_TOL {
        return Err(Error::DegenerateGeometry { overlap: s });
    }
    let (inputs, targets) = anchor_states(pair, kind, blank)?;
    let t1 = targets.psi.amplitudes();
    let t2 = targets.phi.amplitudes();
    let sum = t1 + t2;
    let diff = t1 - t2;
    let e_plus = &sum / C64::from(sum.norm());
    let e_minus = &diff / C64::from(diff.norm());
    let theta_in = half_angle(inputs.overlap);
    let (theta_q, theta_target) = cone_angles(s, kind);
    Ok(ConeGeometry {
        kind,
        s,
        dims: targets.psi.dims().to_vec(),
        inputs,
        targets,
        e_plus,
        e_minus,
        theta_in,
        theta_q,
        theta_target,
    })
}

/// Symmetric pair at half-angle `θ` about `e₊` in the target plane.
pub fn symmetric_pair_at(geom: &ConeGeometry, theta: f64) -> Result<StatePair> {
    let quarter = std::f64::consts::FRAC_PI_4;
    if !(-ANGLE_SLACK..=quarter + ANGLE_SLACK).contains(&theta) {
        return Err(Error::OutOfRange {
            value: theta,
            low: 0.0,
            high: quarter,
        });
    }
    let theta = theta.clamp(0.0, quarter);
    let (c, s) = (C64::from(theta.cos()), C64::from(theta.sin()));
    let a = &geom.e_plus * c + &geom.e_minus * s;
    let b = &geom.e_plus * c - &geom.e_minus * s;
    let mut pair = StatePair::new(
        PureState::normalized(a, geom.dims.clone())?,
        PureState::normalized(b, geom.dims.clone())?,
    )?;
    pair.overlap = (2.0 * theta).cos().max(0.0);
    Ok(pair)
}

/// `(F, outputs)` of the best quantum machine: outputs on the cone whose
/// overlap equals the unitarity-forced value.
pub fn optimal_fidelity(geom: &ConeGeometry) -> Result<(f64, StatePair)> {
    let outputs = symmetric_pair_at(geom, geom.theta_q)?;
    Ok((geom.optimal_fidelity(), outputs))
}

/// Average fidelity `(Re⟨t₁|o₁⟩ + Re⟨t₂|o₂⟩)/2`.
pub fn pair_fidelity(targets: &StatePair, outputs: &StatePair) -> Result<f64> {
    Ok(0.5 * (targets.psi.inner(&outputs.psi)?.re + targets.phi.inner(&outputs.phi)?.re))
}

/// A linear map on the B-space defined on two anchor states.
#[derive(Debug, Clone)]
pub struct LinearMachine {
    /// Sends anchor input `k` to anchor output `k` and annihilates the
    /// orthogonal complement of the input span.
    pub operator: DMatrix<C64>,
    pub kind: MachineKind,
    pub anchor_inputs: StatePair,
    pub anchor_outputs: StatePair,
    pub theta_prime: f64,
    pub fidelity: f64,
}

impl LinearMachine {
    fn build(kind: MachineKind, inputs: StatePair, outputs: StatePair, targets: &StatePair, theta_prime: f64) -> Result<Self> {
        let operator = anchor_operator(&inputs, &outputs);
        let fidelity = pair_fidelity(targets, &outputs)?;
        Ok(Self {
            operator,
            kind,
            anchor_inputs: inputs,
            anchor_outputs: outputs,
            theta_prime,
            fidelity,
        })
    }

    /// `|⟨out₁|out₂⟩|` after applying the operator to the anchor inputs.
    pub fn output_overlap(&self) -> f64 {
        let o1 = &self.operator * self.anchor_inputs.psi.amplitudes();
        let o2 = &self.operator * self.anchor_inputs.phi.amplitudes();
        o1.dotc(&o2).norm()
    }

    /// Distance of `v` from the span of the anchor inputs.
    pub fn distance_from_input_span(&self, v: &DVector<C64>) -> f64 {
        let basis = orthonormal_span(&self.anchor_inputs);
        let mut residual = v.clone();
        for b in &basis {
            residual -= b * b.dotc(v);
        }
        residual.norm()
    }
}

/// Orthonormal basis of span{psi, phi} (one vector when they coincide).
fn orthonormal_span(pair: &StatePair) -> Vec<DVector<C64>> {
    let a = pair.psi.amplitudes().clone();
    let mut b = pair.phi.amplitudes() - &a * a.dotc(pair.phi.amplitudes());
    let n = b.norm();
    if n <= 1e-12 {
        vec![a]
    } else {
        b /= C64::from(n);
        vec![a, b]
    }
}

/// `O G⁻¹ I†` with `G` the Gram matrix of the inputs; rank one if the inputs coincide.
fn anchor_operator(inputs: &StatePair, outputs: &StatePair) -> DMatrix<C64> {
    let i1 = inputs.psi.amplitudes();
    let i2 = inputs.phi.amplitudes();
    let o1 = outputs.psi.amplitudes();
    let o2 = outputs.phi.amplitudes();
    let g = inputs.psi.inner(&inputs.phi).expect("anchors share a space");
    let det = 1.0 - g.norm_sqr();
    if det <= 1e-12 {
        return o1 * i1.adjoint();
    }
    // G = [[1, g], [ḡ, 1]],  G⁻¹ = [[1, −g], [−ḡ, 1]] / det
    let inv = C64::from(1.0 / det);
    let d1 = (i1 - i2 * g.conj()) * inv;
    let d2 = (i2 - i1 * g) * inv;
    o1 * d1.adjoint() + o2 * d2.adjoint()
}

/// Linear machine with outputs on the cone at half-angle `θ'`.
///
/// Admissible angles run from the quantum cone `θ_q` to the target cone `θ_target`.
pub fn super_machine(geom: &ConeGeometry, theta_prime: f64) -> Result<LinearMachine> {
    let (lo, hi) = geom.admissible();
    if !(lo - ANGLE_SLACK..=hi + ANGLE_SLACK).contains(&theta_prime) {
        return Err(Error::OutOfRange {
            value: theta_prime,
            low: lo,
            high: hi,
        });
    }
    let theta_prime = theta_prime.clamp(lo, hi);
    let outputs = symmetric_pair_at(geom, theta_prime)?;
    LinearMachine::build(geom.kind, geom.inputs.clone(), outputs, &geom.targets, theta_prime)
}

/// Machine whose fidelity exceeds the quantum optimum by `epsilon`.
pub fn machine_by_fidelity_excess(geom: &ConeGeometry, epsilon: f64) -> Result<LinearMachine> {
    if epsilon < 0.0 || !epsilon.is_finite() {
        return Err(Error::OutOfRange {
            value: epsilon,
            low: 0.0,
            high: geom.epsilon_max(),
        });
    }
    let requested = geom.optimal_fidelity() + epsilon;
    if requested > 1.0 + ANGLE_SLACK {
        return Err(Error::FidelityAboveOne { requested });
    }
    let gap = requested.min(1.0).acos();
    let theta_prime = if epsilon == 0.0 {
        geom.theta_q
    } else {
        match geom.kind {
            MachineKind::Clone => geom.theta_target - gap,
            MachineKind::Delete => geom.theta_target + gap,
        }
    };
    super_machine(geom, theta_prime)
}

/// Exact machine for `s ∈ {0, 1}`, where exact cloning or deleting is
/// quantum-attainable and the cone geometry collapses.
pub fn degenerate_machine(pair: &StatePair, kind: MachineKind, blank: &PureState) -> Result<LinearMachine> {
    let s = pair.overlap;
    if s > PHASE_TOL && s < 1.0 - PHASE_TOL {
        return Err(Error::OutOfRange {
            value: s,
            low: 0.0,
            high: 0.0,
        });
    }
    let (inputs, targets) = anchor_states(pair, kind, blank)?;
    let theta_prime = half_angle(targets.overlap);
    LinearMachine::build(kind, inputs, targets.clone(), &targets, theta_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn geom(s: f64, kind: MachineKind) -> ConeGeometry {
        cone_geometry(&qubit_pair_from_overlap(s).unwrap(), kind, &PureState::zero()).unwrap()
    }

    #[test]
    fn qubit_pairs() {
        let p = qubit_pair_from_overlap(0.0).unwrap();
        assert_abs_diff_eq!(p.psi.inner(&p.phi).unwrap().norm(), 0.0, epsilon = 1e-15);
        let p = qubit_pair_from_overlap(1.0).unwrap();
        assert_eq!(p.psi, p.phi);
        let p = qubit_pair_from_overlap(0.6).unwrap();
        let ip = p.psi.inner(&p.phi).unwrap();
        assert_abs_diff_eq!(ip.re, 0.6, epsilon = 1e-12);
        assert_eq!(ip.im, 0.0);
        assert!(qubit_pair_from_overlap(-0.1).is_err());
        assert!(qubit_pair_from_overlap(1.01).is_err());
    }

    #[test]
    fn state_pair_rejects_complex_overlap() {
        let a = PureState::plus();
        let b = PureState::normalized(vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)], vec![2]).unwrap();
        assert!(matches!(StatePair::new(a, b), Err(Error::OverlapPhase { .. })));
    }

    #[test]
    fn cone_overlaps_at_point_six() {
        let g = geom(0.6, MachineKind::Clone);
        assert_abs_diff_eq!((2.0 * g.theta_q).cos(), 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!((2.0 * g.theta_target).cos(), 0.36, epsilon = 1e-12);
        assert_abs_diff_eq!(g.inputs.psi.inner(&g.inputs.phi).unwrap().re, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(g.targets.psi.inner(&g.targets.phi).unwrap().re, 0.36, epsilon = 1e-12);
        assert_abs_diff_eq!(g.theta_in, g.theta_q, epsilon = 1e-12);

        let g = geom(0.6, MachineKind::Delete);
        assert_abs_diff_eq!((2.0 * g.theta_q).cos(), 0.36, epsilon = 1e-12);
        assert_abs_diff_eq!((2.0 * g.theta_target).cos(), 0.6, epsilon = 1e-12);
    }

    #[test]
    fn doubled_pair_is_wider_than_blank_pair() {
        for i in 1..20 {
            let s = i as f64 / 20.0;
            let g = geom(s, MachineKind::Clone);
            let wide = g.targets.psi.inner(&g.targets.phi).unwrap().norm();
            let narrow = g.inputs.psi.inner(&g.inputs.phi).unwrap().norm();
            assert!(wide < narrow);
            assert!(g.theta_target > g.theta_q);
        }
    }

    #[test]
    fn degenerate_overlaps_refused() {
        for s in [0.0, 1.0] {
            let p = qubit_pair_from_overlap(s).unwrap();
            assert!(matches!(
                cone_geometry(&p, MachineKind::Clone, &PureState::zero()),
                Err(Error::DegenerateGeometry { .. })
            ));
            assert_eq!(optimal_fidelity_for_overlap(s, MachineKind::Clone), 1.0);
        }
    }

    #[test]
    fn symmetric_pair_endpoints() {
        let g = geom(0.5, MachineKind::Clone);
        let p = symmetric_pair_at(&g, 0.0).unwrap();
        assert_abs_diff_eq!(p.psi.inner(&p.phi).unwrap().re, 1.0, epsilon = 1e-14);
        let p = symmetric_pair_at(&g, std::f64::consts::FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(p.psi.inner(&p.phi).unwrap().norm(), 0.0, epsilon = 1e-14);
        let p = symmetric_pair_at(&g, g.theta_target).unwrap();
        assert!(p.psi.distance(&g.targets.psi).unwrap() < 1e-12);
        assert!(p.phi.distance(&g.targets.phi).unwrap() < 1e-12);
        assert!(symmetric_pair_at(&g, 1.0).is_err());
        assert!(symmetric_pair_at(&g, -0.1).is_err());
    }

    #[test]
    fn optimal_fidelity_at_one_half() {
        let g = geom(0.5, MachineKind::Clone);
        let (f, outputs) = optimal_fidelity(&g).unwrap();
        let want = (0.5 * 0.25f64.acos() - 0.5 * 0.5f64.acos()).cos();
        assert_abs_diff_eq!(f, want, epsilon = 1e-15);
        assert_abs_diff_eq!(f, 0.99084, epsilon = 5e-6);
        assert_abs_diff_eq!(pair_fidelity(&g.targets, &outputs).unwrap(), f, epsilon = 1e-12);
        assert_abs_diff_eq!(outputs.psi.inner(&outputs.phi).unwrap().re, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn optimal_fidelity_tends_to_one_at_the_ends() {
        for s in [1e-9, 1.0 - 1e-9] {
            assert_abs_diff_eq!(optimal_fidelity_for_overlap(s, MachineKind::Clone), 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn quantum_boundary_machine_preserves_overlap() {
        let g = geom(0.5, MachineKind::Clone);
        let m = super_machine(&g, g.theta_q).unwrap();
        assert_abs_diff_eq!(m.output_overlap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m.fidelity, g.optimal_fidelity(), epsilon = 1e-12);
    }

    #[test]
    fn exact_cloner_at_target_cone() {
        let g = geom(0.5, MachineKind::Clone);
        let m = super_machine(&g, g.theta_target).unwrap();
        assert_abs_diff_eq!(m.fidelity, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.output_overlap(), 0.25, epsilon = 1e-12);
        let out = &m.operator * g.inputs.psi.amplitudes();
        assert!((out - g.targets.psi.amplitudes()).norm() < 1e-12);
    }

    #[test]
    fn super_machine_rejects_angles_outside_interval() {
        let g = geom(0.5, MachineKind::Clone);
        assert!(super_machine(&g, g.theta_q - 0.01).is_err());
        assert!(super_machine(&g, g.theta_target + 0.01).is_err());
        let d = geom(0.5, MachineKind::Delete);
        assert!(super_machine(&d, d.theta_target - 0.01).is_err());
        assert!(super_machine(&d, d.theta_target).is_ok());
    }

    #[test]
    fn operator_maps_anchors_and_kills_complement() {
        let g = geom(0.3, MachineKind::Delete);
        let m = super_machine(&g, 0.5 * (g.theta_q + g.theta_target)).unwrap();
        for (i, o) in m.anchor_inputs.states().into_iter().zip(m.anchor_outputs.states()) {
            assert!((&m.operator * i.amplitudes() - o.amplitudes()).norm() < 1e-12);
        }
        // |1⟩|0⟩ is not in span{|ψψ⟩, |φφ⟩} but its component orthogonal to it is annihilated.
        let probe = PureState::one().tensor(&PureState::zero());
        let basis = orthonormal_span(&m.anchor_inputs);
        let mut perp = probe.amplitudes().clone();
        for b in &basis {
            perp -= b * b.dotc(probe.amplitudes());
        }
        assert!(perp.norm() > 0.1);
        assert!((&m.operator * perp).norm() < 1e-12);
    }

    #[test]
    fn fidelity_excess_inversion() {
        let g = geom(0.5, MachineKind::Clone);
        let m = machine_by_fidelity_excess(&g, 0.0).unwrap();
        assert_abs_diff_eq!(m.fidelity, g.optimal_fidelity(), epsilon = 1e-12);
        assert_eq!(m.theta_prime, g.theta_q);

        let m = machine_by_fidelity_excess(&g, 0.005).unwrap();
        assert_abs_diff_eq!(m.fidelity, g.optimal_fidelity() + 0.005, epsilon = 1e-12);
        assert_abs_diff_eq!(m.fidelity, 0.99584, epsilon = 5e-6);
        assert!(m.output_overlap() < 0.5);

        let m = machine_by_fidelity_excess(&g, g.epsilon_max()).unwrap();
        assert_abs_diff_eq!(m.theta_prime, g.theta_target, epsilon = 1e-7);
        assert_abs_diff_eq!(m.fidelity, 1.0, epsilon = 1e-12);

        assert!(matches!(
            machine_by_fidelity_excess(&g, g.epsilon_max() + 1e-6),
            Err(Error::FidelityAboveOne { .. })
        ));
        assert!(machine_by_fidelity_excess(&g, -1e-3).is_err());
    }

    #[test]
    fn delete_machines_narrow_the_cone() {
        let g = geom(0.5, MachineKind::Delete);
        let m = machine_by_fidelity_excess(&g, 0.004).unwrap();
        assert!(m.theta_prime < g.theta_q && m.theta_prime > g.theta_target);
        assert!(m.output_overlap() > 0.25);
    }

    #[test]
    fn degenerate_machines_are_exact() {
        for s in [0.0, 1.0] {
            for kind in [MachineKind::Clone, MachineKind::Delete] {
                let p = qubit_pair_from_overlap(s).unwrap();
                let m = degenerate_machine(&p, kind, &PureState::zero()).unwrap();
                assert_abs_diff_eq!(m.fidelity, 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(m.output_overlap(), s, epsilon = 1e-12);
            }
        }
        let p = qubit_pair_from_overlap(0.5).unwrap();
        assert!(degenerate_machine(&p, MachineKind::Clone, &PureState::zero()).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("Clone".parse::<MachineKind>().unwrap(), MachineKind::Clone);
        assert_eq!("delete".parse::<MachineKind>().unwrap(), MachineKind::Delete);
        assert!("copy".parse::<MachineKind>().is_err());
        assert_eq!(MachineKind::Delete.to_string(), "delete");
    }
}
