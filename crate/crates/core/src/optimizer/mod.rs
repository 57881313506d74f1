//! Brute-force oracles for the best quantum cloning and deleting fidelity.
//!
//! Neither search assumes the cone picture used in [`crate::machines`]:
//! [`gram_constrained_max`] ranges over every output pair in the full space
//! with the forced overlap, and [`unitary_search`] ranges over every unitary on
//! a (possibly enlarged) space. Both maximize
//! `(Re⟨t₁|o₁⟩ + Re⟨t₂|o₂⟩)/2` from seeded random restarts.

mod nelder_mead;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use nelder_mead::{minimize, minimize_with_restarts, Minimum};

use crate::hilbert::PureState;
use crate::machines::StatePair;
use crate::{Error, Execution, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Nelder–Mead iteration budget per restart.
    pub max_iterations: usize,
    /// Objective spread at which a local search counts as converged.
    pub tolerance: f64,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 10_000,
            tolerance: 1e-10,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }

    /// Independent stream per restart, so results do not depend on scheduling.
    fn rng(&self, restart: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);
        rng
    }
}

#[derive(Debug, Clone)]
struct RestartOutcome {
    fidelity: f64,
    params: Vec<f64>,
    converged: bool,
}

/// Runs one local search per restart and keeps the best, ties to the lowest index.
fn best_of_restarts<F>(config: &SearchConfig, n_params: usize, spread: f64, step: f64, objective: F) -> (RestartOutcome, usize)
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let restarts: Vec<usize> = (0..config.restarts).collect();
    let cost = |x: &[f64]| -objective(x);
    let outcomes = config.execution.map(&restarts, |&r| {
        let mut rng = config.rng(r);
        let x0: Vec<f64> = (0..n_params).map(|_| rng.random_range(-spread..spread)).collect();
        let m = minimize_with_restarts(&cost, &x0, step, config.max_iterations, config.tolerance);
        RestartOutcome {
            fidelity: -m.value,
            params: m.x,
            converged: m.converged,
        }
    });
    let converged = outcomes.iter().filter(|o| o.converged).count();
    let best = outcomes
        .into_iter()
        .reduce(|best, o| if o.fidelity > best.fidelity { o } else { best })
        .expect("at least one restart");
    (best, converged)
}

fn complex_vector(params: &[f64]) -> DVector<C64> {
    DVector::from_iterator(params.len() / 2, params.chunks_exact(2).map(|c| C64::new(c[0], c[1])))
}

/// Unit pair `(u, c·u + √(1−c²)·w)` with `w ⊥ u`, so `⟨o₁|o₂⟩ = c` exactly.
fn pair_from_params(params: &[f64], dim: usize, forced: f64) -> Option<(DVector<C64>, DVector<C64>)> {
    let u = complex_vector(&params[..2 * dim]);
    let un = u.norm();
    if un < 1e-12 {
        return None;
    }
    let u = u / C64::from(un);
    let raw = complex_vector(&params[2 * dim..]);
    let w = &raw - &u * u.dotc(&raw);
    let wn = w.norm();
    if wn < 1e-12 {
        return None;
    }
    let w = w / C64::from(wn);
    let o2 = &u * C64::from(forced) + w * C64::from((1.0 - forced * forced).max(0.0).sqrt());
    Some((u, o2))
}

fn pair_objective(t1: &DVector<C64>, t2: &DVector<C64>, o1: &DVector<C64>, o2: &DVector<C64>) -> f64 {
    0.5 * (t1.dotc(o1).re + t2.dotc(o2).re)
}

#[derive(Debug, Clone)]
pub struct GramSearchResult {
    pub fidelity: f64,
    /// Certificate: unit outputs with `⟨o₁|o₂⟩ = forced_overlap`.
    pub outputs: StatePair,
    pub converged_restarts: usize,
}

/// Best average fidelity over all unit output pairs with a fixed mutual overlap.
///
/// This is the set a unitary can reach from an input pair with that overlap.
pub fn gram_constrained_max(targets: &StatePair, forced_overlap: f64, config: &SearchConfig) -> Result<GramSearchResult> {
    config.validate()?;
    if !(0.0..=1.0).contains(&forced_overlap) {
        return Err(Error::OutOfRange {
            value: forced_overlap,
            low: 0.0,
            high: 1.0,
        });
    }
    let dim = targets.psi.dim();
    if dim < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: dim });
    }
    let t1 = targets.psi.amplitudes();
    let t2 = targets.phi.amplitudes();
    let objective = |x: &[f64]| match pair_from_params(x, dim, forced_overlap) {
        Some((o1, o2)) => pair_objective(t1, t2, &o1, &o2),
        None => -1.0,
    };
    let (best, converged) = best_of_restarts(config, 4 * dim, 1.0, 0.3, objective);
    let (o1, o2) = pair_from_params(&best.params, dim, forced_overlap).ok_or(Error::SearchFailed { best: best.fidelity })?;
    let dims = targets.psi.dims().to_vec();
    let mut outputs = StatePair::new(PureState::normalized(o1, dims.clone())?, PureState::normalized(o2, dims)?)?;
    outputs.overlap = forced_overlap;
    Ok(GramSearchResult {
        fidelity: best.fidelity,
        outputs,
        converged_restarts: converged,
    })
}

/// Hermitian matrix from `dim²` reals: diagonal first, then (re, im) of the
/// strict upper triangle row by row.
fn hermitian_from_params(params: &[f64], dim: usize) -> DMatrix<C64> {
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = C64::from(params[i]);
    }
    let mut k = dim;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let z = C64::new(params[k], params[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

/// `exp(iH)` via the eigendecomposition of `H`.
pub fn unitary_from_params(params: &[f64], dim: usize) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(hermitian_from_params(params, dim));
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, l)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

fn embed(v: &DVector<C64>, dim: usize) -> DVector<C64> {
    let mut out = DVector::zeros(dim);
    out.rows_mut(0, v.len()).copy_from(v);
    out
}

/// `(Re⟨t₁|U i₁⟩ + Re⟨t₂|U i₂⟩)/2` with all vectors zero-padded to `U`'s size.
pub fn unitary_objective(u: &DMatrix<C64>, inputs: &StatePair, targets: &StatePair) -> f64 {
    let d = u.nrows();
    let [i1, i2] = inputs.states().map(|s| embed(s.amplitudes(), d));
    let [t1, t2] = targets.states().map(|s| embed(s.amplitudes(), d));
    pair_objective(&t1, &t2, &(u * i1), &(u * i2))
}

#[derive(Debug, Clone)]
pub struct UnitarySearchResult {
    pub fidelity: f64,
    /// Certificate: the best unitary found.
    pub unitary: DMatrix<C64>,
    pub converged_restarts: usize,
}

/// Best average fidelity over all unitaries `U = exp(iH)` on a `dim`-dimensional space.
pub fn unitary_search(inputs: &StatePair, targets: &StatePair, dim: usize, config: &SearchConfig) -> Result<UnitarySearchResult> {
    config.validate()?;
    let base = inputs.psi.dim();
    if targets.psi.dim() != base {
        return Err(Error::DimensionMismatch {
            expected: base,
            found: targets.psi.dim(),
        });
    }
    if dim < base {
        return Err(Error::DimensionMismatch { expected: base, found: dim });
    }
    let [i1, i2] = inputs.states().map(|s| embed(s.amplitudes(), dim));
    let [t1, t2] = targets.states().map(|s| embed(s.amplitudes(), dim));
    let objective = |x: &[f64]| {
        let u = unitary_from_params(x, dim);
        pair_objective(&t1, &t2, &(&u * &i1), &(&u * &i2))
    };
    let (best, converged) = best_of_restarts(config, dim * dim, std::f64::consts::PI, 0.5, objective);
    if converged == 0 {
        return Err(Error::SearchFailed { best: best.fidelity });
    }
    Ok(UnitarySearchResult {
        fidelity: best.fidelity,
        unitary: unitary_from_params(&best.params, dim),
        converged_restarts: converged,
    })
}
