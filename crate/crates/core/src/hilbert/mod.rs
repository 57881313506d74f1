//! Minimal complex Hilbert-space toolkit for small composite systems.
//!
//! States carry an ordered list of subsystem dimensions; amplitudes are stored
//! row-major, so subsystem 0 is the most significant index. Entropies are in
//! bits.

mod density;
mod schmidt;
mod state;

pub use density::{binary_entropy, DensityMatrix};
pub use schmidt::{schmidt_decompose, SchmidtForm};
pub use state::{apply_on_subsystem, PureState, StateVector};

/// Absolute tolerance on state norms and density-matrix trace/hermiticity.
pub const NORM_TOL: f64 = 1e-12;

/// Eigenvalues in `[-EIGEN_CLAMP_TOL, 0)` are treated as numerical noise and
/// clamped to zero; anything more negative is not a state.
pub const EIGEN_CLAMP_TOL: f64 = 1e-9;

/// Row-major strides for the given subsystem dimensions.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut out = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        out[k] = out[k + 1] * dims[k + 1];
    }
    out
}

/// Digit of subsystem `k` in flat index `index`.
#[inline]
pub(crate) fn digit(index: usize, dims: &[usize], strides: &[usize], k: usize) -> usize {
    (index / strides[k]) % dims[k]
}

/// Validates a subsystem selection: nonempty, in range, no repeats.
pub(crate) fn check_selection(indices: &[usize], count: usize) -> crate::Result<()> {
    let mut seen = vec![false; count];
    let ok = !indices.is_empty()
        && indices.iter().all(|&i| {
            if i >= count || seen[i] {
                false
            } else {
                seen[i] = true;
                true
            }
        });
    if ok {
        Ok(())
    } else {
        Err(crate::Error::InvalidSubsystem {
            indices: indices.to_vec(),
            count,
        })
    }
}
