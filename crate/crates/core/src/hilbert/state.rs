use nalgebra::{DMatrix, DVector};

use super::{check_selection, digit, strides, DensityMatrix, NORM_TOL};
use crate::{Error, Result, C64};

/// Unit vector over a composite Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<C64>,
    dims: Vec<usize>,
}

/// Possibly unnormalized vector, as produced by a non-unitary operator.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: DVector<C64>,
    pub dims: Vec<usize>,
}

fn check_dims(dims: &[usize], len: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != len {
        return Err(Error::InvalidDims {
            dims: dims.to_vec(),
            len,
        });
    }
    Ok(())
}

impl PureState {
    /// Wraps amplitudes that are already unit norm (within 1e-12).
    pub fn new(amplitudes: impl Into<DVector<C64>>, dims: Vec<usize>) -> Result<Self> {
        let amplitudes = amplitudes.into();
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes, dims })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: impl Into<DVector<C64>>, dims: Vec<usize>) -> Result<Self> {
        let amplitudes = amplitudes.into();
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes / C64::from(norm),
            dims,
        })
    }

    pub fn from_real(amplitudes: &[f64], dims: Vec<usize>) -> Result<Self> {
        Self::new(
            DVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|&x| C64::from(x))),
            dims,
        )
    }

    /// Computational basis vector `|index⟩` of a single `dim`-level system.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut v = DVector::zeros(dim);
        v[index] = C64::from(1.0);
        Ok(Self {
            amplitudes: v,
            dims: vec![dim],
        })
    }

    pub fn zero() -> Self {
        Self::basis(2, 0).expect("valid basis index")
    }

    pub fn one() -> Self {
        Self::basis(2, 1).expect("valid basis index")
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real(&[h, h], vec![2]).expect("unit vector")
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Kronecker product; subsystem lists are concatenated.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let n = other.dim();
        let amplitudes =
            DVector::from_fn(self.dim() * n, |i, _| self.amplitudes[i / n] * other.amplitudes[i % n]);
        PureState { amplitudes, dims }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`. Only total dimensions must agree.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Same amplitudes under a different subsystem grouping, e.g. `[2,2,2]` as `[2,4]`.
    pub fn regroup(&self, dims: Vec<usize>) -> Result<PureState> {
        check_dims(&dims, self.dim())?;
        Ok(PureState {
            amplitudes: self.amplitudes.clone(),
            dims,
        })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(std::slice::from_ref(self), &[1.0])
            .expect("a single unit state with weight 1 is a valid density matrix")
    }

    /// Euclidean distance between amplitude vectors.
    pub fn distance(&self, other: &PureState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok((&self.amplitudes - &other.amplitudes).norm())
    }
}

impl StateVector {
    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Renormalizes into a [`PureState`] if the norm is within `tol` of 1.
    pub fn into_pure(self, tol: f64) -> Result<PureState> {
        let norm = self.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::EvolvedNorm { norm });
        }
        PureState::normalized(self.amplitudes, self.dims)
    }
}

impl From<PureState> for StateVector {
    fn from(s: PureState) -> Self {
        StateVector {
            amplitudes: s.amplitudes,
            dims: s.dims,
        }
    }
}

/// Applies `op` to the listed subsystems (in the listed order) and the
/// identity elsewhere. The result is not renormalized.
pub fn apply_on_subsystem(op: &DMatrix<C64>, state: &PureState, targets: &[usize]) -> Result<StateVector> {
    let dims = state.dims();
    check_selection(targets, dims.len())?;
    let target_dim: usize = targets.iter().map(|&t| dims[t]).product();
    if op.nrows() != target_dim || op.ncols() != target_dim {
        return Err(Error::DimensionMismatch {
            expected: target_dim,
            found: op.nrows().max(op.ncols()),
        });
    }
    let st = strides(dims);
    let tdims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    let tst = strides(&tdims);

    // Split every flat index into (rest part, target sub-index).
    let n = state.dim();
    let mut base = vec![0usize; n];
    let mut sub = vec![0usize; n];
    for i in 0..n {
        let mut b = i;
        let mut s = 0;
        for (j, &t) in targets.iter().enumerate() {
            let d = digit(i, dims, &st, t);
            b -= d * st[t];
            s += d * tst[j];
        }
        base[i] = b;
        sub[i] = s;
    }
    // Offset of each target sub-index inside the full index.
    let offsets: Vec<usize> = (0..target_dim)
        .map(|s| {
            targets
                .iter()
                .enumerate()
                .map(|(j, &t)| ((s / tst[j]) % tdims[j]) * st[t])
                .sum()
        })
        .collect();

    let amps = state.amplitudes();
    let out = DVector::from_fn(n, |i, _| {
        (0..target_dim)
            .map(|col| op[(sub[i], col)] * amps[base[i] + offsets[col]])
            .sum::<C64>()
    });
    Ok(StateVector {
        amplitudes: out,
        dims: dims.to_vec(),
    })
}
