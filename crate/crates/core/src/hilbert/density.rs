use nalgebra::{DMatrix, SymmetricEigen};

use super::{check_selection, strides, PureState, EIGEN_CLAMP_TOL, NORM_TOL};
use crate::{Error, Result, C64};

/// Hermitian, unit-trace matrix over a composite space.
///
/// Construction checks shape, hermiticity and trace. Positivity is checked
/// when eigenvalues are requested, see [`DensityMatrix::eigenvalues`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<C64>, dims: Vec<usize>) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n {
            return Err(Error::NotDensityMatrix {
                reason: format!("{}x{} is not square", n, entries.ncols()),
            });
        }
        if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != n {
            return Err(Error::InvalidDims { dims, len: n });
        }
        let herm_err = (&entries - entries.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_err > NORM_TOL {
            return Err(Error::NotDensityMatrix {
                reason: format!("not Hermitian (deviation {herm_err:e})"),
            });
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(Error::NotDensityMatrix {
                reason: format!("trace {trace} != 1"),
            });
        }
        Ok(Self { entries, dims })
    }

    /// `Σ w_k |s_k⟩⟨s_k|`.
    pub fn from_pure(states: &[PureState], weights: &[f64]) -> Result<Self> {
        let first = states.first().ok_or(Error::InvalidWeights { sum: 0.0 })?;
        if states.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                found: weights.len(),
            });
        }
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) || (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidWeights { sum });
        }
        let n = first.dim();
        let mut rho = DMatrix::<C64>::zeros(n, n);
        for (s, &w) in states.iter().zip(weights) {
            if s.dims() != first.dims() {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: s.dim(),
                });
            }
            let a = s.amplitudes();
            rho += (a * a.adjoint()) * C64::from(w);
        }
        Self::new(rho, first.dims().to_vec())
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// Reduced state on the `keep` subsystems, in the listed order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let dims = &self.dims;
        check_selection(keep, dims.len())?;
        let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
        let st = strides(dims);
        let offsets = |subsystems: &[usize]| -> Vec<usize> {
            let sd: Vec<usize> = subsystems.iter().map(|&k| dims[k]).collect();
            let sst = strides(&sd);
            let total: usize = sd.iter().product();
            (0..total)
                .map(|i| {
                    subsystems
                        .iter()
                        .enumerate()
                        .map(|(j, &k)| ((i / sst[j]) % sd[j]) * st[k])
                        .sum()
                })
                .collect()
        };
        let kept = offsets(keep);
        let rest = if traced.is_empty() { vec![0] } else { offsets(&traced) };
        let m = kept.len();
        let rho = DMatrix::from_fn(m, m, |a, b| {
            rest.iter()
                .map(|&r| self.entries[(kept[a] + r, kept[b] + r)])
                .sum::<C64>()
        });
        DensityMatrix::new(rho, keep.iter().map(|&k| dims[k]).collect())
    }

    /// Eigenvalues in ascending order, with noise in `[-1e-9, 0)` clamped to 0.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let eig = SymmetricEigen::new(self.entries.clone());
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        if let Some(&min) = values.first() {
            if min < -EIGEN_CLAMP_TOL {
                return Err(Error::NotDensityMatrix {
                    reason: format!("negative eigenvalue {min:e}"),
                });
            }
        }
        for v in &mut values {
            *v = v.max(0.0);
        }
        Ok(values)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        let h: f64 = self.eigenvalues()?.iter().map(|&l| entropy_term(l)).sum();
        Ok(h.clamp(0.0, (self.entries.nrows() as f64).log2()))
    }
}

#[inline]
fn entropy_term(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Shannon entropy of a biased coin, in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-NORM_TOL..=1.0 + NORM_TOL).contains(&p) {
        return Err(Error::OutOfRange {
            value: p,
            low: 0.0,
            high: 1.0,
        });
    }
    let p = p.clamp(0.0, 1.0);
    Ok(entropy_term(p) + entropy_term(1.0 - p))
}
