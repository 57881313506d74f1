use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};

use super::PureState;
use crate::{Error, Result, C64};

/// Coefficients below this are dropped from the decomposition.
const RANK_TOL: f64 = 1e-12;

/// `|ψ⟩ = Σ_k c_k |l_k⟩|r_k⟩` with `c_k` real, positive and nonincreasing.
///
/// Phase convention: the first nonzero amplitude of every left vector is real
/// and nonnegative. Equal coefficients are ordered by the left vectors'
/// amplitudes, compared lexicographically.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<DVector<C64>>,
    pub right_basis: Vec<DVector<C64>>,
    pub left_dims: Vec<usize>,
    pub right_dims: Vec<usize>,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Rebuilds the flat amplitude vector.
    pub fn reconstruct(&self) -> DVector<C64> {
        let dl: usize = self.left_dims.iter().product();
        let dr: usize = self.right_dims.iter().product();
        let mut out = DVector::zeros(dl * dr);
        for ((c, l), r) in self.coefficients.iter().zip(&self.left_basis).zip(&self.right_basis) {
            for i in 0..dl {
                for j in 0..dr {
                    out[i * dr + j] += l[i] * r[j] * *c;
                }
            }
        }
        out
    }
}

fn lex_cmp(a: &DVector<C64>, b: &DVector<C64>) -> Ordering {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Schmidt decomposition across the cut between subsystems `[0, cut)` and `[cut, n)`.
pub fn schmidt_decompose(state: &PureState, cut: usize) -> Result<SchmidtForm> {
    let dims = state.dims();
    if cut == 0 || cut >= dims.len() {
        return Err(Error::InvalidSubsystem {
            indices: vec![cut],
            count: dims.len(),
        });
    }
    let left_dims = dims[..cut].to_vec();
    let right_dims = dims[cut..].to_vec();
    let dl: usize = left_dims.iter().product();
    let dr: usize = right_dims.iter().product();
    let amps = state.amplitudes();
    let m = DMatrix::from_fn(dl, dr, |i, j| amps[i * dr + j]);

    // M = U Σ V†  ⇒  |ψ⟩ = Σ σ_k u_k ⊗ conj(v_k), and conj(v_k) is row k of V†.
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V†");

    let mut terms: Vec<(f64, DVector<C64>, DVector<C64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > RANK_TOL)
        .map(|(k, &s)| {
            let mut l: DVector<C64> = u.column(k).into_owned();
            let mut r: DVector<C64> = v_t.row(k).transpose();
            if let Some(first) = l.iter().copied().find(|a| a.norm() > RANK_TOL) {
                let phase = first / first.norm();
                l /= phase;
                r *= phase;
            }
            (s, l, r)
        })
        .collect();
    terms.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| lex_cmp(&a.1, &b.1)));

    // Renormalize the retained coefficients so that Σ c² = 1 exactly.
    let norm = terms.iter().map(|t| t.0 * t.0).sum::<f64>().sqrt();
    let mut form = SchmidtForm {
        coefficients: Vec::with_capacity(terms.len()),
        left_basis: Vec::with_capacity(terms.len()),
        right_basis: Vec::with_capacity(terms.len()),
        left_dims,
        right_dims,
    };
    for (c, l, r) in terms {
        form.coefficients.push(c / norm);
        form.left_basis.push(l);
        form.right_basis.push(r);
    }
    Ok(form)
}
