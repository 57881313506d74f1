use serde::Serialize;

use crate::hilbert::binary_entropy;
use crate::machines::{cone_angles, MachineKind, StatePair};
use crate::{Error, Result};

/// Bisection stops once the bracket is narrower than this, in radians.
const THETA_TOL: f64 = 1e-10;
/// Readings this close to the admissible entropy range count as inside it.
const ENTROPY_SLACK: f64 = 1e-12;

/// Machine strengths consistent with an A-part entropy reading.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerBound {
    pub kind: MachineKind,
    pub s: f64,
    pub measured_entropy: f64,
    pub uncertainty: f64,
    /// `[low, high]`, a subset of `[F_optimal, 1]`.
    pub fidelity_interval: (f64, f64),
    /// `[low, high]`, a subset of the admissible machine angles.
    pub theta_interval: (f64, f64),
    /// No admissible machine reproduces the reading; the intervals collapse to
    /// the closest admissible endpoint.
    pub out_of_model: bool,
}

/// A-part entropy of a probe whose B branches sit at half-angle `θ`:
/// `H((1 + cos 2θ)/2)`. Strictly increasing on `[0, π/4]`.
pub fn entropy_at_angle(theta: f64) -> f64 {
    let p = (0.5 * (1.0 + (2.0 * theta).cos())).clamp(0.0, 1.0);
    binary_entropy(p).expect("p clamped to [0, 1]")
}

/// Smallest `θ ∈ [lo, hi]` with `entropy_at_angle(θ) ≥ target`.
fn invert(target: f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > THETA_TOL {
        let mid = 0.5 * (lo + hi);
        if entropy_at_angle(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Inverts the entropy reading `measured ± uncertainty` into the set of
/// machine angles and fidelities that could have produced it.
pub fn bound_from_entropy(pair: &StatePair, kind: MachineKind, measured: f64, uncertainty: f64) -> Result<PowerBound> {
    if !(uncertainty >= 0.0 && uncertainty.is_finite()) {
        return Err(Error::OutOfRange {
            value: uncertainty,
            low: 0.0,
            high: f64::INFINITY,
        });
    }
    let s = pair.overlap;
    let (theta_q, theta_target) = cone_angles(s, kind);
    let (lo, hi) = (theta_q.min(theta_target), theta_q.max(theta_target));
    let (e_lo, e_hi) = (entropy_at_angle(lo), entropy_at_angle(hi));
    let (want_lo, want_hi) = (measured - uncertainty, measured + uncertainty);

    let (theta_interval, out_of_model) = if want_hi < e_lo - ENTROPY_SLACK {
        ((lo, lo), true)
    } else if want_lo > e_hi + ENTROPY_SLACK {
        ((hi, hi), true)
    } else {
        let a = if want_lo <= e_lo { lo } else { invert(want_lo, lo, hi) };
        let b = if want_hi >= e_hi { hi } else { invert(want_hi, lo, hi) };
        ((a, b), false)
    };
    let f = |theta: f64| (theta_target - theta).cos();
    let (fa, fb) = (f(theta_interval.0), f(theta_interval.1));
    Ok(PowerBound {
        kind,
        s,
        measured_entropy: measured,
        uncertainty,
        fidelity_interval: (fa.min(fb), fa.max(fb)),
        theta_interval,
        out_of_model,
    })
}
