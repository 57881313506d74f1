//! Derivative-free local minimization with adaptive Nelder–Mead coefficients
//! (reflection 1, expansion 1 + 2/n, contraction 3/4 − 1/(2n), shrink 1 − 1/n).

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `f` from an axis-aligned simplex of edge `step` around `x0`.
///
/// Stops when the spread of simplex values drops to `tol` or after
/// `max_iterations` iterations.
pub fn minimize<F>(f: &F, x0: &[f64], step: f64, max_iterations: usize, tol: f64) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    let mut order: Vec<usize> = (0..=n).collect();
    while iterations < max_iterations {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);
        if values[worst] - values[best] <= tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(alpha);
        let fr = f(&xr);
        if fr < values[best] {
            let xe = along(alpha * beta);
            let fe = f(&xe);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        let (xc, fc, accept) = if fr < values[worst] {
            let xc = along(alpha * gamma);
            let fc = f(&xc);
            (xc, fc, fc <= fr)
        } else {
            let xc = along(-gamma);
            let fc = f(&xc);
            (xc, fc, fc < values[worst])
        };
        if accept {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                *x = a + delta * (*x - a);
            }
            values[i] = f(&simplex[i]);
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        converged,
    }
}

/// Repeats [`minimize`] from the incumbent with a fresh simplex until a pass
/// improves by no more than `tol`; this unsticks collapsed simplices.
pub fn minimize_with_restarts<F>(f: &F, x0: &[f64], step: f64, max_iterations: usize, tol: f64) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = minimize(f, x0, step, max_iterations, tol);
    let mut used = best.iterations;
    let mut step = step;
    while used < max_iterations {
        step = (step * 0.5).max(1e-4);
        let next = minimize(f, &best.x, step, max_iterations - used, tol);
        used += next.iterations;
        let improvement = best.value - next.value;
        let converged = next.converged;
        if next.value < best.value {
            best = next;
        }
        best.converged = converged;
        if improvement <= tol {
            break;
        }
    }
    best.iterations = used;
    best
}
