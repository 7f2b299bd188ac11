//! Damped Gauss–Newton (Levenberg–Marquardt) least squares with
//! finite-difference Jacobians.

use super::AnalysisError;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct FitOptions<T> {
    pub max_iterations: usize,
    /// Stop when χ² improves by less than this fraction.
    pub ftol: T,
    /// Stop when no parameter moves by more than this fraction.
    pub xtol: T,
    /// Optional box constraints; steps are projected onto the box.
    pub bounds: Option<Vec<(T, T)>>,
}

impl<T: Real> Default for FitOptions<T> {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            ftol: T::lit(1e-15),
            xtol: T::lit(1e-13),
            bounds: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult<T> {
    pub params: Vec<T>,
    /// 1σ errors: √diag of the covariance scaled by the reduced χ².
    pub errors: Vec<T>,
    /// Row-major covariance (already scaled).
    pub covariance: Vec<T>,
    pub chi2: T,
    pub reduced_chi2: T,
    pub dof: usize,
    pub iterations: usize,
}

impl<T: Real> FitResult<T> {
    pub fn residual_norm(&self) -> T {
        self.chi2.sqrt()
    }
}

/// Solves `a x = b` (n × n, row-major) by Gaussian elimination with
/// partial pivoting. Returns `None` for a numerically singular matrix.
pub(crate) fn solve<T: Real>(mut a: Vec<T>, mut b: Vec<T>, n: usize) -> Option<Vec<T>> {
    let scale = a.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if !(scale > T::zero()) {
        return None;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i * n + col].abs().partial_cmp(&a[j * n + col].abs()).unwrap())?;
        if a[piv * n + col].abs() <= T::epsilon() * scale * T::lit(16.0) {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        for r in col + 1..n {
            let f = a[r * n + col] / a[col * n + col];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                a[r * n + k] = a[r * n + k] - f * a[col * n + k];
            }
            b[r] = b[r] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let s: T = (r + 1..n).map(|k| a[r * n + k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r * n + r];
    }
    Some(x)
}

/// Inverse of a symmetric positive matrix, refusing ill-conditioned input.
///
/// The matrix is first scaled to unit diagonal so the test measures
/// parameter correlation rather than units.
fn invert_normal<T: Real>(a: &[T], n: usize) -> Result<Vec<T>, AnalysisError> {
    let d: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    if let Some(i) = d.iter().position(|v| !(*v > T::zero())) {
        return Err(AnalysisError::IllConditioned(format!("parameter {i} does not affect the model")));
    }
    let s: Vec<T> = d.iter().map(|v| v.sqrt()).collect();
    let scaled: Vec<T> = (0..n * n).map(|k| a[k] / (s[k / n] * s[k % n])).collect();
    let mut inv = vec![T::zero(); n * n];
    for c in 0..n {
        let mut e = vec![T::zero(); n];
        e[c] = T::one();
        let col = solve(scaled.clone(), e, n)
            .ok_or_else(|| AnalysisError::IllConditioned("singular normal matrix".into()))?;
        for r in 0..n {
            inv[r * n + c] = col[r] / (s[r] * s[c]);
        }
    }
    // reciprocal condition estimate on the correlation matrix
    let max_diag_inv = (0..n).map(|i| inv[i * n + i] * d[i]).fold(T::zero(), T::max);
    if !(max_diag_inv < T::lit(1e12)) {
        return Err(AnalysisError::IllConditioned(format!(
            "parameters are degenerate (variance inflation {max_diag_inv:e})"
        )));
    }
    Ok(inv)
}

struct Problem<'a, T, F> {
    model: &'a F,
    x: &'a [T],
    y: &'a [T],
    sigma: Option<&'a [T]>,
}

impl<T: Real, F: Fn(T, &[T]) -> T> Problem<'_, T, F> {
    fn weight(&self, i: usize) -> T {
        self.sigma.map_or_else(T::one, |s| T::one() / s[i])
    }

    fn residuals(&self, p: &[T], out: &mut [T]) {
        for (i, r) in out.iter_mut().enumerate() {
            *r = (self.y[i] - (self.model)(self.x[i], p)) * self.weight(i);
        }
    }

    fn chi2(&self, p: &[T], buf: &mut [T]) -> T {
        self.residuals(p, buf);
        buf.iter().map(|r| *r * *r).sum()
    }

    /// Central-difference Jacobian of the weighted model, m × n row-major.
    fn jacobian(&self, p: &[T]) -> Vec<T> {
        let (m, n) = (self.x.len(), p.len());
        let mut jac = vec![T::zero(); m * n];
        let mut q = p.to_vec();
        for j in 0..n {
            let h = T::fd_step() * p[j].abs().max(T::fd_step());
            q[j] = p[j] + h;
            let plus: Vec<T> = self.x.iter().map(|&x| (self.model)(x, &q)).collect();
            q[j] = p[j] - h;
            for i in 0..m {
                let minus = (self.model)(self.x[i], &q);
                jac[i * n + j] = (plus[i] - minus) / (h + h) * self.weight(i);
            }
            q[j] = p[j];
        }
        jac
    }
}

fn normal_equations<T: Real>(jac: &[T], r: &[T], m: usize, n: usize) -> (Vec<T>, Vec<T>) {
    let mut a = vec![T::zero(); n * n];
    let mut g = vec![T::zero(); n];
    for i in 0..m {
        let row = &jac[i * n..(i + 1) * n];
        for j in 0..n {
            g[j] = g[j] + row[j] * r[i];
            for k in j..n {
                a[j * n + k] = a[j * n + k] + row[j] * row[k];
            }
        }
    }
    for j in 0..n {
        for k in 0..j {
            a[j * n + k] = a[k * n + j];
        }
    }
    (a, g)
}

fn project<T: Real>(p: &mut [T], bounds: Option<&[(T, T)]>) {
    if let Some(b) = bounds {
        for (v, (lo, hi)) in p.iter_mut().zip(b) {
            *v = v.max(*lo).min(*hi);
        }
    }
}

/// Minimises Σ ((yᵢ − model(xᵢ, p)) / σᵢ)² from the start `p0`.
///
/// `sigma = None` weights every point equally. Parameter errors come from
/// the inverse normal matrix at the optimum scaled by the reduced χ².
pub fn levenberg_marquardt<T, F>(
    model: &F,
    x: &[T],
    y: &[T],
    sigma: Option<&[T]>,
    p0: &[T],
    opts: &FitOptions<T>,
) -> Result<FitResult<T>, AnalysisError>
where
    T: Real,
    F: Fn(T, &[T]) -> T,
{
    let (m, n) = (x.len(), p0.len());
    if y.len() != m || sigma.is_some_and(|s| s.len() != m) {
        return Err(AnalysisError::InvalidInput {
            name: "data",
            reason: "x, y and sigma lengths differ".into(),
        });
    }
    if m < n {
        return Err(AnalysisError::InvalidInput {
            name: "data",
            reason: format!("{m} points cannot determine {n} parameters"),
        });
    }
    if opts.bounds.as_ref().is_some_and(|b| b.len() != n) {
        return Err(AnalysisError::InvalidInput {
            name: "bounds",
            reason: "one (lo, hi) pair per parameter required".into(),
        });
    }
    let bounds = opts.bounds.as_deref();
    let prob = Problem { model, x, y, sigma };
    let mut p = p0.to_vec();
    project(&mut p, bounds);
    let mut r = vec![T::zero(); m];
    let mut chi2 = prob.chi2(&p, &mut r);
    if !chi2.is_finite() {
        return Err(AnalysisError::InvalidInput {
            name: "p0",
            reason: "model is not finite at the starting point".into(),
        });
    }
    // residuals at this level are rounding noise in the model itself
    let chi2_floor = (0..m).map(|i| (y[i] * prob.weight(i)).powi(2)).sum::<T>() * T::epsilon() * T::epsilon();
    let mut lambda = T::lit(1e-3);
    let mut iterations = 0;
    let mut trial = vec![T::zero(); m];
    let mut converged = false;
    while iterations < opts.max_iterations {
        iterations += 1;
        if chi2 <= chi2_floor {
            converged = true;
            break;
        }
        prob.residuals(&p, &mut r);
        let jac = prob.jacobian(&p);
        let (a, g) = normal_equations(&jac, &r, m, n);
        let diag_max = (0..n).map(|i| a[i * n + i]).fold(T::zero(), T::max);
        let floor = diag_max * T::lit(1e-15) + T::min_positive_value();
        let mut accepted = false;
        while lambda < T::lit(1e16) {
            let mut damped = a.clone();
            for i in 0..n {
                damped[i * n + i] = damped[i * n + i] + lambda * a[i * n + i].max(floor);
            }
            if let Some(delta) = solve(damped, g.clone(), n) {
                let mut q: Vec<T> = p.iter().zip(&delta).map(|(a, b)| *a + *b).collect();
                project(&mut q, bounds);
                let c = prob.chi2(&q, &mut trial);
                if c.is_finite() && c <= chi2 {
                    let small_f = chi2 - c <= opts.ftol * c.max(T::min_positive_value());
                    let small_x = p
                        .iter()
                        .zip(&q)
                        .all(|(a, b)| (*a - *b).abs() <= opts.xtol * (a.abs() + opts.xtol));
                    p = q;
                    chi2 = c;
                    lambda = (lambda * T::lit(0.1)).max(T::lit(1e-12));
                    accepted = true;
                    converged = small_f && small_x || c <= chi2_floor;
                    break;
                }
            }
            lambda = lambda * T::lit(10.0);
        }
        if !accepted {
            // no downhill step at any damping: stationary to working precision
            converged = true;
        }
        if converged {
            break;
        }
    }
    if !converged {
        return Err(AnalysisError::FitFailure {
            iterations,
            residual_norm: chi2.sqrt().as_f64(),
        });
    }

    prob.residuals(&p, &mut r);
    let jac = prob.jacobian(&p);
    let (a, _) = normal_equations(&jac, &r, m, n);
    let inv = invert_normal(&a, n)?;
    let dof = m - n;
    let reduced_chi2 = if dof > 0 {
        chi2 / T::from_usize_lossy(dof)
    } else {
        T::one()
    };
    let covariance: Vec<T> = inv.iter().map(|v| *v * reduced_chi2).collect();
    let errors = (0..n).map(|i| covariance[i * n + i].max(T::zero()).sqrt()).collect();
    Ok(FitResult {
        params: p,
        errors,
        covariance,
        chi2,
        reduced_chi2,
        dof,
        iterations,
    })
}

/// Runs [`levenberg_marquardt`] from each start and keeps the lowest χ².
/// Fails with the first error only if every start fails.
pub fn multi_start<T, F>(
    model: &F,
    x: &[T],
    y: &[T],
    sigma: Option<&[T]>,
    starts: &[Vec<T>],
    opts: &FitOptions<T>,
) -> Result<FitResult<T>, AnalysisError>
where
    T: Real,
    F: Fn(T, &[T]) -> T,
{
    let mut best: Option<FitResult<T>> = None;
    let mut first_err = None;
    for s in starts {
        match levenberg_marquardt(model, x, y, sigma, s, opts) {
            Ok(f) => {
                if best.as_ref().is_none_or(|b| f.chi2 < b.chi2) {
                    best = Some(f);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| {
        first_err.unwrap_or(AnalysisError::InvalidInput {
            name: "starts",
            reason: "no starting points".into(),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_linear_system() {
        let x = solve(vec![2.0f64, 1.0, 1.0, 3.0], vec![3.0, 5.0], 2).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        assert!(solve(vec![1.0f64, 2.0, 2.0, 4.0], vec![1.0, 1.0], 2).is_none());
    }

    #[test]
    fn recovers_line_and_errors() {
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|t| 2.0 * t + 1.0).collect();
        let f = levenberg_marquardt(&|t, p: &[f64]| p[0] * t + p[1], &x, &y, None, &[0.0, 0.0], &FitOptions::default())
            .unwrap();
        assert!((f.params[0] - 2.0).abs() < 1e-10 && (f.params[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exponential_self_fit() {
        let x: Vec<f64> = (0..40).map(|i| i as f64 * 2.5).collect();
        let y: Vec<f64> = x.iter().map(|t| 3.0 * (-t / 17.0).exp()).collect();
        let model = |t: f64, p: &[f64]| p[0] * (-t / p[1]).exp();
        let f = levenberg_marquardt(&model, &x, &y, None, &[1.0, 5.0], &FitOptions::default()).unwrap();
        assert!((f.params[1] / 17.0 - 1.0).abs() < 1e-9, "{:?}", f.params);
    }

    #[test]
    fn degenerate_model_is_flagged() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|t| 2.0 * t).collect();
        let r = levenberg_marquardt(&|t, p: &[f64]| p[0] * p[1] * t, &x, &y, None, &[1.0, 1.0], &FitOptions::default());
        assert!(matches!(r, Err(AnalysisError::IllConditioned(_))), "{r:?}");
    }
}
