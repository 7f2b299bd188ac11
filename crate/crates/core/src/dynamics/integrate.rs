//! Dormand–Prince 5(4) with Hairer's continuous extension.
//!
//! The state is a flat slice of complex numbers. Steps never cross a
//! caller-supplied stop time, so drive discontinuities can be honoured.

use num_traits::Zero;

use crate::scalar::{Cplx, Real};

use super::DynamicsError;

/// Step-size control settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance<T> {
    pub rtol: T,
    pub atol: T,
    /// Largest step allowed, ps.
    pub max_step: T,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            rtol: T::lit(1e-8),
            atol: T::lit(1e-10),
            max_step: T::infinity(),
        }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn new(rtol: T) -> Self {
        Self {
            rtol,
            atol: rtol * T::lit(1e-2),
            ..Self::default()
        }
    }

    pub fn with_max_step(mut self, h: T) -> Self {
        self.max_step = h;
        self
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 5_000_000;

/// Adaptive stepper over `dy/dt = f(t, y)`.
pub struct Stepper<T, F> {
    f: F,
    t: T,
    y: Vec<Cplx<T>>,
    h: T,
    tol: Tolerance<T>,
    k: [Vec<Cplx<T>>; 7],
    ytmp: Vec<Cplx<T>>,
    ynew: Vec<Cplx<T>>,
    cont: [Vec<Cplx<T>>; 5],
    t_prev: T,
    steps: usize,
    fsal_valid: bool,
}

impl<T, F> Stepper<T, F>
where
    T: Real,
    F: FnMut(T, &[Cplx<T>], &mut [Cplx<T>]),
{
    pub fn new(f: F, t0: T, y0: Vec<Cplx<T>>, tol: Tolerance<T>) -> Self {
        let n = y0.len();
        let z = || vec![Cplx::zero(); n];
        Self {
            f,
            t: t0,
            h: T::zero(),
            tol,
            k: [z(), z(), z(), z(), z(), z(), z()],
            ytmp: z(),
            ynew: z(),
            cont: [y0.clone(), z(), z(), z(), z()],
            y: y0,
            t_prev: t0,
            steps: 0,
            fsal_valid: false,
        }
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn y(&self) -> &[Cplx<T>] {
        &self.y
    }

    /// Start of the last accepted step.
    pub fn t_prev(&self) -> T {
        self.t_prev
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Replaces the state, e.g. after a quantum jump.
    pub fn reset(&mut self, t: T, y: Vec<Cplx<T>>) {
        self.t = t;
        self.t_prev = t;
        self.y = y;
        self.cont[0].clone_from(&self.y);
        for c in self.cont.iter_mut().skip(1) {
            c.iter_mut().for_each(|z| *z = Cplx::zero());
        }
        self.fsal_valid = false;
    }

    /// Forces re-evaluation of the derivative at the current point; call
    /// after a discontinuity of `f`.
    pub fn invalidate(&mut self) {
        self.fsal_valid = false;
    }

    fn err_norm(&self, err: &[Cplx<T>]) -> T {
        let n = T::from_usize_lossy(err.len().max(1));
        let s: T = err
            .iter()
            .zip(&self.y)
            .zip(&self.ynew)
            .map(|((e, y0), y1)| {
                let sc = self.tol.atol + self.tol.rtol * y0.norm().max(y1.norm());
                let r = e.norm() / sc;
                r * r
            })
            .sum();
        (s / n).sqrt()
    }

    fn rms(v: &[Cplx<T>]) -> T {
        let n = T::from_usize_lossy(v.len().max(1));
        (v.iter().map(|z| z.norm_sqr()).sum::<T>() / n).sqrt()
    }

    fn initial_step(&mut self, span: T) -> T {
        let d0 = Self::rms(&self.y).max(self.tol.atol);
        let d1 = Self::rms(&self.k[0]);
        let h = if d1 <= T::lit(1e-12) * d0 {
            span * T::lit(1e-3)
        } else {
            T::lit(0.01) * d0 / d1
        };
        h.min(span).min(self.tol.max_step)
    }

    /// Takes one accepted step, never beyond `t_stop`.
    pub fn step(&mut self, t_stop: T) -> Result<(), DynamicsError> {
        let span = t_stop - self.t;
        if !(span > T::zero()) {
            return Ok(());
        }
        let n = self.y.len();
        if !self.fsal_valid {
            let (t, y) = (self.t, &self.y);
            (self.f)(t, y, &mut self.k[0]);
            self.fsal_valid = true;
        }
        if self.h <= T::zero() {
            self.h = self.initial_step(span);
        }
        let h_min = T::lit(1e-12) * self.t.abs().max(T::one());
        loop {
            self.steps += 1;
            if self.steps > MAX_STEPS {
                return Err(DynamicsError::IntegrationFailure {
                    time: self.t.as_f64(),
                    reason: "step budget exhausted".into(),
                });
            }
            let mut last = false;
            let mut h = self.h.min(self.tol.max_step);
            if h >= span {
                h = span;
                last = true;
            }
            let t = self.t;
            let l = T::lit;
            macro_rules! stage {
                ($dst:expr, $tc:expr, [$(($a:expr, $ki:expr)),*]) => {{
                    for i in 0..n {
                        let mut acc = self.y[i];
                        $( acc = acc + self.k[$ki][i].scale(h * l($a)); )*
                        self.ytmp[i] = acc;
                    }
                    let (f, ytmp) = (&mut self.f, &self.ytmp);
                    f(t + $tc * h, ytmp, &mut self.k[$dst]);
                }};
            }
            stage!(1, l(C2), [(A21, 0)]);
            stage!(2, l(C3), [(A31, 0), (A32, 1)]);
            stage!(3, l(C4), [(A41, 0), (A42, 1), (A43, 2)]);
            stage!(4, l(C5), [(A51, 0), (A52, 1), (A53, 2), (A54, 3)]);
            stage!(5, T::one(), [(A61, 0), (A62, 1), (A63, 2), (A64, 3), (A65, 4)]);
            for i in 0..n {
                self.ynew[i] = self.y[i]
                    + (self.k[0][i].scale(l(A71))
                        + self.k[2][i].scale(l(A73))
                        + self.k[3][i].scale(l(A74))
                        + self.k[4][i].scale(l(A75))
                        + self.k[5][i].scale(l(A76)))
                    .scale(h);
            }
            {
                let (f, ynew) = (&mut self.f, &self.ynew);
                f(t + h, ynew, &mut self.k[6]);
            }
            let err: Vec<Cplx<T>> = (0..n)
                .map(|i| {
                    (self.k[0][i].scale(l(E1))
                        + self.k[2][i].scale(l(E3))
                        + self.k[3][i].scale(l(E4))
                        + self.k[4][i].scale(l(E5))
                        + self.k[5][i].scale(l(E6))
                        + self.k[6][i].scale(l(E7)))
                    .scale(h)
                })
                .collect();
            let en = self.err_norm(&err);
            if !en.is_finite() {
                self.h = h * l(0.1);
                if self.h < h_min {
                    return Err(DynamicsError::IntegrationFailure {
                        time: t.as_f64(),
                        reason: "non-finite state".into(),
                    });
                }
                continue;
            }
            if en <= T::one() {
                for i in 0..n {
                    let dy = self.ynew[i] - self.y[i];
                    let bspl = self.k[0][i].scale(h) - dy;
                    self.cont[0][i] = self.y[i];
                    self.cont[1][i] = dy;
                    self.cont[2][i] = bspl;
                    self.cont[3][i] = dy - self.k[6][i].scale(h) - bspl;
                    self.cont[4][i] = (self.k[0][i].scale(l(D1))
                        + self.k[2][i].scale(l(D3))
                        + self.k[3][i].scale(l(D4))
                        + self.k[4][i].scale(l(D5))
                        + self.k[5][i].scale(l(D6))
                        + self.k[6][i].scale(l(D7)))
                    .scale(h);
                }
                std::mem::swap(&mut self.y, &mut self.ynew);
                self.k.swap(0, 6);
                self.t_prev = t;
                self.t = if last { t_stop } else { t + h };
                let fac = if en == T::zero() {
                    l(5.0)
                } else {
                    (l(0.9) * en.powf(l(-0.2))).min(l(5.0)).max(l(0.2))
                };
                // a forced short final step says nothing about the next one
                if !last || h * fac > self.h {
                    self.h = h * fac;
                }
                return Ok(());
            }
            let fac = (l(0.9) * en.powf(l(-0.2))).max(l(0.1));
            self.h = h * fac;
            if self.h < h_min {
                return Err(DynamicsError::IntegrationFailure {
                    time: t.as_f64(),
                    reason: format!("step size underflow (h = {:e} ps)", self.h),
                });
            }
        }
    }

    /// Interpolated state at `t` inside the last accepted step.
    pub fn dense_into(&self, t: T, out: &mut [Cplx<T>]) {
        let h = self.t - self.t_prev;
        if h <= T::zero() {
            out.copy_from_slice(&self.y);
            return;
        }
        let th = (t - self.t_prev) / h;
        let th1 = T::one() - th;
        for (i, o) in out.iter_mut().enumerate() {
            let c = &self.cont;
            *o = c[0][i]
                + (c[1][i] + (c[2][i] + (c[3][i] + c[4][i].scale(th1)).scale(th)).scale(th1))
                    .scale(th);
        }
    }

    pub fn dense(&self, t: T) -> Vec<Cplx<T>> {
        let mut out = vec![Cplx::zero(); self.y.len()];
        self.dense_into(t, &mut out);
        out
    }
}

/// Integrates from `t0` over the sorted `grid` (all ≥ `t0`), splitting at
/// `stops`, and returns the state at every grid time.
pub fn integrate_on_grid<T, F>(
    f: F,
    t0: T,
    y0: Vec<Cplx<T>>,
    grid: &[T],
    stops: &[T],
    tol: Tolerance<T>,
) -> Result<Vec<Vec<Cplx<T>>>, DynamicsError>
where
    T: Real,
    F: FnMut(T, &[Cplx<T>], &mut [Cplx<T>]),
{
    let mut out = Vec::with_capacity(grid.len());
    let Some(&t_end) = grid.last() else {
        return Ok(out);
    };
    let mut stepper = Stepper::new(f, t0, y0, tol);
    let mut gi = 0;
    while gi < grid.len() && grid[gi] <= t0 {
        out.push(stepper.y().to_vec());
        gi += 1;
    }
    let mut stop_iter = stops.iter().copied().filter(|&s| s > t0 && s < t_end).peekable();
    while stepper.t() < t_end {
        while matches!(stop_iter.peek(), Some(&s) if s <= stepper.t()) {
            stop_iter.next();
            stepper.invalidate();
        }
        let target = stop_iter.peek().copied().unwrap_or(t_end);
        stepper.step(target)?;
        while gi < grid.len() && grid[gi] <= stepper.t() {
            out.push(stepper.dense(grid[gi]));
            gi += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_and_dense_output() {
        // y' = (-0.3 + 2i) y
        let lam = Cplx::new(-0.3, 2.0);
        let f = move |_t: f64, y: &[Cplx<f64>], d: &mut [Cplx<f64>]| d[0] = lam * y[0];
        let grid: Vec<f64> = (0..=50).map(|k| k as f64 * 0.2).collect();
        let tol = Tolerance::new(1e-10);
        let ys = integrate_on_grid(f, 0.0, vec![Cplx::new(1.0, 0.0)], &grid, &[], tol).unwrap();
        for (t, y) in grid.iter().zip(&ys) {
            let exact = (lam * t).exp();
            assert!((y[0] - exact).norm() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn stops_are_respected() {
        let mut seen = Vec::new();
        let f = |t: f64, _y: &[Cplx<f64>], d: &mut [Cplx<f64>]| {
            // triangular bump with kinks at 1, 1.25 and 1.5; area 0.25
            d[0] = Cplx::new((1.0 - (t - 1.25).abs() / 0.25).max(0.0), 0.0);
        };
        let mut st = Stepper::new(f, 0.0, vec![Cplx::new(0.0, 0.0)], Tolerance::new(1e-9));
        for stop in [1.0, 1.25, 1.5, 5.0] {
            while st.t() < stop {
                st.step(stop).unwrap();
                seen.push(st.t());
            }
            st.invalidate();
        }
        assert!(seen.contains(&1.0) && seen.contains(&1.5));
        assert!((st.y()[0].re - 0.25).abs() < 1e-12);
    }

    #[test]
    fn underflow_reports_time() {
        // y' = y² blows up at t = 1
        let f = |_t: f64, y: &[Cplx<f64>], d: &mut [Cplx<f64>]| d[0] = y[0] * y[0];
        let r = integrate_on_grid(f, 0.0, vec![Cplx::new(1.0, 0.0)], &[2.0], &[], Tolerance::new(1e-8));
        match r {
            Err(DynamicsError::IntegrationFailure { time, .. }) => assert!((time - 1.0).abs() < 1e-2),
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
