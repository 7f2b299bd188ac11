use super::AnalysisError;
use crate::scalar::Real;

/// Samples y(x) on a strictly increasing grid, with optional 1σ errors.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve<T> {
    x: Vec<T>,
    y: Vec<T>,
    y_err: Option<Vec<T>>,
}

impl<T: Real> SampledCurve<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self, AnalysisError> {
        Self::build(x, y, None)
    }

    pub fn with_errors(x: Vec<T>, y: Vec<T>, y_err: Vec<T>) -> Result<Self, AnalysisError> {
        Self::build(x, y, Some(y_err))
    }

    fn build(x: Vec<T>, y: Vec<T>, y_err: Option<Vec<T>>) -> Result<Self, AnalysisError> {
        if x.len() != y.len() {
            return Err(AnalysisError::InvalidCurve(format!(
                "x has {} points but y has {}",
                x.len(),
                y.len()
            )));
        }
        if let Some(e) = &y_err {
            if e.len() != y.len() {
                return Err(AnalysisError::InvalidCurve("y_err length differs from y".into()));
            }
            if e.iter().any(|s| !(*s > T::zero()) || !s.is_finite()) {
                return Err(AnalysisError::InvalidCurve("y_err must be positive and finite".into()));
            }
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(AnalysisError::InvalidCurve("non-finite sample".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(AnalysisError::InvalidCurve("x must be strictly increasing".into()));
        }
        Ok(Self { x, y, y_err })
    }

    /// Samples `f` on `x`.
    pub fn from_fn(x: Vec<T>, f: impl Fn(T) -> T) -> Result<Self, AnalysisError> {
        let y = x.iter().map(|&t| f(t)).collect();
        Self::new(x, y)
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn y(&self) -> &[T] {
        &self.y
    }

    pub fn y_err(&self) -> Option<&[T]> {
        self.y_err.as_deref()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Trapezoidal integral.
    pub fn integral(&self) -> T {
        self.x
            .windows(2)
            .zip(self.y.windows(2))
            .map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) * T::lit(0.5))
            .sum()
    }

    /// Spacing if the grid is uniform to `rel_tol`.
    pub fn uniform_step(&self, rel_tol: T) -> Option<T> {
        if self.x.len() < 2 {
            return None;
        }
        let h = (self.x[self.x.len() - 1] - self.x[0]) / T::from_usize_lossy(self.x.len() - 1);
        self.x
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= rel_tol * h)
            .then_some(h)
    }

    /// Linear interpolation, zero outside the sampled range.
    pub fn interpolate(&self, t: T) -> T {
        let (x, y) = (&self.x, &self.y);
        if x.is_empty() || t < x[0] || t > x[x.len() - 1] {
            return T::zero();
        }
        let i = x.partition_point(|v| *v <= t).clamp(1, x.len() - 1);
        let (x0, x1) = (x[i - 1], x[i]);
        let w = (t - x0) / (x1 - x0);
        y[i - 1] + (y[i] - y[i - 1]) * w
    }

    /// Points with `lo < x ≤ hi`, errors kept.
    pub fn window(&self, lo: T, hi: T) -> Result<Self, AnalysisError> {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| self.x[i] > lo && self.x[i] <= hi).collect();
        let pick = |v: &[T]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Self::build(pick(&self.x), pick(&self.y), self.y_err.as_deref().map(pick))
    }

    /// Index and value of the largest sample.
    pub fn peak(&self) -> Option<(usize, T)> {
        self.y
            .iter()
            .copied()
            .enumerate()
            .fold(None, |best, (i, v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((i, v)),
            })
    }

    /// Pointwise sum on an identical grid.
    pub fn add(&self, other: &Self) -> Result<Self, AnalysisError> {
        if self.x != other.x {
            return Err(AnalysisError::InvalidCurve("grids differ".into()));
        }
        let y = self.y.iter().zip(&other.y).map(|(a, b)| *a + *b).collect();
        Self::new(self.x.clone(), y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SampledCurve::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(SampledCurve::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(SampledCurve::with_errors(vec![0.0, 1.0], vec![1.0, 1.0], vec![0.0, 1.0]).is_err());
        let c = SampledCurve::new(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(c.integral(), 2.0);
        assert_eq!(c.interpolate(0.5), 1.0);
        assert_eq!(c.peak(), Some((1, 2.0)));
        assert_eq!(c.uniform_step(1e-9), Some(1.0));
    }
}
