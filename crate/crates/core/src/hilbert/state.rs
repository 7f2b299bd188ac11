use num_traits::Zero;

use super::eigen::hermitian_eigenvalues;
use super::matrix::Operator;
use super::space::{Level, SystemSpace};
use super::HilbertError;
use crate::scalar::{c, Cplx, Real};

/// Tolerances a density matrix must meet.
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Cplx<T>>,
}

impl<T: Real> PureState<T> {
    /// Normalizes `amplitudes`; errors on a zero vector.
    pub fn new(amplitudes: Vec<Cplx<T>>) -> Result<Self, HilbertError> {
        let mut s = Self { amplitudes };
        let n = s.norm_sqr();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(HilbertError::ZeroNorm);
        }
        s.normalize();
        Ok(s)
    }

    pub fn basis(space: &SystemSpace, level: Level, photons: usize) -> Self {
        let mut amplitudes = vec![Cplx::zero(); space.total_dim()];
        amplitudes[space.index(level, photons)] = c(T::one());
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let inv = T::one() / self.norm_sqr().sqrt();
        for z in &mut self.amplitudes {
            *z = z.scale(inv);
        }
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        let n = self.dim();
        DensityMatrix {
            inner: Operator::from_fn(n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj()),
        }
    }
}

/// Density operator on a [`SystemSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    inner: Operator<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(op: Operator<T>) -> Result<Self, HilbertError> {
        let rho = Self { inner: op };
        rho.check()?;
        Ok(rho)
    }

    /// Wraps without validation; used by integrators that report drift
    /// separately.
    pub(crate) fn from_operator_unchecked(op: Operator<T>) -> Self {
        Self { inner: op }
    }

    pub fn basis(space: &SystemSpace, level: Level, photons: usize) -> Self {
        PureState::basis(space, level, photons).to_density()
    }

    pub fn ground(space: &SystemSpace) -> Self {
        Self::basis(space, Level::Ground, 0)
    }

    /// Convex combination of pure states; weights are renormalized.
    pub fn mixture(parts: &[(T, PureState<T>)]) -> Result<Self, HilbertError> {
        let dim = parts.first().ok_or(HilbertError::ZeroNorm)?.1.dim();
        let total: T = parts.iter().map(|(w, _)| *w).sum();
        if !(total > T::zero()) {
            return Err(HilbertError::ZeroNorm);
        }
        let mut acc = Operator::zeros(dim);
        for (w, psi) in parts {
            if psi.dim() != dim {
                return Err(HilbertError::DimensionMismatch {
                    expected: dim,
                    found: psi.dim(),
                });
            }
            acc += &psi.to_density().inner.scale_real(*w / total);
        }
        Self::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn as_operator(&self) -> &Operator<T> {
        &self.inner
    }

    pub fn into_operator(self) -> Operator<T> {
        self.inner
    }

    pub fn trace(&self) -> T {
        self.inner.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.inner)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues().first().copied().unwrap_or_else(T::zero)
    }

    /// Population of diagonal basis entry `i`.
    pub fn population(&self, i: usize) -> T {
        self.inner[(i, i)].re
    }

    pub fn check(&self) -> Result<(), HilbertError> {
        let herm = self.inner.max_abs_diff(&self.inner.adjoint());
        if herm > T::lit(HERMITIAN_TOL) {
            return Err(HilbertError::NotHermitian(herm.as_f64()));
        }
        let tr = self.trace();
        if (tr - T::one()).abs() > T::lit(TRACE_TOL) {
            return Err(HilbertError::TraceNotUnity(tr.as_f64()));
        }
        let min = self.min_eigenvalue();
        if min < -T::lit(POSITIVITY_TOL) {
            return Err(HilbertError::NotPositive(min.as_f64()));
        }
        Ok(())
    }
}

/// Anything an operator can be averaged over.
pub trait Observable<T> {
    fn dim(&self) -> usize;
    fn average(&self, op: &Operator<T>) -> Cplx<T>;
}

impl<T: Real> Observable<T> for DensityMatrix<T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn average(&self, op: &Operator<T>) -> Cplx<T> {
        // Tr(Aρ) = Σ_ij A_ij ρ_ji
        let n = self.dim();
        let mut acc = Cplx::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + op[(i, j)] * self.inner[(j, i)];
            }
        }
        acc
    }
}

impl<T: Real> Observable<T> for PureState<T> {
    fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    fn average(&self, op: &Operator<T>) -> Cplx<T> {
        let v = op.apply(&self.amplitudes);
        self.amplitudes
            .iter()
            .zip(&v)
            .fold(Cplx::zero(), |acc, (a, b)| acc + a.conj() * b)
    }
}

/// `Tr(op·ρ)` or `⟨ψ|op|ψ⟩`.
pub fn expectation<T: Real, S: Observable<T>>(
    op: &Operator<T>,
    state: &S,
) -> Result<Cplx<T>, HilbertError> {
    if op.dim() != state.dim() {
        return Err(HilbertError::DimensionMismatch {
            expected: op.dim(),
            found: state.dim(),
        });
    }
    Ok(state.average(op))
}
