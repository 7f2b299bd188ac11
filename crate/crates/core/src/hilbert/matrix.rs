//! Dense square complex matrices.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{c, Cplx, Real};

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T> {
    dim: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> Operator<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Cplx::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Cplx::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a diagonal matrix from real entries.
    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = c(d);
        }
        m
    }

    /// Matrix with a single unit entry at `(row, col)`.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(row, col)] = Cplx::one();
        m
    }

    /// Wraps row-major data. Returns `None` unless `data.len()` is a square.
    pub fn from_row_major(data: Vec<Cplx<T>>) -> Option<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        (dim * dim == data.len()).then_some(Self { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Cplx<T>] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Cplx<T>> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Cplx<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(Cplx::zero(), |a, b| a + b)
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(c(s))
    }

    /// `self · rhs` written into `out`; avoids allocation in inner loops.
    pub fn mul_into(&self, rhs: &Self, out: &mut Self) {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let n = self.dim;
        out.dim = n;
        out.data.clear();
        out.data.resize(n * n, Cplx::zero());
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let mut out = vec![Cplx::zero(); self.dim];
        self.apply_into(v, &mut out);
        out
    }

    pub fn apply_into(&self, v: &[Cplx<T>], out: &mut [Cplx<T>]) {
        assert_eq!(v.len(), self.dim, "vector dimension mismatch");
        let n = self.dim;
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let row = &self.data[i * n..(i + 1) * n];
            *o = row
                .iter()
                .zip(v)
                .fold(Cplx::zero(), |acc, (&a, &b)| acc + a * b);
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (na, nb) = (self.dim, rhs.dim);
        Self::from_fn(na * nb, |i, j| {
            self[(i / nb, j / nb)] * rhs[(i % nb, j % nb)]
        })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Kronecker product of two operators.
pub fn tensor_product<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Operator<T> {
    a.kron(b)
}

impl<T> Index<(usize, usize)> for Operator<T> {
    type Output = Cplx<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Operator<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;

    fn mul(self, rhs: &Operator<T>) -> Operator<T> {
        let mut out = Operator::zeros(self.dim);
        self.mul_into(rhs, &mut out);
        out
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;

    fn add(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        Operator {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;

    fn sub(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        Operator {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &Operator<T> {
    type Output = Operator<T>;

    fn neg(self) -> Operator<T> {
        self.scale_real(-T::one())
    }
}

impl<T: Real> AddAssign<&Operator<T>> for Operator<T> {
    fn add_assign(&mut self, rhs: &Operator<T>) {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a = *a + *b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Op = Operator<f64>;

    fn pauli_z() -> Op {
        Op::diagonal(&[1.0, -1.0])
    }

    fn arb_op(n: usize) -> impl Strategy<Value = Op> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(|v| {
            Op::from_row_major(v.into_iter().map(|(re, im)| Cplx::new(re, im)).collect())
                .unwrap()
        })
    }

    #[test]
    fn identity_kron_identity() {
        let k = tensor_product(&Op::identity(2), &Op::identity(3));
        assert_eq!(k, Op::identity(6));
    }

    #[test]
    fn sigma_z_kron_identity_spectrum() {
        let k = pauli_z().kron(&Op::identity(2));
        let diag: Vec<f64> = (0..4).map(|i| k[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
        assert_eq!(k.max_abs_diff(&Op::diagonal(&diag)), 0.0);
    }

    #[test]
    fn kron_block_layout() {
        let a = Op::unit(2, 0, 1);
        let b = Op::unit(2, 1, 0);
        let k = a.kron(&b);
        // |0⟩⟨1| ⊗ |1⟩⟨0| = |01⟩⟨10|, row 1 col 2
        assert_eq!(k[(1, 2)], Cplx::new(1.0, 0.0));
        assert_eq!(k.as_slice().iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    proptest! {
        #[test]
        fn mixed_product_property(a in arb_op(2), b in arb_op(2), cm in arb_op(2), d in arb_op(2)) {
            let lhs = &a.kron(&b) * &cm.kron(&d);
            let rhs = (&a * &cm).kron(&(&b * &d));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn kron_associative(a in arb_op(2), b in arb_op(2), cm in arb_op(3)) {
            let lhs = a.kron(&b).kron(&cm);
            let rhs = a.kron(&b.kron(&cm));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn kron_bilinear(a in arb_op(2), b in arb_op(2), cm in arb_op(2), s in -2.0..2.0f64) {
            let lhs = (&a + &b.scale_real(s)).kron(&cm);
            let rhs = &a.kron(&cm) + &b.kron(&cm).scale_real(s);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }
}
