//! Spectrum of Hermitian matrices by cyclic Jacobi rotations.
//!
//! A Hermitian `H = A + iB` is embedded as the real symmetric
//! `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every eigenvalue
//! doubled. The matrices here are at most ~20×20, so the O(n³) sweep cost is
//! irrelevant.

use super::matrix::Operator;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a real symmetric matrix (row-major, `n × n`), ascending.
pub fn symmetric_eigenvalues<T: Real>(mut a: Vec<T>, n: usize) -> Vec<T> {
    assert_eq!(a.len(), n * n);
    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        let scale: T = (0..n).map(|i| a[i * n + i] * a[i * n + i]).sum::<T>() + off;
        if off <= T::epsilon() * T::epsilon() * scale.max(T::min_positive_value()) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut ev: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Eigenvalues of the Hermitian part of `op`, ascending.
pub fn hermitian_eigenvalues<T: Real>(op: &Operator<T>) -> Vec<T> {
    let n = op.dim();
    let m = 2 * n;
    let mut a = vec![T::zero(); m * m];
    for i in 0..n {
        for j in 0..n {
            // symmetrize to suppress round-off anti-Hermitian residue
            let z = (op[(i, j)] + op[(j, i)].conj()).scale(T::lit(0.5));
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let doubled = symmetric_eigenvalues(a, m);
    doubled.chunks(2).map(|p| (p[0] + p[1]) * T::lit(0.5)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Cplx;

    #[test]
    fn pauli_y_spectrum() {
        let y = Operator::<f64>::from_fn(2, |i, j| match (i, j) {
            (0, 1) => Cplx::new(0.0, -1.0),
            (1, 0) => Cplx::new(0.0, 1.0),
            _ => Cplx::new(0.0, 0.0),
        });
        let ev = hermitian_eigenvalues(&y);
        assert!((ev[0] + 1.0).abs() < 1e-12);
        assert!((ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn known_real_symmetric() {
        // [[2,1],[1,2]] -> {1, 3}
        let ev = symmetric_eigenvalues(vec![2.0_f64, 1.0, 1.0, 2.0], 2);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn trace_matches_eigen_sum() {
        let h = Operator::<f64>::from_fn(4, |i, j| {
            let (a, b) = (i.min(j) as f64, i.max(j) as f64);
            let im = if i < j { 0.3 * b } else if i > j { -0.3 * b } else { 0.0 };
            Cplx::new(1.0 / (1.0 + a + b), im)
        });
        let ev = hermitian_eigenvalues(&h);
        let s: f64 = ev.iter().sum();
        assert!((s - h.trace().re).abs() < 1e-12);
    }
}
