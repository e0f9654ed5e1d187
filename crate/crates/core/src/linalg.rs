//! Dense symmetric linear algebra at desk scale: Cholesky factorization for
//! the step matrix and a cyclic Jacobi eigenvalue solver for the
//! definiteness checks. Both are direct and deterministic; no pivoting
//! heuristics, no iteration-order dependence on the data.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct SpdFactor {
    n: usize,
    lower: Vec<f64>,
}

impl SpdFactor {
    /// Factor a dense row-major symmetric matrix. Fails with
    /// [`Error::IndefiniteStepMatrix`] on a nonpositive pivot.
    pub(crate) fn cholesky(a: &[f64], n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let mut lower = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= lower[i * n + k] * lower[j * n + k];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(Error::IndefiniteStepMatrix);
                    }
                    lower[i * n + i] = math::sqrt(s);
                } else {
                    lower[i * n + j] = s / lower[j * n + j];
                }
            }
        }
        Ok(Self { n, lower })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solve `A x = b` by forward/back substitution.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: b.len(),
            });
        }
        let n = self.n;
        let l = &self.lower;
        let mut x = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= l[i * n + k] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= l[k * n + i] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        Ok(x)
    }
}

/// All eigenvalues of a dense row-major symmetric matrix, ascending.
/// Cyclic Jacobi; quadratically convergent, capped at 60 sweeps.
pub(crate) fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    if n <= 1 {
        return a;
    }
    let frobenius = math::sqrt(a.iter().map(|v| v * v).sum());
    let tol = 1e-15 * frobenius.max(f64::MIN_POSITIVE);
    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        if math::sqrt(off) <= tol {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + math::sqrt(theta * theta + 1.0));
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use approx::assert_relative_eq;

    #[test]
    fn cholesky_solves_known_system() {
        // A = [[4,2],[2,3]], b = [2,1] -> x = [1/2, 0]
        let f = SpdFactor::cholesky(&[4.0, 2.0, 2.0, 3.0], 2).unwrap();
        let x = f.solve(&[2.0, 1.0]).unwrap();
        assert_relative_eq!(x[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(x[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert!(SpdFactor::cholesky(&[1.0, 2.0, 2.0, 1.0], 2).is_err());
        assert!(SpdFactor::cholesky(&[-1.0, 0.0, 0.0, 1.0], 2).is_err());
    }

    #[test]
    fn cholesky_random_spd_roundtrip() {
        let n = 24;
        let mut rng = SplitMix64::new(11);
        // A = G^T G + I is SPD.
        let g: Vec<f64> = (0..n * n).map(|_| rng.next_symmetric()).collect();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = if i == j { 1.0 } else { 0.0 };
                for k in 0..n {
                    s += g[k * n + i] * g[k * n + j];
                }
                a[i * n + j] = s;
            }
        }
        let x_true: Vec<f64> = (0..n).map(|_| rng.next_symmetric()).collect();
        let mut b = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                b[i] += a[i * n + j] * x_true[j];
            }
        }
        let f = SpdFactor::cholesky(&a, n).unwrap();
        let x = f.solve(&b).unwrap();
        for i in 0..n {
            assert_relative_eq!(x[i], x_true[i], epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    #[test]
    fn jacobi_diagonal_passthrough() {
        let eigs = symmetric_eigenvalues(vec![3.0, 0.0, 0.0, -1.0], 2);
        assert_eq!(eigs, vec![-1.0, 3.0]);
    }

    #[test]
    fn jacobi_matches_tridiagonal_spectrum() {
        // tridiag(1, -2, 1) on n points has eigenvalues -4 sin^2(k pi / (2(n+1))).
        let n = 16;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = -2.0;
            if i > 0 {
                a[i * n + i - 1] = 1.0;
                a[(i - 1) * n + i] = 1.0;
            }
        }
        let eigs = symmetric_eigenvalues(a, n);
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| {
                let s = math::sin(k as f64 * core::f64::consts::PI / (2.0 * (n as f64 + 1.0)));
                -4.0 * s * s
            })
            .collect();
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (e, x) in eigs.iter().zip(expect.iter()) {
            assert_relative_eq!(e, x, epsilon = 1e-12, max_relative = 1e-12);
        }
    }
}
