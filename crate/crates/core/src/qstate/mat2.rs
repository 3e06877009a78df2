//! Dense 2x2 complex matrices with exactly the linear algebra the rest of
//! the crate needs: products, adjoints, traces, and a closed-form Hermitian
//! eigendecomposition.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// A 2x2 complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub e: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub const fn new(e: [[Complex64; 2]; 2]) -> Self {
        Self { e }
    }

    pub fn zero() -> Self {
        Self::new([[Complex64::ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        Self::from_diag(Complex64::ONE, Complex64::ONE)
    }

    pub fn from_diag(a: Complex64, d: Complex64) -> Self {
        Self::new([[a, Complex64::ZERO], [Complex64::ZERO, d]])
    }

    pub fn from_real_diag(a: f64, d: f64) -> Self {
        Self::from_diag(Complex64::new(a, 0.0), Complex64::new(d, 0.0))
    }

    /// Outer product |ket><ket|.
    pub fn projector(ket: [Complex64; 2]) -> Self {
        Self::outer(ket, ket)
    }

    /// Outer product |ket><bra|, conjugating the bra amplitudes.
    pub fn outer(ket: [Complex64; 2], bra: [Complex64; 2]) -> Self {
        let mut e = [[Complex64::ZERO; 2]; 2];
        for (i, k) in ket.iter().enumerate() {
            for (j, b) in bra.iter().enumerate() {
                e[i][j] = k * b.conj();
            }
        }
        Self::new(e)
    }

    pub fn adjoint(&self) -> Self {
        Self::new([
            [self.e[0][0].conj(), self.e[1][0].conj()],
            [self.e[0][1].conj(), self.e[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_complex(Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        let mut out = *self;
        for row in out.e.iter_mut() {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        out
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.e[0][0] * v[0] + self.e[0][1] * v[1],
            self.e[1][0] * v[0] + self.e[1][1] * v[1],
        ]
    }

    /// Largest entrywise absolute difference from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.e[i][j] - other.e[i][j]).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation from the adjoint; zero for Hermitian input.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Largest entrywise deviation of `M^dag M` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    /// Eigenvalues of a Hermitian matrix, ascending. The caller is expected
    /// to have checked Hermiticity; the diagonal imaginary parts and any
    /// off-diagonal asymmetry are discarded.
    ///
    /// The smaller-magnitude root comes from the determinant identity
    /// `lam0 lam1 = det`, which avoids the cancellation in `mid - disc` and
    /// keeps relative accuracy for nearly singular matrices.
    pub fn eigenvalues_hermitian(&self) -> [f64; 2] {
        let (a, d, b) = self.hermitian_parts();
        let mid = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        if disc == 0.0 {
            return [mid, mid];
        }
        let det = a * d - b.norm_sqr();
        if mid >= 0.0 {
            let hi = mid + disc;
            let lo = if hi == 0.0 { mid - disc } else { det / hi };
            [lo, hi]
        } else {
            let lo = mid - disc;
            let hi = if lo == 0.0 { mid + disc } else { det / lo };
            [lo, hi]
        }
    }

    /// Eigendecomposition of a Hermitian matrix: eigenvalues ascending and
    /// the matching orthonormal eigenvectors.
    pub fn eigh(&self) -> ([f64; 2], [[Complex64; 2]; 2]) {
        let (a, d, b) = self.hermitian_parts();
        let vals = self.eigenvalues_hermitian();
        if b.norm() < f64::EPSILON * (1.0 + a.abs() + d.abs()) {
            // Already diagonal; order basis vectors by eigenvalue.
            let e0 = [Complex64::ONE, Complex64::ZERO];
            let e1 = [Complex64::ZERO, Complex64::ONE];
            return if a <= d {
                (vals, [e0, e1])
            } else {
                (vals, [e1, e0])
            };
        }
        let vecs = vals.map(|lam| {
            // Pick the better-conditioned of the two null-space expressions.
            let v1 = [b, Complex64::new(lam - a, 0.0)];
            let v2 = [Complex64::new(lam - d, 0.0), b.conj()];
            let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
            let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
            let v = if n1 >= n2 { v1 } else { v2 };
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            [v[0] / norm, v[1] / norm]
        });
        (vals, vecs)
    }

    /// Rebuild `sum_k f(lambda_k) |v_k><v_k|` from the eigendecomposition.
    pub fn hermitian_map(&self, f: impl Fn(f64) -> f64) -> Self {
        let (vals, vecs) = self.eigh();
        let mut out = Self::zero();
        for (lam, vec) in vals.iter().zip(vecs.iter()) {
            out = out + Self::projector(*vec).scale(f(*lam));
        }
        out
    }

    fn hermitian_parts(&self) -> (f64, f64, Complex64) {
        let a = self.e[0][0].re;
        let d = self.e[1][1].re;
        let b = 0.5 * (self.e[0][1] + self.e[1][0].conj());
        (a, d, b)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] += rhs.e[i][j];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] -= rhs.e[i][j];
            }
        }
        out
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = self.e[i][0] * rhs.e[0][j] + self.e[i][1] * rhs.e[1][j];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigh_diagonal() {
        let m = Mat2::from_real_diag(0.75, 0.25);
        let (vals, vecs) = m.eigh();
        assert!((vals[0] - 0.25).abs() < 1e-15);
        assert!((vals[1] - 0.75).abs() < 1e-15);
        // Ascending order pairs the first eigenvector with the 0.25 entry.
        assert!((vecs[0][1].norm() - 1.0).abs() < 1e-15);
        assert!((vecs[1][0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigh_reconstructs_hermitian_matrix() {
        let m = Mat2::new([[c(0.7, 0.0), c(0.1, -0.3)], [c(0.1, 0.3), c(0.2, 0.0)]]);
        let rebuilt = m.hermitian_map(|x| x);
        assert!(m.max_abs_diff(&rebuilt) < 1e-14);
    }

    #[test]
    fn eigh_vectors_are_orthonormal() {
        let m = Mat2::new([[c(1.3, 0.0), c(-0.4, 0.2)], [c(-0.4, -0.2), c(0.9, 0.0)]]);
        let (_, vecs) = m.eigh();
        let dot = vecs[0][0].conj() * vecs[1][0] + vecs[0][1].conj() * vecs[1][1];
        assert!(dot.norm() < 1e-14);
        for v in vecs {
            assert!(((v[0].norm_sqr() + v[1].norm_sqr()) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn projector_is_idempotent() {
        let ket = [c(0.6, 0.0), c(0.0, 0.8)];
        let p = Mat2::projector(ket);
        assert!((p * p).max_abs_diff(&p.scale(0.36 + 0.64)) < 1e-15);
        assert!(p.hermiticity_deviation() < 1e-15);
    }
}
