use core::ops::{Add, Mul, Sub};

use super::Complex;

/// Dense `N×N` complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<const N: usize>(pub [[Complex; N]; N]);

pub type Mat2 = Matrix<2>;
pub type Mat4 = Matrix<4>;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

impl<const N: usize> Matrix<N> {
    pub const fn zero() -> Self {
        Matrix([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        Self::diagonal([ONE; N])
    }

    pub fn diagonal(d: [Complex; N]) -> Self {
        let mut m = Self::zero();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zero();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.0[i][j] = Complex::new(v, 0.0);
            }
        }
        m
    }

    /// `|v⟩⟨w|`
    pub fn outer(v: &[Complex; N], w: &[Complex; N]) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = v[i] * w[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: Complex) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex::new(s, 0.0))
    }

    pub fn mul_vec(&self, v: &[Complex; N]) -> [Complex; N] {
        let mut out = [ZERO; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }

    /// Largest elementwise modulus.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `max |A − A†|`
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |A†A − I|`
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    /// Hilbert-Schmidt inner product `tr(A†B)`.
    pub fn hs_inner(&self, other: &Self) -> Complex {
        let mut acc = ZERO;
        for i in 0..N {
            for j in 0..N {
                acc += self.0[i][j].conj() * other.0[i][j];
            }
        }
        acc
    }

    /// Smallest `max |A − e^{iφ}B|` over global phases `φ`, with the minimizing phase.
    ///
    /// The optimal phase aligns `tr(B†A)`; this is exact for the Frobenius
    /// distance and a tight bound for the max norm when `A ≈ e^{iφ}B`.
    pub fn phase_aligned_distance(&self, other: &Self) -> (f64, f64) {
        let overlap = other.hs_inner(self);
        let phase = if overlap.norm() > 0.0 { overlap.arg() } else { 0.0 };
        let aligned = other.scale(Complex::from_polar(1.0, phase));
        (self.max_abs_diff(&aligned), phase)
    }
}

impl Mat4 {
    /// Kronecker product with `left` acting on spin b and `right` on spin a:
    /// `out[2i+j][2k+l] = left[i][k]·right[j][l]`.
    pub fn kron(left: &Mat2, right: &Mat2) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.0[2 * i + j][2 * k + l] = left.0[i][k] * right.0[j][l];
                    }
                }
            }
        }
        m
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += *b;
        }
        self
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a -= *b;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn kron_index_layout() {
        let left = Matrix([[c(1.0, 0.0), c(2.0, 0.0)], [c(3.0, 0.0), c(4.0, 0.0)]]);
        let right = Matrix([[c(0.0, 1.0), c(5.0, 0.0)], [c(6.0, 0.0), c(7.0, 0.0)]]);
        let k = Mat4::kron(&left, &right);
        for i in 0..2 {
            for j in 0..2 {
                for kk in 0..2 {
                    for l in 0..2 {
                        assert_eq!(k.get(2 * i + j, 2 * kk + l), left.0[i][kk] * right.0[j][l]);
                    }
                }
            }
        }
    }

    #[test]
    fn phase_alignment_recovers_global_phase() {
        let a = Mat4::identity();
        let b = a.scale(Complex::from_polar(1.0, 0.7));
        let (dist, phase) = a.phase_aligned_distance(&b);
        assert!(dist < 1e-15);
        assert!((phase + 0.7).abs() < 1e-15);
    }
}
