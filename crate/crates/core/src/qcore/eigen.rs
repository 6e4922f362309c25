//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use super::{Complex, Matrix};

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition `A = V·diag(λ)·V†` of a Hermitian matrix.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen<const N: usize> {
    /// Eigenvalues in ascending order.
    pub values: [f64; N],
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: Matrix<N>,
}

impl<const N: usize> HermitianEigen<N> {
    /// Only the Hermitian part `(A + A†)/2` of the input is used.
    pub fn new(a: &Matrix<N>) -> Self {
        let mut m = (*a + a.adjoint()).scale_real(0.5);
        let mut v = Matrix::<N>::identity();
        let scale = m.max_norm().max(f64::MIN_POSITIVE);

        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..N)
                .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| m.0[i][j].norm_sqr())
                .sum();
            if libm::sqrt(off) <= 1e-17 * scale {
                break;
            }
            for p in 0..N {
                for q in (p + 1)..N {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }

        let mut order = [0usize; N];
        for (i, o) in order.iter_mut().enumerate() {
            *o = i;
        }
        order.sort_by(|&i, &j| m.0[i][i].re.total_cmp(&m.0[j][j].re));

        let mut values = [0.0; N];
        let mut vectors = Matrix::<N>::zero();
        for (k, &src) in order.iter().enumerate() {
            values[k] = m.0[src][src].re;
            for r in 0..N {
                vectors.0[r][k] = v.0[r][src];
            }
        }
        HermitianEigen { values, vectors }
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    /// `V·diag(f(λ))·V†`
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix<N> {
        let mut d = [Complex::new(0.0, 0.0); N];
        for (dk, &l) in d.iter_mut().zip(self.values.iter()) {
            *dk = Complex::new(f(l), 0.0);
        }
        self.vectors * Matrix::diagonal(d) * self.vectors.adjoint()
    }
}

/// Zero the `(p, q)` entry: rephase column `q` so the pivot is real, then
/// apply a real Jacobi rotation.
fn rotate<const N: usize>(m: &mut Matrix<N>, v: &mut Matrix<N>, p: usize, q: usize) {
    let apq = m.0[p][q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = m.0[p][p].re;
    let aqq = m.0[q][q].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(1.0 + theta * theta))
    } else {
        -1.0 / (-theta + libm::sqrt(1.0 + theta * theta))
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;

    // J = diag(.., e^{-iφ} at q, ..) · G with G the real rotation on (p, q).
    let mut j = Matrix::<N>::identity();
    let conj_phase = phase.conj();
    j.0[p][p] = Complex::new(c, 0.0);
    j.0[p][q] = Complex::new(s, 0.0);
    j.0[q][p] = conj_phase * (-s);
    j.0[q][q] = conj_phase * c;

    *m = j.adjoint() * *m * j;
    m.0[p][q] = Complex::new(0.0, 0.0);
    m.0[q][p] = Complex::new(0.0, 0.0);
    for i in 0..N {
        m.0[i][i].im = 0.0;
    }
    *v = *v * j;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Mat4;

    #[test]
    fn diagonal_input_is_sorted() {
        let m = Mat4::from_real([
            [0.3, 0.0, 0.0, 0.0],
            [0.0, -0.1, 0.0, 0.0],
            [0.0, 0.0, 0.7, 0.0],
            [0.0, 0.0, 0.0, 0.1],
        ]);
        let e = HermitianEigen::new(&m);
        assert_eq!(e.values, [-0.1, 0.1, 0.3, 0.7]);
    }

    #[test]
    fn complex_off_diagonal_reconstructs() {
        let mut m = Mat4::zero();
        m.0[0][0] = Complex::new(1.0, 0.0);
        m.0[1][1] = Complex::new(2.0, 0.0);
        m.0[2][2] = Complex::new(-0.5, 0.0);
        m.0[3][3] = Complex::new(0.25, 0.0);
        let entries = [
            (0, 1, Complex::new(0.3, -0.4)),
            (0, 3, Complex::new(0.0, 0.9)),
            (1, 2, Complex::new(-0.2, 0.1)),
            (2, 3, Complex::new(0.5, 0.5)),
        ];
        for (i, j, z) in entries {
            m.0[i][j] = z;
            m.0[j][i] = z.conj();
        }
        let e = HermitianEigen::new(&m);
        assert!(e.map(|l| l).max_abs_diff(&m) < 1e-13);
        assert!(e.vectors.unitarity_defect() < 1e-13);
        let sum: f64 = e.values.iter().sum();
        assert!((sum - m.trace().re).abs() < 1e-13);
    }
}
