//! Seeded random states and unitaries for property checks.

use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

use super::{c, Complex, DensityMatrix, Mat4, Matrix, PureState, Unitary2, Unitary4, DIM};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im)
}

fn ginibre<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> Matrix<N> {
    let mut m = Matrix::<N>::zero();
    for row in m.0.iter_mut() {
        for z in row.iter_mut() {
            *z = gaussian(rng);
        }
    }
    m
}

/// Gram-Schmidt on the columns; Haar distributed for Gaussian input.
fn orthonormalize<const N: usize>(mut m: Matrix<N>) -> Matrix<N> {
    for j in 0..N {
        for k in 0..j {
            let mut dot = c(0.0, 0.0);
            for i in 0..N {
                dot += m.0[i][k].conj() * m.0[i][j];
            }
            for i in 0..N {
                let sub = m.0[i][k] * dot;
                m.0[i][j] -= sub;
            }
        }
        let norm = libm::sqrt((0..N).map(|i| m.0[i][j].norm_sqr()).sum::<f64>());
        for i in 0..N {
            m.0[i][j] /= norm;
        }
    }
    m
}

/// Uniformly distributed pure state.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    let mut amp = [c(0.0, 0.0); DIM];
    for z in amp.iter_mut() {
        *z = gaussian(rng);
    }
    let norm = libm::sqrt(amp.iter().map(|z| z.norm_sqr()).sum::<f64>());
    PureState::new(amp.map(|z| z / norm)).expect("normalized by construction")
}

pub fn unitary2<R: Rng + ?Sized>(rng: &mut R) -> Unitary2 {
    Unitary2::from_matrix_unchecked(orthonormalize::<2>(ginibre(rng)))
}

pub fn unitary4<R: Rng + ?Sized>(rng: &mut R) -> Unitary4 {
    Unitary4::from_matrix_unchecked(orthonormalize::<4>(ginibre(rng)))
}

/// Full-rank mixed state `G G† / tr(G G†)` from a Gaussian `G`.
pub fn density<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let g: Mat4 = ginibre(rng);
    let gg = g * g.adjoint();
    let m = gg.scale_real(1.0 / gg.trace().re);
    DensityMatrix::new(m).expect("G G† is positive semidefinite")
}

/// Mixture of a random pure state with white noise at purity weight `p` in `[0, 1]`.
pub fn mixed_with_pure<R: Rng + ?Sized>(rng: &mut R, p: f64) -> DensityMatrix {
    let pure = *pure_state(rng).density().matrix();
    let white = Mat4::identity().scale_real(0.25);
    DensityMatrix::new(pure.scale_real(p) + white.scale_real(1.0 - p)).expect("convex combination")
}

/// `n` density matrices from a fixed seed.
pub fn densities(seed: u64, n: usize) -> alloc::vec::Vec<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| density(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            assert!((pure_state(&mut rng).norm_sqr() - 1.0).abs() < 1e-12);
            assert!(unitary2(&mut rng).matrix().unitarity_defect() < 1e-12);
            assert!(unitary4(&mut rng).matrix().unitarity_defect() < 1e-12);
            assert!(density(&mut rng).eigenvalues()[0] > -1e-12);
        }
    }

    #[test]
    fn seeded_draws_repeat() {
        assert_eq!(densities(9, 3), densities(9, 3));
        assert_ne!(densities(9, 1), densities(10, 1));
    }
}
