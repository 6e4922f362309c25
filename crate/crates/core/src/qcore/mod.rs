//! Linear algebra over the two-spin Hilbert space.
//!
//! Basis index is `2·b + a`: the left label is spin b (¹³C), the right label
//! is spin a (¹H). Index 0 = |00⟩, 1 = |01⟩, 2 = |10⟩, 3 = |11⟩.
//! Global phases are kept; nothing here quotients them out.

mod eigen;
mod matrix;
pub mod random;

pub use eigen::HermitianEigen;
pub use matrix::{Mat2, Mat4, Matrix};

use core::ops::Mul;

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Tolerance for pure-state arithmetic.
pub const PURE_TOL: f64 = 1e-12;
/// Tolerance for unitarity, Hermiticity and trace checks.
pub const DENSITY_TOL: f64 = 1e-10;
/// Eigenvalues below this reject a density matrix.
pub const PSD_FLOOR: f64 = -1e-9;

pub const DIM: usize = 4;

pub const BASIS_LABELS: [&str; DIM] = ["00", "01", "10", "11"];

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Basis index of `|b a⟩`.
#[inline]
pub fn basis_index(b: u8, a: u8) -> usize {
    2 * (b as usize & 1) + (a as usize & 1)
}

/// A ±1 amplitude sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Single-spin unitary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2(Mat2);

/// Two-spin unitary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary4(Mat4);

macro_rules! unitary_impl {
    ($name:ident, $mat:ty) => {
        impl $name {
            pub fn new(m: $mat) -> Result<Self> {
                if !m.is_finite() {
                    return Err(Error::NonFinite);
                }
                let deviation = m.unitarity_defect();
                if deviation > DENSITY_TOL {
                    return Err(Error::NotUnitary { deviation });
                }
                Ok($name(m))
            }

            /// Caller guarantees unitarity (closed-form constructions).
            pub(crate) const fn from_matrix_unchecked(m: $mat) -> Self {
                $name(m)
            }

            pub fn identity() -> Self {
                $name(<$mat>::identity())
            }

            pub fn matrix(&self) -> &$mat {
                &self.0
            }

            pub fn adjoint(&self) -> Self {
                $name(self.0.adjoint())
            }

            pub fn scale_phase(&self, phase: f64) -> Self {
                $name(self.0.scale(Complex::from_polar(1.0, phase)))
            }
        }

        impl Mul for $name {
            type Output = $name;

            /// Operator product: `(A * B)` applies `B` first.
            fn mul(self, rhs: $name) -> $name {
                $name(self.0 * rhs.0)
            }
        }
    };
}

unitary_impl!(Unitary2, Mat2);
unitary_impl!(Unitary4, Mat4);

impl Unitary4 {
    /// `U ⊗ I`: act on spin b only.
    pub fn on_b(u: &Unitary2) -> Self {
        tensor(u, &Unitary2::identity())
    }

    /// `I ⊗ U`: act on spin a only.
    pub fn on_a(u: &Unitary2) -> Self {
        tensor(&Unitary2::identity(), u)
    }

    /// Distance to `other` after optimal global-phase alignment.
    pub fn distance_up_to_phase(&self, other: &Unitary4) -> f64 {
        self.0.phase_aligned_distance(&other.0).0
    }
}

/// Dimension-erased unitary, as read from external input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Unitary {
    Single(Unitary2),
    Pair(Unitary4),
}

impl Unitary {
    /// Build from square rows of size 2 or 4.
    pub fn from_rows(rows: &[&[Complex]]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        match n {
            2 => {
                let mut m = Mat2::zero();
                for (i, r) in rows.iter().enumerate() {
                    m.0[i].copy_from_slice(r);
                }
                Unitary2::new(m).map(Unitary::Single)
            }
            4 => {
                let mut m = Mat4::zero();
                for (i, r) in rows.iter().enumerate() {
                    m.0[i].copy_from_slice(r);
                }
                Unitary4::new(m).map(Unitary::Pair)
            }
            _ => Err(Error::DimensionMismatch { expected: 4, found: n }),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Unitary::Single(_) => 2,
            Unitary::Pair(_) => 4,
        }
    }

    /// Tensor product of two single-spin unitaries; `ub` acts on spin b.
    pub fn tensor(ub: &Unitary, ua: &Unitary) -> Result<Unitary4> {
        match (ub, ua) {
            (Unitary::Single(b), Unitary::Single(a)) => Ok(tensor(b, a)),
            (other, Unitary::Single(_)) | (_, other) => {
                Err(Error::DimensionMismatch { expected: 2, found: other.dim() })
            }
        }
    }
}

/// `ub ⊗ ua` with `ub` on spin b (left label) and `ua` on spin a.
pub fn tensor(ub: &Unitary2, ua: &Unitary2) -> Unitary4 {
    Unitary4(Mat4::kron(&ub.0, &ua.0))
}

/// Normalized two-spin state vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState([Complex; DIM]);

impl PureState {
    pub fn new(amp: [Complex; DIM]) -> Result<Self> {
        if !amp.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amp.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > PURE_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(PureState(amp))
    }

    /// Real amplitudes, convenient for the all-real ideal layer.
    pub fn from_real(amp: [f64; DIM]) -> Result<Self> {
        Self::new(amp.map(|x| c(x, 0.0)))
    }

    pub fn basis(index: usize) -> Self {
        let mut amp = [c(0.0, 0.0); DIM];
        amp[index] = c(1.0, 0.0);
        PureState(amp)
    }

    /// `|b a⟩`
    pub fn from_bits(b: u8, a: u8) -> Self {
        Self::basis(basis_index(b, a))
    }

    pub fn amplitudes(&self) -> &[Complex; DIM] {
        &self.0
    }

    pub fn apply(&self, u: &Unitary4) -> PureState {
        PureState(u.0.mul_vec(&self.0))
    }

    pub fn scale_phase(&self, phase: f64) -> PureState {
        let z = Complex::from_polar(1.0, phase);
        PureState(self.0.map(|a| a * z))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> [f64; DIM] {
        self.0.map(|z| z.norm_sqr())
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> Complex {
        self.0.iter().zip(other.0.iter()).map(|(x, y)| x.conj() * y).sum()
    }

    /// Largest amplitude difference, phase included.
    pub fn max_abs_diff(&self, other: &PureState) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix(Mat4::outer(&self.0, &self.0))
    }
}

/// Apply a two-spin unitary to a state vector.
pub fn apply(u: &Unitary4, s: &PureState) -> PureState {
    s.apply(u)
}

/// Unit-trace, Hermitian, positive-semidefinite 4×4 operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Mat4);

impl DensityMatrix {
    pub fn new(m: Mat4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = m.hermiticity_defect();
        if deviation > DENSITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(Error::TraceNotUnity { trace: trace.re });
        }
        let min_eigenvalue = HermitianEigen::new(&m).min_value();
        if min_eigenvalue < PSD_FLOOR {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(DensityMatrix(m))
    }

    /// Caller guarantees validity (unitary images, convex mixtures).
    pub(crate) const fn from_matrix_unchecked(m: Mat4) -> Self {
        DensityMatrix(m)
    }

    /// Project a Hermitian, trace-one matrix onto the PSD cone by flooring
    /// eigenvalues at zero and renormalizing, if its smallest eigenvalue lies
    /// below `floor`.
    pub fn from_hermitian_clipped(m: Mat4, floor: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let herm = (m + m.adjoint()).scale_real(0.5);
        let eig = HermitianEigen::new(&herm);
        if eig.min_value() >= floor {
            return Self::new(herm);
        }
        let total: f64 = eig.values.iter().map(|&l| l.max(0.0)).sum();
        if total <= 0.0 {
            return Err(Error::NotPositive { min_eigenvalue: eig.min_value() });
        }
        Self::new(eig.map(|l| l.max(0.0) / total))
    }

    pub fn from_pure(s: &PureState) -> Self {
        s.density()
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Mat4::identity().scale_real(0.25))
    }

    pub fn basis(index: usize) -> Self {
        PureState::basis(index).density()
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.0.get(row, col)
    }

    /// `UρU†`
    pub fn evolve(&self, u: &Unitary4) -> DensityMatrix {
        DensityMatrix(u.0 * self.0 * u.0.adjoint())
    }

    pub fn probabilities(&self) -> [f64; DIM] {
        core::array::from_fn(|k| self.0.get(k, k).re)
    }

    pub fn eigenvalues(&self) -> [f64; DIM] {
        HermitianEigen::new(&self.0).values
    }

    /// `tr(Aρ)` for an observable `A`.
    pub fn expectation(&self, observable: &Mat4) -> f64 {
        (*observable * self.0).trace().re
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    /// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`.
    pub fn fidelity(&self, other: &DensityMatrix) -> f64 {
        fidelity(self, other)
    }
}

/// Evolve a density matrix by a two-spin unitary.
pub fn evolve(u: &Unitary4, rho: &DensityMatrix) -> DensityMatrix {
    rho.evolve(u)
}

/// Uhlmann fidelity in the squared convention, so that a pure `σ = |ψ⟩⟨ψ|`
/// gives `⟨ψ|ρ|ψ⟩`. Clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let sqrt_rho = HermitianEigen::new(&rho.0).map(|l| libm::sqrt(l.max(0.0)));
    let inner = sqrt_rho * sigma.0 * sqrt_rho;
    let root_trace: f64 = HermitianEigen::new(&inner)
        .values
        .iter()
        .map(|&l| libm::sqrt(l.max(0.0)))
        .sum();
    (root_trace * root_trace).clamp(0.0, 1.0)
}

/// Population vector of a state vector or density matrix.
pub trait Populations {
    fn populations(&self) -> [f64; DIM];
}

impl Populations for PureState {
    fn populations(&self) -> [f64; DIM] {
        self.probabilities()
    }
}

impl Populations for DensityMatrix {
    fn populations(&self) -> [f64; DIM] {
        self.probabilities()
    }
}

/// `p_k = |amp_k|²` or `ρ_kk`.
pub fn probabilities(state: &impl Populations) -> [f64; DIM] {
    state.populations()
}

/// Pauli matrices indexed 0 = I, 1 = X, 2 = Y, 3 = Z.
pub fn pauli(index: usize) -> Mat2 {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match index {
        0 => Matrix([[l, o], [o, l]]),
        1 => Matrix([[o, l], [l, o]]),
        2 => Matrix([[o, -i], [i, o]]),
        3 => Matrix([[l, o], [o, -l]]),
        _ => panic!("pauli index {index} out of range"),
    }
}
