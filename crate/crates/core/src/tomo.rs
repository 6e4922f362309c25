//! State tomography: simulated readout experiments and least-squares
//! reconstruction in the product-operator basis.
//!
//! Product operator `k = 4·p_b + p_a` is `σ_{p_b} ⊗ σ_{p_a}` with Pauli
//! indices 0 = I, 1 = X, 2 = Y, 3 = Z. A density matrix is
//! `ρ = (I + Σ_k c_k P_k)/4` with `c_k = tr(P_k ρ)`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::nmrsim::{rotation, Axis};
use crate::qcore::{pauli, tensor, DensityMatrix, Mat4, Unitary2, Unitary4, DIM, PSD_FLOOR};

pub const N_OPERATORS: usize = 16;
/// Free real parameters of a two-spin density matrix.
pub const N_PARAMETERS: usize = 15;

/// Readout pulse applied to one spin before acquisition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReadoutPulse {
    I,
    X90,
    Y90,
}

impl ReadoutPulse {
    pub const ALL: [ReadoutPulse; 3] = [ReadoutPulse::I, ReadoutPulse::X90, ReadoutPulse::Y90];

    pub fn unitary(self) -> Unitary2 {
        match self {
            ReadoutPulse::I => Unitary2::identity(),
            ReadoutPulse::X90 => rotation(Axis::X, FRAC_PI_2),
            ReadoutPulse::Y90 => rotation(Axis::Y, FRAC_PI_2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ReadoutPulse::I => "I",
            ReadoutPulse::X90 => "X90",
            ReadoutPulse::Y90 => "Y90",
        }
    }
}

/// `σ_{p_b} ⊗ σ_{p_a}` for operator index `k = 4·p_b + p_a`.
pub fn product_operator(k: usize) -> Mat4 {
    Mat4::kron(&pauli(k / 4), &pauli(k % 4))
}

/// Operator label such as `ZX` (spin b first) or `II`.
pub fn operator_label(k: usize) -> &'static str {
    const LABELS: [&str; N_OPERATORS] = [
        "II", "IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY",
        "ZZ",
    ];
    LABELS[k]
}

/// Single-quantum transverse terms seen in the two multiplets:
/// spin a lines give `X_a, Y_a, Z_bX_a, Z_bY_a`, spin b lines give
/// `X_b, Y_b, X_bZ_a, Y_bZ_a`.
pub const DETECTED: [usize; 8] = [1, 2, 13, 14, 4, 8, 7, 11];

/// One readout experiment. `observed[k]` is `tr(P_k ρ')` for the state `ρ'`
/// after the readout pulses; only the [`DETECTED`] entries enter the fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReadoutRecord {
    pub readout_a: ReadoutPulse,
    pub readout_b: ReadoutPulse,
    pub observed: [f64; N_OPERATORS],
}

impl ReadoutRecord {
    pub fn rotation(&self) -> Unitary4 {
        tensor(&self.readout_b.unitary(), &self.readout_a.unitary())
    }

    pub fn detected(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        DETECTED.iter().map(move |&k| (k, self.observed[k]))
    }
}

/// The nine experiments `{I, X90, Y90}` on spin a × the same on spin b.
pub fn simulate_readouts(rho: &DensityMatrix) -> Vec<ReadoutRecord> {
    let mut out = Vec::with_capacity(9);
    for readout_b in ReadoutPulse::ALL {
        for readout_a in ReadoutPulse::ALL {
            let r = tensor(&readout_b.unitary(), &readout_a.unitary());
            let after = rho.evolve(&r);
            let observed = core::array::from_fn(|k| after.expectation(&product_operator(k)));
            out.push(ReadoutRecord { readout_a, readout_b, observed });
        }
    }
    out
}

/// Least-squares fit of the 15 product-operator coefficients to the detected
/// signals. The fitted matrix is Hermitian with unit trace by construction;
/// if it falls below the positivity floor its eigenvalues are clipped at zero
/// and renormalized.
pub fn reconstruct(records: &[ReadoutRecord]) -> Result<DensityMatrix> {
    let coeffs = fit_coefficients(records)?;
    let mut m = Mat4::identity();
    for (k, &ck) in coeffs.iter().enumerate() {
        m = m + product_operator(k + 1).scale_real(ck);
    }
    DensityMatrix::from_hermitian_clipped(m.scale_real(0.25), PSD_FLOOR)
}

/// Solve the normal equations for `c_1..c_15`.
pub fn fit_coefficients(records: &[ReadoutRecord]) -> Result<[f64; N_PARAMETERS]> {
    let basis: [Mat4; N_PARAMETERS] = core::array::from_fn(|i| product_operator(i + 1));
    let mut ata = [[0.0f64; N_PARAMETERS]; N_PARAMETERS];
    let mut aty = [0.0f64; N_PARAMETERS];

    for rec in records {
        if !rec.observed.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let r = *rec.rotation().matrix();
        let r_dag = r.adjoint();
        for (k, y) in rec.detected() {
            // tr(O R ρ R†) = tr((R† O R) ρ) = Σ_j c_j tr(R† O R P_j)/4
            let back = r_dag * product_operator(k) * r;
            let row: [f64; N_PARAMETERS] = core::array::from_fn(|j| (back * basis[j]).trace().re / 4.0);
            for i in 0..N_PARAMETERS {
                aty[i] += row[i] * y;
                for j in 0..N_PARAMETERS {
                    ata[i][j] += row[i] * row[j];
                }
            }
        }
    }
    solve_symmetric(ata, aty)
}

/// Gaussian elimination with partial pivoting; a pivot below the relative
/// threshold marks a direction the records do not constrain.
fn solve_symmetric(
    mut a: [[f64; N_PARAMETERS]; N_PARAMETERS],
    mut b: [f64; N_PARAMETERS],
) -> Result<[f64; N_PARAMETERS]> {
    const N: usize = N_PARAMETERS;
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = 1e-10 * scale.max(f64::MIN_POSITIVE);
    // Row echelon form; `rank` counts pivot rows.
    let mut rank = 0;
    for col in 0..N {
        if rank == N {
            break;
        }
        let (pivot, pmax) = (rank..N)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty range");
        if pmax <= threshold {
            continue;
        }
        a.swap(rank, pivot);
        b.swap(rank, pivot);
        for r in (rank + 1)..N {
            let f = a[r][col] / a[rank][col];
            if f == 0.0 {
                continue;
            }
            for c in col..N {
                a[r][c] -= f * a[rank][c];
            }
            b[r] -= f * b[rank];
        }
        rank += 1;
    }
    if rank < N {
        return Err(Error::RankDeficient { rank, required: N });
    }

    let mut x = [0.0; N];
    for r in (0..N).rev() {
        let tail: f64 = ((r + 1)..N).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    Ok(x)
}

/// Elementwise moduli `|ρ_jk|`; axes 0..3 label `|00⟩..|11⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulusTable(pub [[f64; DIM]; DIM]);

impl ModulusTable {
    pub fn rows(&self) -> &[[f64; DIM]; DIM] {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[row][col]
    }

    pub fn max(&self) -> f64 {
        self.0.iter().flatten().copied().fold(0.0, f64::max)
    }
}

pub fn element_modulus_table(rho: &DensityMatrix) -> ModulusTable {
    ModulusTable(core::array::from_fn(|j| core::array::from_fn(|k| rho.get(j, k).norm())))
}

/// Largest deviation between two modulus tables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementError {
    /// `max_jk ||ρ_exp,jk| − |ρ_th,jk||`
    pub absolute: f64,
    /// `absolute` divided by the largest theoretical modulus.
    pub relative: f64,
}

pub fn max_element_error(rho_exp: &DensityMatrix, rho_theory: &DensityMatrix) -> ElementError {
    modulus_error(&element_modulus_table(rho_exp), &element_modulus_table(rho_theory))
}

pub fn modulus_error(exp: &ModulusTable, theory: &ModulusTable) -> ElementError {
    let absolute = exp
        .0
        .iter()
        .flatten()
        .zip(theory.0.iter().flatten())
        .map(|(e, t)| (e - t).abs())
        .fold(0.0, f64::max);
    let peak = theory.max();
    let relative = if peak > 0.0 { absolute / peak } else { absolute };
    ElementError { absolute, relative }
}
