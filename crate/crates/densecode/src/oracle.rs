//! Brute-force reference for the correspondence table.
//!
//! Everything here is plain real arithmetic on hand-written 4×4 matrices and
//! shares no code with the simulator, so agreement between the two is a real
//! check. Basis order is `|00⟩, |01⟩, |10⟩, |11⟩` with spin b on the left.

type Vec4 = [f64; 4];
type M4 = [[f64; 4]; 4];
type M2 = [[f64; 2]; 2];
/// `(sign, y, x)` of a signed basis vector.
pub type Cell = (i8, u8, u8);

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

const ID2: M2 = [[1.0, 0.0], [0.0, 1.0]];
const NOT: M2 = [[0.0, 1.0], [1.0, 0.0]];
const HAD: M2 = [[S, S], [S, -S]];
const SZ: M2 = [[1.0, 0.0], [0.0, -1.0]];
const ISY: M2 = [[0.0, 1.0], [-1.0, 0.0]];

/// Control b (high bit), target a (low bit).
const CNOT_BA: M4 = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, 1.0, 0.0],
];

/// Encoding operators in message order 1..=4.
const ENCODINGS: [M2; 4] = [ID2, SZ, NOT, ISY];

/// `(flip_b, flip_a)` replacing the leading NOT on b, per column.
const PREP_FLIPS: [(bool, bool); 4] = [(true, false), (false, false), (true, true), (false, true)];

/// Decoded outputs printed for the `(|00⟩ − |11⟩)/√2` column, as
/// `(sign, y, x)` for messages 1..=4.
pub const PRINTED_MINUS_PHI: [Cell; 4] = [(1, 1, 0), (1, 0, 0), (1, 1, 1), (-1, 0, 1)];

fn kron(b: &M2, a: &M2) -> M4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = b[i / 2][j / 2] * a[i % 2][j % 2];
        }
    }
    m
}

fn apply(m: &M4, v: &Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|j| m[i][j] * v[j]).sum();
    }
    out
}

/// Amplitudes after the full network for message `m` (1..=4) and column `col`.
pub fn network_output(m: usize, col: usize) -> Vec4 {
    let (fb, fa) = PREP_FLIPS[col];
    let pick = |f: bool| if f { NOT } else { ID2 };
    let steps = [
        kron(&pick(fb), &pick(fa)),
        kron(&HAD, &ID2),
        CNOT_BA,
        kron(&ID2, &ENCODINGS[m - 1]),
        CNOT_BA,
        kron(&HAD, &ID2),
    ];
    steps.iter().fold([1.0, 0.0, 0.0, 0.0], |v, g| apply(g, &v))
}

/// Dominant signed basis vector, and the largest deviation of
/// the amplitudes from that signed basis vector.
pub fn signed_basis(v: &Vec4) -> (Cell, f64) {
    let k = (0..4).max_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs())).unwrap_or(0);
    let sign: i8 = if v[k] < 0.0 { -1 } else { 1 };
    let residual = (0..4)
        .map(|i| {
            let want = if i == k { f64::from(sign) } else { 0.0 };
            (v[i] - want).abs()
        })
        .fold(0.0, f64::max);
    ((sign, (k >> 1) as u8, (k & 1) as u8), residual)
}

/// All 16 cells, rows by message and columns in the order
/// minus-phi, plus-phi, minus-psi, plus-psi, plus the worst residual.
pub fn table() -> ([[Cell; 4]; 4], f64) {
    let mut cells = [[(0, 0, 0); 4]; 4];
    let mut worst: f64 = 0.0;
    for (m, row) in cells.iter_mut().enumerate() {
        for (col, cell) in row.iter_mut().enumerate() {
            let (out, res) = signed_basis(&network_output(m + 1, col));
            *cell = out;
            worst = worst.max(res);
        }
    }
    (cells, worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_phi_column_matches_printed_outputs() {
        let (cells, res) = table();
        assert!(res < 1e-12);
        for m in 0..4 {
            assert_eq!(cells[m][0], PRINTED_MINUS_PHI[m]);
        }
    }

    #[test]
    fn every_column_is_a_permutation() {
        let (cells, _) = table();
        for col in 0..4 {
            let mut seen = [false; 4];
            for row in &cells {
                let (_, y, x) = row[col];
                seen[usize::from(2 * y + x)] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }
}
