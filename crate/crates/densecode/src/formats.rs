//! Text, JSON and CSV renderings with matching parsers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use densecode_core::experiment::ModulusPanel;
use densecode_core::qcore::{Sign, BASIS_LABELS, DIM};
use densecode_core::tomo::{ElementError, ModulusTable};
use densecode_core::{BellVariant, DecodedOutput, DensityMatrix, Message, Table1};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

fn parse_err(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

/// Parse `|10>` or `-|01>`.
pub fn parse_output(s: &str) -> Result<DecodedOutput, CliError> {
    let (phase, rest) = match s.strip_prefix('-') {
        Some(r) => (Sign::Minus, r),
        None => (Sign::Plus, s),
    };
    let bits = rest
        .strip_prefix('|')
        .and_then(|r| r.strip_suffix('>'))
        .ok_or_else(|| parse_err(format!("bad basis ket {s:?}")))?;
    let b: Vec<u8> = bits
        .bytes()
        .map(|c| match c {
            b'0' => Ok(0),
            b'1' => Ok(1),
            _ => Err(parse_err(format!("bad basis ket {s:?}"))),
        })
        .collect::<Result<_, _>>()?;
    match b[..] {
        [y, x] => Ok(DecodedOutput { y, x, phase }),
        _ => Err(parse_err(format!("bad basis ket {s:?}"))),
    }
}

fn parse_variant(s: &str) -> Result<BellVariant, CliError> {
    s.parse().map_err(parse_err)
}

fn parse_message(i: u8) -> Result<Message, CliError> {
    Ok(Message::new(i)?)
}

// ---------------------------------------------------------------------------
// Correspondence table

pub fn table_text(t: &Table1) -> String {
    let mut s = String::new();
    let _ = write!(s, "{:<14}", "message");
    for v in BellVariant::ALL {
        let _ = write!(s, "{:>20}", v.ket());
    }
    s.push('\n');
    for m in Message::ALL {
        let _ = write!(s, "{:<14}", format!("{} ({})", m, m.operator_name()));
        for v in BellVariant::ALL {
            let _ = write!(s, "{:>20}", t.cell(m, v).to_string());
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDoc {
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub message: u8,
    pub operator: String,
    pub outputs: Vec<String>,
}

pub fn table_doc(t: &Table1) -> TableDoc {
    TableDoc {
        columns: BellVariant::ALL.iter().map(|v| v.name().to_string()).collect(),
        rows: Message::ALL
            .iter()
            .map(|&m| TableRow {
                message: m.index(),
                operator: m.operator_name().to_string(),
                outputs: BellVariant::ALL.iter().map(|&v| t.cell(m, v).to_string()).collect(),
            })
            .collect(),
    }
}

fn table_from_cells(cells: impl IntoIterator<Item = (Message, BellVariant, DecodedOutput)>) -> Result<Table1, CliError> {
    let mut grid: [[Option<DecodedOutput>; 4]; 4] = [[None; 4]; 4];
    for (m, v, out) in cells {
        grid[usize::from(m.index() - 1)][v.column()] = Some(out);
    }
    let mut table = Table1 { cells: [[DecodedOutput { y: 0, x: 0, phase: Sign::Plus }; 4]; 4] };
    for (r, row) in grid.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            table.cells[r][c] = cell.ok_or_else(|| parse_err(format!("missing cell ({}, {c})", r + 1)))?;
        }
    }
    Ok(table)
}

pub fn table_json(t: &Table1) -> String {
    serde_json::to_string_pretty(&table_doc(t)).expect("plain data serializes")
}

pub fn parse_table_json(text: &str) -> Result<Table1, CliError> {
    let doc: TableDoc = serde_json::from_str(text).map_err(parse_err)?;
    let variants: Vec<BellVariant> = doc.columns.iter().map(|c| parse_variant(c)).collect::<Result<_, _>>()?;
    let mut cells = Vec::new();
    for row in &doc.rows {
        let m = parse_message(row.message)?;
        if row.outputs.len() != variants.len() {
            return Err(parse_err("row length differs from column count"));
        }
        for (v, out) in variants.iter().zip(&row.outputs) {
            cells.push((m, *v, parse_output(out)?));
        }
    }
    table_from_cells(cells)
}

#[derive(Debug, Serialize, Deserialize)]
struct TableCsvRow {
    message: u8,
    variant: String,
    output: String,
}

pub fn table_csv(t: &Table1) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for m in Message::ALL {
        for v in BellVariant::ALL {
            w.serialize(TableCsvRow { message: m.index(), variant: v.name().into(), output: t.cell(m, v).to_string() })
                .expect("in-memory write");
        }
    }
    into_string(w)
}

pub fn parse_table_csv(text: &str) -> Result<Table1, CliError> {
    let mut cells = Vec::new();
    for row in csv::Reader::from_reader(text.as_bytes()).deserialize::<TableCsvRow>() {
        let row = row.map_err(parse_err)?;
        cells.push((parse_message(row.message)?, parse_variant(&row.variant)?, parse_output(&row.output)?));
    }
    table_from_cells(cells)
}

fn into_string(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

// ---------------------------------------------------------------------------
// Modulus tables

#[derive(Debug, Serialize, Deserialize)]
struct ModulusCsvRow {
    row: usize,
    col: usize,
    modulus: f64,
}

pub fn modulus_csv(t: &ModulusTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in 0..DIM {
        for col in 0..DIM {
            w.serialize(ModulusCsvRow { row, col, modulus: t.get(row, col) }).expect("in-memory write");
        }
    }
    into_string(w)
}

pub fn parse_modulus_csv(text: &str) -> Result<ModulusTable, CliError> {
    let mut t = ModulusTable([[f64::NAN; DIM]; DIM]);
    for r in csv::Reader::from_reader(text.as_bytes()).deserialize::<ModulusCsvRow>() {
        let r = r.map_err(parse_err)?;
        set_cell(&mut t, r.row, r.col, r.modulus)?;
    }
    check_filled(&t)?;
    Ok(t)
}

fn set_cell(t: &mut ModulusTable, row: usize, col: usize, v: f64) -> Result<(), CliError> {
    if row >= DIM || col >= DIM {
        return Err(parse_err(format!("index ({row}, {col}) out of range")));
    }
    t.0[row][col] = v;
    Ok(())
}

fn check_filled(t: &ModulusTable) -> Result<(), CliError> {
    if t.0.iter().flatten().any(|v| v.is_nan()) {
        return Err(parse_err("modulus table is incomplete"));
    }
    Ok(())
}

pub fn modulus_json(t: &ModulusTable) -> String {
    serde_json::to_string(&t.0).expect("plain data serializes")
}

pub fn parse_modulus_json(text: &str) -> Result<ModulusTable, CliError> {
    Ok(ModulusTable(serde_json::from_str(text).map_err(parse_err)?))
}

pub fn modulus_text(t: &ModulusTable) -> String {
    let mut s = format!("{:>6}", "");
    for l in BASIS_LABELS {
        let _ = write!(s, "{:>9}", format!("|{l}>"));
    }
    s.push('\n');
    for (j, row) in t.rows().iter().enumerate() {
        let _ = write!(s, "{:>6}", format!("<{}|", BASIS_LABELS[j]));
        for v in row {
            let _ = write!(s, "{v:>9.4}");
        }
        s.push('\n');
    }
    s
}

/// Real and imaginary parts, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub re: [[f64; DIM]; DIM],
    pub im: [[f64; DIM]; DIM],
}

impl MatrixDoc {
    pub fn of(rho: &DensityMatrix) -> Self {
        MatrixDoc {
            re: std::array::from_fn(|j| std::array::from_fn(|k| rho.get(j, k).re)),
            im: std::array::from_fn(|j| std::array::from_fn(|k| rho.get(j, k).im)),
        }
    }
}

pub fn density_text(m: &MatrixDoc) -> String {
    let mut s = String::new();
    for j in 0..DIM {
        for k in 0..DIM {
            let _ = write!(s, "  {:>9.5}{:+.5}i", m.re[j][k], m.im[j][k]);
        }
        s.push('\n');
    }
    s
}

// ---------------------------------------------------------------------------
// Density-matrix bar-chart panels

/// Panel letters: `a`–`d` experimental and `e`–`h` theoretical, each in
/// message order 1..=4.
pub fn panel_letter(message: Message, experimental: bool) -> char {
    let base = if experimental { b'a' } else { b'e' };
    char::from(base + message.index() - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig4Doc {
    pub variant: String,
    pub seed: u64,
    pub panels: Vec<PanelDoc>,
    pub errors: Vec<PanelError>,
    pub max_relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelDoc {
    pub panel: char,
    pub message: u8,
    pub operator: String,
    pub kind: String,
    pub moduli: [[f64; DIM]; DIM],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PanelError {
    pub message: u8,
    pub absolute: f64,
    pub relative: f64,
}

pub fn fig4_doc(panels: &[ModulusPanel], variant: BellVariant, seed: u64) -> Fig4Doc {
    let mut docs = Vec::new();
    for experimental in [true, false] {
        for p in panels {
            docs.push(PanelDoc {
                panel: panel_letter(p.message, experimental),
                message: p.message.index(),
                operator: p.message.operator_name().into(),
                kind: if experimental { "experimental" } else { "theoretical" }.into(),
                moduli: if experimental { p.experimental.0 } else { p.theoretical.0 },
            });
        }
    }
    let errors: Vec<PanelError> = panels
        .iter()
        .map(|p| {
            let ElementError { absolute, relative } = p.error;
            PanelError { message: p.message.index(), absolute, relative }
        })
        .collect();
    Fig4Doc {
        variant: variant.name().into(),
        seed,
        panels: docs,
        max_relative_error: errors.iter().map(|e| e.relative).fold(0.0, f64::max),
        errors,
    }
}

pub fn fig4_json(doc: &Fig4Doc) -> String {
    serde_json::to_string_pretty(doc).expect("plain data serializes")
}

pub fn parse_fig4_json(text: &str) -> Result<Fig4Doc, CliError> {
    serde_json::from_str(text).map_err(parse_err)
}

#[derive(Debug, Serialize, Deserialize)]
struct Fig4CsvRow {
    panel: char,
    row: usize,
    col: usize,
    modulus: f64,
}

/// One line per bar: `panel,row,col,modulus`.
pub fn fig4_csv(doc: &Fig4Doc) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in &doc.panels {
        for (row, r) in p.moduli.iter().enumerate() {
            for (col, &modulus) in r.iter().enumerate() {
                w.serialize(Fig4CsvRow { panel: p.panel, row, col, modulus }).expect("in-memory write");
            }
        }
    }
    into_string(w)
}

pub fn parse_fig4_csv(text: &str) -> Result<BTreeMap<char, ModulusTable>, CliError> {
    let mut out: BTreeMap<char, ModulusTable> = BTreeMap::new();
    for r in csv::Reader::from_reader(text.as_bytes()).deserialize::<Fig4CsvRow>() {
        let r = r.map_err(parse_err)?;
        let t = out.entry(r.panel).or_insert(ModulusTable([[f64::NAN; DIM]; DIM]));
        set_cell(t, r.row, r.col, r.modulus)?;
    }
    for t in out.values() {
        check_filled(t)?;
    }
    Ok(out)
}

pub fn fig4_text(doc: &Fig4Doc) -> String {
    let mut s = format!("shared pair: {}  seed: {}\n", doc.variant, doc.seed);
    for p in &doc.panels {
        let _ = writeln!(s, "\n({}) {} {}", p.panel, p.kind, p.operator);
        s.push_str(&modulus_text(&ModulusTable(p.moduli)));
    }
    s.push('\n');
    for e in &doc.errors {
        let _ = writeln!(
            s,
            "message {}: max element error {:.4} absolute, {:.4} relative",
            e.message, e.absolute, e.relative
        );
    }
    let _ = writeln!(s, "largest relative error: {:.4}", doc.max_relative_error);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use densecode_core::protocol::table1;

    #[test]
    fn outputs_parse_back() {
        for s in ["|10>", "-|01>", "|00>", "-|11>"] {
            assert_eq!(parse_output(s).unwrap().to_string(), s);
        }
        for s in ["10", "|1>", "|102>", "+|10>", "|1x>"] {
            assert!(parse_output(s).is_err(), "{s}");
        }
    }

    #[test]
    fn table_round_trips() {
        let t = table1().unwrap();
        assert_eq!(parse_table_json(&table_json(&t)).unwrap(), t);
        assert_eq!(parse_table_csv(&table_csv(&t)).unwrap(), t);
    }

    #[test]
    fn table_text_shows_cells() {
        let text = table_text(&table1().unwrap());
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().nth(4).unwrap().contains("-|01>"));
    }

    #[test]
    fn incomplete_csv_is_rejected() {
        let t = table1().unwrap();
        let csv = table_csv(&t);
        let short: String = csv.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(parse_table_csv(&short).is_err());
        assert!(parse_modulus_csv("row,col,modulus\n0,0,1\n").is_err());
        assert!(parse_modulus_csv("row,col,modulus\n4,0,1\n").is_err());
    }

    #[test]
    fn modulus_round_trips_exactly() {
        let t = ModulusTable(std::array::from_fn(|j| std::array::from_fn(|k| (j * 4 + k) as f64 / 7.0)));
        assert_eq!(parse_modulus_csv(&modulus_csv(&t)).unwrap(), t);
        assert_eq!(parse_modulus_json(&modulus_json(&t)).unwrap(), t);
    }

    #[test]
    fn panel_letters() {
        assert_eq!(panel_letter(Message::ALL[0], true), 'a');
        assert_eq!(panel_letter(Message::ALL[3], true), 'd');
        assert_eq!(panel_letter(Message::ALL[0], false), 'e');
        assert_eq!(panel_letter(Message::ALL[3], false), 'h');
    }
}
