//! Command implementations. Each returns the rendered output and whether the
//! command's own success condition held.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use densecode_core::experiment::{effective_output, modulus_panels, theoretical_output, ExperimentSetup};
use densecode_core::nmrsim::{bell_prep_program, compile, ProgramOptions, SpinSystem};
use densecode_core::noise::ErrorParams;
use densecode_core::protocol::{message_for_output, readout_populations, GateSet};
use densecode_core::qcore::{PureState, BASIS_LABELS};
use densecode_core::tomo::{
    element_modulus_table, max_element_error, operator_label, reconstruct, simulate_readouts, ElementError,
};
use densecode_core::{BellVariant, DensityMatrix, Message};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::formats::{self, MatrixDoc};
use crate::validate::{self, ValidateOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Ideal,
    Pulse,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

/// Rendered command output.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub body: String,
    pub ok: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, ok: true }
    }
}

/// Fully resolved settings for one command.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub layer: Layer,
    pub message: Message,
    pub variant: BellVariant,
    pub sys: SpinSystem,
    pub epsilon: f64,
    pub noise: Option<ErrorParams>,
    pub seed: u64,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            layer: Layer::Ideal,
            message: Message::ALL[0],
            variant: BellVariant::MinusPhi,
            sys: SpinSystem::default(),
            epsilon: densecode_core::experiment::DEFAULT_EPSILON,
            noise: None,
            seed: 0,
            format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    /// Noise only makes sense for pulse programs.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.noise.is_some() && self.layer == Layer::Ideal {
            return Err(CliError::Usage("noise requires --layer pulse".into()));
        }
        if let Some(p) = &self.noise {
            p.validate()?;
        }
        Ok(())
    }

    fn setup(&self, noise: ErrorParams) -> ExperimentSetup {
        ExperimentSetup { sys: self.sys, epsilon: self.epsilon, noise, seed: self.seed, ..ExperimentSetup::default() }
    }

    /// Output state of the chosen layer before any readout.
    fn output_state(&self) -> Result<DensityMatrix, CliError> {
        Ok(match self.layer {
            Layer::Ideal => theoretical_output(self.message, self.variant)?,
            Layer::Pulse => effective_output(
                self.message,
                self.variant,
                &self.setup(self.noise.unwrap_or_else(ErrorParams::none)),
            )?,
        })
    }
}

// ---------------------------------------------------------------------------

/// The correspondence table; `ok` is false if it disagrees with the
/// brute-force reference.
pub fn cmd_table(format: OutputFormat) -> Result<Output, CliError> {
    let table = densecode_core::protocol::table1()?;
    let ok = validate::check_table(&GateSet::standard()).passed;
    let body = match format {
        OutputFormat::Text => formats::table_text(&table),
        OutputFormat::Json => formats::table_json(&table),
        OutputFormat::Csv => formats::table_csv(&table),
    };
    Ok(Output { body, ok })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub layer: Layer,
    pub message: u8,
    pub operator: String,
    pub variant: String,
    /// `[re, im]` per basis state.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prepared: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub encoded: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoded: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prepared_populations: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub populations: [f64; 4],
    pub readout: String,
    pub readout_population: f64,
    pub recovered_message: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<MatrixDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
}

fn amps(s: &PureState) -> Vec<[f64; 2]> {
    s.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

pub fn run_report(cfg: &RunConfig) -> Result<RunReport, CliError> {
    cfg.validate()?;
    let (m, v) = (cfg.message, cfg.variant);
    let mut report = RunReport {
        layer: cfg.layer,
        message: m.index(),
        operator: m.operator_name().into(),
        variant: v.name().into(),
        prepared: None,
        encoded: None,
        decoded: None,
        prepared_populations: None,
        output: None,
        populations: [0.0; 4],
        readout: String::new(),
        readout_population: 0.0,
        recovered_message: None,
        density: None,
        fidelity: None,
    };
    let final_state = match cfg.layer {
        Layer::Ideal => {
            let gates = GateSet::standard();
            let prepared = gates.prepare_bell(v);
            let encoded = gates.encode(&prepared, m);
            let decoded = gates.decode(&encoded);
            report.prepared = Some(amps(&prepared));
            report.encoded = Some(amps(&encoded));
            report.decoded = Some(amps(&decoded));
            report.output = Some(gates.run(m, v)?.to_string());
            decoded.density()
        }
        Layer::Pulse => {
            let opts = ProgramOptions { refocus: true };
            let prep = compile(&bell_prep_program(v, &cfg.sys, opts), &cfg.sys);
            report.prepared_populations = Some(PureState::basis(0).apply(&prep).probabilities());
            let rho = cfg.output_state()?;
            report.fidelity = Some(rho.fidelity(&theoretical_output(m, v)?));
            report.density = Some(MatrixDoc::of(&rho));
            rho
        }
    };
    report.populations = final_state.probabilities();
    let (y, x, p) = readout_populations(&report.populations);
    report.readout = format!("{y}{x}");
    report.readout_population = p;
    report.recovered_message = message_for_output(v, (y, x))?.map(Message::index);
    Ok(report)
}

fn amps_text(a: &[[f64; 2]]) -> String {
    a.iter()
        .map(|[re, im]| if *im == 0.0 { format!("{re:+.6}") } else { format!("{re:+.6}{im:+.6}i") })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn run_text(r: &RunReport) -> String {
    let mut s = String::new();
    let layer = match r.layer {
        Layer::Ideal => "ideal",
        Layer::Pulse => "pulse",
    };
    let _ = writeln!(s, "layer: {layer}");
    let _ = writeln!(s, "message: {} ({})", r.message, r.operator);
    let _ = writeln!(s, "shared pair: {}", r.variant);
    for (name, a) in [("prepared", &r.prepared), ("encoded", &r.encoded), ("decoded", &r.decoded)] {
        if let Some(a) = a {
            let _ = writeln!(s, "{name}: {}", amps_text(a));
        }
    }
    if let Some(p) = r.prepared_populations {
        let _ = writeln!(s, "prepared populations: {}", pops_text(&p));
    }
    if let Some(o) = &r.output {
        let _ = writeln!(s, "output: {o}");
    }
    let _ = writeln!(s, "populations: {}", pops_text(&r.populations));
    if let Some(d) = &r.density {
        s.push_str("density matrix:\n");
        s.push_str(&formats::density_text(d));
    }
    if let Some(f) = r.fidelity {
        let _ = writeln!(s, "fidelity vs ideal: {f:.6}");
    }
    let _ = writeln!(s, "readout: {} (population {:.9})", r.readout, r.readout_population);
    match r.recovered_message {
        Some(m) => {
            let _ = writeln!(s, "recovered message: {m}");
        }
        None => s.push_str("recovered message: none\n"),
    }
    s
}

fn pops_text(p: &[f64; 4]) -> String {
    BASIS_LABELS
        .iter()
        .zip(p)
        .map(|(l, v)| format!("|{l}>={v:.6}"))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Serialize, Deserialize)]
struct PopulationRow {
    state: String,
    population: f64,
}

/// Final populations as `state,population`.
pub fn run_csv(r: &RunReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (l, &p) in BASIS_LABELS.iter().zip(&r.populations) {
        w.serialize(PopulationRow { state: (*l).into(), population: p }).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn parse_run_csv(text: &str) -> Result<[f64; 4], CliError> {
    let mut out = [f64::NAN; 4];
    for row in csv::Reader::from_reader(text.as_bytes()).deserialize::<PopulationRow>() {
        let row = row.map_err(|e| CliError::Parse(e.to_string()))?;
        let k = BASIS_LABELS
            .iter()
            .position(|l| *l == row.state)
            .ok_or_else(|| CliError::Parse(format!("unknown state {:?}", row.state)))?;
        out[k] = row.population;
    }
    if out.iter().any(|p| p.is_nan()) {
        return Err(CliError::Parse("missing populations".into()));
    }
    Ok(out)
}

pub fn cmd_run(cfg: &RunConfig) -> Result<Output, CliError> {
    let r = run_report(cfg)?;
    let ok = r.recovered_message == Some(cfg.message.index());
    let body = match cfg.format {
        OutputFormat::Text => run_text(&r),
        OutputFormat::Json => serde_json::to_string_pretty(&r).expect("plain data serializes"),
        OutputFormat::Csv => run_csv(&r),
    };
    Ok(Output { body, ok })
}

// ---------------------------------------------------------------------------

/// Modulus panels for the four encodings; noise defaults to the demo set.
pub fn fig4_doc(cfg: &RunConfig) -> Result<formats::Fig4Doc, CliError> {
    let noise = cfg.noise.unwrap_or_else(ErrorParams::calibrated_demo);
    noise.validate()?;
    let panels = modulus_panels(&cfg.setup(noise))?;
    Ok(formats::fig4_doc(&panels, BellVariant::MinusPhi, cfg.seed))
}

pub fn cmd_fig4(cfg: &RunConfig) -> Result<Output, CliError> {
    let doc = fig4_doc(cfg)?;
    Ok(Output::ok(match cfg.format {
        OutputFormat::Text => formats::fig4_text(&doc),
        OutputFormat::Json => formats::fig4_json(&doc),
        OutputFormat::Csv => formats::fig4_csv(&doc),
    }))
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomoReport {
    pub layer: Layer,
    pub message: u8,
    pub variant: String,
    pub records: Vec<RecordDoc>,
    pub reconstructed: MatrixDoc,
    pub moduli: [[f64; 4]; 4],
    pub theoretical_moduli: [[f64; 4]; 4],
    pub max_error_absolute: f64,
    pub max_error_relative: f64,
    pub fidelity: f64,
}

/// Detected signals of one readout experiment, keyed by operator label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordDoc {
    pub readout_a: String,
    pub readout_b: String,
    pub signals: BTreeMap<String, f64>,
}

pub fn tomo_report(cfg: &RunConfig) -> Result<TomoReport, CliError> {
    cfg.validate()?;
    let rho = cfg.output_state()?;
    let records = simulate_readouts(&rho);
    let fitted = reconstruct(&records)?;
    let theory = theoretical_output(cfg.message, cfg.variant)?;
    let ElementError { absolute, relative } = max_element_error(&fitted, &theory);
    Ok(TomoReport {
        layer: cfg.layer,
        message: cfg.message.index(),
        variant: cfg.variant.name().into(),
        records: records
            .iter()
            .map(|r| RecordDoc {
                readout_a: r.readout_a.name().into(),
                readout_b: r.readout_b.name().into(),
                signals: r.detected().map(|(k, v)| (operator_label(k).to_string(), v)).collect(),
            })
            .collect(),
        reconstructed: MatrixDoc::of(&fitted),
        moduli: element_modulus_table(&fitted).0,
        theoretical_moduli: element_modulus_table(&theory).0,
        max_error_absolute: absolute,
        max_error_relative: relative,
        fidelity: fitted.fidelity(&theory),
    })
}

pub fn cmd_tomo(cfg: &RunConfig) -> Result<Output, CliError> {
    let r = tomo_report(cfg)?;
    let table = densecode_core::tomo::ModulusTable(r.moduli);
    let body = match cfg.format {
        OutputFormat::Text => {
            let mut s = format!("message {} on {}: {} readout experiments\n", r.message, r.variant, r.records.len());
            s.push_str("reconstructed density matrix:\n");
            s.push_str(&formats::density_text(&r.reconstructed));
            s.push_str("element moduli:\n");
            s.push_str(&formats::modulus_text(&table));
            let _ = writeln!(
                s,
                "max element error: {:.6} absolute, {:.6} relative",
                r.max_error_absolute, r.max_error_relative
            );
            let _ = writeln!(s, "fidelity vs ideal: {:.6}", r.fidelity);
            s
        }
        OutputFormat::Json => serde_json::to_string_pretty(&r).expect("plain data serializes"),
        OutputFormat::Csv => formats::modulus_csv(&table),
    };
    Ok(Output::ok(body))
}

// ---------------------------------------------------------------------------

pub fn cmd_validate(opts: &ValidateOptions, format: OutputFormat) -> Output {
    let checks = validate::run_all(opts);
    let ok = validate::all_passed(&checks);
    let body = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&checks).expect("plain data serializes"),
        OutputFormat::Text | OutputFormat::Csv => validate::render(&checks),
    };
    Output { body, ok }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: u8, v: BellVariant, layer: Layer) -> RunConfig {
        RunConfig { layer, message: Message::new(m).unwrap(), variant: v, ..RunConfig::default() }
    }

    #[test]
    fn ideal_run_recovers_message_two_via_00() {
        let r = run_report(&cfg(2, BellVariant::MinusPhi, Layer::Ideal)).unwrap();
        assert_eq!(r.output.as_deref(), Some("|00>"));
        assert_eq!(r.readout, "00");
        assert_eq!(r.recovered_message, Some(2));
    }

    #[test]
    fn pulse_run_concentrates_population() {
        let r = run_report(&cfg(1, BellVariant::MinusPhi, Layer::Pulse)).unwrap();
        assert_eq!(r.readout, "10");
        assert!(r.populations[2] > 1.0 - 1e-9);
        assert!(r.fidelity.unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn noise_with_ideal_layer_is_usage_error() {
        let c = RunConfig { noise: Some(ErrorParams::calibrated_demo()), ..cfg(3, BellVariant::MinusPhi, Layer::Ideal) };
        assert!(matches!(cmd_run(&c), Err(CliError::Usage(_))));
    }

    #[test]
    fn run_csv_round_trips() {
        let r = run_report(&cfg(4, BellVariant::PlusPsi, Layer::Ideal)).unwrap();
        assert_eq!(parse_run_csv(&run_csv(&r)).unwrap(), r.populations);
    }

    #[test]
    fn run_json_round_trips() {
        let r = run_report(&cfg(3, BellVariant::MinusPsi, Layer::Pulse)).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<RunReport>(&text).unwrap(), r);
    }

    #[test]
    fn tomo_ideal_is_exact() {
        let r = tomo_report(&cfg(4, BellVariant::MinusPhi, Layer::Ideal)).unwrap();
        assert_eq!(r.records.len(), 9);
        assert!(r.max_error_absolute < 1e-8);
        assert!((r.moduli[1][1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn table_self_check_passes() {
        assert!(cmd_table(OutputFormat::Text).unwrap().ok);
    }
}
