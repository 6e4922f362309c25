//! Coarse grid search for the demonstration noise parameters.
//!
//! Runs the four-encoding reconstruction for every grid point and prints
//! the points whose largest relative element error is closest to 0.10.
//!
//!     cargo run --release -p densecode --example calibrate

use densecode_core::experiment::{modulus_panels, worst_relative_error, ExperimentSetup};
use densecode_core::noise::ErrorParams;

const TARGET: f64 = 0.10;
const GRID_ENSEMBLE: usize = 300;

fn main() -> Result<(), densecode_core::Error> {
    let base = ExperimentSetup { seed: 2024, ..ExperimentSetup::default() };
    let mut rows = Vec::new();
    for rf_spread in [0.0, 0.02, 0.04, 0.06, 0.08, 0.10] {
        for calib_offset in [0.0, 0.02, 0.04, 0.06] {
            for offset_spread_hz in [0.0, 10.0, 20.0, 40.0] {
                let noise = ErrorParams {
                    rf_spread,
                    calib_offset,
                    offset_spread_hz,
                    ensemble_size: GRID_ENSEMBLE,
                    ..ErrorParams::calibrated_demo()
                };
                let panels = modulus_panels(&ExperimentSetup { noise, ..base })?;
                rows.push((worst_relative_error(&panels), noise));
            }
        }
    }
    rows.sort_by(|a, b| (a.0 - TARGET).abs().total_cmp(&(b.0 - TARGET).abs()));
    println!("rf_spread,calib_offset,offset_spread_hz,max_relative_error");
    for (err, p) in rows.iter().take(12) {
        println!("{},{},{},{:.4}", p.rf_spread, p.calib_offset, p.offset_spread_hz, err);
    }

    let demo = ExperimentSetup { noise: ErrorParams::calibrated_demo(), ..base };
    let err = worst_relative_error(&modulus_panels(&demo)?);
    println!("shipped demo parameters at ensemble {}: {err:.4}", demo.noise.ensemble_size);
    Ok(())
}
