//! End-to-end runs: protocol, acquisition, line extraction and verdict.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::functions::{enumerate_promise, BinaryFunction, FunctionClass};
use crate::spectroscopy::round9;
use crate::spectroscopy::{
    classify_from_spectrum, extract_lines, fid, run_protocol, spectrum, Acquisition, DeviationState,
    LineList, Realization, Spectrum, StateKind, Verdict,
};
use crate::spin_system::SpinSystem;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub system: SpinSystem,
    pub state: StateKind,
    pub realization: Realization,
    pub acquisition: Acquisition,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            system: SpinSystem::alanine(),
            state: StateKind::Thermal,
            realization: Realization::Ideal,
            acquisition: Acquisition::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub function: BinaryFunction,
    pub final_state: DeviationState,
    pub spectrum: Spectrum,
    pub lines: LineList,
    pub verdict: Verdict,
}

impl ExperimentResult {
    pub fn verdict_record(&self) -> VerdictRecord {
        VerdictRecord::new(self.function, self.verdict, &self.lines)
    }
}

/// Spectrum and lines without a verdict.
pub fn acquire(f: BinaryFunction, cfg: &ExperimentConfig) -> Result<(DeviationState, Spectrum, LineList)> {
    let init = DeviationState::initial(cfg.state)?;
    let state = run_protocol(f, &init, &cfg.system, cfg.realization)?;
    let s = fid(&state, &cfg.system, &cfg.acquisition)?;
    let spec = spectrum(&s, &cfg.acquisition, cfg.system.linewidth_hz())?;
    let lines = extract_lines(&spec, &cfg.system)?;
    Ok((state, spec, lines))
}

/// Lines of `f = 0x00` under the same configuration.
pub fn reference_lines(cfg: &ExperimentConfig) -> Result<LineList> {
    Ok(acquire(BinaryFunction::from_byte(0), cfg)?.2)
}

pub fn run_with_reference(f: BinaryFunction, cfg: &ExperimentConfig, reference: &LineList) -> Result<ExperimentResult> {
    let (final_state, spectrum, lines) = acquire(f, cfg)?;
    let verdict = classify_from_spectrum(&lines, reference)?;
    Ok(ExperimentResult {
        function: f,
        final_state,
        spectrum,
        lines,
        verdict,
    })
}

pub fn run_experiment(f: BinaryFunction, cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let reference = reference_lines(cfg)?;
    run_with_reference(f, cfg, &reference)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineRecord {
    pub spin: usize,
    pub partner_signs: Vec<i8>,
    pub freq_hz: f64,
    pub amplitude: f64,
}

/// Verdict file contents. Amplitudes are rounded to 1e-9 so that
/// equivalent initial states give identical files.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub hex_index: u8,
    pub verdict: Verdict,
    pub lines: Vec<LineRecord>,
}

impl VerdictRecord {
    pub fn new(f: BinaryFunction, verdict: Verdict, lines: &LineList) -> Self {
        Self {
            hex_index: f.hex_index(),
            verdict,
            lines: lines
                .lines
                .iter()
                .map(|l| LineRecord {
                    spin: l.spin,
                    partner_signs: l.partner_signs.clone(),
                    freq_hz: round9(l.freq_hz),
                    amplitude: round9(l.signed_amplitude),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationRow {
    pub hex_index: u8,
    pub expected: FunctionClass,
    pub verdict: Verdict,
    pub correct: bool,
}

pub fn is_correct(expected: FunctionClass, verdict: Verdict) -> bool {
    matches!(
        (expected, verdict),
        (FunctionClass::Constant, Verdict::Constant) | (FunctionClass::Balanced, Verdict::Balanced)
    )
}

/// Runs all 72 constant and balanced functions; rows ascend by index.
pub fn classify_all(cfg: &ExperimentConfig) -> Result<Vec<ClassificationRow>> {
    let reference = reference_lines(cfg)?;
    enumerate_promise()
        .into_par_iter()
        .map(|f| {
            let r = run_with_reference(f, cfg, &reference)?;
            let expected = f.classify();
            Ok(ClassificationRow {
                hex_index: f.hex_index(),
                expected,
                verdict: r.verdict,
                correct: is_correct(expected, r.verdict),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_parity_verdicts() {
        let cfg = ExperimentConfig::default();
        let r = run_experiment(BinaryFunction::from_byte(0x00), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Constant);
        let r = run_experiment(BinaryFunction::from_byte(0xFF), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Constant);
        let r = run_experiment(BinaryFunction::from_byte(0x69), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Balanced);
    }

    #[test]
    fn thermal_and_pure_records_identical() {
        let f = BinaryFunction::from_byte(0x4D);
        let thermal = run_experiment(f, &ExperimentConfig::default()).unwrap();
        let pure_cfg = ExperimentConfig {
            state: StateKind::Pure,
            ..ExperimentConfig::default()
        };
        let pure = run_experiment(f, &pure_cfg).unwrap();
        let a = serde_json::to_string(&thermal.verdict_record()).unwrap();
        let b = serde_json::to_string(&pure.verdict_record()).unwrap();
        assert_eq!(a, b);
        assert!(thermal.spectrum.relative_difference(&pure.spectrum) < 1e-8);
    }

    #[test]
    fn record_shape() {
        let r = run_experiment(BinaryFunction::from_byte(0x0F), &ExperimentConfig::default()).unwrap();
        let v = serde_json::to_value(r.verdict_record()).unwrap();
        assert_eq!(v["hex_index"], 15);
        assert_eq!(v["verdict"], "balanced");
        assert_eq!(v["lines"].as_array().unwrap().len(), 12);
        assert_eq!(v["lines"][0]["amplitude"], -0.5);
    }

    #[test]
    fn compiled_realization_classifies() {
        let cfg = ExperimentConfig {
            realization: Realization::Compiled,
            ..ExperimentConfig::default()
        };
        let r = run_experiment(BinaryFunction::from_byte(0x17), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Balanced);
    }
}
