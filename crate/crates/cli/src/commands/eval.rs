use std::path::Path;

use thermotrack::data::load_dataset;
use thermotrack::error::Result;
use thermotrack::eval::{
    accuracy, attribute_breakdown, eao, default_thresholds, evaluate_dataset, ope_success,
    robustness, write_reports, write_trajectories, EvalRun, Protocol, ReportFiles, SuccessCurve,
    VotOptions,
};
use thermotrack::Real;

use crate::log_info;

use crate::ProtocolArg;

/// Runs a full dataset evaluation and writes the report files.
///
/// Under the reset protocol a second no-reset pass supplies the success
/// curve, so the report directory always carries `report.json`,
/// `eao_curve.csv`, `success_curve.csv` and `attributes.json`; the one-pass
/// protocol writes `report.json` and `success_curve.csv`.
pub fn run(
    dataset: &Path,
    protocol: ProtocolArg,
    report: &Path,
    config: Option<&Path>,
    jobs: Option<usize>,
) -> Result<()> {
    let protocol = match protocol {
        ProtocolArg::Vot => Protocol::Vot,
        ProtocolArg::Ope => Protocol::Ope,
    };
    let cfg = super::load_config(config)?;
    super::echo_config(report, &cfg)?;
    let jobs = jobs.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });

    let sequences = load_dataset::<Real>(dataset)?;
    log_info!(
        "evaluating {} sequences with {jobs} workers",
        sequences.len()
    );
    let opts = VotOptions {
        fail_threshold: cfg.eval.fail_threshold,
        reinit_gap: cfg.eval.reinit_gap,
    };

    match protocol {
        Protocol::Vot => {
            let runs = evaluate_dataset(&sequences, &cfg.tracker, Protocol::Vot, &opts, jobs)?;
            for run in &runs {
                crate::log_debug!(
                    "sequence {}: {} failures over {} frames",
                    run.sequence,
                    run.failures.len(),
                    run.frames.len()
                );
            }
            let acc = accuracy(&runs)?;
            for name in &acc.excluded {
                eprintln!("warning: sequence {name} had no countable frames");
            }
            let rob = robustness(&runs)?;
            let curve = eao(&runs, cfg.eval.eao_interval)?;
            let (attrs, warnings) =
                attribute_breakdown(&runs, &sequences, cfg.eval.eao_interval)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            write_trajectories(report, &runs)?;
            // Second pass without resets for the success plot.
            let ope_runs = evaluate_dataset(&sequences, &cfg.tracker, Protocol::Ope, &opts, jobs)?;
            let success = success_over_runs(&ope_runs)?;
            write_reports(
                report,
                &ReportFiles {
                    protocol: "vot",
                    accuracy: Some(&acc),
                    robustness: Some(rob),
                    eao: Some(&curve),
                    success: Some(&success),
                    runs: &runs,
                    attributes: Some(&attrs),
                },
            )?;
            log_info!(
                "A = {:.4}, R = {:.4}, EAO = {:.4}",
                acc.value,
                rob,
                curve.eao
            );
        }
        Protocol::Ope => {
            let runs = evaluate_dataset(&sequences, &cfg.tracker, Protocol::Ope, &opts, jobs)?;
            write_trajectories(report, &runs)?;
            let success = success_over_runs(&runs)?;
            write_reports(
                report,
                &ReportFiles {
                    protocol: "ope",
                    accuracy: None,
                    robustness: None,
                    eao: None,
                    success: Some(&success),
                    runs: &runs,
                    attributes: None,
                },
            )?;
            log_info!("AUC = {:.4}", success.auc);
        }
    }
    Ok(())
}

/// Success curve over the pooled frames of all runs.
fn success_over_runs(runs: &[EvalRun<Real>]) -> Result<SuccessCurve<Real>> {
    let mut frames = vec![thermotrack::eval::FrameOutcome::Init];
    for run in runs {
        frames.extend(
            run.tracked_overlaps()
                .into_iter()
                .map(thermotrack::eval::FrameOutcome::Tracked),
        );
    }
    let n = frames.len();
    let pooled = EvalRun {
        sequence: "pooled".to_string(),
        frames,
        failures: Vec::new(),
        reinits: Vec::new(),
        boxes: vec![None; n],
    };
    ope_success(&pooled, &default_thresholds())
}
