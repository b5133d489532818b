//! Library side of the `mquant` command: configuration, the four commands
//! and their report types.

pub mod config;
pub mod error;
pub mod report;

use std::fs;

use mquant_core::bounds::{self, BoundReport};
use mquant_core::{
    informational_divergence, make_family, make_target, metrics, oracle_min, parse_values,
    quantize_id, quantize_vd, reverse_divergence, variational_distance, Base, Criterion,
    FamilySpec, MTypeApprox, Target,
};
use rayon::prelude::*;

pub use config::{Command, MRange, MethodChoice, RunConfig, Source};
pub use error::{CliError, Result};
pub use report::{
    InputEcho, MethodReport, OracleCheck, OracleReport, QuantizationReport, SweepRow, SWEEP_HEADER,
};

const ORACLE_TOLERANCE: f64 = 1e-12;

/// Rendered command output plus any guarantee the computed outputs broke.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub violations: Vec<String>,
}

impl Outcome {
    fn clean(text: String) -> Self {
        Outcome {
            text,
            violations: Vec::new(),
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    match config.command {
        Command::Quantize => {
            let (report, violations) = cmd_quantize(config)?;
            Ok(Outcome {
                text: to_json(&report)?,
                violations,
            })
        }
        Command::Bounds => {
            let (report, violations) = cmd_bounds(config)?;
            Ok(Outcome {
                text: to_json(&report)?,
                violations,
            })
        }
        Command::Sweep => Ok(Outcome::clean(write_csv(&cmd_sweep(config)?)?)),
        Command::Oracle => {
            let report = cmd_oracle(config)?;
            let violations = report
                .checks
                .iter()
                .filter(|c| !c.equal)
                .map(|c| format!("{} differs from the exhaustive minimum", c.criterion))
                .collect();
            Ok(Outcome {
                text: to_json(&report)?,
                violations,
            })
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Reads or materializes the target for precision `m`.
pub fn load_target(source: &Source, normalize: bool, m: u64) -> Result<Target> {
    match source {
        Source::File(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(make_target(&parse_values(&text)?, normalize)?)
        }
        Source::Family(kind) => Ok(make_family(&FamilySpec::new(kind.clone()), m)?),
    }
}

fn echo(config: &RunConfig, target: &Target) -> InputEcho {
    InputEcho {
        source: config.source.to_string(),
        m: config.single_m(),
        method: config.method,
        base: config.base,
        normalize: config.normalize,
        input_len: target.input_len(),
        materialized: target.n(),
        tail_mass: target.tail_mass(),
    }
}

fn method_report(p: &MTypeApprox, t: &Target, base: Base) -> Result<MethodReport> {
    let reverse = reverse_divergence(t, p)?;
    Ok(MethodReport {
        method: p.method(),
        counts: t.expand_counts(p.counts())?,
        support_size: p.support_size(),
        variational_distance: variational_distance(p, t)?,
        divergence: informational_divergence(p, t)?.in_base(base),
        reverse_divergence: (!reverse.is_infinite()).then(|| reverse.in_base(base)),
        elementwise: bounds::check_elementwise(p, t)?,
    })
}

fn violations(report: &BoundReport) -> Vec<String> {
    let mut out: Vec<String> = report
        .violations()
        .map(|e| format!("bound {} not satisfied", e.name))
        .collect();
    if !report.elementwise_vd.uniform {
        out.push("distance-optimal output exceeds the per-entry error limit".into());
    }
    if !report.elementwise_id.ratio_bounded {
        out.push("divergence-optimal output exceeds the per-entry ratio limit".into());
    }
    out
}

fn quantize_both(target: &Target, m: u64) -> Result<(MTypeApprox, MTypeApprox)> {
    let vd = quantize_vd(target, m)?;
    let (id, _) = quantize_id(target, m)?;
    Ok((vd, id))
}

pub fn cmd_quantize(config: &RunConfig) -> Result<(QuantizationReport, Vec<String>)> {
    let m = config.single_m();
    let target = load_target(&config.source, config.normalize, m)?;
    let (vd, id) = quantize_both(&target, m)?;
    let mut methods = Vec::new();
    if config.method.vd() {
        methods.push(method_report(&vd, &target, config.base)?);
    }
    if config.method.id() {
        methods.push(method_report(&id, &target, config.base)?);
    }
    let bounds = bounds::bound_report(&target, &vd, &id)?;
    let violations = violations(&bounds);
    let report = QuantizationReport {
        input: echo(config, &target),
        methods,
        bounds: bounds.in_base(config.base),
    };
    Ok((report, violations))
}

pub fn cmd_bounds(config: &RunConfig) -> Result<(BoundReport, Vec<String>)> {
    let m = config.single_m();
    let target = load_target(&config.source, config.normalize, m)?;
    let (vd, id) = quantize_both(&target, m)?;
    let report = bounds::bound_report(&target, &vd, &id)?;
    let violations = violations(&report);
    Ok((report.in_base(config.base), violations))
}

fn sweep_row(target: &Target, m: u64, base: Base) -> Result<SweepRow> {
    let (vd, id) = quantize_both(target, m)?;
    Ok(SweepRow {
        m,
        k_vd: vd.support_size(),
        k_id: id.support_size(),
        vd_vd: variational_distance(&vd, target)?,
        vd_id: variational_distance(&id, target)?,
        d_vd: informational_divergence(&vd, target)?.in_base(base),
        d_id: informational_divergence(&id, target)?.in_base(base),
    })
}

/// One row per M in ascending order. Rows are computed in parallel and
/// each family target is materialized for its own M.
pub fn cmd_sweep(config: &RunConfig) -> Result<Vec<SweepRow>> {
    let ms: Vec<u64> = config.m.values().collect();
    match &config.source {
        Source::File(_) => {
            let target = load_target(&config.source, config.normalize, config.m.start)?;
            ms.par_iter()
                .map(|&m| sweep_row(&target, m, config.base))
                .collect()
        }
        Source::Family(_) => ms
            .par_iter()
            .map(|&m| {
                sweep_row(
                    &load_target(&config.source, config.normalize, m)?,
                    m,
                    config.base,
                )
            })
            .collect(),
    }
}

pub fn write_csv(rows: &[SweepRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(SWEEP_HEADER)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Output(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

pub fn cmd_oracle(config: &RunConfig) -> Result<OracleReport> {
    let m = config.single_m();
    let target = load_target(&config.source, config.normalize, m)?;
    let mut checks = Vec::new();
    if config.method.vd() {
        let p = quantize_vd(&target, m)?;
        let (best, value) = oracle_min(&target, m, Criterion::Vd)?;
        let achieved = variational_distance(&p, &target)?;
        checks.push(OracleCheck {
            criterion: Criterion::Vd,
            oracle_value: value,
            algorithm_value: achieved,
            oracle_counts: target.expand_counts(best.counts())?,
            algorithm_counts: target.expand_counts(p.counts())?,
            equal: (achieved - value).abs() <= ORACLE_TOLERANCE,
        });
    }
    if config.method.id() {
        let (p, _) = quantize_id(&target, m)?;
        let (best, value) = oracle_min(&target, m, Criterion::Id)?;
        let achieved = metrics::kl_divergence(p.counts(), m, target.probs())?;
        checks.push(OracleCheck {
            criterion: Criterion::Id,
            oracle_value: config.base.from_nats(value),
            algorithm_value: config.base.from_nats(achieved),
            oracle_counts: target.expand_counts(best.counts())?,
            algorithm_counts: target.expand_counts(p.counts())?,
            equal: (achieved - value).abs() <= ORACLE_TOLERANCE,
        });
    }
    Ok(OracleReport {
        input: echo(config, &target),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mquant_core::{Error as CoreError, FamilyKind};

    fn family(kind: FamilyKind, command: Command, m: MRange) -> RunConfig {
        RunConfig {
            command,
            source: Source::Family(kind),
            m,
            method: MethodChoice::Both,
            base: Base::Bits,
            normalize: false,
            output: None,
        }
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        let row = SweepRow {
            m: 2,
            k_vd: 1,
            k_id: 1,
            vd_vd: 0.1,
            vd_id: 0.5,
            d_vd: 1.0,
            d_id: 0.0,
        };
        let text = write_csv(&[row]).unwrap();
        assert_eq!(
            text,
            "M,k_vd,k_id,vd_vd,vd_id,D_vd,D_id\n\
             2,1,1,1.0000000000000001e-1,5.0000000000000000e-1,1.0000000000000000e0,0.0000000000000000e0\n"
        );
    }

    #[test]
    fn sweep_rows_ascend() {
        let c = family(
            FamilyKind::Geometric { ratio: 0.8 },
            Command::Sweep,
            MRange {
                start: 1,
                end: 100,
                step: 7,
            },
        );
        let rows = cmd_sweep(&c).unwrap();
        assert!(rows.windows(2).all(|w| w[0].m < w[1].m));
        assert_eq!(rows.len(), 15);
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(CliError::from(CoreError::NoMass).exit_code(), 2);
        assert_eq!(
            CliError::from(CoreError::Invariant("x".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(CoreError::OracleGuard {
                compositions: 2,
                limit: 1
            })
            .exit_code(),
            5
        );
        let io = std::io::Error::new(std::io::ErrorKind::NotFound, "gone");
        assert_eq!(
            CliError::Io {
                path: "x".into(),
                source: io
            }
            .exit_code(),
            4
        );
    }

    #[test]
    fn quantize_reports_no_violations_on_uniform() {
        let c = family(
            FamilyKind::Uniform { n: 2 },
            Command::Quantize,
            MRange::single(3),
        );
        let outcome = run(&c).unwrap();
        assert!(outcome.violations.is_empty());
        assert!(outcome.text.ends_with("}\n"));
    }
}
