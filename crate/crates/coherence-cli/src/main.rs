//! `coherence`: command-line access to the coherence toolkit.
//!
//! Subcommands read JSON state/channel files (complex numbers as `[re, im]`
//! pairs), emit a JSON report on standard output, and use exit codes
//! 0 (success), 1 (verdict or input failure), 2 (usage error).

mod files;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use coherence::measures::{self, MeasureName};
use coherence::states::validate_state;
use coherence::witness::{
    falsify, monotone_ordering_report, separation_report, stochastic_bound_report, ChannelFamily,
    VIOLATION_TOL,
};
use coherence::DensityMatrix;

use files::{read_json, ChannelFile, CliError, MatrixFile};

#[derive(Parser)]
#[command(
    name = "coherence",
    version,
    about = "Coherence measures, channel classification, and monotonicity witnesses",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate coherence measures on a state file.
    Measure {
        /// JSON file holding the density matrix.
        #[arg(long)]
        state: String,
        /// Which measure to evaluate.
        #[arg(long, value_enum, default_value_t = MeasureArg::All)]
        measure: MeasureArg,
    },
    /// Classify a channel against the free-operation classes.
    Classify {
        /// JSON file holding the Kraus channel.
        #[arg(long)]
        channel: String,
        /// Classification tolerance.
        #[arg(long, default_value_t = coherence::channels::CLASSIFY_TOL)]
        tol: f64,
    },
    /// Apply a channel (or one Kraus branch) to a state.
    Apply {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        state: String,
        /// Apply only this Kraus branch and renormalize.
        #[arg(long)]
        branch: Option<usize>,
    },
    /// Decide qubit convertibility between two states.
    Convertible {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Run a built-in verification report (no input files needed).
    Verify {
        #[arg(value_enum)]
        what: VerifyArg,
    },
    /// Randomized monotonicity falsification for a measure and channel family.
    Falsify {
        #[arg(long, value_enum)]
        measure: SingleMeasureArg,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Increase beyond which a trial counts as a violation.
        #[arg(long, default_value_t = VIOLATION_TOL)]
        tol: f64,
    },
    /// Dephasing-twirl a channel and write the result.
    Twirl {
        #[arg(long)]
        channel: String,
        /// Output path for the twirled channel file.
        #[arg(long)]
        out: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    L1,
    Rel,
    Rob,
    Cmax,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum SingleMeasureArg {
    L1,
    Rel,
    Rob,
    Cmax,
}

impl From<SingleMeasureArg> for MeasureName {
    fn from(m: SingleMeasureArg) -> Self {
        match m {
            SingleMeasureArg::L1 => MeasureName::L1,
            SingleMeasureArg::Rel => MeasureName::RelEntropy,
            SingleMeasureArg::Rob => MeasureName::Robustness,
            SingleMeasureArg::Cmax => MeasureName::CMax,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Theorem1,
    Theorem2,
    Stochastic,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Sio,
    Io,
    #[value(name = "dio-twirl")]
    DioTwirl,
}

impl From<FamilyArg> for ChannelFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Sio => ChannelFamily::Sio,
            FamilyArg::Io => ChannelFamily::Io,
            FamilyArg::DioTwirl => ChannelFamily::DioTwirl,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(value) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("valid JSON")
            );
            ExitCode::SUCCESS
        }
        Err(error) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&error.to_json()).expect("valid JSON")
            );
            ExitCode::from(1)
        }
    }
}

fn load_state(path: &str) -> Result<DensityMatrix, CliError> {
    let file: MatrixFile = read_json(path)?;
    Ok(validate_state(&file.to_matrix()?)?)
}

fn run(command: Command) -> Result<Value, CliError> {
    match command {
        Command::Measure { state, measure } => {
            let rho = load_state(&state)?;
            let names: Vec<MeasureName> = match measure {
                MeasureArg::L1 => vec![MeasureName::L1],
                MeasureArg::Rel => vec![MeasureName::RelEntropy],
                MeasureArg::Rob => vec![MeasureName::Robustness],
                MeasureArg::Cmax => vec![MeasureName::CMax],
                MeasureArg::All => MeasureName::ALL.to_vec(),
            };
            let values = names
                .into_iter()
                .map(|name| Ok(report::measure_value(&measures::evaluate(name, &rho)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(json!({
                "header": report::header(None, &[]),
                "state": state,
                "measures": values,
            }))
        }
        Command::Classify { channel, tol } => {
            let file: ChannelFile = read_json(&channel)?;
            let ch = file.to_channel()?;
            Ok(json!({
                "header": report::header(None, &[("classification", tol)]),
                "channel": channel,
                "classification": report::classification(&ch.classify(tol)),
            }))
        }
        Command::Apply {
            channel,
            state,
            branch,
        } => {
            let file: ChannelFile = read_json(&channel)?;
            let ch = file.to_channel()?;
            let rho = load_state(&state)?;
            let mut out = json!({ "header": report::header(None, &[]) });
            match branch {
                Some(index) => {
                    let (probability, result) = ch.apply_stochastic(index, &rho)?;
                    out["probability"] = json!(probability);
                    out["branch"] = json!(index);
                    out["output_state"] =
                        serde_json::to_value(MatrixFile::from_matrix(result.matrix()))
                            .expect("serializable");
                }
                None => {
                    let result = ch.apply(&rho)?;
                    out["output_state"] =
                        serde_json::to_value(MatrixFile::from_matrix(result.matrix()))
                            .expect("serializable");
                }
            }
            Ok(out)
        }
        Command::Convertible { from, to } => {
            let rho_from = load_state(&from)?;
            let rho_to = load_state(&to)?;
            let convertible = measures::qubit_convertible(&rho_from, &rho_to)?;
            let evaluate_pair = |rho: &DensityMatrix| -> Result<Value, CliError> {
                Ok(json!({
                    "robustness": measures::c_robustness(rho)?.value,
                    "c_max": measures::c_max(rho).value,
                }))
            };
            Ok(json!({
                "header": report::header(None, &[("comparison_slack", measures::CONVERTIBILITY_SLACK)]),
                "from": evaluate_pair(&rho_from)?,
                "to": evaluate_pair(&rho_to)?,
                "convertible": convertible,
            }))
        }
        Command::Verify { what } => match what {
            VerifyArg::Theorem1 => {
                let r = separation_report()?;
                Ok(json!({
                    "header": report::header(Some(r.seed), &[("fixture", coherence::witness::FIXTURE_TOL)]),
                    "report": report::witness_report(&r, false),
                }))
            }
            VerifyArg::Theorem2 => {
                let rows = monotone_ordering_report()?;
                let separation = rows
                    .iter()
                    .all(|row| row.ordered == (row.measure != MeasureName::CMax));
                Ok(json!({
                    "header": report::header(None, &[]),
                    "rows": report::ordering_rows(&rows),
                    "separation_certified": separation,
                }))
            }
            VerifyArg::Stochastic => {
                let r = stochastic_bound_report()?;
                Ok(json!({
                    "header": report::header(Some(r.seed), &[("fixture", coherence::witness::FIXTURE_TOL)]),
                    "report": report::witness_report(&r, false),
                }))
            }
        },
        Command::Falsify {
            measure,
            family,
            dim,
            trials,
            seed,
            tol,
        } => {
            let r = falsify(measure.into(), family.into(), dim, trials, seed, tol);
            let embed = r.verdict == coherence::Verdict::Violation;
            let mut value = json!({
                "header": report::header(Some(seed), &[("violation", tol)]),
                "report": report::witness_report(&r, embed),
            });
            if r.verdict == coherence::Verdict::Inconclusive {
                value["report"]["note"] = json!(
                    "no violation found, but this measure is not guaranteed monotone \
                     for this family; absence of a counterexample here is not a proof"
                );
            }
            Ok(value)
        }
        Command::Twirl { channel, out } => {
            let file: ChannelFile = read_json(&channel)?;
            let twirled = file.to_channel()?.dephasing_twirl()?;
            let serialized = serde_json::to_string_pretty(&ChannelFile::from_channel(&twirled))
                .expect("serializable");
            std::fs::write(&out, serialized).map_err(|e| CliError::Io {
                path: out.clone(),
                message: e.to_string(),
            })?;
            Ok(json!({
                "header": report::header(None, &[]),
                "written": out,
                "kraus_count": twirled.kraus_operators().len(),
            }))
        }
    }
}
