//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O, 2 invalid parameters or arguments, 3 decode
//! failure.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{self, round3, AnalysisError, DEFAULT_M_MAX};
use crate::channel::{self, ChannelError, ChannelParams, DeletionProfile, Piece};
use crate::codec::{self, CodeParams, Codebook, CodecError, ParamSpec, DEFAULT_ERASURE_BLOCK_LEN};
use crate::experiment::{self, ExperimentConfig, ExperimentError};
use crate::io::{self as tio, IoError};

#[derive(Debug, Parser)]
#[command(name = "tornpaper", version, about = "Torn-paper channel coding with local alignment")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive and print the code parameters as JSON.
    Params {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a message file into a codeword file.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Message file (read, or written with --random).
        #[arg(long)]
        msg: PathBuf,
        /// Draw a uniformly random message from --seed and write it to --msg.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tear a codeword file into shuffled fragments.
    Tear {
        #[arg(long = "in")]
        input: PathBuf,
        /// Breaking parameter α; the break probability is α / log2 n.
        #[arg(long, conflicts_with = "p")]
        alpha: Option<f64>,
        /// Explicit break probability (0 and 1 allowed).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Write the offset,length ground truth here.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Apply piece loss to a fragment file.
    Filter {
        #[arg(long = "in")]
        input: PathBuf,
        /// Length of the torn codeword.
        #[arg(long)]
        n: usize,
        /// Length threshold m (in units of log2 n).
        #[arg(long)]
        m: f64,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Ground truth of the input fragments; filtered alongside them.
        #[arg(long, requires = "truth_out")]
        truth: Option<PathBuf>,
        #[arg(long)]
        truth_out: Option<PathBuf>,
    },
    /// Decode a fragment file back to the message.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Ground truth: every placed fragment must land on its true offset.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Seeded in-memory trials; one CSV row per trial plus a summary row.
    Roundtrip {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (0: all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal m, rates and capacity over a grid of α.
    Rates {
        /// α values (repeat or comma-separate); default 0.1, 0.2, …, 1.5.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_M_MAX)]
        m_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Capacity and achievable rate of the lost-pieces channel.
    Tpclp {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    /// Target codeword length.
    #[arg(long, default_value_t = 1 << 18)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 0.3)]
    pub alpha: f64,
    #[arg(long, default_value_t = 8)]
    pub beta: usize,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.02)]
    pub eta: f64,
    /// Coordinates per dense parity-check block.
    #[arg(long, default_value_t = DEFAULT_ERASURE_BLOCK_LEN)]
    pub erasure_block: usize,
    /// Seed of the random parity-check matrices; encoder and decoder must agree.
    #[arg(long, default_value_t = 0)]
    pub code_seed: u64,
}

impl CodeArgs {
    fn spec(&self) -> ParamSpec {
        ParamSpec::new(self.n, self.m, self.alpha, self.beta, self.delta, self.eta)
            .with_erasure_block_len(self.erasure_block)
    }

    fn codebook(&self) -> Result<Codebook, CliError> {
        Ok(Codebook::build(self.spec().derive()?, self.code_seed)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    /// Deletion piece `lo:hi:d` on κ = ℓ / log2 n (`hi` may be `inf`); repeatable.
    #[arg(long = "piece")]
    pub pieces: Vec<Piece>,
}

impl ProfileArgs {
    fn profile(&self, threshold: f64) -> Result<Option<DeletionProfile>, CliError> {
        if self.pieces.is_empty() {
            return Ok(None);
        }
        Ok(Some(DeletionProfile::new(threshold, self.pieces.clone())?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{0}")]
    Output(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{0}")]
    Params(String),
    #[error("{0}")]
    Decode(String),
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Codec(e) => e.into(),
            ExperimentError::Channel(e) => e.into(),
            ExperimentError::Pool(s) => CliError::Params(s),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Output(_) | CliError::Csv(_) => 1,
            CliError::Codec(CodecError::DecodeFailure { .. }) | CliError::Decode(_) => 3,
            CliError::Codec(_) | CliError::Channel(_) | CliError::Analysis(_) | CliError::Params(_) => 2,
        }
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).map_err(|source| IoError::Io {
            path: p.to_owned(),
            source,
        })?),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    Ok(())
}

#[derive(Serialize)]
struct ParamsView<'a> {
    #[serde(flatten)]
    params: &'a CodeParams,
    message_bits: usize,
    rate: f64,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Params { code, out } => {
            let params = code.spec().derive()?;
            write_json(
                out.as_deref(),
                &ParamsView {
                    params: &params,
                    message_bits: params.message_bits(),
                    rate: params.rate(),
                },
            )
        }
        Command::Encode {
            code,
            msg,
            random,
            seed,
            out,
        } => {
            let cb = code.codebook()?;
            let message = if random {
                let m = experiment::random_message(cb.params(), seed);
                tio::write_bits(&msg, &m)?;
                m
            } else {
                tio::read_bits(&msg)?
            };
            let c = codec::encode(&message, &cb)?;
            tio::write_bits(&out, &c)?;
            Ok(())
        }
        Command::Tear {
            input,
            alpha,
            p,
            seed,
            out,
            truth,
        } => {
            let x = tio::read_bits(&input)?;
            let ch = match (alpha, p) {
                (_, Some(p)) => ChannelParams::with_break_probability(x.len(), p)?,
                (Some(a), None) => ChannelParams::new(x.len(), a)?,
                (None, None) => return Err(CliError::Params("one of --alpha or --p is required".into())),
            };
            let torn = channel::tear(&x, &ch, &mut ChaCha8Rng::seed_from_u64(seed));
            tio::write_fragments(&out, &torn.shuffled_view())?;
            if let Some(t) = truth {
                tio::write_truth(&t, &torn.truth())?;
            }
            Ok(())
        }
        Command::Filter {
            input,
            n,
            m,
            profile,
            seed,
            out,
            truth,
            truth_out,
        } => {
            let profile = profile
                .profile(m)?
                .map_or_else(|| DeletionProfile::constant(m, 0.0), Ok)?;
            let frags = tio::read_fragments(&input)?;
            let lengths: Vec<usize> = frags.iter().map(|f| f.len()).collect();
            let keep = channel::retain_mask(&lengths, n, &profile, &mut ChaCha8Rng::seed_from_u64(seed));
            let kept: Vec<_> = frags.into_iter().zip(&keep).filter(|(_, &k)| k).map(|(f, _)| f).collect();
            tio::write_fragments(&out, &kept)?;
            if let (Some(t), Some(t_out)) = (truth, truth_out) {
                let rows = tio::read_truth(&t)?;
                if rows.len() != keep.len() {
                    return Err(CliError::Params(format!(
                        "truth has {} rows for {} fragments",
                        rows.len(),
                        keep.len()
                    )));
                }
                let rows: Vec<_> = rows.into_iter().zip(&keep).filter(|(_, &k)| k).map(|(r, _)| r).collect();
                tio::write_truth(&t_out, &rows)?;
            }
            Ok(())
        }
        Command::Decode {
            code,
            input,
            out,
            truth,
        } => {
            let cb = code.codebook()?;
            let frags = tio::read_fragments(&input)?;
            let outcome = codec::decode_detailed(&frags, &cb);
            let d = &outcome.diagnostics;
            eprintln!(
                "fragments {} aligned {} short {} no_pilot {} ambiguous {} window_not_found {} conflicts {} erasures {:?}",
                d.fragments, d.aligned, d.short_discarded, d.no_pilot, d.ambiguous, d.window_not_found, d.conflicts, d.erasures
            );
            if let Some(t) = truth {
                let rows = tio::read_truth(&t)?;
                for p in &d.placements {
                    match rows.get(p.fragment) {
                        Some(&(off, _)) if off == p.offset => {}
                        _ => {
                            return Err(CliError::Decode(format!(
                                "fragment {} placed at {} against the ground truth",
                                p.fragment, p.offset
                            )))
                        }
                    }
                }
            }
            let msg = outcome.result?;
            tio::write_bits(&out, &msg)?;
            Ok(())
        }
        Command::Roundtrip {
            code,
            profile,
            trials,
            seed,
            jobs,
            out,
        } => {
            let cfg = ExperimentConfig {
                profile: profile.profile(code.m as f64)?,
                code_seed: code.code_seed,
                jobs,
                ..ExperimentConfig::new(code.spec(), trials, seed)
            };
            let (_, records) = experiment::roundtrip(&cfg)?;
            experiment::write_trials_csv(sink(out.as_deref())?, &records)?;
            Ok(())
        }
        Command::Rates {
            alpha,
            m_max,
            format,
            out,
        } => {
            let grid = if alpha.is_empty() {
                analysis::default_alpha_grid()
            } else {
                alpha
            };
            let rows = analysis::rate_table(&grid, m_max)?;
            match format {
                Format::Json => write_json(out.as_deref(), &rows),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(sink(out.as_deref())?);
                    w.write_record(["alpha", "m_baseline", "baseline", "m_opt", "achievable", "capacity"])?;
                    for r in &rows {
                        w.write_record([
                            format!("{}", r.alpha),
                            r.m_baseline.to_string(),
                            format!("{:.3}", round3(r.baseline)),
                            r.m_opt.to_string(),
                            format!("{:.3}", round3(r.achievable)),
                            format!("{:.3}", round3(r.capacity)),
                        ])?;
                    }
                    w.flush()?;
                    Ok(())
                }
            }
        }
        Command::Tpclp {
            alpha,
            m,
            profile,
            format,
            out,
        } => {
            let profile = profile
                .profile(m as f64)?
                .map_or_else(|| DeletionProfile::constant(m as f64, 0.0), Ok)?;
            let r = analysis::tpclp_report(alpha, m, &profile)?;
            match format {
                Format::Json => write_json(out.as_deref(), &r),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(sink(out.as_deref())?);
                    w.write_record(["alpha", "m", "capacity", "f_d", "achievable", "gap", "gap_bound"])?;
                    w.write_record([
                        format!("{}", r.alpha),
                        r.m.to_string(),
                        format!("{:.4}", r.capacity),
                        format!("{:.4}", r.f_d),
                        format!("{:.4}", r.achievable),
                        format!("{:.4}", r.gap),
                        format!("{:.4}", r.gap_bound),
                    ])?;
                    w.flush()?;
                    Ok(())
                }
            }
        }
    }
}

/// Parses `std::env::args`, runs the command and maps errors to exit codes.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
