use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pliable_core::achievability::{verify_code, FieldChoice, LinearCode};
use pliable_core::bounds::{best_construction, bound_report, classify_structure, closed_form_beta};
use pliable_core::engine::{
    acyclic_certificate, l_star_witness_capped, run_chain, DecodingChoice, PolicyKind, L_STAR_MAX_M,
};
use pliable_core::oracle::{
    min_linear_code, sweep_with_limits, write_sweep_csv, write_sweep_json, OracleLimits, DEFAULT_MAX_MATRICES,
    SWEEP_MAX_M,
};
use pliable_core::{parse_instance, PliableInstance};

/// Overrides the `m` caps of the exact searches. Values above the defaults
/// are unsupported and may run for a very long time.
const MAX_M_VAR: &str = "PIC_MAX_M";

#[derive(Parser)]
#[command(name = "pic", version, about = "Bounds, structure and codes for pliable index coding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every lower bound, the closed form if known, and the best construction.
    Bound {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        q: FieldChoice,
    },
    /// Structure class of the absent family and its closed-form rate.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shortest known construction; `--out` receives the code file.
    Construct {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        q: FieldChoice,
    },
    /// Checks that a code serves every present receiver. Exits 1 if not.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive minimum-length linear code search.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long = "l-max")]
        l_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed forms against the oracle on every canonical small instance.
    /// Exits 1 if any instance disagrees.
    Sweep {
        #[arg(long)]
        m: usize,
        #[arg(long = "max-absent", default_value_t = 4)]
        max_absent: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Second copy of the records as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// One run of the decoding-chain algorithm under an adversarial choice.
    Trace {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "lookahead")]
        policy: PolicyKind,
        #[arg(long = "emit-trace")]
        emit_trace: Option<PathBuf>,
        /// `witness` uses a choice attaining L*; `smallest` decodes the
        /// smallest missing message everywhere.
        #[arg(long, value_enum, default_value_t = ChoiceKind::Witness)]
        choice: ChoiceKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChoiceKind {
    Witness,
    Smallest,
}

/// Result of a command that completed: success or a failed verification.
enum Status {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn max_m_override() -> Result<Option<usize>> {
    match std::env::var(MAX_M_VAR) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| anyhow!("{MAX_M_VAR} must be a positive integer, got `{v}`")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => bail!("{MAX_M_VAR}: {e}"),
    }
}

fn read_instance(path: &Path) -> Result<PliableInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read instance file {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("invalid instance in {}", path.display()))
}

fn read_code(path: &Path, m: usize) -> Result<LinearCode> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read code file {}", path.display()))?;
    LinearCode::from_json(&text, m).with_context(|| format!("invalid code in {}", path.display()))
}

/// Writes pretty JSON to `out`, or to stdout when no path is given.
fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn run(command: Command) -> Result<Status> {
    let l_star_cap = max_m_override()?.unwrap_or(L_STAR_MAX_M);
    match command {
        Command::Bound { input, out, q } => {
            let inst = read_instance(&input)?;
            let report = bound_report(&inst, l_star_cap, q)?;
            emit(&report, out.as_deref())?;
        }
        Command::Classify { input, out } => {
            let inst = read_instance(&input)?;
            let value = serde_json::json!({
                "structure": classify_structure(&inst),
                "closed_form": closed_form_beta(&inst),
            });
            emit(&value, out.as_deref())?;
        }
        Command::Construct { input, out, q } => {
            let inst = read_instance(&input)?;
            let c = best_construction(&inst, q)?;
            if let Some(path) = &out {
                fs::write(path, c.code.to_json() + "\n").with_context(|| format!("cannot write {}", path.display()))?;
            }
            emit(&c, None)?;
        }
        Command::Verify { input, code, out } => {
            let inst = read_instance(&input)?;
            let code = read_code(&code, inst.m())?;
            return match verify_code(&inst, &code)? {
                Some(d) => {
                    emit(&serde_json::json!({ "ok": true, "decoding": d }), out.as_deref())?;
                    Ok(Status::Ok)
                }
                None => {
                    let failing = pliable_core::achievability::first_failure(&inst, &code)?;
                    emit(&serde_json::json!({ "ok": false, "failing_receiver": failing }), out.as_deref())?;
                    Ok(Status::Failed)
                }
            };
        }
        Command::Oracle { input, q, l_max, out } => {
            let inst = read_instance(&input)?;
            let l_max = l_max.unwrap_or(inst.m());
            let code = min_linear_code(&inst, q, l_max, DEFAULT_MAX_MATRICES)?;
            let value = serde_json::json!({
                "q": q,
                "l_max": l_max,
                "min_length": code.as_ref().map(LinearCode::len),
                "code": code.as_ref().map(LinearCode::to_value),
            });
            emit(&value, out.as_deref())?;
        }
        Command::Sweep { m, max_absent, q, out, json, format } => {
            let limits = OracleLimits {
                sweep_max_m: max_m_override()?.unwrap_or(SWEEP_MAX_M),
                ..OracleLimits::default()
            };
            let records = sweep_with_limits(m, max_absent, q, &limits)?;
            let mut primary: Box<dyn Write> = match &out {
                Some(path) => Box::new(fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?),
                None => Box::new(std::io::stdout().lock()),
            };
            match format {
                Format::Csv => write_sweep_csv(&records, &mut primary)?,
                Format::Json => write_sweep_json(&records, &mut primary)?,
            }
            if let Err(e) = primary.flush() {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
            if let Some(path) = &json {
                let file = fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
                write_sweep_json(&records, file)?;
            }
            let disagreements = records.iter().filter(|r| !r.agree).count();
            eprintln!("{} canonical instances, {disagreements} disagreements", records.len());
            if disagreements > 0 {
                return Ok(Status::Failed);
            }
        }
        Command::Trace { input, mut policy, emit_trace, choice } => {
            let inst = read_instance(&input)?;
            let (l_star, d) = match choice {
                ChoiceKind::Witness => {
                    let (l, d) = l_star_witness_capped(&inst, l_star_cap)?;
                    (Some(l), d)
                }
                ChoiceKind::Smallest => (None, DecodingChoice::smallest_missing(&inst)),
            };
            let trace = run_chain(&inst, &d, &mut policy)?;
            let cert = acyclic_certificate(&inst, &trace, &d)?;
            if let Some(path) = &emit_trace {
                fs::write(path, serde_json::to_string_pretty(&trace.to_value())? + "\n")
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            let value = serde_json::json!({
                "l_star": l_star,
                "skipped": trace.skip_count(),
                "order": trace.order(),
                "hits": trace.hits,
                "acyclic": cert.acyclic,
                "certificate_vertices": cert.vertex_count(),
            });
            emit(&value, None)?;
        }
    }
    Ok(Status::Ok)
}
