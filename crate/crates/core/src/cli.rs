//! The `pmrd` command line.
//!
//! Exit codes: 0 on success, 1 when a verification or reproduction check
//! fails, 2 on invalid parameters or usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use crate::bounds::{self, BoundResult};
use crate::cdc::{assemble_parallel, SubspaceCode};
use crate::codefile::{CodeFile, Construction};
use crate::combinatorics::delsarte_rank_distribution;
use crate::verify::{self, CheckMode};

/// Environment variable overriding the exhaustive pair budget.
pub const PAIR_BUDGET_ENV: &str = "PMRD_PAIR_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "pmrd",
    version,
    about = "Bounds and explicit constructions of constant-dimension subspace codes from parallel lifted MRD codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Human,
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BoundKind {
    /// Two parallel lifted MRD codes, A_q(n+k, d, k)
    Thm2,
    /// s+2 parallel blocks, A_q((s+1)k+n, d, k)
    Thm3,
    /// Johnson-type bound on A_q(n, d, k)
    Johnson1,
    /// Iterated Johnson bound on A_q(n, d, k)
    Johnson2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a bound exactly. For thm2/thm3, --n is the width of the last
    /// slot; for johnson1/johnson2, --n is the ambient dimension.
    Bound {
        kind: BoundKind,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        /// Minimum subspace distance (even).
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        s: u64,
        /// Innermost partial-spread value for johnson2.
        #[arg(long)]
        base: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Rank distribution of an MRD code of m x nmin matrices.
    Dist {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        nmin: u64,
        /// Minimum rank distance.
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Recompute the shipped reference table.
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
    /// Build the parallel construction explicitly and write it to a file.
    Construct {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        s: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the size and minimum distance of a code file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Claimed minimum subspace distance.
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum TableAction {
    Reproduce {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Alternate reference file in the `q,N,d,k,new,old` format.
        #[arg(long)]
        data: Option<PathBuf>,
    },
}

/// Runs the CLI on `args` (including the program name), writing to the
/// given streams, and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_INVALID };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure { code, msg }) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

struct Failure {
    code: i32,
    msg: String,
}

fn invalid(e: impl ToString) -> Failure {
    Failure {
        code: EXIT_INVALID,
        msg: e.to_string(),
    }
}

fn io(e: std::io::Error) -> Failure {
    invalid(e)
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Bound {
            kind,
            q,
            n,
            k,
            d,
            s,
            base,
            format,
        } => {
            let result = match kind {
                BoundKind::Thm2 => bounds::two_block_bound(q, n, k, d),
                BoundKind::Thm3 => bounds::parallel_bound(q, n, k, d, s),
                BoundKind::Johnson1 => {
                    if d % 2 != 0 {
                        return Err(invalid(format!("d = {d} must be even")));
                    }
                    bounds::johnson_upper(q, n, k, d / 2)
                }
                BoundKind::Johnson2 => {
                    let base = base
                        .map(|b| BigUint::from_str(&b).map_err(|e| invalid(format!("--base {b:?}: {e}"))))
                        .transpose()?;
                    bounds::iterated_johnson_upper(q, n, d, k, base)
                }
            }
            .map_err(invalid)?;
            print_bound(&result, format, out).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Dist {
            q,
            m,
            nmin,
            d,
            format,
        } => {
            let dist = delsarte_rank_distribution(q, m, nmin, d).map_err(invalid)?;
            match format {
                Format::Human => {
                    let body: Vec<String> = (d..=nmin).map(|r| format!("{r}:{}", dist.get(r))).collect();
                    writeln!(out, "{{{}}}", body.join(", ")).map_err(io)?;
                }
                Format::Csv => {
                    writeln!(out, "rank,count").map_err(io)?;
                    for (r, c) in dist.counts() {
                        writeln!(out, "{r},{c}").map_err(io)?;
                    }
                }
                Format::Json => {
                    let counts: serde_json::Map<String, serde_json::Value> = dist
                        .counts()
                        .iter()
                        .map(|(r, c)| (r.to_string(), json!(c.to_string())))
                        .collect();
                    let v = json!({"q": q, "m": m, "nmin": nmin, "d": d, "counts": counts,
                                   "total": dist.total().to_string()});
                    writeln!(out, "{v}").map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Table {
            action: TableAction::Reproduce { format, data },
        } => {
            let rows = match data {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(io)?;
                    bounds::parse_reference_data(&text).map_err(invalid)?
                }
                None => bounds::reference_rows(),
            };
            let reproduced = bounds::reproduce(&rows).map_err(invalid)?;
            match format {
                Format::Human => {
                    writeln!(out, "{:<14} {:>48} {:>48} {:>7} {:>9}", "A_q(N,d,k)", "new (computed)", "old", "match", "new>old")
                        .map_err(io)?;
                    for r in &reproduced {
                        let label = format!("A_{}({},{},{})", r.reference.q, r.reference.ambient, r.reference.d, r.reference.k);
                        writeln!(
                            out,
                            "{:<14} {:>48} {:>48} {:>7} {:>9}",
                            label,
                            r.computed.to_string(),
                            r.reference.old.to_string(),
                            if r.matches_new { "yes" } else { "NO" },
                            if r.new_exceeds_old { "yes" } else { "no" }
                        )
                        .map_err(io)?;
                    }
                    let matched = reproduced.iter().filter(|r| r.matches_new).count();
                    let improved = reproduced.iter().filter(|r| r.new_exceeds_old).count();
                    writeln!(
                        out,
                        "{matched}/{} rows reproduced exactly; new > old in {improved}/{} rows",
                        reproduced.len(),
                        reproduced.len()
                    )
                    .map_err(io)?;
                }
                Format::Csv => {
                    writeln!(out, "q,N,d,k,new,old,computed,matches_new,new_exceeds_old").map_err(io)?;
                    for r in &reproduced {
                        let f = &r.reference;
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{},{},{}",
                            f.q, f.ambient, f.d, f.k, f.new, f.old, r.computed, r.matches_new, r.new_exceeds_old
                        )
                        .map_err(io)?;
                    }
                }
                Format::Json => {
                    writeln!(out, "{}", serde_json::to_string(&reproduced).expect("serializable")).map_err(io)?;
                }
            }
            Ok(if reproduced.iter().all(|r| r.matches_new) {
                EXIT_OK
            } else {
                EXIT_FAILED
            })
        }
        Command::Construct { q, n, k, d, s, out: path } => {
            let code = assemble_parallel(q, n, k, d, s).map_err(invalid)?;
            let explicit = code.materialize(crate::enumeration_budget()).map_err(invalid)?;
            let file = CodeFile::from_code(&explicit, Some(Construction::from(code.params())));
            file.write(&path).map_err(invalid)?;
            let sizes: Vec<String> = code.block_sizes().iter().map(u128::to_string).collect();
            writeln!(
                out,
                "wrote {} members of G_{}({}, {}) to {} (blocks: {})",
                explicit.len(),
                q,
                code.ambient(),
                k,
                path.display(),
                sizes.join(" + ")
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            input,
            d,
            mode,
            samples,
            seed,
            format,
        } => {
            let file = CodeFile::read(&input).map_err(invalid)?;
            let code = match file.to_code(d) {
                Ok(c) => c,
                Err(e) => {
                    return Err(Failure {
                        code: EXIT_FAILED,
                        msg: format!("{}: {e}", input.display()),
                    })
                }
            };
            let predicted = match file.construction {
                Some(Construction::Parallel { q, n, k, d, s }) => {
                    bounds::parallel_bound(q as u64, n as u64, k as u64, d as u64, s as u64)
                        .map_err(invalid)?
                        .value
                }
                None => BigUint::from(file.count),
            };
            let mode = match mode {
                Mode::Exhaustive => CheckMode::Exhaustive {
                    pair_budget: pair_budget(),
                },
                Mode::Sampled => CheckMode::Sampled { samples, seed },
            };
            let mut report = verify::reconcile(
                &code,
                &input.display().to_string(),
                d,
                &predicted,
                Some(code.distinct_len() as u64),
                mode,
            );
            if file.count != file.members.len() as u64 {
                report.pass = false;
                report.error = Some(format!(
                    "header count {} but {} members in body",
                    file.count,
                    file.members.len()
                ));
            }
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string(&report).expect("serializable")),
                Format::Csv => writeln!(
                    out,
                    "observed,predicted,min_distance,pairs_checked,pass\n{},{},{},{},{}",
                    report.observed_count,
                    report.predicted_count,
                    report.min_distance.map_or("none".into(), |d| d.to_string()),
                    report.pairs_checked,
                    report.pass
                ),
                Format::Human => writeln!(out, "{report}"),
            }
            .map_err(io)?;
            Ok(if report.pass { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn pair_budget() -> u64 {
    std::env::var(PAIR_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(verify::DEFAULT_PAIR_BUDGET)
}

fn print_bound(r: &BoundResult, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Human => writeln!(out, "{}", r.value),
        Format::Csv => {
            let p = &r.params;
            let opt = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
            writeln!(out, "formula,q,N,d,k,n,s,value")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.formula,
                p.q,
                p.ambient,
                p.d,
                p.k,
                opt(p.n),
                opt(p.s),
                r.value
            )
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string(r).expect("serializable")),
    }
}
