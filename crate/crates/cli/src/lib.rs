//! The `butson` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use butson_core::arrays::{first_imperfect_shift, to_array};
use butson_core::constructions::{
    construct_group_bh_auto, construct_line_bh, construct_partition_bh, default_partition_etas,
    solve_coefficient_scheme, ConstructionError,
};
use butson_core::format::{read_array, read_matrix, write_array, write_array_json, write_matrix, write_matrix_json};
use butson_core::vanishing::{unit_sum, zero_sum, SumError};
use butson_core::verify::{materialize, verify_bh, VerifyOptions};
use butson_core::{ChainRing, GroupRingElt, GroupSpec, RootExp};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "butson", version, about = "Construct and verify group-invariant Butson Hadamard matrices")]
pub struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Repeat for more log output on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a BH matrix.
    #[command(subcommand)]
    Construct(Construct),
    /// Check a matrix file: exit 0 iff it is BH and G-invariant.
    Verify {
        file: PathBuf,
        /// Count every failing row pair.
        #[arg(long)]
        full: bool,
    },
    /// Convert a matrix over an abelian group to a perfect array.
    ExportArray { file: PathBuf },
    /// Check that every nonzero shift of an array has zero autocorrelation.
    VerifyArray { file: PathBuf },
    /// Find `length` roots of order `order` summing to zero, or to zeta^target.
    SolveSum {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        target: Option<usize>,
    },
    /// Print the invariants of a chain ring.
    RingInfo(RingArgs),
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// Block construction over a group with a normal cyclic subgroup.
    Group {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        h: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// `cyclic:n`, `abelian:n1,n2`, `semidirect:m,k,t` or `table:<path>`; default cyclic.
        #[arg(long)]
        group: Option<String>,
        #[command(flatten)]
        skip: SkipVerify,
    },
    /// Partition construction over R x R.
    LocalPartition {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        h: usize,
        /// Shuffle cosets before dealing the partition.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        skip: SkipVerify,
    },
    /// Line construction over R x R.
    LocalLines {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        h: usize,
        #[command(flatten)]
        skip: SkipVerify,
    },
}

#[derive(Debug, Args)]
pub struct SkipVerify {
    /// Do not re-verify the matrix before writing. For benchmarking only.
    #[arg(long)]
    pub unsafe_skip_verify: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// GR(p^n, d)
    Galois,
    /// F_{p^d}[u]/(u^n)
    Truncated,
}

#[derive(Debug, Args)]
pub struct RingArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Nilpotency index of the maximal ideal.
    #[arg(long)]
    pub n: usize,
}

impl RingArgs {
    fn build(&self) -> Result<ChainRing, Fail> {
        let ring = match self.family {
            Family::Galois => ChainRing::galois(self.p, self.n, self.d),
            Family::Truncated => ChainRing::truncated(self.p, self.d, self.n),
        };
        ring.map_err(|e| Fail::Invalid(e.to_string()))
    }
}

/// Why a command did not succeed.
#[derive(Debug)]
enum Fail {
    /// Bad input or parameters: exit 2.
    Invalid(String),
    /// A check ran and failed: exit 1.
    Rejected(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Rejected(_) => 1,
            Fail::Invalid(_) => 2,
        }
    }
}

fn construction_fail(e: ConstructionError) -> Fail {
    match e {
        ConstructionError::VerificationFailed => Fail::Rejected(e.to_string()),
        ConstructionError::WrongSubgroupOrder { .. } => Fail::Invalid(format!("WrongSubgroupOrder: {e}")),
        ConstructionError::BadH { .. } => Fail::Invalid(format!("BadH: {e}")),
        e => Fail::Invalid(e.to_string()),
    }
}

fn sum_fail(e: SumError) -> Fail {
    let kind = match e {
        SumError::NoDecomposition { .. } => "NoDecomposition",
        SumError::NoSolution { .. } => "NoSolution",
        SumError::TargetOrder { .. } => "TargetOrder",
        SumError::EmptySum => "EmptySum",
    };
    Fail::Invalid(format!("{kind}: {e}"))
}

struct Ctx {
    format: OutputFormat,
    out: Option<PathBuf>,
}

impl Ctx {
    fn emit(&self, text: &str) -> Result<(), Fail> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| Fail::Invalid(format!("{}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(|e| Fail::Invalid(e.to_string()))
            }
        }
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<String, Fail> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| Fail::Invalid(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    fn emit_matrix(&self, d: &GroupRingElt, skip_verify: bool) -> Result<(), Fail> {
        let m = materialize(d).map_err(|e| Fail::Invalid(e.to_string()))?;
        if skip_verify {
            info!("skipping matrix verification");
        } else {
            let report = verify_bh(&m, VerifyOptions::default());
            debug!("matrix check took {} ms", report.millis);
            if !(report.is_bh && report.is_invariant) {
                return Err(Fail::Rejected(format!("constructed matrix failed verification: {:?}", report.first_failure)));
            }
        }
        let text = match self.format {
            OutputFormat::Text => write_matrix(&m),
            OutputFormat::Json => write_matrix_json(&m),
        }
        .map_err(|e| Fail::Invalid(e.to_string()))?;
        self.emit(&text)
    }
}

fn read_file(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Invalid(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<butson_core::BhMatrix, Fail> {
    let text = read_file(path)?;
    read_matrix(&text, path.parent()).map_err(|e| Fail::Invalid(format!("{}: {e}", path.display())))
}

fn construct(ctx: &Ctx, c: Construct) -> Result<(), Fail> {
    match c {
        Construct::Group { order, h, m, group, skip } => {
            let spec = match group {
                Some(s) => GroupSpec::parse(&s).map_err(|e| Fail::Invalid(e.to_string()))?,
                None => GroupSpec::Cyclic(order),
            };
            let g = spec.build(None).map_err(|e| Fail::Invalid(e.to_string()))?;
            if g.order() != order {
                return Err(Fail::Invalid(format!("group {} has order {}, not {order}", spec.describe(), g.order())));
            }
            info!("block construction on {} with h={h}, m={m}", spec.describe());
            let d = construct_group_bh_auto(Arc::new(g), h, m).map_err(construction_fail)?;
            ctx.emit_matrix(&d, skip.unsafe_skip_verify)
        }
        Construct::LocalPartition { ring, t, h, seed, skip } => {
            let r = ring.build()?;
            info!("partition construction over {} with t={t}, h={h}", r.family());
            let etas = default_partition_etas(&r, t, h).map_err(construction_fail)?;
            let d = construct_partition_bh(&r, t, &etas, h, seed).map_err(construction_fail)?;
            ctx.emit_matrix(&d, skip.unsafe_skip_verify)
        }
        Construct::LocalLines { ring, h, skip } => {
            let r = ring.build()?;
            info!("line construction over {} with h={h}", r.family());
            let scheme = solve_coefficient_scheme(&r, h).map_err(construction_fail)?;
            let d = construct_line_bh(&r, &scheme).map_err(construction_fail)?;
            ctx.emit_matrix(&d, skip.unsafe_skip_verify)
        }
    }
}

fn execute(cli: Cli) -> Result<(), Fail> {
    let ctx = Ctx { format: cli.format, out: cli.out };
    match cli.command {
        Command::Construct(c) => construct(&ctx, c),
        Command::Verify { file, full } => {
            let m = load_matrix(&file)?;
            let report = verify_bh(&m, VerifyOptions { full });
            debug!("verification took {} ms", report.millis);
            let text = match ctx.format {
                OutputFormat::Json => ctx.json(&report)?,
                OutputFormat::Text => {
                    let failure = report.first_failure.map_or("none".to_string(), |f| format!("{f:?}"));
                    format!(
                        "is_bh {}\nis_invariant {}\nfailing_pairs {}\nfirst_failure {failure}\n",
                        report.is_bh, report.is_invariant, report.failing_pairs
                    )
                }
            };
            ctx.emit(&text)?;
            if report.is_bh && report.is_invariant {
                Ok(())
            } else {
                Err(Fail::Rejected(format!("{} is not a G-invariant BH matrix", file.display())))
            }
        }
        Command::ExportArray { file } => {
            let m = load_matrix(&file)?;
            let d = m.to_group_ring().map_err(|e| Fail::Invalid(e.to_string()))?;
            let a = to_array(&d).map_err(|e| Fail::Invalid(e.to_string()))?;
            let text = match ctx.format {
                OutputFormat::Text => write_array(&a),
                OutputFormat::Json => write_array_json(&a).map_err(|e| Fail::Invalid(e.to_string()))?,
            };
            ctx.emit(&text)
        }
        Command::VerifyArray { file } => {
            let a = read_array(&read_file(&file)?).map_err(|e| Fail::Invalid(format!("{}: {e}", file.display())))?;
            let bad = first_imperfect_shift(&a);
            #[derive(Serialize)]
            struct ArrayReport {
                is_perfect: bool,
                first_bad_shift: Option<Vec<usize>>,
            }
            let report = ArrayReport { is_perfect: bad.is_none(), first_bad_shift: bad };
            let text = match ctx.format {
                OutputFormat::Json => ctx.json(&report)?,
                OutputFormat::Text => {
                    let shift = report.first_bad_shift.as_ref().map_or("none".to_string(), |s| format!("{s:?}"));
                    format!("is_perfect {}\nfirst_bad_shift {shift}\n", report.is_perfect)
                }
            };
            ctx.emit(&text)?;
            if report.is_perfect {
                Ok(())
            } else {
                Err(Fail::Rejected(format!("{} is not a perfect array", file.display())))
            }
        }
        Command::SolveSum { length, order, target } => {
            if order == 0 {
                return Err(Fail::Invalid("order must be positive".into()));
            }
            let w = match target {
                None => zero_sum(length, order),
                Some(e) => unit_sum(length, order, RootExp::new(order, e as i64)),
            }
            .map_err(sum_fail)?;
            let text = match ctx.format {
                OutputFormat::Json => ctx.json(&w)?,
                OutputFormat::Text => {
                    let exps: Vec<String> = w.exps.iter().map(usize::to_string).collect();
                    format!("{}\n", exps.join(" "))
                }
            };
            ctx.emit(&text)
        }
        Command::RingInfo(args) => {
            let info = args.build()?.info();
            let text = match ctx.format {
                OutputFormat::Json => ctx.json(&info)?,
                OutputFormat::Text => format!("{info}\n"),
            };
            ctx.emit(&text)
        }
    }
}

/// Parse `argv` (including the program name), run one command and return
/// its exit status: 0 success, 1 failed check, 2 invalid input.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let _ = env_logger::Builder::new()
        .filter_level(match cli.verbose {
            0 => log::LevelFilter::Warn,
            1 => log::LevelFilter::Info,
            _ => log::LevelFilter::Debug,
        })
        .try_init();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return 2;
        }
        // only fails if a pool was already installed, e.g. by an earlier run in-process
        if rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().is_err() {
            debug!("global thread pool already set");
        }
    }
    match execute(cli) {
        Ok(()) => 0,
        Err(f) => {
            let (Fail::Invalid(msg) | Fail::Rejected(msg)) = &f;
            eprintln!("error: {msg}");
            f.code()
        }
    }
}

pub fn main_exit() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
