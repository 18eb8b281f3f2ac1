use clap::{Args, Parser, Subcommand, ValueEnum};
use racklab::analysis::{self, CheckReport};
use racklab::codec::{self, CodecError, CodecParams};
use racklab::enumerate::{self, EnumError};
use racklab::graph::ColoredDigraph;
use racklab::rack::{axiom_report, Rack};
use racklab::text::{format_rack, parse_rack, parse_table};
use serde::Serialize;
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_DOMAIN: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "racklab",
    version,
    about = "Finite racks: axioms, codec, enumeration and checks"
)]
struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "RACKLAB_THREADS", default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output file (encode, decode) or directory (enumerate witnesses).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    /// Degree threshold; defaults to ⌈(log₂ n)³⌉ clamped to 1..n−1.
    #[arg(long)]
    delta: Option<usize>,
    /// Cap on |T|; defaults to ⌊(log₂ n)²⌋.
    #[arg(long = "cap-l")]
    cap_l: Option<usize>,
}

impl ParamArgs {
    fn resolve(&self, n: usize) -> CodecParams {
        let d = CodecParams::default_for(n);
        CodecParams {
            delta: self.delta.unwrap_or(d.delta),
            cap_l: self.cap_l.unwrap_or(d.cap_l),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the rack axioms of a `.rack` table.
    Check { path: PathBuf },
    /// Enumerate racks of order n up to isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Cross-check against the naive scan (n ≤ 3).
        #[arg(long)]
        oracle: bool,
    },
    /// Encode a `.rack` file.
    Encode {
        path: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Decode an encoded rack.
    Decode { path: PathBuf },
    /// Component histogram, ζ and bit counts of an encoding.
    Stats {
        path: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Write G_T in DOT format to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Greedy merge audit, invariance and out-regularity.
    Audit {
        path: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Numerical and Monte Carlo checks.
    Analyze {
        #[arg(value_enum)]
        check: Check,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        delta: Option<usize>,
        /// Rack for random-subset and find-w; defaults to the dihedral quandle of order n.
        #[arg(long)]
        rack: Option<PathBuf>,
        /// Badness threshold for find-w; defaults to (log₂ n)^{3/2}/2.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = 100)]
        attempts: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    ZetaSweep,
    ClaimCalc,
    Chernoff,
    RandomSubset,
    FindW,
    MergeCalculus,
    Orbits,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn io_fail(path: &Path, e: std::io::Error) -> Failure {
    fail(EXIT_INPUT, format!("{}: {e}", path.display()))
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("racklab: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("racklab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check { path } => cmd_check(cli, path),
        Command::Enumerate { n, oracle } => cmd_enumerate(cli, *n, *oracle),
        Command::Encode { path, params } => cmd_encode(cli, path, params),
        Command::Decode { path } => cmd_decode(cli, path),
        Command::Stats { path, params, dot } => cmd_stats(cli, path, params, dot.as_deref()),
        Command::Audit { path, params } => cmd_audit(cli, path, params),
        Command::Analyze {
            check,
            n,
            p,
            eps,
            trials,
            seed,
            delta,
            rack,
            threshold,
            attempts,
        } => {
            let a = AnalyzeArgs {
                n: *n,
                p: *p,
                eps: *eps,
                trials: *trials,
                seed: *seed,
                delta: *delta,
                rack: rack.clone(),
                threshold: *threshold,
                attempts: *attempts,
            };
            cmd_analyze(cli, *check, &a)
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) {
    let mut out = std::io::stdout().lock();
    let s = match cli.format {
        Format::Json => serde_json::to_string_pretty(value).expect("serialisable") + "\n",
        Format::Text => text(),
    };
    let _ = out.write_all(s.as_bytes());
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_fail(path, e))
}

fn load_rack(path: &Path) -> Result<Rack, Failure> {
    let text = read_text(path)?;
    parse_rack(&text).map_err(|e| match e {
        racklab::ParseError::Rack(inner) => {
            fail(EXIT_DOMAIN, format!("{}: {inner}", path.display()))
        }
        other => fail(EXIT_INPUT, format!("{}: {other}", path.display())),
    })
}

fn codec_fail(e: CodecError) -> Failure {
    match e {
        CodecError::InvalidParams { .. } | CodecError::CorruptStream(_) => {
            fail(EXIT_INPUT, e.to_string())
        }
        CodecError::InconsistentDecode(_) | CodecError::Internal(_) => {
            fail(EXIT_DOMAIN, e.to_string())
        }
    }
}

fn cmd_check(cli: &Cli, path: &Path) -> Outcome {
    let text = read_text(path)?;
    let rows =
        parse_table(&text).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    let n = rows.len();
    let report = axiom_report(n, &rows.concat());
    emit(cli, &report, || {
        let mut s = format!(
            "rack: {}\nquandle: {}\n",
            if report.is_rack { "yes" } else { "no" },
            if report.is_quandle { "yes" } else { "no" }
        );
        for v in &report.violations {
            s.push_str(&format!("violation: {v:?}\n"));
        }
        s
    });
    Ok(if report.is_rack { 0 } else { EXIT_DOMAIN })
}

#[derive(Serialize)]
struct EnumOutput {
    n: usize,
    labeled: u64,
    classes: usize,
    quandle_classes: usize,
    reference_unverified: enumerate::Reference,
    oracle_agrees: Option<bool>,
}

fn cmd_enumerate(cli: &Cli, n: usize, oracle: bool) -> Outcome {
    let enum_fail = |e: EnumError| match e {
        EnumError::OrderTooLarge { .. } => fail(EXIT_RESOURCE, e.to_string()),
        EnumError::ZeroOrder | EnumError::Io(_) => fail(EXIT_INPUT, e.to_string()),
    };
    let report = enumerate::enumerate_classes(n).map_err(enum_fail)?;
    let agrees = if oracle {
        let o = enumerate::oracle_enumerate(n).map_err(enum_fail)?;
        Some(o.labeled_count == report.labeled_count && o.witnesses == report.witnesses)
    } else {
        None
    };
    if let Some(dir) = &cli.out {
        report.write_witness_dir(dir).map_err(enum_fail)?;
    }
    let summary = report.summary();
    let out = EnumOutput {
        n,
        labeled: report.labeled_count,
        classes: report.class_count,
        quandle_classes: report.quandle_class_count,
        reference_unverified: summary.reference_unverified.clone(),
        oracle_agrees: agrees,
    };
    emit(cli, &out, || {
        let mut s = format!(
            "n = {n}\nlabeled racks: {}\nisomorphism classes: {}\nquandle classes: {}\nelapsed: {} ms\n",
            out.labeled, out.classes, out.quandle_classes, summary.duration_ms
        );
        if let Some(c) = out.reference_unverified.classes {
            s.push_str(&format!("reference (unverified): {c} classes\n"));
        }
        if let Some(a) = agrees {
            s.push_str(&format!("oracle agrees: {a}\n"));
        }
        s
    });
    Ok(if agrees == Some(false) {
        EXIT_DOMAIN
    } else {
        0
    })
}

fn cmd_encode(cli: &Cli, path: &Path, params: &ParamArgs) -> Outcome {
    let rack = load_rack(path)?;
    let params = params.resolve(rack.order());
    let bytes = codec::encode(&rack, &params).map_err(codec_fail)?;
    let target = cli
        .out
        .clone()
        .unwrap_or_else(|| path.with_extension("rke"));
    std::fs::write(&target, &bytes).map_err(|e| io_fail(&target, e))?;
    let info = json!({ "n": rack.order(), "params": params, "bytes": bytes.len(), "out": target });
    emit(cli, &info, || {
        format!("wrote {} bytes to {}\n", bytes.len(), target.display())
    });
    Ok(0)
}

fn cmd_decode(cli: &Cli, path: &Path) -> Outcome {
    let bytes = std::fs::read(path).map_err(|e| io_fail(path, e))?;
    let rack = codec::decode(&bytes).map_err(codec_fail)?;
    let text = format_rack(&rack);
    match &cli.out {
        Some(target) => std::fs::write(target, &text).map_err(|e| io_fail(target, e))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_stats(cli: &Cli, path: &Path, params: &ParamArgs, dot: Option<&Path>) -> Outcome {
    let rack = load_rack(path)?;
    let params = params.resolve(rack.order());
    let stats = codec::encoding_stats(&rack, &params).map_err(codec_fail)?;
    if let Some(dot) = dot {
        let g = ColoredDigraph::from_rack(&rack, &stats.t);
        std::fs::write(dot, g.to_dot()).map_err(|e| io_fail(dot, e))?;
    }
    emit(cli, &stats, || {
        let hist: Vec<String> = stats
            .eta
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(q, e)| format!("η_{q}={e}"))
            .collect();
        format!(
            "n = {}, delta = {}, cap_l = {}\nT = {:?}\ncomponents: {} ({})\nzeta = {:.6}\nn^2/4 = {}\n\
             residual bits = {} (per-index widths: {})\ninfo bits = {}\ntotal bytes = {}\n",
            stats.n,
            stats.params.delta,
            stats.params.cap_l,
            stats.t,
            stats.cp,
            hist.join(", "),
            stats.zeta,
            stats.bound,
            stats.residual_bits,
            stats.per_index_bits,
            stats.header_bits,
            stats.total_bytes
        )
    });
    Ok(0)
}

#[derive(Serialize)]
struct AuditOutput {
    audit: codec::AuditReport,
    invariance: Result<usize, String>,
    irregular_components: Vec<Vec<usize>>,
    pass: bool,
}

fn cmd_audit(cli: &Cli, path: &Path, params: &ParamArgs) -> Outcome {
    let rack = load_rack(path)?;
    let params = params.resolve(rack.order());
    let audit = codec::merge_bound_audit(&rack, &params).map_err(codec_fail)?;
    let t = &audit.greedy_order[..audit.t_len];
    let comps = ColoredDigraph::from_rack(&rack, t).components();
    let invariance = codec::check_invariance(&rack, &comps).map_err(|e| e.to_string());
    let (s_low, s_high) = codec::degree_split(&rack, params.delta);
    let all: Vec<usize> = (0..rack.order()).collect();
    let mut irregular = Vec::new();
    for s in [&all, &s_low, &s_high] {
        irregular.extend(analysis::irregular_components(&rack, s));
    }
    let pass = audit.pass() && invariance.is_ok() && irregular.is_empty();
    let out = AuditOutput {
        audit,
        invariance,
        irregular_components: irregular,
        pass,
    };
    emit(cli, &out, || {
        format!(
            "greedy order: {:?}\nx: {:?}\n|T| = {}\nmerge drops: {:?}\nfailure: {:?}\ninvariance: {:?}\n\
             irregular components: {:?}\npass: {}\n",
            out.audit.greedy_order,
            out.audit.x,
            out.audit.t_len,
            out.audit.drops.iter().map(|d| (d.j, d.drop, d.merged)).collect::<Vec<_>>(),
            out.audit.failure,
            out.invariance,
            out.irregular_components,
            out.pass
        )
    });
    Ok(if pass { 0 } else { EXIT_DOMAIN })
}

struct AnalyzeArgs {
    n: Option<usize>,
    p: Option<f64>,
    eps: Option<f64>,
    trials: Option<u64>,
    seed: u64,
    delta: Option<usize>,
    rack: Option<PathBuf>,
    threshold: Option<f64>,
    attempts: u64,
}

fn analysis_rack(a: &AnalyzeArgs, default_n: usize) -> Result<Rack, Failure> {
    match &a.rack {
        Some(path) => load_rack(path),
        None => {
            let n = a.n.unwrap_or(default_n);
            if n == 0 {
                return Err(fail(EXIT_INPUT, "order must be positive"));
            }
            Ok(racklab::families::dihedral_quandle(n))
        }
    }
}

fn cmd_analyze(cli: &Cli, check: Check, a: &AnalyzeArgs) -> Outcome {
    let bad = |e: analysis::AnalysisError| fail(EXIT_INPUT, e.to_string());
    let report: CheckReport = match check {
        Check::ZetaSweep => {
            analysis::zeta_bound_sweep(a.n.unwrap_or(8), a.trials.unwrap_or(10_000), a.seed)
                .report(a.seed, a.trials.unwrap_or(10_000))
        }
        Check::ClaimCalc => analysis::claim_calc_grid(a.n.unwrap_or(200), 50.0),
        Check::Chernoff => analysis::chernoff_check(
            a.n.unwrap_or(1000) as u64,
            a.p.unwrap_or(0.1),
            a.eps.unwrap_or(0.5),
            a.trials.unwrap_or(100_000),
            a.seed,
        )
        .map_err(bad)?
        .report(),
        Check::RandomSubset => {
            let rack = analysis_rack(a, 200)?;
            analysis::random_subset_check(
                &rack,
                a.p.unwrap_or(0.1),
                a.eps.unwrap_or(0.5),
                a.trials.unwrap_or(10_000),
                a.seed,
            )
            .map_err(bad)?
            .report()
        }
        Check::FindW => {
            let rack = analysis_rack(a, 64)?;
            let n = rack.order();
            let delta = a.delta.unwrap_or_else(|| CodecParams::default_for(n).delta);
            let p = a.p.unwrap_or_else(|| analysis::default_p(n));
            let threshold = a
                .threshold
                .unwrap_or_else(|| analysis::default_bad_threshold(n));
            analysis::find_w(&rack, delta, p, threshold, a.attempts, a.seed)
                .map_err(bad)?
                .report(delta, a.seed, a.attempts)
        }
        Check::MergeCalculus => {
            analysis::merge_calculus_check(a.trials.unwrap_or(10_000), a.n.unwrap_or(12), a.seed)
        }
        Check::Orbits => analysis::orbit_check(a.trials.unwrap_or(1000), a.n.unwrap_or(12), a.seed),
    };
    emit(cli, &report, || {
        format!(
            "check: {}\nparams: {}\nseed: {}\nstatistic: {}\nbound: {}\npass: {}\n",
            report.check,
            report.params,
            report.seed.map_or("-".to_string(), |s| s.to_string()),
            report.statistic,
            report.bound,
            report.pass
        )
    });
    Ok(if report.pass { 0 } else { EXIT_DOMAIN })
}
