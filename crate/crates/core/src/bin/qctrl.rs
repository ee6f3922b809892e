//! Command-line front end: check a spec file, classify four-level systems,
//! run seeded rule-vs-oracle sweeps, and emit the named example models.
//!
//! Exit codes: 0 success, 2 parse error, 3 soundness disagreement between
//! the rule engine and the closure oracle, 4 domain or range error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qctrl::classifier4::{classify4, reference_cases, ClassifyError};
use qctrl::closure::closure;
use qctrl::criteria::{full_verdict, Conclusion};
use qctrl::io::{
    oracle_conclusion, run_check, run_sweep, verdicts_agree, CheckError, Report, SpecFile,
    Tolerances,
};
use qctrl::models::{make_model, theorem4_family, DipoleVariant, ModelParams};
use qctrl::system::{build_h0, build_h1, DerivedParams, SystemSpec};
use qctrl::{DEFAULT_EPS_PARAM, DEFAULT_EPS_RANK};

const EXIT_PARSE: u8 = 2;
const EXIT_DISAGREE: u8 = 3;
const EXIT_DOMAIN: u8 = 4;

#[derive(Parser)]
#[command(
    name = "qctrl",
    version,
    about = "Decide complete controllability of N-level dipole-coupled quantum systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the rule engine (and optionally the closure oracle) on a spec file
    Check(CheckArgs),
    /// Classify a four-level spec, or reproduce the full reference table
    Classify4(Classify4Args),
    /// Check rule engine against the closure oracle on seeded random specs
    Sweep(SweepArgs),
    /// Generate a named example system as a spec file
    Model(ModelArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Path to a JSON spec file
    file: PathBuf,
    /// Also compute the Lie closure and cross-check the rule verdict
    #[arg(long)]
    oracle: bool,
    /// Emit the report as JSON instead of human-readable text
    #[arg(long)]
    json: bool,
    /// Override the scalar-equality tolerance (flag wins over the file)
    #[arg(long)]
    eps_param: Option<f64>,
    /// Override the rank-decision tolerance (flag wins over the file)
    #[arg(long)]
    eps_rank: Option<f64>,
}

#[derive(Args)]
struct Classify4Args {
    /// Path to a JSON spec file with exactly four levels
    file: Option<PathBuf>,
    /// Reproduce the full four-level reference table, verifying each row
    /// against the closure oracle
    #[arg(long, conflicts_with = "file")]
    table: bool,
    /// Emit JSON instead of human-readable text
    #[arg(long)]
    json: bool,
    #[arg(long)]
    eps_param: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Number of random specs to generate
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Smallest number of levels (>= 2)
    #[arg(long, default_value_t = 2)]
    nmin: usize,
    /// Largest number of levels (<= 8)
    #[arg(long, default_value_t = 6)]
    nmax: usize,
    /// RNG seed; the only source of randomness
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Emit the full per-spec record list as JSON
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = DEFAULT_EPS_PARAM)]
    eps_param: f64,
    #[arg(long, default_value_t = DEFAULT_EPS_RANK)]
    eps_rank: f64,
}

#[derive(Args)]
struct EmitArgs {
    /// Write the spec file here instead of printing it to stdout
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Name recorded in the generated spec file
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct ModelArgs {
    #[command(subcommand)]
    model: ModelCmd,
}

#[derive(Subcommand)]
enum ModelCmd {
    /// Anharmonic (Morse-like) oscillator with spacings 1 - B n
    Morse {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 0.0)]
        e1: f64,
        #[arg(long, value_delimiter = ',')]
        dipoles: Option<Vec<f64>>,
        #[command(flatten)]
        out: EmitArgs,
    },
    /// Particle in a 1D box: E_n = C n^2
    #[command(name = "box")]
    Box1d {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_delimiter = ',')]
        dipoles: Option<Vec<f64>>,
        #[command(flatten)]
        out: EmitArgs,
    },
    /// Hydrogen-like atom: E_n = -13.9 Z^2 / n^2
    Atom {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, value_delimiter = ',')]
        dipoles: Option<Vec<f64>>,
        #[command(flatten)]
        out: EmitArgs,
    },
    /// Truncated harmonic oscillator: E_n = n + 1/2, d_n = sqrt(n)
    Harmonic {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: EmitArgs,
    },
    /// Two coupled harmonic l-level oscillators (spacing defect delta at l)
    Coupled {
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        coupling: f64,
        /// Use uniform dipoles instead of the square-root ladder
        #[arg(long)]
        uniform: bool,
        #[arg(long, default_value_t = 0.0)]
        e1: f64,
        #[command(flatten)]
        out: EmitArgs,
    },
    /// One gap, then a fully degenerate upper multiplet
    DegenerateUpper {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        gap: f64,
        #[arg(long, value_delimiter = ',')]
        dipoles: Option<Vec<f64>>,
        #[command(flatten)]
        out: EmitArgs,
    },
    /// 2l+1 levels: even spacings all mu2, odd spacings distinct from mu1
    AlternatingOdd {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        mu1: f64,
        #[arg(long)]
        mu2: f64,
        #[arg(long, value_delimiter = ',')]
        odd_spacings: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.0)]
        e1: f64,
        #[arg(long, value_delimiter = ',')]
        dipoles: Option<Vec<f64>>,
        #[command(flatten)]
        out: EmitArgs,
    },
    /// Equally spaced system whose dipoles make all v_n equal (dim-4 algebra)
    UniformV {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        d1: f64,
        #[command(flatten)]
        out: EmitArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check(args) => cmd_check(&args),
        Command::Classify4(args) => cmd_classify4(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Model(args) => cmd_model(&args.model),
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn load_spec_file(path: &Path, args_eps: (Option<f64>, Option<f64>)) -> Result<SpecFile, ExitCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let mut file = SpecFile::parse(&text)
        .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    if args_eps.0.is_some() || args_eps.1.is_some() {
        let t = file.tolerances.get_or_insert_with(Tolerances::default);
        if args_eps.0.is_some() {
            t.eps_param = args_eps.0;
        }
        if args_eps.1.is_some() {
            t.eps_rank = args_eps.1;
        }
    }
    Ok(file)
}

fn cmd_check(args: &CheckArgs) -> ExitCode {
    let file = match load_spec_file(&args.file, (args.eps_param, args.eps_rank)) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let report = match run_check(&file, args.oracle) {
        Ok(r) => r,
        Err(CheckError::SpecFile(e)) => return fail(EXIT_PARSE, e),
        Err(e) => return fail(EXIT_DOMAIN, e),
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        print_report(&report);
    }
    if report.agreement == Some(false) {
        eprintln!("error: rule verdict disagrees with the closure oracle (soundness bug)");
        return ExitCode::from(EXIT_DISAGREE);
    }
    ExitCode::SUCCESS
}

fn print_report(r: &Report) {
    if let Some(name) = &r.spec.name {
        println!("system:          {name}");
    }
    println!("levels:          {}", r.num_levels);
    println!("mu:              {:?}", r.mu);
    println!("v:               {:?}", r.v);
    println!("trace(H0):       {}", r.trace_h0);
    println!("equally spaced:  {}", r.equally_spaced);
    println!("verdict:         {}", r.verdict.conclusion);
    for p in &r.verdict.provenance {
        println!("  rule:          {p}");
    }
    for n in &r.verdict.notes {
        println!("  note:          {n}");
    }
    if let Some(o) = &r.oracle {
        println!(
            "oracle:          dim {} ({}), identity: {}, generations: {}",
            o.dimension, o.identification, o.contains_identity, o.generations
        );
        println!("agreement:       {}", r.agreement.unwrap());
    }
    if let Some(c) = &r.classification {
        println!("four-level case: {}", c.case_tag);
    }
    println!("elapsed:         {:.3} ms", r.elapsed_ms);
}

fn cmd_classify4(args: &Classify4Args) -> ExitCode {
    if args.table {
        return classify4_table();
    }
    let Some(path) = &args.file else {
        return fail(EXIT_DOMAIN, "provide a spec file or --table");
    };
    let file = match load_spec_file(path, (args.eps_param, None)) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let spec = match file.to_system_spec() {
        Ok(s) => s,
        Err(e) => return fail(EXIT_PARSE, e),
    };
    let params = DerivedParams::derive(&spec, file.eps_param());
    let (case, verdict) = match classify4(&spec, &params) {
        Ok(cv) => cv,
        Err(e @ ClassifyError::NotFourLevels(_)) => return fail(EXIT_DOMAIN, e),
        Err(e @ ClassifyError::Decomposable(_)) => return fail(EXIT_DOMAIN, e),
    };
    if args.json {
        let doc = serde_json::json!({
            "case": case,
            "verdict": {
                "conclusion": verdict.conclusion,
                "provenance": verdict.provenance.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "notes": verdict.notes,
            },
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("case:             {}", case.case_tag);
        if let Some(sub) = case.v_subcase {
            println!("v subcase:        {sub}");
        }
        if let Some(d) = case.d_condition {
            println!("d1 = +/- d3:      {d}");
        }
        println!("expected algebra: {}", case.expected_algebra);
        println!("verdict:          {}", verdict.conclusion);
        for n in &verdict.notes {
            println!("  note:           {n}");
        }
    }
    ExitCode::SUCCESS
}

fn classify4_table() -> ExitCode {
    let mut mismatches = 0usize;
    println!(
        "{:<42} {:>8} {:>12} {:>9}  verdict",
        "case", "dim", "controllable", "verified"
    );
    for case in reference_cases() {
        let params = DerivedParams::derive(&case.spec, DEFAULT_EPS_PARAM);
        let verdict = full_verdict(&case.spec, &params, None);
        let result = closure(
            &[build_h0(&case.spec), build_h1(&case.spec)],
            DEFAULT_EPS_RANK,
            None,
        )
        .expect("reference generators are nonzero");
        let oc = oracle_conclusion(&result, &params, 4);
        let rule_controllable = matches!(
            verdict.conclusion,
            Conclusion::CompletelyControllable | Conclusion::ControllableUpToPhase
        );
        let ok = result.dimension == case.expected_dimension
            && rule_controllable == case.controllable
            && verdicts_agree(verdict.conclusion, oc)
            && verdict.conclusion != Conclusion::Undetermined;
        if !ok {
            mismatches += 1;
        }
        println!(
            "{:<42} {:>8} {:>12} {:>9}  {}",
            case.label,
            result.dimension,
            if case.controllable { "yes" } else { "no" },
            if ok { "ok" } else { "MISMATCH" },
            verdict.conclusion
        );
    }
    if mismatches > 0 {
        eprintln!("error: {mismatches} reference rows failed oracle verification");
        return ExitCode::from(EXIT_DISAGREE);
    }
    ExitCode::SUCCESS
}

fn cmd_sweep(args: &SweepArgs) -> ExitCode {
    if args.count < 1 {
        return fail(EXIT_DOMAIN, "--count must be at least 1");
    }
    if !(2 <= args.nmin && args.nmin <= args.nmax && args.nmax <= 8) {
        return fail(EXIT_DOMAIN, "level range must satisfy 2 <= nmin <= nmax <= 8");
    }
    if !(args.eps_param > 0.0 && args.eps_param.is_finite()) {
        return fail(EXIT_DOMAIN, "--eps-param must be positive and finite");
    }
    if !(args.eps_rank > 0.0 && args.eps_rank.is_finite()) {
        return fail(EXIT_DOMAIN, "--eps-rank must be positive and finite");
    }
    let summary = run_sweep(
        args.count,
        args.nmin,
        args.nmax,
        args.seed,
        args.eps_param,
        args.eps_rank,
    );
    if args.json {
        println!("{}", serde_json::to_string_pretty(&summary).unwrap());
    } else {
        println!("specs:                    {}", summary.count);
        println!("seed:                     {}", summary.seed);
        println!("levels:                   {}..={}", summary.nmin, summary.nmax);
        println!("completely controllable:  {}", summary.completely_controllable);
        println!("controllable up to phase: {}", summary.controllable_up_to_phase);
        println!("not controllable:         {}", summary.not_controllable);
        println!("undetermined:             {}", summary.undetermined);
        println!(
            "undetermined rate:        {:.4}",
            summary.undetermined as f64 / summary.count as f64
        );
        println!("disagreements:            {}", summary.disagreements);
    }
    if summary.disagreements > 0 {
        eprintln!(
            "error: {} rule/oracle disagreements (soundness bug)",
            summary.disagreements
        );
        return ExitCode::from(EXIT_DISAGREE);
    }
    ExitCode::SUCCESS
}

fn cmd_model(cmd: &ModelCmd) -> ExitCode {
    let (spec, out): (Result<SystemSpec, _>, &EmitArgs) = match cmd {
        ModelCmd::Morse {
            n,
            b,
            e1,
            dipoles,
            out,
        } => (
            make_model(&ModelParams::Morse {
                n: *n,
                b: *b,
                e1: *e1,
                dipoles: dipoles.clone(),
            }),
            out,
        ),
        ModelCmd::Box1d { n, c, dipoles, out } => (
            make_model(&ModelParams::Box1D {
                n: *n,
                c: *c,
                dipoles: dipoles.clone(),
            }),
            out,
        ),
        ModelCmd::Atom { n, z, dipoles, out } => (
            make_model(&ModelParams::Atom {
                n: *n,
                z: *z,
                dipoles: dipoles.clone(),
            }),
            out,
        ),
        ModelCmd::Harmonic { n, out } => (make_model(&ModelParams::TruncatedHarmonic { n: *n }), out),
        ModelCmd::Coupled {
            ell,
            mu,
            delta,
            coupling,
            uniform,
            e1,
            out,
        } => (
            make_model(&ModelParams::CoupledOscillators {
                ell: *ell,
                mu: *mu,
                delta: *delta,
                coupling: *coupling,
                variant: if *uniform {
                    DipoleVariant::Uniform
                } else {
                    DipoleVariant::SqrtLadder
                },
                e1: *e1,
            }),
            out,
        ),
        ModelCmd::DegenerateUpper {
            n,
            gap,
            dipoles,
            out,
        } => (
            make_model(&ModelParams::DegenerateUpper {
                n: *n,
                gap: *gap,
                dipoles: dipoles.clone(),
            }),
            out,
        ),
        ModelCmd::AlternatingOdd {
            ell,
            mu1,
            mu2,
            odd_spacings,
            e1,
            dipoles,
            out,
        } => (
            make_model(&ModelParams::AlternatingOdd {
                ell: *ell,
                mu1: *mu1,
                mu2: *mu2,
                odd_spacings: odd_spacings.clone(),
                e1: *e1,
                dipoles: dipoles.clone(),
            }),
            out,
        ),
        ModelCmd::UniformV { n, d1, out } => {
            let spec = match theorem4_family(*n, *d1) {
                Ok(Some(s)) => Ok(s),
                Ok(None) => {
                    return fail(
                        EXIT_DOMAIN,
                        format!(
                            "no equally spaced system with all v_n equal and nonzero dipoles exists for n = {n}"
                        ),
                    )
                }
                Err(e) => Err(e),
            };
            (spec, out)
        }
    };
    let spec = match spec {
        Ok(s) => s,
        Err(e) => return fail(EXIT_DOMAIN, e),
    };
    let file = SpecFile::from_system_spec(out.name.clone(), &spec);
    let json = serde_json::to_string_pretty(&file).unwrap();
    match &out.emit {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                return fail(EXIT_DOMAIN, format!("{}: {e}", path.display()));
            }
            println!("wrote {}", path.display());
        }
        None => println!("{json}"),
    }
    ExitCode::SUCCESS
}
