//! Command-line front end: runs one stage of the certificate pipeline and
//! prints the results. Exit status is 0 exactly when every certificate
//! passes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use g2nu::certificate::{all_pass, Certificate};
use g2nu::dirac::{invariant_kernel_certificate, mode_sweep, symbolic_sector_certificates, DiracContext};
use g2nu::eta::{eta_vanishing_certificate, DEFAULT_TRUNCATION};
use g2nu::exactnum::Q;
use g2nu::liealg::{Case, LatticeSpec, NilpotentLieAlgebra, ParamPoint};
use g2nu::mq::{mq_certificate, MqContext};
use g2nu::nu::{compute_nu_with, emit_report, mq_spinors, parameter_grid, CaseBundle, Format, NuReport, DEFAULT_CUTOFF};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "g2nu", version, about = "Exact certificates for the nu-invariant of G2 nilmanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clifford relations, real structure and basis change
    VerifyClifford(Output),
    /// G2 spinor dictionary, induced metric, closedness, intrinsic endomorphism
    G2(CaseArgs),
    /// Harmonic spinors: kernel certificates for every sector
    Harmonic(ModeArgs),
    /// Mathai-Quillen currents of the invariant unit spinors
    Mq(CaseArgs),
    /// eta-invariant symmetry certificates
    Eta(ModeArgs),
    /// The full nu mod 48 pipeline
    Nu(NuArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    H1,
    H2,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Case {
        match c {
            CaseArg::H1 => Case::H1,
            CaseArg::H2 => Case::H2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    #[value(alias = "json")]
    JsonLike,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the structured report to this path
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args, Clone)]
struct CaseArgs {
    #[arg(long, value_enum)]
    case: CaseArg,
    /// a (h1; for h2 it must equal b + c if given)
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Clone)]
struct LatticeArgs {
    /// h1 lattice data, r1 | r2
    #[arg(long, default_value_t = 1)]
    r1: u32,
    #[arg(long, default_value_t = 1)]
    r2: u32,
    /// h2 lattice periods
    #[arg(long, default_value_t = 1)]
    s4: u32,
    #[arg(long, default_value_t = 1)]
    s5: u32,
    #[arg(long, default_value_t = 1)]
    s6: u32,
}

#[derive(Args, Clone)]
struct ModeArgs {
    #[command(flatten)]
    base: CaseArgs,
    #[command(flatten)]
    lattice: LatticeArgs,
    /// Largest |alpha_k| in the mode enumeration
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    cutoff: u32,
}

#[derive(Args, Clone)]
struct NuArgs {
    #[command(flatten)]
    modes: ModeArgs,
    /// Run every point of the built-in parameter grid instead
    #[arg(long)]
    grid: bool,
}

fn parse_q(s: &str) -> Result<Q, String> {
    s.trim().parse::<Q>().map_err(|e| format!("not a rational number: {s} ({e})"))
}

fn params(args: &CaseArgs) -> Result<ParamPoint, String> {
    let case: Case = args.case.into();
    let get = |x: &Option<String>| x.as_deref().map(parse_q).transpose();
    let (a, b, c) = (get(&args.a)?, get(&args.b)?, get(&args.c)?);
    let p = match case {
        Case::H1 => match a {
            Some(a) => ParamPoint::h1(a).map_err(|e| e.to_string())?,
            None => ParamPoint::default_for(case),
        },
        Case::H2 => {
            let d = ParamPoint::default_for(case);
            let b = b.unwrap_or_else(|| d.get(g2nu::Var::B).cloned().expect("default b"));
            let c = c.unwrap_or_else(|| d.get(g2nu::Var::C).cloned().expect("default c"));
            let p = ParamPoint::h2(b, c).map_err(|e| e.to_string())?;
            if let Some(a) = a {
                if Some(&a) != p.get(g2nu::Var::A) {
                    return Err(format!("h2 needs a = b + c, got a = {a}"));
                }
            }
            p
        }
    };
    Ok(p)
}

fn lattice(case: Case, l: &LatticeArgs) -> Result<LatticeSpec, String> {
    match case {
        Case::H1 => LatticeSpec::h1(l.r1, l.r2),
        Case::H2 => LatticeSpec::h2(l.s4, l.s5, l.s6),
    }
    .map_err(|e| e.to_string())
}

fn params_json(p: Option<&ParamPoint>) -> Value {
    match p {
        Some(p) => Value::Object(p.strings().into_iter().map(|(k, v)| (k, Value::String(v))).collect()),
        None => json!({}),
    }
}

fn render_text(title: &str, certs: &[Certificate]) -> String {
    let mut s = format!("{title}\n");
    for c in certs {
        let mark = if c.passed() { "PASS" } else { "FAIL" };
        s += &format!("  [{mark}] {:<44} {}\n", c.id, c.statement);
    }
    s += &format!("{} of {} certificates pass\n", certs.iter().filter(|c| c.passed()).count(), certs.len());
    s
}

fn finish(out: &Output, title: &str, report: Value, certs: &[Certificate]) -> Result<bool, String> {
    let structured = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n";
    match out.format {
        FormatArg::Text => print!("{}", render_text(title, certs)),
        FormatArg::JsonLike => print!("{structured}"),
    }
    if let Some(path) = &out.out {
        std::fs::write(path, &structured).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(all_pass(certs))
}

fn stage_report(case: Option<Case>, p: Option<&ParamPoint>, certs: &[Certificate]) -> Value {
    json!({
        "case": case.map(|c| c.name()),
        "params": params_json(p),
        "certificates": certs,
    })
}

fn run_nu(args: &NuArgs) -> Result<bool, String> {
    let base = &args.modes.base;
    let case: Case = base.case.into();
    let lat = lattice(case, &args.modes.lattice)?;
    let points = if args.grid { parameter_grid(case) } else { vec![params(base)?] };
    let bundle = CaseBundle::new(case).map_err(|e| e.to_string())?;
    let mut reports: Vec<NuReport> = Vec::new();
    for p in &points {
        reports.push(compute_nu_with(&bundle, p, &lat, args.modes.cutoff, None).map_err(|e| e.to_string())?);
    }
    let format = match base.output.format {
        FormatArg::Text => Format::Text,
        FormatArg::JsonLike => Format::Json,
    };
    for r in &reports {
        print!("{}", emit_report(r, format));
    }
    if let Some(path) = &base.output.out {
        let body = if reports.len() == 1 {
            emit_report(&reports[0], Format::Json)
        } else {
            serde_json::to_string_pretty(&reports).map_err(|e| e.to_string())? + "\n"
        };
        std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(reports.iter().all(|r| r.passed() && r.orphaned_claims().is_empty()))
}

fn run(cli: &Cli) -> Result<bool, String> {
    let err = |e: g2nu::ExactError| e.to_string();
    match &cli.command {
        Command::VerifyClifford(out) => {
            let certs = g2nu::clifford::verify_clifford_relations();
            finish(out, "Clifford algebra", stage_report(None, None, &certs), &certs)
        }
        Command::G2(args) => {
            let case: Case = args.case.into();
            let p = params(args)?;
            let ctx = DiracContext::for_case(case).map_err(err)?;
            let mut certs = g2nu::g2::certificates(&ctx.alg, &ctx.frame, &ctx.sc);
            let alg = p.specialize(&NilpotentLieAlgebra::for_case(case)).map_err(err)?;
            let closed = g2nu::g2::is_closed(&alg, &g2nu::g2::ThreeForm::standard());
            certs.push(Certificate::new(
                "g2.closedness.point",
                "d(phi) = 0 at these parameters",
                "closedness condition",
                closed,
                json!({"params": params_json(Some(&p))}),
            ));
            finish(&args.output, &format!("G2 structure on {}", case.name()), stage_report(Some(case), Some(&p), &certs), &certs)
        }
        Command::Harmonic(args) => {
            let case: Case = args.base.case.into();
            let p = params(&args.base)?;
            let lat = lattice(case, &args.lattice)?;
            let ctx = DiracContext::for_case(case).map_err(err)?;
            let mut certs = symbolic_sector_certificates(&ctx).map_err(err)?;
            let alg = p.specialize(&NilpotentLieAlgebra::for_case(case)).map_err(err)?;
            let (h, mut inv) = invariant_kernel_certificate(&DiracContext::new(alg).map_err(err)?).map_err(err)?;
            inv.id = "dirac.invariant_kernel.point".into();
            certs.push(inv);
            let sweep = mode_sweep(&p, &lat, args.cutoff, DEFAULT_TRUNCATION).map_err(err)?;
            certs.push(Certificate::new(
                "dirac.modes.sweep",
                format!("all {} enumerated sectors up to cutoff {} have even characteristic polynomials, certified shapes and symmetric spectra", sweep.character_modes + sweep.infinite_modes, args.cutoff),
                "harmonic spinors",
                sweep.parity_failures.is_empty() && sweep.uncovered.is_empty() && sweep.max_defect < 1e-8,
                json!({
                    "character_modes": sweep.character_modes,
                    "infinite_modes": sweep.infinite_modes,
                    "max_defect": sweep.max_defect,
                    "min_character_gap": sweep.min_character_gap,
                }),
            ));
            let title = format!("harmonic spinors on {}: h(D) = {h}", case.name());
            finish(&args.base.output, &title, stage_report(Some(case), Some(&p), &certs), &certs)
        }
        Command::Mq(args) => {
            let case: Case = args.case.into();
            let ctx = MqContext::for_case(case).map_err(err)?;
            let certs = mq_spinors(case).iter().map(|&k| mq_certificate(&ctx, k)).collect::<Result<Vec<_>, _>>().map_err(err)?;
            finish(&args.output, &format!("Mathai-Quillen currents on {}", case.name()), stage_report(Some(case), None, &certs), &certs)
        }
        Command::Eta(args) => {
            let case: Case = args.base.case.into();
            let p = params(&args.base)?;
            let lat = lattice(case, &args.lattice)?;
            let r = eta_vanishing_certificate(&p, &lat, args.cutoff).map_err(err)?;
            let title = format!("eta invariants on {}: eta(D) = {}, eta(B) = {}", case.name(), r.eta_d, r.eta_b);
            finish(&args.base.output, &title, stage_report(Some(case), Some(&p), &r.certificates), &r.certificates)
        }
        Command::Nu(args) => run_nu(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
