//! Batch front-end for the pnfield engine: build fields, construct S-box
//! files, run derivative-spectrum analyses and verify the library's
//! theorems end to end.
//!
//! Exit codes: 0 = pass / perfect nonlinear, 1 = analyzed but negative,
//! 2 = error. `PNFIELD_THREADS` caps the internal worker count; results
//! are identical for any worker count.

mod report;
mod sbox_file;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pnfield_core::{
    frobenius_sbox, is_doubly_pn_with, is_perfect_nonlinear, power_map_sbox,
    random_additive_epimorphism, subgroup_pn_setting, ActionSpec, DoublyPnVerdict, FieldRing,
    FieldSpec, FiniteGroup, Part1Target, PnVerdict, RingClass, SBox, UnitSubgroup,
    VectorSpaceSpec,
};

use report::{build_report, failure_reason, ActionDesc};
use sbox_file::{parse_sbox, write_sbox};

#[derive(Debug)]
pub enum CliError {
    Core(pnfield_core::Error),
    Io(std::io::Error),
    Format(String),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Format(s) => write!(f, "{s}"),
            CliError::Usage(s) => write!(f, "{s}"),
        }
    }
}

impl From<pnfield_core::Error> for CliError {
    fn from(e: pnfield_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser)]
#[command(
    name = "pnfield",
    version,
    about = "Finite-field S-box analysis: derivative spectra under group actions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print field parameters, the star-ring classification and tables
    FieldInfo(FieldInfoArgs),
    /// Build an S-box file from one of the function families
    Construct {
        #[command(subcommand)]
        family: ConstructCmd,
    },
    /// Compute the derivative spectrum report for an S-box file
    Analyze(AnalyzeArgs),
    /// Exhaustively verify one of the library's theorems at desk scale
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FieldInfoArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: u32,
    /// Modulus encoding; the smallest monic irreducible when omitted
    #[arg(long)]
    modulus: Option<u64>,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// x -> x^(p^r), the iterated Frobenius table
    Frobenius {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long)]
        r: u32,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// x -> x^k with 0 -> 0
    Power {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long)]
        k: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// A seeded full-rank additive map V(p,m,d) -> V(p,n,1), n <= m
    Epimorphism {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ActionKind {
    /// Additive translation (the classical XOR setting for p = 2)
    Xor,
    /// GF(p^m)* acting by multiplication
    Mult,
    /// GF(p^m)* acting componentwise on a vector-space carrier
    Scalar,
    /// A unit subgroup acting by the star product on GF(p^m)*
    Star,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetKind {
    /// Differences in (GF(p^m), +)
    Add,
    /// Quotients in (GF(p^m)*, .)
    Mult,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// S-box file in pnfield-sbox v1 format
    #[arg(long)]
    sbox: PathBuf,
    #[arg(long, value_enum)]
    action: ActionKind,
    #[arg(long, value_enum)]
    target: TargetKind,
    /// Star-action subgroup as exponent residues mod p^m - 1 (default:
    /// the full unit group)
    #[arg(long, value_delimiter = ',')]
    subgroup: Option<Vec<u64>>,
    /// Report path (JSON); written for both positive and negative verdicts
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Part1TargetArg {
    Add,
    Mult,
}

#[derive(Args)]
struct VerifyArgs {
    /// 1 = epimorphism spectra flat under the scalar action,
    /// 2 = Frobenius powers PN under multiplicative and subgroup star
    /// actions, 3 = Frobenius powers doubly PN on Mersenne-order fields
    #[arg(long)]
    theorem: u8,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    e: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    q: Option<u32>,
    /// Restrict to a single Frobenius power (default: all r)
    #[arg(long)]
    r: Option<u32>,
    /// Star-action subgroup as exponent residues (theorem 2; default {1, n-1})
    #[arg(long, value_delimiter = ',')]
    subgroup: Option<Vec<u64>>,
    /// Target group for the full-domain half of theorem 3 (comparison switch)
    #[arg(long, value_enum, default_value = "add")]
    part1_target: Part1TargetArg,
}

fn main() -> ExitCode {
    // Die quietly when a downstream pager closes the pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    if let Ok(threads) = std::env::var("PNFIELD_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            if k > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::FieldInfo(args) => field_info(args),
        Command::Construct { family } => construct(family),
        Command::Analyze(args) => analyze(args),
        Command::Verify(args) => verify(args),
    }
}

fn factorization(mut v: u64) -> String {
    if v <= 1 {
        return v.to_string();
    }
    let mut parts = Vec::new();
    let mut d = 2;
    while d * d <= v {
        while v.is_multiple_of(d) {
            parts.push(d.to_string());
            v /= d;
        }
        d += 1;
    }
    if v > 1 {
        parts.push(v.to_string());
    }
    parts.join("\u{b7}")
}

fn field_info(args: FieldInfoArgs) -> Result<u8, CliError> {
    let field = FieldSpec::build(args.p, args.m, args.modulus)?;
    let fr = FieldRing::new(&field);
    let n = field.mult_order();
    println!(
        "field: p={} m={} modulus={} gamma={}",
        field.p(),
        field.m(),
        field.modulus(),
        field.gamma()
    );
    println!("descriptor: {}", field.descriptor());
    println!("order: {} (multiplicative order {})", field.order(), n);
    let classification = match fr.classify() {
        RingClass::DoubleField => format!("double-field ({n} prime)"),
        RingClass::FieldRing => format!("field-ring only ({n} = {})", factorization(n)),
    };
    println!("classification: {classification}");
    println!("units: {}", fr.units().len());
    if field.order() <= 256 {
        let exp: Vec<String> = field.exp_table().iter().map(|v| v.to_string()).collect();
        println!("exp table: {}", exp.join(" "));
    }
    Ok(0)
}

fn construct(family: ConstructCmd) -> Result<u8, CliError> {
    let (field, table, out) = match family {
        ConstructCmd::Frobenius {
            p,
            m,
            modulus,
            r,
            out,
        } => {
            let field = FieldSpec::build(p, m, modulus)?;
            let sbox = frobenius_sbox(&field, r)?;
            (field, sbox.table().to_vec(), out)
        }
        ConstructCmd::Power {
            p,
            m,
            modulus,
            k,
            out,
        } => {
            let field = FieldSpec::build(p, m, modulus)?;
            let sbox = power_map_sbox(&field, k)?;
            (field, sbox.table().to_vec(), out)
        }
        ConstructCmd::Epimorphism {
            p,
            m,
            d,
            n,
            e,
            seed,
            out,
        } => {
            if e != 1 || n > m {
                return Err(CliError::Usage(
                    "the sbox file format carries field-valued tables: epimorphism \
                     construction needs e = 1 and n <= m (general targets are covered \
                     by verify --theorem 1)"
                        .into(),
                ));
            }
            let src = VectorSpaceSpec::new(p, m, d)?;
            let tgt = VectorSpaceSpec::new(p, n, e)?;
            let map = random_additive_epimorphism(&src, &tgt, seed)?;
            let field = src.field().clone();
            (field, map.to_sbox().table().to_vec(), out)
        }
    };
    fs::write(&out, write_sbox(&field, &table))?;
    println!("wrote {} entries to {}", table.len(), out.display());
    Ok(0)
}

/// Table length must be (p^m)^d; returns d.
fn infer_dimension(order: u64, len: usize) -> Result<u32, CliError> {
    let mut v = order;
    let mut d = 1u32;
    while (v as usize) < len {
        v = v.saturating_mul(order);
        d += 1;
    }
    if v as usize == len {
        Ok(d)
    } else {
        Err(CliError::Format(format!(
            "table length {len} is not a power of the field order {order}"
        )))
    }
}

fn analyze(args: AnalyzeArgs) -> Result<u8, CliError> {
    let parsed = parse_sbox(&fs::read_to_string(&args.sbox)?)?;
    let field = parsed.field;
    let order = field.order();
    let d = infer_dimension(order, parsed.table.len())?;
    if args.subgroup.is_some() && args.action != ActionKind::Star {
        return Err(CliError::Usage(
            "--subgroup only applies to the star action".into(),
        ));
    }
    if args.action != ActionKind::Xor && args.action != ActionKind::Scalar && d != 1 {
        return Err(CliError::Usage(format!(
            "a vector-space table (d = {d}) supports only the xor and scalar actions"
        )));
    }

    let full = SBox::new(parsed.table.clone(), order as u32)?;
    let (action, desc) = match args.action {
        ActionKind::Xor => {
            let action = if d == 1 {
                ActionSpec::add_translation(&field)?
            } else {
                let vs = VectorSpaceSpec::try_from_field(field.clone(), d)?;
                ActionSpec::vector_add_translation(&vs)?
            };
            let desc = ActionDesc {
                name: "xor".into(),
                d: (d > 1).then_some(d),
                subgroup: None,
            };
            (action, desc)
        }
        ActionKind::Mult => (
            ActionSpec::mul_translation(&field)?,
            ActionDesc {
                name: "mult".into(),
                d: None,
                subgroup: None,
            },
        ),
        ActionKind::Scalar => {
            let vs = VectorSpaceSpec::try_from_field(field.clone(), d)?;
            (
                ActionSpec::scalar(&vs)?,
                ActionDesc {
                    name: "scalar".into(),
                    d: Some(d),
                    subgroup: None,
                },
            )
        }
        ActionKind::Star => {
            for (x, &v) in parsed.table.iter().enumerate().skip(1) {
                if v == 0 {
                    return Err(CliError::Format(format!(
                        "the star action requires a nonzero-preserving table; f({x}) = 0"
                    )));
                }
            }
            let n = field.mult_order();
            let subgroup = match &args.subgroup {
                Some(residues) => UnitSubgroup::new(n, residues)?,
                None => UnitSubgroup::full(n)?,
            };
            let fr = FieldRing::new(&field);
            let action = ActionSpec::star(&fr, &subgroup)?;
            let desc = ActionDesc {
                name: "star".into(),
                d: None,
                subgroup: Some(subgroup.members().to_vec()),
            };
            (action, desc)
        }
    };

    let (sbox, h, target_name) = match (args.action, args.target) {
        (ActionKind::Star, TargetKind::Add) => {
            let restricted = SBox::new(parsed.table[1..].to_vec(), order as u32)?;
            (restricted, FiniteGroup::field_additive(&field)?, "add")
        }
        (ActionKind::Star, TargetKind::Mult) => (
            full.restrict_to_nonzero()?,
            FiniteGroup::field_multiplicative(&field)?,
            "mult",
        ),
        (_, TargetKind::Add) => (full, FiniteGroup::field_additive(&field)?, "add"),
        (_, TargetKind::Mult) => (
            full.reindex_for_multiplicative_target()?,
            FiniteGroup::field_multiplicative(&field)?,
            "mult",
        ),
    };

    let verdict = is_perfect_nonlinear(&sbox, &action, &h)?;
    let report = build_report(&field, desc, target_name, &verdict, &action);
    let mut json =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Format(e.to_string()))?;
    json.push('\n');
    fs::write(&args.out, json)?;
    println!(
        "pn={} uniformity={} report={}",
        verdict.pn,
        verdict.spectrum.max_count(),
        args.out.display()
    );
    Ok(if verdict.pn { 0 } else { 1 })
}

fn require<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing required parameter --{name}")))
}

fn print_violation(verdict: &PnVerdict, what: &str) {
    if let Some(failure) = &verdict.failure {
        println!("{what}: FAIL, {}", failure_reason(failure));
        println!(
            "a failed check indicates an implementation bug, not a refutation of the verified statement"
        );
    }
}

fn verify(args: VerifyArgs) -> Result<u8, CliError> {
    match args.theorem {
        1 => verify_epimorphism(args),
        2 => verify_subgroup_setting(args),
        3 => verify_doubly_pn(args),
        t => Err(CliError::Usage(format!(
            "unknown theorem {t}; choose 1, 2 or 3"
        ))),
    }
}

/// Theorem 1: a random additive epimorphism V(p,m,d) -> V(p,n,e) has a
/// constant scalar-action spectrum p^(md-ne).
fn verify_epimorphism(args: VerifyArgs) -> Result<u8, CliError> {
    let p = require(args.p, "p")?;
    let m = require(args.m, "m")?;
    let d = require(args.d, "d")?;
    let n = require(args.n, "n")?;
    let e = require(args.e, "e")?;
    let seed = require(args.seed, "seed")?;
    let domain: u64 = (0..m * d)
        .try_fold(1u64, |acc, _| acc.checked_mul(p))
        .unwrap_or(u64::MAX);
    if domain > 1 << 10 {
        return Err(CliError::Usage(format!(
            "p^(m*d) = {domain} exceeds the desk-scale cap 2^10"
        )));
    }
    let src = VectorSpaceSpec::new(p, m, d)?;
    let tgt = VectorSpaceSpec::new(p, n, e)?;
    let map = random_additive_epimorphism(&src, &tgt, seed)?;
    let sbox = map.to_sbox();
    let action = ActionSpec::scalar(&src)?;
    let h = FiniteGroup::vector_additive(&tgt)?;
    let verdict = is_perfect_nonlinear(&sbox, &action, &h)?;
    let expected = map.kernel_size();
    if verdict.pn {
        println!(
            "theorem 1: pass, all counts = {expected} ({} directions x {} targets)",
            verdict.spectrum.alphas().len(),
            h.order()
        );
        Ok(0)
    } else {
        print_violation(&verdict, "theorem 1");
        Ok(1)
    }
}

/// Theorem 2: Frobenius powers over GF(2^m) are PN under the
/// multiplicative translation action, and their restrictions are PN under
/// the star action of any difference-unit subgroup.
fn verify_subgroup_setting(args: VerifyArgs) -> Result<u8, CliError> {
    let m = require(args.m, "m")?;
    let order = 1u64
        .checked_shl(m)
        .filter(|&v| v <= 1 << 13)
        .ok_or_else(|| CliError::Usage("2^m exceeds the desk-scale cap 2^13".into()))?;
    let field = FieldSpec::build(2, m, None)?;
    let n = order - 1;
    let subgroup = match &args.subgroup {
        Some(residues) => UnitSubgroup::new(n, residues)?,
        None => UnitSubgroup::negation(n)?,
    };
    let rs: Vec<u32> = match args.r {
        Some(r) => vec![r],
        None => (0..m).collect(),
    };
    for &r in &rs {
        let outcome = subgroup_pn_setting(&field, &subgroup, r)?;
        if !outcome.mult_verdict.pn {
            print_violation(
                &outcome.mult_verdict,
                &format!("theorem 2, r={r}, multiplicative half"),
            );
            return Ok(1);
        }
        if !outcome.star_verdict.pn {
            print_violation(
                &outcome.star_verdict,
                &format!("theorem 2, r={r}, star half"),
            );
            return Ok(1);
        }
    }
    println!(
        "theorem 2: pass, m={m}, G={{{}}}, r in {{{}}}, all counts 1 ({} + {} directions)",
        subgroup
            .members()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(","),
        rs.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(","),
        order - 2,
        subgroup.len() - 1,
    );
    Ok(0)
}

/// Theorem 3: Frobenius powers are doubly perfect nonlinear on fields of
/// Mersenne-prime multiplicative order.
fn verify_doubly_pn(args: VerifyArgs) -> Result<u8, CliError> {
    let q = require(args.q, "q")?;
    if !(2..=13).contains(&q) {
        return Err(CliError::Usage(
            "q must lie in [2, 13] (desk-scale cap 2^13)".into(),
        ));
    }
    let n = (1u64 << q) - 1;
    if !pnfield_core::field::is_prime(n) {
        return Err(CliError::Format(format!(
            "{n} is not prime, so GF(2^{q})* carries no second field structure"
        )));
    }
    let part1 = match args.part1_target {
        Part1TargetArg::Add => Part1Target::Additive,
        Part1TargetArg::Mult => Part1Target::Multiplicative,
    };
    let field = FieldSpec::build(2, q, None)?;
    let fr = FieldRing::new(&field);
    let rs: Vec<u32> = match args.r {
        Some(r) => vec![r],
        None => (0..q).collect(),
    };
    let mut rows = (0, 0);
    for &r in &rs {
        let sbox = frobenius_sbox(&field, r)?;
        let report = is_doubly_pn_with(&sbox, &fr, part1)?;
        match report.verdict {
            DoublyPnVerdict::DoublyPn => {
                let p1 = report.mult_part.as_ref().unwrap();
                let p2 = report.star_part.as_ref().unwrap();
                rows = (p1.spectrum.alphas().len(), p2.spectrum.alphas().len());
            }
            DoublyPnVerdict::NotDoublyPn => {
                if let Some(v) = report.mult_part.as_ref().filter(|v| !v.pn) {
                    print_violation(v, &format!("theorem 3, r={r}, multiplicative half"));
                } else if let Some(v) = report.star_part.as_ref().filter(|v| !v.pn) {
                    print_violation(v, &format!("theorem 3, r={r}, star half"));
                }
                return Ok(1);
            }
            DoublyPnVerdict::Inapplicable => {
                return Err(CliError::Format(
                    report.reason.unwrap_or_else(|| "inapplicable".into()),
                ));
            }
        }
    }
    println!(
        "theorem 3: pass, {} Frobenius maps x ({} directions in part 1 + {} in part 2), all counts 1",
        rs.len(),
        rows.0,
        rows.1
    );
    Ok(0)
}
