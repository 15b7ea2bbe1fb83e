//! Command-line front end.

mod config;
mod verify;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cartier::{self, HyperellipticCurve};
use crate::census::{self, CountView, Question, ScanMode, ScanSpec, WitnessBudget, WitnessOutcome};
use crate::covers::{self, CoverDatum};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, MAX_DEGREE};
use crate::poly::Poly;
use crate::zeta;

pub use config::Config;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "prymrank", version, about = "p-ranks of hyperelliptic curves and of the Pryms of their double covers")]
pub struct Cli {
    /// key=value file with default caps, format, seed and threads
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// worker threads for scans (results do not depend on it)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    /// field spec, e.g. "p=5" or "p=5,k=2,mod=2,4,1"
    #[arg(long)]
    pub field: String,
    /// coefficients of f, constant term first, e.g. "0,4,0,0,0,1"
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// p-rank, Cartier matrix and point-count cross-check of y^2 = f(x)
    Prank(CurveArgs),
    /// All unramified double covers with their p-ranks
    Covers {
        #[command(flatten)]
        curve: CurveArgs,
        /// move to the smallest extension over which f splits
        #[arg(long)]
        extend: bool,
    },
    /// Checks the worked genus 2 examples in characteristic 5
    VerifyPaper {
        #[arg(long, default_value_t = 5)]
        p: u32,
        /// minimal polynomial of the generator a of F_25, constant term first
        #[arg(long, default_value = "2,4,1")]
        modulus: String,
    },
    /// Stratum table over a family of curves
    Census {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// only report this stratum, "f,f'"
        #[arg(long)]
        target: Option<String>,
        #[arg(long, value_enum, default_value_t = ViewArg::Covers)]
        view: ViewArg,
    },
    /// Searches for a cover in a given stratum
    Witness {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// "f,f'"
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        #[arg(long)]
        escalate_k: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// re-derive the certificate along both routes
        #[arg(long)]
        verify: bool,
    },
    /// Genus 3 questions on the hyperelliptic locus
    Explore {
        /// Q9.2 or Q9.5-table
        #[arg(long)]
        question: String,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Growth of curve-wise stratum counts across fields (approximate)
    Growth {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// "f,f'"
        #[arg(long)]
        stratum: String,
        /// e.g. "1,2"
        #[arg(long)]
        k_list: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ViewArg {
    Covers,
    Curves,
}

/// Parses arguments, runs the command and writes its output; returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let config = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
        },
        None => Config::default(),
    };
    let format = cli.format.or(config.format).unwrap_or(Format::Pretty);
    let threads = cli.threads.or(config.threads);
    let result = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &config, format)),
            Err(e) => Err(Error::InvalidScan(e.to_string())),
        },
        None => dispatch(&cli.command, &config, format),
    };
    match result {
        Ok(report) => {
            let _ = out.write_all(report.text.as_bytes());
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } | Error::GenusCap { .. } => EXIT_CAP,
        Error::InconsistentCounts(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

struct Report {
    text: String,
    code: i32,
}

impl Report {
    fn ok(text: String) -> Result<Report> {
        Ok(Report { text, code: EXIT_OK })
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn csv_of<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.parse().map_err(|_| Error::Parse(format!("bad pair {s:?}")))?,
            b.parse().map_err(|_| Error::Parse(format!("bad pair {s:?}")))?,
        )),
        _ => Err(Error::Parse(format!("expected \"f,f'\", got {s:?}"))),
    }
}

fn load_curve(args: &CurveArgs, config: &Config) -> Result<HyperellipticCurve> {
    let ctx = FieldCtx::parse_spec(&args.field)?;
    let curve = HyperellipticCurve::new(Poly::parse(&ctx, &args.f)?)?;
    if curve.genus() > config.genus_cap {
        return Err(Error::GenusCap { genus: curve.genus(), cap: config.genus_cap });
    }
    Ok(curve)
}

fn dispatch(command: &Command, config: &Config, format: Format) -> Result<Report> {
    match command {
        Command::Prank(args) => prank(&load_curve(args, config)?, config, format),
        Command::Covers { curve, extend } => {
            let mut x = load_curve(curve, config)?;
            if *extend {
                x = minimal_splitting_model(&x, config)?;
            }
            cover_table(&x, format)
        }
        Command::VerifyPaper { p, modulus } => verify::run(*p, modulus, format),
        Command::Census { p, k, genus, mode, seed, samples, target, view } => {
            let mode = match mode {
                ModeArg::Exhaustive => ScanMode::Exhaustive,
                ModeArg::Random => {
                    let seed = seed.or(config.seed).ok_or_else(|| {
                        Error::InvalidScan("random mode needs --seed (or seed= in the config)".into())
                    })?;
                    ScanMode::Random { seed, samples: *samples }
                }
            };
            let spec = ScanSpec {
                target: target.as_deref().map(parse_pair).transpose()?,
                exhaustive_cap: config.exhaustive_cap,
                ..ScanSpec::new(*p, *k, *genus, mode)
            };
            let table = census::scan(&spec)?;
            let view = match view {
                ViewArg::Covers => CountView::Covers,
                ViewArg::Curves => CountView::Curves,
            };
            match format {
                Format::Csv => Report::ok(table.to_csv(view)?),
                Format::Json => Report::ok(json(&table)),
                Format::Pretty => {
                    let mut s = format!(
                        "genus {} over F_{} ({}{}): {} curves, {} covers each\n",
                        table.genus,
                        table.q,
                        table.mode,
                        table.seed.map(|s| format!(", seed {s}")).unwrap_or_default(),
                        table.total,
                        table.covers_per_curve()
                    );
                    s.push_str("   f  f'      covers      curves\n");
                    for r in &table.rows {
                        let _ = writeln!(s, "{:>4} {:>3} {:>11} {:>11}", r.f, r.f_prime, r.covers, r.curves);
                    }
                    Report::ok(s)
                }
            }
        }
        Command::Witness { p, genus, target, max_k, escalate_k, samples, seed, verify } => {
            let budget = WitnessBudget {
                max_k: *max_k,
                escalate_k: escalate_k.unwrap_or(*max_k),
                samples: samples.or(config.samples).unwrap_or(WitnessBudget::default().samples),
                seed: seed.or(config.seed).unwrap_or(0),
                exhaustive_cap: config.exhaustive_cap,
            };
            let target = parse_pair(target)?;
            let outcome = census::witness_search(*p, *genus, target, &budget)?;
            witness_report(&outcome, target, *verify, config, format)
        }
        Command::Explore { question, p, max_k, samples, seed } => {
            let question: Question = question.parse()?;
            let budget = WitnessBudget {
                max_k: *max_k,
                escalate_k: *max_k,
                samples: samples.or(config.samples).unwrap_or(1 << 18),
                seed: seed.or(config.seed).unwrap_or(0),
                exhaustive_cap: config.exhaustive_cap,
            };
            let report = census::explore_question(question, *p, &budget)?;
            match format {
                Format::Json => Report::ok(json(&report)),
                Format::Csv => Report::ok(match &report.table {
                    Some(t) => t.to_csv(CountView::Covers)?,
                    None => String::new(),
                }),
                Format::Pretty => {
                    let mut s = format!("{} at p = {} [{}]\n", question_name(question), report.p, report.label);
                    let _ = writeln!(
                        s,
                        "best (f, f_Y): {}",
                        report.best.map(|(f, fy)| format!("({f}, {fy})")).unwrap_or_else(|| "none".into())
                    );
                    for f in &report.searched {
                        let _ = writeln!(s, "searched F_{} ({}, {} slice): {} tuples", f.q, f.mode, f.slice, f.tuples);
                    }
                    if let Some(w) = &report.witness {
                        let _ = writeln!(s, "witness over {}: f = {}", w.field, w.cover.f_coeffs.join(" ; "));
                        let _ = writeln!(s, "partition: {:?}", w.cover.partition);
                    }
                    let _ = writeln!(s, "{}", report.note);
                    Report::ok(s)
                }
            }
        }
        Command::Growth { p, genus, stratum, k_list } => {
            let ks = k_list
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad k list {k_list:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let steps = census::growth_exponent(*p, *genus, parse_pair(stratum)?, &ks)?;
            match format {
                Format::Json => Report::ok(json(&steps)),
                Format::Csv => Report::ok(csv_of(&steps)?),
                Format::Pretty => {
                    let mut s = String::from("approximate growth exponents of curve-wise counts\n");
                    for g in &steps {
                        let _ = writeln!(
                            s,
                            "q {} -> {}: {} -> {} curves, exponent {}",
                            g.q_small,
                            g.q_large,
                            g.count_small,
                            g.count_large,
                            g.exponent.map(|e| format!("{e:.3}")).unwrap_or_else(|| "undefined".into())
                        );
                    }
                    Report::ok(s)
                }
            }
        }
    }
}

fn question_name(q: Question) -> &'static str {
    match q {
        Question::ZeroRankCover => "Q9.2",
        Question::GenusThreeTable => "Q9.5-table",
    }
}

#[derive(Serialize)]
struct PrankReport {
    field: String,
    f: String,
    genus: usize,
    p_rank: usize,
    cartier_matrix: Vec<Vec<String>>,
    /// None when the point counts exceed the cap
    zeta_p_rank: Option<usize>,
    agrees: Option<bool>,
}

fn prank(curve: &HyperellipticCurve, config: &Config, format: Format) -> Result<Report> {
    let m = cartier::cartier_matrix(curve);
    let rank = cartier::p_rank(curve)?;
    let zeta_rank = match zeta::l_polynomial_with_cap(curve.f(), config.count_cap) {
        Ok(l) => Some(l.degree_mod(curve.ctx().p() as u64)),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let report = PrankReport {
        field: curve.ctx().spec(),
        f: curve.f().encode(),
        genus: curve.genus(),
        p_rank: rank,
        cartier_matrix: m.entries().iter().map(|r| r.iter().map(|e| e.encode()).collect()).collect(),
        zeta_p_rank: zeta_rank,
        agrees: zeta_rank.map(|z| z == rank),
    };
    let code = if report.agrees == Some(false) { EXIT_VERIFY } else { EXIT_OK };
    let text = match format {
        Format::Json => json(&report),
        Format::Csv => csv_of(&[PrankRow {
            field: report.field.clone(),
            f: report.f.clone(),
            genus: report.genus,
            p_rank: report.p_rank,
            zeta_p_rank: report.zeta_p_rank,
        }])?,
        Format::Pretty => {
            let mut s = format!("curve y^2 = {} over {}\ngenus {}\np-rank {}\nCartier matrix: {}\n", report.f, report.field, report.genus, rank, m.encode());
            match (report.zeta_p_rank, report.agrees) {
                (Some(z), Some(true)) => {
                    let _ = writeln!(s, "point counts agree (p-rank {z})");
                }
                (Some(z), _) => {
                    let _ = writeln!(s, "point counts DISAGREE (p-rank {z})");
                }
                _ => s.push_str("point counts skipped (cap)\n"),
            }
            s
        }
    };
    Ok(Report { text, code })
}

#[derive(Serialize)]
struct PrankRow {
    field: String,
    f: String,
    genus: usize,
    p_rank: usize,
    zeta_p_rank: Option<usize>,
}

/// The curve over the smallest extension of its field where f splits.
pub fn minimal_splitting_model(curve: &HyperellipticCurve, config: &Config) -> Result<HyperellipticCurve> {
    let ctx = curve.ctx();
    let d = ctx.degree();
    for m in 1..=MAX_DEGREE / d {
        let size = (ctx.p() as u128).pow((d * m) as u32);
        if size > config.enum_cap {
            return Err(Error::CapExceeded { what: "splitting field", size, cap: config.enum_cap });
        }
        let ext: Arc<FieldCtx> = if m == 1 { ctx.clone() } else { FieldCtx::new(ctx.p(), d * m, None)? };
        let f = curve.f().lift(&ext, config.enum_cap)?;
        if f.roots_in(&ext, config.enum_cap)?.len() == f.degree().unwrap_or(0) {
            return HyperellipticCurve::new(f);
        }
    }
    Err(Error::NonRationalBranch)
}

#[derive(Serialize)]
struct CoverTable {
    field: String,
    f: String,
    theta_contains_order_2: bool,
    covers: Vec<covers::CoverRecord>,
}

#[derive(Serialize)]
struct CoverRow {
    part1: String,
    part2: String,
    f: usize,
    f_prime: usize,
    #[serde(rename = "f_Y")]
    f_y: usize,
}

fn cover_table(curve: &HyperellipticCurve, format: Format) -> Result<Report> {
    let data: Vec<CoverDatum> = covers::cover_profile(curve)?;
    let theta = covers::theta_two_torsion_report(curve)?;
    let text = match format {
        Format::Json => json(&CoverTable {
            field: curve.ctx().spec(),
            f: curve.f().encode(),
            theta_contains_order_2: theta.contains_order_2,
            covers: data.iter().map(CoverDatum::record).collect(),
        }),
        Format::Csv => csv_of(
            &data
                .iter()
                .map(|d| {
                    let [a, b] = d.partition.encode();
                    CoverRow { part1: a.join(";"), part2: b.join(";"), f: d.f, f_prime: d.f_prime, f_y: d.f_y }
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Pretty => {
            let mut s = format!("curve y^2 = {} over {}\n{} covers\n", curve.f().encode(), curve.ctx().spec(), data.len());
            for d in &data {
                let _ = writeln!(s, "f={} f'={} f_Y={}  {}", d.f, d.f_prime, d.f_y, d.partition);
            }
            let _ = writeln!(
                s,
                "theta divisor contains a point of order 2: {}{}",
                if theta.contains_order_2 { "yes" } else { "no" },
                if theta.contains_order_2 { format!(" ({} covers)", theta.witnesses.len()) } else { String::new() }
            );
            s
        }
    };
    Report::ok(text)
}

fn witness_report(
    outcome: &WitnessOutcome,
    target: (usize, usize),
    verify: bool,
    config: &Config,
    format: Format,
) -> Result<Report> {
    let check = match (verify, outcome.certificate()) {
        (true, Some(c)) => Some(c.verify(config.verify_cap)?),
        _ => None,
    };
    let code = match &check {
        Some(c) if !c.reproduces(target) => EXIT_VERIFY,
        _ => EXIT_OK,
    };
    let text = match format {
        Format::Json | Format::Csv => match outcome.certificate() {
            Some(c) => json(c),
            None => json(&serde_json::json!({ "exhausted": true, "target": target, "searched": outcome.searched() })),
        },
        Format::Pretty => {
            let mut s = String::new();
            for f in outcome.searched() {
                let _ = writeln!(s, "searched F_{} ({}, {} slice): {} tuples", f.q, f.mode, f.slice, f.tuples);
            }
            match outcome.certificate() {
                Some(c) => {
                    let _ = writeln!(s, "found ({}, {}) over {} at scan index {}", target.0, target.1, c.field, c.scan_index);
                    let _ = writeln!(s, "parameters: {}", c.params.join(" ; "));
                    let _ = writeln!(s, "f = {}", c.cover.f_coeffs.join(" ; "));
                    let _ = writeln!(s, "partition: {:?}", c.cover.partition);
                }
                None => {
                    let _ = writeln!(s, "exhausted: no cover in ({}, {}) within budget", target.0, target.1);
                }
            }
            if let Some(c) = &check {
                let _ = writeln!(
                    s,
                    "re-derived: Cartier {:?}, point counts {}",
                    c.cartier,
                    c.zeta.map(|z| format!("{z:?}")).unwrap_or_else(|| "skipped (cap)".into())
                );
            }
            s
        }
    };
    Ok(Report { text, code })
}
