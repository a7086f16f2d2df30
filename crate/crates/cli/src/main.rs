use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use mindeg::cache::{LatticeCache, CACHE_ENV};
use mindeg::lattice::{Completeness, LatticeOptions};
use mindeg::mu::{verify_certificate, MuCertificate, MuEngine};
use mindeg::spec::parse_group;
use mindeg::structure::centralizer_in_sym;
use mindeg::verify::{check_report, VerificationReport, Verifier};
use mindeg::{Error, Perm, PermGroup};

/// Degrees above this need `--deep`.
const DEFAULT_MAX_DEGREE: usize = 7;
const DEEP_MAX_DEGREE: usize = 9;
const DEFAULT_DEEP_CACHE: &str = ".mindeg-cache";

#[derive(Parser)]
#[command(
    name = "mindeg",
    version,
    about = "Permutation groups and minimal faithful permutation degrees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal faithful degree with a certificate.
    Mu {
        spec: String,
        /// Also decide membership in the Wright class.
        #[arg(long)]
        wright: bool,
        /// Print only the certificate as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Centralizer in the full symmetric group.
    Centralizer { spec: String },
    /// Conjugacy classes of subgroups.
    Lattice {
        spec: String,
        #[arg(long, env = CACHE_ENV)]
        cache: Option<PathBuf>,
        /// Largest number of classes before the lattice is reported partial.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Additivity sweep over the subgroup classes of Sym(degree).
    Verify {
        #[arg(long)]
        degree: usize,
        /// Allow degrees 8 and 9.
        #[arg(long)]
        deep: bool,
        #[arg(long, env = CACHE_ENV)]
        cache: Option<PathBuf>,
        /// Worker threads for the sweep.
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the machine-readable report here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Table of minimal degrees of all groups with small minimal degree.
    Table {
        #[arg(long)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Format::Txt)]
        format: Format,
    },
    /// The degree-10 strict-inequality example.
    Witness10 {
        #[arg(long)]
        json: bool,
    },
    /// Re-verify a report or a certificate file.
    Check { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Txt,
    Json,
}

/// Process exit status.
enum Outcome {
    Ok,
    Violation,
    Incomplete,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Ok(Outcome::Incomplete) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Budget { .. }) => 2,
        Some(Error::Internal(_)) => 1,
        _ => 3,
    }
}

fn group(spec: &str) -> anyhow::Result<PermGroup> {
    Ok(parse_group(spec)?)
}

fn gens(g: &PermGroup) -> Vec<String> {
    g.generators().iter().map(Perm::to_string).collect()
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Mu { spec, wright, json } => {
            let g = group(&spec)?;
            let cert = MuEngine::default().certificate(&g, wright)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&cert)?);
                return Ok(Outcome::Ok);
            }
            println!("mu = {}", cert.mu);
            println!("order: {}", g.order());
            for w in &cert.witness {
                println!(
                    "witness class {} (index {}): {}",
                    w.class_id,
                    w.index,
                    w.generators.join(", ")
                );
            }
            println!("embedding on {} points: {}", cert.mu, cert.embedding.join(", "));
            if wright {
                match cert.wright_witness {
                    Some(id) => println!("in Wright class: yes (nilpotent class {id})"),
                    None => println!("in Wright class: no"),
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Centralizer { spec } => {
            let c = centralizer_in_sym(&group(&spec)?)?;
            println!("order: {}", c.order());
            println!("generators: {}", gens(&c).join(", "));
            Ok(Outcome::Ok)
        }
        Command::Lattice { spec, cache, budget } => {
            let g = group(&spec)?;
            let mut opts = LatticeOptions::default();
            if let Some(b) = budget {
                opts.max_classes = b;
            }
            let lattice = match cache {
                Some(dir) => LatticeCache::new(dir).get_or_build(&spec, &g, &opts)?,
                None => std::sync::Arc::new(mindeg::lattice::subgroup_classes(&g, &opts)?),
            };
            let mut by_order: BTreeMap<u128, usize> = BTreeMap::new();
            for c in &lattice.classes {
                *by_order.entry(c.order).or_default() += 1;
            }
            println!("classes: {}", lattice.classes.len());
            println!("subgroups: {}", lattice.subgroup_count());
            println!("normal classes: {}", lattice.normal_classes().len());
            println!("complete: {}", lattice.completeness);
            for (order, count) in by_order {
                println!("  order {order}: {count}");
            }
            Ok(if lattice.completeness == Completeness::Partial {
                Outcome::Incomplete
            } else {
                Outcome::Ok
            })
        }
        Command::Verify {
            degree,
            deep,
            cache,
            jobs,
            output,
        } => {
            let limit = if deep { DEEP_MAX_DEGREE } else { DEFAULT_MAX_DEGREE };
            if degree == 0 || degree > limit {
                bail!(Error::Invalid(format!(
                    "degree must be between 1 and {limit}{}",
                    if deep { "" } else { " without --deep" }
                )));
            }
            let cache =
                cache.or_else(|| (deep && degree > DEFAULT_MAX_DEGREE).then(|| PathBuf::from(DEFAULT_DEEP_CACHE)));
            let verifier = Verifier::new(LatticeOptions::default(), cache.map(LatticeCache::new));
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build()?;
            let start = Instant::now();
            let report = pool.install(|| verifier.sweep_products(degree))?;
            eprintln!("elapsed: {:.1?}", start.elapsed());
            print!("{}", report.summary());
            if let Some(path) = output {
                fs::write(&path, report.to_json()?).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(if !report.body.violations.is_empty() {
                Outcome::Violation
            } else if report.body.completeness == Completeness::Partial {
                Outcome::Incomplete
            } else {
                Outcome::Ok
            })
        }
        Command::Table { max_degree, format } => {
            if max_degree == 0 || max_degree > DEEP_MAX_DEGREE {
                bail!(Error::Invalid(format!(
                    "max degree must be between 1 and {DEEP_MAX_DEGREE}"
                )));
            }
            let table = Verifier::default().generate_table(max_degree)?;
            match format {
                Format::Csv => print!("{}", table.to_csv()),
                Format::Txt => print!("{}", table.to_text()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&table)?),
            }
            Ok(Outcome::Ok)
        }
        Command::Witness10 { json } => {
            let report = Verifier::default().saunders_witness()?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.summary());
            }
            Ok(if report.holds { Outcome::Ok } else { Outcome::Violation })
        }
        Command::Check { file } => check_file(&file),
    }
}

fn check_file(path: &Path) -> anyhow::Result<Outcome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.contains("\"checksum\"") {
        let report: VerificationReport = serde_json::from_str(&text).context("parsing report")?;
        let outcome = check_report(&report);
        println!("certificates checked: {}", outcome.certificates_checked);
        for e in &outcome.errors {
            println!("error: {e}");
        }
        println!("{}", if outcome.ok() { "report ok" } else { "report rejected" });
        return Ok(if outcome.ok() { Outcome::Ok } else { Outcome::Violation });
    }
    let cert: MuCertificate = serde_json::from_str(&text).context("parsing certificate")?;
    let g = cert.group.group()?;
    match verify_certificate(&g, &cert) {
        Ok(()) => {
            println!("certificate ok: mu <= {}", cert.mu);
            Ok(Outcome::Ok)
        }
        Err(reason) => {
            println!("certificate rejected: {reason}");
            Ok(Outcome::Violation)
        }
    }
}
