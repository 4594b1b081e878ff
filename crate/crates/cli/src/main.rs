use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use kpure::coeff::mod_n;
use kpure::fgab::exact_at;
use kpure::harness::input::{self, classify_summary, ideal_summary, k_summary, InputDocument};
use kpure::harness::{run_scenario, search_odd_blocks, Format, SearchBounds};
use kpure::homind::{identify_localized_limit, ComplexSystem, Degree, Divisibility, LimitElement, Part};
use kpure::order::{eventual_dominates, graded_e_cone, verify_perforation_witness, GradedElement, RankCone};

macro_rules! out {
    ($($t:tt)*) => { writeln!(io::stdout(), $($t)*)? };
}

macro_rules! outp {
    ($($t:tt)*) => { write!(io::stdout(), $($t)*)? };
}

#[derive(Parser)]
#[command(name = "kpure", version, about = "Exact K-theory of 1-NCCW complexes, their ideals and inductive limits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in scenario (thm3.3, ex4.3, ex4.7, sec5, ex6.1)
    Scenario {
        name: String,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Enumerate small complexes and report the odd ones
    Search {
        #[arg(long, default_value_t = 3)]
        max_p: usize,
        #[arg(long, default_value_t = 2)]
        max_l: usize,
        #[arg(long, default_value_t = 2)]
        max_mult: i64,
        #[arg(long, default_value_t = 2)]
        max_size: i64,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// K-theory of a complex or of an ideal and its quotient
    Ktheory {
        #[command(subcommand)]
        what: KtheoryCommand,
    },
    /// Classify complexes as nice, odd or other
    Classify {
        #[command(flatten)]
        target: Target,
    },
    /// Inductive limits of a system
    Limit {
        file: String,
        #[arg(long)]
        system: Option<String>,
        /// Print stages 0..=N with their bonds
        #[arg(long, conflicts_with_all = ["identify", "divisible"])]
        stages: Option<usize>,
        /// Identify the limit groups as localizations
        #[arg(long, conflicts_with = "divisible")]
        identify: bool,
        /// Divisibility of a stage-0 K0 element `g` (comma-separated) by `n`
        #[arg(long, num_args = 2, value_names = ["G", "N"])]
        divisible: Option<Vec<String>>,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Mod-n K-groups and Bockstein sequences
    Coeff {
        #[command(flatten)]
        target: Target,
        /// Moduli, comma-separated
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
    },
    /// Order along a system: dominance and perforation witnesses
    Order {
        file: String,
        #[arg(long)]
        system: Option<String>,
        /// Whether stage-0 K0 element `u` eventually dominates `v`
        #[arg(long, num_args = 2, value_names = ["U", "V"], conflicts_with = "perforation_witness")]
        dominates: Option<Vec<String>>,
        #[arg(long, default_value_t = 8)]
        bound: usize,
        /// Whether `n·g` is positive and `g` is not, for `g = ((x,y),z)`
        #[arg(long, num_args = 2, value_names = ["G", "N"])]
        perforation_witness: Option<Vec<String>>,
    },
    /// Run the queries of a document and check their expected values
    Check {
        file: String,
        #[arg(long, default_value = "text")]
        format: String,
    },
}

#[derive(Subcommand)]
enum KtheoryCommand {
    Complex {
        #[command(flatten)]
        target: Target,
    },
    Ideal {
        #[command(flatten)]
        target: Target,
        /// Point labels (1-based, comma-separated) of the ideal's support
        #[arg(long, value_delimiter = ',', required = true)]
        summands: Vec<usize>,
    },
}

#[derive(Args)]
struct Target {
    /// Input document, or `builtin:NAME`
    file: String,
    /// Complex name (default: every complex)
    #[arg(long)]
    name: Option<String>,
    #[arg(long, default_value_t = 0)]
    stage: u64,
}

fn load(file: &str) -> Result<InputDocument> {
    let text = match file.strip_prefix("builtin:") {
        Some(name) => input::BUILTIN_DOCUMENTS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| anyhow!("no built-in document {name:?}"))?,
        None => fs::read_to_string(file).with_context(|| format!("reading {file}"))?,
    };
    input::parse(&text).with_context(|| format!("in {file}"))
}

fn complexes(doc: &InputDocument, t: &Target) -> Result<Vec<(String, kpure::Complex)>> {
    let names: Vec<String> = match &t.name {
        Some(n) => vec![n.clone()],
        None => doc.complex_names().into_iter().map(String::from).collect(),
    };
    if names.is_empty() {
        bail!("the document has no complexes");
    }
    names.into_iter().map(|n| Ok((n.clone(), doc.complex(&n, t.stage)?))).collect()
}

fn system(doc: &InputDocument, name: &Option<String>) -> Result<(String, ComplexSystem<BigInt>)> {
    let name = match name {
        Some(n) => n.clone(),
        None => {
            doc.system_names().first().map(|s| s.to_string()).ok_or_else(|| anyhow!("the document has no systems"))?
        }
    };
    Ok((name.clone(), doc.system(&name)?))
}

fn vector(s: &str) -> Result<Vec<BigInt>> {
    s.split(',').map(|x| x.trim().parse::<BigInt>().with_context(|| format!("bad integer {x:?} in {s:?}"))).collect()
}

fn parts(sys: &ComplexSystem<BigInt>) -> Vec<(&'static str, Part)> {
    let mut v = vec![("algebra", Part::Algebra)];
    if sys.ideal_support().is_some() {
        v.extend([("ideal", Part::Ideal), ("quotient", Part::Quotient)]);
    }
    v
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Scenario { name, format } => {
            let format: Format = format.parse()?;
            let report = run_scenario(&name)?;
            outp!("{}", report.render(format));
            Ok(report.all_pass())
        }
        Command::Search { max_p, max_l, max_mult, max_size, jobs, format } => {
            let bounds = SearchBounds { max_p, max_l, max_mult, max_size };
            let (blocks, census) = rayon_pool(jobs)?.install(|| search_odd_blocks(&bounds))?;
            if format.parse::<Format>()? == Format::Json {
                let items: Vec<_> = blocks
                    .iter()
                    .map(|b| {
                        let c = &b.complex;
                        let rows = |m: &kpure::Matrix| {
                            (0..m.rows())
                                .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect::<Vec<_>>())
                                .collect::<Vec<_>>()
                        };
                        serde_json::json!({
                            "k": c.k().iter().map(ToString::to_string).collect::<Vec<_>>(),
                            "h": c.h().iter().map(ToString::to_string).collect::<Vec<_>>(),
                            "alpha": rows(c.alpha()),
                            "beta": rows(c.beta()),
                            "unital": c.is_unital(),
                            "witness": b.witness.labels(),
                        })
                    })
                    .collect();
                let out = serde_json::json!({
                    "bounds": {"max_p": max_p, "max_l": max_l, "max_mult": max_mult, "max_size": max_size},
                    "census": {"complexes": census.complexes, "classified": census.classified, "nice": census.nice, "odd": census.odd, "other": census.other},
                    "odd_blocks": items,
                });
                out!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                out!("bounds: p <= {max_p}, l <= {max_l}, multiplicities <= {max_mult}, sizes <= {max_size}");
                out!(
                    "census: {} complexes up to permutation ({} multiplicity patterns): {} nice, {} odd, {} other",
                    census.complexes,
                    census.classified,
                    census.nice,
                    census.odd,
                    census.other
                );
                for b in &blocks {
                    out!("odd {} witness {}", b.complex, b.witness);
                }
            }
            Ok(true)
        }
        Command::Ktheory { what } => {
            match what {
                KtheoryCommand::Complex { target } => {
                    let doc = load(&target.file)?;
                    for (name, a) in complexes(&doc, &target)? {
                        out!("{name} (stage {}): {}", target.stage, k_summary(&a));
                    }
                }
                KtheoryCommand::Ideal { target, summands } => {
                    let doc = load(&target.file)?;
                    for (name, a) in complexes(&doc, &target)? {
                        out!("{name} (stage {}): {}", target.stage, ideal_summary(&a, &summands)?);
                    }
                }
            }
            Ok(true)
        }
        Command::Classify { target } => {
            let doc = load(&target.file)?;
            for (name, a) in complexes(&doc, &target)? {
                out!("{name} (stage {}): {}", target.stage, classify_summary(&a)?);
            }
            Ok(true)
        }
        Command::Limit { file, system: name, stages, identify, divisible, bound } => {
            let doc = load(&file)?;
            let (name, sys) = system(&doc, &name)?;
            if let Some(dv) = divisible {
                let (g, n) = (vector(&dv[0])?, dv[1].parse::<BigInt>().context("bad divisor")?);
                let k0 = sys.k_system(Part::Algebra, Degree::K0);
                return Ok(match k0.divisible_in_limit(&LimitElement::new(0, g.clone()), &n, bound)? {
                    Divisibility::Yes { stage, witness } => {
                        let w: Vec<String> = witness.iter().map(ToString::to_string).collect();
                        out!("{name}: ({}) is divisible by {n} at stage {stage}, witness ({})", dv[0], w.join(","));
                        true
                    }
                    Divisibility::NotByBound(b) => {
                        out!("{name}: ({}) is not divisible by {n} at any stage <= {b}", dv[0]);
                        false
                    }
                });
            }
            if identify || stages.is_none() {
                for (label, part) in parts(&sys) {
                    for degree in [Degree::K0, Degree::K1] {
                        let l = identify_localized_limit(&sys.k_system(part, degree))?;
                        let text = l.map_or("unidentified".to_string(), |l| l.to_string());
                        out!("{name} {label} {degree:?}: {text}");
                    }
                }
                return Ok(true);
            }
            let n = stages.expect("checked above");
            for (label, part) in parts(&sys) {
                for degree in [Degree::K0, Degree::K1] {
                    let t = sys.k_system(part, degree).truncate(n.max(1))?;
                    out!("{name} {label} {degree:?} (truncation, stages 0..={n}):");
                    for s in 0..=n {
                        outp!("  stage {s}: {}", t.groups[s]);
                        if s < n {
                            outp!("  bond {}", t.bonds[s].matrix());
                        }
                        out!();
                    }
                }
            }
            Ok(true)
        }
        Command::Coeff { target, n } => {
            let doc = load(&target.file)?;
            let mut ok = true;
            for (name, a) in complexes(&doc, &target)? {
                let k = a.k_theory();
                out!("{name} (stage {}): {}", target.stage, k_summary(&a));
                for &m in &n {
                    let d = mod_n(k.k0(), k.k1(), &BigInt::from(m))?;
                    let mut exact = true;
                    for i in 0..2 {
                        let (xn, rho, beta, xn1) = (d.times_n(i), d.rho(i)?, d.beta(i)?, d.times_n(i + 1));
                        exact &= exact_at(&xn, &rho)? && exact_at(&rho, &beta)? && exact_at(&beta, &xn1)?;
                    }
                    ok &= exact;
                    out!(
                        "  n = {m}: K0(;Z_{m}) = {}, K1(;Z_{m}) = {}, Bockstein sequences {}",
                        d.k_mod(0).group(),
                        d.k_mod(1).group(),
                        if exact { "exact" } else { "NOT exact" }
                    );
                }
            }
            Ok(ok)
        }
        Command::Order { file, system: name, dominates, bound, perforation_witness } => {
            let doc = load(&file)?;
            let (name, sys) = system(&doc, &name)?;
            if let Some(uv) = dominates {
                let (u, v) = (vector(&uv[0])?, vector(&uv[1])?);
                let k0 = sys.k_system(Part::Algebra, Degree::K0);
                let cone = RankCone { system: &sys, part: Part::Algebra };
                return Ok(match eventual_dominates(&k0, &cone, &u, &v, bound)? {
                    Some(s) => {
                        out!("{name}: ({}) >= ({}) first at stage {s}", uv[0], uv[1]);
                        true
                    }
                    None => {
                        out!("{name}: ({}) does not dominate ({}) at any stage <= {bound}", uv[0], uv[1]);
                        false
                    }
                });
            }
            if let Some(gn) = perforation_witness {
                let k0 = identify_localized_limit(&sys.k_system(Part::Algebra, Degree::K0))?.map(|l| l.to_string());
                let k1 = identify_localized_limit(&sys.k_system(Part::Algebra, Degree::K1))?.map(|l| l.to_string());
                if k0.as_deref() != Some("Z[1/2] + Z[1/3]") || k1.as_deref() != Some("Z") {
                    bail!("no graded cone is known for {name} (K0 {k0:?}, K1 {k1:?})");
                }
                let g = GradedElement::parse(&gn[0])?;
                let n: u32 = gn[1].parse().context("bad multiplier")?;
                let confirmed = verify_perforation_witness(&graded_e_cone(), &g, n)?;
                out!(
                    "{name}: {n}*{g} positive and {g} not positive: {}",
                    if confirmed { "confirmed" } else { "not confirmed" }
                );
                return Ok(confirmed);
            }
            bail!("order needs --dominates U V or --perforation-witness G N")
        }
        Command::Check { file, format } => {
            let doc = load(&file)?;
            let report = doc.run_queries(&file);
            outp!("{}", report.render(format.parse()?));
            Ok(report.all_pass())
        }
    }
}

fn rayon_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j);
    }
    Ok(b.build()?)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
