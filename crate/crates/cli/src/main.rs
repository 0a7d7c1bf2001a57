mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ndg::ncx::{self, KhomFlavor, NComplex};
use ndg::ndgcat::{self, NdgModule};
use ndg::verify::{self, SuiteConfig};
use ndg::workspace::Workspace;
use report::Report;

#[derive(Parser, Debug)]
#[command(name = "ndgtool", version, about = "Exact computations with N-complexes and NDG categories")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Flavor {
    Susp0,
    Susp1,
}

impl From<Flavor> for KhomFlavor {
    fn from(f: Flavor) -> KhomFlavor {
        match f {
            Flavor::Susp0 => KhomFlavor::Susp0,
            Flavor::Susp1 => KhomFlavor::Susp1,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load and validate a workspace.
    Check { file: PathBuf },
    /// Amplitude homology dimensions of a complex.
    Homology {
        file: PathBuf,
        #[arg(long)]
        complex: String,
        /// Degree window `a..b`; defaults to the support widened by N.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Cone of a degree-0 chain map and exactness of its homology sequence.
    Cone {
        file: PathBuf,
        #[arg(long)]
        map: String,
    },
    /// Decompose an acyclic complex into staircase blocks.
    Contract {
        file: PathBuf,
        #[arg(long)]
        complex: String,
    },
    /// Dimensions of the hom complex between two complexes or two right modules.
    Homspace {
        file: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Dimension of a hom space in the homotopy category.
    Khom {
        file: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        n: i64,
        #[arg(long, value_enum, default_value = "susp0")]
        flavor: Flavor,
    },
    /// Tensor-hom adjunction for a right module X, a bimodule M and a right module Y.
    Adjoint {
        file: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        bimodule: String,
        #[arg(long)]
        y: String,
    },
    /// Run a seeded verification suite (`all` runs every suite).
    Verify {
        #[arg(long)]
        suite: String,
        /// Order or order range `a..b`; defaults per suite.
        #[arg(long = "N")]
        orders: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, env = "NDGTOOL_SEED", default_value_t = 0)]
        seed: u64,
        /// Check every amplitude instead of the sufficient ones.
        #[arg(long)]
        all_r: bool,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
        /// Where to write the reproducer file when a check fails.
        #[arg(long, default_value = ".")]
        reproducer_dir: PathBuf,
    },
}

/// Failures that map to exit status 2 rather than 1.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || usage(format!("expected `a..b` or a single integer, got `{s}`"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}

fn load(path: &Path) -> Result<Workspace> {
    Workspace::load(path).map_err(|e| match e {
        ndg::Error::Invalid { .. } => anyhow!(e).context(format!("invalid workspace {}", path.display())),
        e => usage(format!("{}: {e}", path.display())),
    })
}

fn lookup<'a, T>(found: ndg::Result<&'a T>) -> Result<&'a T> {
    found.map_err(|e| usage(e.to_string()))
}

enum Operand<'a> {
    Complex(&'a NComplex),
    Module(&'a NdgModule),
}

fn operand<'a>(ws: &'a Workspace, name: &str) -> Result<Operand<'a>> {
    if let Ok(x) = ws.complex(name) {
        return Ok(Operand::Complex(x));
    }
    if let Ok(m) = ws.module(name) {
        return Ok(Operand::Module(&m.module));
    }
    Err(usage(format!("no complex or module named `{name}`")))
}

fn dims_summary(x: &NComplex) -> String {
    let parts: Vec<String> = x.space().dims().iter().map(|(i, d)| format!("{i}:{d}")).collect();
    format!("dims {{{}}}", parts.join(", "))
}

fn side_name(side: ndgcat::Side) -> &'static str {
    match side {
        ndgcat::Side::Right => "right",
        ndgcat::Side::Left => "left",
    }
}

fn check(ws: &Workspace, rep: &mut Report) {
    rep.info("field", serde_json::to_string(&ws.field().spec()).expect("spec serializes"));
    for (name, x) in &ws.complexes {
        rep.push(format!("complex {name}"), true, dims_summary(x));
    }
    for (name, m) in &ws.maps {
        let (s, t) = (&ws.complexes[&m.source], &ws.complexes[&m.target]);
        let summary = match ncx::check_chain_map(&m.map, s, t) {
            Ok(()) => format!("{} -> {}, degree {}, chain map", m.source, m.target, m.map.degree()),
            Err(_) => format!("{} -> {}, degree {}, not a chain map", m.source, m.target, m.map.degree()),
        };
        rep.push(format!("map {name}"), true, summary);
    }
    for (name, c) in &ws.categories {
        let dims: Vec<String> = (0..c.len())
            .flat_map(|a| (0..c.len()).map(move |b| (a, b)))
            .map(|(a, b)| format!("{}->{}:{}", c.objects()[a], c.objects()[b], c.hom_dim(a, b)))
            .collect();
        rep.push(format!("category {name}"), true, format!("objects {:?}, hom dims {{{}}}", c.objects(), dims.join(", ")));
    }
    for (name, m) in &ws.modules {
        let dims: Vec<String> = m.module.values().iter().map(|x| x.space().total_dim().to_string()).collect();
        rep.push(format!("module {name}"), true, format!("{} module over {}, value dims [{}]", side_name(m.module.side()), m.category, dims.join(", ")));
    }
    for (name, m) in &ws.bimodules {
        rep.push(format!("bimodule {name}"), true, format!("{}-{} bimodule", m.left, m.right));
    }
}

fn homology(ws: &Workspace, name: &str, window: Option<&str>, rep: &mut Report) -> Result<()> {
    let x = lookup(ws.complex(name))?;
    let n = x.order();
    let (lo, hi) = match window {
        Some(w) => parse_range(w)?,
        None => x.support().map_or((0, 0), |(lo, hi)| (lo - n as i64, hi + n as i64)),
    };
    for i in lo..=hi {
        for r in 1..n {
            rep.info(format!("H^{i}_({r})"), ncx::homology_dim(x, i, r)?);
        }
    }
    rep.push("acyclic", true, ncx::is_acyclic(x).to_string());
    Ok(())
}

fn cone(ws: &Workspace, name: &str, rep: &mut Report) -> Result<()> {
    let m = lookup(ws.map(name))?;
    let (x, y) = (&ws.complexes[&m.source], &ws.complexes[&m.target]);
    let t = ncx::cone(&m.map, x, y).with_context(|| format!("map `{name}`"))?;
    rep.info("cone", dims_summary(&t.z));
    let hex = ncx::hexagon_report(&t, None)?;
    let bad = hex.entries.iter().filter(|e| !e.exact).count();
    rep.push("long homology sequence exact", bad == 0, format!("{} positions, {bad} inexact", hex.entries.len()));
    rep.info("quasi-isomorphism", ncx::is_quasi_iso(&m.map, x, y)?);
    rep.info("cone acyclic", ncx::is_acyclic(&t.z));
    Ok(())
}

fn contract(ws: &Workspace, name: &str, rep: &mut Report) -> Result<()> {
    let x = lookup(ws.complex(name))?;
    let c = ncx::contract_acyclic(x).with_context(|| format!("complex `{name}`"))?;
    let f = x.field();
    let mut blocks = std::collections::BTreeMap::new();
    for s in &c.blocks {
        *blocks.entry(*s).or_insert(0usize) += 1;
    }
    let listed: Vec<String> = blocks.iter().map(|(s, k)| format!("{k}x[{s}..{}]", s + x.order() as i64 - 1)).collect();
    rep.info("blocks", listed.join(" "));
    // FNV-1a over the entries of the basis change, degree by degree.
    let mut sum = 0xcbf2_9ce4_8422_2325u64;
    for (i, m) in c.basis_change.components() {
        for v in std::iter::once(*i as u64).chain(m.entries().iter().map(|s| f.fingerprint(s))) {
            sum = (sum ^ v).wrapping_mul(0x0100_0000_01b3);
        }
    }
    rep.info("basis change checksum", format!("{sum:016x}"));
    let ok = ncx::check_chain_map(&c.basis_change, x, &c.normal_form).is_ok() && c.basis_change.inverse().is_some();
    rep.push("conjugation verified", ok, "degree-0 chain isomorphism onto the block sum");
    Ok(())
}

fn homspace(ws: &Workspace, source: &str, target: &str, rep: &mut Report) -> Result<()> {
    let h = match (operand(ws, source)?, operand(ws, target)?) {
        (Operand::Complex(x), Operand::Complex(y)) => ncx::hom_complex(x, y)?,
        (Operand::Module(x), Operand::Module(y)) => ndgcat::module_hom_complex(x, y)?.complex,
        _ => bail!(usage("source and target must both be complexes or both be modules")),
    };
    for (i, d) in h.space().dims() {
        rep.info(format!("degree {i}"), d);
    }
    rep.info("total", h.space().total_dim());
    Ok(())
}

fn khom(ws: &Workspace, source: &str, target: &str, n: i64, flavor: Flavor, rep: &mut Report) -> Result<()> {
    let d = match (operand(ws, source)?, operand(ws, target)?) {
        (Operand::Complex(x), Operand::Complex(y)) => ncx::khom_dim(x, y, n, flavor.into())?,
        (Operand::Module(x), Operand::Module(y)) => ndgcat::khom_module(x, y, n, flavor.into())?,
        _ => bail!(usage("source and target must both be complexes or both be modules")),
    };
    rep.info("dimension", d);
    Ok(())
}

fn adjoint(ws: &Workspace, x: &str, m: &str, y: &str, rep: &mut Report) -> Result<()> {
    let (x, m, y) = (&lookup(ws.module(x))?.module, &lookup(ws.bimodule(m))?.bimodule, &lookup(ws.module(y))?.module);
    let r = ndgcat::adjunction_check(x, m, y)?;
    let fmt = |d: &std::collections::BTreeMap<i64, usize>| {
        d.iter().map(|(i, k)| format!("{i}:{k}")).collect::<Vec<_>>().join(", ")
    };
    rep.push("hom dims agree", r.lhs_dims == r.rhs_dims, format!("{{{}}} vs {{{}}}", fmt(&r.lhs_dims), fmt(&r.rhs_dims)));
    rep.push("alpha invertible", r.invertible, "");
    rep.push("alpha commutes with differentials", r.commutes, "");
    rep.push("chain maps", r.chain_maps.0 == r.chain_maps.1, format!("{} vs {}", r.chain_maps.0, r.chain_maps.1));
    let hc = r.homotopy_classes;
    rep.push("homotopy classes", hc.0 == hc.1, format!("{} vs {}", hc.0, hc.1));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    suite: &str,
    orders: Option<&str>,
    trials: Option<usize>,
    seed: u64,
    all_r: bool,
    timing: bool,
    dir: &Path,
    rep: &mut Report,
) -> Result<()> {
    let suites: Vec<&str> = if suite == "all" { verify::SUITES.to_vec() } else { vec![suite] };
    rep.seed = Some(seed);
    let start = Instant::now();
    let mut reproducers = Vec::new();
    for s in suites {
        let (default_orders, default_trials) =
            verify::suite_defaults(s).ok_or_else(|| usage(format!("unknown suite `{s}`; known: {}", verify::SUITES.join(", "))))?;
        let orders: Vec<usize> = match orders {
            Some(r) => {
                let (a, b) = parse_range(r)?;
                if a < 2 {
                    bail!(usage("N must be at least 2"));
                }
                (a as usize..=b as usize).collect()
            }
            None => default_orders,
        };
        let mut cfg = SuiteConfig::new(orders, trials.unwrap_or(default_trials), seed);
        cfg.all_r = all_r;
        let out = verify::run_suite(s, &cfg)?;
        for c in &out.checks {
            rep.push(format!("{s}/{}", c.name), c.passed, format!("{} instances, {} failures", c.instances, c.failures));
        }
        reproducers.extend(out.reproducers);
    }
    if timing {
        rep.timing_ms = Some(start.elapsed().as_millis());
    }
    if !reproducers.is_empty() {
        let path = dir.join(format!("ndgtool-reproducer-{suite}-{seed}.json"));
        let body = serde_json::to_string_pretty(&reproducers)?;
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        rep.push("reproducer", false, path.display().to_string());
    }
    Ok(())
}

fn run(cli: &Cli, rep: &mut Report) -> Result<()> {
    match &cli.command {
        Command::Check { file } => match Workspace::load(file) {
            Ok(ws) => check(&ws, rep),
            Err(e @ ndg::Error::Invalid { .. }) => rep.push("load", false, e.to_string()),
            Err(e) => bail!(usage(format!("{}: {e}", file.display()))),
        },
        Command::Homology { file, complex, window } => homology(&load(file)?, complex, window.as_deref(), rep)?,
        Command::Cone { file, map } => cone(&load(file)?, map, rep)?,
        Command::Contract { file, complex } => contract(&load(file)?, complex, rep)?,
        Command::Homspace { file, source, target } => homspace(&load(file)?, source, target, rep)?,
        Command::Khom { file, source, target, n, flavor } => khom(&load(file)?, source, target, *n, *flavor, rep)?,
        Command::Adjoint { file, x, bimodule, y } => adjoint(&load(file)?, x, bimodule, y, rep)?,
        Command::Verify { suite, orders, trials, seed, all_r, timing, reproducer_dir } => {
            run_verify(suite, orders.as_deref(), *trials, *seed, *all_r, *timing, reproducer_dir, rep)?
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut rep = Report::new(std::env::args().skip(1).collect());
    match run(&cli, &mut rep) {
        Ok(()) => {
            let text = match cli.format {
                Format::Json => rep.to_json() + "\n",
                Format::Tsv => rep.to_tsv(),
            };
            print!("{text}");
            if rep.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
