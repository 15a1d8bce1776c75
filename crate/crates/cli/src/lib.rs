//! Command-line front end: argument parsing and dispatch to the library.
//!
//! Every command returns an [`Outcome`] with an exit code (0 success, 1
//! mathematical failure, 2 configuration or resource error), a JSON report and
//! a text rendering. The JSON never contains timings, so equal configurations
//! give byte-identical output.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use e510::catalog::{self, CatalogFamily, Tag};
use e510::omega::{self, SuiteResult};
use e510::search::{self, SearchOptions, SingularCertificate, DEFAULT_CEILING, DEFAULT_DIM_CAP};
use e510::selftest;
use e510::{s5, Error, Result, Weight};

/// Degrees from which a search needs `--long`.
pub const LONG_DEGREE: u32 = 12;

#[derive(Parser, Debug)]
#[command(name = "e510", version, about = "Singular vectors and morphisms of finite Verma modules over E(5,10)")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for parallel cells.
    #[arg(long, env = "E510_THREADS", global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Omega,
    Random,
    FirstPair,
    FormAction,
    Commutator,
    Fundamental,
    Chain,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check catalog members with the full g₁ test.
    VerifyCatalog {
        /// Family tag (1A, 2BA, 4E, 11, ...) or `all`.
        #[arg(long, default_value = "all")]
        family: String,
        #[arg(long, default_value = "0..2", value_parser = parse_range)]
        m: RangeInclusive<u32>,
        #[arg(long, default_value = "0..2", value_parser = parse_range)]
        n: RangeInclusive<u32>,
    },
    /// Singular vectors of M(μ) of the given degrees.
    Search {
        #[arg(long)]
        mu: Weight,
        /// A degree `d` or an inclusive range `a..b`.
        #[arg(long, value_parser = parse_range)]
        degree: RangeInclusive<u32>,
        /// Only this weight λ.
        #[arg(long)]
        weight: Option<Weight>,
        #[arg(long)]
        prune_height: bool,
        /// Check kernel vectors against the five generators only, not all of g₁.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        dim_cap: usize,
        /// Per-weight progress file; resumed if it exists.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: u32,
        /// Allow degrees of 12 and above.
        #[arg(long)]
        long: bool,
    },
    /// ω-identity and fundamental-equation suites.
    Identities {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        max_d: usize,
        /// Number of random tuples for the random suite.
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long, default_value_t = 510)]
        seed: u64,
    },
    /// Jacobi, associativity, g₁, U₋ dimensions and Weyl dimensions.
    Selftest {
        #[arg(long, default_value_t = 10_000)]
        random: usize,
        #[arg(long, default_value_t = 510)]
        seed: u64,
        /// Largest dim F(λ) that is actually constructed.
        #[arg(long, default_value_t = selftest::DEFAULT_WEYL_BUILD_CAP)]
        weyl_cap: u64,
    },
    /// Compositions of catalog morphisms.
    Complexes {
        #[arg(long, default_value_t = 2)]
        max_param: u32,
    },
    /// Duality partners of certificates.
    Dual {
        /// JSON list of certificates, as written by `search --format json`.
        #[arg(long, conflicts_with_all = ["mu", "degree"])]
        from_certs: Option<PathBuf>,
        #[arg(long, requires = "degree")]
        mu: Option<Weight>,
        #[arg(long, value_parser = parse_range)]
        degree: Option<RangeInclusive<u32>>,
    },
    /// The S₅ baseline search.
    S5,
    /// Search every dominant μ with coordinate sum ≤ budget and compare with the catalog.
    Sweep {
        #[arg(long, default_value_t = 3)]
        budget: i32,
        #[arg(long, default_value_t = 4)]
        degree_max: u32,
    },
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u32>, String> {
    let bad = |_| format!("expected N or A..B, got {s:?}");
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse().map_err(bad)?, b.trim().trim_start_matches('=').parse().map_err(bad)?);
            if a > b {
                return Err(format!("empty range {s:?}"));
            }
            Ok(a..=b)
        }
        None => {
            let d = s.trim().parse().map_err(bad)?;
            Ok(d..=d)
        }
    }
}

/// Result of a command.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub text: String,
}

impl Outcome {
    fn new(ok: bool, report: Value, text: String) -> Self {
        Outcome { code: if ok { 0 } else { 1 }, report, text }
    }

    /// What goes to stdout for the given format.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.report).unwrap_or_default(),
            Format::Text => self.text.clone(),
        }
    }
}

fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if cli.threads == Some(0) {
        return config("--threads must be positive");
    }
    let out = with_threads(cli.threads, || dispatch(cli))??;
    if let Some(path) = &cli.output {
        std::fs::write(path, serde_json::to_string_pretty(&out.report)? + "\n")?;
    }
    Ok(out)
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    Ok(match &cli.command {
        Command::VerifyCatalog { family, m, n } => verify_catalog(family, m, n)?,
        Command::Search { mu, degree, weight, prune_height, quick, dim_cap, checkpoint, ceiling, long } => {
            let opts = SearchOptions {
                dim_cap: *dim_cap,
                full_g1: !quick,
                prune_height: *prune_height,
                checkpoint: checkpoint.clone(),
                threads: cli.threads,
            };
            search_cmd(mu, degree, *weight, &opts, *ceiling, *long)?
        }
        Command::Identities { suite, max_d, random, seed } => identities(*suite, *max_d, *random, *seed)?,
        Command::Selftest { random, seed, weyl_cap } => selftest_cmd(*random, *seed, *weyl_cap),
        Command::Complexes { max_param } => complexes(*max_param)?,
        Command::Dual { from_certs, mu, degree } => {
            let opts = SearchOptions { threads: cli.threads, ..Default::default() };
            dual(from_certs.as_ref(), *mu, degree.clone(), &opts)?
        }
        Command::S5 => s5_cmd()?,
        Command::Sweep { budget, degree_max } => {
            let opts = SearchOptions { threads: cli.threads, ..Default::default() };
            sweep(*budget, *degree_max, &opts)?
        }
    })
}

fn verify_catalog(family: &str, m: &RangeInclusive<u32>, n: &RangeInclusive<u32>) -> Result<Outcome> {
    let tags: Vec<Tag> = if family.eq_ignore_ascii_case("all") {
        Tag::ALL.to_vec()
    } else {
        vec![family.parse()?]
    };
    let ms: Vec<u32> = m.clone().collect();
    let ns: Vec<u32> = n.clone().collect();
    let reports = catalog::verify_grid(&tags, &ms, &ns)?;
    if reports.is_empty() {
        return config("no catalog member in the requested parameter range");
    }
    let ok = reports.iter().all(|r| r.passed());
    let mut text = String::new();
    for r in &reports {
        let f = &r.family;
        text += &format!(
            "{:<14} M({}) <- M({}) degree {:>2} height {:>2} terms {:>3}  {}\n",
            r.label,
            f.mu,
            f.weight,
            f.degree,
            r.height.map(|h| h.to_string()).unwrap_or_else(|| "-".into()),
            r.terms,
            if r.passed() { "PASS" } else { "FAIL" }
        );
        if !r.failing_generators.is_empty() {
            text += &format!("    failing generators: {}\n", r.failing_generators.join(", "));
        }
    }
    text += &format!("{} of {} members pass\n", reports.iter().filter(|r| r.passed()).count(), reports.len());
    Ok(Outcome::new(ok, json!({"families": reports, "all_pass": ok}), text))
}

/// Runs `f` on a pool of the given size, or on the global pool.
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Resource(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn search_cmd(
    mu: &Weight,
    degrees: &RangeInclusive<u32>,
    weight: Option<Weight>,
    opts: &SearchOptions,
    ceiling: u32,
    long: bool,
) -> Result<Outcome> {
    if *degrees.start() == 0 {
        return config("degree must be positive");
    }
    if *degrees.end() > ceiling {
        return config(format!("degree {} exceeds the ceiling {ceiling}", degrees.end()));
    }
    if *degrees.end() >= LONG_DEGREE && !long {
        return config(format!("degree {} needs --long", degrees.end()));
    }
    let module = catalog::module(mu)?;
    let mut certs: Vec<SingularCertificate> = Vec::new();
    for d in degrees.clone() {
        let mut o = opts.clone();
        if let (Some(path), true) = (&opts.checkpoint, degrees.start() != degrees.end()) {
            o.checkpoint = Some(path.with_extension(format!("d{d}.json")));
        }
        certs.extend(search::find_singular_vectors(&module, d, weight, &o)?);
    }
    let mut text = format!("M({mu}), degrees {}..{}: {} certificate(s)\n", degrees.start(), degrees.end(), certs.len());
    for c in &certs {
        text += &format!("degree {} weight {} kernel dimension {}\n", c.degree, c.weight, c.kernel_dim);
        for v in c.elements()? {
            text += &format!("  {}\n", module.format(&v));
        }
    }
    Ok(Outcome::new(true, serde_json::to_value(&certs)?, text))
}

/// The θ families of the morphisms used by the fundamental-equation suites.
pub fn fundamental_thetas() -> Result<Vec<(String, omega::ThetaFamily)>> {
    let mut out = Vec::new();
    for (tag, m) in [(Tag::A1, 0), (Tag::D4, 0), (Tag::W7, 0), (Tag::W11, 0)] {
        let f = CatalogFamily::new(tag, m, 0)?;
        let module = catalog::module(&f.mu)?;
        let w = catalog::known_vector(&f)?;
        out.push((f.label(), omega::reconstruct_theta(&module, &w, &f.weight)?));
    }
    Ok(out)
}

fn identities(suite: Suite, max_d: usize, random: usize, seed: u64) -> Result<Outcome> {
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let mut results: Vec<SuiteResult> = Vec::new();
    if wants(Suite::Omega) {
        results.push(omega::definitions_suite(max_d));
    }
    if wants(Suite::Random) {
        results.push(omega::random_definitions_suite(random, seed));
    }
    if wants(Suite::FirstPair) {
        results.push(omega::first_pair_suite(max_d));
    }
    if wants(Suite::FormAction) {
        results.push(omega::form_action_suite(max_d));
    }
    if wants(Suite::Commutator) {
        let module = catalog::module(&Weight::new(1, 0, 0, 0))?;
        results.push(omega::commutator_suite(max_d, &module));
    }
    if wants(Suite::Fundamental) || wants(Suite::Chain) {
        let thetas = fundamental_thetas()?;
        if wants(Suite::Fundamental) {
            for (name, theta) in &thetas {
                results.push(omega::fundamental_suite(&format!("fundamental {name}"), theta));
            }
        }
        if wants(Suite::Chain) {
            let (_, w7) = thetas.iter().find(|(n, _)| n == "7").ok_or_else(|| Error::Domain("no degree-7 θ".into()))?;
            results.push(omega::degree_seven_chain(w7));
        }
    }
    Ok(suites_outcome(results))
}

fn suites_outcome(results: Vec<SuiteResult>) -> Outcome {
    let ok = results.iter().all(|r| r.passed());
    let mut text = String::new();
    for r in &results {
        text += &format!("{:<24} {:>7} checks  {}\n", r.suite, r.checked, if r.passed() { "PASS" } else { "FAIL" });
        for f in r.failures.iter().take(10) {
            text += &format!("    {f}\n");
        }
    }
    Outcome::new(ok, json!({"suites": results, "all_pass": ok}), text)
}

fn selftest_cmd(random: usize, seed: u64, weyl_cap: u64) -> Outcome {
    let mut out = suites_outcome(vec![
        selftest::jacobi_suite(random, seed),
        selftest::associativity_suite(random / 5, seed),
        selftest::g1_suite(),
        selftest::uminus_dimension_suite(8),
    ]);
    let weyl = selftest::weyl_suite(3, weyl_cap);
    out.text += &format!(
        "{:<24} {:>7} weights  Gelfand-Tsetlin {}/{}, constructed {}/{} (dim <= {})  {}\n",
        "weyl",
        weyl.weights,
        weyl.counted,
        weyl.weights,
        weyl.built,
        weyl.weights,
        weyl.build_cap,
        if weyl.passed() { "PASS" } else { "FAIL" }
    );
    for f in &weyl.failures {
        out.text += &format!("    {f}\n");
    }
    let ok = out.code == 0 && weyl.passed();
    out.report["weyl"] = serde_json::to_value(&weyl).unwrap_or(Value::Null);
    out.report["all_pass"] = json!(ok);
    out.code = if ok { 0 } else { 1 };
    out
}

fn complexes(max_param: u32) -> Result<Outcome> {
    let (records, report) = catalog::complexes_report(max_param)?;
    let ok = records.iter().all(|r| r.ok());
    let mut text = String::new();
    for r in &records {
        text += &format!(
            "{} after {}: M({}) -> M({}) -> M({}) degree {}  {:?}{}\n",
            r.second,
            r.first,
            r.source,
            r.middle,
            r.target,
            r.degree,
            r.status,
            r.named.as_ref().map(|n| format!(" = {n}")).unwrap_or_default()
        );
    }
    let origin = &report["origin_sequence"];
    text += &format!("origin sequence: {} (reported, not asserted)\n", origin["status"].as_str().unwrap_or("?"));
    text += &format!("{} of {} compositions as expected\n", records.iter().filter(|r| r.ok()).count(), records.len());
    Ok(Outcome::new(ok, report, text))
}

fn dual(
    from_certs: Option<&PathBuf>,
    mu: Option<Weight>,
    degree: Option<RangeInclusive<u32>>,
    opts: &SearchOptions,
) -> Result<Outcome> {
    let certs: Vec<SingularCertificate> = match (from_certs, mu, degree) {
        (Some(path), _, _) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        (None, Some(mu), Some(degree)) => {
            let module = catalog::module(&mu)?;
            let mut v = Vec::new();
            for d in degree {
                v.extend(search::find_singular_vectors(&module, d, None, opts)?);
            }
            v
        }
        _ => return config("dual needs --from-certs or --mu with --degree"),
    };
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut ok = true;
    for c in &certs {
        if c.algebra != "E510" {
            return config(format!("certificate for algebra {:?} has no E(5,10) dual", c.algebra));
        }
        let found = search::dual_pair_check(c, opts)?;
        ok &= found;
        text += &format!(
            "M({}) -> M({}) degree {}: partner M({}) -> M({}) {}\n",
            c.weight,
            c.mu,
            c.degree,
            c.mu.dual(),
            c.weight.dual(),
            if found { "found" } else { "MISSING" }
        );
        rows.push(json!({
            "mu": c.mu, "weight": c.weight, "degree": c.degree,
            "dual_mu": c.weight.dual(), "dual_weight": c.mu.dual(), "found": found,
        }));
    }
    text += &format!("{} certificate(s) checked\n", certs.len());
    Ok(Outcome::new(ok, json!({"pairs": rows, "all_found": ok}), text))
}

fn s5_cmd() -> Result<Outcome> {
    let report = s5::baseline_report()?;
    let ok = report["pass"].as_bool().unwrap_or(false);
    let mut text = String::new();
    for f in report["found"].as_array().into_iter().flatten() {
        let (lambda, weight): (Weight, Weight) =
            (serde_json::from_value(f["lambda"].clone())?, serde_json::from_value(f["weight"].clone())?);
        text += &format!("{}: M({weight}) -> M({lambda}) degree {}\n", f["name"].as_str().unwrap_or("?"), f["degree"]);
    }
    for u in report["unexplained"].as_array().into_iter().flatten() {
        text += &format!("unexplained: {u}\n");
    }
    for m in report["missing"].as_array().into_iter().flatten() {
        text += &format!("missing: {m}\n");
    }
    text += if ok { "S5 baseline PASS\n" } else { "S5 baseline FAIL\n" };
    Ok(Outcome::new(ok, report, text))
}

fn sweep(budget: i32, degree_max: u32, opts: &SearchOptions) -> Result<Outcome> {
    if budget < 0 || degree_max == 0 {
        return config("sweep needs budget >= 0 and degree-max >= 1");
    }
    if degree_max >= LONG_DEGREE {
        return config(format!("degree {degree_max} needs the search command with --long"));
    }
    let (report, cells) = catalog::classification_sweep(budget, degree_max, opts)?;
    let ok = report.clean();
    let nonempty = cells.iter().filter(|c| !c.certificates.is_empty()).count();
    let mut text = format!(
        "{} cells searched, {} with singular vectors, {} matched\n",
        cells.len(),
        nonempty,
        report.matched.len()
    );
    for (mu, lambda, d, label) in &report.matched {
        text += &format!("  {label:<14} M({mu}) <- M({lambda}) degree {d}\n");
    }
    for (mu, lambda, d, k) in &report.unexplained {
        text += &format!("  unexplained: M({mu}) weight {lambda} degree {d} kernel {k}\n");
    }
    for m in &report.missing {
        text += &format!("  missing: {m}\n");
    }
    for (mu, d, e) in &report.errors {
        text += &format!("  error: M({mu}) degree {d}: {e}\n");
    }
    Ok(Outcome::new(ok, json!({"report": report, "cells": cells}), text))
}
