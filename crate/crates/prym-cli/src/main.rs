//! `prym` — exact certification of relative Prym varieties over rational
//! surface quotients of K3 double covers.
//!
//! Divisor coefficients are given as `a,b1,...,b_{9-d}` meaning
//! `aH - b1 E1 - ... (note the minus signs)`; `p2` takes the single
//! coefficient `a`.
//!
//! Exit codes: 0 = certified / all golden rows match, 1 = inconclusive or
//! golden mismatch, 2 = input error.

use std::collections::HashSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use prym_core::catalog::{
    make_record, parse_surface_id, run_golden, self_check, surface_id, CatalogRecord,
};
use prym_core::effective::classify_positivity;
use prym_core::homology::{
    anti_invariant_sublattice, build_model, generates_anti_invariant, parity_obstruction,
    GenerationVerdict, ParityObstruction,
};
use prym_core::lattice::DivisorClass;
use prym_core::surface::{make_surface, SurfaceModel};

#[derive(Parser)]
#[command(name = "prym", version, about = "Certify relative Prym varieties by exact lattice arithmetic", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Jsonl,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full hypothesis checklist on one divisor class
    Check {
        /// Surface: p2 or dp1..dp8
        #[arg(long)]
        surface: String,
        /// Coefficients a,b1,...  for aH - sum b_i E_i (just a on p2)
        #[arg(long)]
        divisor: String,
        /// Multiplier: the class checked is n*C
        #[arg(long, default_value_t = 1)]
        n: i128,
        /// Discharge the hyperelliptic clause externally (only relevant
        /// when B^2 <= 0, which does not occur on the supported surfaces)
        #[arg(long)]
        assert_non_hyperelliptic: bool,
        /// Human-readable table instead of JSON
        #[arg(long, conflicts_with = "json")]
        human: bool,
        /// JSON output (default)
        #[arg(long)]
        json: bool,
    },
    /// Sweep a divisor grid and append certified records to a catalog
    Search {
        #[arg(long)]
        surface: String,
        /// Upper bound for the H-coefficient a
        #[arg(long)]
        max_a: i128,
        /// Multipliers 1..=N for each ample class
        #[arg(long, default_value_t = 1)]
        max_n: i128,
        /// Output path (appended; existing records are not duplicated)
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: PRYM_JOBS or all cores)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Jsonl)]
        format: OutputFormat,
    },
    /// Reproduce the pinned example table and compare
    Catalog,
    /// Inspect the homology model of a double cover of curves
    Homology {
        /// Genus of the base curve
        #[arg(long)]
        l: i64,
        /// Half the number of extra branch points: C.B = 2m + 2
        #[arg(long)]
        m: i64,
        /// Test that the vanishing-cycle images generate the
        /// anti-invariant sublattice
        #[arg(long)]
        generation_test: bool,
        /// Report the parity of the anti-invariant intersection form
        #[arg(long)]
        parity: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Check { surface, divisor, n, assert_non_hyperelliptic, human, json: _ } => {
            cmd_check(&surface, &divisor, n, assert_non_hyperelliptic, human)
        }
        Command::Search { surface, max_a, max_n, out, jobs, format } => {
            cmd_search(&surface, max_a, max_n, &out, jobs, format)
        }
        Command::Catalog => cmd_catalog(),
        Command::Homology { l, m, generation_test, parity } => {
            cmd_homology(l, m, generation_test, parity)
        }
    }
}

fn parse_divisor(t: &SurfaceModel, spec: &str) -> anyhow::Result<DivisorClass> {
    let coeffs: Vec<i128> = spec
        .split(',')
        .map(|s| s.trim().parse::<i128>())
        .collect::<Result<_, _>>()
        .map_err(|e| anyhow::anyhow!("bad divisor coefficient in '{spec}': {e}"))?;
    if coeffs.len() != t.rank() {
        anyhow::bail!(
            "divisor needs {} coefficients for {}, got {}",
            t.rank(),
            surface_id(t.kind),
            coeffs.len()
        );
    }
    Ok(t.class_from_ab(coeffs[0], &coeffs[1..])?)
}

fn cmd_check(
    surface: &str,
    divisor: &str,
    n: i128,
    assert_non_hyperelliptic: bool,
    human: bool,
) -> anyhow::Result<ExitCode> {
    let t = make_surface(parse_surface_id(surface)?)?;
    let c = parse_divisor(&t, divisor)?;
    if n < 1 {
        anyhow::bail!("--n must be >= 1");
    }
    let record = make_record(&t, &c, n, assert_non_hyperelliptic)?;
    if human {
        println!("surface:  {} (nikulin {:?})", record.surface.kind, record.surface.nikulin);
        println!(
            "divisor:  a={} b={:?} n={}",
            record.divisor.a, record.divisor.b, record.divisor.n
        );
        let num = &record.numerics;
        println!(
            "numerics: C^2={} C.B={} g(C)={} g(D)={} dim|C|{}{} prymDim={}",
            num.c2,
            num.cb,
            num.genus_c,
            num.genus_d,
            if num.dim_lin_sys_exact { "=" } else { ">=" },
            num.dim_lin_sys,
            num.prym_dim
        );
        for (name, outcome) in &record.checks {
            println!("  {name:<20} {:<13} {}", outcome.status, outcome.detail);
        }
        println!("verdict:  {}", record.verdict);
    } else {
        println!("{}", serde_json::to_string(&record)?);
    }
    Ok(if record.verdict == "IrreducibleSymplectic" {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn record_key(r: &CatalogRecord) -> (String, i128, Vec<i128>, i128) {
    let mut b = r.divisor.b.clone();
    b.sort_unstable_by(|x, y| y.cmp(x));
    (r.surface.kind.clone(), r.divisor.a, b, r.divisor.n)
}

fn cmd_search(
    surface: &str,
    max_a: i128,
    max_n: i128,
    out: &PathBuf,
    jobs: Option<usize>,
    format: OutputFormat,
) -> anyhow::Result<ExitCode> {
    let t = make_surface(parse_surface_id(surface)?)?;
    let jobs = jobs
        .or_else(|| std::env::var("PRYM_JOBS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;

    // grid: a ascending, b-vectors non-increasing (normalized form) in
    // lexicographic order, multipliers ascending; only ample classes are
    // certified
    let mut grid: Vec<(DivisorClass, i128)> = Vec::new();
    for a in 0..=max_a {
        for b in descending_tuples(t.rank() - 1, a) {
            let c = t.class_from_ab(a, &b)?;
            if classify_positivity(&t, &c).ample {
                for n in 1..=max_n {
                    grid.push((c.clone(), n));
                }
            }
        }
    }
    let records: Vec<CatalogRecord> = pool.install(|| {
        grid.par_iter()
            .map(|(c, n)| make_record(&t, c, *n, false).expect("grid classes are ample"))
            .collect::<Vec<_>>()
    });
    for r in &records {
        let diffs = self_check(r)?;
        if !diffs.is_empty() {
            anyhow::bail!("catalog self-check failed for {:?}: {diffs:?}", r.divisor);
        }
    }

    let mut seen: HashSet<(String, i128, Vec<i128>, i128)> = HashSet::new();
    if format == OutputFormat::Jsonl && out.exists() {
        let existing = std::fs::read_to_string(out)?;
        for line in existing.lines().filter(|l| !l.trim().is_empty()) {
            let r: CatalogRecord = serde_json::from_str(line)?;
            seen.insert(record_key(&r));
        }
    }
    let fresh: Vec<&CatalogRecord> =
        records.iter().filter(|r| seen.insert(record_key(r))).collect();

    match format {
        OutputFormat::Jsonl => {
            let mut f = std::fs::OpenOptions::new().create(true).append(true).open(out)?;
            for r in &fresh {
                writeln!(f, "{}", serde_json::to_string(r)?)?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_path(out)?;
            w.write_record([
                "schemaVersion",
                "surface",
                "a",
                "b",
                "n",
                "c2",
                "cb",
                "genusC",
                "genusD",
                "dimLinSys",
                "prymDim",
                "verdict",
                "toolVersion",
            ])?;
            for r in &fresh {
                let b = r.divisor.b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                w.write_record([
                    r.schema_version.to_string(),
                    r.surface.kind.clone(),
                    r.divisor.a.to_string(),
                    b,
                    r.divisor.n.to_string(),
                    r.numerics.c2.to_string(),
                    r.numerics.cb.to_string(),
                    r.numerics.genus_c.to_string(),
                    r.numerics.genus_d.to_string(),
                    r.numerics.dim_lin_sys.to_string(),
                    r.numerics.prym_dim.to_string(),
                    r.verdict.clone(),
                    r.tool_version.clone(),
                ])?;
            }
            w.flush()?;
        }
    }
    eprintln!("wrote {} new record(s) to {}", fresh.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

/// All b-vectors of the given length with a >= b_1 >= ... >= b_k >= 0.
fn descending_tuples(len: usize, a: i128) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    let mut cur = vec![0i128; len];
    fn rec(cur: &mut Vec<i128>, idx: usize, max: i128, out: &mut Vec<Vec<i128>>) {
        if idx == cur.len() {
            out.push(cur.clone());
            return;
        }
        // descending lexicographic start keeps the overall order stable
        let mut v = max;
        while v >= 0 {
            cur[idx] = v;
            rec(cur, idx + 1, v, out);
            v -= 1;
        }
    }
    rec(&mut cur, 0, a, &mut out);
    out.sort();
    out
}

fn cmd_catalog() -> anyhow::Result<ExitCode> {
    let results = run_golden()?;
    println!(
        "{:<28} {:>8} {:>8}  {:<22} {:<22} {}",
        "example", "exp.dim", "dim", "expected", "computed", "match"
    );
    let mut failures = 0;
    for r in &results {
        let expected = if r.row.expect_certified { "IrreducibleSymplectic" } else { "Inconclusive" };
        let computed_short =
            if r.computed_verdict.starts_with("IrreducibleSymplectic") { "IrreducibleSymplectic" } else { "Inconclusive" };
        println!(
            "{:<28} {:>8} {:>8}  {:<22} {:<22} {}",
            r.row.id,
            r.row.expected_dim,
            r.computed_dim,
            expected,
            computed_short,
            if r.matches { "ok" } else { "MISMATCH" }
        );
        if !r.matches {
            failures += 1;
            eprintln!("deviation: {} -> {}", r.row.id, r.computed_verdict);
        }
    }
    if failures == 0 {
        println!("all {} rows match", results.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{failures} row(s) deviate");
        Ok(ExitCode::from(1))
    }
}

fn cmd_homology(l: i64, m: i64, generation_test: bool, parity: bool) -> anyhow::Result<ExitCode> {
    let model = build_model(l, m)?;
    let anti = anti_invariant_sublattice(&model);
    let mut report = serde_json::json!({
        "l": l,
        "m": m,
        "rank": model.rank(),
        "genus": model.genus(),
        "fixedPoints": model.fixed_points(),
        "antiInvariantRank": anti.len(),
    });
    if parity {
        report["parity"] = match parity_obstruction(&model) {
            ParityObstruction::EvenForm => serde_json::json!({ "kind": "EvenForm" }),
            ParityObstruction::OddPairingWitness(x, y, v) => serde_json::json!({
                "kind": "OddPairingWitness",
                "x": x.coords,
                "y": y.coords,
                "value": v,
            }),
        };
    }
    if generation_test {
        // images of the anti-invariant basis under the two kinds of
        // Picard-Lefschetz twists
        let mut images = Vec::new();
        for k in 1..=2 * model.m {
            let alpha = model.delta(k);
            for c in &anti {
                images.push(alpha.scale(model.pair(c, &alpha)?));
            }
        }
        for j in 1..=2 * model.l {
            let alpha = model.beta(j);
            let ialpha = model.apply_involution(&alpha)?;
            for c in &anti {
                images.push(alpha.sub(&ialpha).scale(model.pair(c, &alpha)?));
            }
        }
        images.retain(|x| !x.is_zero());
        report["generationTest"] = match generates_anti_invariant(&model, &images)? {
            GenerationVerdict::Generates => serde_json::json!({ "kind": "Generates" }),
            GenerationVerdict::FiniteIndex(ix) => {
                serde_json::json!({ "kind": "FiniteIndex", "index": ix })
            }
            GenerationVerdict::InfiniteIndex { rank, expected } => {
                serde_json::json!({ "kind": "InfiniteIndex", "rank": rank, "expected": expected })
            }
        };
    }
    println!("{}", serde_json::to_string(&report)?);
    Ok(ExitCode::SUCCESS)
}
