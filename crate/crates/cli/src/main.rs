//! Operator front end: run verification suites, compute exact tables,
//! and export tensor dumps.
//!
//! Exit codes: 0 on success, 2 when a verification check fails, 3 on a
//! configuration error.

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use mshuffle_core::commuting::{h_element, p_element, s_element, z_n_trace};
use mshuffle_core::family::AlgebraTag;
use mshuffle_core::lattice::{enumerate, partition_function};
use mshuffle_core::point::{sample_point, SampleSpec};
use mshuffle_core::space::GradedSpace;
use mshuffle_core::suites::{run_suite, RunConfig, SUITE_NAMES};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mshuffle", version, about = "Exact engine for graded R-matrices, matrix shuffle products and commuting families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Bosonic rank. Omit both -n and -m to sweep the per-suite space lists.
    #[arg(long)]
    n: Option<usize>,
    /// Fermionic rank.
    #[arg(long)]
    m: Option<usize>,
    /// Width of the q-power window kept clear of sampled points.
    #[arg(long, default_value_t = 3)]
    kmax: i64,
    /// Size cap for traces and lattice enumeration.
    #[arg(long = "N", default_value_t = 3)]
    size_cap: usize,
    /// Truncation order for generating-series checks.
    #[arg(long, default_value_t = 3)]
    order: usize,
    /// Prime modulus (> 2^60).
    #[arg(long, default_value_t = mshuffle_core::field::DEFAULT_PRIME)]
    prime: u64,
    /// Use exact rationals instead of a prime field (small cases only).
    #[arg(long, default_value_t = false)]
    rational: bool,
    /// Master seed; every check derives its own substream from it.
    #[arg(long, default_value_t = 0xC0FFEE)]
    seed: u64,
    /// Trials per randomized equality.
    #[arg(long, default_value_t = 3)]
    trials: u32,
    /// Jet truncation order.
    #[arg(long = "jet-order", default_value_t = 6)]
    jet_order: usize,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit the JSON report.
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        /// One of the named suites, or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// Include the long-running variants (lattice size 3).
        #[arg(long, default_value_t = false)]
        extended: bool,
    },
    /// Evaluate an object at a seeded random point and dump it as JSON.
    Compute {
        #[command(flatten)]
        common: CommonOpts,
        /// One of: S, P, H, Z, lattice.
        object: String,
        /// Family index (1-based) for S, P, H.
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Tensor rank for S, P, H.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Base-boundary colors for the lattice (1-based digits, e.g. "11").
        #[arg(long)]
        alpha: Option<String>,
        /// Top-boundary colors for the lattice.
        #[arg(long)]
        beta: Option<String>,
        /// Also write a CSV of configuration counts (lattice only).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn write_output(out: &Option<PathBuf>, payload: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, payload).with_context(|| format!("writing {path:?}")),
        None => {
            std::io::stdout().write_all(payload.as_bytes())?;
            std::io::stdout().write_all(b"\n")?;
            Ok(())
        }
    }
}

fn to_run_config(common: &CommonOpts, suite: String, extended: bool) -> RunConfig {
    RunConfig {
        n: common.n,
        m: common.m,
        kmax: common.kmax,
        size_cap: common.size_cap,
        order: common.order,
        prime: common.prime,
        rational: common.rational,
        seed: common.seed,
        trials: common.trials,
        jet_order: common.jet_order,
        suite,
        extended,
    }
}

fn parse_colors(s: &str, dim: usize, expect_len: usize) -> anyhow::Result<Vec<usize>> {
    let word: Vec<usize> = s
        .chars()
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as usize)
                .filter(|&d| d >= 1 && d <= dim)
                .map(|d| d - 1)
                .context("boundary colors are 1-based digits within the label set")
        })
        .collect::<anyhow::Result<_>>()?;
    if word.len() != expect_len {
        anyhow::bail!("boundary word must have length {expect_len}");
    }
    Ok(word)
}

fn run_verify(common: CommonOpts, suite: String, extended: bool) -> anyhow::Result<ExitCode> {
    if suite != "all" && !SUITE_NAMES.contains(&suite.as_str()) {
        anyhow::bail!("unknown suite {suite}; valid: all, {}", SUITE_NAMES.join(", "));
    }
    let cfg = to_run_config(&common, suite, extended);
    let report = run_suite(&cfg).map_err(|e| anyhow::anyhow!("{e}"))?;
    let payload = serde_json::to_string_pretty(&report)?;
    write_output(&common.out, &payload)?;
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn run_compute(
    common: CommonOpts,
    object: String,
    i: usize,
    k: usize,
    alpha: Option<String>,
    beta: Option<String>,
    csv: Option<PathBuf>,
) -> anyhow::Result<ExitCode> {
    let cfg = to_run_config(&common, "all".into(), false);
    cfg.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
    cfg.apply_numeric_mode().map_err(|e| anyhow::anyhow!("{e}"))?;
    let n = common.n.unwrap_or(1);
    let m = common.m.unwrap_or(1);
    let space = GradedSpace::standard(n, m);
    let dim = space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let arity_needed = k.max(cfg.size_cap);
    let spec = SampleSpec::new(dim, arity_needed)
        .with_order(common.jet_order)
        .with_kmax(common.kmax);
    let pt = sample_point(&mut rng, spec).map_err(|e| anyhow::anyhow!("{e}"))?;
    let symbols = pt.symbol_table();

    let family_index = || -> anyhow::Result<usize> {
        if i == 0 || i > dim {
            anyhow::bail!("family index must lie in 1..={dim}");
        }
        Ok(i - 1)
    };

    let payload = match object.as_str() {
        "S" | "s" => {
            let e = s_element(&space, family_index()?, k).map_err(|e| anyhow::anyhow!("{e}"))?;
            let t = e.family.eval(&pt, &pt.zs[0..k]).map_err(|e| anyhow::anyhow!("{e}"))?;
            json!({"object": "S", "n": n, "m": m, "i": i, "k": k, "seed": common.seed,
                   "tensor": t.to_json(&symbols)})
        }
        "P" | "p" => {
            let e = p_element(&space, family_index()?, k).map_err(|e| anyhow::anyhow!("{e}"))?;
            let t = e.family.eval(&pt, &pt.zs[0..k]).map_err(|e| anyhow::anyhow!("{e}"))?;
            json!({"object": "P", "n": n, "m": m, "i": i, "k": k, "seed": common.seed,
                   "tensor": t.to_json(&symbols)})
        }
        "H" | "h" => {
            let e = h_element(&space, family_index()?, k, AlgebraTag::Plus)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let t = e.family.eval(&pt, &pt.zs[0..k]).map_err(|e| anyhow::anyhow!("{e}"))?;
            json!({"object": "H", "n": n, "m": m, "i": i, "k": k, "seed": common.seed,
                   "tensor": t.to_json(&symbols)})
        }
        "Z" | "z" => {
            let size = cfg.size_cap;
            let terms = z_n_trace(&space, size).map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut dumped = Vec::new();
            for (mono, elem) in terms {
                let t = elem
                    .family
                    .eval(&pt, &pt.zs[0..size])
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                dumped.push(json!({"u_monomial": mono.0, "tensor": t.to_json(&symbols)}));
            }
            json!({"object": "Z", "n": n, "m": m, "N": size, "seed": common.seed, "terms": dumped})
        }
        "lattice" => {
            let size = cfg.size_cap;
            let alpha = parse_colors(
                alpha.as_deref().context("lattice needs --alpha")?,
                dim,
                size,
            )?;
            let beta =
                parse_colors(beta.as_deref().context("lattice needs --beta")?, dim, size)?;
            let terms = partition_function(&pt, &space, size, &alpha, &beta)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            if let Some(csv_path) = csv {
                let configs = enumerate(&pt, &space, size, &alpha, &beta)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                let mut rows = String::from("seam,loops,weight\n");
                for c in &configs {
                    let seam: String =
                        c.seam.iter().map(|&s| (s + 1).to_string()).collect::<Vec<_>>().join("");
                    let loops = c.paths.iter().filter(|p| p.closed).count();
                    rows.push_str(&format!(
                        "{seam},{loops},{}\n",
                        mshuffle_core::tensor::encode_jet(&c.weight)
                    ));
                }
                std::fs::write(&csv_path, rows).with_context(|| format!("writing {csv_path:?}"))?;
            }
            let terms_json: Vec<_> = terms
                .iter()
                .map(|(mono, v)| {
                    json!({"u_monomial": mono.0, "value": mshuffle_core::tensor::encode_jet(v)})
                })
                .collect();
            let alpha_out: Vec<usize> = alpha.iter().map(|&c| c + 1).collect();
            let beta_out: Vec<usize> = beta.iter().map(|&c| c + 1).collect();
            json!({"object": "lattice", "n": n, "m": m, "N": size, "seed": common.seed,
                   "alpha": alpha_out, "beta": beta_out, "terms": terms_json})
        }
        other => anyhow::bail!("unknown object {other}; valid: S, P, H, Z, lattice"),
    };
    write_output(&common.out, &serde_json::to_string_pretty(&payload)?)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { common, suite, extended } => run_verify(common, suite, extended),
        Command::Compute { common, object, i, k, alpha, beta, csv } => {
            run_compute(common, object, i, k, alpha, beta, csv)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
