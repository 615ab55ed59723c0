use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use bpp::enumerate::{
    enumerate_bpps, exact_moments_bruteforce, exact_moments_dp, sum_distribution, ExactMoments,
    DEFAULT_DP_BUDGET, DEFAULT_ENUM_CAP,
};
use bpp::genfunc::{q_macmahon_with_cap, stanley_check, stanley_coefficients, DEFAULT_DEGREE_CAP};
use bpp::render::{render_svg, RenderOptions};
use bpp::sample::{cftp_sample, cftp_sample_with, derive_seed, mcmc_chain, CftpConfig, ChainStart};
use bpp::stats::{compare_to_formula, monte_carlo_moments, SamplerKind, DEFAULT_Z_THRESHOLD};
use bpp::{io, verify, BoxDims};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "bpp",
    version,
    about = "Diagonal sums of random boxed plane partitions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleMethod {
    Cftp,
    Mcmc,
}

#[derive(Clone, Copy, ValueEnum)]
enum MomentsMethod {
    Formula,
    Enumerate,
    Dp,
    Mc,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one partition.
    Sample {
        #[arg(long, value_parser = parse_dims)]
        dims: BoxDims,
        #[arg(long, value_parser = parse_seed, default_value = "0")]
        seed: u64,
        #[arg(long, value_enum, default_value = "cftp")]
        method: SampleMethod,
        /// Heat-bath sweeps for `--method mcmc`.
        #[arg(long, default_value_t = 1000)]
        sweeps: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List every partition in the box, one JSON object per line.
    Enumerate {
        #[arg(long, value_parser = parse_dims)]
        dims: BoxDims,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: u64,
        /// Print only the number of partitions.
        #[arg(long)]
        count: bool,
    },
    /// Means and covariances of the diagonal sums.
    Moments {
        #[arg(long, value_parser = parse_dims)]
        dims: BoxDims,
        #[arg(long, value_enum)]
        method: MomentsMethod,
        #[arg(long, default_value_t = 10_000)]
        n: u64,
        #[arg(long, value_parser = parse_seed, default_value = "0")]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_Z_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: u64,
        #[arg(long, default_value_t = DEFAULT_DP_BUDGET)]
        budget: u64,
    },
    /// Generating function of the total sum.
    Gf {
        #[arg(long, value_parser = parse_dims)]
        dims: BoxDims,
        /// Also compute the histogram by transfer matrix and require equality.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: u64,
        #[arg(long, default_value_t = DEFAULT_DP_BUDGET)]
        budget: u64,
    },
    /// Truncated diagonal-variable generating function of a x b x infinity partitions.
    Stanley {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        max_degree: u32,
        /// Compare with a census of enumerated partitions.
        #[arg(long)]
        check: bool,
    },
    /// Write an SVG figure of a partition read from a text or JSON file.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_contours: bool,
        #[arg(long)]
        no_sums: bool,
        #[arg(long)]
        no_numbers: bool,
        #[arg(long, default_value_t = 24.0)]
        cell_size: f64,
    },
    /// Run the exact cross-check suite on every box up to the given size.
    Verify {
        #[arg(long, value_parser = parse_grid)]
        grid: (usize, usize, u32),
    },
    /// Coalescence-time statistics and throughput of the perfect sampler.
    Bench {
        #[arg(long, value_parser = parse_dims)]
        dims: BoxDims,
        #[arg(long, default_value_t = 100)]
        n: u64,
        #[arg(long, value_parser = parse_seed, default_value = "0")]
        seed: u64,
    },
}

fn parse_triple(s: &str) -> Result<(usize, usize, u32), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected a,b,c but got {s:?}"));
    }
    let a = parts[0]
        .parse()
        .map_err(|_| format!("bad a: {:?}", parts[0]))?;
    let b = parts[1]
        .parse()
        .map_err(|_| format!("bad b: {:?}", parts[1]))?;
    let c = parts[2]
        .parse()
        .map_err(|_| format!("bad c: {:?}", parts[2]))?;
    Ok((a, b, c))
}

fn parse_dims(s: &str) -> Result<BoxDims, String> {
    let (a, b, c) = parse_triple(s)?;
    BoxDims::new(a, b, c).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> Result<(usize, usize, u32), String> {
    let g = parse_triple(s)?;
    if g.0 == 0 || g.1 == 0 {
        return Err("grid bounds for a and b must be positive".into());
    }
    Ok(g)
}

/// Decimal or `0x`-prefixed hexadecimal.
fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|_| format!("bad seed {s:?}"))
}

fn configure_threads() {
    if let Some(n) = std::env::var("BPP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// `Ok(true)` on success, `Ok(false)` on a failed check.
fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Sample {
            dims,
            seed,
            method,
            sweeps,
            format,
        } => {
            let p = match method {
                SampleMethod::Cftp => cftp_sample(dims, seed)?,
                SampleMethod::Mcmc => mcmc_chain(dims, seed, sweeps, ChainStart::Bottom)?,
            };
            match format {
                Format::Text => print!("{}", io::to_text(&p)),
                Format::Json => println!("{}", io::to_json(&p)),
            }
            Ok(true)
        }
        Command::Enumerate { dims, cap, count } => {
            let iter = enumerate_bpps(dims, cap)?;
            if count {
                println!("{}", iter.count());
            } else {
                let mut out = BufWriter::new(std::io::stdout().lock());
                for p in iter {
                    writeln!(out, "{}", io::to_json(&p))?;
                }
                out.flush()?;
            }
            Ok(true)
        }
        Command::Moments {
            dims,
            method,
            n,
            seed,
            threshold,
            cap,
            budget,
        } => {
            let (moments, name) = match method {
                MomentsMethod::Formula => (ExactMoments::from_formulas(dims)?, "formula"),
                MomentsMethod::Enumerate => (exact_moments_bruteforce(dims, cap)?, "enumerate"),
                MomentsMethod::Dp => (exact_moments_dp(dims, budget)?, "dp"),
                MomentsMethod::Mc => {
                    let est = monte_carlo_moments(dims, n, seed, SamplerKind::Cftp)?;
                    let report = compare_to_formula(&est, threshold);
                    println!("{}", report.to_json());
                    for f in report.flagged() {
                        eprintln!("flagged: {f}");
                    }
                    return Ok(report.pass);
                }
            };
            println!("{}", moments.to_json(Some(name)));
            Ok(true)
        }
        Command::Gf {
            dims,
            check,
            format,
            degree_cap,
            budget,
        } => {
            let poly = q_macmahon_with_cap(dims, degree_cap)?;
            match format {
                Format::Text => println!("{poly}"),
                Format::Json => {
                    let coeffs: Vec<String> = poly.coeffs().iter().map(|c| c.to_string()).collect();
                    println!("{}", serde_json::to_string(&coeffs)?);
                }
            }
            if check {
                let hist = sum_distribution(dims, budget)?;
                if hist != poly {
                    eprintln!("check: FAIL (transfer-matrix histogram differs)");
                    return Ok(false);
                }
                eprintln!("check: pass");
            }
            Ok(true)
        }
        Command::Stanley {
            a,
            b,
            max_degree,
            check,
        } => {
            let table = stanley_coefficients(a, b, max_degree)?;
            println!("{}", table.to_json());
            if check {
                let ok = stanley_check(a, b, max_degree)?;
                eprintln!("check: {}", if ok { "pass" } else { "FAIL" });
                return Ok(ok);
            }
            Ok(true)
        }
        Command::Render {
            input,
            out,
            no_contours,
            no_sums,
            no_numbers,
            cell_size,
        } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let p = io::parse_any(&text)?;
            let opts = RenderOptions {
                cell_size,
                show_numbers: !no_numbers,
                show_contours: !no_contours,
                show_sums: !no_sums,
            };
            std::fs::write(&out, render_svg(&p, &opts))
                .with_context(|| format!("writing {}", out.display()))?;
            Ok(true)
        }
        Command::Verify { grid: (a, b, c) } => {
            let results = verify::run_suite(&verify::grid(a, b, c));
            println!("{:<36} {:>6} {:>9}  result", "check", "cases", "seconds");
            let mut ok = true;
            for r in &results {
                println!(
                    "{:<36} {:>6} {:>9.3}  {}",
                    r.name,
                    r.cases,
                    r.seconds,
                    if r.passed() { "PASS" } else { "FAIL" }
                );
                for f in &r.failures {
                    println!("    failed: {f}");
                }
                ok &= r.passed();
            }
            Ok(ok)
        }
        Command::Bench { dims, n, seed } => {
            if n == 0 {
                bail!("--n must be positive");
            }
            let start = Instant::now();
            let stats = (0..n)
                .into_par_iter()
                .map(|k| cftp_sample_with(dims, derive_seed(seed, k), CftpConfig::default()))
                .map(|r| r.map(|(_, s)| s))
                .collect::<Result<Vec<_>, _>>()?;
            let wall = start.elapsed().as_secs_f64();
            let mut t: Vec<u64> = stats.iter().map(|s| s.coalescence_t).collect();
            t.sort_unstable();
            let ticks: u64 = stats.iter().map(|s| s.ticks).sum();
            let mean_t = t.iter().map(|&x| x as f64).sum::<f64>() / n as f64;
            println!(
                "dims {dims}, {n} samples, {} threads",
                rayon::current_num_threads()
            );
            println!(
                "coalescence T: min {} median {} mean {:.1} max {}",
                t[0],
                t[t.len() / 2],
                mean_t,
                t[t.len() - 1]
            );
            println!(
                "coalescence T in sweeps (median): {:.2}",
                t[t.len() / 2] as f64 / dims.cells() as f64
            );
            println!("updates simulated per trajectory: {ticks}");
            println!("wall time {wall:.3} s, {:.1} samples/s", n as f64 / wall);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // downstream closed early, as with `| head`
        Err(e)
            if e.downcast_ref::<std::io::Error>()
                .is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
