//! Command-line front end: parameter/setup generation, scenario demos,
//! the benchmark report, and offline transcript verification.
//!
//! Exit codes: 0 success, 1 verification failure, 2 config or usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use ckde::bench::{bench_run, BenchConfig};
use ckde::keying::{self, hash_to_scalar};
use ckde::pairing::PairingParams;
use ckde::simnet::{run_scenario, verify_transcript, ScenarioConfig, SimError};

/// Certificateless threshold key issuing: desk-scale simulator and bench.
#[derive(Parser)]
#[command(name = "ckde", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate pairing parameters, deal a shared master key, print JSON.
    Params {
        /// Target bit length of the field prime p.
        #[arg(long, default_value_t = 32)]
        bits: u64,
        /// Reconstruction threshold t.
        #[arg(long, default_value_t = 2)]
        threshold: usize,
        /// Number of share-holder nodes n.
        #[arg(long, default_value_t = 3)]
        nodes: usize,
        /// PRNG seed (CKDE_SEED overrides).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a scenario config and print its transcript as JSON lines.
    Demo {
        /// Scenario config file (JSON).
        #[arg(long)]
        config: PathBuf,
    },
    /// Time the unit operations against the baselines; write CSV.
    Bench {
        /// Timed iterations per algorithm (minimum 30).
        #[arg(long, default_value_t = 30)]
        iters: usize,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// PRNG seed (CKDE_SEED overrides).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-verify all recorded checks of a transcript file.
    Verify {
        /// Transcript file (JSON lines) produced by `demo`.
        #[arg(long)]
        transcript: PathBuf,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Params {
            bits,
            threshold,
            nodes,
            seed,
        } => cmd_params(bits, threshold, nodes, seed),
        Command::Demo { config } => cmd_demo(&config),
        Command::Bench { iters, out, seed } => cmd_bench(iters, &out, seed),
        Command::Verify { transcript } => cmd_verify(&transcript),
    };
    match code {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn effective_seed(flag: u64) -> Result<u64, String> {
    match std::env::var("CKDE_SEED") {
        Ok(text) if !text.is_empty() => text
            .parse::<u64>()
            .map_err(|_| format!("CKDE_SEED must be an unsigned integer, got {text:?}")),
        _ => Ok(flag),
    }
}

/// Holder names whose H2 images are pairwise distinct mod q; at desk-scale
/// q only a handful of residues exist, so names are scanned until enough
/// distinct ids turn up.
fn distinct_holder_names(params: &PairingParams, count: usize) -> Result<Vec<String>, String> {
    let scalar_field = params.scalar_field();
    let mut names = Vec::new();
    let mut ids = Vec::new();
    for index in 0..10_000u32 {
        if names.len() == count {
            return Ok(names);
        }
        let candidate = format!("holder-{index}");
        let id = hash_to_scalar(scalar_field, candidate.as_bytes());
        if ids.contains(&id) {
            continue;
        }
        ids.push(id);
        names.push(candidate);
    }
    Err(format!(
        "could not find {count} distinct holder ids mod q = {}",
        params.subgroup_order()
    ))
}

fn cmd_params(bits: u64, threshold: usize, nodes: usize, seed: u64) -> Result<u8, String> {
    let seed = effective_seed(seed)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let params = PairingParams::generate_with_rng(bits, &mut rng).map_err(|e| e.to_string())?;
    let holders = distinct_holder_names(&params, nodes)?;
    let (system, master, shares) = keying::setup_with_params(params, threshold, &holders, &mut rng)
        .map_err(|e| e.to_string())?;
    let pairing = system.pairing();
    let output = json!({
        "p": format!("{:x}", pairing.field().modulus()),
        "q": format!("{:x}", pairing.subgroup_order()),
        "r": format!("{:x}", pairing.aux_factor()),
        "cofactor": format!("{:x}", pairing.cofactor()),
        "curve": pairing.curve().encode(),
        "generator": pairing.generator().encode(),
        "p_pub": system.public_key().encode(),
        "threshold": threshold,
        "nodes": nodes,
        "h1": keying::H1_SPEC,
        "h2": keying::H2_SPEC,
        "seed": seed,
        "holders": holders,
        // one `<hex-id> <hex-s_V> <point>` line per holder, in holder order
        "shares": shares.iter().map(|s| s.encode()).collect::<Vec<_>>(),
        // simulation artifact: the dealt master key, for offline auditing
        "master_key_oracle": master.value().to_hex(),
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&output).expect("serializable")
    );
    Ok(EXIT_OK)
}

fn cmd_demo(config_path: &PathBuf) -> Result<u8, String> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| format!("cannot read {}: {e}", config_path.display()))?;
    let config = match ScenarioConfig::from_json(&text) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(EXIT_CONFIG);
        }
    };
    match run_scenario(&config) {
        Ok(transcript) => {
            print!("{}", transcript.to_jsonl());
            Ok(EXIT_OK)
        }
        Err(e @ SimError::ConfigInvalid { .. }) => {
            eprintln!("error: {e}");
            Ok(EXIT_CONFIG)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_bench(iters: usize, out: &PathBuf, seed: u64) -> Result<u8, String> {
    let seed = effective_seed(seed)?;
    let config = BenchConfig {
        iterations: iters,
        seed,
        ..BenchConfig::default()
    };
    let report = match bench_run(&config) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(EXIT_CONFIG);
        }
    };
    let csv = report.to_csv();
    std::fs::write(out, &csv).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
    println!(
        "wrote {} ({} rows, {} iterations each)",
        out.display(),
        report.rows.len(),
        iters
    );
    Ok(EXIT_OK)
}

fn cmd_verify(transcript_path: &PathBuf) -> Result<u8, String> {
    let text = std::fs::read_to_string(transcript_path)
        .map_err(|e| format!("cannot read {}: {e}", transcript_path.display()))?;
    match verify_transcript(&text) {
        Ok(report) => {
            println!(
                "transcript ok: {} records, {} checks re-verified",
                report.records, report.checks
            );
            Ok(EXIT_OK)
        }
        Err(e @ (SimError::ReplayMismatch { .. } | SimError::MalformedTranscript { .. })) => {
            eprintln!("verification failed: {e}");
            Ok(EXIT_VERIFY_FAILED)
        }
        Err(e) => Err(e.to_string()),
    }
}
