use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use hyperprobe::campaign::{run_config, HANDSHAKE_TIMEOUT};
use hyperprobe::config::{CampaignConfig, OracleSpec, Overrides, SuiteName, Suites, DEFAULT_TICK_QUANTUM_US};
use hyperprobe::report::{emit_report, to_canonical_json, EXIT_USAGE};
use hyperprobe::wire::ExternalOracle;
use hyperprobe_core::gni::format::parse_graph;
use hyperprobe_core::gni::{run_gni_protocol, GniPair, ProtocolVerdict};
use hyperprobe_core::omega::{dovetail, emit_bits, stage_line, CONVERGENCE_NOTE};
use hyperprobe_core::oracles;
use hyperprobe_core::proof::{bounded_decide, enumerate_derivations, parse_proof_system, UNDECIDABILITY_NOTE};
use hyperprobe_core::randomness::{run_battery, BatteryConfig, BitStream};
use hyperprobe_core::tm::format::parse_tm;
use hyperprobe_core::tm::{certify, LoopDetector};
use hyperprobe_core::{Oracle, OracleHandle};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hyperprobe", version, about = "Black-box falsification harness for claimed hypercomputers")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a campaign and write its JSON report.
    Run {
        /// TOML campaign file. Without one, every suite runs with defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// In-process oracle name or external command line.
        #[arg(long)]
        oracle: Option<String>,
        /// Restrict to these suites (repeatable).
        #[arg(long = "suite", value_enum)]
        suites: Vec<SuiteName>,
        #[arg(long)]
        seed: Option<u64>,
        /// Report path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timeout_ticks: Option<u64>,
    },
    /// Simulate one machine and try to certify its behaviour.
    Tm {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = oracles::REFERENCE_FUEL)]
        fuel: u64,
        #[arg(long, default_value_t = 1 << 16)]
        memory_cap: usize,
    },
    /// One run of the graph non-isomorphism protocol.
    Gni {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long, default_value = "honest-prover")]
        oracle: String,
        #[arg(long, default_value_t = 16)]
        rounds: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = hyperprobe::config::DEFAULT_TIMEOUT_TICKS)]
        timeout_ticks: u64,
    },
    /// Dovetailing stages of the toy machine's halting probability.
    Omega {
        #[arg(long, default_value_t = 16)]
        stages: u32,
        #[arg(long, default_value_t = 8)]
        bits: u32,
    },
    /// Stochasticity battery on a file of bits.
    Bits {
        file: PathBuf,
        /// Read raw bytes, most significant bit first, instead of `0`/`1` text.
        #[arg(long)]
        binary: bool,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        block_len: u32,
        #[arg(long, default_value_t = 4)]
        max_block: u32,
    },
    /// List P[k], the derivations of length at most k, of a proof system.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        /// Print every derivation.
        #[arg(long)]
        list: bool,
        /// Search for a proof of this string within `coeff * n^degree`.
        #[arg(long)]
        decide: Option<String>,
        #[arg(long, default_value_t = 1)]
        bound_coeff: usize,
        #[arg(long, default_value_t = 1)]
        bound_degree: u32,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn open_oracle(spec: &str, seed: u64) -> Result<Box<dyn Oracle + Send>> {
    match OracleSpec::parse(spec)? {
        OracleSpec::Name(n) => Ok(oracles::by_name(&n, seed).expect("parsed names are known")),
        OracleSpec::Command(argv) => Ok(Box::new(ExternalOracle::spawn(&argv, DEFAULT_TICK_QUANTUM_US, HANDSHAKE_TIMEOUT)?)),
    }
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Run { config, oracle, suites, seed, out, timeout_ticks } => {
            let mut cfg = match &config {
                Some(p) => CampaignConfig::from_toml(&read(p)?).with_context(|| format!("in {}", p.display()))?,
                None => CampaignConfig { seed: None, ..CampaignConfig::new(0, OracleSpec::default(), Suites::all()) },
            };
            let oracle = oracle.as_deref().map(OracleSpec::parse).transpose()?;
            cfg.apply(&Overrides { oracle, suites, seed, out, timeout_ticks });
            let report = run_config(&cfg)?;
            Ok(emit_report(&report, cfg.out.as_deref())?)
        }
        Cmd::Tm { file, input, fuel, memory_cap } => {
            let tm = parse_tm(&read(&file)?).with_context(|| file.display().to_string())?;
            let class = certify(&tm, &input, fuel, LoopDetector::with_memory_cap(memory_cap))?;
            print!("{}", to_canonical_json(&json!({ "input": input, "fuel": fuel, "result": class })));
            Ok(0)
        }
        Cmd::Gni { g1, g2, oracle, rounds, seed, timeout_ticks } => {
            let a = parse_graph(&read(&g1)?).with_context(|| g1.display().to_string())?;
            let b = parse_graph(&read(&g2)?).with_context(|| g2.display().to_string())?;
            let pair = GniPair::new(format!("{}:{}", g1.display(), g2.display()), a, b);
            if pair.trivially_non_isomorphic() {
                let v = json!({ "pair_id": pair.id, "short_circuit": true, "truth": "non-isomorphic" });
                print!("{}", to_canonical_json(&v));
                return Ok(0);
            }
            let mut handle = OracleHandle::new(open_oracle(&oracle, seed)?, timeout_ticks);
            let t = run_gni_protocol(&pair, &mut handle, rounds, seed)?;
            print!("{}", to_canonical_json(&t));
            Ok(match t.verdict {
                ProtocolVerdict::Accept => 0,
                ProtocolVerdict::Reject => 1,
                ProtocolVerdict::Incomplete => 2,
            })
        }
        Cmd::Omega { stages, bits } => {
            if stages == 0 {
                bail!("--stages must be positive");
            }
            let all = dovetail(stages);
            for s in &all {
                println!("{}", stage_line(s));
            }
            let e = emit_bits(&all, bits).expect("at least one stage");
            println!("bits 0.{} {} (stage {})", e.bits, e.status, e.stage);
            println!("{CONVERGENCE_NOTE}");
            Ok(0)
        }
        Cmd::Bits { file, binary, alpha, block_len, max_block } => {
            let id = file.display().to_string();
            let stream = if binary {
                let bytes = fs::read(&file).with_context(|| format!("reading {id}"))?;
                BitStream::from_bytes(id, &bytes)?
            } else {
                let text: String = read(&file)?.chars().filter(|c| !c.is_whitespace()).collect();
                BitStream::from_ascii(id, &text)?
            };
            if !(alpha > 0.0 && alpha < 1.0) {
                bail!("--alpha must lie in (0, 1)");
            }
            let report = run_battery(&stream, &BatteryConfig { alpha, block_len, max_block });
            print!("{}", to_canonical_json(&report));
            Ok(i32::from(report.any_fail()))
        }
        Cmd::Enumerate { file, k, cap, list, decide, bound_coeff, bound_degree } => {
            let ps = parse_proof_system(&read(&file)?).with_context(|| file.display().to_string())?;
            let all = enumerate_derivations(&ps, k, cap)?;
            let by_length: Vec<usize> = (1..=k).map(|j| all.iter().filter(|d| d.length() == j).count()).collect();
            let mut out = json!({ "k": k, "total": all.len(), "by_length": by_length });
            if list {
                out["derivations"] = json!(all.iter().map(|d| d.to_string()).collect::<Vec<_>>());
            }
            if let Some(x) = decide {
                let g = |n: usize| bound_coeff.saturating_mul(n.saturating_pow(bound_degree));
                out["decision"] = serde_json::to_value(bounded_decide(&ps, &x, g, cap)?)?;
                out["note"] = json!(UNDECIDABILITY_NOTE);
            }
            print!("{}", to_canonical_json(&out));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
