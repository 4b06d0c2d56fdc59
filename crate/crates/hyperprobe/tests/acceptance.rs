//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

#[path = "../../core/tests/support/brute.rs"]
mod brute;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hyperprobe::campaign::run_config;
use hyperprobe::config::{CampaignConfig, OracleSpec, Suites};
use hyperprobe::corpus;
use hyperprobe::report::{parse_report, to_canonical_json};
use hyperprobe_core::blackbox::TranscriptLog;
use hyperprobe_core::gni::format::fixtures;
use hyperprobe_core::gni::{run_gni_protocol, GniPair, ProtocolVerdict};
use hyperprobe_core::omega::{dovetail, Dyadic, OmegaStage};
use hyperprobe_core::oracles::{Growth, GuessingProver, HonestProver, ReferenceHalting, SyntheticTiming, TimeoutHeuristic, REFERENCE_FUEL};
use hyperprobe_core::proof::{check_derivation, enumerate_derivations, toy, Derivation, ProofSystem};
use hyperprobe_core::randomness::{reference_stream, run_battery, BatteryConfig, BitStream, TestVerdict};
use hyperprobe_core::sat::{fit_poly_degree, run_campaign, FitOutcome, GeneratorConfig, Ratio};
use hyperprobe_core::seed::derive_seed;
use hyperprobe_core::stats::binomial_interval;
use hyperprobe_core::tm::{build_test_set, evaluate_halting_oracle, LoopDetector};
use hyperprobe_core::{Oracle, OracleHandle, Verdict};

const MASTER: u64 = 0x5eed_acce_97a2_2026;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn handle<O: Oracle>(o: O) -> OracleHandle<O> {
    OracleHandle::new(o, u64::MAX)
}

fn gni_soundness() -> Outcome {
    let (a, b) = fixtures::isomorphic_pair();
    let pair = GniPair::new("iso-8", a, b);
    let runs = 4096u64;
    let mut accepted = 0u64;
    for i in 0..runs {
        let mut prover = handle(GuessingProver::new(derive_seed(MASTER, "acceptance/gni-prover", i)));
        let t = run_gni_protocol(&pair, &mut prover, 8, derive_seed(MASTER, "acceptance/gni-verifier", i)).map_err(|e| e.to_string())?;
        match t.verdict {
            ProtocolVerdict::Accept => accepted += 1,
            ProtocolVerdict::Reject => {}
            ProtocolVerdict::Incomplete => return Err(format!("run {i} incomplete")),
        }
    }
    let (lo, hi) = binomial_interval(runs, 1.0 / 256.0, 0.999);
    let summary = format!("{accepted}/{runs} accepted, interval [{lo}, {hi}]");
    ensure((lo..=hi).contains(&accepted), || summary.clone())?;
    Ok(summary)
}

fn gni_completeness() -> Outcome {
    let (a, b) = fixtures::hard_pair();
    ensure(a.degree_sequence() == b.degree_sequence(), || "fixture degree sequences differ".into())?;
    let pair = GniPair::new("hard-8", a, b);
    let mut prover = handle(HonestProver);
    let mut accepted = 0;
    for i in 0..200 {
        let t = run_gni_protocol(&pair, &mut prover, 16, derive_seed(MASTER, "acceptance/gni-complete", i)).map_err(|e| e.to_string())?;
        if t.verdict == ProtocolVerdict::Accept {
            accepted += 1;
        }
    }
    ensure(accepted == 200, || format!("{accepted}/200 accepted"))?;
    Ok("200/200 accepted".into())
}

fn halting_falsification() -> Outcome {
    let instances: Vec<_> = corpus::builtin().iter().map(|e| e.instance()).collect();
    let built = build_test_set(&instances, REFERENCE_FUEL, LoopDetector::default()).map_err(|e| e.to_string())?;
    let run_heuristic = || {
        let mut h = handle(TimeoutHeuristic::new(1000));
        let mut log = TranscriptLog::new(h.id(), MASTER);
        let e = evaluate_halting_oracle(&mut h, &built.set, &mut log);
        let labels: Vec<String> = e.falsify.counterexamples().map(|c| c.label.clone()).collect();
        (e.falsify.verdict, labels, log)
    };
    let first = run_heuristic();
    let second = run_heuristic();
    ensure(first == second, || "heuristic evaluation is not deterministic".into())?;
    let (verdict, labels, _) = first;
    ensure(verdict == Verdict::Falsified, || format!("heuristic verdict {verdict:?}"))?;
    ensure(labels.iter().any(|l| l.ends_with(":counter-overflow")), || format!("counterexamples {labels:?}"))?;
    let mut h = handle(ReferenceHalting::new(REFERENCE_FUEL));
    let mut log = TranscriptLog::new(h.id(), MASTER);
    let reference = evaluate_halting_oracle(&mut h, &built.set, &mut log).falsify.verdict;
    ensure(reference == Verdict::Consistent, || format!("reference verdict {reference:?}"))?;
    Ok(format!("heuristic FALSIFIED on {labels:?}; reference CONSISTENT on {} items", built.set.len()))
}

fn tree(d: &Derivation) -> brute::Tree {
    brute::Tree { label: d.label.clone(), children: d.children.iter().map(tree).collect() }
}

fn enumeration_equivalence() -> Outcome {
    let mut counts = Vec::new();
    for (name, ps) in [("duplication", toy::duplication()), ("unary-addition", toy::unary_addition())] {
        let ps: ProofSystem = ps;
        for k in 0..=8 {
            let fast = enumerate_derivations(&ps, k, 1_000_000).map_err(|e| e.to_string())?;
            ensure(fast.iter().all(|d| check_derivation(&ps, d)), || format!("{name} k={k}: invalid derivation"))?;
            let fast_trees: BTreeSet<_> = fast.iter().map(tree).collect();
            let naive = brute::brute_force(&ps, k);
            ensure(fast.len() == naive.len() && fast_trees == naive, || {
                format!("{name} k={k}: {} enumerated, {} by brute force", fast.len(), naive.len())
            })?;
        }
        counts.push(format!("{name} |P[8]|={}", brute::brute_force(&ps, 8).len()));
    }
    Ok(counts.join(", "))
}

/// Halting programs of at most `t` bits within `t` steps, counted per
/// instruction sequence: data bits read by SKIP are free, so a sequence
/// stands for `2^(skipped bits)` programs. Returns the count and the sum of
/// `2^-|p|` as a numerator over `2^64`.
fn omega_by_grammar(t: u64) -> (u128, u128) {
    fn walk(t: u64, k: u32, len: u64, steps: u64, programs: u128, acc: &mut (u128, u128)) {
        let base = 1u64 << k;
        if steps + base > t {
            return;
        }
        if len + 2 <= t {
            acc.0 += programs;
            acc.1 += programs << (64 - (len + 2));
        }
        for c in 0..2u64 {
            let skipped = 1 + c;
            walk(t, k + 1, len + 3 + skipped, steps + base, programs << skipped, acc);
            walk(t, k + 1, len + 3, steps + base + 4u64.pow(1 + c as u32), programs, acc);
        }
    }
    let mut acc = (0, 0);
    walk(t, 0, 0, 0, 1, &mut acc);
    acc
}

fn dyadic_text(num: u128) -> String {
    if num == 0 {
        return "0/2^0".into();
    }
    let tz = num.trailing_zeros().min(64);
    format!("{}/2^{}", num >> tz, 64 - tz)
}

fn omega_invariants() -> Outcome {
    let stages: Vec<OmegaStage> = dovetail(64);
    for w in stages.windows(2) {
        ensure(w[0].lower_bound <= w[1].lower_bound, || format!("bound decreases at stage {}", w[1].stage))?;
        ensure(w[0].halted.keys().all(|p| w[1].halted.contains_key(p)), || format!("program lost at stage {}", w[1].stage))?;
    }
    for s in &stages {
        ensure(s.lower_bound <= Dyadic::one(), || format!("Kraft sum above 1 at stage {}", s.stage))?;
        let (count, num) = omega_by_grammar(u64::from(s.stage));
        ensure(s.halted_count as u128 == count && s.lower_bound.to_string() == dyadic_text(num), || {
            format!("stage {}: {} programs, {}; grammar gives {count}, {}", s.stage, s.halted_count, s.lower_bound, dyadic_text(num))
        })?;
    }
    let last = stages.last().expect("64 stages");
    Ok(format!("stage 64: {} programs, lower bound {}", last.halted_count, last.lower_bound))
}

fn degree_recovery() -> Outcome {
    let sizes: Vec<u32> = (1..=16).map(|i| 4 * i).collect();
    let generator = GeneratorConfig::Planted { ratio: Ratio::new(426, 100) };
    let campaign = |growth| {
        let mut h = handle(SyntheticTiming::new(growth));
        let mut log = TranscriptLog::new(h.id(), MASTER);
        run_campaign(&mut h, &sizes, 3, &generator, MASTER, &mut log).map_err(|e| e.to_string())
    };
    let mut found = Vec::new();
    for d in 1..=3u32 {
        let c = campaign(Growth::Poly { coefficient: 3, degree: d })?;
        match fit_poly_degree(&c, 5) {
            FitOutcome::Fit(f) if (f.degree - f64::from(d)).abs() <= 0.1 => found.push(format!("d={d}: {:.4}", f.degree)),
            other => return Err(format!("3n^{d}: {other:?}")),
        }
    }
    match fit_poly_degree(&campaign(Growth::Exponential)?, 5) {
        FitOutcome::RejectedFromClass { max_degree: 5, .. } => found.push("2^n: REJECTED_FROM_CLASS".into()),
        other => return Err(format!("2^n: {other:?}")),
    }
    Ok(found.join(", "))
}

fn verdicts(stream: &BitStream) -> Vec<(String, TestVerdict)> {
    run_battery(stream, &BatteryConfig::default()).entries.into_iter().map(|e| (e.test, e.verdict)).collect()
}

fn battery_calibration() -> Outcome {
    let n = 10_000;
    let zeros = BitStream::new("zeros", vec![false; n]).map_err(|e| e.to_string())?;
    let alternating = BitStream::new("alternating", (0..n).map(|i| i % 2 == 1).collect()).map_err(|e| e.to_string())?;
    let must_fail = |s: &BitStream, tests: &[&str]| -> Result<(), String> {
        let v = verdicts(s);
        for t in tests {
            ensure(v.iter().any(|(name, verdict)| name == t && *verdict == TestVerdict::Fail), || format!("{} does not fail {t}: {v:?}", s.source_id))?;
        }
        Ok(())
    };
    must_fail(&zeros, &["frequency", "runs", "block-3", "borel-normality-4"])?;
    must_fail(&alternating, &["runs", "block-3", "borel-normality-4"])?;

    let trials = 500u64;
    let (lo, hi) = binomial_interval(trials, 0.01, 0.99);
    let mut fails: std::collections::BTreeMap<String, u64> = Default::default();
    for i in 0..trials {
        let s = BitStream::new(format!("prng-{i}"), reference_stream(derive_seed(MASTER, "acceptance/battery", i), n)).map_err(|e| e.to_string())?;
        for (test, v) in verdicts(&s) {
            let slot = fails.entry(test).or_default();
            match v {
                TestVerdict::Fail => *slot += 1,
                TestVerdict::Pass | TestVerdict::Descriptive => {}
                TestVerdict::InsufficientLength => return Err("10^4 bits reported as too short".into()),
            }
        }
    }
    let summary = fails.iter().map(|(t, c)| format!("{t} {c}")).collect::<Vec<_>>().join(", ");
    ensure(fails.values().all(|c| (lo..=hi).contains(c)), || format!("fail counts {summary}, interval [{lo}, {hi}]"))?;
    Ok(format!("fails per {trials}: {summary}; interval [{lo}, {hi}]"))
}

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyperprobe-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("temp dir");
    dir
}

fn determinism() -> Outcome {
    let dir = scratch();
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let out = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hyperprobe"))
            .args(["run", "--seed", "2026", "--out"])
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.code() == Some(0), || format!("campaign exited with {status}"))?;
        fs::read(&out).map_err(|e| e.to_string())
    };
    let a = run("first.json")?;
    let b = run("second.json")?;
    ensure(a == b, || "reports differ".into())?;
    Ok(format!("two full campaigns, {} identical bytes", a.len()))
}

fn source_files(root: &Path, out: &mut Vec<PathBuf>) {
    let Ok(entries) = fs::read_dir(root) else { return };
    for e in entries.flatten() {
        let p = e.path();
        if p.is_dir() {
            source_files(&p, out);
        } else {
            out.push(p);
        }
    }
}

fn has_word(text: &str, word: &str) -> bool {
    let is_ident = |c: char| c.is_ascii_alphanumeric() || c == '_';
    text.match_indices(word).any(|(i, _)| {
        let before = text[..i].chars().next_back().is_none_or(|c| !is_ident(c));
        let after = text[i + word.len()..].chars().next().is_none_or(|c| !is_ident(c));
        before && after
    })
}

fn verdict_vocabulary() -> Outcome {
    let crates = Path::new(env!("CARGO_MANIFEST_DIR")).join("..");
    let mut files = Vec::new();
    for krate in ["core", "hyperprobe"] {
        for sub in ["src", "fixtures", "corpus"] {
            source_files(&crates.join(krate).join(sub), &mut files);
        }
    }
    let banned = "VERI".to_string() + "FIED";
    for f in &files {
        let text = fs::read_to_string(f).unwrap_or_default();
        ensure(!has_word(&text, &banned), || format!("{} mentions {banned}", f.display()))?;
    }

    let allowed = ["FALSIFIED", "CONSISTENT", "INCOMPLETE"];
    let mut reports = Vec::new();
    for oracle in ["reference", "always-halts", "never-answers"] {
        let mut cfg = CampaignConfig::new(MASTER, OracleSpec::Name(oracle.into()), Suites::all());
        if oracle == "never-answers" {
            cfg.timeout_ticks = 1000;
        }
        if let Some(sat) = cfg.suites.sat.as_mut() {
            sat.sizes = vec![4, 6, 8];
        }
        let r = run_config(&cfg).map_err(|e| e.to_string())?;
        let text = to_canonical_json(&r);
        ensure(!has_word(&text, &banned), || format!("{oracle} report mentions {banned}"))?;
        let back = parse_report(&text).map_err(|e| e.to_string())?;
        let mut seen = vec![back.overall.as_str()];
        seen.extend(back.suites.values().map(|s| s.verdict.as_str()));
        ensure(seen.iter().all(|v| allowed.contains(v)), || format!("{oracle}: verdicts {seen:?}"))?;
        reports.push(format!("{oracle} {}", back.overall.as_str()));
    }
    Ok(format!("{} files scanned; reports: {}", files.len(), reports.join(", ")))
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "1 gni soundness bound", limit: Duration::from_secs(30), check: gni_soundness },
        Criterion { name: "2 gni completeness", limit: Duration::from_secs(30), check: gni_completeness },
        Criterion { name: "3 halting falsification", limit: Duration::from_secs(10), check: halting_falsification },
        Criterion { name: "4 P[k] enumeration equivalence", limit: Duration::from_secs(60), check: enumeration_equivalence },
        Criterion { name: "5 omega invariants", limit: Duration::from_secs(60), check: omega_invariants },
        Criterion { name: "6 degree-fit recovery", limit: Duration::from_secs(5), check: degree_recovery },
        Criterion { name: "7 randomness battery calibration", limit: Duration::from_secs(60), check: battery_calibration },
        Criterion { name: "8 determinism", limit: Duration::from_secs(120), check: determinism },
        Criterion { name: "9 verdict vocabulary", limit: Duration::from_secs(60), check: verdict_vocabulary },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > c.limit => Err(format!("{msg}; took {took:.1?}, limit {:?}", c.limit)),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS  {:<34} {:>8.2?}  {msg}", c.name, took),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {:<34} {:>8.2?}  {msg}", c.name, took);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    let _ = fs::remove_dir_all(scratch());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
