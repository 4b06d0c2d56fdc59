//! Running a whole campaign: one oracle, the enabled suites, one report.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use hyperprobe_core::blackbox::TranscriptLog;
use hyperprobe_core::gni::format::fixtures;
use hyperprobe_core::gni::{
    find_isomorphism, run_gni_protocol, verify_isomorphism_cert, GniPair, ProtocolTranscript, ProtocolVerdict,
};
use hyperprobe_core::oracle::{QueryOutcome, Transport};
use hyperprobe_core::omega::{dovetail, emit_bits, stage_line, Dyadic, CONVERGENCE_NOTE};
use hyperprobe_core::randomness::{run_battery, BatteryConfig, BitStream, TestVerdict};
use hyperprobe_core::sat::{fit_poly_degree, run_campaign, Claim, GeneratorConfig, Ratio, FINITE_RANGE_NOTE};
use hyperprobe_core::seed::derive_seed;
use hyperprobe_core::tm::{build_test_set, evaluate_halting_oracle, LoopDetector};
use hyperprobe_core::{oracles, Answer, Oracle, OracleHandle, Query, Verdict};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{
    CampaignConfig, ConfigError, GniParams, HaltingParams, OmegaParams, OracleSpec, RandomnessParams, SatParams,
    SuiteName,
};
use crate::corpus::{self, CorpusEntry};
use crate::report::{OracleInfo, Provenance, SuiteReport, VerdictReport};
use crate::wire::ExternalOracle;

/// How long an external oracle gets to print its handshake.
pub const HANDSHAKE_TIMEOUT: Duration = Duration::from_secs(10);

/// Transcript log shared by concurrently running suites.
#[derive(Debug, Clone, Default)]
pub struct SharedLog(Arc<Mutex<BTreeMap<SuiteName, TranscriptLog>>>);

impl SharedLog {
    pub fn append(&self, suite: SuiteName, log: TranscriptLog) {
        let mut m = self.0.lock().unwrap();
        match m.get_mut(&suite) {
            Some(l) => l.extend(log),
            None => {
                m.insert(suite, log);
            }
        }
    }

    /// Snapshot keyed by suite, independent of completion order.
    pub fn snapshot(&self) -> BTreeMap<SuiteName, TranscriptLog> {
        self.0.lock().unwrap().clone()
    }
}

enum Device {
    InProcess(String),
    External(ExternalOracle),
}

impl Device {
    fn oracle_for(&self, master: u64, suite: SuiteName) -> Box<dyn Oracle + Send> {
        match self {
            Device::InProcess(name) => {
                let seed = derive_seed(master, &format!("{}/oracle", suite.as_str()), 0);
                oracles::by_name(name, seed).expect("validated oracle name")
            }
            Device::External(e) => Box::new(e.clone()),
        }
    }

    fn concurrent(&self) -> bool {
        match self {
            Device::InProcess(_) => true,
            Device::External(e) => e.concurrent(),
        }
    }

    fn broken(&self) -> Option<String> {
        match self {
            Device::InProcess(_) => None,
            Device::External(e) => e.broken(),
        }
    }
}

fn suite_report(verdict: Verdict, result: Value, diagnostics: Vec<String>) -> SuiteReport {
    SuiteReport { verdict, result, diagnostics }
}

fn not_run(why: &str) -> SuiteReport {
    suite_report(Verdict::Incomplete, Value::Null, vec![format!("not run: {why}")])
}

/// Run every enabled suite of a valid configuration.
pub fn run_config(cfg: &CampaignConfig) -> Result<VerdictReport, ConfigError> {
    let master = cfg.validate()?;
    let enabled = cfg.suites.enabled();
    let mut echo = cfg.clone();
    echo.out = None;

    let mut diagnostics = Vec::new();
    let (device, info) = match &cfg.oracle {
        OracleSpec::Name(n) => {
            let probe = oracles::by_name(n, 0).expect("validated oracle name");
            let info = OracleInfo {
                spec: cfg.oracle.clone(),
                id: probe.id().to_string(),
                transport: Transport::InProcess,
                concurrent: true,
            };
            (Some(Device::InProcess(n.clone())), info)
        }
        OracleSpec::Command(argv) => {
            let mut info =
                OracleInfo { spec: cfg.oracle.clone(), id: argv.join(" "), transport: Transport::ExternalProcess, concurrent: false };
            match ExternalOracle::spawn(argv, cfg.tick_quantum_us, HANDSHAKE_TIMEOUT) {
                Ok(e) => {
                    info.concurrent = e.concurrent();
                    (Some(Device::External(e)), info)
                }
                Err(e) => {
                    diagnostics.push(format!("oracle launch failed: {e}"));
                    (None, info)
                }
            }
        }
    };

    let log = SharedLog::default();
    let mut suites: BTreeMap<String, SuiteReport> = BTreeMap::new();
    match &device {
        None => {
            for n in &enabled {
                suites.insert(n.as_str().into(), not_run("oracle launch failed"));
            }
        }
        Some(dev) if dev.concurrent() => {
            let done: Vec<(SuiteName, SuiteReport)> = thread::scope(|s| {
                let handles: Vec<_> = enabled
                    .iter()
                    .map(|&n| {
                        let oracle = dev.oracle_for(master, n);
                        let log = log.clone();
                        s.spawn(move || (n, run_suite(n, cfg, master, oracle, &log)))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
            });
            for (n, r) in done {
                suites.insert(n.as_str().into(), r);
            }
            if let Some(b) = dev.broken() {
                diagnostics.push(format!("campaign aborted: {b}"));
            }
        }
        Some(dev) => {
            for &n in &enabled {
                // Omega needs no oracle, so it runs even after an abort.
                if let Some(b) = dev.broken().filter(|_| n != SuiteName::Omega) {
                    suites.insert(n.as_str().into(), not_run("campaign aborted after a protocol error"));
                    if !diagnostics.iter().any(|d| d.starts_with("campaign aborted")) {
                        diagnostics.push(format!("campaign aborted: {b}"));
                    }
                    continue;
                }
                let r = run_suite(n, cfg, master, dev.oracle_for(master, n), &log);
                suites.insert(n.as_str().into(), r);
            }
            if let Some(b) = dev.broken() {
                if !diagnostics.iter().any(|d| d.starts_with("campaign aborted")) {
                    diagnostics.push(format!("campaign aborted: {b}"));
                }
            }
        }
    }

    let mut transcripts = log.snapshot();
    for (name, report) in suites.iter_mut() {
        let key = SuiteName::ALL.into_iter().find(|n| n.as_str() == name).expect("known suite");
        report_transcript(report, transcripts.remove(&key));
    }
    let mut overall = Verdict::combine(suites.values().map(|s| s.verdict));
    if device.is_none() && overall == Verdict::Consistent {
        overall = Verdict::Incomplete;
    }
    Ok(VerdictReport {
        schema: crate::report::SCHEMA.into(),
        overall,
        provenance: Provenance {
            tool: "hyperprobe".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            core_version: hyperprobe_core::VERSION.into(),
            seed: master,
            oracle: info,
            config: echo,
        },
        suites,
        diagnostics,
    })
}

fn report_transcript(report: &mut SuiteReport, log: Option<TranscriptLog>) {
    if let (Some(log), Value::Object(m)) = (log, &mut report.result) {
        m.insert("transcript".into(), serde_json::to_value(&log).expect("logs serialize"));
    }
}

fn run_suite(
    n: SuiteName,
    cfg: &CampaignConfig,
    master: u64,
    oracle: Box<dyn Oracle + Send>,
    log: &SharedLog,
) -> SuiteReport {
    let s = &cfg.suites;
    let mut handle = OracleHandle::new(oracle, cfg.timeout_ticks);
    let mut tlog = TranscriptLog::new(handle.id(), master);
    let r = match n {
        SuiteName::Halting => halting_suite(&mut handle, s.halting.as_ref().expect("enabled"), &mut tlog),
        SuiteName::Gni => gni_suite(&mut handle, s.gni.as_ref().expect("enabled"), master),
        SuiteName::Sat => sat_suite(&mut handle, s.sat.as_ref().expect("enabled"), master, &mut tlog),
        SuiteName::Omega => omega_suite(s.omega.as_ref().expect("enabled")),
        SuiteName::Randomness => randomness_suite(&mut handle, s.randomness.as_ref().expect("enabled"), &mut tlog),
    };
    if !tlog.is_empty() {
        log.append(n, tlog);
    }
    r
}

/// Halting falsification against the corpus.
pub fn halting_suite<O: Oracle>(handle: &mut OracleHandle<O>, p: &HaltingParams, log: &mut TranscriptLog) -> SuiteReport {
    let mut diagnostics = Vec::new();
    let corpus: Vec<CorpusEntry> = match &p.corpus {
        None => corpus::builtin(),
        Some(dir) => match corpus::load_dir(dir) {
            Ok(c) => c,
            Err(e) => return suite_report(Verdict::Incomplete, Value::Null, vec![format!("corpus: {e}")]),
        },
    };
    let detector = LoopDetector::with_memory_cap(p.memory_cap);
    for e in &corpus {
        if let Err(err) = e.verify(detector) {
            diagnostics.push(format!("corpus: {err}"));
        }
    }
    let instances: Vec<_> = corpus.iter().map(CorpusEntry::instance).collect();
    let built = match build_test_set(&instances, p.fuel, detector) {
        Ok(b) => b,
        Err(e) => {
            diagnostics.push(format!("test set: {e}"));
            return suite_report(Verdict::Incomplete, Value::Null, diagnostics);
        }
    };
    let eval = evaluate_halting_oracle(handle, &built.set, log);
    let mut verdict = eval.falsify.verdict;
    if verdict == Verdict::Consistent && !diagnostics.is_empty() {
        verdict = Verdict::Incomplete;
    }
    for item in eval.falsify.counterexamples() {
        diagnostics.push(format!("counterexample: {}", item.label));
    }
    let unanswered = eval.falsify.unanswered().count();
    if unanswered > 0 {
        diagnostics.push(format!("{unanswered} of {} items unanswered", eval.falsify.items.len()));
    }
    let items: Vec<Value> = built
        .set
        .items()
        .iter()
        .map(|i| json!({ "name": i.instance.name, "input": i.instance.input, "truth": i.truth, "certificate": i.certificate }))
        .collect();
    let result = json!({ "evaluation": eval, "test_set": items, "excluded": built.excluded });
    suite_report(verdict, result, diagnostics)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairTruth {
    Isomorphic,
    NonIsomorphic,
}

/// The shipped pairs: a hard non-isomorphic pair with equal degree
/// sequences, an isomorphic pair and a pair told apart by edge count.
pub fn gni_pairs() -> Vec<GniPair> {
    let (a, b) = fixtures::hard_pair();
    let (c, d) = fixtures::isomorphic_pair();
    let (e, f) = fixtures::trivial_pair();
    vec![GniPair::new("cube-vs-wagner", a, b), GniPair::new("isomorphic", c, d), GniPair::new("cycle-vs-path", e, f)]
}

/// Graph non-isomorphism protocol runs on every shipped pair.
pub fn gni_suite<O: Oracle>(handle: &mut OracleHandle<O>, p: &GniParams, master: u64) -> SuiteReport {
    let mut diagnostics = Vec::new();
    let mut verdicts = Vec::new();
    let mut pairs = Vec::new();
    let mut index = 0u64;
    for pair in gni_pairs() {
        if pair.trivially_non_isomorphic() {
            pairs.push(json!({
                "pair_id": pair.id,
                "truth": PairTruth::NonIsomorphic,
                "short_circuit": true,
                "certificate": Value::Null,
            }));
            continue;
        }
        let iso = find_isomorphism(&pair.g1, &pair.g2);
        if let Some(perm) = &iso {
            assert!(verify_isomorphism_cert(&pair.g1, &pair.g2, perm), "search returned a bad certificate");
        }
        let truth = if iso.is_some() { PairTruth::Isomorphic } else { PairTruth::NonIsomorphic };
        let mut transcripts: Vec<ProtocolTranscript> = Vec::with_capacity(p.runs as usize);
        for _ in 0..p.runs {
            let seed = derive_seed(master, "gni", index);
            index += 1;
            match run_gni_protocol(&pair, handle, p.rounds, seed) {
                Ok(t) => transcripts.push(t),
                Err(e) => {
                    diagnostics.push(format!("{}: {e}", pair.id));
                    verdicts.push(Verdict::Incomplete);
                    break;
                }
            }
        }
        let count = |v: ProtocolVerdict| transcripts.iter().filter(|t| t.verdict == v).count();
        let (accepted, rejected, incomplete) =
            (count(ProtocolVerdict::Accept), count(ProtocolVerdict::Reject), count(ProtocolVerdict::Incomplete));
        if incomplete > 0 {
            verdicts.push(Verdict::Incomplete);
        }
        // On a certified non-isomorphic pair every wrong answer refutes the
        // prover. On an isomorphic pair acceptance is only counted.
        if truth == PairTruth::NonIsomorphic && rejected > 0 {
            verdicts.push(Verdict::Falsified);
            diagnostics.push(format!("{}: prover failed {rejected} of {} runs", pair.id, transcripts.len()));
        }
        pairs.push(json!({
            "pair_id": pair.id,
            "truth": truth,
            "short_circuit": false,
            "certificate": iso,
            "runs": transcripts.len(),
            "accepted": accepted,
            "rejected": rejected,
            "incomplete": incomplete,
            "transcripts": transcripts,
        }));
    }
    let result = json!({
        "rounds": p.rounds,
        "soundness_error_per_run": 0.5f64.powi(p.rounds as i32),
        "pairs": pairs,
    });
    suite_report(Verdict::combine(verdicts), result, diagnostics)
}

/// Planted 3-SAT timing campaign and degree fit.
pub fn sat_suite<O: Oracle>(
    handle: &mut OracleHandle<O>,
    p: &SatParams,
    master: u64,
    log: &mut TranscriptLog,
) -> SuiteReport {
    let generator = GeneratorConfig::Planted { ratio: Ratio::new(p.ratio_num, p.ratio_den) };
    let campaign = match run_campaign(handle, &p.sizes, p.reps, &generator, master, log) {
        Ok(c) => c,
        Err(e) => return suite_report(Verdict::Incomplete, Value::Null, vec![e.to_string()]),
    };
    let mut diagnostics = Vec::new();
    let wrong = campaign.wrong_answers().count();
    let failed = campaign.samples.iter().filter(|s| s.claim == Claim::Failed).count();
    let verdict = if wrong > 0 {
        for s in campaign.wrong_answers() {
            diagnostics.push(format!("wrong assignment: n={} seed={}", s.size, s.seed));
        }
        Verdict::Falsified
    } else if campaign.censored() > 0 || failed > 0 {
        Verdict::Incomplete
    } else {
        Verdict::Consistent
    };
    if campaign.censored() > 0 {
        diagnostics.push(format!("{} censored samples", campaign.censored()));
    }
    let fit = fit_poly_degree(&campaign, p.max_degree);
    let result = json!({ "campaign": campaign, "fit": fit, "fit_note": FINITE_RANGE_NOTE });
    suite_report(verdict, result, diagnostics)
}

/// Omega lower bounds of the toy machine. Involves no oracle.
pub fn omega_suite(p: &OmegaParams) -> SuiteReport {
    let stages = dovetail(p.max_stage);
    let mut diagnostics = Vec::new();
    for w in stages.windows(2) {
        if w[1].lower_bound < w[0].lower_bound {
            diagnostics.push(format!("lower bound decreased at stage {}", w[1].stage));
        }
        if !w[0].halted.keys().all(|k| w[1].halted.contains_key(k)) {
            diagnostics.push(format!("halting set shrank at stage {}", w[1].stage));
        }
    }
    if stages.last().is_some_and(|s| s.lower_bound > Dyadic::one()) {
        diagnostics.push("Kraft sum exceeds 1".into());
    }
    let verdict = if diagnostics.is_empty() { Verdict::Consistent } else { Verdict::Incomplete };
    let result = json!({
        "stages": stages,
        "lines": stages.iter().map(stage_line).collect::<Vec<_>>(),
        "bits": emit_bits(&stages, p.bits),
        "note": CONVERGENCE_NOTE,
    });
    suite_report(verdict, result, diagnostics)
}

/// Ask for a bit string and run the battery on it.
pub fn randomness_suite<O: Oracle>(
    handle: &mut OracleHandle<O>,
    p: &RandomnessParams,
    log: &mut TranscriptLog,
) -> SuiteReport {
    let label = format!("bits:count={}", p.bits);
    let outcome = handle.ask(&Query::Bits { count: p.bits });
    log.record_outcome(&label, &outcome);
    let bits = match outcome {
        QueryOutcome::Answered(r) => match r.answer {
            Answer::Bits(b) => b,
            other => {
                let d = format!("answer of the wrong kind: {}", other.task());
                return suite_report(Verdict::Incomplete, Value::Null, vec![d]);
            }
        },
        QueryOutcome::TimedOut { budget } => {
            return suite_report(Verdict::Incomplete, Value::Null, vec![format!("timed out after {budget} ticks")])
        }
        QueryOutcome::Failed(e) => return suite_report(Verdict::Incomplete, Value::Null, vec![e.to_string()]),
    };
    if bits.len() != p.bits {
        let d = format!("asked for {} bits, got {}", p.bits, bits.len());
        return suite_report(Verdict::Incomplete, Value::Null, vec![d]);
    }
    let stream = BitStream::from_ascii(handle.id(), &bits).expect("decoded answers hold only 0 and 1");
    let cfg = BatteryConfig { alpha: p.alpha, block_len: p.block_len, max_block: p.max_block };
    let report = run_battery(&stream, &cfg);
    let mut diagnostics = Vec::new();
    for e in report.entries.iter().filter(|e| e.verdict == TestVerdict::Fail) {
        diagnostics.push(format!("failed: {}", e.test));
    }
    let verdict = if report.any_fail() {
        Verdict::Falsified
    } else if report.summary.insufficient_length > 0 {
        Verdict::Incomplete
    } else {
        Verdict::Consistent
    };
    suite_report(verdict, json!({ "battery": report }), diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Suites;

    fn cfg(oracle: &str, suites: &[SuiteName]) -> CampaignConfig {
        let mut s = Suites::default();
        for &n in suites {
            s.enable(n);
        }
        CampaignConfig::new(42, OracleSpec::Name(oracle.into()), s)
    }

    #[test]
    fn always_halts_is_falsified() {
        let r = run_config(&cfg("always-halts", &[SuiteName::Halting])).unwrap();
        assert_eq!(r.overall, Verdict::Falsified);
        assert!(r.suites["halting"].diagnostics.iter().any(|d| d.contains("counterexample: halting:bouncer")));
    }

    #[test]
    fn unsupported_tasks_are_incomplete() {
        let r = run_config(&cfg("always-halts", &[SuiteName::Randomness, SuiteName::Omega])).unwrap();
        assert_eq!(r.suites["randomness"].verdict, Verdict::Incomplete);
        assert_eq!(r.suites["omega"].verdict, Verdict::Consistent);
        assert_eq!(r.overall, Verdict::Incomplete);
    }

    #[test]
    fn guessing_prover_is_caught() {
        let r = run_config(&cfg("guessing-prover", &[SuiteName::Gni])).unwrap();
        assert_eq!(r.overall, Verdict::Falsified);
    }

    #[test]
    fn liar_sat_is_caught() {
        let r = run_config(&cfg("liar-sat", &[SuiteName::Sat])).unwrap();
        assert_eq!(r.overall, Verdict::Falsified);
    }

    #[test]
    fn no_suites_rejected() {
        assert_eq!(run_config(&cfg("reference", &[])), Err(ConfigError::NoSuites));
    }

    #[test]
    fn launch_failure_is_incomplete() {
        let mut c = cfg("reference", &[SuiteName::Halting, SuiteName::Omega]);
        c.oracle = OracleSpec::Command(vec!["/nonexistent/oracle-binary".into()]);
        let r = run_config(&c).unwrap();
        assert_eq!(r.overall, Verdict::Incomplete);
        assert!(r.diagnostics[0].starts_with("oracle launch failed"));
        assert!(r.suites.values().all(|s| s.verdict == Verdict::Incomplete));
    }

    #[test]
    fn suite_results_do_not_depend_on_other_suites() {
        let both = run_config(&cfg("reference", &[SuiteName::Gni, SuiteName::Randomness])).unwrap();
        let gni = run_config(&cfg("reference", &[SuiteName::Gni])).unwrap();
        let bits = run_config(&cfg("reference", &[SuiteName::Randomness])).unwrap();
        assert_eq!(both.suites["gni"], gni.suites["gni"]);
        assert_eq!(both.suites["randomness"], bits.suites["randomness"]);
    }
}
