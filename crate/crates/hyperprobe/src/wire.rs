//! External oracles: a subprocess speaking newline-delimited JSON on its
//! standard input and output.
//!
//! The oracle first prints a handshake line `{"concurrent": bool}`. Each
//! request is `{"id": n, "task": ..., "payload": ...}` and each response
//! `{"id": n, "answer": ..., "reported_steps": optional}`. A response may
//! carry `"error": "text"` instead of an answer. Anything else is a protocol
//! error, after which the oracle is considered broken and every further
//! query fails.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError, Sender};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use hyperprobe_core::oracle::{SatAnswer, Transport};
use hyperprobe_core::sat::Assignment;
use hyperprobe_core::gni::GraphChoice;
use hyperprobe_core::{Answer, Oracle, OracleError, Query, Response, Task};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Handshake {
    pub concurrent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireResponse {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reported_steps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum WireError {
    #[error("empty oracle command")]
    EmptyCommand,
    #[error("cannot start {program}: {source}")]
    Spawn { program: String, source: std::io::Error },
    #[error("no handshake within {0:?}")]
    NoHandshake(Duration),
    #[error("bad handshake {line:?}: {msg}")]
    BadHandshake { line: String, msg: String },
    #[error("malformed request: {0}")]
    BadRequest(String),
}

/// One request line.
pub fn encode_request(id: u64, q: &Query) -> String {
    let mut v = serde_json::to_value(q).expect("queries serialize");
    let payload = v.get_mut("payload").map(Value::take).unwrap_or(Value::Null);
    json!({ "id": id, "task": q.task(), "payload": payload }).to_string()
}

pub fn decode_request(line: &str) -> Result<(u64, Query), WireError> {
    let bad = |m: String| WireError::BadRequest(m);
    let mut v: Value = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
    let id = v.get("id").and_then(Value::as_u64).ok_or_else(|| bad("missing id".into()))?;
    let obj = v.as_object_mut().ok_or_else(|| bad("not an object".into()))?;
    obj.remove("id");
    let q = serde_json::from_value(v).map_err(|e| bad(e.to_string()))?;
    Ok((id, q))
}

/// Wire form of an answer: a boolean for halting, 1 or 2 for GNI, `"UNSAT"`,
/// `"UNKNOWN"` or a literal array for SAT, a `0`/`1` string for bits.
pub fn encode_answer(a: &Answer) -> Value {
    match a {
        Answer::Halts(h) => json!(h),
        Answer::Gni(c) => json!(c.index()),
        Answer::Sat(SatAnswer::Satisfiable(asg)) => json!(asg),
        Answer::Sat(SatAnswer::Unsatisfiable) => json!("UNSAT"),
        Answer::Sat(SatAnswer::Unknown) => json!("UNKNOWN"),
        Answer::Bits(b) => json!(b),
    }
}

pub fn decode_answer(task: Task, v: &Value) -> Result<Answer, String> {
    let wrong = || format!("{v} is not a {task} answer");
    match task {
        Task::Halting => v.as_bool().map(Answer::Halts).ok_or_else(wrong),
        Task::Gni => match v.as_u64() {
            Some(1) => Ok(Answer::Gni(GraphChoice::First)),
            Some(2) => Ok(Answer::Gni(GraphChoice::Second)),
            _ => Err(wrong()),
        },
        Task::Sat => match v {
            Value::String(s) if s == "UNSAT" => Ok(Answer::Sat(SatAnswer::Unsatisfiable)),
            Value::String(s) if s == "UNKNOWN" => Ok(Answer::Sat(SatAnswer::Unknown)),
            Value::Array(_) => {
                let a: Assignment = serde_json::from_value(v.clone()).map_err(|e| format!("{}: {e}", wrong()))?;
                Ok(Answer::Sat(SatAnswer::Satisfiable(a)))
            }
            _ => Err(wrong()),
        },
        Task::Bits => match v.as_str() {
            Some(s) if s.chars().all(|c| c == '0' || c == '1') => Ok(Answer::Bits(s.to_string())),
            _ => Err(wrong()),
        },
    }
}

/// What the reader thread hands to a waiting query.
type Delivery = Result<(Instant, WireResponse), String>;

struct Shared {
    stdin: Mutex<ChildStdin>,
    pending: Mutex<HashMap<u64, Sender<Delivery>>>,
    next_id: AtomicU64,
    /// Held for the whole query when the oracle is not concurrent.
    serial: Mutex<()>,
    broken: Mutex<Option<String>>,
    child: Mutex<Child>,
}

impl Shared {
    fn break_with(&self, msg: String) {
        let mut b = self.broken.lock().unwrap();
        if b.is_none() {
            *b = Some(msg.clone());
        }
        drop(b);
        for (_, tx) in self.pending.lock().unwrap().drain() {
            let _ = tx.send(Err(msg.clone()));
        }
    }
}

impl Drop for Shared {
    fn drop(&mut self) {
        let child = self.child.get_mut().unwrap();
        let _ = child.kill();
        let _ = child.wait();
    }
}

/// Handle to a running external oracle. Clones share the process.
#[derive(Clone)]
pub struct ExternalOracle {
    id: String,
    concurrent: bool,
    tick_quantum_us: u64,
    shared: Arc<Shared>,
}

impl std::fmt::Debug for ExternalOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExternalOracle").field("id", &self.id).field("concurrent", &self.concurrent).finish()
    }
}

impl ExternalOracle {
    /// Start `argv` and wait up to `handshake_timeout` for its handshake.
    pub fn spawn(argv: &[String], tick_quantum_us: u64, handshake_timeout: Duration) -> Result<Self, WireError> {
        let (program, args) = argv.split_first().ok_or(WireError::EmptyCommand)?;
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|source| WireError::Spawn { program: program.clone(), source })?;
        let stdin = child.stdin.take().expect("piped");
        let stdout = child.stdout.take().expect("piped");

        let (hs_tx, hs_rx) = mpsc::channel::<Option<String>>();
        let shared = Arc::new(Shared {
            stdin: Mutex::new(stdin),
            pending: Mutex::new(HashMap::new()),
            next_id: AtomicU64::new(0),
            serial: Mutex::new(()),
            broken: Mutex::new(None),
            child: Mutex::new(child),
        });
        let weak = Arc::downgrade(&shared);
        thread::spawn(move || {
            let mut lines = BufReader::new(stdout).lines();
            let first = lines.next().and_then(Result::ok);
            let _ = hs_tx.send(first);
            for line in lines {
                let Some(shared) = weak.upgrade() else { return };
                let line = match line {
                    Ok(l) => l,
                    Err(e) => return shared.break_with(format!("reading oracle output: {e}")),
                };
                if line.trim().is_empty() {
                    continue;
                }
                let resp: WireResponse = match serde_json::from_str(&line) {
                    Ok(r) => r,
                    Err(e) => return shared.break_with(format!("malformed response {line:?}: {e}")),
                };
                if resp.id >= shared.next_id.load(Ordering::SeqCst) {
                    return shared.break_with(format!("response to unknown request id {}", resp.id));
                }
                // Responses to abandoned (timed out) requests are dropped.
                let waiting = shared.pending.lock().unwrap().remove(&resp.id);
                if let Some(tx) = waiting {
                    let _ = tx.send(Ok((Instant::now(), resp)));
                }
            }
            if let Some(shared) = weak.upgrade() {
                shared.break_with("oracle closed its output".into());
            }
        });

        let kill = |shared: Arc<Shared>, e: WireError| {
            drop(shared);
            Err(e)
        };
        let line = match hs_rx.recv_timeout(handshake_timeout) {
            Ok(Some(l)) => l,
            Ok(None) | Err(_) => return kill(shared, WireError::NoHandshake(handshake_timeout)),
        };
        let hs: Handshake = match serde_json::from_str(&line) {
            Ok(h) => h,
            Err(e) => return kill(shared, WireError::BadHandshake { line, msg: e.to_string() }),
        };
        Ok(Self { id: argv.join(" "), concurrent: hs.concurrent, tick_quantum_us: tick_quantum_us.max(1), shared })
    }

    /// The protocol error that broke this oracle, if any.
    pub fn broken(&self) -> Option<String> {
        self.shared.broken.lock().unwrap().clone()
    }

    fn budget(&self, ticks: u64) -> Duration {
        Duration::from_micros(ticks.saturating_mul(self.tick_quantum_us))
    }
}

impl Oracle for ExternalOracle {
    fn id(&self) -> &str {
        &self.id
    }

    fn transport(&self) -> Transport {
        Transport::ExternalProcess
    }

    fn concurrent(&self) -> bool {
        self.concurrent
    }

    fn query(&mut self, q: &Query, budget_ticks: u64) -> Result<Response, OracleError> {
        let _serial = (!self.concurrent).then(|| self.shared.serial.lock().unwrap());
        if let Some(b) = self.broken() {
            return Err(OracleError::Protocol(b));
        }
        let (tx, rx): (Sender<Delivery>, Receiver<Delivery>) = mpsc::channel();
        let id = {
            let mut pending = self.shared.pending.lock().unwrap();
            let id = self.shared.next_id.fetch_add(1, Ordering::SeqCst);
            pending.insert(id, tx);
            id
        };
        let start = Instant::now();
        let line = encode_request(id, q);
        let sent = {
            let mut w = self.shared.stdin.lock().unwrap();
            writeln!(w, "{line}").and_then(|_| w.flush())
        };
        if let Err(e) = sent {
            self.shared.pending.lock().unwrap().remove(&id);
            return Err(OracleError::Transport(format!("writing request: {e}")));
        }
        let delivery = match rx.recv_timeout(self.budget(budget_ticks)) {
            Ok(d) => d,
            Err(RecvTimeoutError::Timeout) => {
                self.shared.pending.lock().unwrap().remove(&id);
                return Err(OracleError::Timeout);
            }
            Err(RecvTimeoutError::Disconnected) => {
                return Err(OracleError::Protocol(self.broken().unwrap_or_else(|| "oracle went away".into())))
            }
        };
        let (at, resp) = delivery.map_err(OracleError::Protocol)?;
        let ticks = (at - start).as_micros() as u64 / self.tick_quantum_us;
        if let Some(msg) = resp.error {
            return Err(OracleError::Transport(format!("oracle reported: {msg}")));
        }
        let Some(raw) = resp.answer else {
            let msg = format!("response {id} has neither answer nor error");
            self.shared.break_with(msg.clone());
            return Err(OracleError::Protocol(msg));
        };
        match decode_answer(q.task(), &raw) {
            Ok(answer) => Ok(Response { answer, ticks, reported_steps: resp.reported_steps }),
            Err(msg) => {
                self.shared.break_with(msg.clone());
                Err(OracleError::Protocol(msg))
            }
        }
    }
}

/// Answer requests from `input` with `oracle` until end of input. Queries the
/// oracle declines with a timeout get no response at all.
pub fn serve<O: Oracle>(
    oracle: &mut O,
    concurrent: bool,
    input: impl BufRead,
    mut output: impl Write,
) -> std::io::Result<()> {
    writeln!(output, "{}", json!({ "concurrent": concurrent }))?;
    output.flush()?;
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let resp = match decode_request(&line) {
            Err(e) => WireResponse { id: 0, answer: None, reported_steps: None, error: Some(e.to_string()) },
            Ok((id, q)) => match oracle.query(&q, u64::MAX) {
                Ok(r) => WireResponse {
                    id,
                    answer: Some(encode_answer(&r.answer)),
                    reported_steps: r.reported_steps,
                    error: None,
                },
                Err(OracleError::Timeout) => continue,
                Err(e) => WireResponse { id, answer: None, reported_steps: None, error: Some(e.to_string()) },
            },
        };
        writeln!(output, "{}", serde_json::to_string(&resp).expect("responses serialize"))?;
        output.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperprobe_core::gni::format::fixtures;

    #[test]
    fn request_round_trip() {
        let (g1, g2) = fixtures::hard_pair();
        let queries = [
            Query::Halting { machine: "states: A\nstart: A\n".into(), input: "".into() },
            Query::Gni { pair_id: "p".into(), g1: g1.clone(), g2, h: g1 },
            Query::Sat { dimacs: "p cnf 1 1\n1 0\n".into() },
            Query::Bits { count: 8 },
        ];
        for (i, q) in queries.iter().enumerate() {
            let line = encode_request(i as u64, q);
            assert_eq!(decode_request(&line).unwrap(), (i as u64, q.clone()));
        }
        let line = encode_request(7, &Query::Bits { count: 3 });
        assert_eq!(line, r#"{"id":7,"payload":{"count":3},"task":"bits"}"#);
    }

    #[test]
    fn answer_round_trip() {
        let answers = [
            (Task::Halting, Answer::Halts(false)),
            (Task::Gni, Answer::Gni(GraphChoice::Second)),
            (Task::Sat, Answer::Sat(SatAnswer::Satisfiable(Assignment::new(vec![true, false])))),
            (Task::Sat, Answer::Sat(SatAnswer::Unsatisfiable)),
            (Task::Sat, Answer::Sat(SatAnswer::Unknown)),
            (Task::Bits, Answer::Bits("0110".into())),
        ];
        for (t, a) in answers {
            assert_eq!(decode_answer(t, &encode_answer(&a)).unwrap(), a);
        }
        assert_eq!(encode_answer(&Answer::Sat(SatAnswer::Satisfiable(Assignment::new(vec![true, false])))), json!([1, -2]));
    }

    #[test]
    fn wrong_shapes_rejected() {
        assert!(decode_answer(Task::Halting, &json!("yes")).is_err());
        assert!(decode_answer(Task::Gni, &json!(3)).is_err());
        assert!(decode_answer(Task::Sat, &json!("SAT")).is_err());
        assert!(decode_answer(Task::Sat, &json!([1, 0])).is_err());
        assert!(decode_answer(Task::Bits, &json!("01x")).is_err());
    }

    #[test]
    fn serve_answers_and_skips_timeouts() {
        let mut o = hyperprobe_core::oracles::NeverAnswers::new();
        let input = format!("{}\n{}\n", encode_request(0, &Query::Bits { count: 2 }), "not json");
        let mut out = Vec::new();
        serve(&mut o, false, input.as_bytes(), &mut out).unwrap();
        let out = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], r#"{"concurrent":false}"#);
        assert_eq!(lines.len(), 2);
        assert!(lines[1].contains("\"error\""));

        let mut o = hyperprobe_core::oracles::PrngBits::new(1);
        let mut out = Vec::new();
        serve(&mut o, true, encode_request(4, &Query::Bits { count: 4 }).as_bytes(), &mut out).unwrap();
        let resp: WireResponse = serde_json::from_str(String::from_utf8(out).unwrap().lines().nth(1).unwrap()).unwrap();
        assert_eq!(resp.id, 4);
        assert_eq!(resp.reported_steps, Some(4));
    }
}
