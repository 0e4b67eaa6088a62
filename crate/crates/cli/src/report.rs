use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use vee_core::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }
    }
}

/// Result of one command before it is wrapped into a [`Report`]. A failing
/// outcome carries a `counterexample` key in its payload.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub payload: Value,
}

impl Outcome {
    pub fn pass(payload: Value) -> Self {
        Outcome { verdict: Verdict::Pass, payload }
    }

    pub fn fail(mut payload: Value, counterexample: Value) -> Self {
        payload["counterexample"] = counterexample;
        Outcome { verdict: Verdict::Fail, payload }
    }

    pub fn judged(ok: bool, payload: Value, counterexample: impl FnOnce() -> Value) -> Self {
        if ok {
            Outcome::pass(payload)
        } else {
            Outcome::fail(payload, counterexample())
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub verdict: Verdict,
    pub payload: Value,
    pub anchor: &'static str,
}

impl Report {
    pub fn new(command: &str, canonical_input: &str, anchor: &'static str, outcome: Outcome) -> Self {
        Report {
            command: command.to_owned(),
            input_digest: digest(command, canonical_input),
            verdict: outcome.verdict,
            payload: outcome.payload,
            anchor,
        }
    }

    pub fn error(command: &str, canonical_input: &str, anchor: &'static str, err: &Error) -> Self {
        Report {
            command: command.to_owned(),
            input_digest: digest(command, canonical_input),
            verdict: Verdict::Error,
            payload: json!({ "error": err.to_string() }),
            anchor,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "input_digest": self.input_digest,
            "verdict": self.verdict.as_str(),
            "payload": self.payload,
            "anchor": self.anchor,
        })
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
        s.push('\n');
        s
    }
}

/// sha256 over the command name and the canonical input, hex encoded.
pub fn digest(command: &str, canonical_input: &str) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update(b"\n");
    h.update(canonical_input.as_bytes());
    hex::encode(h.finalize())
}
