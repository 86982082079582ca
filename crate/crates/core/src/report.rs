//! Structured law outcomes and the per-law case driver.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::ConstructionError;
use crate::observe::Gen;

/// How the quantifiers of a law were discharged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled { n: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

/// A replayable counterexample: the index of the failing case in the law's
/// deterministic case order, its rendered inputs, and the distinguishing
/// observation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub case: u64,
    pub inputs: Vec<(String, String)>,
    pub observation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub id: String,
    pub anchor: String,
    pub mode: Mode,
    pub cases: u64,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    /// For laws that are expected to be refuted: the refuting case.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Witness>,
    pub ms: u64,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

/// A failed case before it is numbered.
#[derive(Clone, Debug)]
pub struct CaseFailure {
    pub observation: String,
    pub inputs: Vec<(String, String)>,
}

impl CaseFailure {
    pub fn new(observation: impl Into<String>) -> CaseFailure {
        CaseFailure { observation: observation.into(), inputs: Vec::new() }
    }

    pub fn input(mut self, name: &str, rendered: impl Into<String>) -> CaseFailure {
        self.inputs.push((name.to_string(), rendered.into()));
        self
    }
}

pub type CaseResult = Result<(), CaseFailure>;

/// Drives the cases of one law: numbers them, stops at the first failure,
/// and in replay mode evaluates only the targeted case.
pub struct LawCtx<'g> {
    pub g: &'g Gen,
    target: Option<u64>,
    next: u64,
    evaluated: u64,
    failure: Option<Witness>,
    done: bool,
}

impl<'g> LawCtx<'g> {
    pub fn new(g: &'g Gen, target: Option<u64>) -> LawCtx<'g> {
        LawCtx { g, target, next: 0, evaluated: 0, failure: None, done: false }
    }

    /// Runs one case. Returns `false` once the law is decided and the caller
    /// should stop producing cases.
    pub fn case(&mut self, f: impl FnOnce(&Gen) -> CaseResult) -> bool {
        if self.done {
            return false;
        }
        let idx = self.next;
        self.next += 1;
        if let Some(t) = self.target {
            if idx < t {
                return true;
            }
        }
        self.evaluated += 1;
        let g = self.g;
        let res = catch_unwind(AssertUnwindSafe(|| f(g)));
        let failure = match res {
            Ok(Ok(())) => None,
            Ok(Err(cf)) => Some(cf),
            Err(payload) => Some(CaseFailure::new(format!("panic: {}", panic_message(&payload)))),
        };
        if let Some(cf) = failure {
            self.failure = Some(Witness { case: idx, inputs: cf.inputs, observation: cf.observation });
            self.done = true;
        }
        if self.target == Some(idx) {
            self.done = true;
        }
        !self.done
    }

    /// Records a refused construction as the law's failure.
    pub fn refuse(&mut self, err: ConstructionError) {
        if self.done {
            return;
        }
        let idx = self.next;
        self.next += 1;
        if matches!(self.target, Some(t) if idx < t) {
            return;
        }
        self.evaluated += 1;
        let mut inputs = vec![("refused".to_string(), err.what.clone()), ("law".to_string(), err.law.clone())];
        inputs.extend(err.witness.inputs);
        self.failure = Some(Witness { case: idx, inputs, observation: err.witness.observation });
        self.done = true;
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn failure(&self) -> Option<&Witness> {
        self.failure.as_ref()
    }

    pub fn evaluated(&self) -> u64 {
        self.evaluated
    }

    pub fn into_parts(self) -> (u64, Option<Witness>) {
        (self.evaluated, self.failure)
    }
}

fn panic_message(payload: &Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_string()
    }
}

/// Runs one case and returns early from the enclosing law function once the
/// law is decided.
#[macro_export]
macro_rules! case {
    ($ctx:expr, $body:expr) => {
        if !$ctx.case($body) {
            return;
        }
    };
}

/// Whether a law is expected to hold or to be refuted by some case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Holds,
    Refuted,
}

pub fn mode_of(g: &Gen) -> Mode {
    if g.was_sampled() {
        Mode::Sampled { n: g.budget().sample as u64, seed: g.seed() }
    } else {
        Mode::Exhaustive
    }
}

/// Runs one law with a fresh generator seeded from `cfg.seed` and `id`.
/// With `target`, only that case is evaluated.
pub fn run_law(
    id: &str,
    anchor: &str,
    cfg: &Config,
    target: Option<u64>,
    expect: Expect,
    body: impl FnOnce(&mut LawCtx),
) -> LawReport {
    let start = Instant::now();
    let g = Gen::new(cfg, id);
    let mut ctx = LawCtx::new(&g, target);
    if let Err(payload) = catch_unwind(AssertUnwindSafe(|| body(&mut ctx))) {
        // A panic outside any case: record it as a refusal of the whole law.
        let msg = format!("panic: {}", panic_message(&payload));
        ctx.refuse(ConstructionError {
            what: id.to_string(),
            law: id.to_string(),
            witness: Witness { case: 0, inputs: vec![], observation: msg },
        });
    }
    let (cases, failure) = ctx.into_parts();
    let (outcome, witness, counterexample) = match (expect, failure) {
        (Expect::Holds, None) => (Outcome::Pass, None, None),
        (Expect::Holds, Some(w)) => (Outcome::Fail, Some(w), None),
        (Expect::Refuted, Some(w)) => (Outcome::Pass, None, Some(w)),
        (Expect::Refuted, None) => (
            Outcome::Fail,
            Some(Witness {
                case: cases,
                inputs: vec![],
                observation: format!("no counterexample among {cases} cases"),
            }),
            None,
        ),
    };
    LawReport {
        id: id.to_string(),
        anchor: anchor.to_string(),
        mode: mode_of(&g),
        cases,
        outcome,
        witness,
        counterexample,
        ms: start.elapsed().as_millis() as u64,
    }
}
