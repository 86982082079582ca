//! Selecting, running and reporting laws; witness files and replay.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::catalog::{catalog, LawEntry};
use crate::config::Config;
use crate::error::HarnessError;
use crate::report::{Expect, LawReport, Witness};

/// Ids of the catalog entries matched by `patterns`. A pattern matches an
/// id itself or anything below it (`thm19` selects `thm19/get/stateT/…`).
/// An empty pattern list selects everything; a pattern that matches
/// nothing is an error.
pub fn select(ids: &[String], patterns: &[String]) -> Result<Vec<String>, HarnessError> {
    if patterns.is_empty() {
        return Ok(ids.to_vec());
    }
    let mut compiled = Vec::new();
    for p in patterns {
        let exact = glob::Pattern::new(p).map_err(|e| HarnessError::Config(format!("bad suite pattern {p:?}: {e}")))?;
        let below = glob::Pattern::new(&format!("{p}/*")).map_err(|e| HarnessError::Config(e.to_string()))?;
        compiled.push((p, exact, below));
    }
    let opts = glob::MatchOptions { require_literal_separator: false, ..Default::default() };
    let mut chosen = vec![false; ids.len()];
    for (p, exact, below) in &compiled {
        let mut any = false;
        for (i, id) in ids.iter().enumerate() {
            if exact.matches_with(id, opts) || below.matches_with(id, opts) {
                chosen[i] = true;
                any = true;
            }
        }
        if !any {
            return Err(HarnessError::UnknownSuite(p.to_string()));
        }
    }
    Ok(ids.iter().zip(chosen).filter(|(_, c)| *c).map(|(id, _)| id.clone()).collect())
}

pub fn all_ids(cfg: &Config) -> Vec<String> {
    catalog(cfg).into_iter().map(|e| e.id).collect()
}

/// Runs the selected laws on up to `jobs` threads. Each thread builds its
/// own catalog; reports come back in id order.
pub fn run_selected(cfg: &Config, ids: &[String], jobs: usize) -> Vec<LawReport> {
    let next = AtomicUsize::new(0);
    let done = Mutex::new(Vec::with_capacity(ids.len()));
    let jobs = jobs.clamp(1, ids.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| {
                let cat = catalog(cfg);
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(id) = ids.get(i) else { break };
                    let entry = cat.iter().find(|e| &e.id == id).expect("selected ids come from the catalog");
                    let report = entry.run(cfg, None);
                    done.lock().expect("no poisoned runs").push(report);
                }
            });
        }
    });
    let mut reports = done.into_inner().expect("no poisoned runs");
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    reports
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub config: Config,
    pub suites: Vec<LawReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(LawReport::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.suites {
            let mode = match &r.mode {
                crate::report::Mode::Exhaustive => "exhaustive".to_string(),
                crate::report::Mode::Sampled { n, seed } => format!("sampled({n}, seed {seed})"),
            };
            let verdict = if r.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{verdict} {} [{}] {} cases, {mode}, {} ms\n", r.id, r.anchor, r.cases, r.ms));
            if let Some(w) = &r.witness {
                push_witness(&mut out, "witness", w);
            }
            if let Some(w) = &r.counterexample {
                push_witness(&mut out, "counterexample", w);
            }
        }
        let failed = self.suites.iter().filter(|r| !r.passed()).count();
        out.push_str(&format!("{} laws, {} passed, {failed} failed\n", self.suites.len(), self.suites.len() - failed));
        out
    }
}

fn push_witness(out: &mut String, label: &str, w: &Witness) {
    out.push_str(&format!("    {label} (case {}): {}\n", w.case, w.observation));
    for (k, v) in &w.inputs {
        out.push_str(&format!("      {k} = {v}\n"));
    }
}

/// Everything needed to re-run one failing case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub id: String,
    pub config: Config,
    /// Absent for a law that passed: replaying it passes without running.
    #[serde(default)]
    pub witness: Option<Witness>,
}

impl WitnessFile {
    pub fn from_report(cfg: &Config, r: &LawReport) -> Option<WitnessFile> {
        r.witness.as_ref()?;
        Some(WitnessFile { id: r.id.clone(), config: cfg.clone(), witness: r.witness.clone() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witnesses serialize")
    }

    pub fn parse(text: &str) -> Result<WitnessFile, HarnessError> {
        let w: WitnessFile = serde_json::from_str(text).map_err(|e| HarnessError::MalformedWitness(e.to_string()))?;
        w.config.validate().map_err(|e| HarnessError::MalformedWitness(e.to_string()))?;
        Ok(w)
    }

    /// A file name for this witness inside a witness directory.
    pub fn file_name(&self) -> String {
        let safe: String =
            self.id.chars().map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' }).collect();
        format!("{safe}.json")
    }
}

/// Re-runs the witnessed case under `cfg` (normally the file's own
/// configuration). Laws expected to be refuted are re-run in full, since
/// their failure is the absence of a counterexample.
pub fn replay(w: &WitnessFile, cfg: &Config) -> Result<LawReport, HarnessError> {
    let cat = catalog(cfg);
    let entry: &LawEntry =
        cat.iter().find(|e| e.id == w.id).ok_or_else(|| HarnessError::UnknownSuite(w.id.clone()))?;
    let Some(witness) = &w.witness else {
        return Ok(LawReport {
            id: entry.id.clone(),
            anchor: entry.anchor.to_string(),
            mode: crate::report::Mode::Exhaustive,
            cases: 0,
            outcome: crate::report::Outcome::Pass,
            witness: None,
            counterexample: None,
            ms: 0,
        });
    };
    let target = match entry.expect {
        Expect::Holds => Some(witness.case),
        Expect::Refuted => None,
    };
    Ok(entry.run(cfg, target))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids() -> Vec<String> {
        ["thm19/get/stateT/lifting", "thm19/aLGet", "thm27/local/exceptT", "fastproduct"].map(String::from).to_vec()
    }

    #[test]
    fn prefixes_and_globs_select() {
        assert_eq!(select(&ids(), &["thm19".into()]).unwrap().len(), 2);
        assert_eq!(select(&ids(), &["thm*/*/exceptT".into()]).unwrap(), ["thm27/local/exceptT"]);
        assert_eq!(select(&ids(), &[]).unwrap().len(), 4);
    }

    #[test]
    fn unmatched_patterns_are_errors() {
        assert!(matches!(select(&ids(), &["nope".into()]), Err(HarnessError::UnknownSuite(_))));
    }

    #[test]
    fn an_empty_witness_replays_as_a_pass() {
        let w = WitnessFile { id: "fastproduct".into(), config: Config::quick(), witness: None };
        let back = WitnessFile::parse(&w.to_json()).unwrap();
        let r = replay(&back, &back.config).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases, 0);
    }

    #[test]
    fn malformed_witness_files_are_rejected() {
        assert!(matches!(WitnessFile::parse("{"), Err(HarnessError::MalformedWitness(_))));
    }
}
