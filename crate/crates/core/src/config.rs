//! Run configuration: seed, universe size, enumeration budgets, mutants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

/// Enumeration and sampling budgets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Function spaces with at most this many functions are enumerated;
    /// larger ones are sampled.
    pub fn_enum_cap: u64,
    /// Number of samples drawn from a space that is too large.
    pub sample: usize,
    /// First-order carriers up to this size are enumerated.
    pub value_cap: usize,
    /// Maximum number of input tuples one law instantiation evaluates.
    pub case_cap: usize,
    /// Sigma-operation arguments `t : E (M A)` enumerated up to this many.
    pub sig_enum_cap: usize,
    /// Codensity computations are probed at answer types up to this size.
    pub answer_max: usize,
    /// Case cap for laws whose every comparison probes codensity
    /// computations.
    pub heavy_case_cap: usize,
}

impl Budget {
    pub fn standard() -> Budget {
        Budget { fn_enum_cap: 256, sample: 64, value_cap: 4096, case_cap: 40_000, sig_enum_cap: 64, answer_max: 2, heavy_case_cap: 1024 }
    }

    pub fn quick() -> Budget {
        Budget { fn_enum_cap: 64, sample: 16, value_cap: 512, case_cap: 2_000, sig_enum_cap: 32, answer_max: 2, heavy_case_cap: 128 }
    }
}

/// Deliberately broken definitions used to show the suites are sensitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutant {
    /// exceptT's bind continues on the exception branch instead of the value.
    SwappedExceptBind,
    /// output appends the existing log before the emitted one.
    OutputOrder,
    /// Catch runs the handler in the state reached by the failing branch.
    NonBacktrackingCatch,
    /// `from` instantiates with a constant continuation instead of `Ret`.
    BrokenFrom,
    /// put ignores the new state.
    StatelessPut,
}

impl Mutant {
    pub const ALL: [Mutant; 5] = [
        Mutant::SwappedExceptBind,
        Mutant::OutputOrder,
        Mutant::NonBacktrackingCatch,
        Mutant::BrokenFrom,
        Mutant::StatelessPut,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mutant::SwappedExceptBind => "swapped-except-bind",
            Mutant::OutputOrder => "output-order",
            Mutant::NonBacktrackingCatch => "non-backtracking-catch",
            Mutant::BrokenFrom => "broken-from",
            Mutant::StatelessPut => "stateless-put",
        }
    }
}

impl fmt::Display for Mutant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mutant {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutant::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown mutant {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub seed: u64,
    /// Largest universe carrier the law suites quantify over.
    pub max_carrier: usize,
    pub budget: Budget,
    pub deep_diagrams: bool,
    pub quick: bool,
    pub with_callcc: bool,
    pub fp_max_len: usize,
    pub fp_max_elem: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mutant: Option<Mutant>,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            seed: 0,
            max_carrier: 3,
            budget: Budget::standard(),
            deep_diagrams: false,
            quick: false,
            with_callcc: false,
            fp_max_len: 4,
            fp_max_elem: 3,
            mutant: None,
        }
    }
}

impl Config {
    pub fn quick() -> Config {
        Config { quick: true, max_carrier: 2, budget: Budget::quick(), ..Config::default() }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.max_carrier > 4 {
            return Err(HarnessError::Config("--max-carrier is at most 4".into()));
        }
        if self.fp_max_len > 8 || self.fp_max_elem > 5 {
            return Err(HarnessError::Config(
                "fastProduct bounds are length <= 8 and elements <= 5".into(),
            ));
        }
        if self.budget.sample == 0 {
            return Err(HarnessError::Config("sample count must be positive".into()));
        }
        Ok(())
    }

    /// Carrier cap for the suites that build lifted operations and
    /// transformed monads.
    pub fn lifting_carrier(&self) -> usize {
        self.max_carrier.min(3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutant_names_round_trip() {
        for m in Mutant::ALL {
            assert_eq!(m.as_str().parse::<Mutant>().unwrap(), m);
        }
        assert!("nope".parse::<Mutant>().is_err());
    }

    #[test]
    fn bounds_are_validated() {
        assert!(Config::default().validate().is_ok());
        let cfg = Config { fp_max_len: 9, ..Config::default() };
        assert!(cfg.validate().is_err());
    }
}
