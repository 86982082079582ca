//! Observation contexts: enumeration of inhabitants, observational equality,
//! and rendering of values for witnesses.
//!
//! Equality is always extensional. Functions are compared pointwise over the
//! enumerated inhabitants of their domain, so a state computation is run at
//! every state, a continuation computation under every continuation, and a
//! monadic carrier defers to its monad (codensity probes answer types).

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Budget, Config, Mutant};
use crate::report::{CaseFailure, CaseResult};
use crate::ty::{tabulated, Ty, TyKind, Universe};
use crate::value::Value;

const RENDER_LIMIT: usize = 600;
const RENDER_ENTRIES: usize = 12;

/// Per-law generation state. Not shared across threads; every law builds its
/// own, seeded from the run seed and the law id.
pub struct Gen {
    budget: Budget,
    universe: Universe,
    seed: u64,
    max_carrier: usize,
    mutant: Option<Mutant>,
    label_hash: u64,
    cache: RefCell<HashMap<String, Rc<[Value]>>>,
    sampled: Cell<bool>,
}

/// FNV-1a, used to derive stable per-law seeds.
pub fn stable_hash(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl Gen {
    pub fn new(cfg: &Config, label: &str) -> Gen {
        let seed = cfg.seed;
        Gen {
            budget: cfg.budget.clone(),
            universe: Universe::with_max(cfg.max_carrier.max(cfg.budget.answer_max)),
            seed,
            max_carrier: cfg.max_carrier,
            mutant: cfg.mutant,
            label_hash: stable_hash(label),
            cache: RefCell::new(HashMap::new()),
            sampled: Cell::new(false),
        }
    }

    /// A context with default budgets, for unit tests and ad-hoc checks.
    pub fn with_defaults() -> Gen {
        Gen::new(&Config::default(), "default")
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mutant(&self) -> Option<Mutant> {
        self.mutant
    }

    /// Universe carriers of size `<= max`, never beyond the configured cap.
    pub fn carriers(&self, max: usize) -> Vec<Ty> {
        self.universe.upto(max.min(self.max_carrier))
    }

    /// The carriers the law suites quantify over.
    pub fn law_carriers(&self) -> Vec<Ty> {
        self.universe.upto(self.max_carrier)
    }

    /// Answer types at which codensity computations are probed.
    pub fn answer_types(&self) -> Vec<Ty> {
        self.universe.upto(self.budget.answer_max)
    }

    pub fn mark_sampled(&self) {
        self.sampled.set(true);
    }

    pub fn was_sampled(&self) -> bool {
        self.sampled.get()
    }

    /// A generator keyed by what it is used for, so that samples do not
    /// depend on the order in which cases are evaluated (replay skips cases).
    fn rng_for(&self, key: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ self.label_hash ^ stable_hash(key).rotate_left(17))
    }

    /// Inhabitants of `ty`: every value when the carrier is within budget,
    /// otherwise a seeded sample (and the context is marked as sampled).
    pub fn inhabitants(&self, ty: &Ty) -> Rc<[Value]> {
        let key = ty.key();
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let vals: Rc<[Value]> = self.generate(ty).into();
        self.cache.borrow_mut().insert(key, vals.clone());
        vals
    }

    fn generate(&self, ty: &Ty) -> Vec<Value> {
        if let TyKind::Monadic(m, a) = ty.kind() {
            return m.inhabitants(a, self).to_vec();
        }
        if ty.is_data() {
            let cap = match ty.kind() {
                TyKind::Fun(..) => self.budget.fn_enum_cap as u128,
                _ => self.budget.value_cap as u128,
            };
            if ty.card().is_some_and(|c| c <= cap) {
                return ty.values();
            }
        }
        match ty.kind() {
            TyKind::Pair(a, b) => {
                let (xs, ys) = (self.inhabitants(a), self.inhabitants(b));
                self.tuples(&[xs.len(), ys.len()], self.budget.value_cap)
                    .into_iter()
                    .map(|ix| Value::pair(xs[ix[0]].clone(), ys[ix[1]].clone()))
                    .collect()
            }
            TyKind::Sum(a, b) => {
                let xs = self.inhabitants(a);
                let ys = self.inhabitants(b);
                xs.iter().cloned().map(Value::inl).chain(ys.iter().cloned().map(Value::inr)).collect()
            }
            TyKind::List(a, cap) => {
                let xs = self.inhabitants(a);
                let mut out = vec![Value::list(vec![])];
                for len in 1..=*cap {
                    let sizes = vec![xs.len(); len];
                    for ix in self.tuples(&sizes, self.budget.value_cap) {
                        out.push(Value::list(ix.iter().map(|&i| xs[i].clone()).collect()));
                    }
                }
                out
            }
            TyKind::Fun(dom, cod) => self.generate_functions(dom, cod),
            TyKind::Nat(n) => {
                self.mark_sampled();
                (0..(*n).min(self.budget.value_cap as u64)).map(Value::Nat).collect()
            }
            TyKind::Unit | TyKind::Fin(_) | TyKind::Monadic(..) => unreachable!("handled above"),
        }
    }

    fn generate_functions(&self, dom: &Ty, cod: &Ty) -> Vec<Value> {
        let cods = self.inhabitants(cod);
        let dom_card = dom.card().filter(|&c| dom.is_data() && c <= self.budget.value_cap as u128);
        let Some(n) = dom_card else {
            // Domain not indexable: constant functions only.
            self.mark_sampled();
            return cods.iter().take(self.budget.sample).cloned().map(|c| Value::fun(move |_| c.clone())).collect();
        };
        let n = n as usize;
        if n == 0 {
            return vec![tabulated(dom, vec![]).into_value()];
        }
        if cods.is_empty() {
            return vec![];
        }
        let total = (cods.len() as u128).checked_pow(n as u32);
        if total.is_some_and(|t| t <= self.budget.fn_enum_cap as u128) {
            let total = total.unwrap() as usize;
            return (0..total)
                .map(|k| {
                    let mut rest = k;
                    let table = (0..n)
                        .map(|_| {
                            let v = cods[rest % cods.len()].clone();
                            rest /= cods.len();
                            v
                        })
                        .collect();
                    tabulated(dom, table).into_value()
                })
                .collect();
        }
        self.mark_sampled();
        let mut rng = self.rng_for(&format!("fn:{}->{}", dom.key(), cod.key()));
        let sample = self.budget.sample;
        let constants = cods.len().min(sample / 4);
        let mut out: Vec<Value> = (0..constants)
            .map(|i| tabulated(dom, vec![cods[i].clone(); n]).into_value())
            .collect();
        while out.len() < sample {
            let table = (0..n).map(|_| cods[rng.gen_range(0..cods.len())].clone()).collect();
            out.push(tabulated(dom, table).into_value());
        }
        out
    }

    /// Index tuples over the given dimension sizes: all of them when the
    /// product is within `cap`, otherwise a sorted seeded sample of `cap`.
    pub fn tuples(&self, sizes: &[usize], cap: usize) -> Vec<Vec<usize>> {
        let mut rng = self.rng_for(&format!("tuples:{sizes:?}:{cap}"));
        let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
        let indices: Vec<usize> = match total {
            Some(0) => return vec![],
            Some(t) if t <= cap => (0..t).collect(),
            Some(t) => {
                self.mark_sampled();
                let mut v = index::sample(&mut rng, t, cap).into_vec();
                v.sort_unstable();
                v
            }
            None => {
                self.mark_sampled();
                let mut out = Vec::with_capacity(cap);
                for _ in 0..cap {
                    out.push(sizes.iter().map(|&s| rng.gen_range(0..s)).collect());
                }
                return out;
            }
        };
        indices
            .into_iter()
            .map(|mut k| {
                let mut ix = vec![0; sizes.len()];
                for (slot, &s) in ix.iter_mut().zip(sizes).rev() {
                    *slot = k % s;
                    k /= s;
                }
                ix
            })
            .collect()
    }

    /// Tuples bounded by the law case cap.
    pub fn cases(&self, sizes: &[usize]) -> Vec<Vec<usize>> {
        self.tuples(sizes, self.budget.case_cap)
    }

    /// A deterministic prefix-or-sample of `vals` of at most `cap` elements.
    pub fn subsample(&self, vals: &[Value], cap: usize) -> Vec<Value> {
        if vals.len() <= cap {
            return vals.to_vec();
        }
        self.tuples(&[vals.len()], cap).into_iter().map(|ix| vals[ix[0]].clone()).collect()
    }

    /// `None` when `x` and `y` agree under every enumerated observation;
    /// otherwise a description of a distinguishing one.
    pub fn diff(&self, ty: &Ty, x: &Value, y: &Value) -> Option<String> {
        if let Some(eq) = x.structural_eq(y) {
            return (!eq).then(|| format!("{} ≠ {}", self.render(ty, x), self.render(ty, y)));
        }
        match ty.kind() {
            TyKind::Pair(a, b) => self
                .diff(a, x.fst(), y.fst())
                .map(|d| format!("fst: {d}"))
                .or_else(|| self.diff(b, x.snd(), y.snd()).map(|d| format!("snd: {d}"))),
            TyKind::Sum(a, b) => match (x, y) {
                (Value::Inl(p), Value::Inl(q)) => self.diff(a, p, q).map(|d| format!("inl: {d}")),
                (Value::Inr(p), Value::Inr(q)) => self.diff(b, p, q).map(|d| format!("inr: {d}")),
                _ => Some(format!("{} ≠ {}", self.render(ty, x), self.render(ty, y))),
            },
            TyKind::List(a, _) => {
                let (xs, ys) = (x.as_list(), y.as_list());
                if xs.len() != ys.len() {
                    return Some(format!("lengths {} ≠ {}", xs.len(), ys.len()));
                }
                xs.iter()
                    .zip(ys.iter())
                    .enumerate()
                    .find_map(|(i, (p, q))| self.diff(a, p, q).map(|d| format!("[{i}]: {d}")))
            }
            TyKind::Fun(dom, cod) => {
                let (f, h) = (x.as_func(), y.as_func());
                let doms = self.inhabitants(dom);
                doms.iter().find_map(|d| {
                    self.diff(cod, &f.apply(d), &h.apply(d))
                        .map(|e| format!("at {}: {e}", self.render(dom, d)))
                })
            }
            TyKind::Monadic(m, a) => m.diff(a, x, y, self),
            TyKind::Unit | TyKind::Fin(_) | TyKind::Nat(_) => unreachable!("structural"),
        }
    }

    pub fn eq(&self, ty: &Ty, x: &Value, y: &Value) -> bool {
        self.diff(ty, x, y).is_none()
    }

    pub fn expect_eq(&self, ty: &Ty, lhs: &Value, rhs: &Value) -> CaseResult {
        match self.diff(ty, lhs, rhs) {
            None => Ok(()),
            Some(obs) => Err(CaseFailure::new(obs)),
        }
    }

    pub fn render(&self, ty: &Ty, v: &Value) -> String {
        let mut s = self.render_depth(ty, v, 0);
        if s.chars().count() > RENDER_LIMIT {
            s = s.chars().take(RENDER_LIMIT).collect::<String>() + "…";
        }
        s
    }

    pub(crate) fn render_depth(&self, ty: &Ty, v: &Value, depth: usize) -> String {
        match (ty.kind(), v) {
            (_, Value::Unit) => "tt".into(),
            (TyKind::Fin(f), Value::Atom(i)) => f.atom_name(*i).to_string(),
            (_, Value::Nat(n)) => n.to_string(),
            (TyKind::Pair(a, b), Value::Pair(p)) => {
                format!("({}, {})", self.render_depth(a, &p.0, depth), self.render_depth(b, &p.1, depth))
            }
            (TyKind::Sum(a, _), Value::Inl(x)) => format!("inl {}", self.render_depth(a, x, depth)),
            (TyKind::Sum(_, b), Value::Inr(x)) => format!("inr {}", self.render_depth(b, x, depth)),
            (TyKind::List(a, _), Value::List(items)) => format!(
                "[{}]",
                items.iter().map(|x| self.render_depth(a, x, depth)).collect::<Vec<_>>().join(", ")
            ),
            (TyKind::Fun(dom, cod), Value::Fun(f)) => {
                if depth >= 2 {
                    return "<fn>".into();
                }
                let doms = self.inhabitants(dom);
                let mut parts: Vec<String> = doms
                    .iter()
                    .take(RENDER_ENTRIES)
                    .map(|d| {
                        format!(
                            "{} ↦ {}",
                            self.render_depth(dom, d, depth + 1),
                            self.render_depth(cod, &f.apply(d), depth + 1)
                        )
                    })
                    .collect();
                if doms.len() > RENDER_ENTRIES {
                    parts.push("…".into());
                }
                format!("{{{}}}", parts.join(", "))
            }
            (TyKind::Monadic(m, a), _) => m.render(a, v, self, depth),
            (_, other) => format!("{other:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ty::FiniteType;

    fn b() -> Ty {
        Ty::fin(&FiniteType::indexed("Bool", "b", 2))
    }

    #[test]
    fn small_function_spaces_are_exhaustive() {
        let g = Gen::with_defaults();
        let fs = g.inhabitants(&Ty::fun(&b(), &b()));
        assert_eq!(fs.len(), 4);
        assert!(!g.was_sampled());
    }

    #[test]
    fn large_function_spaces_are_sampled_deterministically() {
        let tri = Ty::fin(&FiniteType::indexed("Tri", "t", 3));
        let ty = Ty::fun(&Ty::pair(&tri, &tri), &tri); // 3^9 functions
        let g1 = Gen::with_defaults();
        let g2 = Gen::with_defaults();
        let a = g1.inhabitants(&ty);
        let c = g2.inhabitants(&ty);
        assert_eq!(a.len(), 64);
        assert!(g1.was_sampled());
        for (x, y) in a.iter().zip(c.iter()) {
            assert!(g1.eq(&ty, x, y));
        }
    }

    #[test]
    fn functions_compared_pointwise() {
        let g = Gen::with_defaults();
        let ty = Ty::fun(&b(), &b());
        let id = Value::fun(|x| x.clone());
        let not = Value::fun(|x| Value::Atom(1 - x.as_atom()));
        let id2 = Value::fun(|x| Value::Atom(x.as_atom()));
        assert!(g.eq(&ty, &id, &id2));
        let d = g.diff(&ty, &id, &not).unwrap();
        assert!(d.starts_with("at b0"), "{d}");
    }

    #[test]
    fn tuples_respect_cap() {
        let g = Gen::with_defaults();
        assert_eq!(g.tuples(&[3, 4], 100).len(), 12);
        assert_eq!(g.tuples(&[3, 0], 100).len(), 0);
        let t = g.tuples(&[100, 100], 50);
        assert_eq!(t.len(), 50);
        assert!(g.was_sampled());
    }
}
