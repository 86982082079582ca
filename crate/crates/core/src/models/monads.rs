//! The base monads: identity, state, exception (and option), list, output,
//! environment and continuation.

use std::rc::Rc;

use crate::kernel::{Monad, MonadRef};
use crate::ty::{FiniteType, Ty};
use crate::value::{Func, Value};

/// Logs are lists over a two-letter alphabet, truncated to this length.
pub const LOG_CAP: usize = 3;
/// Lists are enumerated up to this length.
pub const LIST_CAP: usize = 3;

pub fn log_alphabet() -> FiniteType {
    FiniteType::indexed("W", "w", 2)
}

pub fn log_ty() -> Ty {
    Ty::list(&Ty::fin(&log_alphabet()), LOG_CAP)
}

pub fn empty_log() -> Value {
    Value::list(vec![])
}

/// The log monoid: concatenation keeping the first `LOG_CAP` letters.
pub fn log_append(w1: &Value, w2: &Value) -> Value {
    let (a, b) = (w1.as_list(), w2.as_list());
    if b.is_empty() {
        return w1.clone();
    }
    if a.is_empty() {
        return w2.clone();
    }
    Value::list(a.iter().chain(b.iter()).take(LOG_CAP).cloned().collect())
}

pub struct Identity;

impl Monad for Identity {
    fn name(&self) -> String {
        "identity".into()
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some(a.clone())
    }
    fn ret(&self, x: &Value) -> Value {
        x.clone()
    }
    fn bind(&self, m: &Value, f: &Func) -> Value {
        f.apply(m)
    }
}

/// `S -> A × S`.
pub struct State {
    pub s: Ty,
}

impl Monad for State {
    fn name(&self) -> String {
        format!("state[{}]", self.s.key())
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some(Ty::fun(&self.s, &Ty::pair(a, &self.s)))
    }
    fn ret(&self, x: &Value) -> Value {
        let x = x.clone();
        Value::fun(move |s| Value::pair(x.clone(), s.clone()))
    }
    fn bind(&self, m: &Value, f: &Func) -> Value {
        let (m, f) = (m.clone(), f.clone());
        Value::fun(move |s| {
            let r = m.call(s);
            f.apply(r.fst()).call(r.snd())
        })
    }
}

/// `Z + A`; exceptions on the left. With `Z = unit` this is option.
pub struct Except {
    pub z: Ty,
    pub label: String,
}

impl Monad for Except {
    fn name(&self) -> String {
        format!("{}[{}]", self.label, self.z.key())
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some(Ty::sum(&self.z, a))
    }
    fn ret(&self, x: &Value) -> Value {
        Value::inr(x.clone())
    }
    fn bind(&self, m: &Value, f: &Func) -> Value {
        match m {
            Value::Inr(x) => f.apply(x),
            other => other.clone(),
        }
    }
}

/// Finite lists; values are unbounded, enumeration stops at `LIST_CAP`.
pub struct List;

impl Monad for List {
    fn name(&self) -> String {
        "list".into()
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some(Ty::list(a, LIST_CAP))
    }
    fn ret(&self, x: &Value) -> Value {
        Value::list(vec![x.clone()])
    }
    fn bind(&self, m: &Value, f: &Func) -> Value {
        let mut out = Vec::new();
        for x in m.as_list() {
            out.extend(f.apply(x).as_list().iter().cloned());
        }
        Value::list(out)
    }
}

/// `A × W` over the truncated log monoid.
pub struct Output;

impl Monad for Output {
    fn name(&self) -> String {
        "output".into()
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some(Ty::pair(a, &log_ty()))
    }
    fn ret(&self, x: &Value) -> Value {
        Value::pair(x.clone(), empty_log())
    }
    fn bind(&self, m: &Value, f: &Func) -> Value {
        let r = f.apply(m.fst());
        Value::pair(r.fst().clone(), log_append(m.snd(), r.snd()))
    }
}

/// `E -> A`.
pub struct Env {
    pub e: Ty,
}

impl Monad for Env {
    fn name(&self) -> String {
        format!("env[{}]", self.e.key())
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some(Ty::fun(&self.e, a))
    }
    fn ret(&self, x: &Value) -> Value {
        let x = x.clone();
        Value::fun(move |_| x.clone())
    }
    fn bind(&self, m: &Value, f: &Func) -> Value {
        let (m, f) = (m.clone(), f.clone());
        Value::fun(move |e| f.apply(&m.call(e)).call(e))
    }
}

/// `(A -> R) -> R`.
pub struct Cont {
    pub r: Ty,
}

impl Monad for Cont {
    fn name(&self) -> String {
        format!("cont[{}]", self.r.key())
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some(Ty::fun(&Ty::fun(a, &self.r), &self.r))
    }
    fn ret(&self, x: &Value) -> Value {
        let x = x.clone();
        Value::fun(move |k| k.call(&x))
    }
    fn bind(&self, m: &Value, f: &Func) -> Value {
        let (m, f) = (m.clone(), f.clone());
        Value::fun(move |k| {
            let (f, k) = (f.clone(), k.clone());
            m.call(&Value::fun(move |a| f.apply(a).call(&k)))
        })
    }
}

/// Parameters of the registered models.
#[derive(Clone)]
pub struct Params {
    pub s: Ty,
    pub z: Ty,
    pub e: Ty,
    pub r: Ty,
}

impl Params {
    pub fn standard() -> Params {
        Params {
            s: Ty::fin(&FiniteType::indexed("S", "s", 2)),
            z: Ty::fin(&FiniteType::indexed("Z", "z", 2)),
            e: Ty::fin(&FiniteType::indexed("Env", "e", 2)),
            r: Ty::fin(&FiniteType::indexed("R", "r", 2)),
        }
    }
}

/// Registry names of the base monads.
pub const BASE_MONADS: [&str; 7] = ["identity", "state", "exceptZ", "list", "output", "env", "cont"];

/// The base monad registered under `name` (plus `option`).
pub fn base(name: &str, p: &Params) -> Option<MonadRef> {
    let m: MonadRef = match name {
        "identity" => Rc::new(Identity),
        "state" => Rc::new(State { s: p.s.clone() }),
        "exceptZ" => Rc::new(Except { z: p.z.clone(), label: "exception".into() }),
        "option" => Rc::new(Except { z: Ty::unit(), label: "option".into() }),
        "list" => Rc::new(List),
        "output" => Rc::new(Output),
        "env" => Rc::new(Env { e: p.e.clone() }),
        "cont" => Rc::new(Cont { r: p.r.clone() }),
        _ => return None,
    };
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::monad::{assoc_law, left_unit_law, right_unit_law};
    use crate::observe::Gen;
    use crate::report::LawCtx;

    #[test]
    fn log_monoid_is_associative_and_unital() {
        let g = Gen::with_defaults();
        let ws = g.inhabitants(&log_ty());
        for a in ws.iter() {
            assert!(g.eq(&log_ty(), &log_append(a, &empty_log()), a));
            assert!(g.eq(&log_ty(), &log_append(&empty_log(), a), a));
            for b in ws.iter() {
                for c in ws.iter() {
                    let l = log_append(&log_append(a, b), c);
                    let r = log_append(a, &log_append(b, c));
                    assert!(g.eq(&log_ty(), &l, &r));
                }
            }
        }
    }

    #[test]
    fn state_ret_pairs_with_the_state() {
        let p = Params::standard();
        let m = base("state", &p).unwrap();
        let r = m.ret(&Value::Atom(1)).call(&Value::Atom(0));
        assert_eq!(r.fst().as_atom(), 1);
        assert_eq!(r.snd().as_atom(), 0);
    }

    #[test]
    fn base_monads_satisfy_the_laws_on_small_carriers() {
        let p = Params::standard();
        for name in BASE_MONADS {
            let m = base(name, &p).unwrap();
            let g = Gen::new(&crate::Config::quick(), name);
            let cs = g.carriers(2);
            for law in [left_unit_law, right_unit_law, assoc_law] {
                let mut ctx = LawCtx::new(&g, None);
                law(&m, &cs, &mut ctx);
                assert!(ctx.failure().is_none(), "{name}: {:?}", ctx.failure());
            }
        }
    }
}
