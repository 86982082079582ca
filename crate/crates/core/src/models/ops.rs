//! Effect signatures and sigma-operations `op_A : E (M A) -> M A`, with the
//! algebraicity classifier.

use std::ops::Deref;
use std::rc::Rc;

use crate::case;
use crate::config::Mutant;
use crate::error::ConstructionError;
use crate::kernel::nat::check_naturality;
use crate::kernel::{monad_functor, mty, Functor, MonadRef, NatTrans};
use crate::models::monads::{base, empty_log, log_append, log_ty, Params};
use crate::observe::Gen;
use crate::report::{LawCtx, Witness};
use crate::ty::Ty;
use crate::value::{Func, Value};

type Component = Rc<dyn Fn(&Ty, &Value) -> Value>;

/// A sigma-operation: signature functor `E`, monad `M`, and components
/// `E (M A) -> M A`.
#[derive(Clone)]
pub struct SigmaOp {
    pub name: String,
    pub sig: Functor,
    pub monad: MonadRef,
    comp: Component,
}

impl SigmaOp {
    pub fn new(
        name: &str,
        sig: &Functor,
        monad: &MonadRef,
        comp: impl Fn(&Ty, &Value) -> Value + 'static,
    ) -> SigmaOp {
        SigmaOp { name: name.into(), sig: sig.clone(), monad: monad.clone(), comp: Rc::new(comp) }
    }

    /// Component at `A`, applied to `t : E (M A)`.
    pub fn at(&self, a: &Ty, t: &Value) -> Value {
        (self.comp)(a, t)
    }

    pub fn component(&self, a: &Ty) -> Func {
        let (comp, a) = (self.comp.clone(), a.clone());
        Func::new(move |t| comp(&a, t))
    }

    /// The operation as a transformation `E ∘ M -> M`.
    pub fn as_nat(&self) -> NatTrans {
        let mf = monad_functor(&self.monad);
        let comp = self.comp.clone();
        NatTrans::new(&self.name, &self.sig.compose(&mf), &mf, move |a, t| comp(a, t))
    }

    /// The carrier `E (M A)`.
    pub fn arg_ty(&self, a: &Ty) -> Ty {
        self.sig.acto(&mty(&self.monad, a))
    }

    /// Enumerated (or sampled) arguments `t : E (M A)`.
    pub fn args(&self, g: &Gen, a: &Ty) -> Vec<Value> {
        let vals = g.inhabitants(&self.arg_ty(a));
        g.subsample(&vals, g.budget().sig_enum_cap)
    }
}

/// A sigma-operation that passed the algebraicity check (or is algebraic
/// by construction, as the output of `psi`).
#[derive(Clone)]
pub struct AlgebraicOp {
    op: SigmaOp,
}

impl AlgebraicOp {
    pub(crate) fn by_construction(op: SigmaOp) -> AlgebraicOp {
        AlgebraicOp { op }
    }

    pub fn op(&self) -> &SigmaOp {
        &self.op
    }
}

impl Deref for AlgebraicOp {
    type Target = SigmaOp;
    fn deref(&self) -> &SigmaOp {
        &self.op
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Algebraic { cases: u64 },
    Counterexample(Witness),
}

#[derive(Clone, Debug)]
pub struct AlgebraicityEvidence {
    pub op: String,
    pub monad: String,
    pub verdict: Verdict,
}

// Signature functors.

/// `X ↦ S -> X`.
pub fn get_sig(s: &Ty) -> Functor {
    let s = s.clone();
    Functor::new(&format!("Get[{}]", s.key()), move |x| Ty::fun(&s, x), |h| {
        let h = h.clone();
        Func::new(move |k| {
            let (h, k) = (h.clone(), k.clone());
            Value::fun(move |s| h.apply(&k.call(s)))
        })
    })
}

/// `X ↦ S × X`.
pub fn put_sig(s: &Ty) -> Functor {
    let s = s.clone();
    Functor::new(&format!("Put[{}]", s.key()), move |x| Ty::pair(&s, x), |h| {
        let h = h.clone();
        Func::new(move |t| Value::pair(t.fst().clone(), h.apply(t.snd())))
    })
}

/// `X ↦ X × (Z -> X)`: a computation and its handler.
pub fn handle_sig(z: &Ty) -> Functor {
    let z = z.clone();
    Functor::new(&format!("Handle[{}]", z.key()), move |x| Ty::pair(x, &Ty::fun(&z, x)), |h| {
        let h = h.clone();
        Func::new(move |t| {
            let (h2, k) = (h.clone(), t.snd().clone());
            Value::pair(h.apply(t.fst()), Value::fun(move |z| h2.apply(&k.call(z))))
        })
    })
}

/// `X ↦ W × X`.
pub fn output_sig() -> Functor {
    Functor::new("Output", |x| Ty::pair(&log_ty(), x), |h| {
        let h = h.clone();
        Func::new(move |t| Value::pair(t.fst().clone(), h.apply(t.snd())))
    })
}

/// `X ↦ X`.
pub fn flush_sig() -> Functor {
    Functor::new("Flush", Ty::clone, Func::clone)
}

/// `X ↦ E -> X`.
pub fn ask_sig(e: &Ty) -> Functor {
    let e = e.clone();
    Functor::new(&format!("Ask[{}]", e.key()), move |x| Ty::fun(&e, x), |h| {
        let h = h.clone();
        Func::new(move |k| {
            let (h, k) = (h.clone(), k.clone());
            Value::fun(move |e| h.apply(&k.call(e)))
        })
    })
}

/// `X ↦ (E -> E) × X`.
pub fn local_sig(e: &Ty) -> Functor {
    let e = e.clone();
    Functor::new(&format!("Local[{}]", e.key()), move |x| Ty::pair(&Ty::fun(&e, &e), x), |h| {
        let h = h.clone();
        Func::new(move |t| Value::pair(t.fst().clone(), h.apply(t.snd())))
    })
}

/// `X ↦ (X -> R) -> R`.
pub fn callcc_sig(r: &Ty) -> Functor {
    let r = r.clone();
    Functor::new(&format!("Callcc[{}]", r.key()), move |x| Ty::fun(&Ty::fun(x, &r), &r), |h| {
        let h = h.clone();
        Func::new(move |t| {
            let (h, t) = (h.clone(), t.clone());
            Value::fun(move |c| t.call(&Func::compose(c.as_func(), &h).into_value()))
        })
    })
}

// Operations. Each takes the monad it acts on, so the state-shaped ones
// also serve monads whose carrier is `S -> ...`.

/// `get k = λs. k s s`.
pub fn get_op(m: &MonadRef, s: &Ty) -> SigmaOp {
    SigmaOp::new("get", &get_sig(s), m, |_, k| {
        let k = k.clone();
        Value::fun(move |s| k.call(s).call(s))
    })
}

/// `put (s', m) = λ_. m s'`.
pub fn put_op(m: &MonadRef, s: &Ty, mutant: Option<Mutant>) -> SigmaOp {
    let stateless = mutant == Some(Mutant::StatelessPut);
    SigmaOp::new("put", &put_sig(s), m, move |_, t| {
        let (s1, k) = (t.fst().clone(), t.snd().clone());
        if stateless {
            Value::fun(move |s| k.call(s))
        } else {
            Value::fun(move |_| k.call(&s1))
        }
    })
}

/// `fail z = inl z`.
pub fn fail_op(m: &MonadRef, z: &Ty) -> SigmaOp {
    SigmaOp::new("fail", &Functor::constant(&format!("Fail[{}]", z.key()), z), m, |_, z| Value::inl(z.clone()))
}

/// `handle (m, h)` runs `h z` when `m` raised `z`.
pub fn handle_op(m: &MonadRef, z: &Ty) -> SigmaOp {
    SigmaOp::new("handle", &handle_sig(z), m, |_, t| match t.fst() {
        Value::Inl(z) => t.snd().call(z),
        other => other.clone(),
    })
}

/// `output (w, m)` emits `w` before the log of `m`.
pub fn output_op(m: &MonadRef, mutant: Option<Mutant>) -> SigmaOp {
    output_with_order(m, mutant != Some(Mutant::OutputOrder), "output")
}

/// The output operation with the log of `m` placed before `w`.
pub fn output_prefix_op(m: &MonadRef) -> SigmaOp {
    output_with_order(m, false, "output-prefix")
}

fn output_with_order(m: &MonadRef, emitted_first: bool, name: &str) -> SigmaOp {
    SigmaOp::new(name, &output_sig(), m, move |_, t| {
        let (w, mm) = (t.fst(), t.snd());
        let log = if emitted_first { log_append(w, mm.snd()) } else { log_append(mm.snd(), w) };
        Value::pair(mm.fst().clone(), log)
    })
}

/// `flush m` discards the log of `m`.
pub fn flush_op(m: &MonadRef) -> SigmaOp {
    SigmaOp::new("flush", &flush_sig(), m, |_, mm| Value::pair(mm.fst().clone(), empty_log()))
}

/// `ask k = λe. k e e`.
pub fn ask_op(m: &MonadRef, e: &Ty) -> SigmaOp {
    SigmaOp::new("ask", &ask_sig(e), m, |_, k| {
        let k = k.clone();
        Value::fun(move |e| k.call(e).call(e))
    })
}

/// `local (f, m) = λe. m (f e)`.
pub fn local_op(m: &MonadRef, e: &Ty) -> SigmaOp {
    SigmaOp::new("local", &local_sig(e), m, |_, t| {
        let (f, k) = (t.fst().clone(), t.snd().clone());
        Value::fun(move |e| k.call(&f.call(e)))
    })
}

/// `abort r = λk. r`.
pub fn abort_op(m: &MonadRef, r: &Ty) -> SigmaOp {
    SigmaOp::new("abort", &Functor::constant(&format!("Abort[{}]", r.key()), r), m, |_, r| {
        let r = r.clone();
        Value::fun(move |_| r.clone())
    })
}

/// `callcc t = λk. t (λm. m k)`.
pub fn callcc_op(m: &MonadRef, r: &Ty) -> SigmaOp {
    SigmaOp::new("callcc", &callcc_sig(r), m, |_, t| {
        let t = t.clone();
        Value::fun(move |k| {
            let k = k.clone();
            t.call(&Value::fun(move |mm| mm.call(&k)))
        })
    })
}

/// A registered operation: its name, the base monad it acts on, and the
/// expected classification.
pub struct OpSpec {
    pub name: &'static str,
    pub base: &'static str,
    pub algebraic: bool,
}

pub const OPS: [OpSpec; 10] = [
    OpSpec { name: "get", base: "state", algebraic: true },
    OpSpec { name: "put", base: "state", algebraic: true },
    OpSpec { name: "fail", base: "exceptZ", algebraic: true },
    OpSpec { name: "handle", base: "exceptZ", algebraic: false },
    OpSpec { name: "output", base: "output", algebraic: true },
    OpSpec { name: "flush", base: "output", algebraic: false },
    OpSpec { name: "ask", base: "env", algebraic: true },
    OpSpec { name: "local", base: "env", algebraic: false },
    OpSpec { name: "abort", base: "cont", algebraic: true },
    OpSpec { name: "callcc", base: "cont", algebraic: true },
];

pub fn op_spec(name: &str) -> Option<&'static OpSpec> {
    OPS.iter().find(|o| o.name == name)
}

/// The operation `name` on its base monad, without checks.
pub fn op(name: &str, p: &Params, mutant: Option<Mutant>) -> Option<SigmaOp> {
    let spec = op_spec(name).map(|s| s.base).or((name == "output-prefix").then_some("output"))?;
    let m = base(spec, p)?;
    Some(match name {
        "get" => get_op(&m, &p.s),
        "put" => put_op(&m, &p.s, mutant),
        "fail" => fail_op(&m, &p.z),
        "handle" => handle_op(&m, &p.z),
        "output" => output_op(&m, mutant),
        "output-prefix" => output_prefix_op(&m),
        "flush" => flush_op(&m),
        "ask" => ask_op(&m, &p.e),
        "local" => local_op(&m, &p.e),
        "abort" => abort_op(&m, &p.r),
        "callcc" => callcc_op(&m, &p.r),
        _ => return None,
    })
}

/// The operation `name`, admitted only if it is natural on `carriers`.
pub fn sigma_operation(
    name: &str,
    p: &Params,
    mutant: Option<Mutant>,
    g: &Gen,
    carriers: &[Ty],
) -> Result<SigmaOp, ConstructionError> {
    let o = op(name, p, mutant).ok_or_else(|| ConstructionError {
        what: format!("operation {name}"),
        law: "registry".into(),
        witness: Witness { case: 0, inputs: vec![], observation: "unknown operation".into() },
    })?;
    let mut ctx = LawCtx::new(g, None);
    check_naturality(&o.as_nat(), carriers, &mut ctx);
    match ctx.into_parts().1 {
        None => Ok(o),
        Some(witness) => Err(ConstructionError { what: format!("operation {name}"), law: "naturality".into(), witness }),
    }
}

/// `op_A t >>= f = op_B ((E # (>>= f)) t)` for every enumerated `A`, `B`,
/// `f : A -> M B` and `t : E (M A)`.
pub fn algebraicity_law(op: &SigmaOp, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    let m = &op.monad;
    for a in carriers {
        for b in carriers {
            let (mb, fty) = (mty(m, b), Ty::fun(a, &mty(m, b)));
            let ts = op.args(g, a);
            let fs = g.inhabitants(&fty);
            for ix in g.cases(&[ts.len(), fs.len()]) {
                let (t, fv) = (&ts[ix[0]], &fs[ix[1]]);
                case!(ctx, |g| {
                    let f = fv.as_func().clone();
                    let lhs = m.bind(&op.at(a, t), &f);
                    let m2 = m.clone();
                    let bind_f = Func::new(move |x| m2.bind(x, &f));
                    let rhs = op.at(b, &op.sig.actm(&bind_f).apply(t));
                    g.expect_eq(&mb, &lhs, &rhs).map_err(|e| {
                        e.input("A", a.to_string())
                            .input("B", b.to_string())
                            .input("f", g.render(&fty, fv))
                            .input("t", g.render(&op.arg_ty(a), t))
                    })
                });
            }
        }
    }
}

pub fn algebraicity_check(op: &SigmaOp, g: &Gen, carriers: &[Ty]) -> AlgebraicityEvidence {
    let mut ctx = LawCtx::new(g, None);
    algebraicity_law(op, carriers, &mut ctx);
    let (cases, failure) = ctx.into_parts();
    AlgebraicityEvidence {
        op: op.name.clone(),
        monad: op.monad.name(),
        verdict: match failure {
            None => Verdict::Algebraic { cases },
            Some(w) => Verdict::Counterexample(w),
        },
    }
}

/// Tags `op` as algebraic given passing evidence about it.
pub fn as_algebraic(op: &SigmaOp, ev: &AlgebraicityEvidence) -> Result<AlgebraicOp, ConstructionError> {
    if ev.op != op.name || ev.monad != op.monad.name() {
        return Err(ConstructionError {
            what: format!("algebraic operation {}", op.name),
            law: "evidence".into(),
            witness: Witness {
                case: 0,
                inputs: vec![],
                observation: format!("evidence is about {} on {}", ev.op, ev.monad),
            },
        });
    }
    match &ev.verdict {
        Verdict::Algebraic { .. } => Ok(AlgebraicOp::by_construction(op.clone())),
        Verdict::Counterexample(w) => Err(ConstructionError {
            what: format!("algebraic operation {}", op.name),
            law: "algebraicity".into(),
            witness: w.clone(),
        }),
    }
}

/// `op1_A t ≡ op2_A t` for every enumerated `A` and `t`.
pub fn sigma_equal(op1: &SigmaOp, op2: &SigmaOp, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    for a in carriers {
        let ma = mty(&op1.monad, a);
        for t in op1.args(g, a) {
            case!(ctx, |g| g
                .expect_eq(&ma, &op1.at(a, &t), &op2.at(a, &t))
                .map_err(|e| e.input("A", a.to_string()).input("t", g.render(&op1.arg_ty(a), &t))));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(name: &str) -> Verdict {
        let p = Params::standard();
        let g = Gen::with_defaults();
        let o = op(name, &p, None).unwrap();
        algebraicity_check(&o, &g, &g.carriers(2)).verdict
    }

    #[test]
    fn classification() {
        for spec in OPS.iter().filter(|s| s.name != "callcc") {
            let v = check(spec.name);
            assert_eq!(matches!(v, Verdict::Algebraic { .. }), spec.algebraic, "{}: {v:?}", spec.name);
        }
        assert!(matches!(check("output-prefix"), Verdict::Counterexample(_)));
    }

    #[test]
    fn get_then_ret_is_the_usual_get() {
        let p = Params::standard();
        let g = op("get", &p, None).unwrap();
        let ret = crate::kernel::ret_fn(&g.monad).into_value();
        let usual = g.at(&p.s, &ret);
        for s in 0..2 {
            let r = usual.call(&Value::Atom(s));
            assert_eq!((r.fst().as_atom(), r.snd().as_atom()), (s, s));
        }
    }

    #[test]
    fn local_is_refused_as_algebraic() {
        let p = Params::standard();
        let g = Gen::with_defaults();
        let o = op("local", &p, None).unwrap();
        let ev = algebraicity_check(&o, &g, &g.carriers(2));
        assert!(as_algebraic(&o, &ev).is_err());
        let get = op("get", &p, None).unwrap();
        let ev = algebraicity_check(&get, &g, &g.carriers(2));
        assert!(as_algebraic(&get, &ev).is_ok());
    }

    #[test]
    fn every_registered_operation_is_natural() {
        let p = Params::standard();
        let g = Gen::with_defaults();
        for spec in OPS.iter() {
            assert!(sigma_operation(spec.name, &p, None, &g, &g.carriers(2)).is_ok(), "{}", spec.name);
        }
    }
}
