//! The codensity transformer, `from`, the naturality check standing in for
//! parametricity, `kappa`/`psik`, and uniform lifting of sigma-operations
//! along functorial transformers.
//!
//! A value of `codensityT M A` is a family: given an answer type `B` and a
//! continuation `k : A -> M B` it produces an `M B`. Families are compared
//! by probing every answer type of size at most `Budget::answer_max` under
//! every enumerated (or sampled) continuation.

use std::rc::Rc;

use crate::case;
use crate::config::Mutant;
use crate::error::ConstructionError;
use crate::kernel::{fmap, map_fn, monad_functor, mty, ret_fn, Monad, MonadRef, NatTrans};
use crate::lifting::{alifting, psi};
use crate::models::ops::{AlgebraicOp, SigmaOp};
use crate::observe::Gen;
use crate::report::LawCtx;
use crate::transformers::{Functorial, MonadMorphism, Transformer};
use crate::ty::{Ty, TyKind};
use crate::value::{Func, Poly, Value};

/// Lifted computations included when enumerating `codensityT M A`.
const LIFT_SAMPLE: usize = 16;

pub struct Codensity {
    pub m: MonadRef,
}

/// `retK a = λB k. k a`.
pub fn ret_k(a: &Value) -> Value {
    let a = a.clone();
    Value::Poly(Poly::new(move |_, k| k.call(&a)))
}

/// `bindK m f = λC k. m C (λa. f a C k)`.
pub fn bind_k(m: &Value, f: &Func) -> Value {
    let (m, f) = (m.as_poly().clone(), f.clone());
    Value::Poly(Poly::new(move |c, k| {
        let (f, c2, k) = (f.clone(), c.clone(), k.clone());
        m.inst(c, &Value::fun(move |a| f.apply(a).as_poly().inst(&c2, &k)))
    }))
}

/// `liftK m = λB k. m >>= k`.
pub fn lift_k(m: &MonadRef, x: &Value) -> Value {
    let (m, x) = (m.clone(), x.clone());
    Value::Poly(Poly::new(move |_, k| m.bind(&x, k.as_func())))
}

impl Monad for Codensity {
    fn name(&self) -> String {
        format!("K({})", self.m.name())
    }
    fn carrier(&self, _a: &Ty) -> Option<Ty> {
        None
    }
    fn ret(&self, x: &Value) -> Value {
        ret_k(x)
    }
    fn bind(&self, m: &Value, f: &Func) -> Value {
        bind_k(m, f)
    }

    /// `retK a` for every `a`, and `liftK m` for a sample of `m : M A`.
    fn inhabitants(&self, a: &Ty, g: &Gen) -> Rc<[Value]> {
        let mut out: Vec<Value> = g.inhabitants(a).iter().map(ret_k).collect();
        let ms = g.inhabitants(&mty(&self.m, a));
        out.extend(g.subsample(&ms, LIFT_SAMPLE).iter().map(|x| lift_k(&self.m, x)));
        out.into()
    }

    fn diff(&self, a: &Ty, x: &Value, y: &Value, g: &Gen) -> Option<String> {
        let (px, py) = (x.as_poly(), y.as_poly());
        for b in g.answer_types() {
            let mb = mty(&self.m, &b);
            let kty = Ty::fun(a, &mb);
            for k in g.inhabitants(&kty).iter() {
                if let Some(d) = g.diff(&mb, &px.inst(&b, k), &py.inst(&b, k)) {
                    return Some(format!("at B={b}, k={}: {d}", g.render(&kty, k)));
                }
            }
        }
        None
    }

    fn render(&self, a: &Ty, v: &Value, g: &Gen, depth: usize) -> String {
        let ma = mty(&self.m, a);
        format!("K[{}]", g.render_depth(&ma, &v.as_poly().inst(a, &ret_fn(&self.m).into_value()), depth))
    }
}

pub struct CodensityT;

impl Transformer for CodensityT {
    fn name(&self) -> String {
        "codensityT".into()
    }
    fn apply(&self, m: &MonadRef) -> MonadRef {
        Rc::new(Codensity { m: m.clone() })
    }
    fn lift(&self, m: &MonadRef) -> MonadMorphism {
        let inner = m.clone();
        MonadMorphism::new(&format!("Lift codensityT {}", m.name()), m, &self.apply(m), move |_, x| lift_k(&inner, x))
    }
}

/// A canonical value of a data type, if it has one.
fn first_value(a: &Ty) -> Option<Value> {
    Some(match a.kind() {
        TyKind::Unit => Value::Unit,
        TyKind::Fin(f) => f.values().next()?,
        TyKind::Nat(_) => Value::Nat(0),
        TyKind::Pair(x, y) => Value::pair(first_value(x)?, first_value(y)?),
        TyKind::Sum(x, y) => first_value(x).map(Value::inl).or_else(|| first_value(y).map(Value::inr))?,
        TyKind::List(..) => Value::list(vec![]),
        TyKind::Fun(_, y) => {
            let v = first_value(y)?;
            Value::fun(move |_| v.clone())
        }
        TyKind::Monadic(..) => return None,
    })
}

/// `from : codensityT M -> M`, component `c ↦ c A Ret`. The `BrokenFrom`
/// mutant instantiates with a constant continuation instead.
pub fn from_nt(m: &MonadRef, mutant: Option<Mutant>) -> NatTrans {
    let km: MonadRef = Rc::new(Codensity { m: m.clone() });
    let broken = mutant == Some(Mutant::BrokenFrom);
    let m2 = m.clone();
    NatTrans::new("from", &monad_functor(&km), &monad_functor(m), move |a, c| {
        let ret = ret_fn(&m2);
        let k = match first_value(a) {
            Some(v) if broken => Func::constant(m2.ret(&v)),
            _ => ret,
        };
        c.as_poly().inst(a, &k.into_value())
    })
}

/// `M # h ∘ c_{B1} = c_{B2} ∘ (k ↦ (M # h) ∘ k)` for every answer type pair,
/// `h : B1 -> B2` and `k : A -> M B1`.
pub fn naturality_mk_law(m: &MonadRef, a: &Ty, comps: &[Value], ctx: &mut LawCtx) {
    let g = ctx.g;
    let answers = g.answer_types();
    for (ci, c) in comps.iter().enumerate() {
        for b1 in &answers {
            for b2 in &answers {
                let (hty, kty, mb2) = (Ty::fun(b1, b2), Ty::fun(a, &mty(m, b1)), mty(m, b2));
                let hs = g.inhabitants(&hty);
                let ks = g.inhabitants(&kty);
                for ix in g.cases(&[hs.len(), ks.len()]) {
                    let (hv, kv) = (&hs[ix[0]], &ks[ix[1]]);
                    case!(ctx, |g| {
                        let p = c.as_poly();
                        let h = hv.as_func();
                        let lhs = fmap(m, h, &p.inst(b1, kv));
                        let rhs = p.inst(b2, &kv.as_func().then(&map_fn(m, h)).into_value());
                        g.expect_eq(&mb2, &lhs, &rhs).map_err(|e| {
                            e.input("A", a.to_string())
                                .input("c", format!("#{ci}"))
                                .input("B1", b1.to_string())
                                .input("B2", b2.to_string())
                                .input("h", g.render(&hty, hv))
                                .input("k", g.render(&kty, kv))
                        })
                    });
                }
            }
        }
    }
}

/// A family that looks at the size of its answer type: at two-element
/// answer types it relabels the result. Not natural.
pub fn non_parametric_family(m: &MonadRef, a0: &Value) -> Value {
    let (m, a0) = (m.clone(), a0.clone());
    Value::Poly(Poly::new(move |b, k| {
        let x = k.call(&a0);
        if b.card() == Some(2) {
            fmap(&m, &Func::new(|v| Value::Atom(1 - v.as_atom())), &x)
        } else {
            x
        }
    }))
}

/// Computations built from `retK`, `bindK` and `liftK` at `A`.
pub fn generated_terms(m: &MonadRef, a: &Ty, g: &Gen) -> Vec<Value> {
    let km: MonadRef = Rc::new(Codensity { m: m.clone() });
    let base: Vec<Value> = km.inhabitants(a, g).to_vec();
    let mut out = base.clone();
    let fs = g.inhabitants(&Ty::fun(a, &Ty::monadic(&km, a)));
    for (i, c) in base.iter().enumerate().take(8) {
        let f = &fs[i % fs.len().max(1)];
        if !fs.is_empty() {
            out.push(bind_k(c, f.as_func()));
        }
    }
    out
}

/// Refuses `from` unless every computation in `comps` passes
/// `naturality_mk_law`.
pub fn from_checked(
    m: &MonadRef,
    a: &Ty,
    comps: &[Value],
    mutant: Option<Mutant>,
    g: &Gen,
) -> Result<NatTrans, ConstructionError> {
    let mut ctx = LawCtx::new(g, None);
    naturality_mk_law(m, a, comps, &mut ctx);
    match ctx.into_parts().1 {
        None => Ok(from_nt(m, mutant)),
        Some(witness) => Err(ConstructionError { what: "from".into(), law: "naturality-mk".into(), witness }),
    }
}

/// `kappa op : E -> codensityT M`, components `s ↦ λB k. op_B ((E # k) s)`.
pub fn kappa(op: &SigmaOp) -> NatTrans {
    let km: MonadRef = Rc::new(Codensity { m: op.monad.clone() });
    let o = op.clone();
    NatTrans::new(&format!("kappa({})", op.name), &op.sig, &monad_functor(&km), move |_, s| {
        let (o, s) = (o.clone(), s.clone());
        Value::Poly(Poly::new(move |b, k| o.at(b, &o.sig.actm(k.as_func()).apply(&s))))
    })
}

/// `psik op = psi (kappa op)`, an algebraic operation on `codensityT M`.
pub fn psik(op: &SigmaOp) -> AlgebraicOp {
    let km: MonadRef = Rc::new(Codensity { m: op.monad.clone() });
    let p = psi(&kappa(op), &km);
    let mut named = p.op().clone();
    named.name = format!("psik({})", op.name);
    AlgebraicOp::by_construction(named)
}

/// `from_X ∘ psik_X ∘ (E # liftK_X) = op_X`.
pub fn psik_e_law(op: &SigmaOp, mutant: Option<Mutant>, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    let (pk, from) = (psik(op), from_nt(&op.monad, mutant));
    let lift = CodensityT.lift(&op.monad);
    for x in carriers {
        let mx = mty(&op.monad, x);
        let lx = lift.component(x);
        for t in op.args(g, x) {
            case!(ctx, |g| {
                let lhs = from.at(x, &pk.at(x, &op.sig.actm(&lx).apply(&t)));
                g.expect_eq(&mx, &lhs, &op.at(x, &t))
                    .map_err(|e| e.input("X", x.to_string()).input("t", g.render(&op.arg_ty(x), &t)))
            });
        }
    }
}

/// `from ∘ liftK = id` on `M`.
pub fn from_lift_law(m: &MonadRef, mutant: Option<Mutant>, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    let from = from_nt(m, mutant);
    for a in carriers {
        let ma = mty(m, a);
        let xs = g.inhabitants(&ma);
        for x in xs.iter() {
            case!(ctx, |g| g
                .expect_eq(&ma, &from.at(a, &lift_k(m, x)), x)
                .map_err(|e| e.input("A", a.to_string()).input("m", g.render(&ma, x))));
        }
    }
}

/// `op1 ∘v op2 ∘v op3` with `op1 = Hmap t from`, `op2` the algebraic
/// lifting of `psik op` along `Lift t (codensityT M)`, and
/// `op3 = E ## Hmap t liftK`.
pub fn slifting(op: &SigmaOp, t: &dyn Functorial, mutant: Option<Mutant>) -> SigmaOp {
    let m = op.monad.clone();
    let km: MonadRef = Rc::new(Codensity { m: m.clone() });
    let op1 = t.hmap(&km, &m, &from_nt(&m, mutant));
    let op2 = alifting(&psik(op), &t.lift(&km)).expect("psik acts on codensityT M");
    let op3 = t.hmap(&m, &km, &CodensityT.lift(&m).as_nat());
    let sig = op.sig.clone();
    SigmaOp::new(&format!("slift({}, {})", op.name, t.name()), &op.sig, &t.apply(&m), move |x, targ| {
        op1.at(x, &op2.at(x, &sig.actm(&op3.component(x)).apply(targ)))
    })
}

/// Refuses to lift unless `psik op` produces natural computations on the
/// probed arguments.
pub fn slifting_checked(
    op: &SigmaOp,
    t: &dyn Functorial,
    mutant: Option<Mutant>,
    g: &Gen,
    carriers: &[Ty],
) -> Result<SigmaOp, ConstructionError> {
    let pk = psik(op);
    for x in carriers {
        let comps: Vec<Value> = pk.args(g, x).iter().map(|s| pk.at(x, s)).collect();
        from_checked(&op.monad, x, &comps, mutant, g)?;
    }
    Ok(slifting(op, t, mutant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::lifting_law;
    use crate::models::monads::Params;
    use crate::models::ops::op;
    use crate::transformers::{transformer, IdentityT};

    fn quick(label: &str) -> Gen {
        Gen::new(&crate::Config::quick(), label)
    }

    #[test]
    fn ret_k_probes_to_the_continuation() {
        let k = Value::fun(|a| Value::Atom(1 - a.as_atom()));
        let b = Ty::fin(&crate::ty::FiniteType::indexed("Bool", "b", 2));
        assert_eq!(ret_k(&Value::Atom(0)).as_poly().inst(&b, &k).as_atom(), 1);
    }

    #[test]
    fn from_retracts_lift_on_state() {
        let p = Params::standard();
        let m = crate::models::base("state", &p).unwrap();
        let g = quick("retract");
        let mut ctx = LawCtx::new(&g, None);
        from_lift_law(&m, None, &g.carriers(2), &mut ctx);
        assert!(ctx.failure().is_none());
    }

    #[test]
    fn answer_type_inspection_is_not_natural() {
        let p = Params::standard();
        let m = crate::models::base("identity", &p).unwrap();
        let g = quick("nonparam");
        let a = g.carriers(2).pop().unwrap();
        let c = non_parametric_family(&m, &Value::Atom(0));
        let mut ctx = LawCtx::new(&g, None);
        naturality_mk_law(&m, &a, std::slice::from_ref(&c), &mut ctx);
        assert!(ctx.failure().is_some());
        assert!(from_checked(&m, &a, &[c], None, &g).is_err());
    }

    #[test]
    fn local_lifts_along_except_through_codensity() {
        let p = Params::standard();
        let local = op("local", &p, None).unwrap();
        let t = transformer("exceptT", &p, None).unwrap();
        let g = quick("local");
        let lifted = slifting_checked(&local, t.functorial().unwrap(), None, &g, &g.carriers(1)).unwrap();
        let mut ctx = LawCtx::new(&g, None);
        lifting_law(&local, &t.lift(&local.monad), &lifted, &g.carriers(2), &mut ctx);
        assert!(ctx.failure().is_none(), "{:?}", ctx.failure());
    }

    #[test]
    fn slifting_along_identity_is_the_operation() {
        let p = Params::standard();
        let get = op("get", &p, None).unwrap();
        let g = quick("idt");
        let lifted = slifting(&get, &IdentityT, None);
        let mut ctx = LawCtx::new(&g, None);
        crate::models::ops::sigma_equal(&lifted, &get, &g.carriers(2), &mut ctx);
        assert!(ctx.failure().is_none());
    }
}
