use std::rc::Rc;

use crate::case;
use crate::error::ConstructionError;
use crate::kernel::functor::Functor;
use crate::observe::Gen;
use crate::report::{LawCtx, LawReport, Outcome, Witness};
use crate::ty::Ty;
use crate::value::{Func, Value};

/// A monad over the carrier universe.
///
/// Most monads have a first-order representation (`carrier` returns the
/// data type of `M A`) and inherit enumeration and observational equality
/// from it. Monads whose values are families (codensity) return `None` and
/// implement `inhabitants`, `diff` and `render` themselves.
pub trait Monad {
    /// Unique among the monads of one run: it keys the enumeration cache.
    fn name(&self) -> String;
    fn carrier(&self, a: &Ty) -> Option<Ty>;
    fn ret(&self, x: &Value) -> Value;
    fn bind(&self, m: &Value, f: &Func) -> Value;

    fn inhabitants(&self, a: &Ty, g: &Gen) -> Rc<[Value]> {
        g.inhabitants(&self.carrier(a).expect("opaque monad must enumerate its own values"))
    }

    fn diff(&self, a: &Ty, x: &Value, y: &Value, g: &Gen) -> Option<String> {
        g.diff(&self.carrier(a).expect("opaque monad must compare its own values"), x, y)
    }

    fn render(&self, a: &Ty, v: &Value, g: &Gen, depth: usize) -> String {
        match self.carrier(a) {
            Some(c) => g.render_depth(&c, v, depth),
            None => "<computation>".into(),
        }
    }
}

pub type MonadRef = Rc<dyn Monad>;

/// The carrier of `M A`: its representation when it has one.
pub fn mty(m: &MonadRef, a: &Ty) -> Ty {
    m.carrier(a).unwrap_or_else(|| Ty::monadic(m, a))
}

/// `Ret` as a function value.
pub fn ret_fn(m: &MonadRef) -> Func {
    let m = m.clone();
    Func::new(move |x| m.ret(x))
}

/// `M # h` applied to `x`, derived from `bind` and `ret`.
pub fn fmap(m: &MonadRef, h: &Func, x: &Value) -> Value {
    m.bind(x, &h.then(&ret_fn(m)))
}

/// `M # h`.
pub fn map_fn(m: &MonadRef, h: &Func) -> Func {
    let (m, h) = (m.clone(), h.clone());
    Func::new(move |x| fmap(&m, &h, x))
}

/// `Join = bind(·, id)`.
pub fn join(m: &MonadRef, mm: &Value) -> Value {
    m.bind(mm, &Func::id())
}

/// The underlying functor of `m`.
pub fn monad_functor(m: &MonadRef) -> Functor {
    let (m1, m2) = (m.clone(), m.clone());
    Functor::new(&m.name(), move |a| mty(&m1, a), move |h| map_fn(&m2, h))
}

/// Decides `x ≡ y` in `M A`; `Err` carries a distinguishing observation.
pub fn obs_equal(m: &MonadRef, a: &Ty, x: &Value, y: &Value, g: &Gen) -> Result<(), String> {
    match m.diff(a, x, y, g) {
        None => Ok(()),
        Some(obs) => Err(obs),
    }
}

/// `bind(ret a, f) ≡ f a`.
pub fn left_unit_law(m: &MonadRef, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    for a in carriers {
        for b in carriers {
            let (mb, fty) = (mty(m, b), Ty::fun(a, &mty(m, b)));
            let xs = g.inhabitants(a);
            let fs = g.inhabitants(&fty);
            for ix in g.cases(&[xs.len(), fs.len()]) {
                let (x, fv) = (&xs[ix[0]], &fs[ix[1]]);
                case!(ctx, |g| {
                    let f = fv.as_func();
                    g.expect_eq(&mb, &m.bind(&m.ret(x), f), &f.apply(x)).map_err(|e| {
                        e.input("A", a.to_string())
                            .input("B", b.to_string())
                            .input("a", g.render(a, x))
                            .input("f", g.render(&fty, fv))
                    })
                });
            }
        }
    }
}

/// `bind(m, ret) ≡ m`.
pub fn right_unit_law(m: &MonadRef, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    let ret = ret_fn(m);
    for a in carriers {
        let ma = mty(m, a);
        let xs = g.inhabitants(&ma);
        for x in xs.iter() {
            case!(ctx, |g| g
                .expect_eq(&ma, &m.bind(x, &ret), x)
                .map_err(|e| e.input("A", a.to_string()).input("m", g.render(&ma, x))));
        }
    }
}

/// `bind(bind(m, f), k) ≡ bind(m, x ↦ bind(f x, k))`.
pub fn assoc_law(m: &MonadRef, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    for a in carriers {
        for b in carriers {
            for c in carriers {
                let (ma, mc) = (mty(m, a), mty(m, c));
                let (fty, kty) = (Ty::fun(a, &mty(m, b)), Ty::fun(b, &mc));
                let xs = g.inhabitants(&ma);
                let fs = g.inhabitants(&fty);
                let ks = g.inhabitants(&kty);
                for ix in g.cases(&[xs.len(), fs.len(), ks.len()]) {
                    let (x, fv, kv) = (&xs[ix[0]], &fs[ix[1]], &ks[ix[2]]);
                    case!(ctx, |g| {
                        let (f, k) = (fv.as_func().clone(), kv.as_func().clone());
                        let lhs = m.bind(&m.bind(x, &f), &k);
                        let m2 = m.clone();
                        let rhs = m.bind(x, &Func::new(move |y| m2.bind(&f.apply(y), &k)));
                        g.expect_eq(&mc, &lhs, &rhs).map_err(|e| {
                            e.input("A", a.to_string())
                                .input("B", b.to_string())
                                .input("C", c.to_string())
                                .input("m", g.render(&ma, x))
                                .input("f", g.render(&fty, fv))
                                .input("g", g.render(&kty, kv))
                        })
                    });
                }
            }
        }
    }
}

/// `(M # h) ∘ ret_A = ret_B ∘ h`.
pub fn ret_naturality_law(m: &MonadRef, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    for a in carriers {
        for b in carriers {
            let (ab, mb) = (Ty::fun(a, b), mty(m, b));
            let hs = g.inhabitants(&ab);
            let xs = g.inhabitants(a);
            for ix in g.cases(&[hs.len(), xs.len()]) {
                let (hv, x) = (&hs[ix[0]], &xs[ix[1]]);
                case!(ctx, |g| {
                    let h = hv.as_func();
                    g.expect_eq(&mb, &fmap(m, h, &m.ret(x)), &m.ret(&h.apply(x))).map_err(|e| {
                        e.input("A", a.to_string())
                            .input("B", b.to_string())
                            .input("h", g.render(&ab, hv))
                            .input("a", g.render(a, x))
                    })
                });
            }
        }
    }
}

/// `Join ∘ Ret = id` and `Join ∘ (M # Ret) = id`.
pub fn join_laws(m: &MonadRef, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    let ret = ret_fn(m);
    for a in carriers {
        let ma = mty(m, a);
        let xs = g.inhabitants(&ma);
        for x in xs.iter() {
            case!(ctx, |g| {
                g.expect_eq(&ma, &join(m, &m.ret(x)), x)
                    .map_err(|e| e.input("law", "join∘ret").input("m", g.render(&ma, x)))?;
                g.expect_eq(&ma, &join(m, &fmap(m, &ret, x)), x)
                    .map_err(|e| e.input("law", "join∘(M # ret)").input("m", g.render(&ma, x)))
            });
        }
    }
}

type BindFn = Rc<dyn Fn(&Value, &Func) -> Value>;

/// A monad given by `ret` and `bind` over a first-order carrier.
pub struct RetBindMonad {
    name: String,
    carrier: Rc<dyn Fn(&Ty) -> Ty>,
    ret: Rc<dyn Fn(&Value) -> Value>,
    bind: BindFn,
}

impl Monad for RetBindMonad {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some((self.carrier)(a))
    }
    fn ret(&self, x: &Value) -> Value {
        (self.ret)(x)
    }
    fn bind(&self, m: &Value, f: &Func) -> Value {
        (self.bind)(m, f)
    }
}

/// A monad together with the outcomes of the laws it was admitted under.
#[derive(Clone)]
pub struct MonadDef {
    pub monad: MonadRef,
    pub laws: Vec<LawReport>,
}

/// Packages `ret`/`bind` as a monad, checking the unit, associativity and
/// ret-naturality laws over `carriers` first. `join` is `bind(·, id)`.
pub fn monad_from_ret_bind(
    name: &str,
    carrier: impl Fn(&Ty) -> Ty + 'static,
    ret: impl Fn(&Value) -> Value + 'static,
    bind: impl Fn(&Value, &Func) -> Value + 'static,
    g: &Gen,
    carriers: &[Ty],
) -> Result<MonadDef, ConstructionError> {
    let monad: MonadRef = Rc::new(RetBindMonad {
        name: name.to_string(),
        carrier: Rc::new(carrier),
        ret: Rc::new(ret),
        bind: Rc::new(bind),
    });
    admit(name, monad, g, carriers)
}

/// Runs the monad laws on an existing monad and refuses it on failure.
pub fn admit(name: &str, monad: MonadRef, g: &Gen, carriers: &[Ty]) -> Result<MonadDef, ConstructionError> {
    type LawFn = fn(&MonadRef, &[Ty], &mut LawCtx);
    let laws: [(&str, LawFn); 4] = [
        ("left-unit", left_unit_law),
        ("right-unit", right_unit_law),
        ("assoc", assoc_law),
        ("ret-natural", ret_naturality_law),
    ];
    let mut reports = Vec::new();
    for (law, f) in laws {
        let mut ctx = LawCtx::new(g, None);
        f(&monad, carriers, &mut ctx);
        let (cases, failure) = ctx.into_parts();
        if let Some(witness) = failure {
            return Err(ConstructionError { what: format!("monad {name}"), law: law.into(), witness });
        }
        reports.push(LawReport {
            id: format!("{name}/{law}"),
            anchor: "monad laws".into(),
            mode: crate::report::mode_of(g),
            cases,
            outcome: Outcome::Pass,
            witness: None,
            counterexample: None,
            ms: 0,
        });
    }
    Ok(MonadDef { monad, laws: reports })
}

/// The empty witness used when a refusal has no single failing case.
pub fn bare_witness(observation: impl Into<String>) -> Witness {
    Witness { case: 0, inputs: vec![], observation: observation.into() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ty::FiniteType;

    fn state_parts(broken: bool) -> Result<MonadDef, ConstructionError> {
        let s = Ty::fin(&FiniteType::indexed("S", "s", 2));
        let s1 = s.clone();
        let g = Gen::with_defaults();
        let carriers = g.carriers(2);
        monad_from_ret_bind(
            if broken { "state-broken" } else { "state" },
            move |a| Ty::fun(&s1, &Ty::pair(a, &s1)),
            |x| {
                let x = x.clone();
                Value::fun(move |s| Value::pair(x.clone(), s.clone()))
            },
            move |m, f| {
                let (m, f) = (m.clone(), f.clone());
                Value::fun(move |s| {
                    let r = m.call(s);
                    let next = if broken { s.clone() } else { r.snd().clone() };
                    f.apply(r.fst()).call(&next)
                })
            },
            &g,
            &carriers,
        )
    }

    #[test]
    fn state_from_ret_bind_is_admitted() {
        let def = state_parts(false).unwrap();
        assert_eq!(def.laws.len(), 4);
    }

    #[test]
    fn state_bind_discarding_the_update_is_refused() {
        let err = state_parts(true).err().expect("refused");
        assert_eq!(err.law, "right-unit");
        assert!(err.witness.observation.contains("at s"), "{}", err.witness.observation);
    }
}
