use std::rc::Rc;

use crate::case;
use crate::report::{CaseFailure, LawCtx};
use crate::ty::Ty;
use crate::value::{Func, Value};

/// An endofunctor on the carrier universe: an action on carriers and an
/// executable action on functions (`F # h`).
#[derive(Clone)]
pub struct Functor {
    name: Rc<str>,
    acto: Rc<dyn Fn(&Ty) -> Ty>,
    actm: Rc<dyn Fn(&Func) -> Func>,
}

impl Functor {
    pub fn new(
        name: &str,
        acto: impl Fn(&Ty) -> Ty + 'static,
        actm: impl Fn(&Func) -> Func + 'static,
    ) -> Functor {
        Functor { name: name.into(), acto: Rc::new(acto), actm: Rc::new(actm) }
    }

    /// `FId`.
    pub fn identity() -> Functor {
        Functor::new("FId", Ty::clone, Func::clone)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn acto(&self, a: &Ty) -> Ty {
        (self.acto)(a)
    }

    /// `F # h`.
    pub fn actm(&self, h: &Func) -> Func {
        (self.actm)(h)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Functor) -> Functor {
        compose_functors(self, inner)
    }

    /// `Option`, encoded as `unit + A`.
    pub fn option() -> Functor {
        Functor::new("Option", Ty::option, |h| {
            let h = h.clone();
            Func::new(move |v| match v {
                Value::Inr(x) => Value::some(h.apply(x)),
                other => other.clone(),
            })
        })
    }

    /// Lists, enumerated up to length `cap`.
    pub fn list(cap: usize) -> Functor {
        Functor::new("List", move |a| Ty::list(a, cap), |h| {
            let h = h.clone();
            Func::new(move |v| Value::list(v.as_list().iter().map(|x| h.apply(x)).collect()))
        })
    }

    /// The constant functor at `c`.
    pub fn constant(name: &str, c: &Ty) -> Functor {
        let c = c.clone();
        Functor::new(name, move |_| c.clone(), |_| Func::id())
    }
}

/// `F ∘ G`: `acto = F.acto ∘ G.acto`, `actm = F.actm ∘ G.actm`.
pub fn compose_functors(f: &Functor, g: &Functor) -> Functor {
    let (f1, g1, f2, g2) = (f.clone(), g.clone(), f.clone(), g.clone());
    Functor {
        name: format!("{}∘{}", f.name, g.name).into(),
        acto: Rc::new(move |a| f1.acto(&g1.acto(a))),
        actm: Rc::new(move |h| f2.actm(&g2.actm(h))),
    }
}

/// `F # id = id`, pointwise over every enumerated `x : F A`.
pub fn functor_identity_law(f: &Functor, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    for a in carriers {
        let fa = f.acto(a);
        let xs = g.inhabitants(&fa);
        let mapped = f.actm(&Func::id());
        for x in xs.iter() {
            case!(ctx, |g| g.expect_eq(&fa, &mapped.apply(x), x).map_err(|e| {
                e.input("A", a.to_string()).input("x", g.render(&fa, x))
            }));
        }
    }
}

/// `F # (k ∘ h) = F # k ∘ F # h`, pointwise.
pub fn functor_composition_law(f: &Functor, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    for a in carriers {
        for b in carriers {
            for c in carriers {
                let (ab, bc, fa, fc) = (Ty::fun(a, b), Ty::fun(b, c), f.acto(a), f.acto(c));
                let hs = g.inhabitants(&ab);
                let ks = g.inhabitants(&bc);
                let xs = g.inhabitants(&fa);
                for ix in g.cases(&[hs.len(), ks.len(), xs.len()]) {
                    let (h, k, x) = (hs[ix[0]].as_func(), ks[ix[1]].as_func(), &xs[ix[2]]);
                    case!(ctx, |g| {
                        let lhs = f.actm(&Func::compose(k, h)).apply(x);
                        let rhs = f.actm(k).apply(&f.actm(h).apply(x));
                        g.expect_eq(&fc, &lhs, &rhs).map_err(|e: CaseFailure| {
                            e.input("A", a.to_string())
                                .input("B", b.to_string())
                                .input("C", c.to_string())
                                .input("h", g.render(&ab, &hs[ix[0]]))
                                .input("k", g.render(&bc, &ks[ix[1]]))
                                .input("x", g.render(&fa, x))
                        })
                    });
                }
            }
        }
    }
}
