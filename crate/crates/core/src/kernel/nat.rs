use std::rc::Rc;

use crate::case;
use crate::error::KernelError;
use crate::kernel::functor::Functor;
use crate::report::LawCtx;
use crate::ty::Ty;
use crate::value::{Func, Value};

type Component = Rc<dyn Fn(&Ty, &Value) -> Value>;

/// A family of maps `src.acto(A) -> dst.acto(A)`, one per carrier `A`.
#[derive(Clone)]
pub struct NatTrans {
    pub name: Rc<str>,
    pub src: Functor,
    pub dst: Functor,
    comp: Component,
}

impl NatTrans {
    pub fn new(
        name: &str,
        src: &Functor,
        dst: &Functor,
        comp: impl Fn(&Ty, &Value) -> Value + 'static,
    ) -> NatTrans {
        NatTrans { name: name.into(), src: src.clone(), dst: dst.clone(), comp: Rc::new(comp) }
    }

    /// The identity transformation on `f`.
    pub fn identity(f: &Functor) -> NatTrans {
        NatTrans::new(&format!("id[{}]", f.name()), f, f, |_, x| x.clone())
    }

    /// Component at `a`.
    pub fn at(&self, a: &Ty, x: &Value) -> Value {
        (self.comp)(a, x)
    }

    pub fn component(&self, a: &Ty) -> Func {
        let (comp, a) = (self.comp.clone(), a.clone());
        Func::new(move |x| comp(&a, x))
    }
}

/// `n1 ∘v n2`. Functors are matched by name.
pub fn vcomp(n1: &NatTrans, n2: &NatTrans) -> Result<NatTrans, KernelError> {
    if n2.dst.name() != n1.src.name() {
        return Err(KernelError::ShapeMismatch {
            expected: n1.src.name().to_string(),
            found: n2.dst.name().to_string(),
        });
    }
    let (c1, c2) = (n1.comp.clone(), n2.comp.clone());
    Ok(NatTrans {
        name: format!("{}∘{}", n1.name, n2.name).into(),
        src: n2.src.clone(),
        dst: n1.dst.clone(),
        comp: Rc::new(move |a, x| c1(a, &c2(a, x))),
    })
}

/// `F ## n : F∘G -> F∘H`, component `F # n_A`.
pub fn functor_apply_nt(f: &Functor, n: &NatTrans) -> NatTrans {
    let (f2, n2) = (f.clone(), n.clone());
    NatTrans {
        name: format!("{}##{}", f.name(), n.name).into(),
        src: f.compose(&n.src),
        dst: f.compose(&n.dst),
        comp: Rc::new(move |a, x| f2.actm(&n2.component(a)).apply(x)),
    }
}

/// `(dst # h) ∘ n_A = n_B ∘ (src # h)` for every enumerated `h : A -> B` and
/// `x : src A`; a failure records `(A, B, h, x)`.
pub fn check_naturality(n: &NatTrans, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    for a in carriers {
        for b in carriers {
            let (ab, fa, gb) = (Ty::fun(a, b), n.src.acto(a), n.dst.acto(b));
            let hs = g.inhabitants(&ab);
            let xs = g.inhabitants(&fa);
            for ix in g.cases(&[hs.len(), xs.len()]) {
                let (hv, x) = (&hs[ix[0]], &xs[ix[1]]);
                case!(ctx, |g| {
                    let h = hv.as_func();
                    let lhs = n.dst.actm(h).apply(&n.at(a, x));
                    let rhs = n.at(b, &n.src.actm(h).apply(x));
                    g.expect_eq(&gb, &lhs, &rhs).map_err(|e| {
                        e.input("A", a.to_string())
                            .input("B", b.to_string())
                            .input("h", g.render(&ab, hv))
                            .input("x", g.render(&fa, x))
                    })
                });
            }
        }
    }
}

/// Pointwise equality of two transformations with the same functors.
pub fn nat_equal(n1: &NatTrans, n2: &NatTrans, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    for a in carriers {
        let (fa, ga) = (n1.src.acto(a), n1.dst.acto(a));
        let xs = g.inhabitants(&fa);
        for x in xs.iter() {
            case!(ctx, |g| g
                .expect_eq(&ga, &n1.at(a, x), &n2.at(a, x))
                .map_err(|e| e.input("A", a.to_string()).input("x", g.render(&fa, x))));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observe::Gen;

    fn head_or_none() -> NatTrans {
        NatTrans::new("head", &Functor::list(3), &Functor::option(), |_, x| {
            x.as_list().first().cloned().map(Value::some).unwrap_or_else(Value::none)
        })
    }

    #[test]
    fn mismatched_vcomp_is_a_shape_error() {
        let n = head_or_none();
        assert!(matches!(vcomp(&n, &n), Err(KernelError::ShapeMismatch { .. })));
        assert!(vcomp(&NatTrans::identity(&Functor::option()), &n).is_ok());
    }

    #[test]
    fn head_is_natural() {
        let g = Gen::with_defaults();
        let mut ctx = LawCtx::new(&g, None);
        check_naturality(&head_or_none(), &g.carriers(2), &mut ctx);
        assert!(ctx.failure().is_none());
    }
}
