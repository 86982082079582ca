use std::rc::Rc;

use crate::case;
use crate::kernel::{monad_functor, mty, MonadRef, NatTrans};
use crate::report::LawCtx;
use crate::ty::Ty;
use crate::value::{Func, Value};

type Component = Rc<dyn Fn(&Ty, &Value) -> Value>;

/// A family `e_A : M A -> N A`, expected to preserve `ret` and `bind`.
#[derive(Clone)]
pub struct MonadMorphism {
    pub name: String,
    pub src: MonadRef,
    pub dst: MonadRef,
    comp: Component,
}

impl MonadMorphism {
    pub fn new(
        name: &str,
        src: &MonadRef,
        dst: &MonadRef,
        comp: impl Fn(&Ty, &Value) -> Value + 'static,
    ) -> MonadMorphism {
        MonadMorphism { name: name.into(), src: src.clone(), dst: dst.clone(), comp: Rc::new(comp) }
    }

    pub fn identity(m: &MonadRef) -> MonadMorphism {
        MonadMorphism::new(&format!("id[{}]", m.name()), m, m, |_, x| x.clone())
    }

    /// The morphism given by a transformation between the monads' functors.
    pub fn from_nat(name: &str, src: &MonadRef, dst: &MonadRef, n: &NatTrans) -> MonadMorphism {
        let n = n.clone();
        MonadMorphism::new(name, src, dst, move |a, x| n.at(a, x))
    }

    pub fn at(&self, a: &Ty, x: &Value) -> Value {
        (self.comp)(a, x)
    }

    pub fn component(&self, a: &Ty) -> Func {
        let (comp, a) = (self.comp.clone(), a.clone());
        Func::new(move |x| comp(&a, x))
    }

    /// The underlying transformation between the monads' functors.
    pub fn as_nat(&self) -> NatTrans {
        let comp = self.comp.clone();
        NatTrans::new(&self.name, &monad_functor(&self.src), &monad_functor(&self.dst), move |a, x| comp(a, x))
    }
}

/// `e_A ∘ Ret = Ret`.
pub fn morphism_ret_law(e: &MonadMorphism, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    for a in carriers {
        let na = mty(&e.dst, a);
        let xs = g.inhabitants(a);
        for x in xs.iter() {
            case!(ctx, |g| g
                .expect_eq(&na, &e.at(a, &e.src.ret(x)), &e.dst.ret(x))
                .map_err(|er| er.input("A", a.to_string()).input("a", g.render(a, x))));
        }
    }
}

/// `e_B (m >>= f) = e_A m >>= (e_B ∘ f)`.
pub fn morphism_bind_law(e: &MonadMorphism, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    for a in carriers {
        for b in carriers {
            let (ma, nb, fty) = (mty(&e.src, a), mty(&e.dst, b), Ty::fun(a, &mty(&e.src, b)));
            let xs = g.inhabitants(&ma);
            let fs = g.inhabitants(&fty);
            for ix in g.cases(&[xs.len(), fs.len()]) {
                let (x, fv) = (&xs[ix[0]], &fs[ix[1]]);
                case!(ctx, |g| {
                    let f = fv.as_func();
                    let lhs = e.at(b, &e.src.bind(x, f));
                    let rhs = e.dst.bind(&e.at(a, x), &f.then(&e.component(b)));
                    g.expect_eq(&nb, &lhs, &rhs).map_err(|er| {
                        er.input("A", a.to_string())
                            .input("B", b.to_string())
                            .input("m", g.render(&ma, x))
                            .input("f", g.render(&fty, fv))
                    })
                });
            }
        }
    }
}

/// Pointwise equality of two morphisms between the same monads.
pub fn morphism_equal(e1: &MonadMorphism, e2: &MonadMorphism, carriers: &[Ty], ctx: &mut LawCtx) {
    crate::kernel::nat::nat_equal(&e1.as_nat(), &e2.as_nat(), carriers, ctx)
}
