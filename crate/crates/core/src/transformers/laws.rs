//! Laws of functorial transformers, the transformation pool they are
//! checked against, and the stateT-over-identity coincidence.

use crate::case;
use crate::kernel::nat::nat_equal;
use crate::kernel::{mty, ret_fn, vcomp, MonadRef, NatTrans};
use crate::models::monads::{base, Identity, Params, State};
use crate::models::ops::{get_op, put_op};
use crate::report::LawCtx;
use crate::transformers::morphism::MonadMorphism;
use crate::transformers::stacks::{Functorial, StateT, Transformer};
use crate::ty::Ty;
use crate::value::Value;

use std::rc::Rc;

/// The transformations between registered monads that FMT laws quantify
/// over. Every member is itself a monad morphism.
pub fn morphism_pool(p: &Params) -> Vec<MonadMorphism> {
    let b = |n: &str| base(n, p).expect("registered base monad");
    let (id, opt, list, exc, st) = (b("identity"), b("option"), b("list"), b("exceptZ"), b("state"));
    let st2 = st.clone();
    vec![
        MonadMorphism::new("identity→option", &id, &opt, |_, x| Value::some(x.clone())),
        MonadMorphism::new("identity→list", &id, &list, |_, x| Value::list(vec![x.clone()])),
        MonadMorphism::new("identity→state", &id, &st, move |_, x| st2.ret(x)),
        MonadMorphism::new("option→list", &opt, &list, |_, x| match x {
            Value::Inr(a) => Value::list(vec![(**a).clone()]),
            _ => Value::list(vec![]),
        }),
        MonadMorphism::new("exceptZ→option", &exc, &opt, |_, x| match x {
            Value::Inr(_) => x.clone(),
            _ => Value::none(),
        }),
        MonadMorphism::identity(&st),
    ]
}

/// Composable pairs `(n2, n1)` from the pool: `n1`'s target is `n2`'s source.
pub fn pool_compositions(pool: &[MonadMorphism]) -> Vec<(MonadMorphism, MonadMorphism)> {
    let mut out = Vec::new();
    for n1 in pool {
        for n2 in pool {
            if n1.dst.name() == n2.src.name() {
                out.push((n2.clone(), n1.clone()));
            }
        }
    }
    out
}

/// `Hmap t n` as a morphism `t M -> t N`.
pub fn hmap_morphism(t: &dyn Functorial, n: &MonadMorphism) -> MonadMorphism {
    let h = t.hmap(&n.src, &n.dst, &n.as_nat());
    MonadMorphism::from_nat(&h.name, &t.apply(&n.src), &t.apply(&n.dst), &h)
}

/// `Hmap t id = id`.
pub fn hmap_id_law(t: &dyn Functorial, m: &MonadRef, carriers: &[Ty], ctx: &mut LawCtx) {
    let id = MonadMorphism::identity(m).as_nat();
    let h = t.hmap(m, m, &id);
    let tm = t.apply(m);
    nat_equal(&h, &NatTrans::identity(&crate::kernel::monad_functor(&tm)), carriers, ctx);
}

/// `Hmap t (n2 ∘v n1) = Hmap t n2 ∘v Hmap t n1`.
pub fn hmap_comp_law(t: &dyn Functorial, n2: &MonadMorphism, n1: &MonadMorphism, carriers: &[Ty], ctx: &mut LawCtx) {
    let composed = vcomp(&n2.as_nat(), &n1.as_nat()).expect("pool compositions match");
    let lhs = t.hmap(&n1.src, &n2.dst, &composed);
    let h2 = t.hmap(&n2.src, &n2.dst, &n2.as_nat());
    let h1 = t.hmap(&n1.src, &n1.dst, &n1.as_nat());
    let rhs = vcomp(&h2, &h1).expect("hmap results compose");
    nat_equal(&lhs, &rhs, carriers, ctx);
}

/// `Hmap t n X ∘ Lift t M X = Lift t N X ∘ n X`.
pub fn lift_naturality_law(t: &dyn Functorial, n: &MonadMorphism, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    let h = t.hmap(&n.src, &n.dst, &n.as_nat());
    let (lm, ln) = (t.lift(&n.src), t.lift(&n.dst));
    let tn = t.apply(&n.dst);
    for x in carriers {
        let (mx, tnx) = (mty(&n.src, x), mty(&tn, x));
        let ms = g.inhabitants(&mx);
        for m in ms.iter() {
            case!(ctx, |g| {
                let lhs = h.at(x, &lm.at(x, m));
                let rhs = ln.at(x, &n.at(x, m));
                g.expect_eq(&tnx, &lhs, &rhs).map_err(|e| e.input("X", x.to_string()).input("m", g.render(&mx, m)))
            });
        }
    }
}

/// The two presentations of state compared on `ret`, `bind`, `get`, `put`.
pub struct Coincidence {
    pub direct: MonadRef,
    pub transformed: MonadRef,
    pub s: Ty,
}

impl Coincidence {
    pub fn new(p: &Params) -> Coincidence {
        Coincidence {
            direct: Rc::new(State { s: p.s.clone() }),
            transformed: StateT { s: p.s.clone() }.apply(&(Rc::new(Identity) as MonadRef)),
            s: p.s.clone(),
        }
    }

    pub fn ret_law(&self, carriers: &[Ty], ctx: &mut LawCtx) {
        let g = ctx.g;
        for a in carriers {
            let ma = mty(&self.direct, a);
            let xs = g.inhabitants(a);
            for x in xs.iter() {
                case!(ctx, |g| g
                    .expect_eq(&ma, &self.transformed.ret(x), &self.direct.ret(x))
                    .map_err(|e| e.input("A", a.to_string()).input("a", g.render(a, x))));
            }
        }
    }

    pub fn bind_law(&self, carriers: &[Ty], ctx: &mut LawCtx) {
        let g = ctx.g;
        for a in carriers {
            for b in carriers {
                let (ma, mb, fty) = (mty(&self.direct, a), mty(&self.direct, b), Ty::fun(a, &mty(&self.direct, b)));
                let xs = g.inhabitants(&ma);
                let fs = g.inhabitants(&fty);
                for ix in g.cases(&[xs.len(), fs.len()]) {
                    let (x, fv) = (&xs[ix[0]], &fs[ix[1]]);
                    case!(ctx, |g| g
                        .expect_eq(&mb, &self.transformed.bind(x, fv.as_func()), &self.direct.bind(x, fv.as_func()))
                        .map_err(|e| e
                            .input("A", a.to_string())
                            .input("B", b.to_string())
                            .input("m", g.render(&ma, x))
                            .input("f", g.render(&fty, fv))));
                }
            }
        }
    }

    /// The usual `get` (`get_op Ret`) and the operation on every argument.
    pub fn get_law(&self, carriers: &[Ty], ctx: &mut LawCtx) {
        let (o1, o2) = (get_op(&self.transformed, &self.s), get_op(&self.direct, &self.s));
        let ms = mty(&self.direct, &self.s);
        let (r1, r2) = (ret_fn(&self.transformed).into_value(), ret_fn(&self.direct).into_value());
        case!(ctx, |g| g.expect_eq(&ms, &o1.at(&self.s, &r1), &o2.at(&self.s, &r2)).map_err(|e| e.input("get", "get_op Ret")));
        crate::models::ops::sigma_equal(&o1, &o2, carriers, ctx);
    }

    /// The usual `put s'` (`put_op (s', Ret tt)`) and the operation on
    /// every argument.
    pub fn put_law(&self, carriers: &[Ty], ctx: &mut LawCtx) {
        let (o1, o2) = (put_op(&self.transformed, &self.s, None), put_op(&self.direct, &self.s, None));
        let g = ctx.g;
        let unit = Ty::unit();
        let mu = mty(&self.direct, &unit);
        let states = g.inhabitants(&self.s);
        for s1 in states.iter() {
            case!(ctx, |g| {
                let t1 = Value::pair(s1.clone(), self.transformed.ret(&Value::Unit));
                let t2 = Value::pair(s1.clone(), self.direct.ret(&Value::Unit));
                g.expect_eq(&mu, &o1.at(&unit, &t1), &o2.at(&unit, &t2)).map_err(|e| e.input("s'", g.render(&self.s, s1)))
            });
        }
        crate::models::ops::sigma_equal(&o1, &o2, carriers, ctx);
    }
}
