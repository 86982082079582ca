//! `phi`/`psi`, algebraic lifting along monad morphisms, and the squares of
//! its correctness argument.

use crate::case;
use crate::error::ConstructionError;
use crate::kernel::{join, map_fn, monad_functor, mty, ret_fn, vcomp, MonadRef, NatTrans};
use crate::models::ops::{get_op, sigma_equal, AlgebraicOp, SigmaOp};
use crate::report::{LawCtx, Witness};
use crate::transformers::MonadMorphism;
use crate::ty::Ty;

/// `phi op : E -> M`, component `op_X ∘ (E # Ret_X)`.
pub fn phi(op: &SigmaOp) -> NatTrans {
    let o = op.clone();
    NatTrans::new(&format!("phi({})", op.name), &op.sig, &monad_functor(&op.monad), move |x, s| {
        o.at(x, &o.sig.actm(&ret_fn(&o.monad)).apply(s))
    })
}

/// `psi n : E ∘ M -> M`, component `Join_X ∘ n_{M X}`. Algebraic whenever
/// `n` is natural.
pub fn psi(n: &NatTrans, m: &MonadRef) -> AlgebraicOp {
    let (n2, m2) = (n.clone(), m.clone());
    AlgebraicOp::by_construction(SigmaOp::new(&format!("psi({})", n.name), &n.src, m, move |x, t| {
        join(&m2, &n2.at(&mty(&m2, x), t))
    }))
}

/// `psi (e ∘v phi op)`: the lifting of `op` along `e`.
pub fn alifting(op: &AlgebraicOp, e: &MonadMorphism) -> Result<AlgebraicOp, ConstructionError> {
    if e.src.name() != op.monad.name() {
        return Err(ConstructionError {
            what: format!("lifting of {} along {}", op.name, e.name),
            law: "source monad".into(),
            witness: Witness {
                case: 0,
                inputs: vec![],
                observation: format!("{} acts on {}, the morphism starts at {}", op.name, op.monad.name(), e.src.name()),
            },
        });
    }
    let n = vcomp(&e.as_nat(), &phi(op)).map_err(|err| ConstructionError {
        what: format!("lifting of {} along {}", op.name, e.name),
        law: "composition".into(),
        witness: Witness { case: 0, inputs: vec![], observation: err.to_string() },
    })?;
    let lifted = psi(&n, &e.dst);
    let mut named = lifted.op().clone();
    named.name = format!("{}↑{}", op.name, e.name);
    Ok(AlgebraicOp::by_construction(named))
}

/// The explicit form `Join^N ∘ e_{N X} ∘ op_{N X} ∘ (E # Ret^M_{N X})`.
pub fn alifting_explicit(op: &SigmaOp, e: &MonadMorphism) -> SigmaOp {
    let (o, e2) = (op.clone(), e.clone());
    SigmaOp::new(&format!("{}↑E{}", op.name, e.name), &op.sig, &e.dst, move |x, t| {
        let nx = mty(&e2.dst, x);
        let wrapped = o.sig.actm(&ret_fn(&o.monad)).apply(t);
        join(&e2.dst, &e2.at(&nx, &o.at(&nx, &wrapped)))
    })
}

/// `e_X ∘ op_X = lifted_X ∘ (E # e_X)` for every `X` and `t : E (M X)`.
pub fn lifting_law(op: &SigmaOp, e: &MonadMorphism, lifted: &SigmaOp, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    for x in carriers {
        let nx = mty(&e.dst, x);
        let ex = e.component(x);
        for t in op.args(g, x) {
            case!(ctx, |g| {
                let lhs = e.at(x, &op.at(x, &t));
                let rhs = lifted.at(x, &op.sig.actm(&ex).apply(&t));
                g.expect_eq(&nx, &lhs, &rhs)
                    .map_err(|er| er.input("X", x.to_string()).input("t", g.render(&op.arg_ty(x), &t)))
            });
        }
    }
}

/// `psi (phi op) ≡ op`.
pub fn prop17_law(op: &SigmaOp, carriers: &[Ty], ctx: &mut LawCtx) {
    let back = psi(&phi(op), &op.monad);
    sigma_equal(back.op(), op, carriers, ctx);
}

/// The four squares of the lifting argument, each checked on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Square {
    /// `(E # Ret) ∘ (E # e_X)` vs `(E # (M # e_X)) ∘ (E # Ret)`.
    RetThroughE,
    /// `op_{N X} ∘ (E # (M # e_X))` vs `(M # e_X) ∘ op_{M X}`.
    OpNatural,
    /// `Join ∘ e_{N X} ∘ (M # e_X)` vs `e_X ∘ Join`.
    MorphismJoin,
    /// `Join ∘ op_{M X} ∘ (E # Ret)` vs `op_X`.
    Cancel,
}

impl Square {
    pub const ALL: [Square; 4] = [Square::RetThroughE, Square::OpNatural, Square::MorphismJoin, Square::Cancel];

    pub fn id(&self) -> &'static str {
        match self {
            Square::RetThroughE => "eb-fg",
            Square::OpNatural => "gc-hi",
            Square::MorphismJoin => "id-jk",
            Square::Cancel => "fhj-l",
        }
    }
}

pub fn square_law(sq: Square, op: &SigmaOp, e: &MonadMorphism, carriers: &[Ty], ctx: &mut LawCtx) {
    let g = ctx.g;
    let (m, n) = (&op.monad, &e.dst);
    let ret = ret_fn(m);
    for x in carriers {
        let (mx, nx) = (mty(m, x), mty(n, x));
        let ex = e.component(x);
        let m_ex = map_fn(m, &ex);
        for y in op.args(g, x) {
            case!(ctx, |g| {
                let z = op.sig.actm(&ret).apply(&y);
                let (ty, lhs, rhs) = match sq {
                    Square::RetThroughE => {
                        let lhs = op.sig.actm(&ret).apply(&op.sig.actm(&ex).apply(&y));
                        (op.sig.acto(&mty(m, &nx)), lhs, op.sig.actm(&m_ex).apply(&z))
                    }
                    Square::OpNatural => {
                        let lhs = op.at(&nx, &op.sig.actm(&m_ex).apply(&z));
                        (mty(m, &nx), lhs, m_ex.apply(&op.at(&mx, &z)))
                    }
                    Square::MorphismJoin => {
                        let w = op.at(&mx, &z);
                        let lhs = join(n, &e.at(&nx, &m_ex.apply(&w)));
                        (nx.clone(), lhs, e.at(x, &join(m, &w)))
                    }
                    Square::Cancel => (mx.clone(), join(m, &op.at(&mx, &z)), op.at(x, &y)),
                };
                g.expect_eq(&ty, &lhs, &rhs)
                    .map_err(|er| er.input("X", x.to_string()).input("Y", g.render(&op.arg_ty(x), &y)))
            });
        }
    }
}

/// `aLGet k ≡ get_op k` on the transformed monad, for every `k : S -> N X`.
pub fn alget_law(alget: &SigmaOp, s: &Ty, carriers: &[Ty], ctx: &mut LawCtx) {
    let n = alget.monad.clone();
    let direct = get_op(&n, s);
    sigma_equal(alget, &direct, carriers, ctx);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::monads::Params;
    use crate::models::ops::op;
    use crate::observe::Gen;
    use crate::transformers::transformer;

    fn setup(name: &str, t: &str) -> (SigmaOp, MonadMorphism, Gen) {
        let p = Params::standard();
        let o = op(name, &p, None).unwrap();
        let e = transformer(t, &p, None).unwrap().lift(&o.monad);
        (o, e, Gen::new(&crate::Config::quick(), name))
    }

    #[test]
    fn get_lifts_along_except_over_state() {
        let (o, e, g) = setup("get", "exceptT");
        let lifted = alifting(&AlgebraicOp::by_construction(o.clone()), &e).unwrap();
        let mut ctx = LawCtx::new(&g, None);
        lifting_law(&o, &e, lifted.op(), &g.carriers(2), &mut ctx);
        assert!(ctx.failure().is_none(), "{:?}", ctx.failure());
    }

    #[test]
    fn lifting_along_identity_returns_the_operation() {
        let (o, _, g) = setup("put", "exceptT");
        let e = MonadMorphism::identity(&o.monad);
        let lifted = alifting(&AlgebraicOp::by_construction(o.clone()), &e).unwrap();
        let mut ctx = LawCtx::new(&g, None);
        sigma_equal(lifted.op(), &o, &g.carriers(2), &mut ctx);
        assert!(ctx.failure().is_none());
    }

    #[test]
    fn a_wrong_candidate_is_caught() {
        let (o, e, g) = setup("put", "exceptT");
        // Forgets to install the new state.
        let bad = SigmaOp::new("put?", &o.sig, &e.dst, |_, t| t.snd().clone());
        let mut ctx = LawCtx::new(&g, None);
        lifting_law(&o, &e, &bad, &g.carriers(2), &mut ctx);
        assert!(ctx.failure().is_some());
    }

    #[test]
    fn psi_phi_cancels_only_for_algebraic_operations() {
        let p = Params::standard();
        let g = Gen::new(&crate::Config::quick(), "p17");
        for (name, cancels) in [("get", true), ("put", true), ("local", false)] {
            let o = op(name, &p, None).unwrap();
            let mut ctx = LawCtx::new(&g, None);
            prop17_law(&o, &g.carriers(2), &mut ctx);
            assert_eq!(ctx.failure().is_none(), cancels, "{name}");
        }
    }

    #[test]
    fn lifting_from_the_wrong_monad_is_refused() {
        let p = Params::standard();
        let get = op("get", &p, None).unwrap();
        let ask = op("ask", &p, None).unwrap();
        let e = transformer("exceptT", &p, None).unwrap().lift(&ask.monad);
        assert!(alifting(&AlgebraicOp::by_construction(get), &e).is_err());
    }
}
