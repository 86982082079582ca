//! stateT, exceptT, envT, outputT, contT and the identity transformer.

use std::rc::Rc;

use crate::config::Mutant;
use crate::kernel::{fmap, monad_functor, mty, Monad, MonadRef, NatTrans};
use crate::models::monads::{empty_log, log_append, log_ty};
use crate::transformers::morphism::MonadMorphism;
use crate::ty::Ty;
use crate::value::{Func, Value};

/// A map from monads to monads with a lift into the result.
pub trait Transformer {
    fn name(&self) -> String;
    fn apply(&self, m: &MonadRef) -> MonadRef;
    /// `Lift t M : M -> t M`.
    fn lift(&self, m: &MonadRef) -> MonadMorphism;
    fn functorial(&self) -> Option<&dyn Functorial> {
        None
    }
}

/// A transformer that also acts on transformations between monads.
pub trait Functorial: Transformer {
    /// `Hmap t n : t M -> t N` for `n : M -> N`.
    fn hmap(&self, m: &MonadRef, n: &MonadRef, nt: &NatTrans) -> NatTrans;
}

pub type TransformerRef = Rc<dyn Transformer>;

fn hmap_nat(t: &dyn Transformer, m: &MonadRef, n: &MonadRef, nt: &NatTrans, comp: impl Fn(&Ty, &Value) -> Value + 'static) -> NatTrans {
    let (tm, tn) = (t.apply(m), t.apply(n));
    NatTrans::new(&format!("{}#{}", t.name(), nt.name), &monad_functor(&tm), &monad_functor(&tn), comp)
}

// stateT

pub struct StateTMonad {
    pub s: Ty,
    pub m: MonadRef,
}

impl Monad for StateTMonad {
    fn name(&self) -> String {
        format!("stateT[{}]({})", self.s.key(), self.m.name())
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some(Ty::fun(&self.s, &mty(&self.m, &Ty::pair(a, &self.s))))
    }
    fn ret(&self, x: &Value) -> Value {
        let (x, m) = (x.clone(), self.m.clone());
        Value::fun(move |s| m.ret(&Value::pair(x.clone(), s.clone())))
    }
    fn bind(&self, x: &Value, f: &Func) -> Value {
        let (x, f, m) = (x.clone(), f.clone(), self.m.clone());
        Value::fun(move |s| {
            let f = f.clone();
            m.bind(&x.call(s), &Func::new(move |p| f.apply(p.fst()).call(p.snd())))
        })
    }
}

pub struct StateT {
    pub s: Ty,
}

impl Transformer for StateT {
    fn name(&self) -> String {
        "stateT".into()
    }
    fn apply(&self, m: &MonadRef) -> MonadRef {
        Rc::new(StateTMonad { s: self.s.clone(), m: m.clone() })
    }
    /// `lift m = λs. m >>= (x ↦ Ret (x, s))`.
    fn lift(&self, m: &MonadRef) -> MonadMorphism {
        let inner = m.clone();
        MonadMorphism::new(&format!("Lift stateT {}", m.name()), m, &self.apply(m), move |_, x| {
            let (x, m) = (x.clone(), inner.clone());
            Value::fun(move |s| {
                let s = s.clone();
                fmap(&m, &Func::new(move |a| Value::pair(a.clone(), s.clone())), &x)
            })
        })
    }
    fn functorial(&self) -> Option<&dyn Functorial> {
        Some(self)
    }
}

impl Functorial for StateT {
    fn hmap(&self, m: &MonadRef, n: &MonadRef, nt: &NatTrans) -> NatTrans {
        let (nt2, s) = (nt.clone(), self.s.clone());
        hmap_nat(self, m, n, nt, move |a, x| {
            let (nt, x, at) = (nt2.clone(), x.clone(), Ty::pair(a, &s));
            Value::fun(move |s| nt.at(&at, &x.call(s)))
        })
    }
}

// exceptT

pub struct ExceptTMonad {
    pub z: Ty,
    pub m: MonadRef,
    pub swapped: bool,
}

impl Monad for ExceptTMonad {
    fn name(&self) -> String {
        let tag = if self.swapped { "exceptT~" } else { "exceptT" };
        format!("{tag}[{}]({})", self.z.key(), self.m.name())
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some(mty(&self.m, &Ty::sum(&self.z, a)))
    }
    fn ret(&self, x: &Value) -> Value {
        self.m.ret(&Value::inr(x.clone()))
    }
    fn bind(&self, x: &Value, f: &Func) -> Value {
        let (f, m, swapped) = (f.clone(), self.m.clone(), self.swapped);
        self.m.bind(
            x,
            &Func::new(move |v| match (v, swapped) {
                (Value::Inl(z), false) => m.ret(&Value::Inl(z.clone())),
                (Value::Inr(a), false) => f.apply(a),
                // The mutant continues on the exception and stops on the value.
                (Value::Inl(z), true) => f.apply(z),
                (Value::Inr(a), true) => m.ret(&Value::Inl(a.clone())),
                (other, _) => panic!("shape error: expected sum, found {other:?}"),
            }),
        )
    }
}

pub struct ExceptT {
    pub z: Ty,
    pub mutant: Option<Mutant>,
}

impl Transformer for ExceptT {
    fn name(&self) -> String {
        "exceptT".into()
    }
    fn apply(&self, m: &MonadRef) -> MonadRef {
        Rc::new(ExceptTMonad { z: self.z.clone(), m: m.clone(), swapped: self.mutant == Some(Mutant::SwappedExceptBind) })
    }
    /// `lift m = m >>= (Ret ∘ inr)`.
    fn lift(&self, m: &MonadRef) -> MonadMorphism {
        let inner = m.clone();
        MonadMorphism::new(&format!("Lift exceptT {}", m.name()), m, &self.apply(m), move |_, x| {
            fmap(&inner, &Func::new(|a| Value::inr(a.clone())), x)
        })
    }
    fn functorial(&self) -> Option<&dyn Functorial> {
        Some(self)
    }
}

impl Functorial for ExceptT {
    fn hmap(&self, m: &MonadRef, n: &MonadRef, nt: &NatTrans) -> NatTrans {
        let (nt2, z) = (nt.clone(), self.z.clone());
        hmap_nat(self, m, n, nt, move |a, x| nt2.at(&Ty::sum(&z, a), x))
    }
}

// envT

pub struct EnvTMonad {
    pub e: Ty,
    pub m: MonadRef,
}

impl Monad for EnvTMonad {
    fn name(&self) -> String {
        format!("envT[{}]({})", self.e.key(), self.m.name())
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some(Ty::fun(&self.e, &mty(&self.m, a)))
    }
    fn ret(&self, x: &Value) -> Value {
        let r = self.m.ret(x);
        Value::fun(move |_| r.clone())
    }
    fn bind(&self, x: &Value, f: &Func) -> Value {
        let (x, f, m) = (x.clone(), f.clone(), self.m.clone());
        Value::fun(move |e| {
            let (f, e2) = (f.clone(), e.clone());
            m.bind(&x.call(e), &Func::new(move |a| f.apply(a).call(&e2)))
        })
    }
}

pub struct EnvT {
    pub e: Ty,
}

impl Transformer for EnvT {
    fn name(&self) -> String {
        "envT".into()
    }
    fn apply(&self, m: &MonadRef) -> MonadRef {
        Rc::new(EnvTMonad { e: self.e.clone(), m: m.clone() })
    }
    /// `lift m = λ_. m`.
    fn lift(&self, m: &MonadRef) -> MonadMorphism {
        MonadMorphism::new(&format!("Lift envT {}", m.name()), m, &self.apply(m), |_, x| {
            let x = x.clone();
            Value::fun(move |_| x.clone())
        })
    }
    fn functorial(&self) -> Option<&dyn Functorial> {
        Some(self)
    }
}

impl Functorial for EnvT {
    fn hmap(&self, m: &MonadRef, n: &MonadRef, nt: &NatTrans) -> NatTrans {
        let nt2 = nt.clone();
        hmap_nat(self, m, n, nt, move |a, x| {
            let (nt, x, a) = (nt2.clone(), x.clone(), a.clone());
            Value::fun(move |e| nt.at(&a, &x.call(e)))
        })
    }
}

// outputT

pub struct OutputTMonad {
    pub m: MonadRef,
}

impl Monad for OutputTMonad {
    fn name(&self) -> String {
        format!("outputT({})", self.m.name())
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        Some(mty(&self.m, &Ty::pair(a, &log_ty())))
    }
    fn ret(&self, x: &Value) -> Value {
        self.m.ret(&Value::pair(x.clone(), empty_log()))
    }
    fn bind(&self, x: &Value, f: &Func) -> Value {
        let (f, m) = (f.clone(), self.m.clone());
        self.m.bind(
            x,
            &Func::new(move |p| {
                let w = p.snd().clone();
                fmap(&m, &Func::new(move |q| Value::pair(q.fst().clone(), log_append(&w, q.snd()))), &f.apply(p.fst()))
            }),
        )
    }
}

pub struct OutputT;

impl Transformer for OutputT {
    fn name(&self) -> String {
        "outputT".into()
    }
    fn apply(&self, m: &MonadRef) -> MonadRef {
        Rc::new(OutputTMonad { m: m.clone() })
    }
    /// `lift m = m >>= (x ↦ Ret (x, []))`.
    fn lift(&self, m: &MonadRef) -> MonadMorphism {
        let inner = m.clone();
        MonadMorphism::new(&format!("Lift outputT {}", m.name()), m, &self.apply(m), move |_, x| {
            fmap(&inner, &Func::new(|a| Value::pair(a.clone(), empty_log())), x)
        })
    }
    fn functorial(&self) -> Option<&dyn Functorial> {
        Some(self)
    }
}

impl Functorial for OutputT {
    fn hmap(&self, m: &MonadRef, n: &MonadRef, nt: &NatTrans) -> NatTrans {
        let nt2 = nt.clone();
        hmap_nat(self, m, n, nt, move |a, x| nt2.at(&Ty::pair(a, &log_ty()), x))
    }
}

// contT

pub struct ContTMonad {
    pub r: Ty,
    pub m: MonadRef,
}

impl Monad for ContTMonad {
    fn name(&self) -> String {
        format!("contT[{}]({})", self.r.key(), self.m.name())
    }
    fn carrier(&self, a: &Ty) -> Option<Ty> {
        let mr = mty(&self.m, &self.r);
        Some(Ty::fun(&Ty::fun(a, &mr), &mr))
    }
    fn ret(&self, x: &Value) -> Value {
        let x = x.clone();
        Value::fun(move |k| k.call(&x))
    }
    fn bind(&self, x: &Value, f: &Func) -> Value {
        let (x, f) = (x.clone(), f.clone());
        Value::fun(move |k| {
            let (f, k) = (f.clone(), k.clone());
            x.call(&Value::fun(move |a| f.apply(a).call(&k)))
        })
    }
}

/// Not functorial: `(A -> M R) -> M R` mentions `M` contravariantly.
pub struct ContT {
    pub r: Ty,
}

impl Transformer for ContT {
    fn name(&self) -> String {
        "contT".into()
    }
    fn apply(&self, m: &MonadRef) -> MonadRef {
        Rc::new(ContTMonad { r: self.r.clone(), m: m.clone() })
    }
    /// `lift m = λk. m >>= k`.
    fn lift(&self, m: &MonadRef) -> MonadMorphism {
        let inner = m.clone();
        MonadMorphism::new(&format!("Lift contT {}", m.name()), m, &self.apply(m), move |_, x| {
            let (x, m) = (x.clone(), inner.clone());
            Value::fun(move |k| m.bind(&x, k.as_func()))
        })
    }
}

/// `t M = M`.
pub struct IdentityT;

impl Transformer for IdentityT {
    fn name(&self) -> String {
        "identityT".into()
    }
    fn apply(&self, m: &MonadRef) -> MonadRef {
        m.clone()
    }
    fn lift(&self, m: &MonadRef) -> MonadMorphism {
        MonadMorphism::identity(m)
    }
    fn functorial(&self) -> Option<&dyn Functorial> {
        Some(self)
    }
}

impl Functorial for IdentityT {
    fn hmap(&self, _m: &MonadRef, _n: &MonadRef, nt: &NatTrans) -> NatTrans {
        nt.clone()
    }
}
