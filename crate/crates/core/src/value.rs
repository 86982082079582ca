//! Dynamically shaped values inhabiting the finite carriers.
//!
//! Every computation in the library is a [`Value`]. First-order data (atoms,
//! pairs, sums, lists, bounded naturals) is structural; functions are
//! executable closures that are only ever compared by tabulation over an
//! enumerated domain (see [`crate::observe::Gen::diff`]).

use std::fmt;
use std::rc::Rc;

use crate::ty::Ty;

/// A value of some [`Ty`].
#[derive(Clone)]
pub enum Value {
    Unit,
    /// Index of an atom inside its [`crate::ty::FiniteType`].
    Atom(u32),
    Nat(u64),
    Pair(Rc<(Value, Value)>),
    Inl(Rc<Value>),
    Inr(Rc<Value>),
    List(Rc<[Value]>),
    Fun(Func),
    /// A type-indexed family, used for codensity computations
    /// `forall B. (A -> M B) -> M B`.
    Poly(Poly),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Rc::new((a, b)))
    }

    pub fn inl(v: Value) -> Value {
        Value::Inl(Rc::new(v))
    }

    pub fn inr(v: Value) -> Value {
        Value::Inr(Rc::new(v))
    }

    pub fn list(items: Vec<Value>) -> Value {
        Value::List(items.into())
    }

    pub fn fun(f: impl Fn(&Value) -> Value + 'static) -> Value {
        Value::Fun(Func::new(f))
    }

    pub fn none() -> Value {
        Value::inl(Value::Unit)
    }

    pub fn some(v: Value) -> Value {
        Value::inr(v)
    }

    pub fn fst(&self) -> &Value {
        match self {
            Value::Pair(p) => &p.0,
            other => panic!("shape error: expected pair, found {other:?}"),
        }
    }

    pub fn snd(&self) -> &Value {
        match self {
            Value::Pair(p) => &p.1,
            other => panic!("shape error: expected pair, found {other:?}"),
        }
    }

    pub fn as_func(&self) -> &Func {
        match self {
            Value::Fun(f) => f,
            other => panic!("shape error: expected function, found {other:?}"),
        }
    }

    pub fn as_poly(&self) -> &Poly {
        match self {
            Value::Poly(p) => p,
            other => panic!("shape error: expected polymorphic family, found {other:?}"),
        }
    }

    pub fn as_list(&self) -> &[Value] {
        match self {
            Value::List(items) => items,
            other => panic!("shape error: expected list, found {other:?}"),
        }
    }

    pub fn as_nat(&self) -> u64 {
        match self {
            Value::Nat(n) => *n,
            other => panic!("shape error: expected natural, found {other:?}"),
        }
    }

    pub fn as_atom(&self) -> u32 {
        match self {
            Value::Atom(i) => *i,
            other => panic!("shape error: expected atom, found {other:?}"),
        }
    }

    /// Applies a function value.
    pub fn call(&self, x: &Value) -> Value {
        self.as_func().apply(x)
    }

    /// Structural equality for closure-free values; `None` when a closure is
    /// reached and the question needs a type to be answered.
    pub fn structural_eq(&self, other: &Value) -> Option<bool> {
        use Value::*;
        match (self, other) {
            (Unit, Unit) => Some(true),
            (Atom(a), Atom(b)) => Some(a == b),
            (Nat(a), Nat(b)) => Some(a == b),
            (Pair(a), Pair(b)) => match a.0.structural_eq(&b.0)? {
                false => Some(false),
                true => a.1.structural_eq(&b.1),
            },
            (Inl(a), Inl(b)) | (Inr(a), Inr(b)) => a.structural_eq(b),
            (List(a), List(b)) => {
                if a.len() != b.len() {
                    return Some(false);
                }
                for (x, y) in a.iter().zip(b.iter()) {
                    if !x.structural_eq(y)? {
                        return Some(false);
                    }
                }
                Some(true)
            }
            (Fun(_), _) | (_, Fun(_)) | (Poly(_), _) | (_, Poly(_)) => None,
            _ => Some(false),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => write!(f, "tt"),
            Value::Atom(i) => write!(f, "#{i}"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Pair(p) => write!(f, "({:?}, {:?})", p.0, p.1),
            Value::Inl(v) => write!(f, "inl {v:?}"),
            Value::Inr(v) => write!(f, "inr {v:?}"),
            Value::List(items) => f.debug_list().entries(items.iter()).finish(),
            Value::Fun(_) => write!(f, "<fn>"),
            Value::Poly(_) => write!(f, "<poly>"),
        }
    }
}

/// An executable unary function between values.
#[derive(Clone)]
pub struct Func(Rc<dyn Fn(&Value) -> Value>);

impl Func {
    pub fn new(f: impl Fn(&Value) -> Value + 'static) -> Func {
        Func(Rc::new(f))
    }

    pub fn apply(&self, x: &Value) -> Value {
        (self.0)(x)
    }

    pub fn id() -> Func {
        Func::new(Value::clone)
    }

    pub fn constant(v: Value) -> Func {
        Func::new(move |_| v.clone())
    }

    /// `g ∘ f`.
    pub fn compose(g: &Func, f: &Func) -> Func {
        let (g, f) = (g.clone(), f.clone());
        Func::new(move |x| g.apply(&f.apply(x)))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Func) -> Func {
        Func::compose(next, self)
    }

    pub fn into_value(self) -> Value {
        Value::Fun(self)
    }
}

impl fmt::Debug for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<fn>")
    }
}

/// A family indexed by an answer type: given `B` and a continuation
/// `k : A -> M B`, produce an `M B`.
#[derive(Clone)]
pub struct Poly(PolyFn);

type PolyFn = Rc<dyn Fn(&Ty, &Value) -> Value>;

impl Poly {
    pub fn new(f: impl Fn(&Ty, &Value) -> Value + 'static) -> Poly {
        Poly(Rc::new(f))
    }

    /// Instantiates the family at answer type `b` with continuation `k`.
    pub fn inst(&self, b: &Ty, k: &Value) -> Value {
        (self.0)(b, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structural_eq_on_data() {
        let a = Value::pair(Value::Atom(0), Value::list(vec![Value::Nat(3)]));
        let b = Value::pair(Value::Atom(0), Value::list(vec![Value::Nat(3)]));
        let c = Value::pair(Value::Atom(1), Value::list(vec![]));
        assert_eq!(a.structural_eq(&b), Some(true));
        assert_eq!(a.structural_eq(&c), Some(false));
        assert_eq!(Value::inl(Value::Unit).structural_eq(&Value::inr(Value::Unit)), Some(false));
    }

    #[test]
    fn closures_need_a_type() {
        let f = Value::fun(|x| x.clone());
        assert_eq!(f.structural_eq(&f), None);
    }

    #[test]
    fn compose_applies_right_to_left() {
        let inc = Func::new(|x| Value::Nat(x.as_nat() + 1));
        let dbl = Func::new(|x| Value::Nat(x.as_nat() * 2));
        assert_eq!(Func::compose(&dbl, &inc).apply(&Value::Nat(3)).as_nat(), 8);
        assert_eq!(inc.then(&dbl).apply(&Value::Nat(3)).as_nat(), 8);
    }
}
