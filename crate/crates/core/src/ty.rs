//! Carrier descriptions: finite atom sets, first-order data built from them,
//! function spaces, and monadic carriers `M A`.

use std::fmt;
use std::rc::Rc;

use crate::error::KernelError;
use crate::kernel::monad::MonadRef;
use crate::value::{Func, Value};

/// A small enumerable carrier: an ordered list of distinct named atoms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteType {
    name: Rc<str>,
    atoms: Rc<[Rc<str>]>,
}

impl FiniteType {
    pub fn new(name: &str, atoms: &[&str]) -> Result<FiniteType, KernelError> {
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(KernelError::DuplicateAtom {
                    carrier: name.to_string(),
                    atom: a.to_string(),
                });
            }
        }
        Ok(FiniteType {
            name: name.into(),
            atoms: atoms.iter().map(|a| Rc::from(*a)).collect(),
        })
    }

    /// `n` atoms named `{prefix}0 .. {prefix}{n-1}`.
    pub fn indexed(name: &str, prefix: &str, n: usize) -> FiniteType {
        FiniteType {
            name: name.into(),
            atoms: (0..n).map(|i| Rc::from(format!("{prefix}{i}"))).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom_name(&self, i: u32) -> &str {
        self.atoms.get(i as usize).map(|a| &**a).unwrap_or("?")
    }

    pub fn atom(&self, name: &str) -> Option<Value> {
        self.atoms.iter().position(|a| &**a == name).map(|i| Value::Atom(i as u32))
    }

    pub fn values(&self) -> impl Iterator<Item = Value> {
        (0..self.len() as u32).map(Value::Atom)
    }

    pub fn ty(&self) -> Ty {
        Ty::fin(self)
    }
}

impl fmt::Debug for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.name, self.atoms.join(","))
    }
}

/// The default universe of carriers quantified over by every law.
#[derive(Clone, Debug)]
pub struct Universe {
    carriers: Vec<FiniteType>,
}

impl Universe {
    pub fn standard() -> Universe {
        Universe {
            carriers: vec![
                FiniteType::indexed("Void", "v", 0),
                FiniteType::indexed("Unit", "u", 1),
                FiniteType::indexed("Bool", "b", 2),
                FiniteType::indexed("Tri", "t", 3),
                FiniteType::indexed("Quad", "q", 4),
            ],
        }
    }

    /// The standard universe restricted to carriers of size `<= max`.
    pub fn with_max(max: usize) -> Universe {
        let mut u = Universe::standard();
        u.carriers.retain(|c| c.len() <= max);
        u
    }

    pub fn carriers(&self) -> &[FiniteType] {
        &self.carriers
    }

    pub fn upto(&self, max: usize) -> Vec<Ty> {
        self.carriers.iter().filter(|c| c.len() <= max).map(Ty::fin).collect()
    }

    pub fn by_name(&self, name: &str) -> Option<&FiniteType> {
        self.carriers.iter().find(|c| c.name() == name)
    }
}

/// A carrier description.
#[derive(Clone)]
pub struct Ty(Rc<TyKind>);

pub enum TyKind {
    Unit,
    Fin(FiniteType),
    /// Naturals; the enumerated part is `0 .. probe`.
    Nat(u64),
    Pair(Ty, Ty),
    Sum(Ty, Ty),
    /// Lists; unbounded as values, enumerated up to the given length.
    List(Ty, usize),
    Fun(Ty, Ty),
    Monadic(MonadRef, Ty),
}

impl Ty {
    fn mk(k: TyKind) -> Ty {
        Ty(Rc::new(k))
    }
    pub fn unit() -> Ty {
        Ty::mk(TyKind::Unit)
    }
    pub fn fin(f: &FiniteType) -> Ty {
        Ty::mk(TyKind::Fin(f.clone()))
    }
    pub fn nat(probe: u64) -> Ty {
        Ty::mk(TyKind::Nat(probe))
    }
    pub fn pair(a: &Ty, b: &Ty) -> Ty {
        Ty::mk(TyKind::Pair(a.clone(), b.clone()))
    }
    pub fn sum(a: &Ty, b: &Ty) -> Ty {
        Ty::mk(TyKind::Sum(a.clone(), b.clone()))
    }
    pub fn option(a: &Ty) -> Ty {
        Ty::sum(&Ty::unit(), a)
    }
    pub fn list(a: &Ty, cap: usize) -> Ty {
        Ty::mk(TyKind::List(a.clone(), cap))
    }
    pub fn fun(a: &Ty, b: &Ty) -> Ty {
        Ty::mk(TyKind::Fun(a.clone(), b.clone()))
    }
    pub fn monadic(m: &MonadRef, a: &Ty) -> Ty {
        Ty::mk(TyKind::Monadic(m.clone(), a.clone()))
    }

    pub fn kind(&self) -> &TyKind {
        &self.0
    }

    /// First-order data: enumerable in a canonical order and indexable.
    pub fn is_data(&self) -> bool {
        match self.kind() {
            TyKind::Unit | TyKind::Fin(_) | TyKind::Nat(_) => true,
            TyKind::Pair(a, b) | TyKind::Sum(a, b) | TyKind::Fun(a, b) => a.is_data() && b.is_data(),
            TyKind::List(a, _) => a.is_data(),
            TyKind::Monadic(..) => false,
        }
    }

    /// Number of enumerated values of a data type; `None` if not data or too
    /// large to count.
    pub fn card(&self) -> Option<u128> {
        match self.kind() {
            TyKind::Unit => Some(1),
            TyKind::Fin(f) => Some(f.len() as u128),
            TyKind::Nat(n) => Some(*n as u128),
            TyKind::Pair(a, b) => a.card()?.checked_mul(b.card()?),
            TyKind::Sum(a, b) => a.card()?.checked_add(b.card()?),
            TyKind::List(a, cap) => {
                let n = a.card()?;
                let mut total: u128 = 0;
                let mut pow: u128 = 1;
                for _ in 0..=*cap {
                    total = total.checked_add(pow)?;
                    pow = pow.checked_mul(n)?;
                }
                Some(total)
            }
            TyKind::Fun(a, b) => {
                let exp = u32::try_from(a.card()?).ok()?;
                b.card()?.checked_pow(exp)
            }
            TyKind::Monadic(..) => None,
        }
    }

    /// All values of a data type in canonical order. Callers bound the size
    /// with [`Ty::card`] first.
    pub fn values(&self) -> Vec<Value> {
        match self.kind() {
            TyKind::Unit => vec![Value::Unit],
            TyKind::Fin(f) => f.values().collect(),
            TyKind::Nat(n) => (0..*n).map(Value::Nat).collect(),
            TyKind::Pair(a, b) => {
                if a.card() == Some(0) || b.card() == Some(0) {
                    return vec![];
                }
                let bs = b.values();
                let mut out = Vec::new();
                for x in a.values() {
                    for y in &bs {
                        out.push(Value::pair(x.clone(), y.clone()));
                    }
                }
                out
            }
            TyKind::Sum(a, b) => a
                .values()
                .into_iter()
                .map(Value::inl)
                .chain(b.values().into_iter().map(Value::inr))
                .collect(),
            TyKind::List(a, cap) => {
                let elems = a.values();
                let mut out = vec![Value::list(vec![])];
                let mut layer: Vec<Vec<Value>> = vec![vec![]];
                for _ in 0..*cap {
                    let mut next = Vec::new();
                    // Element i is the i-th digit (least significant first).
                    for e in &elems {
                        for prefix in &layer {
                            let mut l = prefix.clone();
                            l.push(e.clone());
                            next.push(l);
                        }
                    }
                    // Reorder so that index = sum digit_i * n^i.
                    next.sort_by_key(|l| list_digits(a, l));
                    out.extend(next.iter().cloned().map(Value::list));
                    layer = next;
                }
                out
            }
            TyKind::Fun(a, b) => {
                if a.card() == Some(0) {
                    return vec![tabulated(a, vec![]).into_value()];
                }
                let dom = a.values();
                let cod = b.values();
                let total = self.card().expect("function space too large to enumerate") as usize;
                (0..total)
                    .map(|k| {
                        let mut rest = k;
                        let table: Vec<Value> = dom
                            .iter()
                            .map(|_| {
                                let v = cod[rest % cod.len()].clone();
                                rest /= cod.len();
                                v
                            })
                            .collect();
                        tabulated(a, table).into_value()
                    })
                    .collect()
            }
            TyKind::Monadic(..) => panic!("monadic carriers are not data"),
        }
    }

    /// Canonical index of a data value (the position in [`Ty::values`]).
    pub fn index_of(&self, v: &Value) -> usize {
        match (self.kind(), v) {
            (TyKind::Unit, _) => 0,
            (TyKind::Fin(_), Value::Atom(i)) => *i as usize,
            (TyKind::Nat(_), Value::Nat(n)) => *n as usize,
            (TyKind::Pair(a, b), Value::Pair(p)) => {
                let nb = b.card().unwrap_or(1) as usize;
                a.index_of(&p.0) * nb + b.index_of(&p.1)
            }
            (TyKind::Sum(a, _), Value::Inl(x)) => a.index_of(x),
            (TyKind::Sum(a, b), Value::Inr(x)) => a.card().unwrap_or(0) as usize + b.index_of(x),
            (TyKind::List(a, _), Value::List(items)) => {
                let n = a.card().unwrap_or(1) as usize;
                let offset: usize = (0..items.len()).map(|l| n.saturating_pow(l as u32)).sum();
                let digits: usize = items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| a.index_of(x).saturating_mul(n.saturating_pow(i as u32)))
                    .sum();
                offset.saturating_add(digits)
            }
            (TyKind::Fun(a, b), Value::Fun(f)) => {
                let nb = b.card().unwrap_or(1) as usize;
                let mut idx = 0usize;
                let mut radix = 1usize;
                for x in a.values() {
                    idx = idx.saturating_add(b.index_of(&f.apply(&x)).saturating_mul(radix));
                    radix = radix.saturating_mul(nb);
                }
                idx
            }
            (_, other) => panic!("shape error: {other:?} is not a data value of {self}"),
        }
    }

    /// Structural key, injective on the types the harness builds; used for
    /// caching enumerations.
    pub fn key(&self) -> String {
        match self.kind() {
            TyKind::Unit => "unit".into(),
            TyKind::Fin(f) => format!("{}/{}", f.name(), f.len()),
            TyKind::Nat(n) => format!("nat<{n}"),
            TyKind::Pair(a, b) => format!("({}*{})", a.key(), b.key()),
            TyKind::Sum(a, b) => format!("({}+{})", a.key(), b.key()),
            TyKind::List(a, c) => format!("list{c}({})", a.key()),
            TyKind::Fun(a, b) => format!("({}->{})", a.key(), b.key()),
            TyKind::Monadic(m, a) => format!("{}<{}>", m.name(), a.key()),
        }
    }

    pub fn as_fin(&self) -> Option<&FiniteType> {
        match self.kind() {
            TyKind::Fin(f) => Some(f),
            _ => None,
        }
    }
}

fn list_digits(a: &Ty, l: &[Value]) -> Vec<usize> {
    let mut d: Vec<usize> = l.iter().map(|x| a.index_of(x)).collect();
    d.reverse();
    d
}

/// A function over a data domain given by its table (indexed canonically).
/// Inputs beyond the enumerated part of the domain are folded back by index.
pub fn tabulated(dom: &Ty, table: Vec<Value>) -> Func {
    let dom = dom.clone();
    let table: Rc<[Value]> = table.into();
    Func::new(move |x| {
        if table.is_empty() {
            panic!("applied a function with empty domain");
        }
        table[dom.index_of(x) % table.len()].clone()
    })
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            TyKind::Unit => write!(f, "unit"),
            TyKind::Fin(t) => write!(f, "{}", t.name()),
            TyKind::Nat(_) => write!(f, "nat"),
            TyKind::Pair(a, b) => write!(f, "({a} × {b})"),
            TyKind::Sum(a, b) => write!(f, "({a} + {b})"),
            TyKind::List(a, _) => write!(f, "list {a}"),
            TyKind::Fun(a, b) => write!(f, "({a} → {b})"),
            TyKind::Monadic(m, a) => write!(f, "{} {a}", m.name()),
        }
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bool_ty() -> Ty {
        Ty::fin(&FiniteType::indexed("Bool", "b", 2))
    }

    #[test]
    fn duplicate_atoms_rejected() {
        assert!(FiniteType::new("X", &["a", "b", "a"]).is_err());
        assert!(FiniteType::new("X", &["a", "b"]).is_ok());
    }

    #[test]
    fn index_matches_enumeration_order() {
        let b = bool_ty();
        let tys = [
            Ty::pair(&b, &Ty::fin(&FiniteType::indexed("Tri", "t", 3))),
            Ty::sum(&Ty::unit(), &b),
            Ty::list(&b, 3),
            Ty::fun(&b, &b),
            Ty::fun(&Ty::fun(&b, &b), &b),
        ];
        for t in &tys {
            let vals = t.values();
            assert_eq!(vals.len() as u128, t.card().unwrap(), "{t}");
            for (i, v) in vals.iter().enumerate() {
                assert_eq!(t.index_of(v), i, "{t} at {i}");
            }
        }
    }

    #[test]
    fn empty_factors_do_not_enumerate_the_other_side() {
        let void = Ty::fin(&FiniteType::indexed("Void", "v", 0));
        let huge = Ty::fun(&Ty::list(&bool_ty(), 3), &Ty::list(&bool_ty(), 3));
        assert!(Ty::pair(&void, &huge).values().is_empty());
        assert_eq!(Ty::fun(&void, &huge).values().len(), 1);
    }

    #[test]
    fn list_card_counts_all_lengths() {
        assert_eq!(Ty::list(&bool_ty(), 3).card(), Some(1 + 2 + 4 + 8));
    }

    #[test]
    fn universe_filtering() {
        let u = Universe::standard();
        assert_eq!(u.carriers().len(), 5);
        assert_eq!(u.upto(2).len(), 3);
        assert_eq!(Universe::with_max(3).carriers().len(), 4);
    }
}
