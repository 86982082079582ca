//! `fastProduct`: a product that bails out on the first zero. Written only
//! against the exceptStateRunMonad interface.

use crate::case;
use crate::config::Config;
use crate::error::HarnessError;
use crate::hierarchy::{eval_state_t, ExceptOps, Model, RunOps, StateOps};
use crate::report::LawCtx;
use crate::ty::Ty;
use crate::value::{Func, Value};

fn ops(model: &dyn Model) -> (&dyn ExceptOps, &dyn StateOps) {
    (
        model.except().expect("fastProduct needs Fail and Catch"),
        model.state().expect("fastProduct needs Get and Put"),
    )
}

fn then(model: &dyn Model, x: &Value, y: &Value) -> Value {
    model.monad().bind(x, &Func::constant(y.clone()))
}

/// `[] ↦ Ret tt`, `0 :: _ ↦ Fail`, `n :: l ↦ Get >>= λm. Put (m·n) >> rec l`.
pub fn fast_product_rec(model: &dyn Model, l: &[u64]) -> Value {
    let (ex, st) = ops(model);
    let m = model.monad();
    match l.split_first() {
        None => m.ret(&Value::Unit),
        Some((0, _)) => ex.fail(),
        Some((&n, rest)) => {
            let rest = fast_product_rec(model, rest);
            // Put is precomputed per reachable state so the continuation
            // does not borrow the model.
            let states = st.state_ty().values();
            let puts: Vec<Value> = states.iter().map(|s| st.put(&Value::Nat(s.as_nat() * n))).collect();
            let m2 = m.clone();
            let k = Func::new(move |s| {
                let put = puts.get(s.as_nat() as usize).unwrap_or_else(|| panic!("state {} · {n} leaves the carrier", s.as_nat()));
                m2.bind(put, &Func::constant(rest.clone()))
            });
            m.bind(&st.get(), &k)
        }
    }
}

/// `Catch (Put 1 >> fastProductRec l >> Get) (Ret 0)`.
pub fn fast_product(model: &dyn Model, l: &[u64]) -> Value {
    let (ex, st) = ops(model);
    let m = model.monad();
    let body = then(model, &then(model, &st.put(&Value::Nat(1)), &fast_product_rec(model, l)), &st.get());
    ex.catch(&body, &m.ret(&Value::Nat(0)))
}

/// The state carrier that holds every product of a list within the bounds.
pub fn product_carrier(max_len: usize, max_elem: u64) -> Result<Ty, HarnessError> {
    let cap = u32::try_from(max_len)
        .ok()
        .and_then(|len| max_elem.checked_pow(len))
        .filter(|&c| c <= 1 << 20)
        .ok_or_else(|| HarnessError::Config(format!("{max_elem}^{max_len} is too large a state carrier")))?;
    Ok(Ty::nat(cap.max(1) + 1))
}

/// Every list of length `<= max_len` over `0..=max_elem`, shortest first.
pub fn lists(max_len: usize, max_elem: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|l: &Vec<u64>| {
                (0..=max_elem).map(move |x| {
                    let mut l = l.clone();
                    l.push(x);
                    l
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// `evalStateT (fastProduct l) n = Ret (product l)` for every list within
/// the bounds and every state `n` of the carrier. The product is a plain
/// fold.
pub fn fast_product_law(model: &dyn Model, max_len: usize, max_elem: u64, ctx: &mut LawCtx) {
    let run: &dyn RunOps = model.run().expect("fastProduct is run through RunStateT");
    let n = run.base();
    let out = crate::kernel::mty(&n, &Ty::nat(u64::MAX));
    let states = model.state().expect("Get and Put").state_ty().values();
    for l in lists(max_len, max_elem) {
        let prog = fast_product(model, &l);
        let expected = n.ret(&Value::Nat(l.iter().product()));
        case!(ctx, |g| {
            for s in &states {
                g.expect_eq(&out, &eval_state_t(run, &prog, s), &expected)
                    .map_err(|e| e.input("l", format!("{l:?}")).input("n", s.as_nat().to_string()))?;
            }
            Ok(())
        });
    }
}

/// The model fastProduct is checked against: `stateT` over exceptions with
/// a natural-number state carrier.
pub fn fast_product_model(cfg: &Config) -> Result<crate::hierarchy::ExceptStateRunModel, HarnessError> {
    let s = product_carrier(cfg.fp_max_len, cfg.fp_max_elem)?;
    Ok(crate::hierarchy::ExceptStateRunModel::new(&s, &Ty::unit(), cfg.mutant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observe::Gen;

    fn model() -> crate::hierarchy::ExceptStateRunModel {
        fast_product_model(&Config::default()).unwrap()
    }

    fn eval(l: &[u64], n: u64) -> Value {
        let m = model();
        eval_state_t(&m, &fast_product(&m, l), &Value::Nat(n))
    }

    fn is_ret(v: &Value, k: u64) -> bool {
        v.structural_eq(&Value::inr(Value::Nat(k))) == Some(true)
    }

    #[test]
    fn small_cases() {
        assert!(is_ret(&eval(&[], 7), 1));
        assert!(is_ret(&eval(&[2, 0, 3], 7), 0));
        assert!(is_ret(&eval(&[2, 3, 3], 0), 18));
        assert!(is_ret(&eval(&[1, 1, 1], 5), 1));
    }

    #[test]
    fn the_recursion_ends_in_the_product_state() {
        let m = model();
        let r = m.run_state_t(&fast_product_rec(&m, &[2, 3]), &Value::Nat(1));
        assert_eq!(r.structural_eq(&Value::inr(Value::pair(Value::Unit, Value::Nat(6)))), Some(true));
        let z = m.run_state_t(&fast_product_rec(&m, &[0]), &Value::Nat(1));
        assert!(matches!(z, Value::Inl(_)));
    }

    #[test]
    fn list_enumeration_counts() {
        assert_eq!(lists(3, 2).len(), 1 + 3 + 9 + 27);
        assert_eq!(lists(4, 3).len(), 341);
    }

    #[test]
    fn correct_on_short_lists() {
        let g = Gen::new(&Config::quick(), "fp");
        let mut ctx = LawCtx::new(&g, None);
        fast_product_law(&model(), 3, 2, &mut ctx);
        assert!(ctx.failure().is_none(), "{:?}", ctx.failure());
    }

    #[test]
    fn oversized_carriers_are_rejected() {
        assert!(product_carrier(40, 5).is_err());
        assert_eq!(product_carrier(0, 0).unwrap().card(), Some(2));
    }
}
