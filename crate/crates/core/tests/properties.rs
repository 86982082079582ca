//! Property tests over the public surface.

use effectlaws::examples::{fast_product, fast_product_model};
use effectlaws::hierarchy::eval_state_t;
use effectlaws::runner::{all_ids, run_selected, select};
use effectlaws::{Config, Ty, Universe, Value};
use proptest::prelude::*;

fn small_ty() -> impl Strategy<Value = Ty> {
    let atoms: Vec<Ty> = Universe::standard().carriers().iter().filter(|c| c.len() <= 3).map(|c| c.ty()).collect();
    let leaf = proptest::sample::select(atoms);
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ty::pair(&a, &b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ty::sum(&a, &b)),
            inner.clone().prop_map(|a| Ty::option(&a)),
        ]
    })
}

fn zero_ms(cfg: &Config, ids: &[String]) -> String {
    let mut r = run_selected(cfg, ids, 1);
    for x in &mut r {
        x.ms = 0;
    }
    serde_json::to_string(&r).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_is_indexed(t in small_ty()) {
        let vs = t.values();
        prop_assert_eq!(Some(vs.len() as u128), t.card());
        for (i, v) in vs.iter().enumerate() {
            prop_assert_eq!(t.index_of(v), i);
        }
    }

    #[test]
    fn fast_product_agrees_with_a_fold(l in proptest::collection::vec(0u64..=3, 0..=4), n in 0u64..=81) {
        let m = fast_product_model(&Config::default()).unwrap();
        let got = eval_state_t(&m, &fast_product(&m, &l), &Value::Nat(n));
        let want = Value::inr(Value::Nat(l.iter().product()));
        prop_assert_eq!(got.structural_eq(&want), Some(true));
    }

    #[test]
    fn selection_stays_below_the_pattern(pick in 0usize..64) {
        let ids = all_ids(&Config::quick());
        let id = &ids[pick % ids.len()];
        let prefix = id.split('/').next().unwrap().to_string();
        for s in select(&ids, std::slice::from_ref(&prefix)).unwrap() {
            prop_assert!(s == prefix || s.starts_with(&(prefix.clone() + "/")));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reports_depend_only_on_the_seed(seed in any::<u64>()) {
        let cfg = Config { seed, ..Config::quick() };
        let ids = select(&all_ids(&cfg), &["monad-laws/list".into(), "prop17".into()]).unwrap();
        prop_assert_eq!(zero_ms(&cfg, &ids), zero_ms(&cfg, &ids));
    }
}
