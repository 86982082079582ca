//! The registry of laws the runner can select. Every entry is a law id, an
//! anchor naming the result it checks, whether it should hold or be
//! refuted, and a body that builds its definitions from the configuration.

use std::rc::Rc;

use crate::codensity::{
    from_lift_law, generated_terms, naturality_mk_law, non_parametric_family, psik, psik_e_law, slifting, Codensity,
};
use crate::config::{Budget, Config};
use crate::examples::{fast_product_law, fast_product_model};
use crate::hierarchy::{backtracking_law, interfaces, runstatet_equations, ExceptStateRunModel};
use crate::kernel::functor::{functor_composition_law, functor_identity_law};
use crate::kernel::monad::{assoc_law, left_unit_law, ret_naturality_law, right_unit_law};
use crate::kernel::nat::check_naturality;
use crate::kernel::{monad_functor, MonadRef};
use crate::lifting::{alget_law, alifting, alifting_explicit, lifting_law, prop17_law, square_law, Square};
use crate::models::monads::{base, Params, BASE_MONADS};
use crate::models::ops::{algebraicity_law, op, sigma_equal, AlgebraicOp, SigmaOp, OPS};
use crate::report::{run_law, Expect, LawCtx, LawReport};
use crate::transformers::laws::{
    hmap_comp_law, hmap_id_law, hmap_morphism, lift_naturality_law, morphism_pool, pool_compositions, Coincidence,
};
use crate::transformers::{morphism_bind_law, morphism_ret_law, transformer, TransformerRef, FMTS, TRANSFORMERS};
use crate::ty::Ty;

type Body = Rc<dyn Fn(&Config, &mut LawCtx)>;

/// Adjusts the budget of one entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Standard,
    /// Every comparison probes codensity computations: cases are capped by
    /// `heavy_case_cap`.
    Heavy,
    /// Enumeration caps are raised so the law stays exhaustive.
    Exhaustive,
}

#[derive(Clone)]
pub struct LawEntry {
    pub id: String,
    pub anchor: &'static str,
    pub expect: Expect,
    pub profile: Profile,
    body: Body,
}

impl LawEntry {
    fn new(id: String, anchor: &'static str, body: impl Fn(&Config, &mut LawCtx) + 'static) -> LawEntry {
        LawEntry { id, anchor, expect: Expect::Holds, profile: Profile::Standard, body: Rc::new(body) }
    }

    fn refuted(mut self) -> LawEntry {
        self.expect = Expect::Refuted;
        self
    }

    fn expect(mut self, holds: bool) -> LawEntry {
        self.expect = if holds { Expect::Holds } else { Expect::Refuted };
        self
    }

    fn profile(mut self, p: Profile) -> LawEntry {
        self.profile = p;
        self
    }

    /// The configuration this entry actually runs under.
    pub fn effective_config(&self, cfg: &Config) -> Config {
        let mut c = cfg.clone();
        let b: &mut Budget = &mut c.budget;
        match self.profile {
            Profile::Standard => {}
            Profile::Heavy => b.case_cap = b.case_cap.min(b.heavy_case_cap),
            Profile::Exhaustive => {
                b.fn_enum_cap = b.fn_enum_cap.max(1 << 16);
                b.case_cap = b.case_cap.max(1 << 21);
                b.sig_enum_cap = b.sig_enum_cap.max(1 << 16);
            }
        }
        c
    }

    /// Runs the law; with `target`, only that case.
    pub fn run(&self, cfg: &Config, target: Option<u64>) -> LawReport {
        let c = self.effective_config(cfg);
        let body = self.body.clone();
        let c2 = c.clone();
        run_law(&self.id, self.anchor, &c, target, self.expect, move |ctx| body(&c2, ctx))
    }
}

mod anchors {
    pub const FUNCTOR: &str = "Functor laws";
    pub const NAT: &str = "Naturality of Ret";
    pub const MONAD: &str = "Monad laws";
    pub const TRANSFORMER: &str = "Monad transformers: transformed monad laws";
    pub const MORPHISM: &str = "Monad morphisms: Lift preserves Ret and bind";
    pub const FMT: &str = "Functorial monad transformers: Hmap";
    pub const COINCIDENCE: &str = "stateT S over identity is the state monad";
    pub const ALGEBRAICITY: &str = "Algebraic operations: classification";
    pub const NATURALITY: &str = "Sigma-operations are natural";
    pub const PROP17: &str = "Prop 17: psi after phi";
    pub const THM19: &str = "Thm 19: uniform algebraic lifting";
    pub const THM27: &str = "Thm 27: lifting sigma-operations through codensity";
    pub const PROP26: &str = "Prop 26: from and psik";
    pub const PROP28: &str = "Prop 28: agreement with algebraic lifting";
    pub const NATURALITY_MK: &str = "Naturality of codensity computations (parametricity surrogate)";
    pub const RUNSTATET: &str = "RunStateT equations";
    pub const HIERARCHY: &str = "Interface hierarchy: inherited equations";
    pub const FASTPRODUCT: &str = "fastProduct: evalStateT (fastProduct l) n = Ret (product l)";
}

fn params() -> Params {
    Params::standard()
}

fn monad(name: &str) -> MonadRef {
    base(name, &params()).unwrap_or_else(|| panic!("unknown base monad {name}"))
}

fn the_op(name: &str, cfg: &Config) -> SigmaOp {
    op(name, &params(), cfg.mutant).unwrap_or_else(|| panic!("unknown operation {name}"))
}

fn the_transformer(name: &str, cfg: &Config) -> TransformerRef {
    transformer(name, &params(), cfg.mutant).unwrap_or_else(|| panic!("unknown transformer {name}"))
}

fn codensity_over(name: &str) -> MonadRef {
    Rc::new(Codensity { m: monad(name) })
}

/// Names of the registered operations in the run, by classification.
fn op_names(cfg: &Config) -> Vec<(&'static str, bool)> {
    OPS.iter().filter(|o| o.name != "callcc" || cfg.with_callcc).map(|o| (o.name, o.algebraic)).collect()
}

/// Bases the codensity transformer is checked over.
pub const CODENSITY_BASES: [&str; 3] = ["identity", "state", "exceptZ"];

/// Bases the other transformers' monad laws are checked over.
const TRANSFORMER_BASES: [&str; 3] = ["identity", "state", "exceptZ"];

/// Builds the catalog for `cfg`. Cheap: bodies construct their
/// definitions only when run.
pub fn catalog(cfg: &Config) -> Vec<LawEntry> {
    let mut out = Vec::new();
    kernel_entries(&mut out);
    monad_entries(&mut out);
    transformer_entries(&mut out);
    operation_entries(cfg, &mut out);
    thm19_entries(cfg, &mut out);
    codensity_entries(cfg, &mut out);
    hierarchy_entries(&mut out);
    out.push(LawEntry::new("fastproduct".into(), anchors::FASTPRODUCT, |cfg, ctx| {
        let model = fast_product_model(cfg).expect("validated bounds");
        fast_product_law(&model, cfg.fp_max_len, cfg.fp_max_elem, ctx);
    }));
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

fn kernel_entries(out: &mut Vec<LawEntry>) {
    for &m in &BASE_MONADS {
        out.push(LawEntry::new(format!("functor-laws/{m}/identity"), anchors::FUNCTOR, move |_, ctx| {
            functor_identity_law(&monad_functor(&monad(m)), &ctx.g.law_carriers(), ctx)
        }));
        out.push(LawEntry::new(format!("functor-laws/{m}/composition"), anchors::FUNCTOR, move |_, ctx| {
            functor_composition_law(&monad_functor(&monad(m)), &ctx.g.law_carriers(), ctx)
        }));
        out.push(LawEntry::new(format!("nat/{m}/ret"), anchors::NAT, move |_, ctx| {
            ret_naturality_law(&monad(m), &ctx.g.law_carriers(), ctx)
        }));
    }
}

type MonadLaw = fn(&MonadRef, &[Ty], &mut LawCtx);

const MONAD_LAWS: [(&str, MonadLaw); 3] =
    [("left-unit", left_unit_law), ("right-unit", right_unit_law), ("assoc", assoc_law)];

fn monad_entries(out: &mut Vec<LawEntry>) {
    for &m in &BASE_MONADS {
        for (law, f) in MONAD_LAWS {
            out.push(LawEntry::new(format!("monad-laws/{m}/{law}"), anchors::MONAD, move |_, ctx| {
                f(&monad(m), &ctx.g.law_carriers(), ctx)
            }));
        }
    }
    for &m in &CODENSITY_BASES {
        for (law, f) in MONAD_LAWS {
            out.push(
                LawEntry::new(format!("monad-laws/codensityT({m})/{law}"), anchors::MONAD, move |_, ctx| {
                    f(&codensity_over(m), &ctx.g.law_carriers(), ctx)
                })
                .profile(Profile::Heavy),
            );
        }
    }
}

/// Computations built from continuations are compared by running them
/// against every enumerated continuation: those laws get the heavy cap.
fn continuation_profile(t: &str, m: &str) -> Profile {
    if t == "codensityT" || t == "contT" || m == "cont" {
        Profile::Heavy
    } else {
        Profile::Standard
    }
}

fn transformer_entries(out: &mut Vec<LawEntry>) {
    // Lift is a monad morphism.
    for &t in &TRANSFORMERS {
        let bases: &[&str] = if t == "codensityT" { &CODENSITY_BASES } else { &BASE_MONADS };
        for &m in bases {
            let profile = continuation_profile(t, m);
            out.push(
                LawEntry::new(format!("morphism-laws/{t}/{m}/ret"), anchors::MORPHISM, move |cfg, ctx| {
                    morphism_ret_law(&the_transformer(t, cfg).lift(&monad(m)), &ctx.g.law_carriers(), ctx)
                })
                .profile(profile),
            );
            out.push(
                LawEntry::new(format!("morphism-laws/{t}/{m}/bind"), anchors::MORPHISM, move |cfg, ctx| {
                    let c = ctx.g.carriers(cfg.lifting_carrier());
                    morphism_bind_law(&the_transformer(t, cfg).lift(&monad(m)), &c, ctx)
                })
                .profile(profile),
            );
            out.push(
                LawEntry::new(format!("morphism-laws/{t}/{m}/natural"), anchors::MORPHISM, move |cfg, ctx| {
                    let c = ctx.g.carriers(cfg.lifting_carrier());
                    check_naturality(&the_transformer(t, cfg).lift(&monad(m)).as_nat(), &c, ctx)
                })
                .profile(profile),
            );
        }
    }
    // The transformed monads satisfy the monad laws.
    for &t in TRANSFORMERS.iter().filter(|&&t| t != "codensityT") {
        for &m in &TRANSFORMER_BASES {
            for (law, f) in MONAD_LAWS {
                out.push(
                    LawEntry::new(format!("transformer-laws/{t}/{m}/{law}"), anchors::TRANSFORMER, move |cfg, ctx| {
                        let tm = the_transformer(t, cfg).apply(&monad(m));
                        f(&tm, &ctx.g.carriers(cfg.lifting_carrier()), ctx)
                    })
                    .profile(continuation_profile(t, m)),
                );
            }
        }
    }
    // Functorial transformers.
    let pool = morphism_pool(&params());
    let names: Vec<String> = pool.iter().map(|n| n.name.clone()).collect();
    let comps: Vec<(String, String)> =
        pool_compositions(&pool).iter().map(|(n2, n1)| (n2.name.clone(), n1.name.clone())).collect();
    let find = |name: &str| {
        morphism_pool(&params()).into_iter().find(|n| n.name == name).expect("pool member")
    };
    for &t in &FMTS {
        for name in &names {
            let n = name.clone();
            out.push(LawEntry::new(format!("fmt/{t}/hmap-morphism/{name}"), anchors::FMT, move |cfg, ctx| {
                let tr = the_transformer(t, cfg);
                let h = hmap_morphism(tr.functorial().expect("functorial"), &find(&n));
                let c = ctx.g.carriers(cfg.lifting_carrier());
                morphism_ret_law(&h, &c, ctx);
                morphism_bind_law(&h, &c, ctx);
            }));
            let n = name.clone();
            out.push(LawEntry::new(format!("fmt/{t}/hmap-natural/{name}"), anchors::FMT, move |cfg, ctx| {
                let tr = the_transformer(t, cfg);
                let h = hmap_morphism(tr.functorial().expect("functorial"), &find(&n));
                check_naturality(&h.as_nat(), &ctx.g.carriers(cfg.lifting_carrier()), ctx);
            }));
            let n = name.clone();
            out.push(LawEntry::new(format!("fmt/{t}/lift-natural/{name}"), anchors::FMT, move |cfg, ctx| {
                let tr = the_transformer(t, cfg);
                lift_naturality_law(tr.functorial().expect("functorial"), &find(&n), &ctx.g.law_carriers(), ctx);
            }));
        }
        for &m in &BASE_MONADS {
            out.push(LawEntry::new(format!("fmt/{t}/hmap-id/{m}"), anchors::FMT, move |cfg, ctx| {
                let tr = the_transformer(t, cfg);
                hmap_id_law(tr.functorial().expect("functorial"), &monad(m), &ctx.g.law_carriers(), ctx);
            }));
        }
        for (n2, n1) in &comps {
            let (n2, n1) = (n2.clone(), n1.clone());
            out.push(LawEntry::new(format!("fmt/{t}/hmap-comp/{n2}∘{n1}"), anchors::FMT, move |cfg, ctx| {
                let tr = the_transformer(t, cfg);
                hmap_comp_law(tr.functorial().expect("functorial"), &find(&n2), &find(&n1), &ctx.g.law_carriers(), ctx);
            }));
        }
    }
    // stateT S over identity against the direct state monad.
    type CoLaw = fn(&Coincidence, &[Ty], &mut LawCtx);
    let laws: [(&str, CoLaw); 4] = [
        ("ret", Coincidence::ret_law),
        ("bind", Coincidence::bind_law),
        ("get", Coincidence::get_law),
        ("put", Coincidence::put_law),
    ];
    for (law, f) in laws {
        out.push(
            LawEntry::new(format!("coincidence/{law}"), anchors::COINCIDENCE, move |_, ctx| {
                f(&Coincidence::new(&params()), &ctx.g.law_carriers(), ctx)
            })
            .profile(Profile::Exhaustive),
        );
    }
}

fn operation_entries(cfg: &Config, out: &mut Vec<LawEntry>) {
    for (name, algebraic) in op_names(cfg) {
        out.push(
            LawEntry::new(format!("algebraicity/{name}"), anchors::ALGEBRAICITY, move |cfg, ctx| {
                algebraicity_law(&the_op(name, cfg), &ctx.g.law_carriers(), ctx)
            })
            .expect(algebraic),
        );
        out.push(LawEntry::new(format!("naturality/{name}"), anchors::NATURALITY, move |cfg, ctx| {
            check_naturality(&the_op(name, cfg).as_nat(), &ctx.g.law_carriers(), ctx)
        }));
        out.push(
            LawEntry::new(format!("prop17/{name}"), anchors::PROP17, move |cfg, ctx| {
                prop17_law(&the_op(name, cfg), &ctx.g.law_carriers(), ctx)
            })
            .expect(algebraic),
        );
    }
    // `output` with the emitted word and the existing log in the other order.
    out.push(
        LawEntry::new("algebraicity/output-prefix".into(), anchors::ALGEBRAICITY, |cfg, ctx| {
            algebraicity_law(&the_op("output-prefix", cfg), &ctx.g.law_carriers(), ctx)
        })
        .refuted(),
    );
}

fn algebraic(op: &SigmaOp) -> AlgebraicOp {
    // The classification suites check this separately; here the operation
    // is taken at its registered classification.
    crate::models::ops::AlgebraicOp::by_construction(op.clone())
}

fn thm19_entries(cfg: &Config, out: &mut Vec<LawEntry>) {
    for (name, alg) in op_names(cfg) {
        if !alg {
            continue;
        }
        for &t in &TRANSFORMERS {
            let profile = if t == "codensityT" { Profile::Heavy } else { Profile::Standard };
            out.push(
                LawEntry::new(format!("thm19/{name}/{t}/lifting"), anchors::THM19, move |cfg, ctx| {
                    let o = the_op(name, cfg);
                    let e = the_transformer(t, cfg).lift(&o.monad);
                    match alifting(&algebraic(&o), &e) {
                        Ok(l) => lifting_law(&o, &e, l.op(), &ctx.g.carriers(cfg.lifting_carrier()), ctx),
                        Err(err) => ctx.refuse(err),
                    }
                })
                .profile(profile),
            );
            out.push(
                LawEntry::new(format!("thm19/{name}/{t}/algebraic"), anchors::THM19, move |cfg, ctx| {
                    let o = the_op(name, cfg);
                    let e = the_transformer(t, cfg).lift(&o.monad);
                    match alifting(&algebraic(&o), &e) {
                        Ok(l) => algebraicity_law(l.op(), &ctx.g.carriers(cfg.lifting_carrier().min(1)), ctx),
                        Err(err) => ctx.refuse(err),
                    }
                })
                .profile(profile),
            );
            out.push(
                LawEntry::new(format!("thm19/{name}/{t}/aliftingE"), anchors::THM19, move |cfg, ctx| {
                    let o = the_op(name, cfg);
                    let e = the_transformer(t, cfg).lift(&o.monad);
                    match alifting(&algebraic(&o), &e) {
                        Ok(l) => sigma_equal(l.op(), &alifting_explicit(&o, &e), &ctx.g.carriers(cfg.lifting_carrier()), ctx),
                        Err(err) => ctx.refuse(err),
                    }
                })
                .profile(profile),
            );
            if cfg.deep_diagrams {
                for sq in Square::ALL {
                    out.push(
                        LawEntry::new(format!("thm19/{name}/{t}/square-{}", sq.id()), anchors::THM19, move |cfg, ctx| {
                            let o = the_op(name, cfg);
                            let e = the_transformer(t, cfg).lift(&o.monad);
                            square_law(sq, &o, &e, &ctx.g.carriers(cfg.lifting_carrier()), ctx)
                        })
                        .profile(profile),
                    );
                }
            }
        }
    }
    out.push(LawEntry::new("thm19/aLGet".into(), anchors::THM19, |cfg, ctx| {
        let get = the_op("get", cfg);
        let e = the_transformer("exceptT", cfg).lift(&get.monad);
        match alifting(&algebraic(&get), &e) {
            Ok(l) => alget_law(l.op(), &params().s, &ctx.g.law_carriers(), ctx),
            Err(err) => ctx.refuse(err),
        }
    }));
}

fn codensity_entries(cfg: &Config, out: &mut Vec<LawEntry>) {
    let ops: Vec<(&str, bool)> = op_names(cfg).into_iter().filter(|(n, _)| *n != "callcc").collect();
    for &(name, alg) in &ops {
        for &t in &FMTS {
            out.push(LawEntry::new(format!("thm27/{name}/{t}"), anchors::THM27, move |cfg, ctx| {
                let o = the_op(name, cfg);
                let tr = the_transformer(t, cfg);
                let lifted = slifting(&o, tr.functorial().expect("functorial"), cfg.mutant);
                lifting_law(&o, &tr.lift(&o.monad), &lifted, &ctx.g.carriers(cfg.lifting_carrier()), ctx);
            }));
            if alg {
                out.push(LawEntry::new(format!("prop28/{name}/{t}"), anchors::PROP28, move |cfg, ctx| {
                    let o = the_op(name, cfg);
                    let tr = the_transformer(t, cfg);
                    let s = slifting(&o, tr.functorial().expect("functorial"), cfg.mutant);
                    match alifting(&algebraic(&o), &tr.lift(&o.monad)) {
                        Ok(a) => sigma_equal(&s, a.op(), &ctx.g.carriers(cfg.lifting_carrier()), ctx),
                        Err(err) => ctx.refuse(err),
                    }
                }));
            }
        }
        out.push(LawEntry::new(format!("prop26/psikE/{name}"), anchors::PROP26, move |cfg, ctx| {
            psik_e_law(&the_op(name, cfg), cfg.mutant, &ctx.g.law_carriers(), ctx)
        }));
        out.push(
            LawEntry::new(format!("prop26/psik-algebraic/{name}"), anchors::PROP26, move |cfg, ctx| {
                algebraicity_law(psik(&the_op(name, cfg)).op(), &ctx.g.carriers(1), ctx)
            })
            .profile(Profile::Heavy),
        );
        out.push(
            LawEntry::new(format!("naturality-mk/psik/{name}"), anchors::NATURALITY_MK, move |cfg, ctx| {
                let o = the_op(name, cfg);
                let pk = psik(&o);
                for x in ctx.g.carriers(cfg.lifting_carrier()) {
                    let comps: Vec<_> = pk.args(ctx.g, &x).iter().map(|s| pk.at(&x, s)).collect();
                    naturality_mk_law(&o.monad, &x, &comps, ctx);
                    if ctx.is_done() {
                        return;
                    }
                }
            })
            .profile(Profile::Heavy),
        );
    }
    for &m in &BASE_MONADS {
        out.push(LawEntry::new(format!("prop26/from-lift/{m}"), anchors::PROP26, move |cfg, ctx| {
            from_lift_law(&monad(m), cfg.mutant, &ctx.g.law_carriers(), ctx)
        }));
    }
    for &m in &CODENSITY_BASES {
        out.push(
            LawEntry::new(format!("naturality-mk/{m}/generated"), anchors::NATURALITY_MK, move |cfg, ctx| {
                let mm = monad(m);
                for a in ctx.g.carriers(cfg.lifting_carrier()) {
                    naturality_mk_law(&mm, &a, &generated_terms(&mm, &a, ctx.g), ctx);
                    if ctx.is_done() {
                        return;
                    }
                }
            })
            .profile(Profile::Heavy),
        );
    }
    out.push(
        LawEntry::new("naturality-mk/non-parametric".into(), anchors::NATURALITY_MK, |_, ctx| {
            let m = monad("identity");
            for a in ctx.g.law_carriers() {
                let Some(a0) = ctx.g.inhabitants(&a).first().cloned() else { continue };
                naturality_mk_law(&m, &a, &[non_parametric_family(&m, &a0)], ctx);
                if ctx.is_done() {
                    return;
                }
            }
        })
        .refuted(),
    );
}

fn hierarchy_entries(out: &mut Vec<LawEntry>) {
    let model = |cfg: &Config| {
        let p = params();
        ExceptStateRunModel::new(&p.s, &p.z, cfg.mutant)
    };
    for e in runstatet_equations() {
        let check = e.check;
        out.push(
            LawEntry::new(format!("runstatet/{}", e.id), anchors::RUNSTATET, move |cfg, ctx| {
                check(&model(cfg), &ctx.g.carriers(2), ctx)
            })
            .profile(Profile::Exhaustive),
        );
    }
    out.push(LawEntry::new("runstatet/backtracking".into(), anchors::RUNSTATET, move |cfg, ctx| {
        backtracking_law(&model(cfg), ctx)
    }));
    for d in interfaces() {
        if d.name == "exceptStateRunMonad" {
            continue;
        }
        for e in d.equations {
            let check = e.check;
            out.push(LawEntry::new(
                format!("hierarchy-inheritance/{}/{}", d.name, e.id),
                anchors::HIERARCHY,
                move |cfg, ctx| check(&model(cfg), &ctx.g.carriers(2), ctx),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_anchored() {
        let cfg = Config { deep_diagrams: true, with_callcc: true, ..Config::default() };
        let cat = catalog(&cfg);
        let mut ids: Vec<_> = cat.iter().map(|e| e.id.clone()).collect();
        ids.dedup();
        assert_eq!(ids.len(), cat.len());
        assert!(cat.iter().all(|e| !e.anchor.is_empty()));
    }

    #[test]
    fn deep_squares_only_on_request() {
        let shallow = catalog(&Config::default());
        assert!(!shallow.iter().any(|e| e.id.contains("/square-")));
        let deep = catalog(&Config { deep_diagrams: true, ..Config::default() });
        assert!(deep.iter().any(|e| e.id == "thm19/get/exceptT/square-fhj-l"));
    }
}
