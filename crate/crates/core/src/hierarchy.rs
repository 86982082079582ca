//! Layered monad interfaces and a model of the state-over-exception spine.
//!
//! An interface is data: its parents, the operations it adds and the
//! equations it imposes. A model implements an interface when it provides
//! every operation of the inheritance closure and discharges every equation.

use std::rc::Rc;

use crate::case;
use crate::config::Mutant;
use crate::error::ConstructionError;
use crate::kernel::monad::{assoc_law, left_unit_law, right_unit_law};
use crate::kernel::{mty, MonadRef};
use crate::models::monads::{Except, State};
use crate::observe::Gen;
use crate::report::{CaseFailure, LawCtx};
use crate::transformers::stacks::{ExceptTMonad, StateTMonad};
use crate::ty::Ty;
use crate::value::{Func, Value};

/// `Fail` and `Catch` on a monad.
pub trait ExceptOps {
    /// A failing computation; usable at every result type.
    fn fail(&self) -> Value;
    fn catch(&self, m1: &Value, m2: &Value) -> Value;

    /// Whether every failure `m` can produce is `Fail` itself, i.e. `m` is
    /// expressible through the interface.
    fn expressible(&self, _m: &Value) -> bool {
        true
    }
}

/// `Get` and `Put`.
pub trait StateOps {
    fn state_ty(&self) -> Ty;
    fn get(&self) -> Value;
    fn put(&self, s: &Value) -> Value;
}

/// `RunStateT : M A -> S -> N (A × S)`.
pub trait RunOps {
    fn base(&self) -> MonadRef;
    fn base_except(&self) -> Option<&dyn ExceptOps>;
    fn runner(&self) -> Runner;

    fn run_state_t(&self, m: &Value, s: &Value) -> Value {
        self.runner()(m, s)
    }
}

pub type Runner = Rc<dyn Fn(&Value, &Value) -> Value>;

/// A monad together with whatever interface operations it provides.
pub trait Model {
    fn name(&self) -> String;
    fn monad(&self) -> MonadRef;
    fn except(&self) -> Option<&dyn ExceptOps> {
        None
    }
    fn state(&self) -> Option<&dyn StateOps> {
        None
    }
    fn run(&self) -> Option<&dyn RunOps> {
        None
    }

    fn provides(&self, op: &str) -> bool {
        match op {
            "ret" | "bind" => true,
            "fail" | "catch" => self.except().is_some(),
            "get" | "put" => self.state().is_some(),
            "runStateT" => self.run().is_some(),
            _ => false,
        }
    }
}

pub type EquationCheck = fn(&dyn Model, &[Ty], &mut LawCtx);

pub struct Equation {
    pub id: &'static str,
    /// Operations the equation mentions.
    pub uses: &'static [&'static str],
    pub check: EquationCheck,
}

pub struct InterfaceDef {
    pub name: &'static str,
    pub parents: &'static [&'static str],
    /// Operation names with their arities.
    pub operations: &'static [(&'static str, usize)],
    pub equations: Vec<Equation>,
}

macro_rules! eq {
    ($id:expr, [$($u:expr),*], $f:expr) => {
        Equation { id: $id, uses: &[$($u),*], check: $f }
    };
}

/// The spine monad → exceptMonad / stateMonad → stateRunMonad →
/// exceptStateRunMonad.
pub fn interfaces() -> Vec<InterfaceDef> {
    vec![
        InterfaceDef {
            name: "monad",
            parents: &[],
            operations: &[("ret", 1), ("bind", 2)],
            equations: vec![
                eq!("left-unit", ["ret", "bind"], |m, c, ctx| left_unit_law(&m.monad(), c, ctx)),
                eq!("right-unit", ["ret", "bind"], |m, c, ctx| right_unit_law(&m.monad(), c, ctx)),
                eq!("assoc", ["bind"], |m, c, ctx| assoc_law(&m.monad(), c, ctx)),
            ],
        },
        InterfaceDef {
            name: "exceptMonad",
            parents: &["monad"],
            operations: &[("fail", 0), ("catch", 2)],
            equations: vec![
                eq!("fail-left-zero", ["fail", "bind"], fail_left_zero),
                eq!("catch-fail-left", ["catch", "fail"], catch_fail_left),
                eq!("catch-fail-right", ["catch", "fail"], catch_fail_right),
                eq!("catch-assoc", ["catch"], catch_assoc),
                eq!("catch-ret", ["catch", "ret"], catch_ret),
            ],
        },
        InterfaceDef {
            name: "stateMonad",
            parents: &["monad"],
            operations: &[("get", 0), ("put", 1)],
            equations: vec![
                eq!("put-put", ["put", "bind"], put_put),
                eq!("put-get", ["put", "get", "bind", "ret"], put_get),
                eq!("get-put", ["get", "put", "bind", "ret"], get_put),
                eq!("get-get", ["get", "bind", "ret"], get_get),
            ],
        },
        InterfaceDef {
            name: "stateRunMonad",
            parents: &["stateMonad"],
            operations: &[("runStateT", 2)],
            equations: vec![
                eq!("ret", ["runStateT", "ret"], run_ret),
                eq!("bind", ["runStateT", "bind"], run_bind),
                eq!("get", ["runStateT", "get", "ret"], run_get),
                eq!("put", ["runStateT", "put", "ret"], run_put),
            ],
        },
        InterfaceDef {
            name: "exceptStateRunMonad",
            parents: &["exceptMonad", "stateRunMonad"],
            operations: &[],
            equations: vec![
                eq!("fail", ["runStateT", "fail"], run_fail),
                eq!("catch", ["runStateT", "catch"], run_catch),
            ],
        },
    ]
}

/// `name` and its ancestors, ancestors first, without repeats.
pub fn closure<'a>(defs: &'a [InterfaceDef], name: &str) -> Vec<&'a InterfaceDef> {
    fn visit<'a>(defs: &'a [InterfaceDef], name: &str, out: &mut Vec<&'a InterfaceDef>) {
        let Some(d) = defs.iter().find(|d| d.name == name) else { return };
        for p in d.parents {
            visit(defs, p, out);
        }
        if !out.iter().any(|o| o.name == d.name) {
            out.push(d);
        }
    }
    let mut out = Vec::new();
    visit(defs, name, &mut out);
    out
}

/// Equations mentioning an operation outside their interface's closure.
pub fn ill_scoped(defs: &[InterfaceDef]) -> Vec<(String, String)> {
    let mut bad = Vec::new();
    for d in defs {
        let ops: Vec<&str> = closure(defs, d.name).iter().flat_map(|i| i.operations.iter().map(|o| o.0)).collect();
        for e in &d.equations {
            for u in e.uses {
                if !ops.contains(u) {
                    bad.push((format!("{}/{}", d.name, e.id), u.to_string()));
                }
            }
        }
    }
    bad
}

/// Checks every equation of `iface` and its ancestors on `model`.
pub fn implements(model: &dyn Model, iface: &str, g: &Gen, carriers: &[Ty]) -> Result<(), ConstructionError> {
    let defs = interfaces();
    for d in closure(&defs, iface) {
        for (op, _) in d.operations {
            if !model.provides(op) {
                return Err(ConstructionError {
                    what: model.name(),
                    law: format!("{}/{}", d.name, op),
                    witness: crate::kernel::monad::bare_witness(format!("{op} is not provided")),
                });
            }
        }
        for e in &d.equations {
            let mut ctx = LawCtx::new(g, None);
            (e.check)(model, carriers, &mut ctx);
            if let Some(w) = ctx.into_parts().1 {
                return Err(ConstructionError { what: model.name(), law: format!("{}/{}", d.name, e.id), witness: w });
            }
        }
    }
    Ok(())
}

// Equations. Each reports a missing capability as a case failure.

fn need<T>(x: Option<T>, what: &str) -> Result<T, CaseFailure> {
    x.ok_or_else(|| CaseFailure::new(format!("model does not provide {what}")))
}

fn except_or_fail<'a>(m: &'a dyn Model, ctx: &mut LawCtx) -> Option<&'a dyn ExceptOps> {
    let e = m.except();
    if e.is_none() {
        ctx.case(|_| need(None::<()>, "fail/catch"));
    }
    e
}

fn state_or_fail<'a>(m: &'a dyn Model, ctx: &mut LawCtx) -> Option<&'a dyn StateOps> {
    let s = m.state();
    if s.is_none() {
        ctx.case(|_| need(None::<()>, "get/put"));
    }
    s
}

fn run_or_fail<'a>(m: &'a dyn Model, ctx: &mut LawCtx) -> Option<&'a dyn RunOps> {
    let r = m.run();
    if r.is_none() {
        ctx.case(|_| need(None::<()>, "runStateT"));
    }
    r
}

/// `Fail >>= f = Fail`.
fn fail_left_zero(model: &dyn Model, carriers: &[Ty], ctx: &mut LawCtx) {
    let Some(ex) = except_or_fail(model, ctx) else { return };
    let (g, m) = (ctx.g, model.monad());
    for a in carriers {
        for b in carriers {
            let fty = Ty::fun(a, &mty(&m, b));
            let fs = g.inhabitants(&fty);
            for f in fs.iter() {
                case!(ctx, |g| g
                    .expect_eq(&mty(&m, b), &m.bind(&ex.fail(), f.as_func()), &ex.fail())
                    .map_err(|e| e.input("A", a.to_string()).input("B", b.to_string()).input("f", g.render(&fty, f))));
            }
        }
    }
}

fn over_computations(model: &dyn Model, carriers: &[Ty], n: usize, ctx: &mut LawCtx, eq: impl Fn(&[&Value]) -> (Value, Value)) {
    let (g, m) = (ctx.g, model.monad());
    for a in carriers {
        let ma = mty(&m, a);
        let xs = g.inhabitants(&ma);
        for ix in g.cases(&vec![xs.len(); n]) {
            let args: Vec<&Value> = ix.iter().map(|&i| &xs[i]).collect();
            case!(ctx, |g| {
                let (lhs, rhs) = eq(&args);
                g.expect_eq(&ma, &lhs, &rhs).map_err(|e| {
                    args.iter()
                        .enumerate()
                        .fold(e.input("A", a.to_string()), |e, (i, x)| e.input(&format!("m{}", i + 1), g.render(&ma, x)))
                })
            });
        }
    }
}

/// `Catch Fail m = m`.
fn catch_fail_left(model: &dyn Model, carriers: &[Ty], ctx: &mut LawCtx) {
    let Some(ex) = except_or_fail(model, ctx) else { return };
    over_computations(model, carriers, 1, ctx, |x| (ex.catch(&ex.fail(), x[0]), x[0].clone()));
}

/// `Catch m Fail = m`, for `m` expressible through the interface: a
/// failure with any other payload is turned into `Fail` by the handler.
fn catch_fail_right(model: &dyn Model, carriers: &[Ty], ctx: &mut LawCtx) {
    let Some(ex) = except_or_fail(model, ctx) else { return };
    let (g, m) = (ctx.g, model.monad());
    for a in carriers {
        let ma = mty(&m, a);
        let xs = g.inhabitants(&ma);
        for x in xs.iter().filter(|x| ex.expressible(x)) {
            case!(ctx, |g| g
                .expect_eq(&ma, &ex.catch(x, &ex.fail()), x)
                .map_err(|e| e.input("A", a.to_string()).input("m", g.render(&ma, x))));
        }
    }
}

/// `Catch (Catch m1 m2) m3 = Catch m1 (Catch m2 m3)`.
fn catch_assoc(model: &dyn Model, carriers: &[Ty], ctx: &mut LawCtx) {
    let Some(ex) = except_or_fail(model, ctx) else { return };
    over_computations(model, carriers, 3, ctx, |x| {
        (ex.catch(&ex.catch(x[0], x[1]), x[2]), ex.catch(x[0], &ex.catch(x[1], x[2])))
    });
}

/// `Catch (Ret a) m = Ret a`.
fn catch_ret(model: &dyn Model, carriers: &[Ty], ctx: &mut LawCtx) {
    let Some(ex) = except_or_fail(model, ctx) else { return };
    let (g, m) = (ctx.g, model.monad());
    for a in carriers {
        let ma = mty(&m, a);
        let (vs, xs) = (g.inhabitants(a), g.inhabitants(&ma));
        for ix in g.cases(&[vs.len(), xs.len()]) {
            let (v, x) = (&vs[ix[0]], &xs[ix[1]]);
            case!(ctx, |g| g
                .expect_eq(&ma, &ex.catch(&m.ret(v), x), &m.ret(v))
                .map_err(|e| e.input("a", g.render(a, v)).input("m", g.render(&ma, x))));
        }
    }
}

fn then(m: &MonadRef, x: &Value, y: &Value) -> Value {
    m.bind(x, &Func::constant(y.clone()))
}

/// `Put s >> Put s' = Put s'`.
fn put_put(model: &dyn Model, _: &[Ty], ctx: &mut LawCtx) {
    let Some(st) = state_or_fail(model, ctx) else { return };
    let (g, m, s) = (ctx.g, model.monad(), st.state_ty());
    let mu = mty(&m, &Ty::unit());
    let ss = g.inhabitants(&s);
    for ix in g.cases(&[ss.len(), ss.len()]) {
        let (s1, s2) = (&ss[ix[0]], &ss[ix[1]]);
        case!(ctx, |g| g
            .expect_eq(&mu, &then(&m, &st.put(s1), &st.put(s2)), &st.put(s2))
            .map_err(|e| e.input("s", g.render(&s, s1)).input("s'", g.render(&s, s2))));
    }
}

/// `Put s >> Get = Put s >> Ret s`.
fn put_get(model: &dyn Model, _: &[Ty], ctx: &mut LawCtx) {
    let Some(st) = state_or_fail(model, ctx) else { return };
    let (g, m, s) = (ctx.g, model.monad(), st.state_ty());
    let ms = mty(&m, &s);
    let ss = g.inhabitants(&s);
    for s1 in ss.iter() {
        case!(ctx, |g| g
            .expect_eq(&ms, &then(&m, &st.put(s1), &st.get()), &then(&m, &st.put(s1), &m.ret(s1)))
            .map_err(|e| e.input("s", g.render(&s, s1))));
    }
}

/// `Get >>= Put = Ret tt`.
fn get_put(model: &dyn Model, _: &[Ty], ctx: &mut LawCtx) {
    let Some(st) = state_or_fail(model, ctx) else { return };
    let m = model.monad();
    let mu = mty(&m, &Ty::unit());
    let put = {
        let st_put: Vec<(Value, Value)> = ctx.g.inhabitants(&st.state_ty()).iter().map(|s| (s.clone(), st.put(s))).collect();
        Func::new(move |s| st_put.iter().find(|(k, _)| k.structural_eq(s) == Some(true)).map(|(_, v)| v.clone()).expect("state in carrier"))
    };
    case!(ctx, |g| g.expect_eq(&mu, &m.bind(&st.get(), &put), &m.ret(&Value::Unit)));
}

/// `Get >>= λs. Get >>= λs'. Ret (s, s') = Get >>= λs. Ret (s, s)`.
fn get_get(model: &dyn Model, _: &[Ty], ctx: &mut LawCtx) {
    let Some(st) = state_or_fail(model, ctx) else { return };
    let (m, s) = (model.monad(), st.state_ty());
    let ty = mty(&m, &Ty::pair(&s, &s));
    let (m1, m2, get) = (m.clone(), m.clone(), st.get());
    let lhs = m.bind(
        &st.get(),
        &Func::new(move |s1| {
            let (s1, m3) = (s1.clone(), m1.clone());
            m1.bind(&get, &Func::new(move |s2| m3.ret(&Value::pair(s1.clone(), s2.clone()))))
        }),
    );
    let rhs = m.bind(&st.get(), &Func::new(move |s1| m2.ret(&Value::pair(s1.clone(), s1.clone()))));
    case!(ctx, |g| g.expect_eq(&ty, &lhs, &rhs));
}

fn run_ret(model: &dyn Model, carriers: &[Ty], ctx: &mut LawCtx) {
    let (Some(run), Some(st)) = (run_or_fail(model, ctx), state_or_fail(model, ctx)) else { return };
    let (g, m, n, s) = (ctx.g, model.monad(), run.base(), st.state_ty());
    let ss = g.inhabitants(&s);
    for a in carriers {
        let out = mty(&n, &Ty::pair(a, &s));
        let vs = g.inhabitants(a);
        for ix in g.cases(&[vs.len(), ss.len()]) {
            let (v, s0) = (&vs[ix[0]], &ss[ix[1]]);
            case!(ctx, |g| g
                .expect_eq(&out, &run.run_state_t(&m.ret(v), s0), &n.ret(&Value::pair(v.clone(), s0.clone())))
                .map_err(|e| e.input("a", g.render(a, v)).input("s", g.render(&s, s0))));
        }
    }
}

/// Quantifies over every `(m, f)`; each case compares the runs at every
/// initial state.
fn run_bind(model: &dyn Model, carriers: &[Ty], ctx: &mut LawCtx) {
    let (Some(run), Some(st)) = (run_or_fail(model, ctx), state_or_fail(model, ctx)) else { return };
    let (g, m, n, s) = (ctx.g, model.monad(), run.base(), st.state_ty());
    let ss = g.inhabitants(&s);
    for a in carriers {
        for b in carriers {
            let (ma, fty, out) = (mty(&m, a), Ty::fun(a, &mty(&m, b)), mty(&n, &Ty::pair(b, &s)));
            let (xs, fs) = (g.inhabitants(&ma), g.inhabitants(&fty));
            for ix in g.cases(&[xs.len(), fs.len()]) {
                let (x, f) = (&xs[ix[0]], &fs[ix[1]]);
                case!(ctx, |g| {
                    for s0 in ss.iter() {
                        let lhs = run.run_state_t(&m.bind(x, f.as_func()), s0);
                        let (f2, r) = (f.clone(), run.runner());
                        let rhs = n.bind(&run.run_state_t(x, s0), &Func::new(move |p| r(&f2.call(p.fst()), p.snd())));
                        g.expect_eq(&out, &lhs, &rhs).map_err(|e| {
                            e.input("A", a.to_string())
                                .input("B", b.to_string())
                                .input("m", g.render(&ma, x))
                                .input("f", g.render(&fty, f))
                                .input("s", g.render(&s, s0))
                        })?;
                    }
                    Ok(())
                });
            }
        }
    }

}

fn run_get(model: &dyn Model, _: &[Ty], ctx: &mut LawCtx) {
    let (Some(run), Some(st)) = (run_or_fail(model, ctx), state_or_fail(model, ctx)) else { return };
    let (g, n, s) = (ctx.g, run.base(), st.state_ty());
    let out = mty(&n, &Ty::pair(&s, &s));
    let ss = g.inhabitants(&s);
    for s0 in ss.iter() {
        case!(ctx, |g| g
            .expect_eq(&out, &run.run_state_t(&st.get(), s0), &n.ret(&Value::pair(s0.clone(), s0.clone())))
            .map_err(|e| e.input("s", g.render(&s, s0))));
    }
}

fn run_put(model: &dyn Model, _: &[Ty], ctx: &mut LawCtx) {
    let (Some(run), Some(st)) = (run_or_fail(model, ctx), state_or_fail(model, ctx)) else { return };
    let (g, n, s) = (ctx.g, run.base(), st.state_ty());
    let out = mty(&n, &Ty::pair(&Ty::unit(), &s));
    let ss = g.inhabitants(&s);
    for ix in g.cases(&[ss.len(), ss.len()]) {
        let (s1, s0) = (&ss[ix[0]], &ss[ix[1]]);
        case!(ctx, |g| g
            .expect_eq(&out, &run.run_state_t(&st.put(s1), s0), &n.ret(&Value::pair(Value::Unit, s1.clone())))
            .map_err(|e| e.input("s'", g.render(&s, s1)).input("s", g.render(&s, s0))));
    }
}

fn run_fail(model: &dyn Model, carriers: &[Ty], ctx: &mut LawCtx) {
    let (Some(run), Some(st), Some(ex)) = (run_or_fail(model, ctx), state_or_fail(model, ctx), except_or_fail(model, ctx))
    else {
        return;
    };
    let Some(nex) = run.base_except() else {
        ctx.case(|_| need(None::<()>, "Fail on the base monad"));
        return;
    };
    let (g, n, s) = (ctx.g, run.base(), st.state_ty());
    let ss = g.inhabitants(&s);
    for a in carriers {
        let out = mty(&n, &Ty::pair(a, &s));
        for s0 in ss.iter() {
            case!(ctx, |g| g
                .expect_eq(&out, &run.run_state_t(&ex.fail(), s0), &nex.fail())
                .map_err(|e| e.input("A", a.to_string()).input("s", g.render(&s, s0))));
        }
    }
}

fn run_catch(model: &dyn Model, carriers: &[Ty], ctx: &mut LawCtx) {
    let (Some(run), Some(st), Some(ex)) = (run_or_fail(model, ctx), state_or_fail(model, ctx), except_or_fail(model, ctx))
    else {
        return;
    };
    let Some(nex) = run.base_except() else {
        ctx.case(|_| need(None::<()>, "Catch on the base monad"));
        return;
    };
    let (g, m, n, s) = (ctx.g, model.monad(), run.base(), st.state_ty());
    let ss = g.inhabitants(&s);
    for a in carriers {
        let (ma, out) = (mty(&m, a), mty(&n, &Ty::pair(a, &s)));
        let xs = g.inhabitants(&ma);
        for ix in g.cases(&[xs.len(), xs.len(), ss.len()]) {
            let (m1, m2, s0) = (&xs[ix[0]], &xs[ix[1]], &ss[ix[2]]);
            case!(ctx, |g| {
                let lhs = run.run_state_t(&ex.catch(m1, m2), s0);
                let rhs = nex.catch(&run.run_state_t(m1, s0), &run.run_state_t(m2, s0));
                g.expect_eq(&out, &lhs, &rhs).map_err(|e| {
                    e.input("A", a.to_string())
                        .input("m1", g.render(&ma, m1))
                        .input("m2", g.render(&ma, m2))
                        .input("s", g.render(&s, s0))
                })
            });
        }
    }
}

/// The four `RunStateT` equations of stateRunMonad followed by the two of
/// exceptStateRunMonad.
pub fn runstatet_equations() -> Vec<Equation> {
    interfaces()
        .into_iter()
        .filter(|d| d.name == "stateRunMonad" || d.name == "exceptStateRunMonad")
        .flat_map(|d| d.equations)
        .collect()
}

/// `Fail`/`Catch` on `Z + A`.
pub struct BaseExcept {
    z0: Value,
}

impl ExceptOps for BaseExcept {
    fn fail(&self) -> Value {
        Value::inl(self.z0.clone())
    }
    fn catch(&self, n1: &Value, n2: &Value) -> Value {
        match n1 {
            Value::Inl(_) => n2.clone(),
            other => other.clone(),
        }
    }
    fn expressible(&self, n: &Value) -> bool {
        match n {
            Value::Inl(z) => z.structural_eq(&self.z0) == Some(true),
            _ => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Repr {
    /// `S -> Z + A × S`: a failure forgets the state.
    Backtracking,
    /// `S -> (Z + A) × S`: a failure keeps the state it reached.
    NonBacktracking,
}

/// `stateT S` over the exception monad with `Z`.
pub struct ExceptStateRunModel {
    pub s: Ty,
    pub z: Ty,
    n: MonadRef,
    m: MonadRef,
    repr: Repr,
    stateless_put: bool,
    base_except: BaseExcept,
}

impl ExceptStateRunModel {
    /// The model without checking its equations. `NonBacktrackingCatch`
    /// swaps in a representation whose `Catch` keeps the failing branch's
    /// state; `StatelessPut` makes `Put` ignore its argument.
    pub fn new(s: &Ty, z: &Ty, mutant: Option<Mutant>) -> ExceptStateRunModel {
        let z0 = z.values().into_iter().next().expect("Z is inhabited");
        let n: MonadRef = Rc::new(Except { z: z.clone(), label: "exceptZ".into() });
        let repr = if mutant == Some(Mutant::NonBacktrackingCatch) { Repr::NonBacktracking } else { Repr::Backtracking };
        let m: MonadRef = match repr {
            Repr::Backtracking => Rc::new(StateTMonad { s: s.clone(), m: n.clone() }),
            Repr::NonBacktracking => {
                Rc::new(ExceptTMonad { z: z.clone(), m: Rc::new(State { s: s.clone() }), swapped: false })
            }
        };
        ExceptStateRunModel {
            s: s.clone(),
            z: z.clone(),
            n,
            m,
            repr,
            stateless_put: mutant == Some(Mutant::StatelessPut),
            base_except: BaseExcept { z0 },
        }
    }
}

impl Model for ExceptStateRunModel {
    fn name(&self) -> String {
        self.m.name()
    }
    fn monad(&self) -> MonadRef {
        self.m.clone()
    }
    fn except(&self) -> Option<&dyn ExceptOps> {
        Some(self)
    }
    fn state(&self) -> Option<&dyn StateOps> {
        Some(self)
    }
    fn run(&self) -> Option<&dyn RunOps> {
        Some(self)
    }
}

impl ExceptOps for ExceptStateRunModel {
    fn fail(&self) -> Value {
        let e = self.base_except.fail();
        match self.repr {
            Repr::Backtracking => Value::fun(move |_| e.clone()),
            Repr::NonBacktracking => Value::fun(move |s| Value::pair(e.clone(), s.clone())),
        }
    }
    fn catch(&self, m1: &Value, m2: &Value) -> Value {
        let (m1, m2) = (m1.clone(), m2.clone());
        match self.repr {
            Repr::Backtracking => Value::fun(move |s| match m1.call(s) {
                Value::Inl(_) => m2.call(s),
                r => r,
            }),
            Repr::NonBacktracking => Value::fun(move |s| {
                let r = m1.call(s);
                match r.fst() {
                    Value::Inl(_) => m2.call(r.snd()),
                    _ => r,
                }
            }),
        }
    }
    fn expressible(&self, m: &Value) -> bool {
        let run = self.runner();
        self.s.values().iter().all(|s| self.base_except.expressible(&run(m, s)))
    }
}

impl StateOps for ExceptStateRunModel {
    fn state_ty(&self) -> Ty {
        self.s.clone()
    }
    fn get(&self) -> Value {
        match self.repr {
            Repr::Backtracking => Value::fun(|s| Value::inr(Value::pair(s.clone(), s.clone()))),
            Repr::NonBacktracking => Value::fun(|s| Value::pair(Value::inr(s.clone()), s.clone())),
        }
    }
    fn put(&self, s1: &Value) -> Value {
        let (s1, stateless, repr) = (s1.clone(), self.stateless_put, self.repr);
        Value::fun(move |s| {
            let next = if stateless { s.clone() } else { s1.clone() };
            match repr {
                Repr::Backtracking => Value::inr(Value::pair(Value::Unit, next)),
                Repr::NonBacktracking => Value::pair(Value::inr(Value::Unit), next),
            }
        })
    }
}

impl RunOps for ExceptStateRunModel {
    fn base(&self) -> MonadRef {
        self.n.clone()
    }
    fn base_except(&self) -> Option<&dyn ExceptOps> {
        Some(&self.base_except)
    }
    fn runner(&self) -> Runner {
        match self.repr {
            Repr::Backtracking => Rc::new(|m, s| m.call(s)),
            Repr::NonBacktracking => Rc::new(|m, s| {
                let r = m.call(s);
                match r.fst() {
                    Value::Inr(a) => Value::inr(Value::pair((**a).clone(), r.snd().clone())),
                    z => z.clone(),
                }
            }),
        }
    }
}

/// `stateT S` over identity: a stateRunMonad without exceptions.
pub struct StateRunModel {
    pub s: Ty,
    m: MonadRef,
}

impl StateRunModel {
    pub fn new(s: &Ty) -> StateRunModel {
        let id: MonadRef = Rc::new(crate::models::monads::Identity);
        StateRunModel { s: s.clone(), m: Rc::new(StateTMonad { s: s.clone(), m: id }) }
    }
}

impl Model for StateRunModel {
    fn name(&self) -> String {
        self.m.name()
    }
    fn monad(&self) -> MonadRef {
        self.m.clone()
    }
    fn state(&self) -> Option<&dyn StateOps> {
        Some(self)
    }
    fn run(&self) -> Option<&dyn RunOps> {
        Some(self)
    }
}

impl StateOps for StateRunModel {
    fn state_ty(&self) -> Ty {
        self.s.clone()
    }
    fn get(&self) -> Value {
        Value::fun(|s| Value::pair(s.clone(), s.clone()))
    }
    fn put(&self, s1: &Value) -> Value {
        let s1 = s1.clone();
        Value::fun(move |_| Value::pair(Value::Unit, s1.clone()))
    }
}

impl RunOps for StateRunModel {
    fn base(&self) -> MonadRef {
        Rc::new(crate::models::monads::Identity)
    }
    fn base_except(&self) -> Option<&dyn ExceptOps> {
        None
    }
    fn runner(&self) -> Runner {
        Rc::new(|m, s| m.call(s))
    }
}

/// The model, refused unless the six `RunStateT` equations hold on
/// `carriers`.
pub fn build_except_state_run_model(
    s: &Ty,
    z: &Ty,
    mutant: Option<Mutant>,
    g: &Gen,
    carriers: &[Ty],
) -> Result<ExceptStateRunModel, ConstructionError> {
    let model = ExceptStateRunModel::new(s, z, mutant);
    for e in runstatet_equations() {
        let mut ctx = LawCtx::new(g, None);
        (e.check)(&model, carriers, &mut ctx);
        if let Some(w) = ctx.into_parts().1 {
            return Err(ConstructionError { what: model.name(), law: format!("runstatet/{}", e.id), witness: w });
        }
    }
    Ok(model)
}

/// `RunStateT m s >>= λx. Ret x.1`.
pub fn eval_state_t(run: &dyn RunOps, m: &Value, s: &Value) -> Value {
    let n = run.base();
    let n2 = n.clone();
    n.bind(&run.run_state_t(m, s), &Func::new(move |x| n2.ret(x.fst())))
}

/// Running `Catch (Put s1 >> Fail) Get` at `s0` observes `s0`, for every
/// `s0 ≠ s1`.
pub fn backtracking_law(model: &dyn Model, ctx: &mut LawCtx) {
    let (Some(run), Some(st), Some(ex)) = (run_or_fail(model, ctx), state_or_fail(model, ctx), except_or_fail(model, ctx))
    else {
        return;
    };
    let (g, m, n, s) = (ctx.g, model.monad(), run.base(), st.state_ty());
    let out = mty(&n, &Ty::pair(&s, &s));
    let ss = g.inhabitants(&s);
    for ix in g.cases(&[ss.len(), ss.len()]) {
        let (s0, s1) = (&ss[ix[0]], &ss[ix[1]]);
        if s0.structural_eq(s1) == Some(true) {
            continue;
        }
        case!(ctx, |g| {
            let prog = ex.catch(&then(&m, &st.put(s1), &ex.fail()), &st.get());
            g.expect_eq(&out, &run.run_state_t(&prog, s0), &n.ret(&Value::pair(s0.clone(), s0.clone())))
                .map_err(|e| e.input("s0", g.render(&s, s0)).input("s1", g.render(&s, s1)))
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::monads::Params;

    fn setup(mutant: Option<Mutant>) -> (ExceptStateRunModel, Gen, Vec<Ty>) {
        let p = Params::standard();
        let g = Gen::new(&crate::Config::quick(), "hierarchy");
        let c = g.carriers(2);
        (ExceptStateRunModel::new(&p.s, &p.z, mutant), g, c)
    }

    #[test]
    fn equations_stay_within_their_closure() {
        assert!(ill_scoped(&interfaces()).is_empty());
        let defs = interfaces();
        let names: Vec<_> = closure(&defs, "exceptStateRunMonad").iter().map(|d| d.name).collect();
        assert_eq!(names, ["monad", "exceptMonad", "stateMonad", "stateRunMonad", "exceptStateRunMonad"]);
    }

    #[test]
    fn the_model_implements_the_whole_spine() {
        let (model, g, c) = setup(None);
        implements(&model, "exceptStateRunMonad", &g, &c).unwrap();
        implements(&StateRunModel::new(&model.s), "stateRunMonad", &g, &c).unwrap();
    }

    #[test]
    fn a_model_without_exceptions_does_not_implement_them() {
        let (model, g, c) = setup(None);
        let err = implements(&StateRunModel::new(&model.s), "exceptMonad", &g, &c).unwrap_err();
        assert_eq!(err.law, "exceptMonad/fail");
    }

    #[test]
    fn put_then_get_evaluates_to_the_new_state() {
        let (model, _, _) = setup(None);
        let m = model.monad();
        let s1 = Value::Atom(1);
        let prog = then(&m, &model.put(&s1), &model.get());
        assert_eq!(eval_state_t(&model, &prog, &Value::Atom(0)).structural_eq(&Value::inr(s1)), Some(true));
        assert_eq!(eval_state_t(&model, &model.fail(), &Value::Atom(0)).structural_eq(&model.base_except.fail()), Some(true));
    }

    #[test]
    fn backtracking_holds_and_its_mutant_is_caught() {
        for (mutant, holds) in [(None, true), (Some(Mutant::NonBacktrackingCatch), false)] {
            let (model, g, c) = setup(mutant);
            let mut ctx = LawCtx::new(&g, None);
            backtracking_law(&model, &mut ctx);
            assert_eq!(ctx.failure().is_none(), holds);
            let built = build_except_state_run_model(&model.s, &model.z, mutant, &g, &c);
            assert_eq!(built.is_ok(), holds);
            if let Err(e) = built {
                assert_eq!(e.law, "runstatet/catch");
            }
        }
    }

    #[test]
    fn stateless_put_breaks_the_put_equation() {
        let (model, g, c) = setup(Some(Mutant::StatelessPut));
        let err = build_except_state_run_model(&model.s, &model.z, Some(Mutant::StatelessPut), &g, &c).err().unwrap();
        assert_eq!(err.law, "runstatet/put");
    }
}
