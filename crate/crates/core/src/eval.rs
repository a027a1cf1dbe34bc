//! Sound three-valued bounded evaluation of formulas over finite fragments
//! of a computable group.
//!
//! Verdicts are sound in both directions: Confirmed means the group models
//! the formula under the environment, Refuted means it does not. Quantifiers
//! range over the fragment (an existential can only be refuted on a closed
//! fragment), junctions are scanned up to the junction bound, and a handful
//! of junction families over abelian and free nilpotent groups are decided
//! exactly through integer linear algebra.

use crate::error::{Error, Result};
use crate::formula::junction::{Junction, JunctionBuilder};
use crate::formula::{Formula, VarId};
use crate::groups::{GroupElement, GroupSpec};
use crate::intlin::{self, IntMatrix};
use crate::words::Word;
use num::bigint::BigInt;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Confirmed,
    Refuted,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStep {
    Bind(VarId, GroupElement),
    Junction(u64),
    Decided(&'static str),
}

/// Assignment trace leading to a Confirmed or Refuted verdict.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Witness(pub Vec<TraceStep>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub fragment_size: usize,
    pub junction_bound: u64,
}

impl Verdict {
    /// Stable text rendering for golden tests and the CLI.
    pub fn render(&self, spec: &GroupSpec) -> String {
        let mut out = format!(
            "verdict {}\nbounds B={} J={}",
            match self.outcome {
                Outcome::Confirmed => "Confirmed",
                Outcome::Refuted => "Refuted",
                Outcome::Unknown => "Unknown",
            },
            self.fragment_size,
            self.junction_bound
        );
        if let Some(w) = &self.witness {
            for step in &w.0 {
                match step {
                    TraceStep::Bind(v, g) => {
                        let elem = spec
                            .render_element(g)
                            .unwrap_or_else(|_| "<foreign element>".into());
                        out.push_str(&format!("\ntrace bind x{v} = {elem}"));
                    }
                    TraceStep::Junction(i) => out.push_str(&format!("\ntrace junction {i}")),
                    TraceStep::Decided(name) => out.push_str(&format!("\ntrace decided {name}")),
                }
            }
        }
        out
    }
}

/// A finite initial segment of a group's fair enumeration.
#[derive(Clone, Debug)]
pub struct Fragment {
    pub spec: GroupSpec,
    pub elements: Vec<GroupElement>,
    pub closed: bool,
}

impl Fragment {
    pub fn new(spec: GroupSpec, size: usize) -> Result<Fragment> {
        let elements = spec.enumerate(size)?;
        let closed = spec.order().is_some_and(|o| o <= size as u64);
        Ok(Fragment {
            spec,
            elements,
            closed,
        })
    }
}

pub type Env = BTreeMap<VarId, GroupElement>;

struct EvalCtx<'a> {
    frag: &'a Fragment,
    j: u64,
    memo: RefCell<HashMap<(usize, Vec<GroupElement>), bool>>,
}

type Res = (Outcome, Option<Witness>);

fn confirmed(trace: Vec<TraceStep>) -> Res {
    (Outcome::Confirmed, Some(Witness(trace)))
}

fn refuted(trace: Vec<TraceStep>) -> Res {
    (Outcome::Refuted, Some(Witness(trace)))
}

fn unknown() -> Res {
    (Outcome::Unknown, None)
}

/// Evaluate a formula over a fragment with junction bound `j` under an
/// environment covering its free variables.
pub fn eval(f: &Formula, frag: &Fragment, j: u64, env: &Env) -> Result<Verdict> {
    for v in env.values() {
        frag.spec.check_element(v)?;
    }
    for v in f.free_vars() {
        if !env.contains_key(&v) {
            return Err(Error::UnboundVariable(v));
        }
    }
    let ctx = EvalCtx {
        frag,
        j,
        memo: RefCell::new(HashMap::new()),
    };
    let mut env = env.clone();
    let (outcome, witness) = eval_rec(f, &mut env, &ctx)?;
    Ok(Verdict {
        outcome,
        witness,
        fragment_size: frag.elements.len(),
        junction_bound: j,
    })
}

fn eval_word_env(spec: &GroupSpec, w: &Word, env: &Env) -> Result<GroupElement> {
    let mut acc = spec.identity();
    for &(l, e) in &w.0 {
        let g = env.get(&l).ok_or(Error::UnboundVariable(l))?;
        acc = spec.multiply(&acc, &spec.power(g, e)?)?;
    }
    Ok(acc)
}

fn eval_rec(f: &Formula, env: &mut Env, ctx: &EvalCtx) -> Result<Res> {
    let spec = &ctx.frag.spec;
    match f {
        Formula::AtomEq(w) => {
            let v = eval_word_env(spec, w, env)?;
            Ok(if v == spec.identity() {
                confirmed(vec![])
            } else {
                refuted(vec![])
            })
        }
        Formula::AtomNeq(w) => {
            let v = eval_word_env(spec, w, env)?;
            Ok(if v == spec.identity() {
                refuted(vec![])
            } else {
                confirmed(vec![])
            })
        }
        Formula::And(fs) => {
            let mut all_confirmed = true;
            for (i, part) in fs.iter().enumerate() {
                let (o, w) = eval_rec(part, env, ctx)?;
                match o {
                    Outcome::Refuted => {
                        let mut trace = vec![TraceStep::Junction(i as u64)];
                        trace.extend(w.unwrap_or_default().0);
                        return Ok(refuted(trace));
                    }
                    Outcome::Confirmed => {}
                    Outcome::Unknown => all_confirmed = false,
                }
            }
            Ok(if all_confirmed {
                confirmed(vec![])
            } else {
                unknown()
            })
        }
        Formula::Or(fs) => {
            let mut all_refuted = true;
            for (i, part) in fs.iter().enumerate() {
                let (o, w) = eval_rec(part, env, ctx)?;
                match o {
                    Outcome::Confirmed => {
                        let mut trace = vec![TraceStep::Junction(i as u64)];
                        trace.extend(w.unwrap_or_default().0);
                        return Ok(confirmed(trace));
                    }
                    Outcome::Refuted => {}
                    Outcome::Unknown => all_refuted = false,
                }
            }
            Ok(if all_refuted { refuted(vec![]) } else { unknown() })
        }
        Formula::BigAnd(jn) => {
            if let Some((truth, name)) = decide_junction(jn, env, ctx)? {
                return Ok(if truth {
                    confirmed(vec![TraceStep::Decided(name)])
                } else {
                    refuted(vec![TraceStep::Decided(name)])
                });
            }
            let bound = jn.scan_bound(ctx.j);
            let mut all_confirmed = true;
            for i in 0..bound {
                let part = jn.expand(i)?;
                let (o, w) = eval_rec(&part, env, ctx)?;
                match o {
                    Outcome::Refuted => {
                        let mut trace = vec![TraceStep::Junction(i)];
                        trace.extend(w.unwrap_or_default().0);
                        return Ok(refuted(trace));
                    }
                    Outcome::Confirmed => {}
                    Outcome::Unknown => all_confirmed = false,
                }
            }
            Ok(if all_confirmed && jn.exhausted_within(ctx.j) {
                confirmed(vec![])
            } else {
                unknown()
            })
        }
        Formula::BigOr(jn) => {
            if let Some((truth, name)) = decide_junction(jn, env, ctx)? {
                return Ok(if truth {
                    confirmed(vec![TraceStep::Decided(name)])
                } else {
                    refuted(vec![TraceStep::Decided(name)])
                });
            }
            let bound = jn.scan_bound(ctx.j);
            let mut all_refuted = true;
            for i in 0..bound {
                let part = jn.expand(i)?;
                let (o, w) = eval_rec(&part, env, ctx)?;
                match o {
                    Outcome::Confirmed => {
                        let mut trace = vec![TraceStep::Junction(i)];
                        trace.extend(w.unwrap_or_default().0);
                        return Ok(confirmed(trace));
                    }
                    Outcome::Refuted => {}
                    Outcome::Unknown => all_refuted = false,
                }
            }
            Ok(if all_refuted && jn.exhausted_within(ctx.j) {
                refuted(vec![])
            } else {
                unknown()
            })
        }
        Formula::Exists(vs, body) => {
            if let Some((truth, name)) = decide_exists(vs, body, env, ctx)? {
                return Ok(if truth {
                    confirmed(vec![TraceStep::Decided(name)])
                } else {
                    refuted(vec![TraceStep::Decided(name)])
                });
            }
            let confirmable = can_confirm(body, ctx);
            let refutable = ctx.frag.closed && can_refute(body, ctx);
            if !confirmable && !refutable {
                return Ok(unknown());
            }
            scan_exists(vs, body, env, ctx)
        }
        Formula::Forall(vs, body) => {
            if let Some((truth, name)) = decide_forall(vs, body, env, ctx)? {
                return Ok(if truth {
                    confirmed(vec![TraceStep::Decided(name)])
                } else {
                    refuted(vec![TraceStep::Decided(name)])
                });
            }
            let refutable = can_refute(body, ctx);
            let confirmable = ctx.frag.closed && can_confirm(body, ctx);
            if !confirmable && !refutable {
                return Ok(unknown());
            }
            scan_forall(vs, body, env, ctx)
        }
        Formula::Relativized { .. } => eval_rec(&f.desugared()?, env, ctx),
    }
}

fn scan_exists(vs: &[VarId], body: &Formula, env: &mut Env, ctx: &EvalCtx) -> Result<Res> {
    if vs.is_empty() {
        return eval_rec(body, env, ctx);
    }
    let v = vs[0];
    let mut all_refuted = true;
    for g in &ctx.frag.elements {
        let saved = env.insert(v, g.clone());
        let (o, w) = scan_exists(&vs[1..], body, env, ctx)?;
        match saved {
            Some(s) => {
                env.insert(v, s);
            }
            None => {
                env.remove(&v);
            }
        }
        match o {
            Outcome::Confirmed => {
                let mut trace = vec![TraceStep::Bind(v, g.clone())];
                trace.extend(w.unwrap_or_default().0);
                return Ok(confirmed(trace));
            }
            Outcome::Refuted => {}
            Outcome::Unknown => all_refuted = false,
        }
    }
    Ok(if all_refuted && ctx.frag.closed {
        refuted(vec![])
    } else {
        unknown()
    })
}

fn scan_forall(vs: &[VarId], body: &Formula, env: &mut Env, ctx: &EvalCtx) -> Result<Res> {
    if vs.is_empty() {
        return eval_rec(body, env, ctx);
    }
    let v = vs[0];
    let mut all_confirmed = true;
    for g in &ctx.frag.elements {
        let saved = env.insert(v, g.clone());
        let (o, w) = scan_forall(&vs[1..], body, env, ctx)?;
        match saved {
            Some(s) => {
                env.insert(v, s);
            }
            None => {
                env.remove(&v);
            }
        }
        match o {
            Outcome::Refuted => {
                let mut trace = vec![TraceStep::Bind(v, g.clone())];
                trace.extend(w.unwrap_or_default().0);
                return Ok(refuted(trace));
            }
            Outcome::Confirmed => {}
            Outcome::Unknown => all_confirmed = false,
        }
    }
    Ok(if all_confirmed && ctx.frag.closed {
        confirmed(vec![])
    } else {
        unknown()
    })
}

/// Can bounded evaluation possibly confirm this formula on this fragment?
/// Conservative in the "yes" direction; used only to skip doomed scans.
fn can_confirm(f: &Formula, ctx: &EvalCtx) -> bool {
    match f {
        Formula::AtomEq(_) | Formula::AtomNeq(_) => true,
        Formula::And(fs) => fs.iter().all(|f| can_confirm(f, ctx)),
        Formula::Or(fs) => fs.iter().any(|f| can_confirm(f, ctx)),
        Formula::BigAnd(j) => {
            j.exhausted_within(ctx.j) || junction_decider_available(j.builder(), &ctx.frag.spec)
        }
        Formula::BigOr(_) => true,
        Formula::Exists(vs, b) => {
            exists_decider_available(vs, b, &ctx.frag.spec) || can_confirm(b, ctx)
        }
        Formula::Forall(vs, b) => {
            forall_decider_available(vs, b, &ctx.frag.spec)
                || (ctx.frag.closed && can_confirm(b, ctx))
        }
        Formula::Relativized { .. } => match f.desugared() {
            Ok(d) => can_confirm(&d, ctx),
            Err(_) => true,
        },
    }
}

fn can_refute(f: &Formula, ctx: &EvalCtx) -> bool {
    match f {
        Formula::AtomEq(_) | Formula::AtomNeq(_) => true,
        Formula::And(fs) => fs.iter().any(|f| can_refute(f, ctx)),
        Formula::Or(fs) => fs.iter().all(|f| can_refute(f, ctx)),
        Formula::BigAnd(_) => true,
        Formula::BigOr(j) => {
            j.exhausted_within(ctx.j) || junction_decider_available(j.builder(), &ctx.frag.spec)
        }
        Formula::Exists(vs, b) => {
            exists_decider_available(vs, b, &ctx.frag.spec)
                || (ctx.frag.closed && can_refute(b, ctx))
        }
        Formula::Forall(vs, b) => {
            forall_decider_available(vs, b, &ctx.frag.spec) || can_refute(b, ctx)
        }
        Formula::Relativized { .. } => match f.desugared() {
            Ok(d) => can_refute(&d, ctx),
            Err(_) => true,
        },
    }
}

fn junction_decider_available(b: &JunctionBuilder, spec: &GroupSpec) -> bool {
    match b {
        JunctionBuilder::Negated(inner) => junction_decider_available(inner, spec),
        JunctionBuilder::TorsionFree { .. } => spec.infinite_order(&spec.identity()).is_some(),
        JunctionBuilder::MatricesDetNotUnit { xs, ys, guard } => match spec {
            GroupSpec::FgAbelian { rank, .. } => {
                guard.is_none() && xs.len() == *rank && (ys.is_empty() || !xs.is_empty())
            }
            GroupSpec::FreeNilpotent { rank, .. } => {
                guard.is_some() && ys.is_empty() && xs.len() <= *rank
            }
            _ => false,
        },
        JunctionBuilder::WordsReach { .. } => matches!(spec, GroupSpec::FgAbelian { .. }),
        JunctionBuilder::Relators {
            spec: target_spec, ..
        } => {
            matches!(spec, GroupSpec::FgAbelian { .. })
                && matches!(target_spec, GroupSpec::FgAbelian { .. })
        }
        _ => false,
    }
}

fn derived_words_target(vs: &[VarId], b: &Formula, negated: bool) -> Option<VarId> {
    // Exists(vs, BigOr(DerivedWords)) / Forall(vs, BigAnd(Negated(DerivedWords)))
    let jb = match (negated, b) {
        (false, Formula::BigOr(j)) => j.builder().clone(),
        (true, Formula::BigAnd(j)) => match j.builder() {
            JunctionBuilder::Negated(inner) => (**inner).clone(),
            _ => return None,
        },
        _ => return None,
    };
    match jb {
        JunctionBuilder::DerivedWords { target, tuple } => {
            let vset: std::collections::BTreeSet<VarId> = vs.iter().copied().collect();
            let tset: std::collections::BTreeSet<VarId> = tuple.iter().copied().collect();
            if vset == tset && !vset.contains(&target) {
                Some(target)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Quotient-equality shape: Exists([g], And([AtomEq(w g^-1), guard(g)])).
/// Returns the word without the trailing g occurrence.
fn quotient_eq_shape(vs: &[VarId], b: &Formula) -> Option<Word> {
    if vs.len() != 1 {
        return None;
    }
    let g = vs[0];
    let parts = match b {
        Formula::And(parts) if parts.len() == 2 => parts,
        _ => return None,
    };
    let w = match &parts[0] {
        Formula::AtomEq(w) => w,
        _ => return None,
    };
    let (last, init) = w.0.split_last()?;
    if *last != (g, -1) || init.iter().any(|&(l, _)| l == g) {
        return None;
    }
    match &parts[1] {
        Formula::Exists(svs, inner) => {
            derived_words_target(svs, inner, false).filter(|t| *t == g)?;
            Some(Word(init.to_vec()))
        }
        _ => None,
    }
}

/// Dual shape: Forall([g], Or([AtomNeq(w g^-1), not-guard(g)])).
fn quotient_neq_shape(vs: &[VarId], b: &Formula) -> Option<Word> {
    if vs.len() != 1 {
        return None;
    }
    let g = vs[0];
    let parts = match b {
        Formula::Or(parts) if parts.len() == 2 => parts,
        _ => return None,
    };
    let w = match &parts[0] {
        Formula::AtomNeq(w) => w,
        _ => return None,
    };
    let (last, init) = w.0.split_last()?;
    if *last != (g, -1) || init.iter().any(|&(l, _)| l == g) {
        return None;
    }
    match &parts[1] {
        Formula::Forall(svs, inner) => {
            derived_words_target(svs, inner, true).filter(|t| *t == g)?;
            Some(Word(init.to_vec()))
        }
        _ => None,
    }
}

fn exists_decider_available(vs: &[VarId], b: &Formula, spec: &GroupSpec) -> bool {
    if spec.derived_member(&spec.identity()).is_none() {
        return false;
    }
    derived_words_target(vs, b, false).is_some() || quotient_eq_shape(vs, b).is_some()
}

fn forall_decider_available(vs: &[VarId], b: &Formula, spec: &GroupSpec) -> bool {
    if spec.derived_member(&spec.identity()).is_none() {
        return false;
    }
    quotient_neq_shape(vs, b).is_some()
}

fn decide_exists(
    vs: &[VarId],
    b: &Formula,
    env: &Env,
    ctx: &EvalCtx,
) -> Result<Option<(bool, &'static str)>> {
    let spec = &ctx.frag.spec;
    if spec.derived_member(&spec.identity()).is_none() {
        return Ok(None);
    }
    if let Some(target) = derived_words_target(vs, b, false) {
        let g = env
            .get(&target)
            .ok_or(Error::UnboundVariable(target))?;
        let m = spec.derived_member(g).expect("checked above");
        return Ok(Some((m, "derived-membership")));
    }
    if let Some(w) = quotient_eq_shape(vs, b) {
        let v = eval_word_env(spec, &w, env)?;
        let m = spec.derived_member(&v).expect("checked above");
        return Ok(Some((m, "quotient-equality")));
    }
    Ok(None)
}

fn decide_forall(
    vs: &[VarId],
    b: &Formula,
    env: &Env,
    ctx: &EvalCtx,
) -> Result<Option<(bool, &'static str)>> {
    let spec = &ctx.frag.spec;
    if spec.derived_member(&spec.identity()).is_none() {
        return Ok(None);
    }
    if let Some(w) = quotient_neq_shape(vs, b) {
        let v = eval_word_env(spec, &w, env)?;
        let m = spec.derived_member(&v).expect("checked above");
        return Ok(Some((!m, "quotient-inequality")));
    }
    Ok(None)
}

fn decide_junction(
    jn: &Junction,
    env: &Env,
    ctx: &EvalCtx,
) -> Result<Option<(bool, &'static str)>> {
    let spec = &ctx.frag.spec;
    if !junction_decider_available(jn.builder(), spec) {
        return Ok(None);
    }
    let key_vals: Vec<GroupElement> = jn
        .free_vars()
        .iter()
        .map(|v| env.get(v).cloned().ok_or(Error::UnboundVariable(*v)))
        .collect::<Result<_>>()?;
    let key = (std::sync::Arc::as_ptr(junction_arc(jn)) as usize, key_vals);
    if let Some(&truth) = ctx.memo.borrow().get(&key) {
        return Ok(Some((truth, decider_name(jn.builder()))));
    }
    let truth = decide_builder(jn.builder(), env, spec)?;
    match truth {
        Some(t) => {
            ctx.memo.borrow_mut().insert(key, t);
            Ok(Some((t, decider_name(jn.builder()))))
        }
        None => Ok(None),
    }
}

// access to the Arc inside the junction for memo keys
fn junction_arc(j: &Junction) -> &std::sync::Arc<impl std::fmt::Debug> {
    j.arc()
}

fn decider_name(b: &JunctionBuilder) -> &'static str {
    match b {
        JunctionBuilder::Negated(inner) => decider_name(inner),
        JunctionBuilder::TorsionFree { .. } => "torsion-free",
        JunctionBuilder::MatricesDetNotUnit { .. } => "matrices-extend-to-basis",
        JunctionBuilder::WordsReach { .. } => "submodule-membership",
        JunctionBuilder::Relators { .. } => "relation-kernel",
        _ => "decided",
    }
}

fn decide_builder(b: &JunctionBuilder, env: &Env, spec: &GroupSpec) -> Result<Option<bool>> {
    match b {
        JunctionBuilder::Negated(inner) => {
            Ok(decide_builder(inner, env, spec)?.map(|t| !t))
        }
        JunctionBuilder::TorsionFree { var, .. } => {
            let g = env.get(var).ok_or(Error::UnboundVariable(*var))?;
            Ok(spec.infinite_order(g))
        }
        JunctionBuilder::MatricesDetNotUnit { xs, ys, .. } => {
            decide_matrices(xs, ys, env, spec)
        }
        JunctionBuilder::WordsReach { tuple, target } => {
            decide_reach(tuple, *target, env, spec)
        }
        JunctionBuilder::Relators {
            spec: target_spec,
            vars,
        } => decide_relators(target_spec, vars, env, spec),
        _ => Ok(None),
    }
}

/// Exact decision of the determinant conjunction: the free-part rows of the
/// xs extend to a basis. Applicable for abelian specs whose ys values are
/// torsion and cover the xs' torsion parts, and for hatted nilpotent specs
/// with no torsion part.
fn decide_matrices(
    xs: &[VarId],
    ys: &[VarId],
    env: &Env,
    spec: &GroupSpec,
) -> Result<Option<bool>> {
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(xs.len());
    for v in xs {
        let g = env.get(v).ok_or(Error::UnboundVariable(*v))?;
        match spec.ab_free_coords(g) {
            Some(c) => rows.push(c),
            None => return Ok(None),
        }
    }
    if let GroupSpec::FgAbelian { orders, .. } = spec {
        if !orders.is_empty() {
            // the decision matches the formula's semantics only when the
            // listed ys are torsion elements covering the xs' torsion parts
            let mut torsion_values = Vec::new();
            for v in ys {
                let g = env.get(v).ok_or(Error::UnboundVariable(*v))?;
                match g {
                    GroupElement::FgAbelian { free, tor } if free.iter().all(|&x| x == 0) => {
                        torsion_values.push(tor.clone());
                    }
                    _ => return Ok(None),
                }
            }
            for v in xs {
                let g = env.get(v).unwrap();
                if let GroupElement::FgAbelian { tor, .. } = g {
                    if tor.iter().any(|&t| t != 0) && !torsion_values.contains(tor) {
                        return Ok(None);
                    }
                }
            }
        }
    }
    let n = rows.len();
    let rank = rows.first().map(|r| r.len()).unwrap_or(0);
    if n == 0 || n > rank {
        return Ok(None);
    }
    let flat: Vec<i64> = rows.into_iter().flatten().collect();
    let m = IntMatrix::from_i64(n, rank, &flat)?;
    Ok(Some(intlin::extends_to_basis(&m)?))
}

/// target in the subgroup generated by the tuple, for f.g. abelian groups.
fn decide_reach(
    tuple: &[VarId],
    target: VarId,
    env: &Env,
    spec: &GroupSpec,
) -> Result<Option<bool>> {
    let (rank, orders) = match spec {
        GroupSpec::FgAbelian { rank, orders } => (*rank, orders),
        _ => return Ok(None),
    };
    let mut gens = Vec::new();
    for v in tuple {
        gens.push(env.get(v).ok_or(Error::UnboundVariable(*v))?.clone());
    }
    let y = env.get(&target).ok_or(Error::UnboundVariable(target))?;
    let (sys, rhs) = abelian_system(rank, orders, &gens, Some(y))?;
    Ok(Some(intlin::solve(&sys, &rhs)?.is_some()))
}

/// The iso-type conjunction for an abelian target over an abelian ambient
/// group: the relation kernel of the tuple equals the target's.
fn decide_relators(
    target_spec: &GroupSpec,
    vars: &[VarId],
    env: &Env,
    spec: &GroupSpec,
) -> Result<Option<bool>> {
    let (rank, orders) = match spec {
        GroupSpec::FgAbelian { rank, orders } => (*rank, orders),
        _ => return Ok(None),
    };
    let target_gens = target_spec.designated_generators()?;
    if target_gens.len() != vars.len() {
        return Err(Error::ArityMismatch {
            expected: target_gens.len(),
            got: vars.len(),
        });
    }
    let mut tuple = Vec::new();
    for v in vars {
        tuple.push(env.get(v).ok_or(Error::UnboundVariable(*v))?.clone());
    }
    // kernel of the tuple map in the ambient group
    let ambient_kernel = abelian_kernel(rank, orders, &tuple)?;
    // every ambient relation must hold of the target's designated tuple
    for e in &ambient_kernel {
        let w = Word(
            e.iter()
                .enumerate()
                .filter(|(_, c)| **c != BigInt::from(0))
                .map(|(i, c)| {
                    Ok::<(u32, i64), Error>((
                        i as u32,
                        i64::try_from(c).map_err(|_| Error::Overflow("relation kernel"))?,
                    ))
                })
                .collect::<Result<_>>()?,
        );
        if !target_spec.in_relators(&w)? {
            return Ok(Some(false));
        }
    }
    // every target relation must hold of the tuple in the ambient group
    let (t_rank, t_orders) = match target_spec {
        GroupSpec::FgAbelian { rank, orders } => (*rank, orders),
        _ => return Ok(None),
    };
    let target_kernel = abelian_kernel(t_rank, t_orders, &target_gens)?;
    for e in &target_kernel {
        let mut acc = spec.identity();
        for (i, c) in e.iter().enumerate() {
            let c = i64::try_from(c).map_err(|_| Error::Overflow("relation kernel"))?;
            if c != 0 {
                acc = spec.multiply(&acc, &spec.power(&tuple[i], c)?)?;
            }
        }
        if acc != spec.identity() {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

/// Linear system whose solvability over Z decides Sum e_i gens_i = target
/// in Z^rank + T; auxiliary variables absorb the torsion moduli.
fn abelian_system(
    rank: usize,
    orders: &[u64],
    gens: &[GroupElement],
    target: Option<&GroupElement>,
) -> Result<(IntMatrix, Vec<BigInt>)> {
    let k = gens.len();
    let t = orders.len();
    let rows = rank + t;
    let cols = k + t;
    let mut m = IntMatrix::zero(rows.max(1), cols.max(1));
    for (j, g) in gens.iter().enumerate() {
        let (free, tor) = match g {
            GroupElement::FgAbelian { free, tor } => (free, tor),
            _ => return Err(Error::Internal("abelian system on foreign element".into())),
        };
        for i in 0..rank {
            m.set(i, j, BigInt::from(free[i]));
        }
        for i in 0..t {
            m.set(rank + i, j, BigInt::from(tor[i] as i64));
        }
    }
    for i in 0..t {
        m.set(rank + i, k + i, BigInt::from(orders[i]));
    }
    let rhs = match target {
        None => vec![BigInt::from(0); rows.max(1)],
        Some(GroupElement::FgAbelian { free, tor }) => {
            let mut v: Vec<BigInt> = free.iter().map(|&x| BigInt::from(x)).collect();
            v.extend(tor.iter().map(|&x| BigInt::from(x as i64)));
            if v.is_empty() {
                v.push(BigInt::from(0));
            }
            v
        }
        Some(_) => return Err(Error::Internal("abelian system on foreign element".into())),
    };
    Ok((m, rhs))
}

/// Basis of the relation lattice of a tuple in Z^rank + T, projected to the
/// tuple coordinates.
fn abelian_kernel(rank: usize, orders: &[u64], gens: &[GroupElement]) -> Result<Vec<Vec<BigInt>>> {
    let (sys, _) = abelian_system(rank, orders, gens, None)?;
    let k = gens.len();
    let full = intlin::kernel_lattice(&sys);
    Ok(full.into_iter().map(|v| v[..k].to_vec()).collect())
}

/// Report from an increasing-bounds evaluation run.
#[derive(Clone, Debug)]
pub struct MonotoneReport {
    pub verdicts: Vec<Verdict>,
    pub first_resolution: Option<(usize, u64)>,
}

/// Evaluate under a sequence of increasing bounds and assert that Confirmed
/// and Refuted are absorbing.
pub fn eval_monotone_check(
    f: &Formula,
    spec: &GroupSpec,
    bounds: &[(usize, u64)],
    env: &Env,
) -> Result<MonotoneReport> {
    let mut verdicts = Vec::new();
    let mut first = None;
    let mut resolved: Option<Outcome> = None;
    for &(b, j) in bounds {
        let frag = Fragment::new(spec.clone(), b)?;
        let v = eval(f, &frag, j, env)?;
        match (resolved, v.outcome) {
            (Some(prev), cur) if cur != prev => {
                return Err(Error::Internal(format!(
                    "verdict flipped from {prev:?} to {cur:?} at bounds B={b} J={j}"
                )));
            }
            (None, Outcome::Confirmed | Outcome::Refuted) => {
                resolved = Some(v.outcome);
                first = Some((b, j));
            }
            _ => {}
        }
        verdicts.push(v);
    }
    Ok(MonotoneReport {
        verdicts,
        first_resolution: first,
    })
}
