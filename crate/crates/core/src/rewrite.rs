//! Transformation rules of GET and GET4, step and derivation checking, the
//! scroll construction, and the bounded soundness harness.
//!
//! A step records only the rule and the resulting graph. The checker aligns
//! `before` and `after` region by region: at each region the two element
//! multisets are compared up to AC-equality, and either the difference is a
//! single application of the rule there, or exactly one cut differs on each
//! side and the search continues inside it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{parse_graph, Context, CutKind, Element, Graph, GraphParseError};
use crate::kripke::{
    run_pool, FrameClass, KripkeError, ModelDocument, ModelSpace, DEFAULT_MODEL_BUDGET,
};
use crate::translate::to_formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphSystem {
    Get,
    Get4,
}

impl GraphSystem {
    /// Frames on which the system's rules preserve truth.
    pub fn frame_class(self) -> FrameClass {
        match self {
            GraphSystem::Get => FrameClass::T,
            GraphSystem::Get4 => FrameClass::S4,
        }
    }

    pub fn rules(self) -> Vec<RuleId> {
        RuleId::ALL
            .into_iter()
            .filter(|r| r.in_system(self))
            .collect()
    }

    pub fn from_name(name: &str) -> Option<GraphSystem> {
        match name {
            "get" => Some(GraphSystem::Get),
            "get4" => Some(GraphSystem::Get4),
            _ => None,
        }
    }
}

impl fmt::Display for GraphSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphSystem::Get => "get",
            GraphSystem::Get4 => "get4",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    R1,
    R2EraseEven,
    R2WriteOdd,
    R3Iterate,
    R3Deiterate,
    R4BreakEven,
    R4CompleteOdd,
    R6RemoveDoubleEven,
    R6AddDoubleOdd,
    SidIterate,
    SidDeiterate,
}

impl RuleId {
    pub const ALL: [RuleId; 11] = [
        RuleId::R1,
        RuleId::R2EraseEven,
        RuleId::R2WriteOdd,
        RuleId::R3Iterate,
        RuleId::R3Deiterate,
        RuleId::R4BreakEven,
        RuleId::R4CompleteOdd,
        RuleId::R6RemoveDoubleEven,
        RuleId::R6AddDoubleOdd,
        RuleId::SidIterate,
        RuleId::SidDeiterate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::R1 => "R1_write_strong_double_cut",
            RuleId::R2EraseEven => "R2_erase_even",
            RuleId::R2WriteOdd => "R2_write_odd",
            RuleId::R3Iterate => "R3_iterate",
            RuleId::R3Deiterate => "R3_deiterate",
            RuleId::R4BreakEven => "R4_break_even",
            RuleId::R4CompleteOdd => "R4_complete_odd",
            RuleId::R6RemoveDoubleEven => "R6_remove_double_even",
            RuleId::R6AddDoubleOdd => "R6_add_double_odd",
            RuleId::SidIterate => "SID_iterate",
            RuleId::SidDeiterate => "SID_deiterate",
        }
    }

    pub fn in_system(self, system: GraphSystem) -> bool {
        system == GraphSystem::Get4 || !matches!(self, RuleId::SidIterate | RuleId::SidDeiterate)
    }

    /// The rule undoing this one under an extra cut, for the parity-restricted rules.
    pub fn dual(self) -> Option<RuleId> {
        match self {
            RuleId::R2EraseEven => Some(RuleId::R2WriteOdd),
            RuleId::R2WriteOdd => Some(RuleId::R2EraseEven),
            RuleId::R4BreakEven => Some(RuleId::R4CompleteOdd),
            RuleId::R4CompleteOdd => Some(RuleId::R4BreakEven),
            RuleId::R6RemoveDoubleEven => Some(RuleId::R6AddDoubleOdd),
            RuleId::R6AddDoubleOdd => Some(RuleId::R6RemoveDoubleEven),
            _ => None,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = RewriteError;

    fn from_str(s: &str) -> Result<RuleId, RewriteError> {
        if s == "R1" {
            return Ok(RuleId::R1);
        }
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| RewriteError::UnknownRule(s.to_string()))
    }
}

impl Serialize for RuleId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for RuleId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<RuleId, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
    #[error("hint {0:?} does not address a region or element of the graph")]
    HintOutOfRange(Vec<usize>),
    #[error("graph {text:?}: {source}")]
    Graph {
        text: String,
        source: GraphParseError,
    },
    #[error("derivation document: {0}")]
    Document(String),
    #[error("inner derivation is rejected at step {0}")]
    InnerRejected(usize),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error("region has {0} elements; sub-multiset enumeration is capped at 16")]
    RegionTooWide(usize),
}

/// Where a step applied: the region path, read in the `before` graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Application {
    pub region: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRejection {
    RuleNotInSystem,
    NoApplication,
}

impl fmt::Display for StepRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepRejection::RuleNotInSystem => "rule is not part of the system",
            StepRejection::NoApplication => "no legal application of the rule yields the result",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepVerdict {
    Accepted(Application),
    Rejected(StepRejection),
}

impl StepVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, StepVerdict::Accepted(_))
    }
}

// ---------------------------------------------------------------------------
// Step checking

fn canon_all(g: &Graph) -> Vec<Element> {
    g.0.iter().map(Element::canonical_form).collect()
}

/// Indices of `b` and `a` left over after pairing AC-equal elements.
fn diff(b: &[Element], a: &[Element]) -> (Vec<usize>, Vec<usize>) {
    let mut used = vec![false; a.len()];
    let mut b_only = Vec::new();
    for (i, x) in b.iter().enumerate() {
        match (0..a.len()).find(|&j| !used[j] && a[j] == *x) {
            Some(j) => used[j] = true,
            None => b_only.push(i),
        }
    }
    let a_only = (0..a.len()).filter(|&j| !used[j]).collect();
    (b_only, a_only)
}

fn sorted(mut es: Vec<Element>) -> Vec<Element> {
    es.sort();
    es
}

fn may_iterate(source: &Context, e: &Element) -> bool {
    source.ncc() || e.is_strong()
}

struct Level<'a> {
    b: &'a Graph,
    a: &'a Graph,
    ctx: Context,
    path: Vec<usize>,
    /// enclosing region in `before` and the index of the cut entered from it
    parent: Option<(&'a Graph, usize)>,
}

impl Level<'_> {
    fn parent_has(&self, e: &Element) -> bool {
        match self.parent {
            Some((pg, cut)) => {
                pg.0.iter()
                    .enumerate()
                    .any(|(k, x)| k != cut && x.canonical_form() == *e)
            }
            None => false,
        }
    }

    fn parent_ctx(&self) -> Context {
        Context {
            kinds: self.ctx.kinds[..self.ctx.depth().saturating_sub(1)].to_vec(),
        }
    }

    fn entered_through(&self, kind: CutKind) -> bool {
        self.parent.is_some() && self.ctx.kinds.last() == Some(&kind)
    }
}

fn local_match(
    rule: RuleId,
    lv: &Level,
    cb: &[Element],
    ca: &[Element],
    b_only: &[usize],
    a_only: &[usize],
) -> bool {
    let pick = |es: &[Element], idx: &[usize]| -> Vec<Element> {
        sorted(idx.iter().map(|&i| es[i].clone()).collect())
    };
    let even = lv.ctx.is_even();
    match rule {
        RuleId::R1 => {
            b_only.is_empty()
                && a_only.len() == 1
                && ca[a_only[0]] == Element::strong(Graph::empty())
        }
        RuleId::R2EraseEven => even && a_only.is_empty() && !b_only.is_empty(),
        RuleId::R2WriteOdd => !even && b_only.is_empty() && !a_only.is_empty(),
        RuleId::R3Iterate | RuleId::R3Deiterate => {
            let (gone, added, keep) = if rule == RuleId::R3Iterate {
                (b_only, a_only, cb)
            } else {
                (a_only, b_only, ca)
            };
            if !gone.is_empty() || added.len() != 1 {
                return false;
            }
            let e = if rule == RuleId::R3Iterate {
                &ca[added[0]]
            } else {
                &cb[added[0]]
            };
            let same_region = keep.contains(e) && may_iterate(&lv.ctx, e);
            let across = lv.entered_through(CutKind::Continuous)
                && lv.parent_has(e)
                && may_iterate(&lv.parent_ctx(), e);
            same_region || across
        }
        RuleId::SidIterate | RuleId::SidDeiterate => {
            let (gone, added, es) = if rule == RuleId::SidIterate {
                (b_only, a_only, ca)
            } else {
                (a_only, b_only, cb)
            };
            if !gone.is_empty() || added.len() != 1 {
                return false;
            }
            let e = &es[added[0]];
            e.is_strong() && lv.entered_through(CutKind::Broken) && lv.parent_has(e)
        }
        RuleId::R4BreakEven | RuleId::R4CompleteOdd => {
            if b_only.len() != 1 || a_only.len() != 1 || even != (rule == RuleId::R4BreakEven) {
                return false;
            }
            match (&cb[b_only[0]], &ca[a_only[0]], rule) {
                (Element::Ccut(x), Element::Bcut(y), RuleId::R4BreakEven) => x == y,
                (Element::Bcut(x), Element::Ccut(y), RuleId::R4CompleteOdd) => x == y,
                _ => false,
            }
        }
        RuleId::R6RemoveDoubleEven | RuleId::R6AddDoubleOdd => {
            let (wrapped, spliced, es, rest) = if rule == RuleId::R6RemoveDoubleEven {
                (b_only, a_only, cb, ca)
            } else {
                (a_only, b_only, ca, cb)
            };
            if wrapped.len() != 1 || even != (rule == RuleId::R6RemoveDoubleEven) {
                return false;
            }
            match &es[wrapped[0]] {
                Element::Ccut(Graph(outer)) => match outer.as_slice() {
                    [Element::Ccut(inner)] => sorted(inner.0.clone()) == pick(rest, spliced),
                    _ => false,
                },
                _ => false,
            }
        }
    }
}

fn search(rule: RuleId, lv: Level, out: &mut Vec<Application>) {
    let (cb, ca) = (canon_all(lv.b), canon_all(lv.a));
    let (b_only, a_only) = diff(&cb, &ca);
    if b_only.is_empty() && a_only.is_empty() {
        return;
    }
    if local_match(rule, &lv, &cb, &ca, &b_only, &a_only) {
        out.push(Application {
            region: lv.path.clone(),
        });
    }
    if let ([x], [y]) = (b_only.as_slice(), a_only.as_slice()) {
        let (bx, ay) = (&lv.b.0[*x], &lv.a.0[*y]);
        if let (Some(kind), Some(inner_a)) = (bx.cut_kind(), ay.contents()) {
            if bx.cut_kind() != ay.cut_kind() {
                return;
            }
            // equal copies of the differing cut are all candidate locations
            for (i, e) in lv.b.0.iter().enumerate() {
                if cb[i] != cb[*x] {
                    continue;
                }
                let mut path = lv.path.clone();
                path.push(i);
                search(
                    rule,
                    Level {
                        b: e.contents().expect("cut"),
                        a: inner_a,
                        ctx: lv.ctx.push(kind),
                        path,
                        parent: Some((lv.b, i)),
                    },
                    out,
                );
            }
        }
    }
}

/// A hint is a region path, optionally followed by an element position in
/// that region (at most its length, so insertion points count).
fn check_hint(before: &Graph, hint: &[usize]) -> Result<(), RewriteError> {
    if before.region(hint).is_ok() {
        return Ok(());
    }
    if let Some((&last, region)) = hint.split_last() {
        if let Ok(g) = before.region(region) {
            if last <= g.0.len() {
                return Ok(());
            }
        }
    }
    Err(RewriteError::HintOutOfRange(hint.to_vec()))
}

fn hint_allows(hint: Option<&[usize]>, app: &Application) -> bool {
    match hint {
        None => true,
        Some(h) => app.region == h || h.split_last().map(|(_, r)| r) == Some(app.region.as_slice()),
    }
}

pub fn verify_step(
    system: GraphSystem,
    before: &Graph,
    after: &Graph,
    rule: RuleId,
    hint: Option<&[usize]>,
) -> Result<StepVerdict, RewriteError> {
    if let Some(h) = hint {
        check_hint(before, h)?;
    }
    if !rule.in_system(system) {
        return Ok(StepVerdict::Rejected(StepRejection::RuleNotInSystem));
    }
    let mut apps = Vec::new();
    search(
        rule,
        Level {
            b: before,
            a: after,
            ctx: Context::sheet(),
            path: Vec::new(),
            parent: None,
        },
        &mut apps,
    );
    Ok(apps
        .into_iter()
        .find(|app| hint_allows(hint, app))
        .map(StepVerdict::Accepted)
        .unwrap_or(StepVerdict::Rejected(StepRejection::NoApplication)))
}

// ---------------------------------------------------------------------------
// Derivations

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub rule: RuleId,
    pub result: Graph,
    pub hint: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationDocument {
    pub system: GraphSystem,
    pub start: Graph,
    pub steps: Vec<DerivationStep>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    rule: RuleId,
    result: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hint: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDerivation {
    system: GraphSystem,
    #[serde(default)]
    start: String,
    steps: Vec<RawStep>,
}

fn parse_field(text: &str) -> Result<Graph, RewriteError> {
    parse_graph(text).map_err(|source| RewriteError::Graph {
        text: text.to_string(),
        source,
    })
}

impl DerivationDocument {
    pub fn from_json(text: &str) -> Result<DerivationDocument, RewriteError> {
        let raw: RawDerivation = serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            match msg.strip_prefix("unknown rule ") {
                Some(rest) => RewriteError::UnknownRule(
                    rest.split(" at line")
                        .next()
                        .unwrap_or(rest)
                        .trim_matches('"')
                        .to_string(),
                ),
                None => RewriteError::Document(msg),
            }
        })?;
        let steps = raw
            .steps
            .into_iter()
            .map(|s| {
                Ok(DerivationStep {
                    rule: s.rule,
                    result: parse_field(&s.result)?,
                    hint: s.hint,
                })
            })
            .collect::<Result<_, RewriteError>>()?;
        Ok(DerivationDocument {
            system: raw.system,
            start: parse_field(&raw.start)?,
            steps,
        })
    }

    pub fn to_json(&self) -> String {
        let raw = RawDerivation {
            system: self.system,
            start: self.start.to_string(),
            steps: self
                .steps
                .iter()
                .map(|s| RawStep {
                    rule: s.rule,
                    result: s.result.to_string(),
                    hint: s.hint.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("derivations serialize")
    }

    pub fn final_graph(&self) -> &Graph {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.start)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepFailure {
    /// 1-indexed step number.
    pub step: usize,
    pub rule: RuleId,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationReport {
    pub accepted: bool,
    pub final_graph: Graph,
    /// Accepted and started from the blank sheet.
    pub theorem: bool,
    pub failure: Option<StepFailure>,
}

pub fn check_derivation(doc: &DerivationDocument) -> DerivationReport {
    let mut current = &doc.start;
    for (i, step) in doc.steps.iter().enumerate() {
        let verdict = verify_step(
            doc.system,
            current,
            &step.result,
            step.rule,
            step.hint.as_deref(),
        );
        let reason = match verdict {
            Ok(StepVerdict::Accepted(_)) => None,
            Ok(StepVerdict::Rejected(r)) => Some(r.to_string()),
            Err(e) => Some(e.to_string()),
        };
        if let Some(reason) = reason {
            return DerivationReport {
                accepted: false,
                final_graph: current.clone(),
                theorem: false,
                failure: Some(StepFailure {
                    step: i + 1,
                    rule: step.rule,
                    reason,
                }),
            };
        }
        current = &step.result;
    }
    DerivationReport {
        accepted: true,
        final_graph: current.clone(),
        theorem: doc.start.is_empty(),
        failure: None,
    }
}

/// From a derivation of `Y` from `X`, a derivation of `(X (Y))` from λ.
pub fn scroll_theorem(inner: &DerivationDocument) -> Result<DerivationDocument, RewriteError> {
    let report = check_derivation(inner);
    if let Some(f) = report.failure {
        return Err(RewriteError::InnerRejected(f.step));
    }
    let x = &inner.start.0;
    let scroll = |y: &Graph| {
        let mut outer = x.clone();
        outer.push(Element::Ccut(y.clone()));
        Graph(vec![Element::Ccut(Graph(outer))])
    };
    let step = |rule, result, hint: Option<Vec<usize>>| DerivationStep { rule, result, hint };
    let mut steps = vec![
        step(
            RuleId::R1,
            Graph(vec![Element::strong(Graph::empty())]),
            Some(vec![]),
        ),
        step(
            RuleId::R4CompleteOdd,
            Graph(vec![Element::Ccut(Graph(vec![Element::Ccut(
                Graph::empty(),
            )]))]),
            Some(vec![0, 0]),
        ),
    ];
    if !x.is_empty() {
        steps.push(step(
            RuleId::R2WriteOdd,
            scroll(&Graph::empty()),
            Some(vec![0]),
        ));
        for k in 1..=x.len() {
            steps.push(step(
                RuleId::R3Iterate,
                scroll(&Graph(x[..k].to_vec())),
                Some(vec![0, x.len()]),
            ));
        }
    }
    for s in &inner.steps {
        let mut hint = vec![0, x.len()];
        hint.extend(s.hint.iter().flatten());
        steps.push(step(
            s.rule,
            scroll(&s.result),
            s.hint.as_ref().map(|_| hint),
        ));
    }
    Ok(DerivationDocument {
        system: inner.system,
        start: Graph::empty(),
        steps,
    })
}

// ---------------------------------------------------------------------------
// Successor generation

fn regions(g: &Graph) -> Vec<(Vec<usize>, Context)> {
    fn walk(g: &Graph, path: &mut Vec<usize>, ctx: &Context, out: &mut Vec<(Vec<usize>, Context)>) {
        out.push((path.clone(), ctx.clone()));
        for (i, e) in g.0.iter().enumerate() {
            if let (Some(kind), Some(inner)) = (e.cut_kind(), e.contents()) {
                path.push(i);
                walk(inner, path, &ctx.push(kind), out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(g, &mut Vec::new(), &Context::sheet(), &mut out);
    out
}

fn subsets(n: usize, nonempty: bool) -> Result<impl Iterator<Item = Vec<usize>>, RewriteError> {
    if n > 16 {
        return Err(RewriteError::RegionTooWide(n));
    }
    let start = if nonempty { 1u32 } else { 0 };
    Ok((start..(1u32 << n)).map(move |m| (0..n).filter(|i| m & (1 << i) != 0).collect()))
}

/// Every graph one application of `rule` away from `g`, in canonical form.
/// Insertions by `R2_write_odd` draw from `payloads`.
pub fn successors(
    g: &Graph,
    rule: RuleId,
    payloads: &[Graph],
) -> Result<BTreeSet<Graph>, RewriteError> {
    let mut out = BTreeSet::new();
    let mut emit = |edit: &dyn Fn(&mut Graph), path: &[usize]| {
        let mut h = g.clone();
        edit(h.region_mut(path).expect("enumerated region"));
        out.insert(h.canonical_form());
    };
    for (path, ctx) in regions(g) {
        let region = g.region(&path).expect("enumerated region");
        let es = &region.0;
        let parent = path
            .split_last()
            .map(|(&cut, up)| (cut, g.region(up).expect("enumerated region")));
        let parent_ctx = Context {
            kinds: ctx.kinds[..ctx.depth().saturating_sub(1)].to_vec(),
        };
        let canon: Vec<Element> = es.iter().map(Element::canonical_form).collect();
        let from_parent = |e: &Element, kind: CutKind| match parent {
            Some((cut, pg)) if ctx.kinds.last() == Some(&kind) => {
                pg.0.iter()
                    .enumerate()
                    .any(|(k, x)| k != cut && x.canonical_form() == *e)
            }
            _ => false,
        };
        match rule {
            RuleId::R1 => emit(&|r| r.0.push(Element::strong(Graph::empty())), &path),
            RuleId::R2EraseEven if ctx.is_even() => {
                for sub in subsets(es.len(), true)? {
                    emit(&|r| remove_indices(r, &sub), &path);
                }
            }
            RuleId::R2WriteOdd if ctx.is_odd() => {
                for p in payloads.iter().filter(|p| !p.is_empty()) {
                    emit(&|r| r.0.extend(p.0.iter().cloned()), &path);
                }
            }
            RuleId::R3Iterate => {
                for (i, e) in es.iter().enumerate() {
                    if !may_iterate(&ctx, e) {
                        continue;
                    }
                    emit(&|r| r.0.push(e.clone()), &path);
                    for (j, c) in es.iter().enumerate() {
                        if j != i && matches!(c, Element::Ccut(_)) {
                            emit(&|r| r.0[j].contents_mut().unwrap().0.push(e.clone()), &path);
                        }
                    }
                }
            }
            RuleId::R3Deiterate => {
                for (i, e) in canon.iter().enumerate() {
                    let twin = canon.iter().enumerate().any(|(j, x)| j != i && x == e);
                    if (twin && may_iterate(&ctx, e))
                        || (from_parent(e, CutKind::Continuous) && may_iterate(&parent_ctx, e))
                    {
                        emit(&|r| remove_indices(r, &[i]), &path);
                    }
                }
            }
            RuleId::R4BreakEven | RuleId::R4CompleteOdd => {
                let (from, even) = if rule == RuleId::R4BreakEven {
                    (CutKind::Continuous, true)
                } else {
                    (CutKind::Broken, false)
                };
                if ctx.is_even() != even {
                    continue;
                }
                for (i, e) in es.iter().enumerate() {
                    if e.cut_kind() == Some(from) {
                        let to = if even {
                            CutKind::Broken
                        } else {
                            CutKind::Continuous
                        };
                        let swapped = Element::cut(to, e.contents().unwrap().clone());
                        emit(&|r| r.0[i] = swapped.clone(), &path);
                    }
                }
            }
            RuleId::R6RemoveDoubleEven if ctx.is_even() => {
                for (i, e) in es.iter().enumerate() {
                    if let Element::Ccut(Graph(outer)) = e {
                        if let [Element::Ccut(inner)] = outer.as_slice() {
                            emit(
                                &|r| {
                                    r.0.remove(i);
                                    r.0.extend(inner.0.iter().cloned());
                                },
                                &path,
                            );
                        }
                    }
                }
            }
            RuleId::R6AddDoubleOdd if ctx.is_odd() => {
                for sub in subsets(es.len(), false)? {
                    emit(
                        &|r| {
                            let inner: Vec<Element> = sub.iter().map(|&i| r.0[i].clone()).collect();
                            remove_indices(r, &sub);
                            r.0.push(Element::Ccut(Graph(vec![Element::Ccut(Graph(inner))])));
                        },
                        &path,
                    );
                }
            }
            RuleId::SidIterate => {
                for (i, e) in es.iter().enumerate().filter(|(_, e)| e.is_strong()) {
                    for (j, c) in es.iter().enumerate() {
                        if j != i && matches!(c, Element::Bcut(_)) {
                            emit(&|r| r.0[j].contents_mut().unwrap().0.push(e.clone()), &path);
                        }
                    }
                }
            }
            RuleId::SidDeiterate => {
                for (i, e) in canon.iter().enumerate() {
                    if e.is_strong() && from_parent(e, CutKind::Broken) {
                        emit(&|r| remove_indices(r, &[i]), &path);
                    }
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

fn remove_indices(r: &mut Graph, idx: &[usize]) {
    let mut k = 0;
    r.0.retain(|_| {
        let keep = !idx.contains(&k);
        k += 1;
        keep
    });
}

// ---------------------------------------------------------------------------
// Soundness harness

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub max_size: usize,
    pub atoms: Vec<String>,
    pub max_worlds: usize,
    pub system: GraphSystem,
    pub frame: FrameClass,
    pub rules: Vec<RuleId>,
    /// Node bound for graphs written by `R2_write_odd`.
    pub payload_size: usize,
    pub jobs: usize,
    pub max_models: u64,
}

impl SuiteOptions {
    pub fn new(system: GraphSystem, max_size: usize, max_worlds: usize) -> SuiteOptions {
        SuiteOptions {
            max_size,
            atoms: vec!["p".into(), "q".into()],
            max_worlds,
            system,
            frame: system.frame_class(),
            rules: system.rules(),
            payload_size: max_size.min(3),
            jobs: 1,
            max_models: DEFAULT_MODEL_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: RuleId,
    pub before: String,
    pub after: String,
    pub model: ModelDocument,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub system: GraphSystem,
    pub frame: String,
    pub max_size: usize,
    pub max_worlds: usize,
    pub graphs: usize,
    pub models: usize,
    pub steps: usize,
    pub steps_by_rule: BTreeMap<String, usize>,
    pub violation_count: usize,
    /// The first violations in enumeration order.
    pub violations: Vec<Violation>,
    /// Generated steps the step checker did not accept; should be empty.
    pub checker_disagreements: Vec<(String, String, String)>,
}

pub const REPORTED_VIOLATIONS: usize = 16;

struct GraphOutcome {
    steps: Vec<(RuleId, usize)>,
    violations: Vec<Violation>,
    violation_count: usize,
    disagreements: Vec<(String, String, String)>,
}

pub fn rule_soundness_suite(opts: &SuiteOptions) -> Result<SuiteReport, RewriteError> {
    let atom_refs: Vec<&str> = opts.atoms.iter().map(String::as_str).collect();
    let graphs = crate::graph::enumerate_graphs(&atom_refs, opts.max_size);
    let payloads: Vec<Graph> = crate::graph::enumerate_graphs(&atom_refs, opts.payload_size)
        .into_iter()
        .filter(|g| !g.is_empty())
        .collect();
    let atom_set: BTreeSet<String> = opts.atoms.iter().cloned().collect();
    let space = ModelSpace::new(&atom_set, opts.max_worlds, opts.frame, opts.max_models)?;

    let check_one = |g: &Graph| -> Result<GraphOutcome, RewriteError> {
        let premise = space.signature(&space.compile(&to_formula(g)));
        let satisfiable = premise.iter().any(|&m| m != 0);
        let mut outcome = GraphOutcome {
            steps: Vec::new(),
            violations: Vec::new(),
            violation_count: 0,
            disagreements: Vec::new(),
        };
        for &rule in &opts.rules {
            let next = successors(g, rule, &payloads)?;
            outcome.steps.push((rule, next.len()));
            for h in next {
                if !verify_step(opts.system, g, &h, rule, None)?.is_accepted() {
                    outcome
                        .disagreements
                        .push((rule.to_string(), g.to_string(), h.to_string()));
                }
                if !satisfiable {
                    continue;
                }
                let conclusion = space.compile(&to_formula(&h));
                if let Some((entry, world)) = space.first_violation_against(&premise, &conclusion) {
                    outcome.violation_count += 1;
                    if outcome.violations.len() < REPORTED_VIOLATIONS {
                        outcome.violations.push(Violation {
                            rule,
                            before: g.to_string(),
                            after: h.to_string(),
                            model: space.model(entry, world).to_document(),
                        });
                    }
                }
            }
        }
        Ok(outcome)
    };

    let outcomes: Vec<Result<GraphOutcome, RewriteError>> = if opts.jobs > 1 {
        run_pool(opts.jobs, || graphs.par_iter().map(&check_one).collect())
    } else {
        graphs.iter().map(check_one).collect()
    };

    let mut report = SuiteReport {
        system: opts.system,
        frame: opts.frame.name(),
        max_size: opts.max_size,
        max_worlds: opts.max_worlds,
        graphs: graphs.len(),
        models: space.len(),
        steps: 0,
        steps_by_rule: BTreeMap::new(),
        violation_count: 0,
        violations: Vec::new(),
        checker_disagreements: Vec::new(),
    };
    for o in outcomes {
        let o = o?;
        for (rule, n) in o.steps {
            report.steps += n;
            *report.steps_by_rule.entry(rule.to_string()).or_default() += n;
        }
        report.violation_count += o.violation_count;
        for v in o.violations {
            if report.violations.len() < REPORTED_VIOLATIONS {
                report.violations.push(v);
            }
        }
        report.checker_disagreements.extend(o.disagreements);
    }
    Ok(report)
}
