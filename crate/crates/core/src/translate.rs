//! Translations between formulas and graphs.
//!
//! `to_graph` sends an implication to a scroll whose consequent is the last
//! element of the outer cut; `to_formula` reads the last element of a cut the
//! same way, so the two agree on formulas in [`is_t1_canonical`] form.

use serde::Serialize;

use crate::formula::Formula;
use crate::graph::{ac_equal, Element, Graph};
use crate::kripke::{equivalent_in, FrameClass, KripkeError, ModelSpace, DEFAULT_MODEL_BUDGET};

pub fn to_graph(f: &Formula) -> Graph {
    let mut out = Vec::new();
    push_elements(f, &mut out);
    Graph(out)
}

fn push_elements(f: &Formula, out: &mut Vec<Element>) {
    match f {
        Formula::Atom(p) => out.push(Element::Atom(p.clone())),
        Formula::Top => {}
        Formula::WeakNeg(x) => out.push(Element::Bcut(to_graph(x))),
        Formula::ClassNeg(x) => out.push(Element::Ccut(to_graph(x))),
        Formula::Impl(a, b) => {
            let mut inner = Vec::new();
            push_elements(a, &mut inner);
            inner.push(Element::Ccut(to_graph(b)));
            out.push(Element::Ccut(Graph(inner)));
        }
        Formula::Conj(a, b) => {
            push_elements(a, out);
            push_elements(b, out);
        }
    }
}

pub fn to_formula(g: &Graph) -> Formula {
    fold(&g.0)
}

/// Left-nested conjunction; `T` for no elements.
fn fold(es: &[Element]) -> Formula {
    let mut it = es.iter().map(element_formula);
    match it.next() {
        None => Formula::Top,
        Some(first) => it.fold(first, Formula::and),
    }
}

fn element_formula(e: &Element) -> Formula {
    match e {
        Element::Atom(p) => Formula::Atom(p.clone()),
        Element::Bcut(g) => Formula::weak_neg(to_formula(g)),
        Element::Ccut(Graph(inner)) => match inner.as_slice() {
            [] => Formula::class_neg(Formula::Top),
            [only] => Formula::class_neg(element_formula(only)),
            [prefix @ .., Element::Ccut(consequent)] => {
                Formula::implies(fold(prefix), to_formula(consequent))
            }
            es => Formula::class_neg(fold(es)),
        },
    }
}

/// Formulas on which `to_formula(to_graph(f)) == f`: `T` is never an operand
/// of `->` or `&`, conjunctions nest to the left, and a classical negation of
/// a conjunction does not end in a conjunct that translates to a cut.
pub fn is_t1_canonical(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) | Formula::Top => true,
        Formula::WeakNeg(x) => is_t1_canonical(x),
        Formula::ClassNeg(x) => {
            let clash = matches!(
                x.as_ref(),
                Formula::Conj(_, r) if matches!(r.as_ref(), Formula::Impl(..) | Formula::ClassNeg(_))
            );
            !clash && is_t1_canonical(x)
        }
        Formula::Impl(a, b) => {
            **a != Formula::Top && **b != Formula::Top && is_t1_canonical(a) && is_t1_canonical(b)
        }
        Formula::Conj(a, b) => {
            **a != Formula::Top
                && **b != Formula::Top
                && !matches!(b.as_ref(), Formula::Conj(..))
                && is_t1_canonical(a)
                && is_t1_canonical(b)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Formula,
    Graph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub input: InputKind,
    /// The input after translating there and back, in printed form.
    pub round_trip: String,
    pub syntactic_identity: bool,
    pub ac_identity: bool,
    /// Equivalence on every reflexive model with at most this many worlds.
    pub semantic_equivalence: bool,
    pub max_worlds: usize,
}

pub const ROUND_TRIP_WORLDS: usize = 3;

fn bounded_equivalent(a: &Formula, b: &Formula) -> Result<bool, KripkeError> {
    let mut atoms = a.atoms();
    atoms.extend(b.atoms());
    let space = ModelSpace::new(
        &atoms,
        ROUND_TRIP_WORLDS,
        FrameClass::T,
        DEFAULT_MODEL_BUDGET,
    )?;
    Ok(equivalent_in(&space, a, b))
}

pub fn formula_roundtrip(f: &Formula) -> Result<RoundTripReport, KripkeError> {
    let g = to_graph(f);
    let back = to_formula(&g);
    Ok(RoundTripReport {
        input: InputKind::Formula,
        round_trip: back.to_string(),
        syntactic_identity: back == *f,
        ac_identity: ac_equal(&to_graph(&back), &g),
        semantic_equivalence: bounded_equivalent(f, &back)?,
        max_worlds: ROUND_TRIP_WORLDS,
    })
}

pub fn graph_roundtrip(g: &Graph) -> Result<RoundTripReport, KripkeError> {
    let f = to_formula(g);
    let back = to_graph(&f);
    Ok(RoundTripReport {
        input: InputKind::Graph,
        round_trip: back.to_string(),
        syntactic_identity: back == *g,
        ac_identity: ac_equal(&back, g),
        semantic_equivalence: bounded_equivalent(&f, &to_formula(&back))?,
        max_worlds: ROUND_TRIP_WORLDS,
    })
}
