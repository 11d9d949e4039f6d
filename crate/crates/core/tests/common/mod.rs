#![allow(dead_code)]

use gtlogic::formula::Formula;
use gtlogic::graph::{Element, Graph};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub fn atom_name() -> impl Strategy<Value = String> {
    prop_oneof![Just("p".to_string()), Just("q".to_string())]
}

pub fn formula(depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        4 => atom_name().prop_map(Formula::Atom),
        1 => Just(Formula::Top),
    ];
    leaf.prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::weak_neg),
            inner.clone().prop_map(Formula::class_neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::and(a, b)),
        ]
    })
    .boxed()
}

pub fn graph(depth: u32) -> BoxedStrategy<Graph> {
    let leaf = atom_name().prop_map(Element::Atom);
    let element = leaf.prop_recursive(depth, 32, 3, |inner| {
        let contents = prop::collection::vec(inner, 0..3).prop_map(Graph);
        prop_oneof![
            contents.clone().prop_map(Element::Ccut),
            contents.prop_map(Element::Bcut),
        ]
    });
    prop::collection::vec(element, 0..4).prop_map(Graph).boxed()
}

/// Deterministic samples from a strategy, for the fixed-size sweeps.
pub fn samples<S: Strategy>(strategy: &S, n: usize, seed: u8) -> Vec<S::Value> {
    let mut seed_bytes = [0u8; 32];
    seed_bytes[0] = seed;
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &seed_bytes);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).expect("strategy").current())
        .collect()
}

/// A reflexive model given explicitly: `rel[a][b]` and `val[w]` over atoms p, q.
#[derive(Debug, Clone)]
pub struct Explicit {
    pub rel: Vec<Vec<bool>>,
    pub val: Vec<(bool, bool)>,
}

/// Direct recursive evaluation of the valuation clauses.
pub fn oracle_eval(m: &Explicit, w: usize, f: &Formula) -> bool {
    match f {
        Formula::Atom(a) => match a.as_str() {
            "p" => m.val[w].0,
            "q" => m.val[w].1,
            _ => false,
        },
        Formula::Top => true,
        // true iff some successor falsifies the operand
        Formula::WeakNeg(x) => (0..m.rel.len()).any(|v| m.rel[w][v] && !oracle_eval(m, v, x)),
        Formula::ClassNeg(x) => !oracle_eval(m, w, x),
        Formula::Impl(a, b) => !oracle_eval(m, w, a) || oracle_eval(m, w, b),
        Formula::Conj(a, b) => oracle_eval(m, w, a) && oracle_eval(m, w, b),
    }
}

pub fn explicit_model(worlds: usize) -> impl Strategy<Value = Explicit> {
    let n = worlds;
    (
        prop::collection::vec(any::<bool>(), n * n),
        prop::collection::vec((any::<bool>(), any::<bool>()), n),
    )
        .prop_map(move |(bits, val)| {
            let rel = (0..n)
                .map(|a| (0..n).map(|b| a == b || bits[a * n + b]).collect())
                .collect();
            Explicit { rel, val }
        })
}

/// Canonical string of a graph up to reordering of juxtaposed elements.
pub fn oracle_canonical(g: &Graph) -> String {
    let mut parts: Vec<String> = g.0.iter().map(oracle_element).collect();
    parts.sort();
    parts.join(" ")
}

fn oracle_element(e: &Element) -> String {
    match e {
        Element::Atom(a) => a.clone(),
        Element::Ccut(g) => format!("({})", oracle_canonical(g)),
        Element::Bcut(g) => format!("{{{}}}", oracle_canonical(g)),
    }
}

/// Runs the command line front end in-process, returning exit code and parsed stdout.
pub fn cli(args: &[&str]) -> (i32, serde_json::Value) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gtlogic").chain(args.iter().copied());
    let status = gtlogic::cli::run(argv, &mut out, &mut err);
    let text = String::from_utf8(out).expect("utf-8 output");
    let value = serde_json::from_str(text.trim()).unwrap_or(serde_json::Value::Null);
    (status.code(), value)
}
