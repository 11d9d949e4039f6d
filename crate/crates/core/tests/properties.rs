mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use gtlogic::formula::{parse_formula, print_formula, Formula};
use gtlogic::graph::{ac_equal, parse_graph, print_graph, region_context, Element, Graph};
use gtlogic::hilbert::{
    check_proof, deduction_transform, match_axiom, same_formula, AxiomSchema, Justification,
    ProofDocument, ProofLine, System,
};
use gtlogic::kripke::{
    equivalent_in, Frame, FrameClass, KripkeModel, ModelSpace, DEFAULT_MODEL_BUDGET,
};
use gtlogic::rewrite::{successors, verify_step, GraphSystem, RuleId};
use gtlogic::translate::{to_formula, to_graph};
use proptest::prelude::*;

fn space() -> &'static ModelSpace {
    static SPACE: OnceLock<ModelSpace> = OnceLock::new();
    SPACE.get_or_init(|| {
        let atoms: BTreeSet<String> = ["p", "q"].map(String::from).into();
        ModelSpace::new(&atoms, 3, FrameClass::T, DEFAULT_MODEL_BUDGET).unwrap()
    })
}

fn to_model(m: &common::Explicit) -> KripkeModel {
    let n = m.rel.len();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| m.rel[a][b])
        .collect();
    let mask = |pick: fn(&(bool, bool)) -> bool| {
        m.val
            .iter()
            .enumerate()
            .filter(|(_, v)| pick(v))
            .fold(0u64, |acc, (w, _)| acc | 1 << w)
    };
    let valuation = BTreeMap::from([
        ("p".to_string(), mask(|v| v.0)),
        ("q".to_string(), mask(|v| v.1)),
    ]);
    KripkeModel::from_parts(Frame::reflexive_with(n, &edges), 0, valuation)
}

fn regions(g: &Graph, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Graph)>) {
    out.push((path.clone(), g.clone()));
    for (i, e) in g.0.iter().enumerate() {
        if let Some(inner) = e.contents() {
            path.push(i);
            regions(inner, path, out);
            path.pop();
        }
    }
}

fn subformulas(f: &Formula) -> Vec<&Formula> {
    f.children()
}

fn small_payloads() -> Vec<Graph> {
    ["p", "q", "()", "{}"]
        .iter()
        .map(|s| parse_graph(s).unwrap())
        .collect()
}

proptest! {
    #[test]
    fn formula_print_parse_round_trip(f in common::formula(6)) {
        let text = print_formula(&f);
        prop_assert_eq!(parse_formula(&text).unwrap(), f);
    }

    #[test]
    fn sugar_parses_to_its_definition(x in common::formula(3), y in common::formula(3)) {
        let (px, py) = (print_formula(&x), print_formula(&y));
        let parse = |s: String| parse_formula(&s).unwrap();
        prop_assert_eq!(parse(format!("+({px})")), Formula::class_neg(Formula::weak_neg(x.clone())));
        prop_assert_eq!(parse(format!("<>({px})")), Formula::weak_neg(Formula::class_neg(x.clone())));
        prop_assert_eq!(
            parse(format!("({px}) | ({py})")),
            Formula::implies(Formula::class_neg(x.clone()), y.clone())
        );
        prop_assert_eq!(
            parse(format!("({px}) <-> ({py})")),
            Formula::and(Formula::implies(x.clone(), y.clone()), Formula::implies(y, x))
        );
    }

    #[test]
    fn defined_connectives_keep_meaning(f in common::formula(5)) {
        prop_assert!(equivalent_in(space(), &f, &f.expand_defined()));
    }

    #[test]
    fn evaluation_matches_oracle(f in common::formula(5), m in (1usize..=4).prop_flat_map(common::explicit_model)) {
        let model = to_model(&m);
        for w in 0..m.rel.len() {
            prop_assert_eq!(model.eval_at(w, &f).unwrap(), common::oracle_eval(&m, w, &f));
        }
    }

    #[test]
    fn complexity_decreases_into_subformulas(f in common::formula(6)) {
        for child in subformulas(&f) {
            prop_assert!(child.complexity() < f.complexity());
        }
    }

    #[test]
    fn graph_print_parse_round_trip(g in common::graph(4)) {
        prop_assert_eq!(parse_graph(&print_graph(&g)).unwrap(), g);
    }

    #[test]
    fn canonical_form_is_idempotent(g in common::graph(4)) {
        let c = g.canonical_form();
        prop_assert_eq!(c.canonical_form(), c);
    }

    #[test]
    fn ac_equality_is_canonical_equality(a in common::graph(3), b in common::graph(3)) {
        let same = common::oracle_canonical(&a) == common::oracle_canonical(&b);
        prop_assert_eq!(ac_equal(&a, &b), same);
        prop_assert_eq!(a.canonical_form() == b.canonical_form(), same);
        let mut shuffled = a.clone();
        shuffled.0.reverse();
        prop_assert!(ac_equal(&a, &shuffled));
    }

    #[test]
    fn parity_follows_path_length(g in common::graph(4)) {
        let mut all = Vec::new();
        regions(&g, &mut Vec::new(), &mut all);
        for (path, _) in all {
            let ctx = region_context(&g, &path).unwrap();
            prop_assert_eq!(ctx.depth(), path.len());
            prop_assert_eq!(ctx.is_even(), path.len() % 2 == 0);
        }
    }

    #[test]
    fn graph_complexity_decreases_into_cuts(g in common::graph(4)) {
        for e in &g.0 {
            if let Some(inner) = e.contents() {
                prop_assert!(inner.complexity() < e.complexity());
                prop_assert!(e.complexity() <= g.complexity());
            }
        }
    }

    #[test]
    fn dual_rules_undo_under_a_cut(g in common::graph(2)) {
        let payloads = small_payloads();
        for rule in RuleId::ALL {
            let Some(dual) = rule.dual() else { continue };
            for h in successors(&g, rule, &payloads).unwrap() {
                let outer_h = Graph(vec![Element::Ccut(h.clone())]);
                let outer_g = Graph(vec![Element::Ccut(g.clone())]);
                let verdict = verify_step(GraphSystem::Get, &outer_h, &outer_g, dual, None).unwrap();
                prop_assert!(verdict.is_accepted(), "{} {} => {} not undone by {}", rule, g, h, dual);
            }
        }
    }

    #[test]
    fn sampled_steps_preserve_truth(g in common::graph(2)) {
        let payloads = small_payloads();
        let sp = space();
        let before = sp.signature(&sp.compile(&to_formula(&g)));
        for rule in GraphSystem::Get.rules() {
            for h in successors(&g, rule, &payloads).unwrap() {
                prop_assert!(verify_step(GraphSystem::Get, &g, &h, rule, None).unwrap().is_accepted());
                let after = sp.compile(&to_formula(&h));
                prop_assert!(
                    sp.first_violation_against(&before, &after).is_none(),
                    "{} {} => {} loses truth", rule, g, h
                );
            }
        }
    }

    #[test]
    fn translations_are_inverse_up_to_ac(g in common::graph(4)) {
        prop_assert!(ac_equal(&to_graph(&to_formula(&g)), &g));
    }

    #[test]
    fn axiom_instances_match(
        i in 0usize..8,
        x in common::formula(2),
        y in common::formula(2),
        z in common::formula(2),
    ) {
        let schema = AxiomSchema::GT.into_iter().chain([AxiomSchema::Gt4]).nth(i).unwrap();
        let system = if schema == AxiomSchema::Gt4 { System::Gt4 } else { System::Gt };
        let a = schema.instantiate(&x, &y, &z);
        let m = match_axiom(&a, system);
        prop_assert!(m.is_some(), "{} not matched", a);
        let boxed = Formula::necessarily(a.clone());
        let mb = match_axiom(&boxed, system);
        prop_assert!(mb.is_some(), "{} not matched", boxed);
        prop_assert!(mb.unwrap().peel <= m.unwrap().peel + 1);
    }

    #[test]
    fn deduction_transform_discharges(moves in prop::collection::vec((0usize..4, 0usize..3, 0usize..3), 1..12), pick in 0usize..3) {
        let hyps: Vec<Formula> = ["p", "p -> q", "q -> r"].iter().map(|s| parse_formula(s).unwrap()).collect();
        let atoms = ["p", "q", "r"].map(Formula::atom);
        let mut lines: Vec<ProofLine> = Vec::new();
        for (kind, a, b) in moves {
            let line = match kind {
                0 => ProofLine { formula: hyps[a].clone(), by: Justification::Hypothesis },
                1 => ProofLine {
                    formula: AxiomSchema::Ax2.instantiate(&atoms[a], &atoms[b], &atoms[0]),
                    by: Justification::Axiom,
                },
                _ => {
                    // first modus ponens available, if any
                    let found = lines.iter().enumerate().find_map(|(i, maj)| match &maj.formula {
                        Formula::Impl(ante, cons) => lines
                            .iter()
                            .position(|l| l.formula == **ante)
                            .map(|j| ((**cons).clone(), i + 1, j + 1)),
                        _ => None,
                    });
                    match found {
                        Some((formula, major, minor)) if !lines.iter().any(|l| l.formula == formula) => {
                            ProofLine { formula, by: Justification::ModusPonens { major, minor } }
                        }
                        _ => ProofLine { formula: hyps[a].clone(), by: Justification::Hypothesis },
                    }
                }
            };
            lines.push(line);
        }
        let doc = ProofDocument { system: System::Gt, hypotheses: hyps.clone(), lines };
        prop_assert!(check_proof(&doc).accepted);
        let d = &hyps[pick];
        let out = deduction_transform(&doc, d).unwrap();
        let report = check_proof(&out);
        prop_assert!(report.accepted, "{:?}", report.failure);
        let want = Formula::implies(d.clone(), doc.conclusion().unwrap().clone());
        prop_assert!(same_formula(report.conclusion.as_ref().unwrap(), &want));
        prop_assert!(!out.hypotheses.iter().any(|h| same_formula(h, d)));
    }
}
