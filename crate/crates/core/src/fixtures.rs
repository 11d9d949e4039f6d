//! The bundled fixture corpus and its runner.

use serde::Serialize;

use crate::formula::{parse_formula, Formula};
use crate::graph::ac_equal;
use crate::hilbert::{
    check_proof, deduction_transform, same_formula, theorem_corpus, ProofDocument,
};
use crate::kripke::{bounded_valid, FrameClass, KripkeModel, SearchOptions, Verdict};
use crate::rewrite::{check_derivation, DerivationDocument, GraphSystem};
use crate::translate::{to_formula, to_graph};

/// Worlds used when a fixture's semantic claim is checked.
pub const FIXTURE_WORLDS: usize = 3;

pub struct ProofFixture {
    pub name: &'static str,
    pub text: &'static str,
    pub accepted: bool,
}

pub struct DeductionFixture {
    pub name: &'static str,
    pub text: &'static str,
    /// Hypotheses discharged in order.
    pub discharge: &'static [&'static str],
    pub conclusion: &'static str,
}

pub struct DerivationFixture {
    pub name: &'static str,
    pub text: &'static str,
    pub accepted: bool,
    /// Formula whose graph the derivation ends in.
    pub image_of: Option<&'static str>,
}

pub struct ModelFixture {
    pub name: &'static str,
    pub text: &'static str,
    pub formula: &'static str,
    /// Truth of `formula` at the actual world.
    pub holds: bool,
}

macro_rules! fixture {
    ($path:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/", $path))
    };
}

pub const PROOFS: &[ProofFixture] = &[
    ProofFixture {
        name: "identity",
        text: fixture!("proofs/identity.json"),
        accepted: true,
    },
    ProofFixture {
        name: "necessitated_axiom",
        text: fixture!("proofs/necessitated_axiom.json"),
        accepted: true,
    },
    ProofFixture {
        name: "excluded_middle_weak",
        text: fixture!("proofs/excluded_middle_weak.json"),
        accepted: true,
    },
    ProofFixture {
        name: "gt4_axiom",
        text: fixture!("proofs/gt4_axiom.json"),
        accepted: true,
    },
    ProofFixture {
        name: "reject_gt4_axiom_in_gt",
        text: fixture!("proofs/reject_gt4_axiom_in_gt.json"),
        accepted: false,
    },
    ProofFixture {
        name: "reject_mp_mismatch",
        text: fixture!("proofs/reject_mp_mismatch.json"),
        accepted: false,
    },
    ProofFixture {
        name: "reject_not_an_axiom",
        text: fixture!("proofs/reject_not_an_axiom.json"),
        accepted: false,
    },
    ProofFixture {
        name: "reject_forward_reference",
        text: fixture!("proofs/reject_forward_reference.json"),
        accepted: false,
    },
];

pub const DEDUCTIONS: &[DeductionFixture] = &[
    DeductionFixture {
        name: "weakening",
        text: fixture!("proofs/deduction/weakening.json"),
        discharge: &["p"],
        conclusion: "p -> q -> p",
    },
    DeductionFixture {
        name: "double_negation_intro",
        text: fixture!("proofs/deduction/double_negation_intro.json"),
        discharge: &["~p", "p"],
        conclusion: "p -> ~~p",
    },
    DeductionFixture {
        name: "chain",
        text: fixture!("proofs/deduction/chain.json"),
        discharge: &["p"],
        conclusion: "p -> r",
    },
    DeductionFixture {
        name: "strong_explosion",
        text: fixture!("proofs/deduction/strong_explosion.json"),
        discharge: &["-p", "+p"],
        conclusion: "+p -> -p -> q",
    },
];

pub const DERIVATIONS: &[DerivationFixture] = &[
    DerivationFixture {
        name: "strong_lambda",
        text: fixture!("derivations/strong_lambda.json"),
        accepted: true,
        image_of: Some("+T"),
    },
    DerivationFixture {
        name: "scroll_identity",
        text: fixture!("derivations/scroll_identity.json"),
        accepted: true,
        image_of: Some("p -> p"),
    },
    DerivationFixture {
        name: "falsum_explodes",
        text: fixture!("derivations/falsum_explodes.json"),
        accepted: true,
        image_of: None,
    },
    DerivationFixture {
        name: "ax1",
        text: fixture!("derivations/ax1.json"),
        accepted: true,
        image_of: Some("T"),
    },
    DerivationFixture {
        name: "ax2",
        text: fixture!("derivations/ax2.json"),
        accepted: true,
        image_of: Some("p -> q -> p"),
    },
    DerivationFixture {
        name: "ax3",
        text: fixture!("derivations/ax3.json"),
        accepted: true,
        image_of: Some("(p -> q -> r) -> (p -> q) -> p -> r"),
    },
    DerivationFixture {
        name: "ax4",
        text: fixture!("derivations/ax4.json"),
        accepted: true,
        image_of: Some("((p -> q) -> p) -> p"),
    },
    DerivationFixture {
        name: "ax5",
        text: fixture!("derivations/ax5.json"),
        accepted: true,
        image_of: Some("-T -> r"),
    },
    DerivationFixture {
        name: "ax6",
        text: fixture!("derivations/ax6.json"),
        accepted: true,
        image_of: Some("(p -> -T) -> -p"),
    },
    DerivationFixture {
        name: "ax7",
        text: fixture!("derivations/ax7.json"),
        accepted: true,
        image_of: Some("(-(p -> q) -> -T) -> (-p -> -T) -> -q -> -T"),
    },
    DerivationFixture {
        name: "inner/ax2",
        text: fixture!("derivations/inner/ax2.json"),
        accepted: true,
        image_of: None,
    },
    DerivationFixture {
        name: "inner/ax3",
        text: fixture!("derivations/inner/ax3.json"),
        accepted: true,
        image_of: None,
    },
    DerivationFixture {
        name: "inner/ax4",
        text: fixture!("derivations/inner/ax4.json"),
        accepted: true,
        image_of: None,
    },
    DerivationFixture {
        name: "inner/ax5",
        text: fixture!("derivations/inner/ax5.json"),
        accepted: true,
        image_of: None,
    },
    DerivationFixture {
        name: "inner/ax6",
        text: fixture!("derivations/inner/ax6.json"),
        accepted: true,
        image_of: None,
    },
    DerivationFixture {
        name: "inner/ax7",
        text: fixture!("derivations/inner/ax7.json"),
        accepted: true,
        image_of: None,
    },
    DerivationFixture {
        name: "reject_write_on_sheet",
        text: fixture!("derivations/reject_write_on_sheet.json"),
        accepted: false,
        image_of: None,
    },
    DerivationFixture {
        name: "reject_strong_iteration_in_get",
        text: fixture!("derivations/reject_strong_iteration_in_get.json"),
        accepted: false,
        image_of: None,
    },
    DerivationFixture {
        name: "reject_iterate_into_broken_cut",
        text: fixture!("derivations/reject_iterate_into_broken_cut.json"),
        accepted: false,
        image_of: None,
    },
];

pub const MODELS: &[ModelFixture] = &[
    ModelFixture {
        name: "conclusion1",
        text: fixture!("models/conclusion1.json"),
        formula: "p -> -p -> q",
        holds: false,
    },
    ModelFixture {
        name: "conclusion1_contradiction",
        text: fixture!("models/conclusion1.json"),
        formula: "p & -p",
        holds: true,
    },
    ModelFixture {
        name: "chain3",
        text: fixture!("models/chain3.json"),
        formula: "+p -> -(+p & q) -> -q",
        holds: false,
    },
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub kind: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub passed: usize,
    pub failed: usize,
    pub entries: Vec<CorpusEntry>,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn entry(kind: &'static str, name: &str, result: Result<String, String>) -> CorpusEntry {
    let (pass, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CorpusEntry {
        kind,
        name: name.to_string(),
        pass,
        detail,
    }
}

fn formula(text: &str) -> Result<Formula, String> {
    parse_formula(text).map_err(|e| e.to_string())
}

fn valid(f: &Formula, frame: FrameClass, jobs: usize) -> Result<(), String> {
    let opts = SearchOptions {
        jobs,
        ..SearchOptions::default()
    };
    match bounded_valid(f, FIXTURE_WORLDS, frame, &opts).map_err(|e| e.to_string())? {
        Verdict::Valid { .. } => Ok(()),
        Verdict::Countermodel(m) => Err(format!("{f} has countermodel {m}")),
    }
}

pub fn run_proof(fx: &ProofFixture) -> Result<String, String> {
    let doc = ProofDocument::from_json(fx.text).map_err(|e| e.to_string())?;
    let report = check_proof(&doc);
    match (report.accepted, fx.accepted) {
        (true, true) => Ok(format!(
            "accepted, concludes {}",
            report.conclusion.map(|c| c.to_string()).unwrap_or_default()
        )),
        (false, false) => Ok(format!("rejected as expected: {}", report.failure.unwrap())),
        (true, false) => Err("accepted but expected rejection".into()),
        (false, true) => Err(format!("rejected: {}", report.failure.unwrap())),
    }
}

pub fn run_deduction(fx: &DeductionFixture) -> Result<String, String> {
    let mut doc = ProofDocument::from_json(fx.text).map_err(|e| e.to_string())?;
    for d in fx.discharge {
        doc = deduction_transform(&doc, &formula(d)?).map_err(|e| e.to_string())?;
    }
    let report = check_proof(&doc);
    if !report.accepted {
        return Err(format!(
            "transformed proof rejected: {}",
            report.failure.unwrap()
        ));
    }
    let want = formula(fx.conclusion)?;
    let got = report.conclusion.expect("accepted proofs conclude");
    if !same_formula(&got, &want) {
        return Err(format!("concludes {got}, expected {want}"));
    }
    Ok(format!("{} lines, concludes {got}", doc.lines.len()))
}

pub fn run_derivation(fx: &DerivationFixture, jobs: usize) -> Result<String, String> {
    let doc = DerivationDocument::from_json(fx.text).map_err(|e| e.to_string())?;
    let report = check_derivation(&doc);
    if !fx.accepted {
        return match report.failure {
            Some(f) => Ok(format!(
                "rejected as expected at step {}: {}",
                f.step, f.reason
            )),
            None => Err("accepted but expected rejection".into()),
        };
    }
    if let Some(f) = report.failure {
        return Err(format!(
            "step {} ({}) rejected: {}",
            f.step, f.rule, f.reason
        ));
    }
    let frame = match doc.system {
        GraphSystem::Get => FrameClass::T,
        GraphSystem::Get4 => FrameClass::S4,
    };
    let claim = if report.theorem {
        to_formula(&report.final_graph)
    } else {
        Formula::implies(to_formula(&doc.start), to_formula(&report.final_graph))
    };
    valid(&claim, frame, jobs)?;
    if let Some(image) = fx.image_of {
        if !ac_equal(&report.final_graph, &to_graph(&formula(image)?)) {
            return Err(format!(
                "ends in {}, not the graph of {image}",
                report.final_graph
            ));
        }
    }
    Ok(format!(
        "accepted in {} steps, ends in `{}`; `{claim}` valid on {} frames up to {FIXTURE_WORLDS} worlds",
        doc.steps.len(),
        report.final_graph,
        frame.name()
    ))
}

pub fn run_model(fx: &ModelFixture) -> Result<String, String> {
    let model = KripkeModel::from_json(fx.text).map_err(|e| e.to_string())?;
    let f = formula(fx.formula)?;
    let got = model.holds(&f);
    if got == fx.holds {
        Ok(format!("`{f}` is {got} at the actual world"))
    } else {
        Err(format!("`{f}` is {got}, expected {}", fx.holds))
    }
}

pub fn run_corpus(jobs: usize) -> CorpusReport {
    let mut entries = Vec::new();
    for fx in PROOFS {
        entries.push(entry("proof", fx.name, run_proof(fx)));
    }
    for fx in DEDUCTIONS {
        entries.push(entry("deduction", fx.name, run_deduction(fx)));
    }
    for fx in DERIVATIONS {
        entries.push(entry("derivation", fx.name, run_derivation(fx, jobs)));
    }
    for fx in MODELS {
        entries.push(entry("model", fx.name, run_model(fx)));
    }
    for (name, f) in theorem_corpus() {
        let result = valid(&f, FrameClass::T, jobs).map(|()| format!("`{f}` valid"));
        entries.push(entry("theorem", name, result));
    }
    let passed = entries.iter().filter(|e| e.pass).count();
    CorpusReport {
        failed: entries.len() - passed,
        passed,
        entries,
    }
}
