//! Hilbert-style proofs for GT and GT4.
//!
//! Axioms are recognised by matching against the schema list after expanding
//! `~` and `&` to their definitions, so `~p -> -p` is an instance of the same
//! schema as `(p -> -T) -> -p`. Modus ponens and hypothesis lines compare
//! formulas the same way.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{parse_formula, Formula, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Gt,
    Gt4,
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Gt => "gt",
            System::Gt4 => "gt4",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxiomSchema {
    Ax1,
    Ax2,
    Ax3,
    Ax4,
    Ax5,
    Ax6,
    Ax7,
    /// `+X -> (-(+X & Y) -> -Y)`, GT4 only.
    Gt4,
}

impl AxiomSchema {
    pub const GT: [AxiomSchema; 7] = [
        AxiomSchema::Ax1,
        AxiomSchema::Ax2,
        AxiomSchema::Ax3,
        AxiomSchema::Ax4,
        AxiomSchema::Ax5,
        AxiomSchema::Ax6,
        AxiomSchema::Ax7,
    ];

    /// The schema with metavariables `x`, `y`, `z`.
    pub fn template(self) -> &'static str {
        match self {
            AxiomSchema::Ax1 => "T",
            AxiomSchema::Ax2 => "x -> y -> x",
            AxiomSchema::Ax3 => "(x -> y -> z) -> (x -> y) -> x -> z",
            AxiomSchema::Ax4 => "((x -> y) -> x) -> x",
            AxiomSchema::Ax5 => "-T -> z",
            AxiomSchema::Ax6 => "(x -> -T) -> -x",
            AxiomSchema::Ax7 => "(-(x -> y) -> -T) -> (-x -> -T) -> -y -> -T",
            AxiomSchema::Gt4 => "+x -> -(+x & y) -> -y",
        }
    }

    pub fn in_system(self, system: System) -> bool {
        self != AxiomSchema::Gt4 || system == System::Gt4
    }

    /// Instantiates the schema, substituting `x`, `y`, `z`.
    pub fn instantiate(self, x: &Formula, y: &Formula, z: &Formula) -> Formula {
        let t = parse_formula(self.template()).expect("schema templates parse");
        substitute(&t, &|name| match name {
            "x" => Some(x.clone()),
            "y" => Some(y.clone()),
            "z" => Some(z.clone()),
            _ => None,
        })
    }

    fn pattern(self) -> &'static Pattern {
        static PATTERNS: OnceLock<Vec<(AxiomSchema, Pattern)>> = OnceLock::new();
        let all = PATTERNS.get_or_init(|| {
            AxiomSchema::GT
                .iter()
                .chain(std::iter::once(&AxiomSchema::Gt4))
                .map(|&s| {
                    let f = parse_formula(s.template()).expect("schema templates parse");
                    (s, Pattern::from_formula(&f.expand_defined()))
                })
                .collect()
        });
        &all.iter().find(|(s, _)| *s == self).unwrap().1
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomSchema::Ax1 => "Ax1",
            AxiomSchema::Ax2 => "Ax2",
            AxiomSchema::Ax3 => "Ax3",
            AxiomSchema::Ax4 => "Ax4",
            AxiomSchema::Ax5 => "Ax5",
            AxiomSchema::Ax6 => "Ax6",
            AxiomSchema::Ax7 => "Ax7",
            AxiomSchema::Gt4 => "AxGT4",
        })
    }
}

/// Replaces atoms for which `sub` returns a formula.
pub fn substitute(f: &Formula, sub: &dyn Fn(&str) -> Option<Formula>) -> Formula {
    match f {
        Formula::Atom(p) => sub(p).unwrap_or_else(|| f.clone()),
        Formula::Top => Formula::Top,
        Formula::WeakNeg(x) => Formula::weak_neg(substitute(x, sub)),
        Formula::ClassNeg(x) => Formula::class_neg(substitute(x, sub)),
        Formula::Impl(a, b) => Formula::implies(substitute(a, sub), substitute(b, sub)),
        Formula::Conj(a, b) => Formula::and(substitute(a, sub), substitute(b, sub)),
    }
}

/// Schema over primitive connectives; every atom is a metavariable.
#[derive(Debug, Clone)]
enum Pattern {
    Var(usize),
    Top,
    WeakNeg(Box<Pattern>),
    Impl(Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    fn from_formula(f: &Formula) -> Pattern {
        match f {
            Formula::Atom(name) => Pattern::Var(match name.as_str() {
                "x" => 0,
                "y" => 1,
                _ => 2,
            }),
            Formula::Top => Pattern::Top,
            Formula::WeakNeg(x) => Pattern::WeakNeg(Box::new(Pattern::from_formula(x))),
            Formula::Impl(a, b) => Pattern::Impl(
                Box::new(Pattern::from_formula(a)),
                Box::new(Pattern::from_formula(b)),
            ),
            Formula::ClassNeg(_) | Formula::Conj(..) => unreachable!("patterns are expanded"),
        }
    }

    fn matches<'a>(&self, f: &'a Formula, binds: &mut [Option<&'a Formula>; 3]) -> bool {
        match (self, f) {
            (Pattern::Var(i), _) => match binds[*i] {
                Some(bound) => bound == f,
                None => {
                    binds[*i] = Some(f);
                    true
                }
            },
            (Pattern::Top, Formula::Top) => true,
            (Pattern::WeakNeg(p), Formula::WeakNeg(x)) => p.matches(x, binds),
            (Pattern::Impl(pa, pb), Formula::Impl(a, b)) => {
                pa.matches(a, binds) && pb.matches(b, binds)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AxiomMatch {
    pub schema: AxiomSchema,
    /// How many `-A -> -T` layers were peeled before the base schema matched.
    pub peel: usize,
}

/// Returns the base schema and peel count with the fewest peels, preferring
/// lower-numbered schemas at equal depth.
pub fn match_axiom(f: &Formula, system: System) -> Option<AxiomMatch> {
    let mut core = f.expand_defined();
    let mut peel = 0;
    loop {
        for schema in AxiomSchema::GT
            .into_iter()
            .chain(std::iter::once(AxiomSchema::Gt4))
            .filter(|s| s.in_system(system))
        {
            if schema.pattern().matches(&core, &mut [None, None, None]) {
                return Some(AxiomMatch { schema, peel });
            }
        }
        {
            let inner = peel_necessitation(&core)?;
            core = inner.clone();
            peel += 1;
        }
    }
}

/// `-A -> -T` ↦ `A`.
fn peel_necessitation(f: &Formula) -> Option<&Formula> {
    if let Formula::Impl(a, b) = f {
        if let (Formula::WeakNeg(inner), Formula::WeakNeg(t)) = (a.as_ref(), b.as_ref()) {
            if **t == Formula::Top {
                return Some(inner);
            }
        }
    }
    None
}

/// Equality up to the definitions of `~` and `&`.
pub fn same_formula(a: &Formula, b: &Formula) -> bool {
    a == b || a.expand_defined() == b.expand_defined()
}

// ---------------------------------------------------------------------------
// Proof documents

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Justification {
    Axiom,
    Hypothesis,
    /// 1-indexed lines: `major` must be `minor -> this`.
    ModusPonens {
        major: usize,
        minor: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub by: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDocument {
    pub system: System,
    pub hypotheses: Vec<Formula>,
    pub lines: Vec<ProofLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("formula {text:?}: {source}")]
    Formula { text: String, source: ParseError },
    #[error("proof document: {0}")]
    Document(String),
    #[error("{0} is not a hypothesis of the proof")]
    NotAHypothesis(String),
    #[error("input proof is rejected: {0}")]
    InputRejected(LineFailure),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawBy {
    Tag(String),
    Mp { mp: (usize, usize) },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLine {
    formula: String,
    by: RawBy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProof {
    system: System,
    #[serde(default)]
    hypotheses: Vec<String>,
    lines: Vec<RawLine>,
}

fn parse_field(text: &str) -> Result<Formula, HilbertError> {
    parse_formula(text).map_err(|source| HilbertError::Formula {
        text: text.to_string(),
        source,
    })
}

impl ProofDocument {
    pub fn from_json(text: &str) -> Result<ProofDocument, HilbertError> {
        let raw: RawProof =
            serde_json::from_str(text).map_err(|e| HilbertError::Document(e.to_string()))?;
        let hypotheses = raw
            .hypotheses
            .iter()
            .map(|h| parse_field(h))
            .collect::<Result<_, _>>()?;
        let mut lines = Vec::with_capacity(raw.lines.len());
        for l in &raw.lines {
            let by = match &l.by {
                RawBy::Tag(t) if t == "ax" || t == "axiom" => Justification::Axiom,
                RawBy::Tag(t) if t == "hyp" || t == "hypothesis" => Justification::Hypothesis,
                RawBy::Tag(t) => {
                    return Err(HilbertError::Document(format!(
                        "unknown justification {t:?}"
                    )))
                }
                RawBy::Mp { mp: (major, minor) } => Justification::ModusPonens {
                    major: *major,
                    minor: *minor,
                },
            };
            lines.push(ProofLine {
                formula: parse_field(&l.formula)?,
                by,
            });
        }
        Ok(ProofDocument {
            system: raw.system,
            hypotheses,
            lines,
        })
    }

    pub fn to_json(&self) -> String {
        let raw = RawProof {
            system: self.system,
            hypotheses: self.hypotheses.iter().map(|h| h.to_string()).collect(),
            lines: self
                .lines
                .iter()
                .map(|l| RawLine {
                    formula: l.formula.to_string(),
                    by: match l.by {
                        Justification::Axiom => RawBy::Tag("ax".into()),
                        Justification::Hypothesis => RawBy::Tag("hyp".into()),
                        Justification::ModusPonens { major, minor } => {
                            RawBy::Mp { mp: (major, minor) }
                        }
                    },
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("proof documents serialize")
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rejection {
    EmptyProof,
    NotAnAxiom,
    UndeclaredHypothesis,
    /// An MP index that is zero, refers to this line, or lies after it.
    BadIndex {
        index: usize,
    },
    MpShape,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::EmptyProof => f.write_str("proof has no lines"),
            Rejection::NotAnAxiom => f.write_str("formula is not an axiom instance"),
            Rejection::UndeclaredHypothesis => f.write_str("formula is not a declared hypothesis"),
            Rejection::BadIndex { index } => {
                write!(f, "line reference {index} does not name an earlier line")
            }
            Rejection::MpShape => {
                f.write_str("major premise is not `minor -> conclusion` for this line")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineFailure {
    /// 1-indexed; 0 for a document-level failure.
    pub line: usize,
    pub reason: Rejection,
}

impl fmt::Display for LineFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofReport {
    pub accepted: bool,
    pub conclusion: Option<Formula>,
    pub failure: Option<LineFailure>,
    /// Axiom match for each axiom-justified line (1-indexed).
    pub axioms: Vec<(usize, AxiomMatch)>,
}

impl ProofReport {
    /// Accepted and free of hypotheses: the conclusion is a theorem.
    pub fn is_theorem(&self, doc: &ProofDocument) -> bool {
        self.accepted && doc.hypotheses.is_empty()
    }
}

pub fn check_proof(doc: &ProofDocument) -> ProofReport {
    let reject = |line, reason, axioms| ProofReport {
        accepted: false,
        conclusion: None,
        failure: Some(LineFailure { line, reason }),
        axioms,
    };
    if doc.lines.is_empty() {
        return reject(0, Rejection::EmptyProof, vec![]);
    }
    let expanded: Vec<Formula> = doc
        .lines
        .iter()
        .map(|l| l.formula.expand_defined())
        .collect();
    let hyps: Vec<Formula> = doc.hypotheses.iter().map(|h| h.expand_defined()).collect();
    let mut axioms = Vec::new();
    for (i, line) in doc.lines.iter().enumerate() {
        let number = i + 1;
        match line.by {
            Justification::Axiom => match match_axiom(&line.formula, doc.system) {
                Some(m) => axioms.push((number, m)),
                None => return reject(number, Rejection::NotAnAxiom, axioms),
            },
            Justification::Hypothesis => {
                if !hyps.contains(&expanded[i]) {
                    return reject(number, Rejection::UndeclaredHypothesis, axioms);
                }
            }
            Justification::ModusPonens { major, minor } => {
                for index in [major, minor] {
                    if index == 0 || index >= number {
                        return reject(number, Rejection::BadIndex { index }, axioms);
                    }
                }
                let shape_ok = match &expanded[major - 1] {
                    Formula::Impl(a, b) => **a == expanded[minor - 1] && **b == expanded[i],
                    _ => false,
                };
                if !shape_ok {
                    return reject(number, Rejection::MpShape, axioms);
                }
            }
        }
    }
    ProofReport {
        accepted: true,
        conclusion: doc.conclusion().cloned(),
        failure: None,
        axioms,
    }
}

// ---------------------------------------------------------------------------
// Deduction theorem

struct Builder {
    lines: Vec<ProofLine>,
}

impl Builder {
    fn push(&mut self, formula: Formula, by: Justification) -> usize {
        self.lines.push(ProofLine { formula, by });
        self.lines.len()
    }

    fn mp(&mut self, major: usize, minor: usize) -> usize {
        let formula = match &self.lines[major - 1].formula {
            Formula::Impl(_, b) => (**b).clone(),
            other => unreachable!("major premise {other} is not an implication"),
        };
        self.push(formula, Justification::ModusPonens { major, minor })
    }

    /// Five-line proof of `d -> d`.
    fn identity(&mut self, d: &Formula) -> usize {
        let dd = Formula::implies(d.clone(), d.clone());
        let ax2a = self.push(
            AxiomSchema::Ax2.instantiate(d, &dd, d),
            Justification::Axiom,
        );
        let ax3 = self.push(
            AxiomSchema::Ax3.instantiate(d, &dd, d),
            Justification::Axiom,
        );
        let step = self.mp(ax3, ax2a);
        let ax2b = self.push(AxiomSchema::Ax2.instantiate(d, d, d), Justification::Axiom);
        self.mp(step, ax2b)
    }
}

/// Turns a proof from hypotheses `Γ ∪ {d}` into a proof of `d -> C` from `Γ`.
pub fn deduction_transform(
    doc: &ProofDocument,
    discharge: &Formula,
) -> Result<ProofDocument, HilbertError> {
    if !doc.hypotheses.iter().any(|h| same_formula(h, discharge)) {
        return Err(HilbertError::NotAHypothesis(discharge.to_string()));
    }
    let report = check_proof(doc);
    if let Some(failure) = report.failure {
        return Err(HilbertError::InputRejected(failure));
    }

    let d = discharge;
    let mut out = Builder { lines: Vec::new() };
    // where `d -> F_i` ends up for each input line
    let mut moved: Vec<usize> = Vec::with_capacity(doc.lines.len());
    for line in &doc.lines {
        let f = &line.formula;
        let at = match line.by {
            Justification::Hypothesis if same_formula(f, d) => out.identity(d),
            Justification::Axiom | Justification::Hypothesis => {
                let own = out.push(f.clone(), line.by);
                let ax2 = out.push(
                    AxiomSchema::Ax2.instantiate(f, d, &Formula::Top),
                    Justification::Axiom,
                );
                out.mp(ax2, own)
            }
            Justification::ModusPonens { major, minor } => {
                let minor_f = &doc.lines[minor - 1].formula;
                let major_f = &doc.lines[major - 1].formula;
                // (d -> major) -> (d -> minor) -> d -> f, with major = minor -> f
                let ax3 = Formula::implies(
                    Formula::implies(d.clone(), major_f.clone()),
                    Formula::implies(
                        Formula::implies(d.clone(), minor_f.clone()),
                        Formula::implies(d.clone(), f.clone()),
                    ),
                );
                let ax3 = out.push(ax3, Justification::Axiom);
                let step = out.mp(ax3, moved[major - 1]);
                out.mp(step, moved[minor - 1])
            }
        };
        moved.push(at);
    }
    Ok(ProofDocument {
        system: doc.system,
        hypotheses: doc
            .hypotheses
            .iter()
            .filter(|h| !same_formula(h, d))
            .cloned()
            .collect(),
        lines: out.lines,
    })
}

// ---------------------------------------------------------------------------
// Theorem corpus

const CORPUS: &[(&str, &str)] = &[
    ("prop2", "+(p -> q) -> +p -> +q"),
    ("prop4a", "(p -> ~q) -> q -> ~p"),
    ("prop4b", "~(p -> p) -> q"),
    ("prop4c", "p | ~p"),
    ("prop4d", "p -> ~~p"),
    ("prop4e", "~~p -> p"),
    ("prop4f_i", "(p -> q) -> ~q -> ~p"),
    ("prop4f_ii", "(~q -> ~p) -> p -> q"),
    ("prop5a", "p -> (p | q)"),
    ("prop5b", "p -> (q | p)"),
    ("prop5c", "(p -> q) -> (r -> q) -> (p | r) -> q"),
    ("prop6a", "p & q -> p"),
    ("prop6b", "p & q -> q"),
    ("prop6c", "(p -> q) -> (p -> r) -> p -> q & r"),
    ("prop6d", "p -> q -> p & q"),
    ("prop6e", "+(p & q) <-> +p & +q"),
    ("prop8a", "<>T -> T"),
    ("prop8b", "p | -p"),
    ("prop8c", "~p -> -p"),
    ("prop8d", "-p <-> ~+p"),
    ("prop8e", "+p -> p"),
    ("prop9a_i", "~+~p <-> <>p"),
    ("prop9a_ii", "+~p <-> ~<>p"),
    ("prop9a_iii", "~+p <-> -p"),
    ("prop9b", "p -> <>p"),
    ("prop9c", "-p -> <>~p"),
    ("prop9d_i", "~(+p & <>~p)"),
    ("prop9d_ii", "~(+p & +q & <>~(p & q))"),
];

/// Named GT theorems instantiated over atoms `p`, `q`, `r`.
pub fn theorem_corpus() -> Vec<(&'static str, Formula)> {
    CORPUS
        .iter()
        .map(|(name, src)| (*name, parse_formula(src).expect("corpus formulas parse")))
        .collect()
}
