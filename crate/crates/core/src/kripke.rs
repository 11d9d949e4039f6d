//! Finite reflexive Kripke models and bounded validity search.
//!
//! Worlds are indexed `0..n` and sets of worlds are `u64` bitmasks, so a
//! formula is evaluated at every world of a model in one pass. Enumeration
//! order is fixed: world count ascending, then the off-diagonal relation as a
//! bitset over pairs `(i, j)`, `i != j`, in lexicographic order, then the
//! valuation as a bitset with bit `atom * n + world` (atoms sorted), then the
//! actual world. The first countermodel is therefore reproducible.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{is_atom_name, Formula};

/// Largest world count the bitmask representation supports.
pub const MAX_WORLDS: usize = 64;

/// Default cap on the number of (frame, valuation) pairs one search may visit.
pub const DEFAULT_MODEL_BUDGET: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("world {0:?} is not related to itself")]
    MissingReflexivity(String),
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("world {0:?} declared twice")]
    DuplicateWorld(String),
    #[error("a model needs at least one world")]
    NoWorlds,
    #[error("{0} worlds exceed the supported maximum of {MAX_WORLDS}")]
    TooManyWorlds(usize),
    #[error("{0:?} is not a valid atom name")]
    BadAtom(String),
    #[error("relation is not {0}")]
    FrameViolation(&'static str),
    #[error("search needs {needed} models but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("world bound must be at least 1")]
    ZeroBound,
    #[error("countermodel does not falsify the query at its actual world")]
    SelfCheck,
    #[error("model document: {0}")]
    Document(String),
}

/// Frame conditions beyond reflexivity, which always holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FrameClass {
    pub transitive: bool,
    pub symmetric: bool,
    pub convergent: bool,
}

impl FrameClass {
    /// Reflexive frames (GT).
    pub const T: FrameClass = FrameClass {
        transitive: false,
        symmetric: false,
        convergent: false,
    };
    /// Reflexive and transitive frames (GT4).
    pub const S4: FrameClass = FrameClass {
        transitive: true,
        symmetric: false,
        convergent: false,
    };
    /// Equivalence relations.
    pub const S5: FrameClass = FrameClass {
        transitive: true,
        symmetric: true,
        convergent: false,
    };

    pub fn from_name(name: &str) -> Option<FrameClass> {
        match name {
            "t" => Some(FrameClass::T),
            "s4" => Some(FrameClass::S4),
            "s5" => Some(FrameClass::S5),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            FrameClass::T => "t".into(),
            FrameClass::S4 => "s4".into(),
            FrameClass::S5 => "s5".into(),
            _ => {
                let mut parts = vec!["reflexive"];
                if self.transitive {
                    parts.push("transitive");
                }
                if self.symmetric {
                    parts.push("symmetric");
                }
                if self.convergent {
                    parts.push("convergent");
                }
                parts.join("+")
            }
        }
    }

    pub fn admits(&self, frame: &Frame) -> bool {
        self.violation(frame).is_none()
    }

    fn violation(&self, frame: &Frame) -> Option<&'static str> {
        if !frame.is_reflexive() {
            return Some("reflexive");
        }
        if self.transitive && !frame.is_transitive() {
            return Some("transitive");
        }
        if self.symmetric && !frame.is_symmetric() {
            return Some("symmetric");
        }
        if self.convergent && !frame.is_convergent() {
            return Some("convergent");
        }
        None
    }
}

/// An accessibility relation over worlds `0..n`; `succ[w]` is the set of `v` with `w < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    succ: Vec<u64>,
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask & (1u64 << i) != 0)
}

impl Frame {
    pub fn from_successors(succ: Vec<u64>) -> Frame {
        assert!(!succ.is_empty() && succ.len() <= MAX_WORLDS);
        Frame { succ }
    }

    /// The reflexive frame on `n` worlds with the given extra edges.
    pub fn reflexive_with(n: usize, edges: &[(usize, usize)]) -> Frame {
        let mut succ: Vec<u64> = (0..n).map(|w| 1u64 << w).collect();
        for &(a, b) in edges {
            succ[a] |= 1u64 << b;
        }
        Frame::from_successors(succ)
    }

    /// The `index`-th reflexive frame on `n` worlds in enumeration order.
    pub fn nth_reflexive(n: usize, index: u64) -> Frame {
        let mut succ: Vec<u64> = (0..n).map(|w| 1u64 << w).collect();
        let mut bit = 0;
        for (i, row) in succ.iter_mut().enumerate() {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if index & (1u64 << bit) != 0 {
                    *row |= 1u64 << j;
                }
                bit += 1;
            }
        }
        Frame { succ }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn successors(&self) -> &[u64] {
        &self.succ
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.succ[a] & (1u64 << b) != 0
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, &s) in self.succ.iter().enumerate() {
            out.extend(bits(s).map(|b| (a, b)));
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        self.succ
            .iter()
            .enumerate()
            .all(|(w, s)| s & (1u64 << w) != 0)
    }

    pub fn is_transitive(&self) -> bool {
        self.succ
            .iter()
            .all(|&s| bits(s).all(|v| self.succ[v] & !s == 0))
    }

    pub fn is_symmetric(&self) -> bool {
        self.succ
            .iter()
            .enumerate()
            .all(|(w, &s)| bits(s).all(|v| self.related(v, w)))
    }

    pub fn is_convergent(&self) -> bool {
        self.succ
            .iter()
            .all(|&s| bits(s).all(|a| bits(s).all(|b| self.succ[a] & self.succ[b] != 0)))
    }
}

/// Number of reflexive frames on `n` worlds.
pub fn reflexive_frame_count(n: usize) -> u64 {
    let free = n * (n - 1);
    assert!(free < 64, "too many worlds to enumerate relations");
    1u64 << free
}

// ---------------------------------------------------------------------------
// Evaluation

#[derive(Debug, Clone, Copy)]
enum Op {
    Atom(usize),
    Missing,
    Top,
    WeakNeg,
    ClassNeg,
    Impl,
    Conj,
}

/// A formula flattened to postfix over a fixed atom table.
#[derive(Debug, Clone)]
pub struct Compiled {
    ops: Vec<Op>,
}

impl Compiled {
    /// Atoms not found in `atoms` evaluate to false everywhere.
    pub fn new(f: &Formula, atoms: &[String]) -> Compiled {
        let mut ops = Vec::with_capacity(f.size());
        fn go(f: &Formula, atoms: &[String], ops: &mut Vec<Op>) {
            match f {
                Formula::Atom(p) => ops.push(match atoms.iter().position(|a| a == p) {
                    Some(i) => Op::Atom(i),
                    None => Op::Missing,
                }),
                Formula::Top => ops.push(Op::Top),
                Formula::WeakNeg(x) => {
                    go(x, atoms, ops);
                    ops.push(Op::WeakNeg);
                }
                Formula::ClassNeg(x) => {
                    go(x, atoms, ops);
                    ops.push(Op::ClassNeg);
                }
                Formula::Impl(a, b) => {
                    go(a, atoms, ops);
                    go(b, atoms, ops);
                    ops.push(Op::Impl);
                }
                Formula::Conj(a, b) => {
                    go(a, atoms, ops);
                    go(b, atoms, ops);
                    ops.push(Op::Conj);
                }
            }
        }
        go(f, atoms, &mut ops);
        Compiled { ops }
    }

    /// The set of worlds at which the formula holds.
    pub fn truth_set(&self, succ: &[u64], atom_masks: &[u64]) -> u64 {
        let all = full_mask(succ.len());
        let mut stack: Vec<u64> = Vec::with_capacity(8);
        for op in &self.ops {
            let v = match *op {
                Op::Atom(i) => atom_masks[i],
                Op::Missing => 0,
                Op::Top => all,
                Op::WeakNeg => {
                    let x = stack.pop().unwrap();
                    weak_neg_set(succ, x)
                }
                Op::ClassNeg => all & !stack.pop().unwrap(),
                Op::Impl => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    all & (!a | b)
                }
                Op::Conj => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    a & b
                }
            };
            stack.push(v);
        }
        stack.pop().unwrap()
    }
}

/// Worlds with some successor outside `x`.
fn weak_neg_set(succ: &[u64], x: u64) -> u64 {
    let mut out = 0;
    for (w, &s) in succ.iter().enumerate() {
        if s & !x != 0 {
            out |= 1u64 << w;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Models

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    names: Vec<String>,
    actual: usize,
    frame: Frame,
    /// Atom → set of worlds where it is true. Absent atoms are false everywhere.
    valuation: BTreeMap<String, u64>,
}

/// JSON model document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub worlds: Vec<String>,
    pub actual: String,
    pub rel: Vec<(String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, BTreeMap<String, bool>>,
    /// Declared frame class (`t`, `s4`, `s5`); the relation must already satisfy it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
}

impl KripkeModel {
    /// Validates a model document.
    pub fn build(doc: &ModelDocument) -> Result<KripkeModel, KripkeError> {
        if doc.worlds.is_empty() {
            return Err(KripkeError::NoWorlds);
        }
        if doc.worlds.len() > MAX_WORLDS {
            return Err(KripkeError::TooManyWorlds(doc.worlds.len()));
        }
        let mut seen = HashSet::new();
        for w in &doc.worlds {
            if !seen.insert(w.as_str()) {
                return Err(KripkeError::DuplicateWorld(w.clone()));
            }
        }
        let index = |w: &str| -> Result<usize, KripkeError> {
            doc.worlds
                .iter()
                .position(|x| x == w)
                .ok_or_else(|| KripkeError::UnknownWorld(w.to_string()))
        };
        let actual = index(&doc.actual)?;
        let mut succ = vec![0u64; doc.worlds.len()];
        for (a, b) in &doc.rel {
            let (i, j) = (index(a)?, index(b)?);
            succ[i] |= 1u64 << j;
        }
        for (w, &s) in succ.iter().enumerate() {
            if s & (1u64 << w) == 0 {
                return Err(KripkeError::MissingReflexivity(doc.worlds[w].clone()));
            }
        }
        let frame = Frame { succ };
        if let Some(name) = &doc.frame {
            let class = FrameClass::from_name(name)
                .ok_or_else(|| KripkeError::Document(format!("unknown frame class {name:?}")))?;
            if let Some(prop) = class.violation(&frame) {
                return Err(KripkeError::FrameViolation(prop));
            }
        }
        let mut valuation: BTreeMap<String, u64> = BTreeMap::new();
        for (w, atoms) in &doc.valuation {
            let wi = index(w)?;
            for (atom, &truth) in atoms {
                if !is_atom_name(atom) {
                    return Err(KripkeError::BadAtom(atom.clone()));
                }
                let mask = valuation.entry(atom.clone()).or_insert(0);
                if truth {
                    *mask |= 1u64 << wi;
                }
            }
        }
        Ok(KripkeModel {
            names: doc.worlds.clone(),
            actual,
            frame,
            valuation,
        })
    }

    pub fn from_json(text: &str) -> Result<KripkeModel, KripkeError> {
        let doc: ModelDocument =
            serde_json::from_str(text).map_err(|e| KripkeError::Document(e.to_string()))?;
        KripkeModel::build(&doc)
    }

    /// A model over generated world names `w0..`.
    pub fn from_parts(
        frame: Frame,
        actual: usize,
        valuation: BTreeMap<String, u64>,
    ) -> KripkeModel {
        let names = (0..frame.len()).map(|i| format!("w{i}")).collect();
        KripkeModel {
            names,
            actual,
            frame,
            valuation,
        }
    }

    pub fn to_document(&self) -> ModelDocument {
        let rel = self
            .frame
            .edges()
            .into_iter()
            .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect();
        let mut valuation = BTreeMap::new();
        for (w, name) in self.names.iter().enumerate() {
            let row: BTreeMap<String, bool> = self
                .valuation
                .iter()
                .filter(|(_, &m)| m & (1u64 << w) != 0)
                .map(|(a, _)| (a.clone(), true))
                .collect();
            if !row.is_empty() {
                valuation.insert(name.clone(), row);
            }
        }
        ModelDocument {
            worlds: self.names.clone(),
            actual: self.names[self.actual].clone(),
            rel,
            valuation,
            frame: None,
        }
    }

    pub fn world_count(&self) -> usize {
        self.names.len()
    }

    pub fn world_names(&self) -> &[String] {
        &self.names
    }

    pub fn actual(&self) -> usize {
        self.actual
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn world_index(&self, name: &str) -> Result<usize, KripkeError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| KripkeError::UnknownWorld(name.to_string()))
    }

    /// Whether `atom` is true at world `w`.
    pub fn atom_true(&self, atom: &str, w: usize) -> bool {
        self.valuation
            .get(atom)
            .is_some_and(|m| m & (1u64 << w) != 0)
    }

    /// The set of worlds at which `f` is true.
    pub fn truth_set(&self, f: &Formula) -> u64 {
        let atoms: Vec<String> = self.valuation.keys().cloned().collect();
        let masks: Vec<u64> = self.valuation.values().copied().collect();
        Compiled::new(f, &atoms).truth_set(&self.frame.succ, &masks)
    }

    pub fn eval_at(&self, w: usize, f: &Formula) -> Result<bool, KripkeError> {
        if w >= self.names.len() {
            return Err(KripkeError::UnknownWorld(format!("#{w}")));
        }
        Ok(self.truth_set(f) & (1u64 << w) != 0)
    }

    pub fn eval(&self, world: &str, f: &Formula) -> Result<bool, KripkeError> {
        self.eval_at(self.world_index(world)?, f)
    }

    /// Truth at the actual world.
    pub fn holds(&self, f: &Formula) -> bool {
        self.truth_set(f) & (1u64 << self.actual) != 0
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let doc = self.to_document();
        f.write_str(&serde_json::to_string(&doc).map_err(|_| fmt::Error)?)
    }
}

// ---------------------------------------------------------------------------
// Bounded search

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No countermodel with at most `bound` worlds.
    Valid {
        bound: usize,
    },
    Countermodel(KripkeModel),
}

impl Verdict {
    /// Wraps a countermodel after checking that it falsifies `f` at its actual world.
    pub fn countermodel(model: KripkeModel, f: &Formula) -> Result<Verdict, KripkeError> {
        if model.holds(f) {
            return Err(KripkeError::SelfCheck);
        }
        Ok(Verdict::Countermodel(model))
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_models: u64,
    /// Worker threads; 1 searches on the calling thread.
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_models: DEFAULT_MODEL_BUDGET,
            jobs: 1,
        }
    }
}

/// Number of (frame, valuation) pairs in the exhaustive space.
pub fn space_size(max_worlds: usize, atom_count: usize) -> u128 {
    (1..=max_worlds)
        .map(|n| {
            let rel_bits = (n * (n - 1)) as u32;
            let val_bits = (n * atom_count) as u32;
            if rel_bits + val_bits >= 127 {
                u128::MAX / 2
            } else {
                1u128 << (rel_bits + val_bits)
            }
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

fn atom_masks(valuation: u64, n: usize, atoms: usize) -> Vec<u64> {
    let m = full_mask(n);
    (0..atoms).map(|a| (valuation >> (a * n)) & m).collect()
}

fn check_budget(max_worlds: usize, atoms: usize, opts: &SearchOptions) -> Result<(), KripkeError> {
    if max_worlds == 0 {
        return Err(KripkeError::ZeroBound);
    }
    let needed = space_size(max_worlds, atoms);
    if needed > opts.max_models as u128 || max_worlds * (max_worlds - 1) >= 64 {
        return Err(KripkeError::BudgetExceeded {
            needed,
            budget: opts.max_models,
        });
    }
    Ok(())
}

pub(crate) fn run_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> T {
    if jobs <= 1 {
        return work();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

/// Searches every model with at most `max_worlds` worlds in `frame` over the
/// atoms of `f` and returns the first one falsifying `f`.
pub fn bounded_valid(
    f: &Formula,
    max_worlds: usize,
    frame: FrameClass,
    opts: &SearchOptions,
) -> Result<Verdict, KripkeError> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    check_budget(max_worlds, atoms.len(), opts)?;
    let compiled = Compiled::new(f, &atoms);
    let k = atoms.len();

    let search_frame = |n: usize, rel: u64| -> Option<(u64, u64, usize)> {
        let fr = Frame::nth_reflexive(n, rel);
        if !frame.admits(&fr) {
            return None;
        }
        let all = full_mask(n);
        for v in 0..(1u64 << (n * k)) {
            let masks = atom_masks(v, n, k);
            let t = compiled.truth_set(&fr.succ, &masks);
            if t != all {
                let w = (all & !t).trailing_zeros() as usize;
                return Some((rel, v, w));
            }
        }
        None
    };

    let hit = run_pool(opts.jobs, || {
        for n in 1..=max_worlds {
            let frames = reflexive_frame_count(n);
            let found = if opts.jobs <= 1 {
                (0..frames).find_map(|r| search_frame(n, r))
            } else {
                (0..frames)
                    .into_par_iter()
                    .find_map_first(|r| search_frame(n, r))
            };
            if let Some((rel, v, w)) = found {
                return Some((n, rel, v, w));
            }
        }
        None
    });

    match hit {
        None => Ok(Verdict::Valid { bound: max_worlds }),
        Some((n, rel, v, w)) => {
            let masks = atom_masks(v, n, k);
            let valuation = atoms.iter().cloned().zip(masks).collect();
            let model = KripkeModel::from_parts(Frame::nth_reflexive(n, rel), w, valuation);
            Verdict::countermodel(model, f)
        }
    }
}

/// Every model of a frame class up to a world bound, over a fixed atom list.
///
/// Each entry covers all choices of actual world at once; truth sets are
/// reported as world bitmasks.
#[derive(Debug, Clone)]
pub struct ModelSpace {
    atoms: Vec<String>,
    frames: Vec<Frame>,
}

impl ModelSpace {
    pub fn new(
        atoms: &BTreeSet<String>,
        max_worlds: usize,
        class: FrameClass,
        max_models: u64,
    ) -> Result<ModelSpace, KripkeError> {
        let atoms: Vec<String> = atoms.iter().cloned().collect();
        check_budget(
            max_worlds,
            atoms.len(),
            &SearchOptions {
                max_models,
                jobs: 1,
            },
        )?;
        let mut frames = Vec::new();
        for n in 1..=max_worlds {
            for r in 0..reflexive_frame_count(n) {
                let fr = Frame::nth_reflexive(n, r);
                if class.admits(&fr) {
                    frames.push(fr);
                }
            }
        }
        Ok(ModelSpace { atoms, frames })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    /// Number of (frame, valuation) entries.
    pub fn len(&self) -> usize {
        self.frames
            .iter()
            .map(|f| 1usize << (f.len() * self.atoms.len()))
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn compile(&self, f: &Formula) -> Compiled {
        Compiled::new(f, &self.atoms)
    }

    /// Truth sets of `f` for every entry, in enumeration order.
    pub fn signature(&self, f: &Compiled) -> Vec<u64> {
        let k = self.atoms.len();
        let mut out = Vec::with_capacity(self.len());
        for fr in &self.frames {
            let n = fr.len();
            for v in 0..(1u64 << (n * k)) {
                out.push(f.truth_set(&fr.succ, &atom_masks(v, n, k)));
            }
        }
        out
    }

    /// Rebuilds the model for entry `index` with the given actual world.
    pub fn model(&self, index: usize, actual: usize) -> KripkeModel {
        let k = self.atoms.len();
        let mut rest = index;
        for fr in &self.frames {
            let count = 1usize << (fr.len() * k);
            if rest < count {
                let masks = atom_masks(rest as u64, fr.len(), k);
                let valuation = self.atoms.iter().cloned().zip(masks).collect();
                return KripkeModel::from_parts(fr.clone(), actual, valuation);
            }
            rest -= count;
        }
        panic!("model index {index} out of range");
    }

    /// First (entry, world) where `premise` holds and `conclusion` fails.
    pub fn first_violation(premise: &[u64], conclusion: &[u64]) -> Option<(usize, usize)> {
        premise
            .iter()
            .zip(conclusion)
            .enumerate()
            .find_map(|(i, (&a, &b))| {
                let bad = a & !b;
                (bad != 0).then(|| (i, bad.trailing_zeros() as usize))
            })
    }

    /// Like [`ModelSpace::first_violation`], evaluating `conclusion` only on
    /// entries where the premise holds somewhere.
    pub fn first_violation_against(
        &self,
        premise: &[u64],
        conclusion: &Compiled,
    ) -> Option<(usize, usize)> {
        let k = self.atoms.len();
        let mut index = 0;
        for fr in &self.frames {
            let n = fr.len();
            for v in 0..(1u64 << (n * k)) {
                let a = premise[index];
                if a != 0 {
                    let bad = a & !conclusion.truth_set(&fr.succ, &atom_masks(v, n, k));
                    if bad != 0 {
                        return Some((index, bad.trailing_zeros() as usize));
                    }
                }
                index += 1;
            }
        }
        None
    }

    /// A model where `f` and `g` differ at the actual world, if any.
    pub fn distinguish(&self, f: &Formula, g: &Formula) -> Option<KripkeModel> {
        let (cf, cg) = (self.compile(f), self.compile(g));
        let (sf, sg) = (self.signature(&cf), self.signature(&cg));
        sf.iter().zip(&sg).enumerate().find_map(|(i, (a, b))| {
            let diff = a ^ b;
            (diff != 0).then(|| self.model(i, diff.trailing_zeros() as usize))
        })
    }
}

/// Whether `f` and `g` agree at every world of every model in the space.
pub fn equivalent_in(space: &ModelSpace, f: &Formula, g: &Formula) -> bool {
    space.distinguish(f, g).is_none()
}

// ---------------------------------------------------------------------------
// Frame correspondence

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameProperty {
    Transitive,
}

impl FrameProperty {
    pub fn holds(&self, frame: &Frame) -> bool {
        match self {
            FrameProperty::Transitive => frame.is_transitive(),
        }
    }
}

/// A frame on which schema validity and the property disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameWitness {
    pub worlds: usize,
    pub edges: Vec<(usize, usize)>,
    pub schema_holds: bool,
    pub has_property: bool,
    /// A falsifying model when the schema fails on the frame.
    pub falsifier: Option<KripkeModel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub frames_checked: usize,
    pub frames_with_property: usize,
    pub frames_validating_schema: usize,
    /// Frames where the two sides disagree; empty iff the correspondence holds.
    pub failures: Vec<FrameWitness>,
}

impl CorrespondenceReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The first (valuation, world) at which `schema` fails on `frame`, as a model.
pub fn frame_falsifier(schema: &Formula, frame: &Frame) -> Option<KripkeModel> {
    let atoms: Vec<String> = schema.atoms().into_iter().collect();
    let compiled = Compiled::new(schema, &atoms);
    let (n, k) = (frame.len(), atoms.len());
    let all = full_mask(n);
    for v in 0..(1u64 << (n * k)) {
        let masks = atom_masks(v, n, k);
        let t = compiled.truth_set(&frame.succ, &masks);
        if t != all {
            let w = (all & !t).trailing_zeros() as usize;
            let valuation = atoms.iter().cloned().zip(masks).collect();
            return Some(KripkeModel::from_parts(frame.clone(), w, valuation));
        }
    }
    None
}

/// Compares frame-validity of `schema` with `property` on every reflexive
/// frame with at most `max_worlds` worlds.
pub fn correspondence_check(
    schema: &Formula,
    property: FrameProperty,
    max_worlds: usize,
) -> Result<CorrespondenceReport, KripkeError> {
    check_budget(max_worlds, schema.atoms().len(), &SearchOptions::default())?;
    let mut report = CorrespondenceReport {
        frames_checked: 0,
        frames_with_property: 0,
        frames_validating_schema: 0,
        failures: Vec::new(),
    };
    for n in 1..=max_worlds {
        for r in 0..reflexive_frame_count(n) {
            let frame = Frame::nth_reflexive(n, r);
            let falsifier = frame_falsifier(schema, &frame);
            let schema_holds = falsifier.is_none();
            let has_property = property.holds(&frame);
            report.frames_checked += 1;
            report.frames_with_property += has_property as usize;
            report.frames_validating_schema += schema_holds as usize;
            if schema_holds != has_property {
                report.failures.push(FrameWitness {
                    worlds: n,
                    edges: frame.edges(),
                    schema_holds,
                    has_property,
                    falsifier,
                });
            }
        }
    }
    Ok(report)
}
