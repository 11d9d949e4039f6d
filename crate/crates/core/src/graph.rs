//! Existential graphs with continuous `( )` and broken `{ }` cuts.
//!
//! Grammar:
//!
//! ```text
//! graph   ::= element*
//! element ::= atom | "(" graph ")" | "{" graph "}"
//! atom    ::= [a-z][a-zA-Z0-9_]*
//! ```
//!
//! Whitespace separates elements and is otherwise ignored. The empty graph is
//! the blank sheet λ.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::formula::is_atom_name;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CutKind {
    Continuous,
    Broken,
}

/// Elements order atoms first, then continuous cuts, then broken cuts; this is
/// the order used by [`Graph::canonical_form`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Atom(String),
    Ccut(Graph),
    Bcut(Graph),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph(pub Vec<Element>);

impl Element {
    pub fn atom(name: &str) -> Element {
        Element::Atom(name.to_string())
    }

    /// `*G`, written `({G})`.
    pub fn strong(g: Graph) -> Element {
        Element::Ccut(Graph(vec![Element::Bcut(g)]))
    }

    pub fn cut(kind: CutKind, g: Graph) -> Element {
        match kind {
            CutKind::Continuous => Element::Ccut(g),
            CutKind::Broken => Element::Bcut(g),
        }
    }

    pub fn cut_kind(&self) -> Option<CutKind> {
        match self {
            Element::Atom(_) => None,
            Element::Ccut(_) => Some(CutKind::Continuous),
            Element::Bcut(_) => Some(CutKind::Broken),
        }
    }

    pub fn contents(&self) -> Option<&Graph> {
        match self {
            Element::Atom(_) => None,
            Element::Ccut(g) | Element::Bcut(g) => Some(g),
        }
    }

    pub fn contents_mut(&mut self) -> Option<&mut Graph> {
        match self {
            Element::Atom(_) => None,
            Element::Ccut(g) | Element::Bcut(g) => Some(g),
        }
    }

    /// The `G` of a strong element `({G})`.
    pub fn strong_body(&self) -> Option<&Graph> {
        match self {
            Element::Ccut(Graph(inner)) => match inner.as_slice() {
                [Element::Bcut(g)] => Some(g),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_strong(&self) -> bool {
        self.strong_body().is_some()
    }

    pub fn size(&self) -> usize {
        match self {
            Element::Atom(_) => 1,
            Element::Ccut(g) | Element::Bcut(g) => 1 + g.size(),
        }
    }

    pub fn complexity(&self) -> usize {
        match self {
            Element::Atom(_) => 0,
            Element::Ccut(g) | Element::Bcut(g) => 1 + g.complexity(),
        }
    }

    pub fn canonical_form(&self) -> Element {
        match self {
            Element::Atom(_) => self.clone(),
            Element::Ccut(g) => Element::Ccut(g.canonical_form()),
            Element::Bcut(g) => Element::Bcut(g.canonical_form()),
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            Element::Atom(p) => out.push_str(p),
            Element::Ccut(g) => {
                out.push('(');
                g.write(out);
                out.push(')');
            }
            Element::Bcut(g) => {
                out.push('{');
                g.write(out);
                out.push('}');
            }
        }
    }
}

impl Graph {
    pub fn empty() -> Graph {
        Graph(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    /// Node count: one per atom and per cut.
    pub fn size(&self) -> usize {
        self.0.iter().map(Element::size).sum()
    }

    /// The measure C: 0 for λ and atoms, one more than the contents for a
    /// cut, one more than the largest element for a juxtaposition.
    pub fn complexity(&self) -> usize {
        match self.0.as_slice() {
            [] => 0,
            [e] => e.complexity(),
            es => 1 + es.iter().map(Element::complexity).max().unwrap_or(0),
        }
    }

    pub fn canonical_form(&self) -> Graph {
        let mut es: Vec<Element> = self.0.iter().map(Element::canonical_form).collect();
        es.sort();
        Graph(es)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        for e in &self.0 {
            match e {
                Element::Atom(p) => {
                    out.insert(p.clone());
                }
                Element::Ccut(g) | Element::Bcut(g) => g.collect_atoms(out),
            }
        }
    }

    /// The region reached by descending through the cuts at `path`.
    pub fn region(&self, path: &[usize]) -> Result<&Graph, PathError> {
        let mut g = self;
        for (depth, &i) in path.iter().enumerate() {
            g =
                g.0.get(i)
                    .and_then(Element::contents)
                    .ok_or_else(|| PathError::new(path, depth))?;
        }
        Ok(g)
    }

    pub fn region_mut(&mut self, path: &[usize]) -> Result<&mut Graph, PathError> {
        let mut g = self;
        for (depth, &i) in path.iter().enumerate() {
            g =
                g.0.get_mut(i)
                    .and_then(Element::contents_mut)
                    .ok_or_else(|| PathError::new(path, depth))?;
        }
        Ok(g)
    }

    fn write(&self, out: &mut String) {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            e.write(out);
        }
    }
}

impl From<Vec<Element>> for Graph {
    fn from(es: Vec<Element>) -> Graph {
        Graph(es)
    }
}

pub fn ac_equal(a: &Graph, b: &Graph) -> bool {
    a.canonical_form() == b.canonical_form()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("path {path:?} leaves the graph at step {depth}")]
pub struct PathError {
    pub path: Vec<usize>,
    pub depth: usize,
}

impl PathError {
    fn new(path: &[usize], depth: usize) -> PathError {
        PathError {
            path: path.to_vec(),
            depth,
        }
    }
}

/// The cuts enclosing a region, outermost first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Context {
    pub kinds: Vec<CutKind>,
}

impl Context {
    pub fn sheet() -> Context {
        Context::default()
    }

    pub fn push(&self, kind: CutKind) -> Context {
        let mut kinds = self.kinds.clone();
        kinds.push(kind);
        Context { kinds }
    }

    pub fn depth(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_even(&self) -> bool {
        self.kinds.len().is_multiple_of(2)
    }

    pub fn is_odd(&self) -> bool {
        !self.is_even()
    }

    /// No broken cut encloses the region.
    pub fn ncc(&self) -> bool {
        self.kinds.iter().all(|k| *k == CutKind::Continuous)
    }

    /// Some broken cut encloses the region.
    pub fn one_cq(&self) -> bool {
        !self.ncc()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContextReport {
    pub context: Vec<CutKind>,
    pub parity: &'static str,
    pub ncc: bool,
    #[serde(rename = "1cq")]
    pub one_cq: bool,
}

pub fn region_context(g: &Graph, path: &[usize]) -> Result<Context, PathError> {
    let mut kinds = Vec::with_capacity(path.len());
    let mut cur = g;
    for (depth, &i) in path.iter().enumerate() {
        let e = cur.0.get(i).ok_or_else(|| PathError::new(path, depth))?;
        kinds.push(e.cut_kind().ok_or_else(|| PathError::new(path, depth))?);
        cur = e.contents().expect("cuts have contents");
    }
    Ok(Context { kinds })
}

impl Context {
    pub fn report(&self) -> ContextReport {
        ContextReport {
            context: self.kinds.clone(),
            parity: if self.is_even() { "even" } else { "odd" },
            ncc: self.ncc(),
            one_cq: self.one_cq(),
        }
    }
}

// ---------------------------------------------------------------------------
// Text form

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphParseError {
    #[error("unexpected {found:?} at byte {offset}")]
    Unexpected { offset: usize, found: char },
    #[error("unclosed {open:?} opened at byte {offset}")]
    Unclosed { offset: usize, open: char },
    #[error("bad atom {text:?} at byte {offset}")]
    BadAtom { offset: usize, text: String },
}

impl GraphParseError {
    pub fn offset(&self) -> usize {
        match self {
            GraphParseError::Unexpected { offset, .. }
            | GraphParseError::Unclosed { offset, .. }
            | GraphParseError::BadAtom { offset, .. } => *offset,
        }
    }
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphParseError> {
    // stack of (open delimiter, its offset, elements collected so far)
    let mut stack: Vec<(char, usize, Vec<Element>)> = Vec::new();
    let mut top: Vec<Element> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().unwrap();
        match c {
            c if c.is_whitespace() => i += c.len_utf8(),
            '(' | '{' => {
                stack.push((c, i, std::mem::take(&mut top)));
                i += 1;
            }
            ')' | '}' => {
                let want = if c == ')' { '(' } else { '{' };
                match stack.pop() {
                    Some((open, _, outer)) if open == want => {
                        let inner = Graph(std::mem::replace(&mut top, outer));
                        top.push(if c == ')' {
                            Element::Ccut(inner)
                        } else {
                            Element::Bcut(inner)
                        });
                        i += 1;
                    }
                    _ => {
                        return Err(GraphParseError::Unexpected {
                            offset: i,
                            found: c,
                        })
                    }
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                if !is_atom_name(word) {
                    return Err(GraphParseError::BadAtom {
                        offset: start,
                        text: word.to_string(),
                    });
                }
                top.push(Element::Atom(word.to_string()));
            }
            _ => {
                return Err(GraphParseError::Unexpected {
                    offset: i,
                    found: c,
                })
            }
        }
    }
    if let Some((open, offset, _)) = stack.pop() {
        return Err(GraphParseError::Unclosed { offset, open });
    }
    Ok(Graph(top))
}

pub fn print_graph(g: &Graph) -> String {
    let mut out = String::new();
    g.write(&mut out);
    out
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_graph(self))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write(&mut out);
        f.write_str(&out)
    }
}

impl FromStr for Graph {
    type Err = GraphParseError;

    fn from_str(s: &str) -> Result<Graph, GraphParseError> {
        parse_graph(s)
    }
}

// ---------------------------------------------------------------------------
// Enumeration

/// Every canonical graph over `atoms` with node size at most `max_size`, in
/// order of size and then canonical order.
pub fn enumerate_graphs(atoms: &[&str], max_size: usize) -> Vec<Graph> {
    let table = SizeTable::new(atoms, max_size);
    (0..=max_size)
        .flat_map(|n| table.graphs[n].clone())
        .collect()
}

struct SizeTable {
    /// canonical graphs with exactly n nodes
    graphs: Vec<Vec<Graph>>,
}

impl SizeTable {
    fn new(atoms: &[&str], max_size: usize) -> SizeTable {
        let mut atoms: Vec<&str> = atoms.to_vec();
        atoms.sort();
        atoms.dedup();
        let mut graphs: Vec<Vec<Graph>> = vec![vec![Graph::empty()]];
        // elements[n] = elements of exactly n nodes
        let mut elements: Vec<Vec<Element>> = vec![vec![]];
        for n in 1..=max_size {
            let mut es: Vec<Element> = Vec::new();
            if n == 1 {
                es.extend(atoms.iter().map(|a| Element::atom(a)));
            }
            for g in &graphs[n - 1] {
                es.push(Element::Ccut(g.clone()));
                es.push(Element::Bcut(g.clone()));
            }
            es.sort();
            elements.push(es);

            // multisets of elements summing to n, emitted as sorted sequences
            let mut pool: Vec<&Element> = elements[1..=n].iter().flatten().collect();
            pool.sort();
            let mut found = Vec::new();
            let mut current = Vec::new();
            multisets(&pool, 0, n, &mut current, &mut found);
            found.sort();
            graphs.push(found);
        }
        SizeTable { graphs }
    }
}

fn multisets(
    pool: &[&Element],
    from: usize,
    remaining: usize,
    current: &mut Vec<Element>,
    out: &mut Vec<Graph>,
) {
    if remaining == 0 {
        out.push(Graph(current.clone()));
        return;
    }
    for i in from..pool.len() {
        let s = pool[i].size();
        if s <= remaining {
            current.push(pool[i].clone());
            multisets(pool, i, remaining - s, current, out);
            current.pop();
        }
    }
}
