//! The GT formula language.
//!
//! Primitive connectives are verum `T`, weak negation `-`, and the conditional
//! `->`. Classical negation `~` and conjunction `&` are kept as first-class
//! nodes because the graph translation gives them their own shapes; every other
//! connective (`+`, `<>`, `|`, `<->`) is expanded while parsing.
//!
//! Grammar, tightest binding first:
//!
//! ```text
//! iff     ::= impl ( "<->" impl )*                (left-assoc)
//! impl    ::= or_expr ( "->" impl )?              (right-assoc)
//! or_expr ::= and_expr ( "|" and_expr )*          (left-assoc)
//! and_expr::= unary ( "&" unary )*                (left-assoc)
//! unary   ::= ( "-" | "~" | "+" | "<>" ) unary | primary
//! primary ::= "T" | atom | "(" iff ")"
//! atom    ::= [a-z][a-zA-Z0-9_]*
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    /// Verum, written `T`.
    Top,
    /// Weak negation `-X`: some accessible world falsifies `X`.
    WeakNeg(Box<Formula>),
    /// Classical negation `~X`, definitionally `X -> -T`.
    ClassNeg(Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    Conj(Box<Formula>, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown token {found:?} at byte {offset}")]
    UnknownToken { offset: usize, found: char },
    #[error("unexpected {found} at byte {offset}, expected {expected}")]
    Unexpected {
        offset: usize,
        found: String,
        expected: &'static str,
    },
    #[error("unexpected end of input at byte {offset}, expected {expected}")]
    UnexpectedEnd {
        offset: usize,
        expected: &'static str,
    },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::UnknownToken { offset, .. }
            | ParseError::Unexpected { offset, .. }
            | ParseError::UnexpectedEnd { offset, .. } => *offset,
        }
    }
}

/// Returns true if `name` is a legal atom identifier.
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn weak_neg(f: Formula) -> Formula {
        Formula::WeakNeg(Box::new(f))
    }

    pub fn class_neg(f: Formula) -> Formula {
        Formula::ClassNeg(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::Conj(Box::new(a), Box::new(b))
    }

    /// Total falsehood, `-T`.
    pub fn falsum() -> Formula {
        Formula::weak_neg(Formula::Top)
    }

    /// Strong affirmation `+X`, stored as `~-X`.
    pub fn necessarily(f: Formula) -> Formula {
        Formula::class_neg(Formula::weak_neg(f))
    }

    /// Weak affirmation `<>X`, stored as `-~X`.
    pub fn possibly(f: Formula) -> Formula {
        Formula::weak_neg(Formula::class_neg(f))
    }

    /// `X | Y`, stored as `~X -> Y`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::implies(Formula::class_neg(a), b)
    }

    /// `X <-> Y`, stored as `(X -> Y) & (Y -> X)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// Rewrites `~` and `&` away, leaving only atoms, `T`, `-` and `->`.
    pub fn expand_defined(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Top => self.clone(),
            Formula::WeakNeg(x) => Formula::weak_neg(x.expand_defined()),
            Formula::Impl(a, b) => Formula::implies(a.expand_defined(), b.expand_defined()),
            Formula::ClassNeg(x) => Formula::implies(x.expand_defined(), Formula::falsum()),
            Formula::Conj(a, b) => {
                // X & Y = ~(X -> ~Y)
                let inner = Formula::implies(
                    a.expand_defined(),
                    Formula::implies(b.expand_defined(), Formula::falsum()),
                );
                Formula::implies(inner, Formula::falsum())
            }
        }
    }

    /// Complexity measure K. `~` counts like `-`.
    pub fn complexity(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top => 0,
            Formula::WeakNeg(x) | Formula::ClassNeg(x) => 1 + x.complexity(),
            Formula::Impl(a, b) | Formula::Conj(a, b) => 1 + a.complexity().max(b.complexity()),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top => 1,
            Formula::WeakNeg(x) | Formula::ClassNeg(x) => 1 + x.size(),
            Formula::Impl(a, b) | Formula::Conj(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Top => {}
            Formula::WeakNeg(x) | Formula::ClassNeg(x) => x.collect_atoms(out),
            Formula::Impl(a, b) | Formula::Conj(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Top => vec![],
            Formula::WeakNeg(x) | Formula::ClassNeg(x) => vec![x],
            Formula::Impl(a, b) | Formula::Conj(a, b) => vec![a, b],
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Top,
    Atom(String),
    Minus,
    Tilde,
    Plus,
    Diamond,
    Arrow,
    Amp,
    Bar,
    Iff,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Top => "`T`".into(),
            Tok::Atom(a) => format!("atom `{a}`"),
            Tok::Minus => "`-`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'~' => {
                i += 1;
                Tok::Tilde
            }
            b'+' => {
                i += 1;
                Tok::Plus
            }
            b'&' => {
                i += 1;
                Tok::Amp
            }
            b'|' => {
                i += 1;
                Tok::Bar
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'-' => {
                i += 1;
                Tok::Minus
            }
            b'<' if src[i..].starts_with("<->") => {
                i += 3;
                Tok::Iff
            }
            b'<' if src[i..].starts_with("<>") => {
                i += 2;
                Tok::Diamond
            }
            b'T' if !bytes
                .get(i + 1)
                .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') =>
            {
                i += 1;
                Tok::Top
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Atom(src[start..i].to_string())
            }
            _ => {
                let found = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::UnknownToken { offset: i, found });
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((offset, t)) => ParseError::Unexpected {
                offset: *offset,
                found: t.describe(),
                expected,
            },
            None => ParseError::UnexpectedEnd {
                offset: self.end,
                expected,
            },
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let wrap: fn(Formula) -> Formula = match self.peek() {
            Some(Tok::Minus) => Formula::weak_neg,
            Some(Tok::Tilde) => Formula::class_neg,
            Some(Tok::Plus) => Formula::necessarily,
            Some(Tok::Diamond) => Formula::possibly,
            _ => return self.primary(),
        };
        self.pos += 1;
        Ok(wrap(self.unary()?))
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        const EXPECTED: &str = "a formula";
        match self.peek().cloned() {
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::Atom(a)) => {
                self.pos += 1;
                Ok(Formula::Atom(a))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("`)`"));
                }
                Ok(inner)
            }
            _ => Err(self.error(EXPECTED)),
        }
    }
}

/// Parses formula source text, expanding sugar connectives.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let f = p.iff()?;
    if p.pos != p.toks.len() {
        return Err(p.error("end of input"));
    }
    debug_assert!(p.offset() == src.len());
    Ok(f)
}

// ---------------------------------------------------------------------------
// Printer

// Binding levels for the canonical printer; higher binds tighter.
const PREC_IMPL: u8 = 1;
const PREC_CONJ: u8 = 3;
const PREC_UNARY: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Impl(..) => PREC_IMPL,
        Formula::Conj(..) => PREC_CONJ,
        _ => PREC_UNARY,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut String) {
    if prec(f) < min {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(a) => out.push_str(a),
        Formula::Top => out.push('T'),
        Formula::WeakNeg(x) => {
            out.push('-');
            write_at(x, PREC_UNARY, out);
        }
        Formula::ClassNeg(x) => {
            out.push('~');
            write_at(x, PREC_UNARY, out);
        }
        Formula::Conj(a, b) => {
            write_at(a, PREC_CONJ, out);
            out.push_str(" & ");
            write_at(b, PREC_UNARY, out);
        }
        Formula::Impl(a, b) => {
            write_at(a, PREC_IMPL + 1, out);
            out.push_str(" -> ");
            write_at(b, PREC_IMPL, out);
        }
    }
}

/// Canonical text with minimal parentheses.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(
            p("p -> q -> r"),
            Formula::implies(a("p"), Formula::implies(a("q"), a("r")))
        );
    }

    #[test]
    fn sugar_expands_at_parse_time() {
        assert_eq!(p("+p"), Formula::class_neg(Formula::weak_neg(a("p"))));
        assert_eq!(p("<>p"), Formula::weak_neg(Formula::class_neg(a("p"))));
        assert_eq!(
            p("p | q"),
            Formula::implies(Formula::class_neg(a("p")), a("q"))
        );
        assert_eq!(
            p("p <-> q"),
            Formula::and(
                Formula::implies(a("p"), a("q")),
                Formula::implies(a("q"), a("p"))
            )
        );
    }

    #[test]
    fn precedence_layers() {
        // & binds tighter than |, which binds tighter than ->
        assert_eq!(
            p("p & q | r -> s"),
            Formula::implies(Formula::or(Formula::and(a("p"), a("q")), a("r")), a("s"))
        );
        assert_eq!(p("-p & q"), Formula::and(Formula::weak_neg(a("p")), a("q")));
        assert_eq!(
            p("p & q & r"),
            Formula::and(Formula::and(a("p"), a("q")), a("r"))
        );
    }

    #[test]
    fn dangling_arrow_is_an_error() {
        let err = parse_formula("p ->").unwrap_err();
        assert!(
            matches!(err, ParseError::UnexpectedEnd { offset: 4, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn unknown_token_reports_offset() {
        let err = parse_formula("p $ q").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownToken {
                offset: 2,
                found: '$'
            }
        );
        assert!(parse_formula("P").is_err());
        assert!(parse_formula("(p").is_err());
        assert!(parse_formula("p q").is_err());
        assert!(parse_formula("").is_err());
    }

    #[test]
    fn top_versus_identifiers() {
        assert_eq!(p("T"), Formula::Top);
        assert_eq!(p("-T"), Formula::falsum());
        // `T` followed by identifier characters is not verum
        assert!(parse_formula("Tx").is_err());
        assert_eq!(p("tx"), a("tx"));
        assert_eq!(p("p_1"), a("p_1"));
    }

    #[test]
    fn printer_examples() {
        assert_eq!(
            print_formula(&Formula::implies(a("p"), Formula::implies(a("q"), a("p")))),
            "p -> q -> p"
        );
        assert_eq!(print_formula(&Formula::falsum()), "-T");
        assert_eq!(
            print_formula(&Formula::and(a("p"), Formula::class_neg(a("q")))),
            "p & ~q"
        );
        assert_eq!(print_formula(&p("(p -> q) -> r")), "(p -> q) -> r");
        assert_eq!(print_formula(&p("p & (q & r)")), "p & (q & r)");
        assert_eq!(print_formula(&p("-(p & q)")), "-(p & q)");
        assert_eq!(print_formula(&p("p | q")), "~p -> q");
    }

    #[test]
    fn expand_defined_examples() {
        assert_eq!(
            Formula::class_neg(a("p")).expand_defined(),
            Formula::implies(a("p"), Formula::falsum())
        );
        assert_eq!(a("p").expand_defined(), a("p"));
        assert_eq!(
            Formula::and(a("p"), a("q")).expand_defined(),
            p("(p -> q -> -T) -> -T")
        );
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(p("p").complexity(), 0);
        assert_eq!(p("T").complexity(), 0);
        assert_eq!(p("-p").complexity(), 1);
        assert_eq!(p("p & q").complexity(), 1);
        assert_eq!(p("~p").complexity(), 1);
        assert_eq!(p("(p -> q) & -r").complexity(), 2);
    }

    #[test]
    fn atoms_are_collected_sorted() {
        let got: Vec<_> = p("r -> (p & -q) -> p").atoms().into_iter().collect();
        assert_eq!(got, vec!["p", "q", "r"]);
    }
}
