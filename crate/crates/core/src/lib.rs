//! Paraconsistent modal logic GT/GT4 and the existential-graph calculi GET/GET4.
//!
//! - [`formula`]: the formula language, parser and canonical printer.
//! - [`kripke`]: reflexive Kripke models, evaluation and bounded validity search.
//! - [`hilbert`]: axiom-schema matching, proof checking, the deduction theorem.
//! - [`graph`]: existential graphs with continuous and broken cuts.
//! - [`rewrite`]: the graph transformation rules and derivation checking.
//! - [`translate`]: formula/graph translations and their round-trip laws.
//! - [`fixtures`]: the bundled proof, derivation and model corpus.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod fixtures;
pub mod formula;
pub mod graph;
pub mod hilbert;
pub mod kripke;
pub mod rewrite;
pub mod translate;
