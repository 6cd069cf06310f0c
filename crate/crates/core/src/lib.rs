//! Rational closure and preferential entailment for finite conditional
//! knowledge bases.
//!
//! A knowledge base is a set of defeasible rules `α |~ β` ("if α, normally
//! β"). This crate decides whether an assertion is in the base's rational
//! closure, whether it is preferentially entailed, and exposes the rank
//! machinery behind both: the chain of exceptional sub-bases, formula ranks,
//! the canonical ranked model, witnesses of non-entailment and exact
//! ε-probability semantics.
//!
//! ```
//! use ratclos::{fixtures, parse_assertion, in_rational_closure};
//!
//! let kb = fixtures::penguin();
//! let q = parse_assertion("bird & penguin |~ !fly").unwrap();
//! assert!(in_rational_closure(&kb, &q).answer);
//! ```

pub mod cli;
pub mod closure;
pub mod epsilon;
pub mod fixtures;
pub mod formula;
pub mod kb;
pub mod model;
pub mod parse;
pub mod rank;
pub mod sat;
pub mod witness;

pub use closure::{
    in_rational_closure, pref_entails, pref_entails_query, QueryResult, RationalClosure,
};
pub use epsilon::{conditional_probability, epsilon_distribution, EpsilonDistribution};
pub use formula::{eval, free_vars, Formula, Signature, World};
pub use kb::{ConditionalAssertion, KnowledgeBase};
pub use model::{
    build_closure_model, enumerate_ranked_models, oracle_pref_entails, OracleConfig,
    RankedWorldModel,
};
pub use parse::{parse_assertion, parse_formula, ParseError};
pub use rank::{partition, rank, Rank, RankPartition};
pub use sat::{entails, enumerate_models, satisfiable, FormulaSet, Sat, SatConfig};
pub use witness::{find_witness, verify_witness, Witness, WitnessStep};
