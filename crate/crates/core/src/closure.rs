//! Rational-closure membership and preferential entailment.
//!
//! `α |~ β` belongs to the rational closure of a finite base exactly when
//! `α` has no rank, or the rank of `α` is strictly below the rank of the
//! refuting formula `α ∧ ¬β`. Preferential entailment reduces to a closure
//! query: `α |~ β` is preferentially entailed by `K` iff `α |~ false` is in
//! the rational closure of `K ∪ {α |~ ¬β}`.

use serde::Serialize;

use crate::formula::Formula;
use crate::kb::{ConditionalAssertion, KnowledgeBase};
use crate::rank::{Rank, RankPartition};
use crate::sat::{Sat, SatConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QueryResult {
    pub answer: bool,
    pub rank_antecedent: Rank,
    /// Rank of `antecedent ∧ ¬consequent`.
    pub rank_refuter: Rank,
    pub sat_calls: u64,
}

/// The refuting formula `α ∧ ¬β` of an assertion.
pub fn refuter(a: &ConditionalAssertion) -> Formula {
    Formula::and(a.antecedent.clone(), Formula::not(a.consequent.clone()))
}

fn decide(rank_antecedent: Rank, rank_refuter: Rank) -> bool {
    // no rank first, then strict comparison with NoRank above every level
    rank_antecedent == Rank::NoRank || rank_antecedent < rank_refuter
}

/// A knowledge base with its rank partition computed once, for repeated
/// queries.
#[derive(Debug, Clone)]
pub struct RationalClosure {
    kb: KnowledgeBase,
    partition: RankPartition,
    config: SatConfig,
}

impl RationalClosure {
    pub fn new(kb: KnowledgeBase) -> Self {
        Self::with_config(kb, SatConfig::default())
    }

    pub fn with_config(kb: KnowledgeBase, config: SatConfig) -> Self {
        let partition = RankPartition::new(&kb, &mut Sat::new(config));
        RationalClosure {
            kb,
            partition,
            config,
        }
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn partition(&self) -> &RankPartition {
        &self.partition
    }

    pub fn rank(&self, formula: &Formula) -> Rank {
        self.partition.rank(formula, &mut Sat::new(self.config))
    }

    /// Answers one query. `sat_calls` counts only the decisions made for
    /// this query; the partition's own cost is in [`RankPartition::sat_calls`].
    pub fn query(&self, a: &ConditionalAssertion) -> QueryResult {
        let mut sat = Sat::new(self.config);
        let rank_antecedent = self.partition.rank(&a.antecedent, &mut sat);
        let rank_refuter = self.partition.rank(&refuter(a), &mut sat);
        QueryResult {
            answer: decide(rank_antecedent, rank_refuter),
            rank_antecedent,
            rank_refuter,
            sat_calls: sat.calls(),
        }
    }

    pub fn contains(&self, a: &ConditionalAssertion) -> bool {
        self.query(a).answer
    }
}

/// Closure membership from scratch; `sat_calls` includes building the
/// partition.
pub fn in_rational_closure_with(
    k: &KnowledgeBase,
    a: &ConditionalAssertion,
    config: SatConfig,
) -> QueryResult {
    let mut sat = Sat::new(config);
    let partition = RankPartition::new(k, &mut sat);
    let rank_antecedent = partition.rank(&a.antecedent, &mut sat);
    let rank_refuter = partition.rank(&refuter(a), &mut sat);
    QueryResult {
        answer: decide(rank_antecedent, rank_refuter),
        rank_antecedent,
        rank_refuter,
        sat_calls: sat.calls(),
    }
}

pub fn in_rational_closure(k: &KnowledgeBase, a: &ConditionalAssertion) -> QueryResult {
    in_rational_closure_with(k, a, SatConfig::default())
}

/// Preferential entailment through the closure of `K ∪ {α |~ ¬β}`. The
/// ranks reported are those of that extended base.
pub fn pref_entails_with(
    k: &KnowledgeBase,
    a: &ConditionalAssertion,
    config: SatConfig,
) -> QueryResult {
    let negated =
        ConditionalAssertion::new(a.antecedent.clone(), Formula::not(a.consequent.clone()));
    let extended = k.with(negated);
    let absurd = ConditionalAssertion::new(a.antecedent.clone(), Formula::False);
    in_rational_closure_with(&extended, &absurd, config)
}

pub fn pref_entails_query(k: &KnowledgeBase, a: &ConditionalAssertion) -> QueryResult {
    pref_entails_with(k, a, SatConfig::default())
}

pub fn pref_entails(k: &KnowledgeBase, a: &ConditionalAssertion) -> bool {
    pref_entails_query(k, a).answer
}
