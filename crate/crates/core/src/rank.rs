//! The chain of exceptional sub-bases and the ranks it induces on formulas.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::formula::Formula;
use crate::kb::{is_exceptional_in, KnowledgeBase};
use crate::sat::{FormulaSet, Sat, SatConfig};

/// Rank of a formula: a level index, or `NoRank` when the formula is
/// exceptional for every level. `NoRank` orders above every finite rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Finite(usize),
    NoRank,
}

impl Rank {
    pub fn finite(self) -> Option<usize> {
        match self {
            Rank::Finite(n) => Some(n),
            Rank::NoRank => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Rank::Finite(_))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::NoRank => f.write_str("none"),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(n) => s.serialize_u64(*n as u64),
            Rank::NoRank => s.serialize_none(),
        }
    }
}

/// `C₀ = K`, `C_{i+1} = E(C_i)`, stopped at the first level with
/// `E(C_k) = C_k`. Repeated fixpoint levels are not stored, so `levels`
/// strictly decreases and its last element is the fixpoint.
#[derive(Debug, Clone)]
pub struct RankPartition {
    levels: Vec<KnowledgeBase>,
    materials: Vec<FormulaSet>,
    sat_calls: u64,
}

impl RankPartition {
    pub fn new(k: &KnowledgeBase, sat: &mut Sat) -> Self {
        let before = sat.calls();
        let mut levels = vec![k.clone()];
        let mut materials = vec![k.material()];
        loop {
            let current = levels.last().expect("at least one level");
            let material = materials.last().expect("one material set per level");
            let next = current.filter(|_, a| is_exceptional_in(material, &a.antecedent, sat));
            if next.len() == current.len() {
                break;
            }
            materials.push(next.material());
            levels.push(next);
        }
        RankPartition {
            levels,
            materials,
            sat_calls: sat.calls() - before,
        }
    }

    pub fn levels(&self) -> &[KnowledgeBase] {
        &self.levels
    }

    /// Material counterpart of each level.
    pub fn materials(&self) -> &[FormulaSet] {
        &self.materials
    }

    pub fn fixpoint(&self) -> &KnowledgeBase {
        self.levels.last().expect("at least one level")
    }

    /// Index of the fixpoint level.
    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    /// Satisfiability decisions spent building the partition.
    pub fn sat_calls(&self) -> u64 {
        self.sat_calls
    }

    /// Least `i` such that `formula` is not exceptional for `C_i`.
    pub fn rank(&self, formula: &Formula, sat: &mut Sat) -> Rank {
        self.materials
            .iter()
            .position(|m| !is_exceptional_in(m, formula, sat))
            .map_or(Rank::NoRank, Rank::Finite)
    }
}

pub fn partition(k: &KnowledgeBase) -> RankPartition {
    RankPartition::new(k, &mut Sat::new(SatConfig::default()))
}

pub fn rank(p: &RankPartition, formula: &Formula) -> Rank {
    p.rank(formula, &mut Sat::default())
}
