//! Ranked world models: satisfaction, exhaustive enumeration, the canonical
//! model of the rational closure, and a model-theoretic entailment oracle.
//!
//! States are identified with worlds, at most one state per world. A model
//! is a partial map from worlds to ranks whose used ranks form `0..=max`.

use std::fmt;

use thiserror::Error;

use crate::formula::{EvalError, Formula, Signature, World};
use crate::kb::{ConditionalAssertion, KnowledgeBase};
use crate::rank::RankPartition;
use crate::sat::{Sat, SatConfig, SatError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("rank vector has {got} entries, expected one per world ({expected})")]
    WrongLength { expected: usize, got: usize },
    #[error("ranks must be contiguous from 0; rank {0} is unused")]
    NonContiguous(usize),
    #[error("signature of {vars} variables exceeds the enumeration guard of {max} variables")]
    TooLarge { vars: usize, max: usize },
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Size guard for exhaustive ranked-model enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_vars: usize,
    /// Highest rank considered; defaults to one less than the world count.
    pub max_rank: Option<usize>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_vars: 3,
            max_rank: None,
        }
    }
}

/// Hard ceiling: world sets are handled as 64-bit masks.
const MASK_VARS: usize = 6;

#[derive(Clone, PartialEq, Eq)]
pub struct RankedWorldModel {
    signature: Signature,
    ranks: Vec<Option<usize>>,
}

impl RankedWorldModel {
    /// `ranks[i]` is the rank of the world with enumeration index `i`.
    pub fn new(signature: Signature, ranks: Vec<Option<usize>>) -> Result<Self, ModelError> {
        let expected = signature
            .world_count()
            .and_then(|c| usize::try_from(c).ok())
            .ok_or(ModelError::TooLarge {
                vars: signature.len(),
                max: 63,
            })?;
        if ranks.len() != expected {
            return Err(ModelError::WrongLength {
                expected,
                got: ranks.len(),
            });
        }
        if let Some(max) = ranks.iter().flatten().max() {
            let mut used = vec![false; max + 1];
            for &r in ranks.iter().flatten() {
                used[r] = true;
            }
            if let Some(gap) = used.iter().position(|u| !u) {
                return Err(ModelError::NonContiguous(gap));
            }
        }
        Ok(RankedWorldModel { signature, ranks })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn ranks(&self) -> &[Option<usize>] {
        &self.ranks
    }

    /// `None` when the world is outside the domain or over another signature.
    pub fn rank_of(&self, w: &World) -> Option<usize> {
        if w.signature() != &self.signature {
            return None;
        }
        self.ranks[w.index() as usize]
    }

    /// Highest used rank; `None` for the empty model.
    pub fn max_rank(&self) -> Option<usize> {
        self.ranks.iter().flatten().max().copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = (World, usize)> + '_ {
        self.ranks
            .iter()
            .enumerate()
            .filter_map(move |(i, r)| r.map(|r| (self.signature.world(i as u64), r)))
    }

    pub fn level(&self, rank: usize) -> Vec<World> {
        self.domain()
            .filter(|(_, r)| *r == rank)
            .map(|(w, _)| w)
            .collect()
    }

    /// Lowest rank of a domain world satisfying `f`.
    pub fn height_of(&self, f: &Formula) -> Result<Option<usize>, EvalError> {
        let mut best: Option<usize> = None;
        for (w, r) in self.domain() {
            if best.is_some_and(|b| b <= r) {
                continue;
            }
            if w.satisfies(f)? {
                best = Some(r);
            }
        }
        Ok(best)
    }

    /// Every minimal-rank domain world satisfying the antecedent satisfies the
    /// consequent; vacuous when no domain world satisfies the antecedent.
    pub fn satisfies(&self, a: &ConditionalAssertion) -> Result<bool, EvalError> {
        let Some(min) = self.height_of(&a.antecedent)? else {
            return Ok(true);
        };
        for (w, r) in self.domain() {
            if r == min && w.satisfies(&a.antecedent)? && !w.satisfies(&a.consequent)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn satisfies_all(&self, k: &KnowledgeBase) -> Result<bool, EvalError> {
        for a in k {
            if !self.satisfies(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for RankedWorldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RankedWorldModel")
            .field("signature", &self.signature)
            .field("ranks", &self.ranks)
            .finish()
    }
}

impl fmt::Display for RankedWorldModel {
    /// One `rank <n>: v=0 w=1 ...` line per domain world, ranks ascending and
    /// worlds in enumeration order within a rank.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(max) = self.max_rank() else {
            return Ok(());
        };
        for rank in 0..=max {
            for w in self.level(rank) {
                writeln!(f, "rank {rank}: {w}")?;
            }
        }
        Ok(())
    }
}

pub fn satisfies(m: &RankedWorldModel, a: &ConditionalAssertion) -> Result<bool, EvalError> {
    m.satisfies(a)
}

/// Lazily enumerates every ranked model over `signature` with ranks at most
/// `max_rank`, each exactly once. Worlds absent from the domain count as a
/// separate value, and only rank patterns contiguous from 0 are emitted.
pub struct RankedModels {
    signature: Signature,
    max_rank: usize,
    // per-world digit: 0 = absent, d = rank d - 1
    digits: Vec<usize>,
    done: bool,
}

impl RankedModels {
    fn advance(&mut self) -> bool {
        for d in self.digits.iter_mut().rev() {
            if *d < self.max_rank + 1 {
                *d += 1;
                return true;
            }
            *d = 0;
        }
        false
    }

    fn contiguous(&self) -> bool {
        let mut used = vec![false; self.max_rank + 1];
        for &d in &self.digits {
            if d > 0 {
                used[d - 1] = true;
            }
        }
        let first_gap = used.iter().position(|u| !u).unwrap_or(used.len());
        used[first_gap..].iter().all(|u| !u)
    }
}

impl Iterator for RankedModels {
    type Item = RankedWorldModel;

    fn next(&mut self) -> Option<RankedWorldModel> {
        while !self.done {
            let emit = self.contiguous();
            let current = emit.then(|| RankedWorldModel {
                signature: self.signature.clone(),
                ranks: self.digits.iter().map(|&d| d.checked_sub(1)).collect(),
            });
            if !self.advance() {
                self.done = true;
            }
            if current.is_some() {
                return current;
            }
        }
        None
    }
}

pub fn enumerate_ranked_models(
    signature: &Signature,
    max_rank: usize,
    config: &OracleConfig,
) -> Result<RankedModels, ModelError> {
    guard(signature, config)?;
    let worlds = 1usize << signature.len();
    Ok(RankedModels {
        signature: signature.clone(),
        max_rank: max_rank.min(worlds - 1),
        digits: vec![0; worlds],
        done: false,
    })
}

fn guard(signature: &Signature, config: &OracleConfig) -> Result<(), ModelError> {
    let max = config.max_vars.min(MASK_VARS);
    if signature.len() > max {
        return Err(ModelError::TooLarge {
            vars: signature.len(),
            max,
        });
    }
    Ok(())
}

/// World sets of one assertion as bitmasks: where the antecedent holds, and
/// where the antecedent holds but the consequent fails.
#[derive(Debug, Clone, Copy)]
struct Masks {
    antecedent: u64,
    refuter: u64,
}

impl Masks {
    fn of(signature: &Signature, a: &ConditionalAssertion) -> Result<Masks, EvalError> {
        let mut m = Masks {
            antecedent: 0,
            refuter: 0,
        };
        for w in signature.worlds() {
            let bit = 1u64 << w.index();
            if w.satisfies(&a.antecedent)? {
                m.antecedent |= bit;
                if !w.satisfies(&a.consequent)? {
                    m.refuter |= bit;
                }
            }
        }
        Ok(m)
    }
}

/// `true` iff every ranked model of `k` satisfies `a`, checked by exhaustive
/// search over ranked models on the joint signature of `k` and `a`.
///
/// Models are grown one rank level at a time. A branch is abandoned as soon
/// as a level violates an assertion of `k` (every extension does too) or
/// first reaches the antecedent of `a` without violating it (every extension
/// satisfies `a`). A level that first reaches the antecedent of `a` with a
/// refuting world closes a countermodel.
pub fn oracle_pref_entails(
    k: &KnowledgeBase,
    a: &ConditionalAssertion,
    config: &OracleConfig,
) -> Result<bool, ModelError> {
    let signature = k
        .signature()
        .extended_with(&a.antecedent)
        .extended_with(&a.consequent);
    guard(&signature, config)?;
    let worlds = 1usize << signature.len();
    let max_rank = config.max_rank.unwrap_or(worlds - 1);
    let base = k
        .iter()
        .map(|c| Masks::of(&signature, c))
        .collect::<Result<Vec<_>, _>>()?;
    let query = Masks::of(&signature, a)?;
    let all = if worlds == 64 {
        u64::MAX
    } else {
        (1u64 << worlds) - 1
    };
    let pending = (0..base.len()).collect::<Vec<_>>();
    Ok(!countermodel(&base, query, all, &pending, 0, max_rank))
}

fn countermodel(
    base: &[Masks],
    query: Masks,
    remaining: u64,
    pending: &[usize],
    depth: usize,
    max_rank: usize,
) -> bool {
    if depth > max_rank {
        return false;
    }
    let mut level = remaining;
    while level != 0 {
        if let Some(rest) = admissible(base, pending, level) {
            if query.antecedent & level != 0 {
                if query.refuter & level != 0 {
                    return true;
                }
            } else if countermodel(base, query, remaining & !level, &rest, depth + 1, max_rank) {
                return true;
            }
        }
        level = (level - 1) & remaining;
    }
    false
}

/// Assertions still unreached after placing `level`, or `None` if the level
/// violates one that it reaches first.
fn admissible(base: &[Masks], pending: &[usize], level: u64) -> Option<Vec<usize>> {
    let mut rest = Vec::with_capacity(pending.len());
    for &j in pending {
        let m = base[j];
        if m.antecedent & level == 0 {
            rest.push(j);
        } else if m.refuter & level != 0 {
            return None;
        }
    }
    Some(rest)
}

/// Ranks each world of `signature` by the first level of the closure
/// partition whose material counterpart it satisfies; worlds satisfying no
/// level are left out.
pub fn build_closure_model_over(
    k: &KnowledgeBase,
    signature: &Signature,
    config: SatConfig,
) -> Result<RankedWorldModel, ModelError> {
    let signature = signature.extended(k.signature().vars());
    config.check_worlds(signature.len())?;
    let partition = RankPartition::new(k, &mut Sat::new(config));
    let mut ranks = Vec::with_capacity(1 << signature.len());
    for w in signature.worlds() {
        let mut rank = None;
        for (i, level) in partition.materials().iter().enumerate() {
            let mut ok = true;
            for f in level.formulas() {
                if !w.satisfies(f)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                rank = Some(i);
                break;
            }
        }
        ranks.push(rank);
    }
    RankedWorldModel::new(signature, ranks)
}

pub fn build_closure_model(k: &KnowledgeBase) -> Result<RankedWorldModel, ModelError> {
    build_closure_model_over(k, k.signature(), SatConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::penguin;
    use crate::parse::parse_assertion;

    fn q(t: &str) -> ConditionalAssertion {
        parse_assertion(t).unwrap()
    }

    fn sig(vars: &[&str]) -> Signature {
        Signature::new(vars.iter().copied()).unwrap()
    }

    #[test]
    fn new_validates() {
        let s = sig(&["p"]);
        assert_eq!(
            RankedWorldModel::new(s.clone(), vec![Some(1), None]),
            Err(ModelError::NonContiguous(0))
        );
        assert_eq!(
            RankedWorldModel::new(s.clone(), vec![Some(0)]),
            Err(ModelError::WrongLength {
                expected: 2,
                got: 1
            })
        );
        assert!(RankedWorldModel::new(s, vec![Some(0), Some(1)]).is_ok());
    }

    #[test]
    fn satisfies_examples() {
        let s = sig(&["p", "q"]);
        let m = RankedWorldModel::new(s.clone(), vec![None, None, None, Some(0)]).unwrap();
        assert_eq!(m.satisfies(&q("p |~ q")), Ok(true));
        let empty = RankedWorldModel::new(s, vec![None; 4]).unwrap();
        assert_eq!(empty.satisfies(&q("true |~ false")), Ok(true));
        assert_eq!(empty.max_rank(), None);
    }

    #[test]
    fn enumeration_counts() {
        let cfg = OracleConfig::default();
        assert_eq!(
            enumerate_ranked_models(&sig(&["p"]), 1, &cfg)
                .unwrap()
                .count(),
            6
        );
        assert_eq!(
            enumerate_ranked_models(&sig(&[]), 0, &cfg).unwrap().count(),
            2
        );
        for m in enumerate_ranked_models(&sig(&["p", "q"]), 3, &cfg).unwrap() {
            if let Some(max) = m.max_rank() {
                for r in 0..=max {
                    assert!(m.ranks().contains(&Some(r)));
                }
            }
        }
        assert!(matches!(
            enumerate_ranked_models(&sig(&["a", "b", "c", "d"]), 1, &cfg),
            Err(ModelError::TooLarge { vars: 4, max: 3 })
        ));
    }

    #[test]
    fn oracle_examples() {
        let cfg = OracleConfig::default();
        let k = KnowledgeBase::new(vec![q("p |~ q")]);
        assert_eq!(oracle_pref_entails(&k, &q("p & r |~ q"), &cfg), Ok(false));
        assert_eq!(
            oracle_pref_entails(&penguin(), &q("penguin |~ bird"), &cfg),
            Ok(true)
        );
        assert_eq!(
            oracle_pref_entails(&KnowledgeBase::default(), &q("true |~ p"), &cfg),
            Ok(false)
        );
        assert_eq!(
            oracle_pref_entails(&penguin(), &q("bird & penguin |~ !fly"), &cfg),
            Ok(true)
        );
    }

    #[test]
    fn penguin_closure_model() {
        let m = build_closure_model(&penguin()).unwrap();
        let dump = m.to_string();
        assert_eq!(
            dump,
            "rank 0: penguin=0 bird=0 fly=0\n\
             rank 0: penguin=0 bird=0 fly=1\n\
             rank 0: penguin=0 bird=1 fly=1\n\
             rank 1: penguin=0 bird=1 fly=0\n\
             rank 1: penguin=1 bird=1 fly=0\n\
             rank 2: penguin=1 bird=0 fly=0\n\
             rank 2: penguin=1 bird=0 fly=1\n\
             rank 2: penguin=1 bird=1 fly=1\n"
        );
        assert_eq!(m.satisfies(&q("bird |~ !penguin")), Ok(true));
    }

    #[test]
    fn trivial_closure_models() {
        let s = sig(&["a", "b"]);
        let m =
            build_closure_model_over(&KnowledgeBase::default(), &s, SatConfig::default()).unwrap();
        assert!(m.ranks().iter().all(|r| *r == Some(0)));

        let k = KnowledgeBase::new(vec![q("true |~ false")]);
        let m = build_closure_model(&k).unwrap();
        assert_eq!(m.ranks(), [None]);
        assert_eq!(m.to_string(), "");
    }
}
