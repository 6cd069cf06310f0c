//! Certificates of preferential non-entailment.
//!
//! A witness for `α |~ β` over a base `{γ_j |~ δ_j}` is a sequence of pairs
//! `(I_k, f_k)` of index sets and worlds. Writing `ψ_I` for the conjunction
//! of `γ_j → δ_j` over `I` and `φ_I` for the disjunction of `γ_j` over `I`:
//!
//! 1. `f_k ⊨ ψ_{I_k}` for every step;
//! 2. `f_k ⊨ φ_{I_k}` for every step but the last;
//! 3. `I_{k+1} = I_k ∩ { j : f_k ⊭ γ_j }`;
//! 4. `I_0` is the full index set;
//! 5. `f_k ⊭ α` for every step but the last;
//! 6. the last world satisfies `α ∧ ¬β`.
//!
//! The worlds, ordered by step, form a ranked model of the base in which
//! `α |~ β` fails.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{EvalError, Formula, World};
use crate::kb::{ConditionalAssertion, KnowledgeBase};
use crate::sat::{FormulaSet, Sat, SatConfig, SatError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub indices: BTreeSet<usize>,
    pub world: World,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub steps: Vec<WitnessStep>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, step) in self.steps.iter().enumerate() {
            let indices: Vec<String> = step.indices.iter().map(ToString::to_string).collect();
            writeln!(
                f,
                "step {k}: I = {{{}}}; world: {}",
                indices.join(", "),
                step.world
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("index {index} is out of range for a base of {len} assertions")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn psi(k: &KnowledgeBase, indices: &BTreeSet<usize>) -> Formula {
    Formula::conjunction(
        indices
            .iter()
            .map(|&j| k.assertions()[j].material_counterpart()),
    )
}

fn phi(k: &KnowledgeBase, indices: &BTreeSet<usize>) -> Formula {
    Formula::disjunction(
        indices
            .iter()
            .map(|&j| k.assertions()[j].antecedent.clone()),
    )
}

fn full(k: &KnowledgeBase) -> BTreeSet<usize> {
    (0..k.len()).collect()
}

fn successor(
    k: &KnowledgeBase,
    indices: &BTreeSet<usize>,
    world: &World,
) -> Result<BTreeSet<usize>, EvalError> {
    let mut next = BTreeSet::new();
    for &j in indices {
        if !world.satisfies(&k.assertions()[j].antecedent)? {
            next.insert(j);
        }
    }
    Ok(next)
}

/// Checks all six witness conditions.
pub fn verify_witness(
    k: &KnowledgeBase,
    a: &ConditionalAssertion,
    w: &Witness,
) -> Result<bool, WitnessError> {
    for step in &w.steps {
        if let Some(&index) = step.indices.iter().find(|&&j| j >= k.len()) {
            return Err(WitnessError::IndexOutOfRange {
                index,
                len: k.len(),
            });
        }
    }
    let Some((last, interior)) = w.steps.split_last() else {
        return Ok(false);
    };
    if w.steps[0].indices != full(k) {
        return Ok(false);
    }
    for step in &w.steps {
        if !step.world.satisfies(&psi(k, &step.indices))? {
            return Ok(false);
        }
    }
    for (i, step) in interior.iter().enumerate() {
        if !step.world.satisfies(&phi(k, &step.indices))? {
            return Ok(false);
        }
        if successor(k, &step.indices, &step.world)? != w.steps[i + 1].indices {
            return Ok(false);
        }
        if step.world.satisfies(&a.antecedent)? {
            return Ok(false);
        }
    }
    Ok(last.world.satisfies(&crate::closure::refuter(a))?)
}

/// Depth-first search for a witness. Successor index sets are determined by
/// the chosen world, so worlds leading to an index set already explored are
/// skipped.
pub fn find_witness_with(
    k: &KnowledgeBase,
    a: &ConditionalAssertion,
    config: SatConfig,
) -> Result<Option<Witness>, SatError> {
    let signature = k
        .signature()
        .extended_with(&a.antecedent)
        .extended_with(&a.consequent);
    config.check_worlds(signature.len())?;
    let mut search = Search {
        k,
        a,
        signature,
        sat: Sat::new(config),
        explored: HashSet::new(),
        path: Vec::new(),
    };
    if search.step(full(k))? {
        Ok(Some(Witness { steps: search.path }))
    } else {
        Ok(None)
    }
}

pub fn find_witness(
    k: &KnowledgeBase,
    a: &ConditionalAssertion,
) -> Result<Option<Witness>, SatError> {
    find_witness_with(k, a, SatConfig::default())
}

struct Search<'a> {
    k: &'a KnowledgeBase,
    a: &'a ConditionalAssertion,
    signature: crate::formula::Signature,
    sat: Sat,
    explored: HashSet<BTreeSet<usize>>,
    path: Vec<WitnessStep>,
}

impl Search<'_> {
    fn models(&mut self, formulas: Vec<Formula>) -> Result<Vec<World>, SatError> {
        self.sat.enumerate_models(&FormulaSet::with_signature(
            self.signature.clone(),
            formulas,
        ))
    }

    fn step(&mut self, indices: BTreeSet<usize>) -> Result<bool, SatError> {
        let guard = psi(self.k, &indices);
        let terminal = self.models(vec![guard.clone(), crate::closure::refuter(self.a)])?;
        if let Some(world) = terminal.into_iter().next() {
            self.path.push(WitnessStep { indices, world });
            return Ok(true);
        }
        let interior = self.models(vec![
            guard,
            Formula::not(self.a.antecedent.clone()),
            phi(self.k, &indices),
        ])?;
        for world in interior {
            let next = successor(self.k, &indices, &world)
                .expect("worlds range over the working signature");
            if !self.explored.insert(next.clone()) {
                continue;
            }
            self.path.push(WitnessStep {
                indices: indices.clone(),
                world,
            });
            if self.step(next)? {
                return Ok(true);
            }
            self.path.pop();
        }
        Ok(false)
    }
}
