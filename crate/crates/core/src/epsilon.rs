//! ε-probability assignments induced by a finite ranked model.
//!
//! All worlds of one rank get equal probability, and the total mass of rank
//! `n + 1` is `ε` times the mass of rank `n`. Arithmetic is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::formula::{EvalError, Formula, Signature, World};
use crate::model::RankedWorldModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpsilonError {
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    OutOfRange(BigRational),
    #[error("the model has an empty domain")]
    EmptyDomain,
    #[error("the antecedent has probability zero")]
    ZeroProbability,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonDistribution {
    epsilon: BigRational,
    signature: Signature,
    weights: Vec<BigRational>,
}

impl EpsilonDistribution {
    pub fn new(m: &RankedWorldModel, epsilon: BigRational) -> Result<Self, EpsilonError> {
        if epsilon <= BigRational::zero() || epsilon >= BigRational::one() {
            return Err(EpsilonError::OutOfRange(epsilon));
        }
        let max = m.max_rank().ok_or(EpsilonError::EmptyDomain)?;
        let mut counts = vec![0u64; max + 1];
        for r in m.ranks().iter().flatten() {
            counts[*r] += 1;
        }
        // mass of rank n is ε^n / (1 + ε + … + ε^max)
        let mut powers = Vec::with_capacity(max + 1);
        let mut p = BigRational::one();
        for _ in 0..=max {
            powers.push(p.clone());
            p *= &epsilon;
        }
        let total: BigRational = powers.iter().cloned().sum();
        let per_world: Vec<BigRational> = powers
            .iter()
            .zip(&counts)
            .map(|(pw, &c)| pw / &total / BigRational::from_integer(BigInt::from(c)))
            .collect();
        let weights = m
            .ranks()
            .iter()
            .map(|r| r.map_or_else(BigRational::zero, |r| per_world[r].clone()))
            .collect();
        Ok(EpsilonDistribution {
            epsilon,
            signature: m.signature().clone(),
            weights,
        })
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn weight_of(&self, w: &World) -> Option<&BigRational> {
        if w.signature() != &self.signature {
            return None;
        }
        self.weights.get(w.index() as usize)
    }

    /// Weights by world enumeration index.
    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// Total weight of the worlds satisfying `f`.
    pub fn probability(&self, f: &Formula) -> Result<BigRational, EvalError> {
        let mut sum = BigRational::zero();
        for (i, w) in self.weights.iter().enumerate() {
            if !w.is_zero() && self.signature.world(i as u64).satisfies(f)? {
                sum += w;
            }
        }
        Ok(sum)
    }

    pub fn conditional(
        &self,
        consequent: &Formula,
        antecedent: &Formula,
    ) -> Result<BigRational, EpsilonError> {
        let given = self.probability(antecedent)?;
        if given.is_zero() {
            return Err(EpsilonError::ZeroProbability);
        }
        let both = self.probability(&Formula::and(antecedent.clone(), consequent.clone()))?;
        Ok(both / given)
    }
}

pub fn epsilon_distribution(
    m: &RankedWorldModel,
    epsilon: BigRational,
) -> Result<EpsilonDistribution, EpsilonError> {
    EpsilonDistribution::new(m, epsilon)
}

pub fn conditional_probability(
    d: &EpsilonDistribution,
    consequent: &Formula,
    antecedent: &Formula,
) -> Result<BigRational, EpsilonError> {
    d.conditional(consequent, antecedent)
}
