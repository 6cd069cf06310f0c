//! Conditional assertions and knowledge bases.

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Signature, SignatureError};
use crate::parse::{parse_assertion, ParseError};
use crate::sat::{FormulaSet, Sat};

/// A defeasible rule `antecedent |~ consequent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConditionalAssertion {
    pub antecedent: Formula,
    pub consequent: Formula,
}

impl ConditionalAssertion {
    pub fn new(antecedent: Formula, consequent: Formula) -> Self {
        ConditionalAssertion {
            antecedent,
            consequent,
        }
    }

    /// The classical implication `antecedent -> consequent`.
    pub fn material_counterpart(&self) -> Formula {
        Formula::implies(self.antecedent.clone(), self.consequent.clone())
    }
}

impl fmt::Display for ConditionalAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |~ {}", self.antecedent, self.consequent)
    }
}

pub fn material_counterpart(a: &ConditionalAssertion) -> Formula {
    a.material_counterpart()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbParseError {
    #[error("line {line}: {source}")]
    Syntax {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: {source}")]
    Signature {
        line: usize,
        #[source]
        source: SignatureError,
    },
    #[error("line {line}: `vars:` header must precede all assertions")]
    LateHeader { line: usize },
}

/// A finite, duplicate-free list of conditional assertions over a signature.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnowledgeBase {
    assertions: Vec<ConditionalAssertion>,
    signature: Signature,
}

impl KnowledgeBase {
    pub fn new(assertions: Vec<ConditionalAssertion>) -> Self {
        Self::with_signature(Signature::empty(), assertions)
    }

    /// Keeps the first occurrence of each assertion; `signature` is extended
    /// with any variable it is missing.
    pub fn with_signature(signature: Signature, assertions: Vec<ConditionalAssertion>) -> Self {
        let mut kept: Vec<ConditionalAssertion> = Vec::with_capacity(assertions.len());
        let mut signature = signature;
        for a in assertions {
            if kept.contains(&a) {
                continue;
            }
            signature = signature
                .extended_with(&a.antecedent)
                .extended_with(&a.consequent);
            kept.push(a);
        }
        KnowledgeBase {
            assertions: kept,
            signature,
        }
    }

    /// Parses the line-oriented KB format: one `a |~ b` per line, `#`
    /// comments, blank lines, and an optional leading `vars: x y z` header.
    pub fn parse(text: &str) -> Result<Self, KbParseError> {
        let mut signature = Signature::empty();
        let mut assertions = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix("vars:") {
                if !assertions.is_empty() {
                    return Err(KbParseError::LateHeader { line });
                }
                let pinned = Signature::new(rest.split_whitespace())
                    .map_err(|source| KbParseError::Signature { line, source })?;
                signature = signature.extended(pinned.vars());
                continue;
            }
            let a = parse_assertion(raw).map_err(|source| KbParseError::Syntax { line, source })?;
            assertions.push(a);
        }
        Ok(Self::with_signature(signature, assertions))
    }

    pub fn assertions(&self) -> &[ConditionalAssertion] {
        &self.assertions
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn len(&self) -> usize {
        self.assertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assertions.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ConditionalAssertion> {
        self.assertions.iter()
    }

    /// A copy with `a` appended (no-op if already present).
    pub fn with(&self, a: ConditionalAssertion) -> KnowledgeBase {
        let mut all = self.assertions.clone();
        all.push(a);
        Self::with_signature(self.signature.clone(), all)
    }

    /// Sub-base keeping the assertions selected by `keep`, over the same
    /// signature and in the same order.
    pub fn filter<F>(&self, mut keep: F) -> KnowledgeBase
    where
        F: FnMut(usize, &ConditionalAssertion) -> bool,
    {
        KnowledgeBase {
            assertions: self
                .assertions
                .iter()
                .enumerate()
                .filter(|(i, a)| keep(*i, a))
                .map(|(_, a)| a.clone())
                .collect(),
            signature: self.signature.clone(),
        }
    }

    pub fn is_subset_of(&self, other: &KnowledgeBase) -> bool {
        self.assertions.iter().all(|a| other.assertions.contains(a))
    }

    pub fn material(&self) -> FormulaSet {
        FormulaSet::with_signature(
            self.signature.clone(),
            self.assertions
                .iter()
                .map(ConditionalAssertion::material_counterpart)
                .collect(),
        )
    }

    /// `true` iff the material counterpart entails `¬formula`.
    pub fn is_exceptional(&self, formula: &Formula, sat: &mut Sat) -> bool {
        is_exceptional_in(&self.material(), formula, sat)
    }

    /// The assertions whose antecedent is exceptional for this base.
    pub fn exceptional_subset(&self, sat: &mut Sat) -> KnowledgeBase {
        let material = self.material();
        self.filter(|_, a| is_exceptional_in(&material, &a.antecedent, sat))
    }
}

impl fmt::Display for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.assertions {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a KnowledgeBase {
    type Item = &'a ConditionalAssertion;
    type IntoIter = std::slice::Iter<'a, ConditionalAssertion>;

    fn into_iter(self) -> Self::IntoIter {
        self.assertions.iter()
    }
}

pub(crate) fn is_exceptional_in(material: &FormulaSet, formula: &Formula, sat: &mut Sat) -> bool {
    // query variables outside the signature extend it for this call only
    !sat.satisfiable(&material.with(formula.clone()))
}

pub fn material_kb(k: &KnowledgeBase) -> FormulaSet {
    k.material()
}

pub fn is_exceptional(k: &KnowledgeBase, formula: &Formula) -> bool {
    k.is_exceptional(formula, &mut Sat::default())
}

pub fn exceptional_subset(k: &KnowledgeBase) -> KnowledgeBase {
    k.exceptional_subset(&mut Sat::default())
}
