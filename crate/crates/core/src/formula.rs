//! Propositional formulas, signatures and worlds.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not part of the world's signature")]
    UnknownVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate variable `{0}` in signature")]
    Duplicate(String),
    #[error("`{0}` is not a valid variable name")]
    InvalidName(String),
}

/// An ordered set of distinct propositional variables.
///
/// The order is significant: worlds are enumerated by binary counting with
/// the first variable as the most significant bit.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Signature(Arc<IndexSet<String>>);

impl Signature {
    pub fn empty() -> Self {
        Signature::default()
    }

    pub fn new<I, S>(vars: I) -> Result<Self, SignatureError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = IndexSet::new();
        for v in vars {
            let v = v.into();
            if !is_identifier(&v) {
                return Err(SignatureError::InvalidName(v));
            }
            if !set.insert(v.clone()) {
                return Err(SignatureError::Duplicate(v));
            }
        }
        Ok(Signature(Arc::new(set)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.get_index_of(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.iter().map(String::as_str)
    }

    pub fn var(&self, index: usize) -> Option<&str> {
        self.0.get_index(index).map(String::as_str)
    }

    /// Appends the variables of `names` not already present, keeping the
    /// existing order.
    pub fn extended<'a, I>(&self, names: I) -> Signature
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut set = (*self.0).clone();
        let before = set.len();
        for n in names {
            if !set.contains(n) {
                set.insert(n.to_string());
            }
        }
        if set.len() == before {
            self.clone()
        } else {
            Signature(Arc::new(set))
        }
    }

    /// Extends with the free variables of `f`, in order of first occurrence.
    pub fn extended_with(&self, f: &Formula) -> Signature {
        let mut names = Vec::new();
        f.collect_vars_ordered(&mut names);
        self.extended(names.iter().map(String::as_str))
    }

    /// Number of worlds over this signature, if it fits in a `u64`.
    pub fn world_count(&self) -> Option<u64> {
        1u64.checked_shl(self.len() as u32)
    }

    /// The world with enumeration index `index`.
    pub fn world(&self, index: u64) -> World {
        let n = self.len();
        let values = (0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect();
        World {
            signature: self.clone(),
            values,
        }
    }

    /// All worlds in enumeration order. Panics if the signature has 64 or more
    /// variables; callers guard on size first.
    pub fn worlds(&self) -> impl Iterator<Item = World> + '_ {
        let count = self
            .world_count()
            .expect("signature too large to enumerate");
        (0..count).map(move |i| self.world(i))
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && s != "true" && s != "false"
}

/// A total truth assignment over one signature.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct World {
    signature: Signature,
    values: Vec<bool>,
}

impl std::hash::Hash for Signature {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for v in self.0.iter() {
            v.hash(state);
        }
    }
}

impl World {
    pub fn new(signature: Signature, values: Vec<bool>) -> Option<World> {
        (values.len() == signature.len()).then_some(World { signature, values })
    }

    /// Builds a world from `(name, value)` pairs; every signature variable must
    /// be assigned exactly once.
    pub fn from_pairs<'a, I>(signature: &Signature, pairs: I) -> Option<World>
    where
        I: IntoIterator<Item = (&'a str, bool)>,
    {
        let mut values = vec![None; signature.len()];
        for (name, v) in pairs {
            let i = signature.index_of(name)?;
            if values[i].replace(v).is_some() {
                return None;
            }
        }
        let values = values.into_iter().collect::<Option<Vec<_>>>()?;
        Some(World {
            signature: signature.clone(),
            values,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.signature.index_of(name).map(|i| self.values[i])
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Position of this world in the enumeration order of its signature.
    pub fn index(&self) -> u64 {
        self.values
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn satisfies(&self, f: &Formula) -> Result<bool, EvalError> {
        eval(self, f)
    }
}

impl fmt::Debug for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (name, v)) in self.signature.vars().zip(&self.values).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", name, if *v { 'T' } else { 'F' })?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for World {
    /// `v=0/1` pairs in signature order, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, v)) in self.signature.vars().zip(&self.values).enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}={}", name, u8::from(*v))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `True` for an empty iterator.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        fs.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` for an empty iterator.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        fs.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    pub(crate) fn collect_vars_ordered(&self, out: &mut Vec<String>) {
        self.visit_vars(&mut |v| {
            if !out.iter().any(|o| o == v) {
                out.push(v.to_string());
            }
        });
    }

    fn visit_vars<F: FnMut(&str)>(&self, visit: &mut F) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Var(v) => visit(v),
            Formula::Not(a) => a.visit_vars(visit),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit_vars(visit);
                b.visit_vars(visit);
            }
        }
    }

    /// Evaluates with an arbitrary variable lookup.
    pub fn eval_with<F>(&self, lookup: &F) -> Result<bool, EvalError>
    where
        F: Fn(&str) -> Option<bool>,
    {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Var(v) => lookup(v).ok_or_else(|| EvalError::UnknownVariable(v.clone()))?,
            Formula::Not(a) => !a.eval_with(lookup)?,
            Formula::And(a, b) => a.eval_with(lookup)? & b.eval_with(lookup)?,
            Formula::Or(a, b) => a.eval_with(lookup)? | b.eval_with(lookup)?,
            Formula::Implies(a, b) => !a.eval_with(lookup)? | b.eval_with(lookup)?,
            Formula::Iff(a, b) => a.eval_with(lookup)? == b.eval_with(lookup)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            Formula::True | Formula::False | Formula::Var(_) => 6,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            Formula::True => write!(f, "true")?,
            Formula::False => write!(f, "false")?,
            Formula::Var(v) => write!(f, "{v}")?,
            Formula::Not(a) => {
                write!(f, "!")?;
                a.fmt_at(f, 5)?;
            }
            Formula::And(a, b) => binary(f, a, " & ", b, prec, prec + 1)?,
            Formula::Or(a, b) => binary(f, a, " | ", b, prec, prec + 1)?,
            // right-associative
            Formula::Implies(a, b) => binary(f, a, " -> ", b, prec + 1, prec)?,
            Formula::Iff(a, b) => binary(f, a, " <-> ", b, prec, prec + 1)?,
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn binary(
    f: &mut fmt::Formatter<'_>,
    a: &Formula,
    op: &str,
    b: &Formula,
    left_min: u8,
    right_min: u8,
) -> fmt::Result {
    a.fmt_at(f, left_min)?;
    f.write_str(op)?;
    b.fmt_at(f, right_min)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Classical truth-table evaluation of `f` in `w`.
pub fn eval(w: &World, f: &Formula) -> Result<bool, EvalError> {
    f.eval_with(&|name| w.get(name))
}

pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    f.free_vars()
}
