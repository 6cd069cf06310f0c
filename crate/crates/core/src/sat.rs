//! Satisfiability, classical entailment and model enumeration.
//!
//! Two independent decision paths are available. Below
//! [`SatConfig::enumeration_threshold`] distinct variables, formulas are
//! evaluated as packed truth tables over every world. Above it, the set is
//! clausified with auxiliary definition variables (Tseitin) and handed to a
//! small DPLL solver. Auxiliary variables never appear in reported worlds.

use std::collections::HashMap;

use thiserror::Error;

use crate::formula::{Formula, Signature, World};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("enumerating {vars} variables ({worlds} worlds) exceeds the cap of {cap} worlds")]
    ResourceLimit { vars: usize, worlds: u128, cap: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SatConfig {
    /// Variable count at or below which truth tables are used instead of DPLL.
    pub enumeration_threshold: usize,
    /// Largest number of worlds `enumerate_models` may visit.
    pub max_worlds: u64,
}

impl Default for SatConfig {
    fn default() -> Self {
        SatConfig {
            enumeration_threshold: 16,
            max_worlds: 1 << 24,
        }
    }
}

impl SatConfig {
    pub fn check_worlds(&self, vars: usize) -> Result<u64, SatError> {
        let worlds = 1u128 << vars.min(127);
        if vars >= 64 || worlds > u128::from(self.max_worlds) {
            return Err(SatError::ResourceLimit {
                vars,
                worlds,
                cap: self.max_worlds,
            });
        }
        Ok(worlds as u64)
    }
}

/// A finite set of formulas together with a signature covering them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormulaSet {
    formulas: Vec<Formula>,
    signature: Signature,
}

impl FormulaSet {
    pub fn new(formulas: Vec<Formula>) -> Self {
        Self::with_signature(Signature::empty(), formulas)
    }

    /// The signature is `signature` extended with any variable of `formulas`
    /// it lacks, in order of first occurrence.
    pub fn with_signature(signature: Signature, formulas: Vec<Formula>) -> Self {
        let signature = formulas.iter().fold(signature, |s, f| s.extended_with(f));
        FormulaSet {
            formulas,
            signature,
        }
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// A copy with `f` added.
    pub fn with(&self, f: Formula) -> FormulaSet {
        let signature = self.signature.extended_with(&f);
        let mut formulas = self.formulas.clone();
        formulas.push(f);
        FormulaSet {
            formulas,
            signature,
        }
    }

    fn occurring_vars(&self) -> Vec<String> {
        let mut names = Vec::new();
        for f in &self.formulas {
            f.collect_vars_ordered(&mut names);
        }
        names
    }
}

/// Per-query solver state; counts every satisfiability decision it makes.
#[derive(Debug, Clone, Default)]
pub struct Sat {
    config: SatConfig,
    calls: u64,
}

impl Sat {
    pub fn new(config: SatConfig) -> Self {
        Sat { config, calls: 0 }
    }

    pub fn config(&self) -> &SatConfig {
        &self.config
    }

    /// Number of satisfiability decisions made so far.
    pub fn calls(&self) -> u64 {
        self.calls
    }

    pub fn satisfiable(&mut self, set: &FormulaSet) -> bool {
        self.calls += 1;
        let vars = set.occurring_vars();
        if vars.len() <= self.config.enumeration_threshold {
            let index: HashMap<&str, usize> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.as_str(), i))
                .collect();
            let mut acc = Table::ones(vars.len());
            for f in set.formulas() {
                acc.and_assign(&Table::of(f, &index, vars.len()));
                if acc.is_zero() {
                    return false;
                }
            }
            !acc.is_zero()
        } else {
            let (cnf, _) = Cnf::from_formulas(set.formulas(), &vars);
            cnf.solve().is_some()
        }
    }

    /// `set ⊨ goal`, decided as unsatisfiability of `set ∪ {¬goal}`.
    pub fn entails(&mut self, set: &FormulaSet, goal: &Formula) -> bool {
        !self.satisfiable(&set.with(Formula::not(goal.clone())))
    }

    /// Some world over the set's signature satisfying every formula.
    pub fn find_model(&mut self, set: &FormulaSet) -> Option<World> {
        self.calls += 1;
        let sig = set.signature();
        let vars: Vec<String> = sig.vars().map(str::to_string).collect();
        if set.occurring_vars().len() <= self.config.enumeration_threshold
            && sig.len() <= self.config.enumeration_threshold
        {
            let index: HashMap<&str, usize> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.as_str(), i))
                .collect();
            let mut acc = Table::ones(vars.len());
            for f in set.formulas() {
                acc.and_assign(&Table::of(f, &index, vars.len()));
            }
            acc.first_one().map(|w| sig.world(w))
        } else {
            let (cnf, user_vars) = Cnf::from_formulas(set.formulas(), &vars);
            let assignment = cnf.solve()?;
            let values = (0..user_vars).map(|v| assignment[v]).collect();
            World::new(sig.clone(), values)
        }
    }

    /// All satisfying worlds over the set's signature, in enumeration order.
    pub fn enumerate_models(&mut self, set: &FormulaSet) -> Result<Vec<World>, SatError> {
        let sig = set.signature();
        self.config.check_worlds(sig.len())?;
        self.calls += 1;
        let index: HashMap<&str, usize> = sig.vars().enumerate().map(|(i, v)| (v, i)).collect();
        let mut acc = Table::ones(sig.len());
        for f in set.formulas() {
            acc.and_assign(&Table::of(f, &index, sig.len()));
        }
        Ok(acc.ones_iter().map(|w| sig.world(w)).collect())
    }
}

pub fn satisfiable(set: &FormulaSet) -> bool {
    Sat::default().satisfiable(set)
}

pub fn entails(set: &FormulaSet, goal: &Formula) -> bool {
    Sat::default().entails(set, goal)
}

pub fn enumerate_models(set: &FormulaSet) -> Result<Vec<World>, SatError> {
    Sat::default().enumerate_models(set)
}

/// Packed truth table: bit `w` is the value at the world with index `w`.
#[derive(Debug, Clone)]
struct Table {
    vars: usize,
    words: Vec<u64>,
}

const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl Table {
    fn word_count(vars: usize) -> usize {
        if vars <= 6 {
            1
        } else {
            1 << (vars - 6)
        }
    }

    fn tail_mask(vars: usize) -> u64 {
        if vars >= 6 {
            u64::MAX
        } else {
            (1u64 << (1u32 << vars)) - 1
        }
    }

    fn ones(vars: usize) -> Table {
        let mut t = Table {
            vars,
            words: vec![u64::MAX; Self::word_count(vars)],
        };
        t.mask();
        t
    }

    fn zeros(vars: usize) -> Table {
        Table {
            vars,
            words: vec![0; Self::word_count(vars)],
        }
    }

    fn mask(&mut self) {
        let m = Self::tail_mask(self.vars);
        for w in &mut self.words {
            *w &= m;
        }
    }

    /// Table of the variable at position `i` (first variable most significant).
    fn variable(i: usize, vars: usize) -> Table {
        let shift = vars - 1 - i;
        let mut t = Table::zeros(vars);
        if shift < 6 {
            t.words.iter_mut().for_each(|w| *w = LOW_PATTERNS[shift]);
        } else {
            let block = 1usize << (shift - 6);
            for (k, w) in t.words.iter_mut().enumerate() {
                if (k / block) % 2 == 1 {
                    *w = u64::MAX;
                }
            }
        }
        t.mask();
        t
    }

    fn of(f: &Formula, index: &HashMap<&str, usize>, vars: usize) -> Table {
        match f {
            Formula::True => Table::ones(vars),
            Formula::False => Table::zeros(vars),
            Formula::Var(v) => Table::variable(index[v.as_str()], vars),
            Formula::Not(a) => Table::of(a, index, vars).not(),
            Formula::And(a, b) => {
                Table::of(a, index, vars).zip(&Table::of(b, index, vars), |x, y| x & y)
            }
            Formula::Or(a, b) => {
                Table::of(a, index, vars).zip(&Table::of(b, index, vars), |x, y| x | y)
            }
            Formula::Implies(a, b) => {
                Table::of(a, index, vars).zip(&Table::of(b, index, vars), |x, y| !x | y)
            }
            Formula::Iff(a, b) => {
                Table::of(a, index, vars).zip(&Table::of(b, index, vars), |x, y| !(x ^ y))
            }
        }
    }

    fn not(mut self) -> Table {
        self.words.iter_mut().for_each(|w| *w = !*w);
        self.mask();
        self
    }

    fn zip(mut self, other: &Table, op: impl Fn(u64, u64) -> u64) -> Table {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w = op(*w, *o);
        }
        self.mask();
        self
    }

    fn and_assign(&mut self, other: &Table) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= *o;
        }
    }

    fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn first_one(&self) -> Option<u64> {
        self.ones_iter().next()
    }

    fn ones_iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(k as u64 * 64 + bit)
            })
        })
    }
}

type Lit = i32;

/// Clauses over variables `1..=num_vars`; literals are signed indices.
#[derive(Debug, Clone)]
struct Cnf {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    /// Clausifies `formulas` with definitional variables. User variables take
    /// indices `1..=user_vars.len()` in the given order. Returns the formula
    /// and the number of user variables.
    fn from_formulas(formulas: &[Formula], user_vars: &[String]) -> (Cnf, usize) {
        let mut enc = Encoder {
            vars: user_vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), i as Lit + 1))
                .collect(),
            next: user_vars.len() as Lit + 1,
            clauses: Vec::new(),
            truth: None,
        };
        for f in formulas {
            let lit = enc.encode(f);
            enc.clauses.push(vec![lit]);
        }
        let cnf = Cnf {
            num_vars: enc.next as usize - 1,
            clauses: enc.clauses,
        };
        (cnf, user_vars.len())
    }

    /// Returns a satisfying assignment indexed from 0 (variable 1 at index 0).
    fn solve(&self) -> Option<Vec<bool>> {
        let mut assign = vec![0i8; self.num_vars + 1];
        if self.dpll(&mut assign) {
            Some(assign[1..].iter().map(|&v| v > 0).collect())
        } else {
            None
        }
    }

    fn value(assign: &[i8], lit: Lit) -> i8 {
        let v = assign[lit.unsigned_abs() as usize];
        if lit > 0 {
            v
        } else {
            -v
        }
    }

    fn set(assign: &mut [i8], lit: Lit) {
        assign[lit.unsigned_abs() as usize] = if lit > 0 { 1 } else { -1 };
    }

    /// Unit propagation to fixpoint; false on conflict.
    fn propagate(&self, assign: &mut [i8]) -> bool {
        loop {
            let mut changed = false;
            for clause in &self.clauses {
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for &lit in clause {
                    match Self::value(assign, lit) {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        0 => {
                            open += 1;
                            unassigned = Some(lit);
                        }
                        _ => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match (open, unassigned) {
                    (0, _) => return false,
                    (1, Some(lit)) => {
                        Self::set(assign, lit);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn dpll(&self, assign: &mut Vec<i8>) -> bool {
        if !self.propagate(assign) {
            return false;
        }
        let branch = self.clauses.iter().find_map(|c| {
            if c.iter().any(|&l| Self::value(assign, l) == 1) {
                None
            } else {
                c.iter().copied().find(|&l| Self::value(assign, l) == 0)
            }
        });
        let Some(lit) = branch else {
            // every clause satisfied; fix leftovers to false
            for v in assign.iter_mut().skip(1) {
                if *v == 0 {
                    *v = -1;
                }
            }
            return true;
        };
        for choice in [lit, -lit] {
            let mut trial = assign.clone();
            Self::set(&mut trial, choice);
            if self.dpll(&mut trial) {
                *assign = trial;
                return true;
            }
        }
        false
    }
}

struct Encoder {
    vars: HashMap<String, Lit>,
    next: Lit,
    clauses: Vec<Vec<Lit>>,
    truth: Option<Lit>,
}

impl Encoder {
    fn fresh(&mut self) -> Lit {
        let v = self.next;
        self.next += 1;
        v
    }

    fn truth(&mut self) -> Lit {
        if let Some(t) = self.truth {
            return t;
        }
        let t = self.fresh();
        self.clauses.push(vec![t]);
        self.truth = Some(t);
        t
    }

    fn encode(&mut self, f: &Formula) -> Lit {
        match f {
            Formula::True => self.truth(),
            Formula::False => -self.truth(),
            Formula::Var(v) => self.vars[v.as_str()],
            Formula::Not(a) => -self.encode(a),
            Formula::And(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                let x = self.fresh();
                self.clauses
                    .extend([vec![-x, a], vec![-x, b], vec![x, -a, -b]]);
                x
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                self.or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                self.or(-a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                let x = self.fresh();
                self.clauses.extend([
                    vec![-x, -a, b],
                    vec![-x, a, -b],
                    vec![x, a, b],
                    vec![x, -a, -b],
                ]);
                x
            }
        }
    }

    fn or(&mut self, a: Lit, b: Lit) -> Lit {
        let x = self.fresh();
        self.clauses
            .extend([vec![-x, a, b], vec![x, -a], vec![x, -b]]);
        x
    }
}
