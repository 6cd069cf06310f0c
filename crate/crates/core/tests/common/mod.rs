//! Generators shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;
use ratclos::{ConditionalAssertion, Formula, KnowledgeBase, Signature};

pub const VARS3: [&str; 3] = ["p", "q", "r"];
pub const VARS2: [&str; 2] = ["p", "q"];

pub fn signature(vars: &[&str]) -> Signature {
    Signature::new(vars.iter().copied()).unwrap()
}

pub fn random_formula<R: Rng>(rng: &mut R, vars: &[&str], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..12) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::var(vars[rng.gen_range(0..vars.len())]),
        };
    }
    let op = rng.gen_range(0..5);
    let left = random_formula(rng, vars, depth - 1);
    if op == 0 {
        return Formula::not(left);
    }
    let right = random_formula(rng, vars, depth - 1);
    match op {
        1 => Formula::and(left, right),
        2 => Formula::or(left, right),
        3 => Formula::implies(left, right),
        _ => Formula::iff(left, right),
    }
}

pub fn random_assertion<R: Rng>(rng: &mut R, vars: &[&str]) -> ConditionalAssertion {
    ConditionalAssertion::new(random_formula(rng, vars, 2), random_formula(rng, vars, 2))
}

pub fn random_kb<R: Rng>(rng: &mut R, vars: &[&str], max_len: usize) -> KnowledgeBase {
    let n = rng.gen_range(0..=max_len);
    KnowledgeBase::new((0..n).map(|_| random_assertion(rng, vars)).collect())
}

fn literal(var: &str, positive: bool) -> Formula {
    if positive {
        Formula::var(var)
    } else {
        Formula::not(Formula::var(var))
    }
}

/// Bit `i` of the mask is the value at the world with enumeration index `i`
/// over `vars` (first variable most significant).
fn world_values(vars: &[&str], index: usize) -> Vec<bool> {
    let n = vars.len();
    (0..n).map(|j| index >> (n - 1 - j) & 1 == 1).collect()
}

/// Disjunction of the minterms selected by `mask`.
pub fn dnf(vars: &[&str], mask: u32) -> Formula {
    let worlds = 1usize << vars.len();
    Formula::disjunction((0..worlds).filter(|i| mask >> i & 1 == 1).map(|i| {
        let values = world_values(vars, i);
        Formula::conjunction(vars.iter().zip(values).map(|(v, b)| literal(v, b)))
    }))
}

/// Conjunction of the maxterms excluding the worlds outside `mask`.
pub fn cnf(vars: &[&str], mask: u32) -> Formula {
    let worlds = 1usize << vars.len();
    Formula::conjunction((0..worlds).filter(|i| mask >> i & 1 == 0).map(|i| {
        let values = world_values(vars, i);
        Formula::disjunction(vars.iter().zip(values).map(|(v, b)| literal(v, !b)))
    }))
}

/// One formula per Boolean function of `vars`, indexed by truth-table mask.
pub fn basis(vars: &[&str]) -> Vec<Formula> {
    (0..1u32 << (1 << vars.len()))
        .map(|m| dnf(vars, m))
        .collect()
}

pub fn mask_of(f: &Formula, sig: &Signature) -> u32 {
    let mut mask = 0;
    for w in sig.worlds() {
        if w.satisfies(f).unwrap() {
            mask |= 1 << w.index();
        }
    }
    mask
}
