//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p ratclos --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{basis, cnf, random_assertion, random_kb, VARS2, VARS3};
use ratclos::model::build_closure_model_over;
use ratclos::{
    epsilon_distribution, find_witness, fixtures, in_rational_closure, oracle_pref_entails,
    parse_assertion, pref_entails, verify_witness, ConditionalAssertion, Formula, KnowledgeBase,
    OracleConfig, RationalClosure, SatConfig,
};

const SEED: u64 = 0x5eed_2024;
const TABLE_BUDGET: Duration = Duration::from_secs(1);
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const ORACLE_KBS: usize = 200;
const ORACLE_QUERIES: usize = 20;
const RATIONALITY_KBS: usize = 50;
const CUMULATIVITY_KBS: usize = 50;
const CUMULATIVITY_MEMBERS: usize = 5;
const CHAIN_SIZES: std::ops::RangeInclusive<usize> = 4..=24;
const CHAIN_MAX_C: f64 = 4.0;

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
    /// Unattainable as stated; reported but not gating.
    advisory: bool,
}

impl Outcome {
    fn new(id: &'static str, pass: bool, detail: String) -> Self {
        Outcome {
            id,
            pass,
            detail,
            advisory: false,
        }
    }
}

fn q(t: &str) -> ConditionalAssertion {
    parse_assertion(t).unwrap()
}

fn table(kb: &KnowledgeBase, rows: &[(&str, bool)]) -> (usize, Vec<String>) {
    let closure = RationalClosure::new(kb.clone());
    let mut wrong = Vec::new();
    for &(text, expected) in rows {
        if closure.contains(&q(text)) != expected {
            wrong.push(text.to_string());
        }
    }
    (rows.len() - wrong.len(), wrong)
}

fn penguin_table() -> Outcome {
    let start = Instant::now();
    let rows = [
        ("fly |~ !penguin", true),
        ("!fly |~ !bird", true),
        ("!fly |~ !penguin", true),
        ("bird |~ !penguin", true),
        ("!bird |~ !penguin", true),
        ("bird & penguin |~ !fly", true),
        ("penguin & black |~ !fly", true),
        ("bird & green |~ fly", true),
        ("bird & !fly |~ penguin", false),
        ("bird & !fly |~ !penguin", false),
        ("penguin |~ fly", false),
    ];
    let (ok, wrong) = table(&fixtures::penguin(), &rows);
    let elapsed = start.elapsed();
    Outcome::new(
        "1 penguin table",
        wrong.is_empty() && elapsed < TABLE_BUDGET,
        format!("{ok}/{} match, {elapsed:.2?} (< 1s) {wrong:?}", rows.len()),
    )
}

fn nixon_table() -> Outcome {
    let start = Instant::now();
    let rows = [
        ("worker & republican |~ !pacifist", true),
        ("pacifist |~ !republican", true),
        ("true |~ !(republican & quaker)", true),
        ("republican |~ !quaker", true),
        ("quaker |~ !republican", true),
        ("republican & quaker |~ pacifist", false),
        ("republican & quaker |~ !pacifist", false),
        ("!pacifist |~ republican", false),
    ];
    let (ok, wrong) = table(&fixtures::nixon(), &rows);
    let elapsed = start.elapsed();
    Outcome::new(
        "2 nixon table",
        wrong.is_empty() && elapsed < TABLE_BUDGET,
        format!("{ok}/{} match, {elapsed:.2?} (< 1s) {wrong:?}", rows.len()),
    )
}

fn monotonicity_pair() -> Outcome {
    let k = KnowledgeBase::new(vec![q("p |~ q")]);
    let a = q("p & r |~ q");
    let pref = pref_entails(&k, &a);
    let closure = in_rational_closure(&k, &a).answer;
    Outcome::new(
        "3 p|~q pair",
        !pref && closure,
        format!("pref_entails = {pref} (want false), in_rational_closure = {closure} (want true)"),
    )
}

struct Sample {
    kb: KnowledgeBase,
    query: ConditionalAssertion,
    entailed: bool,
}

fn oracle_equivalence(samples: &mut Vec<Sample>) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let config = OracleConfig::default();
    let mut pref_bad = 0;
    let mut closure_bad = 0;
    let mut entailed = 0;
    let mut in_closure = 0;
    for _ in 0..ORACLE_KBS {
        let kb = random_kb(&mut rng, &VARS3, 4);
        let closure = RationalClosure::new(kb.clone());
        for _ in 0..ORACLE_QUERIES {
            let query = random_assertion(&mut rng, &VARS3);
            let expected = oracle_pref_entails(&kb, &query, &config).unwrap();
            if pref_entails(&kb, &query) != expected {
                pref_bad += 1;
            }
            let working = kb
                .signature()
                .extended_with(&query.antecedent)
                .extended_with(&query.consequent);
            let model = build_closure_model_over(&kb, &working, SatConfig::default()).unwrap();
            let member = closure.contains(&query);
            if model.satisfies(&query).unwrap() != member {
                closure_bad += 1;
            }
            entailed += usize::from(expected);
            in_closure += usize::from(member);
            samples.push(Sample {
                kb: kb.clone(),
                query,
                entailed: expected,
            });
        }
    }
    let elapsed = start.elapsed();
    let total = samples.len();
    Outcome::new(
        "4 oracle equivalence",
        pref_bad == 0 && closure_bad == 0 && elapsed < ORACLE_BUDGET,
        format!(
            "{ORACLE_KBS} KBs x {ORACLE_QUERIES} queries: {pref_bad} pref and {closure_bad} \
             closure-model disagreements ({entailed}/{total} entailed, {in_closure}/{total} \
             in closure), {elapsed:.2?} (< 60s)"
        ),
    )
}

/// Closure membership of every basis assertion, indexed `[antecedent][consequent]`.
fn membership(closure: &RationalClosure, basis: &[Formula]) -> Vec<Vec<bool>> {
    basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| closure.contains(&ConditionalAssertion::new(a.clone(), b.clone())))
                .collect()
        })
        .collect()
}

fn random_basis_kb(rng: &mut ChaCha8Rng, basis: &[Formula]) -> KnowledgeBase {
    let n = rng.gen_range(1..=4);
    KnowledgeBase::new(
        (0..n)
            .map(|_| {
                let a = basis[rng.gen_range(0..basis.len())].clone();
                let b = basis[rng.gen_range(0..basis.len())].clone();
                ConditionalAssertion::new(a, b)
            })
            .collect(),
    )
}

fn rationality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let basis = basis(&VARS2);
    let n = basis.len();
    let full = n - 1;
    let mut violations: Vec<(&str, usize)> = ["And", "Or", "CM", "LLE", "RW", "Ref", "RM"]
        .into_iter()
        .map(|r| (r, 0))
        .collect();
    for _ in 0..RATIONALITY_KBS {
        let kb = random_basis_kb(&mut rng, &basis);
        let closure = RationalClosure::new(kb);
        let m = membership(&closure, &basis);
        for a in 0..n {
            if !m[a][a] {
                violations[5].1 += 1;
            }
            let variant = cnf(&VARS2, a as u32);
            for b in 0..n {
                let lle = ConditionalAssertion::new(variant.clone(), basis[b].clone());
                if closure.contains(&lle) != m[a][b] {
                    violations[3].1 += 1;
                }
                for c in 0..n {
                    if m[a][b] && m[a][c] && !m[a][b & c] {
                        violations[0].1 += 1;
                    }
                    if m[a][c] && m[b][c] && !m[a | b][c] {
                        violations[1].1 += 1;
                    }
                    if m[a][b] && m[a][c] && !m[a & b][c] {
                        violations[2].1 += 1;
                    }
                    // b entails c
                    if m[a][b] && b & !c == 0 && !m[a][c] {
                        violations[4].1 += 1;
                    }
                    if m[a][c] && !m[a][full & !b] && !m[a & b][c] {
                        violations[6].1 += 1;
                    }
                }
            }
        }
    }
    let total: usize = violations.iter().map(|v| v.1).sum();
    let summary: Vec<String> = violations.iter().map(|(r, v)| format!("{r} {v}")).collect();
    Outcome::new(
        "5 rationality",
        total == 0,
        format!(
            "{RATIONALITY_KBS} KBs over {n}x{n} assertions, violations: {}",
            summary.join(", ")
        ),
    )
}

fn cumulativity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let basis = basis(&VARS2);
    let mut bad = 0;
    let mut checked = 0;
    for _ in 0..CUMULATIVITY_KBS {
        let kb = random_basis_kb(&mut rng, &basis);
        let base = membership(&RationalClosure::new(kb.clone()), &basis);
        let members: Vec<(usize, usize)> = (0..basis.len())
            .flat_map(|a| (0..basis.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| base[a][b])
            .collect();
        for _ in 0..CUMULATIVITY_MEMBERS {
            let (a, b) = members[rng.gen_range(0..members.len())];
            let added = ConditionalAssertion::new(basis[a].clone(), basis[b].clone());
            let extended = membership(&RationalClosure::new(kb.with(added)), &basis);
            for (row, ext) in base.iter().zip(&extended) {
                bad += row.iter().zip(ext).filter(|(x, y)| x != y).count();
            }
            checked += 1;
        }
    }
    Outcome::new(
        "6 cumulativity",
        bad == 0,
        format!(
            "{checked} extensions x {} queries, {bad} disagreements",
            basis.len() * basis.len()
        ),
    )
}

fn witness_soundness(samples: &[Sample]) -> Outcome {
    let mut bad = 0;
    let mut witnesses = 0;
    let mut longest = 0;
    for s in samples {
        match find_witness(&s.kb, &s.query).unwrap() {
            Some(w) => {
                witnesses += 1;
                longest = longest.max(w.steps.len());
                if s.entailed || verify_witness(&s.kb, &s.query, &w) != Ok(true) {
                    bad += 1;
                }
            }
            None => {
                if !s.entailed {
                    bad += 1;
                }
            }
        }
    }
    Outcome::new(
        "7 witness soundness",
        bad == 0,
        format!(
            "{} queries, {witnesses} witnesses (up to {longest} steps), {bad} violations",
            samples.len()
        ),
    )
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Weights recomputed from the model's rank vector alone.
fn independent_weights(ranks: &[Option<usize>], epsilon: &BigRational) -> Vec<BigRational> {
    let height = ranks.iter().flatten().max().copied().unwrap_or(0);
    let mut counts = vec![0i64; height + 1];
    for r in ranks.iter().flatten() {
        counts[*r] += 1;
    }
    let mut norm = BigRational::zero();
    let mut power = BigRational::one();
    let mut powers = Vec::new();
    for _ in 0..=height {
        norm += &power;
        powers.push(power.clone());
        power *= epsilon;
    }
    ranks
        .iter()
        .map(|r| match r {
            Some(r) => &powers[*r] / &norm / BigRational::from_integer(counts[*r].into()),
            None => BigRational::zero(),
        })
        .collect()
}

fn epsilon_bounds() -> (Outcome, Outcome) {
    let kb = fixtures::penguin();
    let sig = kb.signature().clone();
    let model = build_closure_model_over(&kb, &sig, SatConfig::default()).unwrap();
    let basis = basis(&sig.vars().collect::<Vec<_>>());
    let closure = RationalClosure::new(kb);
    let member = membership(&closure, &basis);

    // regression constant, confirmed below by the independent sum
    let frozen = ratio(8, 9);
    let penguin = Formula::var("penguin");
    let not_fly = Formula::not(Formula::var("fly"));
    let tenth = ratio(1, 10);
    let w = independent_weights(model.ranks(), &tenth);
    let (mut num, mut den) = (BigRational::zero(), BigRational::zero());
    for world in sig.worlds() {
        let x = &w[world.index() as usize];
        if world.satisfies(&penguin).unwrap() {
            den += x;
            if world.satisfies(&not_fly).unwrap() {
                num += x;
            }
        }
    }
    let recomputed = num / den;
    let engine = epsilon_distribution(&model, tenth.clone())
        .unwrap()
        .conditional(&not_fly, &penguin)
        .unwrap();
    let point_ok = engine == recomputed && recomputed == frozen;

    let worlds = 1usize << sig.len();
    let rank_count = |r: usize| model.ranks().iter().filter(|x| **x == Some(r)).count();
    let min_rank = |mask: usize| {
        (0..worlds)
            .filter(|i| mask >> i & 1 == 1)
            .filter_map(|i| model.ranks()[i])
            .min()
    };
    let mut literal_member = 0;
    let mut literal_other = 0;
    let mut member_bad = 0;
    let mut other_bad = 0;
    let mut first = None;
    let mut checked = 0;
    for epsilon in [ratio(1, 10), ratio(1, 100), ratio(1, 1000)] {
        let d = epsilon_distribution(&model, epsilon.clone()).unwrap();
        let p: Vec<BigRational> = (0..basis.len())
            .map(|m| {
                (0..worlds)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| d.weights()[i].clone())
                    .sum()
            })
            .collect();
        let one = BigRational::one();
        let tail = &epsilon / (&one - &epsilon);
        for a in 0..basis.len() {
            let Some(r) = min_rank(a) else { continue };
            let m_cnt = BigRational::from_integer((rank_count(r) as i64).into());
            let floor = &one - &tail;
            let cap = &one - m_cnt.recip();
            let counted_floor = &one - &m_cnt * &tail;
            let counted_cap = &one - (&one - &epsilon) / &m_cnt;
            for b in 0..basis.len() {
                let cond = &p[a & b] / &p[a];
                checked += 1;
                let (literal, counted, bound) = if member[a][b] {
                    (cond < floor, cond < counted_floor, &floor)
                } else {
                    (cond > cap, cond > counted_cap, &cap)
                };
                if literal {
                    *(if member[a][b] {
                        &mut literal_member
                    } else {
                        &mut literal_other
                    }) += 1;
                    first.get_or_insert_with(|| {
                        let kind = if member[a][b] { "member" } else { "non-member" };
                        format!(
                            "{kind} {} |~ {} has P = {cond} at eps {epsilon}, bound {bound}",
                            basis[a], basis[b]
                        )
                    });
                }
                if counted {
                    *(if member[a][b] {
                        &mut member_bad
                    } else {
                        &mut other_bad
                    }) += 1;
                }
            }
        }
    }
    let literal = Outcome {
        id: "8 eps bounds as stated",
        pass: literal_member == 0 && literal_other == 0,
        detail: format!(
            "{checked} (assertion, eps) pairs: {literal_member} members below 1 - eps/(1-eps), \
             {literal_other} non-members above 1 - 1/m_cnt; both hold only as eps -> 0. \
             First: {}",
            first.unwrap_or_default()
        ),
        advisory: true,
    };
    let counted = Outcome::new(
        "8 eps bounds with rank counts",
        point_ok && member_bad == 0 && other_bad == 0,
        format!(
            "P(!fly | penguin) at 1/10: engine {engine}, recomputed {recomputed}, frozen {frozen}; \
             {member_bad} members below 1 - m_cnt eps/(1-eps), \
             {other_bad} non-members above 1 - (1-eps)/m_cnt"
        ),
    );
    (literal, counted)
}

fn chain(n: usize) -> (KnowledgeBase, ConditionalAssertion) {
    let a = |i: usize| Formula::var(format!("a{i}"));
    let mut assertions = Vec::new();
    for i in 0..n {
        assertions.push(ConditionalAssertion::new(a(i), a(i + 1)));
        if i > 0 {
            assertions.push(ConditionalAssertion::new(a(i + 1), Formula::not(a(i - 1))));
        }
    }
    (
        KnowledgeBase::new(assertions),
        ConditionalAssertion::new(a(0), a(n)),
    )
}

fn complexity() -> Outcome {
    let mut points = Vec::new();
    for n in CHAIN_SIZES {
        let (kb, query) = chain(n);
        let r = in_rational_closure(&kb, &query);
        points.push((n as f64, r.sat_calls as f64, kb.signature().len()));
    }
    let c = points.iter().map(|(n, s, _)| s * n * n).sum::<f64>()
        / points.iter().map(|(n, _, _)| n.powi(4)).sum::<f64>();
    let worst = points
        .iter()
        .map(|(n, s, _)| s / (n * n))
        .fold(0.0_f64, f64::max);
    let widest = points.iter().map(|p| p.2).max().unwrap_or(0);
    let (n0, s0, _) = points[0];
    let (n1, s1, _) = points[points.len() - 1];
    Outcome::new(
        "9 complexity",
        c <= CHAIN_MAX_C && worst <= CHAIN_MAX_C,
        format!(
            "fit sat_calls = c n^2 gives c = {c:.3}, max calls/n^2 = {worst:.3} (<= 4); \
             n = {n0}: {s0} calls, n = {n1}: {s1} calls, up to {widest} variables"
        ),
    )
}

#[test]
fn acceptance() {
    let mut samples = Vec::new();
    let oracle = oracle_equivalence(&mut samples);
    let (eps_literal, eps_counted) = epsilon_bounds();
    let outcomes = vec![
        penguin_table(),
        nixon_table(),
        monotonicity_pair(),
        oracle,
        rationality(),
        cumulativity(),
        witness_soundness(&samples),
        eps_literal,
        eps_counted,
        complexity(),
    ];
    for o in &outcomes {
        let tag = match (o.pass, o.advisory) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (known, non-gating)",
        };
        println!("[{tag}] {}: {}", o.id, o.detail);
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.pass && !o.advisory)
        .map(|o| o.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
