//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use alba_core::frames::{AccBudget, PossibilityFrame};
use alba_core::syntax::{parse_inequality, Formula, Inequality, Sign};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VARS: [&str; 3] = ["p", "q", "r"];

/// Inequalities used wherever a fixed corpus is needed. All of them are
/// handled successfully by the engine.
pub const CORPUS: [&str; 12] = [
    "box p <= p",
    "box p <= box box p",
    "p <= box dia p",
    "dia box p <= box dia p",
    "dia p <= dia dia p",
    "box (box q -> p) <= dia box p",
    "p & dia q <= box (q | r)",
    "~box p <= box ~box p",
    "dia (p | q) <= box (p & q)",
    "box p & box q <= box (p & q)",
    "box (p -> q) <= box p -> box q",
    "dia ~p <= ~box p",
];

pub fn corpus() -> Vec<Inequality> {
    CORPUS.iter().map(|s| parse_inequality(s).unwrap()).collect()
}

/// Random basic formula of depth at most `depth` over [`VARS`].
pub fn random_formula(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..14) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            k => Formula::prop(VARS[k % 3]),
        };
    }
    let op = rng.gen_range(0..7);
    let mut sub = || random_formula(rng, depth - 1);
    match op {
        0 => Formula::neg(sub()),
        1 => Formula::and(sub(), sub()),
        2 => Formula::or(sub(), sub()),
        3 => Formula::implies(sub(), sub()),
        4 => Formula::boxed(sub()),
        _ => Formula::diamond(sub()),
    }
}

pub fn random_inequality(rng: &mut ChaCha8Rng, depth: u32) -> Inequality {
    Inequality::new(random_formula(rng, depth), random_formula(rng, depth))
}

/// `count` inequalities of depth at most 4, reproducible from `seed`.
pub fn sample_inequalities(seed: u64, count: usize) -> Vec<Inequality> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_inequality(&mut rng, 4)).collect()
}

/// Proptest strategy for basic formulas with the same shape.
pub fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
        12 => proptest::sample::select(&VARS[..]).prop_map(Formula::prop),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::diamond),
        ]
    })
}

pub fn arb_inequality() -> impl Strategy<Value = Inequality> {
    (arb_formula(), arb_formula()).prop_map(|(a, b)| Inequality::new(a, b))
}

/// Full frames up to three points, exhaustively.
pub fn small_frames() -> Vec<PossibilityFrame> {
    alba_core::frames::enumerate_full_frames(3, AccBudget::Exhaustive, 0).collect()
}

// ---------------------------------------------------------------------------
// Brute-force classifier written directly from the definition, sharing no
// code with the library's classifier.

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Kinds {
    delta: bool,
    sra: bool,
    slr: bool,
    srr: bool,
}

fn kinds(sign: Sign, f: &Formula) -> Kinds {
    let k = |delta, sra, slr, srr| Kinds { delta, sra, slr, srr };
    let plus = sign == Sign::Plus;
    match f {
        Formula::Or(..) if plus => k(true, false, false, true),
        Formula::And(..) if !plus => k(true, false, false, true),
        Formula::And(..) | Formula::Or(..) => k(true, true, true, false),
        Formula::Box(_) if plus => k(false, true, false, false),
        Formula::Diamond(_) if !plus => k(false, true, false, false),
        Formula::Box(_) | Formula::Diamond(_) => k(false, false, true, false),
        Formula::Neg(_) => k(false, true, true, false),
        Formula::Implies(..) if plus => k(false, false, false, true),
        Formula::Implies(..) => k(false, false, true, false),
        _ => k(false, false, false, false),
    }
}

fn child_sign(f: &Formula, sign: Sign, idx: usize) -> Sign {
    let flip = match f {
        Formula::Neg(_) => true,
        Formula::Implies(..) => idx == 0,
        _ => false,
    };
    if flip {
        match sign {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    } else {
        sign
    }
}

fn kids(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Neg(a) | Formula::Box(a) | Formula::Diamond(a) | Formula::BlackBox(a) | Formula::BlackDiamond(a) => {
            vec![a]
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
        _ => vec![],
    }
}

/// One node on a branch: its formula, sign and the child index the branch
/// continues into.
struct Hop<'a> {
    f: &'a Formula,
    sign: Sign,
    next: usize,
}

type Branch<'a> = (String, Sign, Vec<(&'a Formula, Sign, usize)>);

/// Every branch ending in a variable leaf: (variable, leaf sign, hops from
/// the root down).
fn branches<'a>(f: &'a Formula, sign: Sign, path: &mut Vec<Hop<'a>>, out: &mut Vec<Branch<'a>>) {
    if let Formula::Prop(p) = f {
        out.push((p.clone(), sign, path.iter().map(|h| (h.f, h.sign, h.next)).collect()));
        return;
    }
    for (i, c) in kids(f).into_iter().enumerate() {
        path.push(Hop { f, sign, next: i });
        branches(c, child_sign(f, sign, i), path, out);
        path.pop();
    }
}

fn leaves(f: &Formula, sign: Sign, out: &mut Vec<(String, Sign)>) {
    if let Formula::Prop(p) = f {
        out.push((p.clone(), sign));
    }
    for (i, c) in kids(f).into_iter().enumerate() {
        leaves(c, child_sign(f, sign, i), out);
    }
}

fn is_critical(eps: &BTreeMap<String, bool>, v: &str, sign: Sign) -> bool {
    // true in `eps` stands for order type 1
    eps[v] == (sign == Sign::Plus)
}

/// Whether one branch is good under (Ω, ε), trying every split point.
fn branch_ok(hops: &[(&Formula, Sign, usize)], leaf: &str, eps: &BTreeMap<String, bool>, omega: &BTreeSet<(String, String)>, excellent: bool) -> bool {
    let n = hops.len();
    // P2 = hops[..cut] (nearest the root), P1 = hops[cut..] (nearest the leaf)
    (0..=n).any(|cut| {
        let p2_ok = hops[..cut].iter().all(|&(f, s, _)| {
            let k = kinds(s, f);
            k.delta || k.slr
        });
        let p1_ok = hops[cut..].iter().all(|&(f, s, next)| {
            let k = kinds(s, f);
            if k.sra {
                return true;
            }
            if excellent || !k.srr {
                return false;
            }
            let side = kids(f)[1 - next];
            let mut ls = Vec::new();
            leaves(side, child_sign(f, s, 1 - next), &mut ls);
            ls.iter()
                .all(|(v, sg)| !is_critical(eps, v, *sg) && omega.contains(&(v.clone(), leaf.to_string())))
        });
        p1_ok && p2_ok
    })
}

fn tree_ok(f: &Formula, sign: Sign, eps: &BTreeMap<String, bool>, omega: &BTreeSet<(String, String)>, excellent: bool) -> bool {
    let mut bs = Vec::new();
    branches(f, sign, &mut Vec::new(), &mut bs);
    bs.iter()
        .filter(|(v, s, _)| is_critical(eps, v, *s))
        .all(|(v, _, hops)| branch_ok(hops, v, eps, omega, excellent))
}

/// Every irreflexive transitive relation on `vars`.
pub fn strict_orders(vars: &[String]) -> Vec<BTreeSet<(String, String)>> {
    let pairs: Vec<(String, String)> = vars
        .iter()
        .flat_map(|a| vars.iter().filter(move |b| *b != a).map(move |b| (a.clone(), b.clone())))
        .collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect::<BTreeSet<_>>()
        })
        .filter(|rel| {
            rel.iter().all(|(a, b)| {
                rel.iter()
                    .filter(|(c, _)| c == b)
                    .all(|(_, d)| d != a && rel.contains(&(a.clone(), d.clone())))
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Sahlqvist,
    Inductive,
    NotInductive,
}

fn all_eps(vars: &[String]) -> Vec<BTreeMap<String, bool>> {
    (0u32..1 << vars.len())
        .map(|m| vars.iter().enumerate().map(|(k, v)| (v.clone(), m >> k & 1 == 0)).collect())
        .collect()
}

/// Whether `ineq` is (Ω, ε)-inductive (`excellent` = ε-Sahlqvist) for the
/// given witness.
pub fn oracle_accepts(ineq: &Inequality, eps: &BTreeMap<String, bool>, omega: &BTreeSet<(String, String)>, excellent: bool) -> bool {
    tree_ok(&ineq.lhs, Sign::Plus, eps, omega, excellent) && tree_ok(&ineq.rhs, Sign::Minus, eps, omega, excellent)
}

pub fn oracle_classify(ineq: &Inequality) -> OracleVerdict {
    let vars: Vec<String> = ineq.props().into_iter().collect();
    let eps_all = all_eps(&vars);
    let empty = BTreeSet::new();
    if eps_all.iter().any(|e| oracle_accepts(ineq, e, &empty, true)) {
        return OracleVerdict::Sahlqvist;
    }
    let orders = strict_orders(&vars);
    if eps_all
        .iter()
        .any(|e| orders.iter().any(|o| oracle_accepts(ineq, e, o, false)))
    {
        OracleVerdict::Inductive
    } else {
        OracleVerdict::NotInductive
    }
}

pub const NOMINALS: [&str; 2] = ["i", "j"];

/// Random formula of the expanded language: nominals and black connectives
/// included.
pub fn random_expanded(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            2 | 3 => Formula::nominal(NOMINALS[rng.gen_range(0..2)]),
            k => Formula::prop(VARS[k % 3]),
        };
    }
    let op = rng.gen_range(0..9);
    let mut sub = || random_expanded(rng, depth - 1);
    match op {
        0 => Formula::neg(sub()),
        1 => Formula::and(sub(), sub()),
        2 => Formula::or(sub(), sub()),
        3 => Formula::implies(sub(), sub()),
        4 => Formula::boxed(sub()),
        5 => Formula::diamond(sub()),
        6 => Formula::black_diamond(sub()),
        7 => Formula::black_box(sub()),
        _ => Formula::neg(Formula::neg(sub())),
    }
}

/// A random assignment on `frame`: each variable gets a random regular open
/// set, each nominal a random point (denoting `ro({w})`).
pub struct RandomValuation {
    pub props: BTreeMap<String, alba_core::frames::PointSet>,
    pub points: BTreeMap<String, usize>,
}

pub fn random_valuation(rng: &mut ChaCha8Rng, frame: &PossibilityFrame) -> RandomValuation {
    let ro = &frame.admissible;
    RandomValuation {
        props: VARS
            .iter()
            .map(|v| (v.to_string(), ro[rng.gen_range(0..ro.len())]))
            .collect(),
        points: NOMINALS
            .iter()
            .map(|n| (n.to_string(), rng.gen_range(0..frame.size())))
            .collect(),
    }
}
