//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! nonzero status when any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use alba_core::checker::{pointwise_truth_set, quasi_valid, truth_set, verify_correspondence, Assignment, CompiledFo, Mode, Model};
use alba_core::engine::{run_alba, run_alba_with, AlbaOptions, AlbaResult, System};
use alba_core::fo::{alpha_eq, leq, ro_x, st, FOFormula, RelSym, Term};
use alba_core::frames::{enumerate_full_frames, labeled_posets, AccBudget, PointSet, Poset, PossibilityFrame, Relation, RoAlgebra};
use alba_core::sgtree::classify;
use alba_core::syntax::{parse_inequality, Formula, Inequality, QuasiInequality};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FRAME_SEED: u64 = 20_240_607;
const SAMPLE_SEED: u64 = 77;
const SAMPLES: usize = 1000;
const TRIPLES: usize = 1000;

type Check = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(u8, &str, Check, Option<Duration>); 9] = [
        (1, "worked example", ac1, Some(Duration::from_secs(1))),
        (2, "correspondence on enumerated frames", ac2, Some(Duration::from_secs(300))),
        (3, "rule-local soundness", ac3, None),
        (4, "success on inductive inputs", ac4, None),
        (5, "classifier agrees with brute-force oracle", ac5, None),
        (6, "algebra laws", ac6, Some(Duration::from_secs(60))),
        (7, "pointwise and algebraic evaluation agree", ac7, None),
        (8, "translation adequacy", ac8, None),
        (9, "tightness examples", ac9, None),
    ];
    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS AC{id} {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL AC{id} {name}: {detail} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `RO_x(α)` written out by hand: `∀y(y ⊑ x → ∃z(z ⊑ y ∧ ∃z′(z ⊑ z′ ∧ α(z′))))`.
fn ro_by_hand(x: &str, tag: &str, alpha: impl FnOnce(&str) -> FOFormula) -> FOFormula {
    let (y, z, z2) = (format!("ry{tag}"), format!("rz{tag}"), format!("rw{tag}"));
    let inner = alpha(&z2);
    FOFormula::forall(
        &y,
        FOFormula::implies(
            leq(&y, x),
            FOFormula::exists(
                &z,
                FOFormula::and(leq(&z, &y), FOFormula::exists(&z2, FOFormula::and(leq(&z, &z2), inner))),
            ),
        ),
    )
}

fn eq_var(a: &str, b: &str) -> FOFormula {
    FOFormula::Eq(Term::var(a), Term::var(b))
}

fn ac1() -> Result<String, String> {
    let ineq = parse_inequality("box p <= p").unwrap();
    let opts = AlbaOptions {
        simplify: true,
        ..AlbaOptions::default()
    };
    let r = run_alba_with(&ineq, &opts).map_err(|e| e.to_string())?;
    let names = r.trace().rule_names();
    ensure(names == ["L+A", "R-A", "□Res", "Right Ackermann"], || format!("rule sequence {names:?}"))?;
    let AlbaResult::Success { systems, simplified, .. } = &r else {
        return Err("run failed".into());
    };
    let i = Formula::nominal("i");
    let j = Formula::nominal("j");
    let expected = System {
        premises: vec![Inequality::new(Formula::black_diamond(i.clone()), Formula::neg(j.clone()))],
        ineq: Inequality::new(i, Formula::neg(j)),
    };
    ensure(systems == &vec![expected.clone()], || format!("final systems {systems:?}"))?;
    let simplified = simplified.as_ref().ok_or("no simplified output")?;
    // ∀i∀x(RO_x(x=i) → RO_x(∃y(Ryx ∧ RO_y(y=i))))
    let target = FOFormula::forall(
        "i",
        FOFormula::forall(
            "x",
            FOFormula::implies(
                ro_by_hand("x", "a", |w| eq_var(w, "i")),
                ro_by_hand("x", "b", |w| {
                    FOFormula::exists(
                        "y",
                        FOFormula::and(
                            FOFormula::Rel(RelSym::Acc, Term::var("y"), Term::var(w)),
                            ro_by_hand("y", "c", |v| eq_var(v, "i")),
                        ),
                    )
                }),
            ),
        ),
    );
    ensure(alpha_eq(&simplified.fo, &target), || format!("FO output {:?}", simplified.fo))?;
    Ok(format!("{} ; simplified {}", expected.unicode(), simplified.quasi[0].unicode()))
}

fn ac2() -> Result<String, String> {
    let frames: Vec<PossibilityFrame> = enumerate_full_frames(4, AccBudget::Samples(2000), FRAME_SEED).collect();
    let small = frames.iter().filter(|f| f.size() <= 3).count();
    let large = frames.len() - small;
    ensure(small == 5482 && large >= 2000, || format!("frame counts {small} + {large}"))?;
    let mut lines = Vec::new();
    let mut succeeded = 0;
    for ineq in corpus() {
        let r = run_alba(&ineq).map_err(|e| e.to_string())?;
        let AlbaResult::Success { fo, quasi, .. } = &r else {
            continue;
        };
        succeeded += 1;
        let report = verify_correspondence(&ineq, fo, Some(quasi), frames.iter().cloned()).map_err(|e| e.to_string())?;
        if let Some(d) = &report.first_disagreement {
            return Err(format!("{ineq}: {}\n{d}", report.summary()));
        }
        let valid = report.verdicts.iter().filter(|v| v.modal_valid).count();
        lines.push(format!("{valid}"));
    }
    ensure(succeeded >= 10, || format!("only {succeeded} corpus members succeeded"))?;
    Ok(format!(
        "{succeeded} inequalities x {} frames ({small} with |W|<=3, {large} sampled at |W|=4), zero disagreements; valid-frame counts [{}]",
        frames.len(),
        lines.join(", ")
    ))
}

fn validity_vector(models: &[Model], systems: &[System]) -> Vec<bool> {
    let quasis: Vec<QuasiInequality> = systems.iter().map(System::to_quasi).collect();
    models
        .iter()
        .map(|m| quasis.iter().all(|q| quasi_valid(m, q, Mode::Full).is_ok()))
        .collect()
}

fn ac3() -> Result<String, String> {
    let models: Vec<Model> = small_frames().into_iter().map(|f| Model::new(f).unwrap()).collect();
    let mut steps = 0;
    for ineq in corpus() {
        let r = run_alba(&ineq).map_err(|e| e.to_string())?;
        for (k, step) in r.trace().steps.iter().enumerate() {
            let before = validity_vector(&models, std::slice::from_ref(&step.before));
            let after = validity_vector(&models, &step.after);
            if let Some(w) = before.iter().zip(&after).position(|(a, b)| a != b) {
                return Err(format!(
                    "{ineq}: step {k} ({}) changes validity on frame {w}: {} vs {}",
                    step.rule.name(),
                    step.before,
                    step.after.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ; ")
                ));
            }
            steps += 1;
        }
    }
    Ok(format!("{steps} steps x {} frames, zero violations", models.len()))
}

fn ac4() -> Result<String, String> {
    let mut inductive = 0;
    let mut failures = Vec::new();
    for ineq in sample_inequalities(SAMPLE_SEED, SAMPLES) {
        let c = classify(&ineq).map_err(|e| e.to_string())?;
        if !c.verdict.is_inductive() {
            continue;
        }
        inductive += 1;
        let r = run_alba(&ineq).map_err(|e| e.to_string())?;
        if !r.is_success() {
            failures.push(ineq.to_string());
        }
    }
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    Ok(format!("{inductive}/{SAMPLES} samples inductive, all succeeded"))
}

fn ac5() -> Result<String, String> {
    let mckinsey = parse_inequality("box dia p <= dia box p").unwrap();
    ensure(
        !classify(&mckinsey).unwrap().verdict.is_inductive() && oracle_classify(&mckinsey) == OracleVerdict::NotInductive,
        || "McKinsey is classified inductive".into(),
    )?;
    let mut counts = BTreeMap::new();
    for ineq in sample_inequalities(SAMPLE_SEED, SAMPLES) {
        let c = classify(&ineq).map_err(|e| e.to_string())?;
        let oracle = oracle_classify(&ineq);
        let ours = match &c.verdict {
            alba_core::sgtree::Verdict::Sahlqvist { .. } => OracleVerdict::Sahlqvist,
            alba_core::sgtree::Verdict::Inductive { .. } => OracleVerdict::Inductive,
            alba_core::sgtree::Verdict::NotInductive => OracleVerdict::NotInductive,
        };
        ensure(ours == oracle, || format!("{ineq}: classify {ours:?}, oracle {oracle:?}"))?;
        if let Some((omega, eps)) = c.verdict.witness() {
            let eps: BTreeMap<String, bool> = eps.0.iter().map(|(k, e)| (k.clone(), *e == alba_core::sgtree::Eps::One)).collect();
            let excellent = ours == OracleVerdict::Sahlqvist;
            ensure(oracle_accepts(&ineq, &eps, &omega.0, excellent), || format!("{ineq}: witness rejected by the oracle"))?;
        }
        *counts.entry(format!("{oracle:?}")).or_insert(0) += 1;
    }
    Ok(format!("{SAMPLES} samples agree {counts:?}; McKinsey NotInductive"))
}

fn all_subsets(n: usize) -> impl Iterator<Item = PointSet> {
    (0u64..1 << n).map(PointSet)
}

/// Laws that only depend on the poset.
fn poset_laws(poset: &Poset) -> Result<(), String> {
    let n = poset.size();
    let full = poset.full();
    let ro = poset.regular_open_family();
    let ro_set: BTreeSet<PointSet> = ro.iter().copied().collect();
    let fail = |what: &str| Err(format!("{what} fails on poset {:?}", poset));
    if !ro_set.contains(&PointSet::EMPTY) || !ro_set.contains(&full) {
        return fail("∅, W regular open");
    }
    for &a in &ro {
        if !poset.is_down_set(a) {
            return fail("regular opens are down-sets");
        }
        for &b in &ro {
            if !ro_set.contains(&a.intersection(b)) {
                return fail("closure under intersection");
            }
        }
    }
    for x in all_subsets(n) {
        let r = poset.ro_closure(x);
        if !ro_set.contains(&r) || !x.is_subset(r) || ro.iter().any(|&y| x.is_subset(y) && !r.is_subset(y)) {
            return fail("ro is the least regular open superset");
        }
    }
    let alg = RoAlgebra::new(poset, &Relation::empty(n)).map_err(|e| e.to_string())?;
    let m = alg.len();
    for a in 0..m {
        let na = alg.complement(a);
        if alg.join(a, na) != alg.top() || alg.meet(a, na) != alg.bottom() {
            return fail("complement laws");
        }
        if alg.complement(na) != a {
            return fail("double complement");
        }
        // join-generation by pseudo-atoms
        let below: Vec<usize> = alg.psat().iter().map(|&(p, _)| p).filter(|&p| alg.leq(p, a)).collect();
        if alg.big_join(below) != a {
            return fail("pseudo-atoms join-generate");
        }
        for b in 0..m {
            if alg.leq(a, b) != alg.e(a).is_subset(alg.e(b)) {
                return fail("e is an order embedding");
            }
            if alg.implies(a, b) != alg.join(na, b) {
                return fail("implication is −a ∨ b");
            }
            for c in 0..m {
                if alg.meet(a, alg.join(b, c)) != alg.join(alg.meet(a, b), alg.meet(a, c)) {
                    return fail("distributivity");
                }
            }
        }
    }
    // c ⊣ e
    for x in all_subsets(n) {
        for a in 0..m {
            if alg.leq(alg.c(x), a) != x.is_subset(alg.e(a)) {
                return fail("c is left adjoint to e");
            }
        }
    }
    // e preserves arbitrary meets: every subfamily of the carrier.
    if m <= 16 {
        for mask in 0u32..1 << m {
            let fam: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
            let meet = alg.big_meet(fam.iter().copied());
            let inter = fam.iter().fold(full, |s, &k| s.intersection(alg.e(k)));
            if alg.e(meet) != inter {
                return fail("e preserves arbitrary meets");
            }
        }
    }
    Ok(())
}

/// Laws involving the accessibility relation.
fn frame_laws(frame: &PossibilityFrame) -> Result<(), String> {
    let alg = RoAlgebra::of_frame(frame).map_err(|e| e.to_string())?;
    let m = alg.len();
    let fail = |what: &str| Err(format!("{what} fails on frame {:?}", frame));
    if alg.box_op(alg.top()) != alg.top() {
        return fail("□W = W");
    }
    for a in 0..m {
        if alg.black_diamond(a) != alg.c(frame.acc.image(alg.e(a))) {
            return fail("◆ = c ∘ R[·] ∘ e");
        }
        if alg.black_box(a) != alg.complement(alg.black_diamond(alg.complement(a))) {
            return fail("■ = −◆−");
        }
        if alg.diamond(a) != alg.complement(alg.box_op(alg.complement(a))) {
            return fail("◇ = −□−");
        }
        for b in 0..m {
            if alg.leq(alg.black_diamond(a), b) != alg.leq(a, alg.box_op(b)) {
                return fail("◆ ⊣ □");
            }
            if alg.leq(alg.diamond(a), b) != alg.leq(a, alg.black_box(b)) {
                return fail("◇ ⊣ ■");
            }
            if alg.box_op(alg.meet(a, b)) != alg.meet(alg.box_op(a), alg.box_op(b)) {
                return fail("□ preserves meets");
            }
        }
    }
    Ok(())
}

fn ac6() -> Result<String, String> {
    let mut posets = 0;
    for n in 1..=4 {
        for p in labeled_posets(n) {
            poset_laws(&p)?;
            posets += 1;
        }
    }
    let mut frames = 0;
    for f in enumerate_full_frames(4, AccBudget::Samples(2000), FRAME_SEED) {
        frame_laws(&f)?;
        frames += 1;
    }
    Ok(format!("{posets} posets, {frames} frames, zero violations"))
}

struct Triple {
    frame: PossibilityFrame,
    val: RandomValuation,
    phi: Formula,
}

fn triples() -> Vec<Triple> {
    let frames: Vec<PossibilityFrame> = enumerate_full_frames(4, AccBudget::Samples(2000), FRAME_SEED).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED + 1);
    (0..TRIPLES)
        .map(|_| {
            let frame = frames[rng.gen_range(0..frames.len())].clone();
            let val = random_valuation(&mut rng, &frame);
            let phi = random_expanded(&mut rng, 4);
            Triple { frame, val, phi }
        })
        .collect()
}

fn ac7() -> Result<String, String> {
    for (k, t) in triples().iter().enumerate() {
        let poset = &t.frame.poset;
        let noms: BTreeMap<String, PointSet> =
            t.val.points.iter().map(|(n, &w)| (n.clone(), poset.ro_closure(PointSet::singleton(w)))).collect();
        let pointwise = pointwise_truth_set(poset, &t.frame.acc, &t.val.props, &noms, &t.phi).map_err(|e| e.to_string())?;
        let alg = RoAlgebra::of_frame(&t.frame).map_err(|e| e.to_string())?;
        let mut asg = Assignment::default();
        for (p, s) in &t.val.props {
            asg = asg.with_prop(p, alg.index_of(*s).map_err(|e| e.to_string())?);
        }
        for (n, s) in &noms {
            asg = asg.with_nom(n, alg.index_of(*s).map_err(|e| e.to_string())?);
        }
        let algebraic = alg.set(truth_set(&alg, &asg, &t.phi).map_err(|e| e.to_string())?);
        ensure(pointwise == algebraic, || format!("triple {k}: {} gives {pointwise} vs {algebraic}", t.phi))?;
    }
    Ok(format!("{TRIPLES} triples, zero disagreements"))
}

/// Random first-order formula in one free variable `x`, built from atoms that
/// need not be regular open.
fn random_fo(rng: &mut ChaCha8Rng, depth: u32, n: usize) -> FOFormula {
    let point = |rng: &mut ChaCha8Rng| Term::Const(format!("c{}", rng.gen_range(0..n)));
    if depth == 0 || rng.gen_bool(0.3) {
        let x = Term::var("x");
        return match rng.gen_range(0..5) {
            0 => FOFormula::Eq(x, point(rng)),
            1 => FOFormula::Rel(RelSym::Acc, x, point(rng)),
            2 => FOFormula::Rel(RelSym::Acc, point(rng), x),
            3 => FOFormula::Rel(RelSym::Leq, point(rng), x),
            _ => FOFormula::Pred("P".into(), x),
        };
    }
    match rng.gen_range(0..3) {
        0 => FOFormula::not(random_fo(rng, depth - 1, n)),
        1 => FOFormula::and(random_fo(rng, depth - 1, n), random_fo(rng, depth - 1, n)),
        _ => FOFormula::or(random_fo(rng, depth - 1, n), random_fo(rng, depth - 1, n)),
    }
}

fn ac8() -> Result<String, String> {
    for (k, t) in triples().iter().enumerate() {
        let poset = &t.frame.poset;
        let noms: BTreeMap<String, PointSet> =
            t.val.points.iter().map(|(n, &w)| (n.clone(), poset.ro_closure(PointSet::singleton(w)))).collect();
        let pointwise = pointwise_truth_set(poset, &t.frame.acc, &t.val.props, &noms, &t.phi).map_err(|e| e.to_string())?;
        let alpha = st(&t.phi, "x");
        let consts: HashMap<String, usize> = t.val.points.iter().map(|(n, &w)| (n.clone(), w)).collect();
        let preds: HashMap<String, PointSet> =
            t.val.props.iter().map(|(p, &s)| (alba_core::fo::predicate_name(p), s)).collect();
        let fo_set = CompiledFo::new(&alpha)
            .truth_set(poset, &t.frame.acc, "x", &consts, &preds)
            .map_err(|e| e.to_string())?;
        ensure(pointwise == fo_set, || format!("triple {k}: {} gives {pointwise} vs ST {fo_set}", t.phi))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED + 2);
    let frames: Vec<PossibilityFrame> = enumerate_full_frames(4, AccBudget::Samples(2000), FRAME_SEED).collect();
    for k in 0..TRIPLES {
        let frame = &frames[rng.gen_range(0..frames.len())];
        let n = frame.size();
        let alpha = random_fo(&mut rng, 3, n);
        let consts: HashMap<String, usize> = (0..n).map(|w| (format!("c{w}"), w)).collect();
        let preds: HashMap<String, PointSet> = [("P".to_string(), PointSet(rng.gen_range(0..1u64 << n)))].into();
        let plain = CompiledFo::new(&alpha)
            .truth_set(&frame.poset, &frame.acc, "x", &consts, &preds)
            .map_err(|e| e.to_string())?;
        let closed = CompiledFo::new(&ro_x(&alpha, "x"))
            .truth_set(&frame.poset, &frame.acc, "x", &consts, &preds)
            .map_err(|e| e.to_string())?;
        ensure(closed == frame.poset.ro_closure(plain), || format!("RO_x sample {k}: {alpha:?}"))?;
    }
    Ok(format!("{TRIPLES} ST triples and {TRIPLES} RO_x samples, zero disagreements"))
}

fn ac9() -> Result<String, String> {
    for bits in 0..16 {
        let f = PossibilityFrame::full(Poset::chain(2), Relation::from_bits(2, bits));
        if let Ok(f) = f {
            ensure(!f.tightness().order_tight, || format!("2-chain with relation {bits} is ⊑-tight"))?;
            ensure(!f.tightness().filter_descriptive, || "2-chain is filter-descriptive".into())?;
        }
    }
    let fork = PossibilityFrame::full(Poset::fork(), Relation::identity(3)).map_err(|e| e.to_string())?;
    ensure(fork.tightness().order_tight, || "fork with identity is not ⊑-tight".into())?;
    Ok("2-chain not ⊑-tight under any full relation; fork with identity ⊑-tight".into())
}
