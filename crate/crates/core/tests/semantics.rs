mod common;

use std::collections::{BTreeMap, HashMap};

use alba_core::checker::{pointwise_truth_set, truth_set, Assignment, CompiledFo};
use alba_core::engine::{run_alba, run_alba_with, AlbaOptions, AlbaResult};
use alba_core::fo::{alpha_eq, predicate_name, print_fo, print_unicode, ro_x, st, FOFormula, FoFormat, Term, Translator};
use alba_core::frames::{PointSet, Poset, PossibilityFrame, RoAlgebra};
use alba_core::syntax::{parse_inequality, Formula};
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn st_truth_set(frame: &PossibilityFrame, val: &RandomValuation, alpha: &FOFormula) -> PointSet {
    let consts: HashMap<String, usize> = val.points.iter().map(|(n, &w)| (n.clone(), w)).collect();
    let preds: HashMap<String, PointSet> = val.props.iter().map(|(p, &s)| (predicate_name(p), s)).collect();
    CompiledFo::new(alpha)
        .truth_set(&frame.poset, &frame.acc, "x", &consts, &preds)
        .unwrap()
}

fn nominal_sets(frame: &PossibilityFrame, val: &RandomValuation) -> BTreeMap<String, PointSet> {
    val.points
        .iter()
        .map(|(n, &w)| (n.clone(), frame.poset.ro_closure(PointSet::singleton(w))))
        .collect()
}

#[test]
fn standard_translation_is_adequate_on_corpus_formulas() {
    let formulas: Vec<Formula> = corpus().into_iter().flat_map(|i| [i.lhs, i.rhs]).collect();
    let translated: Vec<FOFormula> = formulas.iter().map(|f| st(f, "x")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for frame in small_frames() {
        let val = random_valuation(&mut rng, &frame);
        for (phi, alpha) in formulas.iter().zip(&translated) {
            let expected = pointwise_truth_set(&frame.poset, &frame.acc, &val.props, &BTreeMap::new(), phi).unwrap();
            assert_eq!(st_truth_set(&frame, &val, alpha), expected, "{phi}");
        }
    }
}

#[test]
fn implication_clauses_coincide() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let frames = small_frames();
    for k in 0..400 {
        let frame = &frames[(k * 13) % frames.len()];
        let a = random_expanded(&mut rng, 2);
        let b = random_expanded(&mut rng, 2);
        let val = random_valuation(&mut rng, frame);
        let table = st(&Formula::implies(a.clone(), b.clone()), "x");
        let direct = Translator::new().st_implies_direct(&a, &b, "x");
        assert_eq!(st_truth_set(frame, &val, &table), st_truth_set(frame, &val, &direct), "{a} -> {b}");
    }
}

#[test]
fn black_box_clause_matches_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for frame in small_frames() {
        let alg = RoAlgebra::of_frame(&frame).unwrap();
        let val = random_valuation(&mut rng, &frame);
        let phi = Formula::black_box(random_expanded(&mut rng, 2));
        let noms = nominal_sets(&frame, &val);
        let pointwise = pointwise_truth_set(&frame.poset, &frame.acc, &val.props, &noms, &phi).unwrap();
        let mut asg = Assignment::default();
        for (p, s) in &val.props {
            asg = asg.with_prop(p, alg.index_of(*s).unwrap());
        }
        for (n, s) in &noms {
            asg = asg.with_nom(n, alg.index_of(*s).unwrap());
        }
        let algebraic = alg.set(truth_set(&alg, &asg, &phi).unwrap());
        assert_eq!(pointwise, algebraic, "{phi}");
        assert_eq!(st_truth_set(&frame, &val, &st(&phi, "x")), pointwise, "{phi}");
    }
}

#[test]
fn ro_closure_of_a_point_on_the_two_chain() {
    // 0 ⊑ 1: the only regular opens are ∅ and W.
    let chain = Poset::chain(2);
    let frame = PossibilityFrame::full(chain.clone(), alba_core::frames::Relation::empty(2)).unwrap();
    let alpha = FOFormula::Eq(Term::var("x"), Term::Const("c".into()));
    for w in 0..2 {
        let consts: HashMap<String, usize> = [("c".to_string(), w)].into();
        let set = CompiledFo::new(&ro_x(&alpha, "x"))
            .truth_set(&frame.poset, &frame.acc, "x", &consts, &HashMap::new())
            .unwrap();
        assert_eq!(set, chain.ro_closure(PointSet::singleton(w)));
        assert_eq!(set, PointSet::full(2));
    }
}

#[test]
fn translation_is_stable_under_reparsing() {
    for ineq in corpus() {
        let again = parse_inequality(&ineq.unicode()).unwrap();
        let (AlbaResult::Success { fo: a, .. }, AlbaResult::Success { fo: b, .. }) =
            (run_alba(&ineq).unwrap(), run_alba(&again).unwrap())
        else {
            panic!("{ineq} failed");
        };
        assert!(alpha_eq(&a, &b), "{ineq}");
    }
}

#[test]
fn closed_outputs_have_no_predicates_or_free_variables() {
    for ineq in corpus() {
        let r = run_alba(&ineq).unwrap();
        let AlbaResult::Success { fo, .. } = &r else { panic!("{ineq}") };
        assert!(fo.free_vars().is_empty(), "{ineq}");
        assert!(fo.predicates().is_empty(), "{ineq}");
        assert!(print_fo(fo, FoFormat::Tptp).unwrap().starts_with("fof("));
    }
    let open = FOFormula::Eq(Term::var("x"), Term::var("x"));
    assert!(print_fo(&open, FoFormat::Tptp).is_err());
    assert_eq!(print_unicode(&FOFormula::Eq(Term::var("x"), Term::Const("i".into()))), "x = i");
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap().trim_end().to_string()
}

#[test]
fn golden_correspondent_of_box_p_le_p() {
    let ineq = parse_inequality("box p <= p").unwrap();
    let opts = AlbaOptions {
        simplify: true,
        ..AlbaOptions::default()
    };
    let AlbaResult::Success { fo, simplified, .. } = run_alba_with(&ineq, &opts).unwrap() else {
        panic!("no success");
    };
    assert_eq!(print_unicode(&fo), golden("box_p_le_p.txt"));
    assert_eq!(print_unicode(&simplified.unwrap().fo), golden("box_p_le_p.simplified.txt"));
}
