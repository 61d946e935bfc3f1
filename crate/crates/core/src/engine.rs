//! The ALBA rewrite procedure: preprocessing, approximation, residuation and
//! Ackermann elimination, with a trace that can be replayed step by step.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fo::{translate_quasi, FOFormula, FoError};
use crate::sgtree::{classify, readings, DependenceOrder, Eps, OrderType, SgError, Side};
use crate::syntax::{Formula, Inequality, Path, Polarity, QuasiInequality, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("input must be an inequality of the basic modal language")]
    NotBasic,
    #[error("side condition of {rule} violated: {detail}")]
    SideCondition { rule: String, detail: String },
    #[error("{rule} does not match {ineq}")]
    SchemeMismatch { rule: String, ineq: String },
    #[error("Ackermann rule for {var} blocked by {offending}")]
    Ackermann { var: String, offending: String },
    #[error("premise index {0} out of range")]
    NoSuchPremise(usize),
    #[error("trace replay diverged at step {step}: {detail}")]
    Replay { step: usize, detail: String },
    #[error(transparent)]
    Classify(#[from] SgError),
    #[error(transparent)]
    Translate(#[from] FoError),
}

/// A pair `(S, Ineq)` read as the quasi-inequality `&S ⇒ Ineq`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct System {
    pub premises: Vec<Inequality>,
    pub ineq: Inequality,
}

impl System {
    pub fn initial(ineq: Inequality) -> System {
        System {
            premises: Vec::new(),
            ineq,
        }
    }

    pub fn is_pure(&self) -> bool {
        self.ineq.is_pure() && self.premises.iter().all(Inequality::is_pure)
    }

    pub fn props(&self) -> BTreeSet<String> {
        self.to_quasi().props()
    }

    pub fn nominals(&self) -> BTreeSet<String> {
        self.to_quasi().nominals()
    }

    pub fn to_quasi(&self) -> QuasiInequality {
        QuasiInequality::new(self.premises.clone(), self.ineq.clone())
    }

    pub fn unicode(&self) -> String {
        let ps: Vec<String> = self.premises.iter().map(Inequality::unicode).collect();
        format!("({{{}}}, {})", ps.join(", "), self.ineq.unicode())
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.premises.iter().map(ToString::to_string).collect();
        write!(f, "({{{}}}, {})", ps.join(", "), self.ineq)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    LeftPositive,
    LeftNegative,
    RightPositive,
    RightNegative,
}

impl Flavor {
    pub fn side(self) -> Side {
        match self {
            Flavor::LeftPositive | Flavor::LeftNegative => Side::Lhs,
            Flavor::RightPositive | Flavor::RightNegative => Side::Rhs,
        }
    }

    /// Sign the approximated node must carry.
    pub fn sign(self) -> Sign {
        match self {
            Flavor::LeftPositive | Flavor::RightPositive => Sign::Plus,
            Flavor::LeftNegative | Flavor::RightNegative => Sign::Minus,
        }
    }

    fn of(side: Side, sign: Sign) -> Flavor {
        match (side, sign) {
            (Side::Lhs, Sign::Plus) => Flavor::LeftPositive,
            (Side::Lhs, Sign::Minus) => Flavor::LeftNegative,
            (Side::Rhs, Sign::Plus) => Flavor::RightPositive,
            (Side::Rhs, Sign::Minus) => Flavor::RightNegative,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::LeftPositive => "L+A",
            Flavor::LeftNegative => "L-A",
            Flavor::RightPositive => "R+A",
            Flavor::RightNegative => "R-A",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Residuation {
    DiamondRes,
    BoxRes,
    NegResLeft,
    NegResRight,
    AndRes1,
    AndRes2,
    OrRes1,
    OrRes2,
    ImpRes1,
    ImpRes2,
}

impl fmt::Display for Residuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Residuation::DiamondRes => "◇Res",
            Residuation::BoxRes => "□Res",
            Residuation::NegResLeft => "¬ResL",
            Residuation::NegResRight => "¬ResR",
            Residuation::AndRes1 => "∧Res1",
            Residuation::AndRes2 => "∧Res2",
            Residuation::OrRes1 => "∨Res1",
            Residuation::OrRes2 => "∨Res2",
            Residuation::ImpRes1 => "→Res1",
            Residuation::ImpRes2 => "→Res2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AckSide {
    Right,
    Left,
}

impl fmt::Display for AckSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AckSide::Right => "Right Ackermann",
            AckSide::Left => "Left Ackermann",
        })
    }
}

/// One rule instance with everything needed to re-apply it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleApp {
    /// Push the node at `path` below its `∨`/`∧` child.
    Distribute { side: Side, path: Path, child: usize },
    /// Replace a uniformly occurring variable by `⊤` (`top`) or `⊥`.
    Eliminate { var: String, top: bool },
    /// Split `α ∨ β ≤ γ` (lhs) or `α ≤ β ∧ γ` (rhs) into two systems.
    Split { side: Side },
    Approximate { flavor: Flavor, path: Path, nominal: String },
    Residuate { rule: Residuation, premise: usize },
    /// Split a premise `ξ ≤ α ∧ β` or `α ∨ β ≤ χ` in place.
    SplitPremise { premise: usize },
    Ackermann { var: String, side: AckSide },
}

impl RuleApp {
    pub fn name(&self) -> String {
        match self {
            RuleApp::Distribute { .. } => "distribution".into(),
            RuleApp::Eliminate { top: true, .. } => "monotone elimination".into(),
            RuleApp::Eliminate { top: false, .. } => "antitone elimination".into(),
            RuleApp::Split { .. } => "splitting".into(),
            RuleApp::Approximate { flavor, .. } => flavor.to_string(),
            RuleApp::Residuate { rule, .. } => rule.to_string(),
            RuleApp::SplitPremise { .. } => "premise splitting".into(),
            RuleApp::Ackermann { side, .. } => side.to_string(),
        }
    }

    pub fn target(&self) -> String {
        let path = |side: &Side, p: &Path| {
            let mut s = side.to_string();
            for k in p {
                s.push_str(&format!(".{k}"));
            }
            s
        };
        match self {
            RuleApp::Distribute { side, path: p, child } => format!("{} over child {child}", path(side, p)),
            RuleApp::Eliminate { var, top } => format!("{var} := {}", if *top { "⊤" } else { "⊥" }),
            RuleApp::Split { side } => side.to_string(),
            RuleApp::Approximate { flavor, path: p, nominal } => format!("{} as {nominal}", path(&flavor.side(), p)),
            RuleApp::Residuate { premise, .. } | RuleApp::SplitPremise { premise } => format!("premise {premise}"),
            RuleApp::Ackermann { var, .. } => var.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: RuleApp,
    /// Position of the rewritten system in the current list of systems.
    pub index: usize,
    pub before: System,
    pub after: Vec<System>,
    pub fresh: Vec<String>,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let after: Vec<String> = self.after.iter().map(System::unicode).collect();
        write!(
            f,
            "#{} {} [{}]: {} ⟶ {}",
            self.index,
            self.rule.name(),
            self.rule.target(),
            self.before.unicode(),
            after.join(" ; ")
        )?;
        if !self.fresh.is_empty() {
            write!(f, " fresh {}", self.fresh.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTrace {
    pub initial: Vec<System>,
    pub steps: Vec<Step>,
}

impl RuleTrace {
    fn new(ineq: &Inequality) -> RuleTrace {
        RuleTrace {
            initial: vec![System::initial(ineq.clone())],
            steps: Vec::new(),
        }
    }

    /// Re-applies every recorded rule from the initial systems and checks that
    /// each step reproduces its recorded result.
    pub fn replay(&self) -> Result<Vec<System>, EngineError> {
        let mut state = self.initial.clone();
        for (n, step) in self.steps.iter().enumerate() {
            let diverged = |detail: String| EngineError::Replay { step: n, detail };
            let current = state
                .get(step.index)
                .ok_or_else(|| diverged(format!("no system #{}", step.index)))?;
            if *current != step.before {
                return Err(diverged(format!("expected {}, found {}", step.before, current)));
            }
            let after = apply_rule(current, &step.rule)?;
            if after != step.after {
                return Err(diverged(format!("rule {} produced a different result", step.rule.name())));
            }
            state.splice(step.index..=step.index, after);
        }
        Ok(state)
    }

    /// The rule names in order.
    pub fn rule_names(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.rule.name()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlbaResult {
    Success {
        systems: Vec<System>,
        quasi: Vec<QuasiInequality>,
        fo: FOFormula,
        trace: RuleTrace,
        /// Present when simplification was requested.
        simplified: Option<Simplified>,
    },
    Failure {
        residual: Vec<System>,
        trace: RuleTrace,
        reason: String,
    },
}

impl AlbaResult {
    pub fn is_success(&self) -> bool {
        matches!(self, AlbaResult::Success { .. })
    }

    pub fn trace(&self) -> &RuleTrace {
        match self {
            AlbaResult::Success { trace, .. } | AlbaResult::Failure { trace, .. } => trace,
        }
    }

    /// Final systems, pure or not.
    pub fn systems(&self) -> &[System] {
        match self {
            AlbaResult::Success { systems, .. } => systems,
            AlbaResult::Failure { residual, .. } => residual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Simplified {
    pub quasi: Vec<QuasiInequality>,
    pub fo: FOFormula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlbaOptions {
    /// Rule applications allowed per system when no inductive witness exists.
    pub rule_budget: usize,
    pub simplify: bool,
}

impl Default for AlbaOptions {
    fn default() -> Self {
        AlbaOptions {
            rule_budget: 500,
            simplify: false,
        }
    }
}

// ---------------------------------------------------------------------------
// Rule application

fn side_formula(ineq: &Inequality, side: Side) -> &Formula {
    match side {
        Side::Lhs => &ineq.lhs,
        Side::Rhs => &ineq.rhs,
    }
}

fn with_side(ineq: &Inequality, side: Side, f: Formula) -> Inequality {
    match side {
        Side::Lhs => Inequality::new(f, ineq.rhs.clone()),
        Side::Rhs => Inequality::new(ineq.lhs.clone(), f),
    }
}

/// Applies `rule` to one system. Stage-one splitting yields two systems,
/// every other rule yields one.
pub fn apply_rule(sys: &System, rule: &RuleApp) -> Result<Vec<System>, EngineError> {
    match rule {
        RuleApp::Distribute { side, path, child } => {
            let ineq = apply_distribution(&sys.ineq, *side, path, *child)?;
            Ok(vec![System {
                premises: sys.premises.clone(),
                ineq,
            }])
        }
        RuleApp::Eliminate { var, top } => {
            let ineq = apply_elimination(&sys.ineq, var, *top)?;
            Ok(vec![System {
                premises: sys.premises.clone(),
                ineq,
            }])
        }
        RuleApp::Split { side } => {
            let (a, b) = apply_split(&sys.ineq, *side)?;
            Ok([a, b]
                .into_iter()
                .map(|ineq| System {
                    premises: sys.premises.clone(),
                    ineq,
                })
                .collect())
        }
        RuleApp::Approximate { flavor, path, nominal } => {
            Ok(vec![apply_approximation(sys, path, *flavor, nominal)?])
        }
        RuleApp::Residuate { rule, premise } => {
            let p = sys.premises.get(*premise).ok_or(EngineError::NoSuchPremise(*premise))?;
            let mut out = sys.clone();
            out.premises[*premise] = apply_residuation(*rule, p)?;
            Ok(vec![out])
        }
        RuleApp::SplitPremise { premise } => {
            let p = sys.premises.get(*premise).ok_or(EngineError::NoSuchPremise(*premise))?;
            let (a, b) = split_premise(p)?;
            let mut out = sys.clone();
            out.premises.splice(*premise..=*premise, [a, b]);
            Ok(vec![out])
        }
        RuleApp::Ackermann { var, side } => Ok(vec![ackermann(sys, var, *side)?]),
    }
}

// ----- stage one

fn root_sign(side: Side) -> Sign {
    match side {
        Side::Lhs => Sign::Plus,
        Side::Rhs => Sign::Minus,
    }
}

/// Whether `node` (carrying `sign`) distributes over its child `k`, which must
/// be a `+∨` or `−∧` node.
fn distributes(sign: Sign, node: &Formula, k: usize) -> bool {
    use Formula::*;
    let child_sign = node.child_sign(sign, k);
    match (child_sign, node.children().get(k)) {
        (Sign::Plus, Some(Or(..))) => matches!(
            (sign, node, k),
            (Sign::Plus, Diamond(_), _) | (Sign::Plus, And(..), _) | (Sign::Minus, Neg(_), _) | (Sign::Minus, Implies(..), 0)
        ),
        (Sign::Minus, Some(And(..))) => matches!(
            (sign, node, k),
            (Sign::Minus, Box(_), _) | (Sign::Minus, Or(..), _) | (Sign::Plus, Neg(_), _) | (Sign::Minus, Implies(..), 1)
        ),
        _ => false,
    }
}

/// First distribution site of one side, searching the Skeleton region (nodes
/// reachable from the root through Skeleton nodes) in pre-order.
fn find_distribution(f: &Formula, sign: Sign, path: &mut Path) -> Option<(Path, usize)> {
    if !readings(sign, f).skeleton() {
        return None;
    }
    for k in 0..f.children().len() {
        if distributes(sign, f, k) {
            return Some((path.clone(), k));
        }
    }
    for (k, c) in f.children().into_iter().enumerate() {
        path.push(k);
        let found = find_distribution(c, f.child_sign(sign, k), path);
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

fn distribute_node(node: &Formula, k: usize) -> Formula {
    let (a, b, is_or) = match node.children()[k] {
        Formula::Or(a, b) => (a, b, true),
        Formula::And(a, b) => (a, b, false),
        _ => unreachable!("checked by distributes"),
    };
    let with = |x: &Formula| node.replace_at(&[k], x.clone()).expect("child exists");
    // Negation and the antecedent of an implication turn ∨ into ∧ and back.
    let flips = matches!(node, Formula::Neg(_)) || (matches!(node, Formula::Implies(..)) && k == 0);
    if is_or != flips {
        Formula::or(with(a), with(b))
    } else {
        Formula::and(with(a), with(b))
    }
}

pub fn apply_distribution(ineq: &Inequality, side: Side, path: &[usize], child: usize) -> Result<Inequality, EngineError> {
    let err = |detail: &str| EngineError::SideCondition {
        rule: "distribution".into(),
        detail: detail.into(),
    };
    let f = side_formula(ineq, side);
    let node = f.at(path).ok_or_else(|| err("no node at the given position"))?;
    let sign = f.sign_at(path, root_sign(side)).expect("path checked");
    if !distributes(sign, node, child) {
        return Err(err("node does not distribute over that child"));
    }
    let new = f.replace_at(path, distribute_node(node, child)).expect("path checked");
    Ok(with_side(ineq, side, new))
}

/// Sign profile of `v` over the signed trees `+lhs` and `−rhs`.
fn profile(ineq: &Inequality, v: &str) -> Polarity {
    let mut pos = false;
    let mut neg = false;
    let mut see = |s: Sign| match s {
        Sign::Plus => pos = true,
        Sign::Minus => neg = true,
    };
    ineq.lhs.signs_of(v, Sign::Plus, &mut see);
    ineq.rhs.signs_of(v, Sign::Minus, &mut see);
    match (pos, neg) {
        (true, true) => Polarity::Both,
        (true, false) => Polarity::Positive,
        (false, true) => Polarity::Negative,
        (false, false) => Polarity::Absent,
    }
}

pub fn apply_elimination(ineq: &Inequality, var: &str, top: bool) -> Result<Inequality, EngineError> {
    let wanted = if top { Polarity::Positive } else { Polarity::Negative };
    if profile(ineq, var) != wanted {
        return Err(EngineError::SideCondition {
            rule: "uniform elimination".into(),
            detail: format!("{var} does not occur uniformly with the required sign in {ineq}"),
        });
    }
    let value = if top { Formula::Top } else { Formula::Bottom };
    Ok(ineq.substitute(var, &value))
}

pub fn apply_split(ineq: &Inequality, side: Side) -> Result<(Inequality, Inequality), EngineError> {
    match (side, &ineq.lhs, &ineq.rhs) {
        (Side::Lhs, Formula::Or(a, b), r) => Ok((Inequality::new((**a).clone(), r.clone()), Inequality::new((**b).clone(), r.clone()))),
        (Side::Rhs, l, Formula::And(a, b)) => Ok((Inequality::new(l.clone(), (**a).clone()), Inequality::new(l.clone(), (**b).clone()))),
        _ => Err(EngineError::SchemeMismatch {
            rule: "splitting".into(),
            ineq: ineq.to_string(),
        }),
    }
}

fn next_distribution(ineq: &Inequality) -> Option<RuleApp> {
    for side in [Side::Lhs, Side::Rhs] {
        if let Some((path, child)) = find_distribution(side_formula(ineq, side), root_sign(side), &mut Vec::new()) {
            return Some(RuleApp::Distribute { side, path, child });
        }
    }
    None
}

fn next_elimination(ineq: &Inequality) -> Option<RuleApp> {
    ineq.props().into_iter().find_map(|var| match profile(ineq, &var) {
        Polarity::Positive => Some(RuleApp::Eliminate { var, top: true }),
        Polarity::Negative => Some(RuleApp::Eliminate { var, top: false }),
        _ => None,
    })
}

fn next_split(ineq: &Inequality) -> Option<RuleApp> {
    if matches!(ineq.lhs, Formula::Or(..)) {
        Some(RuleApp::Split { side: Side::Lhs })
    } else if matches!(ineq.rhs, Formula::And(..)) {
        Some(RuleApp::Split { side: Side::Rhs })
    } else {
        None
    }
}

/// Applies the first rule `pick` finds in any system; records the step.
fn step_first(state: &mut Vec<System>, steps: &mut Vec<Step>, pick: fn(&Inequality) -> Option<RuleApp>) -> bool {
    for index in 0..state.len() {
        if let Some(rule) = pick(&state[index].ineq) {
            let before = state[index].clone();
            let after = apply_rule(&before, &rule).expect("rule located by its own side condition");
            state.splice(index..=index, after.clone());
            steps.push(Step {
                rule,
                index,
                before,
                after,
                fresh: Vec::new(),
            });
            return true;
        }
    }
    false
}

fn preprocess_traced(ineq: &Inequality, steps: &mut Vec<Step>) -> Vec<System> {
    let mut state = vec![System::initial(ineq.clone())];
    loop {
        let mut changed = false;
        while step_first(&mut state, steps, next_distribution) {
            changed = true;
        }
        while step_first(&mut state, steps, next_elimination) {
            changed = true;
        }
        while step_first(&mut state, steps, next_split) {
            changed = true;
        }
        if !changed {
            return state;
        }
    }
}

/// Stage one: distribution, uniform-variable elimination and splitting,
/// repeated until none applies.
pub fn preprocess(ineq: &Inequality) -> Vec<Inequality> {
    preprocess_traced(ineq, &mut Vec::new()).into_iter().map(|s| s.ineq).collect()
}

// ----- approximation

/// Maximal SLR-branch frontiers of `+lhs` and `−rhs`, left to right. Frontier
/// nodes without variables are left in place.
pub fn approximation_targets(ineq: &Inequality) -> Vec<(Flavor, Path)> {
    fn walk(f: &Formula, sign: Sign, side: Side, path: &mut Path, out: &mut Vec<(Flavor, Path)>) {
        if readings(sign, f).slr {
            for (k, c) in f.children().into_iter().enumerate() {
                path.push(k);
                walk(c, f.child_sign(sign, k), side, path, out);
                path.pop();
            }
        } else if f.has_props() && f.is_basic() {
            out.push((Flavor::of(side, sign), path.clone()));
        }
    }
    let mut out = Vec::new();
    walk(&ineq.lhs, Sign::Plus, Side::Lhs, &mut Vec::new(), &mut out);
    walk(&ineq.rhs, Sign::Minus, Side::Rhs, &mut Vec::new(), &mut out);
    out
}

pub fn apply_approximation(sys: &System, path: &[usize], flavor: Flavor, nominal: &str) -> Result<System, EngineError> {
    let err = |detail: String| EngineError::SideCondition {
        rule: flavor.to_string(),
        detail,
    };
    let side = flavor.side();
    let f = side_formula(&sys.ineq, side);
    let gamma = f.at(path).ok_or_else(|| err("no subformula at the given position".into()))?;
    let mut node = f;
    let mut sign = root_sign(side);
    for (depth, &k) in path.iter().enumerate() {
        if !readings(sign, node).slr {
            return Err(err(format!("branch is not SLR at depth {depth} ({node})")));
        }
        sign = node.child_sign(sign, k);
        node = node.children()[k];
    }
    if sign != flavor.sign() {
        return Err(err(format!("{gamma} carries the wrong sign")));
    }
    if readings(sign, gamma).slr {
        return Err(err(format!("{gamma} does not end a maximal SLR branch")));
    }
    if !gamma.is_basic() {
        return Err(err(format!("{gamma} is not in the basic language")));
    }
    if sys.nominals().contains(nominal) {
        return Err(err(format!("nominal {nominal} is not fresh")));
    }
    let i = Formula::nominal(nominal);
    let (premise, replacement) = match flavor.sign() {
        Sign::Plus => (Inequality::new(i.clone(), gamma.clone()), i),
        Sign::Minus => (Inequality::new(gamma.clone(), Formula::neg(i.clone())), Formula::neg(i)),
    };
    let mut out = sys.clone();
    out.premises.push(premise);
    out.ineq = with_side(&sys.ineq, side, f.replace_at(path, replacement).expect("path checked"));
    Ok(out)
}

// ----- residuation, splitting, Ackermann

pub fn apply_residuation(rule: Residuation, ineq: &Inequality) -> Result<Inequality, EngineError> {
    use Formula::*;
    use Residuation::*;
    let c = |f: &std::boxed::Box<Formula>| (**f).clone();
    let out = match (rule, &ineq.lhs, &ineq.rhs) {
        (DiamondRes, Diamond(g), d) => Some(Inequality::new(c(g), Formula::black_box(d.clone()))),
        (BoxRes, g, Box(d)) => Some(Inequality::new(Formula::black_diamond(g.clone()), c(d))),
        (NegResLeft, Neg(g), d) => Some(Inequality::new(Formula::neg(d.clone()), c(g))),
        (NegResRight, g, Neg(d)) => Some(Inequality::new(c(d), Formula::neg(g.clone()))),
        (AndRes1, And(g, d), b) => Some(Inequality::new(c(g), Formula::implies(c(d), b.clone()))),
        (AndRes2, And(g, d), b) => Some(Inequality::new(c(d), Formula::implies(c(g), b.clone()))),
        (OrRes1, g, Or(d, b)) => Some(Inequality::new(Formula::and(g.clone(), Formula::neg(c(d))), c(b))),
        (OrRes2, g, Or(d, b)) => Some(Inequality::new(Formula::and(g.clone(), Formula::neg(c(b))), c(d))),
        (ImpRes1, g, Implies(d, b)) => Some(Inequality::new(Formula::and(g.clone(), c(d)), c(b))),
        (ImpRes2, g, Implies(d, b)) => Some(Inequality::new(c(d), Formula::implies(g.clone(), c(b)))),
        _ => None,
    };
    out.ok_or_else(|| EngineError::SchemeMismatch {
        rule: rule.to_string(),
        ineq: ineq.to_string(),
    })
}

/// `ξ ≤ α ∧ β` becomes `ξ ≤ α, ξ ≤ β`; `α ∨ β ≤ χ` becomes `α ≤ χ, β ≤ χ`.
pub fn split_premise(ineq: &Inequality) -> Result<(Inequality, Inequality), EngineError> {
    let side = if matches!(ineq.rhs, Formula::And(..)) { Side::Rhs } else { Side::Lhs };
    apply_split(ineq, side)
}

pub fn ackermann(sys: &System, var: &str, side: AckSide) -> Result<System, EngineError> {
    let blocked = |ineq: &Inequality| EngineError::Ackermann {
        var: var.into(),
        offending: ineq.to_string(),
    };
    if sys.ineq.contains_prop(var) {
        return Err(blocked(&sys.ineq));
    }
    let p = Formula::prop(var);
    let mut alphas = Vec::new();
    let mut rest = Vec::new();
    for ineq in &sys.premises {
        let (isolated, other) = match side {
            AckSide::Right => (&ineq.rhs, &ineq.lhs),
            AckSide::Left => (&ineq.lhs, &ineq.rhs),
        };
        if *isolated == p && !other.contains_prop(var) {
            alphas.push(other.clone());
            continue;
        }
        // Right: β positive and γ negative in p. Left: the reverse.
        let (want_l, want_r) = match side {
            AckSide::Right => (Polarity::Positive, Polarity::Negative),
            AckSide::Left => (Polarity::Negative, Polarity::Positive),
        };
        let ok = |f: &Formula, want| matches!(f.polarity(var), Polarity::Absent) || f.polarity(var) == want;
        if !ok(&ineq.lhs, want_l) || !ok(&ineq.rhs, want_r) {
            return Err(blocked(ineq));
        }
        rest.push(ineq);
    }
    let value = match side {
        AckSide::Right => Formula::big_or(alphas),
        AckSide::Left => Formula::big_and(alphas),
    };
    Ok(System {
        premises: rest.into_iter().map(|q| q.substitute(var, &value)).collect(),
        ineq: sys.ineq.clone(),
    })
}

// ---------------------------------------------------------------------------
// Strategy

/// Fresh nominals `i, j, k, i1, j1, k1, …`, shared by all systems of a run.
#[derive(Default)]
struct NominalSupply {
    next: usize,
}

impl NominalSupply {
    fn fresh(&mut self) -> String {
        let letter = ['i', 'j', 'k'][self.next % 3];
        let round = self.next / 3;
        self.next += 1;
        if round == 0 {
            letter.to_string()
        } else {
            format!("{letter}{round}")
        }
    }
}

/// Occurrences of `var` carrying `sign` in the premise trees `−lhs`, `+rhs`.
fn occurrences(ineq: &Inequality, var: &str, sign: Sign) -> Vec<(Side, Path)> {
    fn walk(f: &Formula, s: Sign, var: &str, want: Sign, side: Side, path: &mut Path, out: &mut Vec<(Side, Path)>) {
        if matches!(f, Formula::Prop(p) if p == var) {
            if s == want {
                out.push((side, path.clone()));
            }
            return;
        }
        for (k, c) in f.children().into_iter().enumerate() {
            path.push(k);
            walk(c, f.child_sign(s, k), var, want, side, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(&ineq.lhs, Sign::Minus, var, sign, Side::Lhs, &mut Vec::new(), &mut out);
    walk(&ineq.rhs, Sign::Plus, var, sign, Side::Rhs, &mut Vec::new(), &mut out);
    out
}

fn solved(ineq: &Inequality, var: &str, eps: Eps) -> bool {
    let p = Formula::prop(var);
    match eps {
        Eps::One => ineq.rhs == p && !ineq.lhs.contains_prop(var),
        Eps::Dual => ineq.lhs == p && !ineq.rhs.contains_prop(var),
    }
}

/// The rule that moves the occurrence at `path` of `side` one level up.
fn peel_rule(ineq: &Inequality, side: Side, path: &[usize]) -> Option<RuleApp> {
    use Formula::*;
    use Residuation::*;
    let k = *path.first()?;
    let res = |rule| Some(RuleApp::Residuate { rule, premise: 0 });
    match (side, side_formula(ineq, side)) {
        (Side::Rhs, Box(_)) => res(BoxRes),
        (Side::Rhs, And(..)) => Some(RuleApp::SplitPremise { premise: 0 }),
        (Side::Rhs, Neg(_)) => res(NegResRight),
        (Side::Rhs, Or(..)) => res(if k == 0 { OrRes2 } else { OrRes1 }),
        (Side::Rhs, Implies(..)) => res(if k == 1 { ImpRes1 } else { ImpRes2 }),
        (Side::Lhs, Diamond(_)) => res(DiamondRes),
        (Side::Lhs, Or(..)) => Some(RuleApp::SplitPremise { premise: 0 }),
        (Side::Lhs, Neg(_)) => res(NegResLeft),
        (Side::Lhs, And(..)) => res(if k == 0 { AndRes1 } else { AndRes2 }),
        _ => None,
    }
}

fn with_premise(rule: RuleApp, premise: usize) -> RuleApp {
    match rule {
        RuleApp::Residuate { rule, .. } => RuleApp::Residuate { rule, premise },
        RuleApp::SplitPremise { .. } => RuleApp::SplitPremise { premise },
        other => other,
    }
}

enum Stuck {
    Budget,
    Blocked(String),
}

/// Residuates and splits premises until every critical occurrence of `var` is
/// in solved form, then applies the matching Ackermann rule.
fn eliminate_var(sys: &System, index: usize, var: &str, eps: Eps, budget: &mut usize) -> Result<(System, Vec<Step>), Stuck> {
    let crit = eps.critical_sign();
    let mut cur = sys.clone();
    let mut steps = Vec::new();
    let mut record = |cur: &mut System, rule: RuleApp, budget: &mut usize| -> Result<(), Stuck> {
        if *budget == 0 {
            return Err(Stuck::Budget);
        }
        *budget -= 1;
        let after = apply_rule(cur, &rule).map_err(|e| Stuck::Blocked(e.to_string()))?;
        let before = std::mem::replace(cur, after[0].clone());
        steps.push(Step {
            rule,
            index,
            before,
            after,
            fresh: Vec::new(),
        });
        Ok(())
    };
    loop {
        let next = cur.premises.iter().enumerate().find_map(|(m, q)| {
            if solved(q, var, eps) {
                return None;
            }
            occurrences(q, var, crit).into_iter().next().map(|occ| (m, occ))
        });
        let Some((m, (side, path))) = next else { break };
        let q = &cur.premises[m];
        let rule = peel_rule(q, side, &path)
            .ok_or_else(|| Stuck::Blocked(format!("cannot isolate {var} in {q}")))?;
        record(&mut cur, with_premise(rule, m), budget)?;
    }
    let side = match eps {
        Eps::One => AckSide::Right,
        Eps::Dual => AckSide::Left,
    };
    record(&mut cur, RuleApp::Ackermann { var: var.into(), side }, budget)?;
    Ok((cur, steps))
}

struct SystemOutcome {
    system: System,
    failure: Option<String>,
}

fn run_system(
    sys: System,
    index: usize,
    witness: Option<&(DependenceOrder, OrderType)>,
    supply: &mut NominalSupply,
    steps: &mut Vec<Step>,
    rule_budget: usize,
) -> SystemOutcome {
    let mut cur = sys;
    for (flavor, path) in approximation_targets(&cur.ineq) {
        let nominal = supply.fresh();
        let rule = RuleApp::Approximate {
            flavor,
            path,
            nominal: nominal.clone(),
        };
        let after = apply_rule(&cur, &rule).expect("targets satisfy the approximation side conditions");
        let before = std::mem::replace(&mut cur, after[0].clone());
        steps.push(Step {
            rule,
            index,
            before,
            after,
            fresh: vec![nominal],
        });
    }
    let mut budget = if witness.is_some() { usize::MAX } else { rule_budget };
    loop {
        let remaining = cur.props();
        if remaining.is_empty() {
            return SystemOutcome {
                system: cur,
                failure: None,
            };
        }
        let candidates: Vec<(String, Eps)> = match witness {
            Some((omega, eps)) => {
                let v = omega.minimal(&remaining)[0].clone();
                let e = eps.get(&v).unwrap_or(Eps::One);
                vec![(v, e)]
            }
            None => remaining.iter().flat_map(|v| [(v.clone(), Eps::One), (v.clone(), Eps::Dual)]).collect(),
        };
        let mut last = String::new();
        let mut progressed = false;
        for (v, e) in candidates {
            match eliminate_var(&cur, index, &v, e, &mut budget) {
                Ok((next, mut s)) => {
                    steps.append(&mut s);
                    cur = next;
                    progressed = true;
                    break;
                }
                Err(Stuck::Budget) => {
                    return SystemOutcome {
                        system: cur,
                        failure: Some(format!("rule budget of {rule_budget} exhausted")),
                    }
                }
                Err(Stuck::Blocked(why)) => last = format!("{v} (ε={e}): {why}"),
            }
        }
        if !progressed {
            return SystemOutcome {
                system: cur,
                failure: Some(format!("no variable can be eliminated; last attempt {last}")),
            };
        }
    }
}

pub fn run_alba(ineq: &Inequality) -> Result<AlbaResult, EngineError> {
    run_alba_with(ineq, &AlbaOptions::default())
}

pub fn run_alba_with(ineq: &Inequality, opts: &AlbaOptions) -> Result<AlbaResult, EngineError> {
    if !ineq.is_basic() {
        return Err(EngineError::NotBasic);
    }
    let witness = classify(ineq)?.verdict.witness();
    let mut trace = RuleTrace::new(ineq);
    let initial = preprocess_traced(ineq, &mut trace.steps);
    let mut supply = NominalSupply::default();
    let mut systems = Vec::new();
    let mut failures = Vec::new();
    for (index, sys) in initial.into_iter().enumerate() {
        let out = run_system(sys, index, witness.as_ref(), &mut supply, &mut trace.steps, opts.rule_budget);
        if let Some(reason) = out.failure {
            failures.push(format!("system {index}: {reason}"));
        }
        systems.push(out.system);
    }
    if !failures.is_empty() {
        return Ok(AlbaResult::Failure {
            residual: systems,
            trace,
            reason: failures.join("; "),
        });
    }
    let quasi: Vec<QuasiInequality> = systems.iter().map(System::to_quasi).collect();
    let fo = translate_quasi(&quasi)?;
    let simplified = if opts.simplify {
        let quasi: Vec<QuasiInequality> = systems.iter().map(simplify_system).collect();
        let fo = translate_quasi(&quasi)?;
        Some(Simplified { quasi, fo })
    } else {
        None
    };
    Ok(AlbaResult::Success {
        systems,
        quasi,
        fo,
        trace,
        simplified,
    })
}

// ---------------------------------------------------------------------------
// Simplification of pure systems

fn negated_nominal(f: &Formula) -> Option<&str> {
    match f {
        Formula::Neg(inner) => match &**inner {
            Formula::Nominal(j) => Some(j),
            _ => None,
        },
        _ => None,
    }
}

/// `ξ ≤ ¬j` under premises `β_k ≤ ¬j` becomes `ξ ≤ ⋁β_k`; dually `i ≤ χ`
/// under premises `i ≤ γ_k` becomes `⋀γ_k ≤ χ`. Applies only when the
/// nominal occurs nowhere else.
fn simplify_once(q: &QuasiInequality) -> Option<QuasiInequality> {
    let mentions = |i: &Inequality, n: &str| i.nominals().contains(n);
    if let Some(j) = negated_nominal(&q.conclusion.rhs) {
        if !q.conclusion.lhs.nominals().contains(j) {
            let (with, without): (Vec<&Inequality>, Vec<&Inequality>) = q.premises.iter().partition(|p| mentions(p, j));
            if with.iter().all(|p| negated_nominal(&p.rhs) == Some(j) && !p.lhs.nominals().contains(j)) {
                let join = Formula::big_or(with.iter().map(|p| p.lhs.clone()));
                return Some(QuasiInequality::new(
                    without.into_iter().cloned().collect(),
                    Inequality::new(q.conclusion.lhs.clone(), join),
                ));
            }
        }
    }
    if let Formula::Nominal(i) = &q.conclusion.lhs {
        if !q.conclusion.rhs.nominals().contains(i) {
            let (with, without): (Vec<&Inequality>, Vec<&Inequality>) = q.premises.iter().partition(|p| mentions(p, i));
            if with.iter().all(|p| p.lhs == q.conclusion.lhs && !p.rhs.nominals().contains(i)) {
                let meet = Formula::big_and(with.iter().map(|p| p.rhs.clone()));
                return Some(QuasiInequality::new(
                    without.into_iter().cloned().collect(),
                    Inequality::new(meet, q.conclusion.rhs.clone()),
                ));
            }
        }
    }
    None
}

/// Eliminates nominals that only link premises to the conclusion.
pub fn simplify_system(sys: &System) -> QuasiInequality {
    let mut q = sys.to_quasi();
    while let Some(next) = simplify_once(&q) {
        q = next;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::{alpha_eq, FOFormula as F, Translator};
    use crate::syntax::{parse_formula, parse_inequality};

    fn ineq(s: &str) -> Inequality {
        parse_inequality(s).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn worked_example_rule_sequence() {
        let r = run_alba(&ineq("box p <= p")).unwrap();
        assert_eq!(r.trace().rule_names(), ["L+A", "R-A", "□Res", "Right Ackermann"]);
        let AlbaResult::Success { systems, fo, .. } = &r else { panic!("expected success") };
        let expected = System {
            premises: vec![Inequality::new(
                Formula::black_diamond(Formula::nominal("i")),
                Formula::neg(Formula::nominal("j")),
            )],
            ineq: Inequality::new(Formula::nominal("i"), Formula::neg(Formula::nominal("j"))),
        };
        assert_eq!(systems, &vec![expected]);
        assert!(fo.free_vars().is_empty());
    }

    #[test]
    fn worked_example_intermediate_systems() {
        let r = run_alba(&ineq("box p <= p")).unwrap();
        let shown: Vec<String> = r.trace().steps.iter().map(|s| s.after[0].to_string()).collect();
        assert_eq!(
            shown,
            [
                "({i <= box p}, i <= p)",
                "({i <= box p, p <= ~j}, i <= ~j)",
                "({bdia i <= p, p <= ~j}, i <= ~j)",
                "({bdia i <= ~j}, i <= ~j)",
            ]
        );
    }

    #[test]
    fn simplified_worked_example() {
        let opts = AlbaOptions {
            simplify: true,
            ..AlbaOptions::default()
        };
        let r = run_alba_with(&ineq("box p <= p"), &opts).unwrap();
        let AlbaResult::Success { simplified: Some(s), .. } = r else { panic!() };
        assert_eq!(s.quasi.len(), 1);
        assert_eq!(s.quasi[0].to_string(), "i <= bdia i");
        // ∀i∀x(RO_x(x=i) → RO_x(∃y(Ryx ∧ RO_y(y=i))))
        let mut t = Translator::new().with_nominal_vars();
        let lhs = t.st(&Formula::nominal("i"), "x");
        let rhs = t.st(&f("bdia i"), "x");
        let expected = F::forall("i", F::forall("x", F::implies(lhs, rhs)));
        assert!(alpha_eq(&s.fo, &expected), "{:?}", s.fo);
    }

    #[test]
    fn preprocess_examples() {
        assert_eq!(preprocess(&ineq("box p <= p")), vec![ineq("box p <= p")]);
        // Distribution, then splitting. After the split, the mixed
        // inequalities have uniform variables again.
        assert_eq!(
            preprocess(&ineq("dia (p | q) <= p & q")),
            ["dia p <= p", "dia T <= F", "dia T <= F", "dia q <= q"].map(ineq).to_vec()
        );
        // With uniform variables everything collapses to constants.
        assert_eq!(preprocess(&ineq("dia (p | q) <= r")), vec![ineq("dia T <= F"); 2]);
        // Both variables occur uniformly and are replaced.
        assert_eq!(preprocess(&ineq("~p & r <= p")), vec![ineq("~F & T <= F")]);
    }

    #[test]
    fn distribution_only_in_skeleton() {
        // +□ is not a Skeleton node, so the ∨ below it stays.
        let i = ineq("box (p | q) <= p");
        assert!(next_distribution(&i).is_none());
        let i = ineq("p & q <= box (p & q)");
        assert_eq!(preprocess(&i), vec![ineq("p & T <= box p"), ineq("T & q <= box q")]);
    }

    #[test]
    fn approximation_side_conditions() {
        let sys = System::initial(ineq("box p <= p"));
        let s1 = apply_approximation(&sys, &[], Flavor::LeftPositive, "i").unwrap();
        assert_eq!(s1.to_string(), "({i <= box p}, i <= p)");
        let s2 = apply_approximation(&s1, &[], Flavor::RightNegative, "j").unwrap();
        assert_eq!(s2.to_string(), "({i <= box p, p <= ~j}, i <= ~j)");
        // +□ is not SLR, so p below it cannot be approximated.
        let bad = apply_approximation(&sys, &[0], Flavor::LeftPositive, "i");
        assert!(matches!(bad, Err(EngineError::SideCondition { .. })));
        // wrong sign
        assert!(apply_approximation(&sys, &[], Flavor::LeftNegative, "i").is_err());
        // not fresh
        assert!(apply_approximation(&s1, &[], Flavor::RightNegative, "i").is_err());
    }

    #[test]
    fn residuation_schemes() {
        let r = |rule, s: &str| apply_residuation(rule, &ineq(s)).map(|i| i.to_string());
        assert_eq!(r(Residuation::BoxRes, "i <= box p").unwrap(), "bdia i <= p");
        assert_eq!(r(Residuation::DiamondRes, "dia q <= r").unwrap(), "q <= bbox r");
        assert_eq!(r(Residuation::OrRes1, "q <= r | s").unwrap(), "q & ~r <= s");
        assert_eq!(r(Residuation::OrRes2, "q <= r | s").unwrap(), "q & ~s <= r");
        assert_eq!(r(Residuation::AndRes1, "q & r <= s").unwrap(), "q <= r -> s");
        assert_eq!(r(Residuation::AndRes2, "q & r <= s").unwrap(), "r <= q -> s");
        assert_eq!(r(Residuation::ImpRes1, "q <= r -> s").unwrap(), "q & r <= s");
        assert_eq!(r(Residuation::ImpRes2, "q <= r -> s").unwrap(), "r <= q -> s");
        assert_eq!(r(Residuation::NegResLeft, "~q <= r").unwrap(), "~r <= q");
        assert_eq!(r(Residuation::NegResRight, "q <= ~r").unwrap(), "r <= ~q");
        assert!(matches!(
            r(Residuation::BoxRes, "i <= dia p"),
            Err(EngineError::SchemeMismatch { .. })
        ));
    }

    #[test]
    fn ackermann_rules() {
        let sys = System {
            premises: vec![ineq("bdia i <= p"), ineq("p <= ~j")],
            ineq: ineq("i <= ~j"),
        };
        let out = ackermann(&sys, "p", AckSide::Right).unwrap();
        assert_eq!(out.to_string(), "({bdia i <= ~j}, i <= ~j)");
        // Left with no isolated premise: p := ⊤.
        let sys = System {
            premises: vec![ineq("~j <= p")],
            ineq: ineq("i <= i"),
        };
        assert_eq!(ackermann(&sys, "p", AckSide::Left).unwrap().to_string(), "({~j <= T}, i <= i)");
        // p on both sides of a premise blocks the rule.
        let sys = System {
            premises: vec![ineq("bdia i <= p"), ineq("box p <= p")],
            ineq: ineq("i <= ~j"),
        };
        assert!(matches!(ackermann(&sys, "p", AckSide::Right), Err(EngineError::Ackermann { .. })));
    }

    #[test]
    fn mckinsey_fails() {
        let r = run_alba(&ineq("box dia p <= dia box p")).unwrap();
        assert!(!r.is_success());
    }

    #[test]
    fn corpus_succeeds_and_replays() {
        for s in [
            "box p <= p",
            "box p <= box box p",
            "p <= box dia p",
            "dia box p <= box dia p",
            "dia p <= dia dia p",
            "box (box q -> p) <= dia box p",
            "p & dia q <= box (q | r)",
            "~box p <= box ~box p",
        ] {
            let r = run_alba(&ineq(s)).unwrap();
            assert!(r.is_success(), "{s}: {r:?}");
            assert!(r.systems().iter().all(System::is_pure));
            assert_eq!(r.trace().replay().unwrap(), r.systems(), "{s}");
            let again = run_alba(&ineq(s)).unwrap();
            assert_eq!(again, r);
        }
    }

    #[test]
    fn fresh_nominals_are_distinct() {
        let r = run_alba(&ineq("dia (p | q) <= box (p & q)")).unwrap();
        let fresh: Vec<&String> = r.trace().steps.iter().flat_map(|s| &s.fresh).collect();
        let unique: BTreeSet<&String> = fresh.iter().copied().collect();
        assert_eq!(fresh.len(), unique.len());
        assert!(fresh.len() > 3);
    }
}
