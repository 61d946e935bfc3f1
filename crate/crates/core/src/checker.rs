//! Semantic evaluation on finite full frames.
//!
//! `truth_set` computes through the operation tables of the regular open
//! algebra. `pointwise_truth_set` is a separate evaluator that follows the
//! satisfaction clauses point by point and never touches the algebra; the
//! two are cross-checked in tests.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fo::{canonical_names, FOFormula, RelSym, Term};
use crate::frames::{dump_frame, is_full_frame, Elem, FrameError, PointSet, Poset, PossibilityFrame, Relation, RoAlgebra};
use crate::syntax::{Formula, Inequality, QuasiInequality};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("unbound propositional variable `{0}`")]
    UnboundProp(String),
    #[error("unbound nominal `{0}`")]
    UnboundNominal(String),
    #[error("unbound first-order symbol `{0}`")]
    UnboundSymbol(String),
    #[error("the underlying full frame is not well defined: box does not preserve regular opens")]
    NotFull,
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// A frame together with its regular open algebra.
#[derive(Clone, Debug)]
pub struct Model {
    pub frame: PossibilityFrame,
    pub alg: RoAlgebra,
    admissible: Vec<Elem>,
}

impl Model {
    /// Refuses frames whose full counterpart is not well defined.
    pub fn new(frame: PossibilityFrame) -> Result<Model, CheckError> {
        if !is_full_frame(&frame.poset, &frame.acc) {
            return Err(CheckError::NotFull);
        }
        let alg = RoAlgebra::of_frame(&frame)?;
        let admissible = frame
            .admissible
            .iter()
            .map(|&x| alg.index_of(x))
            .collect::<Result<_, _>>()?;
        Ok(Model {
            frame,
            alg,
            admissible,
        })
    }

    pub fn size(&self) -> usize {
        self.frame.size()
    }
}

/// Values of variables as algebra elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub props: BTreeMap<String, Elem>,
    pub noms: BTreeMap<String, Elem>,
}

impl Assignment {
    pub fn with_prop(mut self, name: &str, e: Elem) -> Self {
        self.props.insert(name.to_string(), e);
        self
    }

    pub fn with_nom(mut self, name: &str, e: Elem) -> Self {
        self.noms.insert(name.to_string(), e);
        self
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Top,
    Bottom,
    Prop(usize),
    Nom(usize),
    Neg,
    And,
    Or,
    Implies,
    Box,
    Diamond,
    BlackDiamond,
    BlackBox,
}

/// A formula in postfix form with its variables numbered.
#[derive(Clone, Debug)]
pub struct Compiled {
    ops: Vec<Op>,
}

/// Shared variable numbering for a group of compiled formulas.
#[derive(Clone, Debug, Default)]
pub struct Slots {
    pub props: Vec<String>,
    pub noms: Vec<String>,
}

impl Slots {
    pub fn for_names(props: BTreeSet<String>, noms: BTreeSet<String>) -> Slots {
        Slots {
            props: props.into_iter().collect(),
            noms: noms.into_iter().collect(),
        }
    }

    pub fn compile(&self, f: &Formula) -> Compiled {
        let mut ops = Vec::with_capacity(f.size());
        self.emit(f, &mut ops);
        Compiled { ops }
    }

    fn emit(&self, f: &Formula, ops: &mut Vec<Op>) {
        for c in f.children() {
            self.emit(c, ops);
        }
        ops.push(match f {
            Formula::Top => Op::Top,
            Formula::Bottom => Op::Bottom,
            Formula::Prop(p) => Op::Prop(self.props.iter().position(|x| x == p).expect("prop slot")),
            Formula::Nominal(n) => Op::Nom(self.noms.iter().position(|x| x == n).expect("nominal slot")),
            Formula::Neg(_) => Op::Neg,
            Formula::And(..) => Op::And,
            Formula::Or(..) => Op::Or,
            Formula::Implies(..) => Op::Implies,
            Formula::Box(_) => Op::Box,
            Formula::Diamond(_) => Op::Diamond,
            Formula::BlackDiamond(_) => Op::BlackDiamond,
            Formula::BlackBox(_) => Op::BlackBox,
        });
    }
}

impl Compiled {
    pub fn eval(&self, alg: &RoAlgebra, props: &[Elem], noms: &[Elem], stack: &mut Vec<Elem>) -> Elem {
        stack.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Top => alg.top(),
                Op::Bottom => alg.bottom(),
                Op::Prop(k) => props[k],
                Op::Nom(k) => noms[k],
                Op::Neg => {
                    let a = stack.pop().expect("operand");
                    alg.complement(a)
                }
                Op::Box => {
                    let a = stack.pop().expect("operand");
                    alg.box_op(a)
                }
                Op::Diamond => {
                    let a = stack.pop().expect("operand");
                    alg.diamond(a)
                }
                Op::BlackDiamond => {
                    let a = stack.pop().expect("operand");
                    alg.black_diamond(a)
                }
                Op::BlackBox => {
                    let a = stack.pop().expect("operand");
                    alg.black_box(a)
                }
                Op::And | Op::Or | Op::Implies => {
                    let b = stack.pop().expect("operand");
                    let a = stack.pop().expect("operand");
                    match op {
                        Op::And => alg.meet(a, b),
                        Op::Or => alg.join(a, b),
                        _ => alg.implies(a, b),
                    }
                }
            };
            stack.push(v);
        }
        stack.pop().expect("result")
    }
}

fn lookup_slots(slots: &Slots, asg: &Assignment) -> Result<(Vec<Elem>, Vec<Elem>), CheckError> {
    let props = slots
        .props
        .iter()
        .map(|p| asg.props.get(p).copied().ok_or_else(|| CheckError::UnboundProp(p.clone())))
        .collect::<Result<_, _>>()?;
    let noms = slots
        .noms
        .iter()
        .map(|n| asg.noms.get(n).copied().ok_or_else(|| CheckError::UnboundNominal(n.clone())))
        .collect::<Result<_, _>>()?;
    Ok((props, noms))
}

/// `⟦φ⟧` as an algebra element.
pub fn truth_set(alg: &RoAlgebra, asg: &Assignment, phi: &Formula) -> Result<Elem, CheckError> {
    let slots = Slots::for_names(phi.props(), phi.nominals());
    let (props, noms) = lookup_slots(&slots, asg)?;
    Ok(slots.compile(phi).eval(alg, &props, &noms, &mut Vec::new()))
}

/// `⟦φ⟧` from the satisfaction clauses, with variables valued as point sets.
pub fn pointwise_truth_set(
    poset: &Poset,
    acc: &Relation,
    props: &BTreeMap<String, PointSet>,
    noms: &BTreeMap<String, PointSet>,
    phi: &Formula,
) -> Result<PointSet, CheckError> {
    let n = poset.size();
    let points = || 0..n;
    let below = |w: usize| points().filter(move |&v| poset.leq(v, w));
    let above = |w: usize| points().filter(move |&v| poset.leq(w, v));
    let sat = |test: &dyn Fn(usize) -> bool| PointSet::from_points(points().filter(|&w| test(w)));
    let rec = |f: &Formula| pointwise_truth_set(poset, acc, props, noms, f);
    Ok(match phi {
        Formula::Top => PointSet::full(n),
        Formula::Bottom => PointSet::EMPTY,
        Formula::Prop(p) => *props.get(p).ok_or_else(|| CheckError::UnboundProp(p.clone()))?,
        Formula::Nominal(i) => *noms.get(i).ok_or_else(|| CheckError::UnboundNominal(i.clone()))?,
        Formula::Neg(a) => {
            let s = rec(a)?;
            sat(&|w| below(w).all(|v| !s.contains(v)))
        }
        Formula::And(a, b) => rec(a)?.intersection(rec(b)?),
        Formula::Or(a, b) => {
            let (sa, sb) = (rec(a)?, rec(b)?);
            sat(&|w| below(w).all(|v| below(v).any(|u| sa.contains(u) || sb.contains(u))))
        }
        Formula::Implies(a, b) => {
            let (sa, sb) = (rec(a)?, rec(b)?);
            sat(&|w| below(w).all(|v| !sa.contains(v) || sb.contains(v)))
        }
        Formula::Box(a) => {
            let s = rec(a)?;
            sat(&|w| points().all(|v| !acc.holds(w, v) || s.contains(v)))
        }
        Formula::Diamond(a) => {
            let s = rec(a)?;
            sat(&|w| {
                below(w).all(|v| points().any(|u| acc.holds(v, u) && below(u).any(|t| s.contains(t))))
            })
        }
        Formula::BlackDiamond(a) => {
            let s = rec(a)?;
            sat(&|w| {
                below(w).all(|v| {
                    below(v).any(|u| above(u).any(|t| points().any(|r| acc.holds(r, t) && s.contains(r))))
                })
            })
        }
        Formula::BlackBox(a) => {
            let s = rec(a)?;
            sat(&|w| {
                below(w).all(|v| {
                    above(v).all(|u| points().all(|t| !acc.holds(t, u) || below(t).any(|r| s.contains(r))))
                })
            })
        }
    })
}

/// Range of propositional variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Admissible,
    Full,
}

/// An assignment (as point sets) refuting a check, with a witnessing point
/// when one exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub props: BTreeMap<String, PointSet>,
    pub noms: BTreeMap<String, PointSet>,
    pub point: Option<usize>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, v) in self.props.iter().chain(self.noms.iter()) {
            parts.push(format!("{k}={v}"));
        }
        if let Some(w) = self.point {
            parts.push(format!("at w{w}"));
        }
        f.write_str(&parts.join(" "))
    }
}

/// Checks one quasi-inequality over every assignment, props first in name
/// order (last name varying fastest) then nominals over pseudo-atoms.
pub struct QuasiChecker {
    slots: Slots,
    premises: Vec<(Compiled, Compiled)>,
    conclusion: (Compiled, Compiled),
}

impl QuasiChecker {
    pub fn new(q: &QuasiInequality) -> QuasiChecker {
        let slots = Slots::for_names(q.props(), q.nominals());
        let pair = |i: &Inequality| (slots.compile(&i.lhs), slots.compile(&i.rhs));
        let premises = q.premises.iter().map(pair).collect();
        let conclusion = pair(&q.conclusion);
        QuasiChecker {
            slots,
            premises,
            conclusion,
        }
    }

    pub fn check(&self, model: &Model, mode: Mode) -> Result<(), Counterexample> {
        let alg = &model.alg;
        let prop_range: Vec<Elem> = match mode {
            Mode::Full => (0..alg.len()).collect(),
            Mode::Admissible => model.admissible.clone(),
        };
        let nom_range: Vec<Elem> = alg.psat().iter().map(|&(e, _)| e).collect();
        let np = self.slots.props.len();
        let nn = self.slots.noms.len();
        let radices: Vec<usize> = std::iter::repeat_n(prop_range.len(), np)
            .chain(std::iter::repeat_n(nom_range.len(), nn))
            .collect();
        if radices.contains(&0) {
            return Ok(());
        }
        let mut digits = vec![0usize; np + nn];
        let mut props = vec![0; np];
        let mut noms = vec![0; nn];
        let mut stack = Vec::new();
        loop {
            for k in 0..np {
                props[k] = prop_range[digits[k]];
            }
            for k in 0..nn {
                noms[k] = nom_range[digits[np + k]];
            }
            let holds = |(l, r): &(Compiled, Compiled), stack: &mut Vec<Elem>| {
                let a = l.eval(alg, &props, &noms, stack);
                let b = r.eval(alg, &props, &noms, stack);
                (a, b)
            };
            let premises_hold = self.premises.iter().all(|p| {
                let (a, b) = holds(p, &mut stack);
                alg.leq(a, b)
            });
            if premises_hold {
                let (a, b) = holds(&self.conclusion, &mut stack);
                if !alg.leq(a, b) {
                    let witness = alg.set(a).minus(alg.set(b)).iter().next();
                    return Err(Counterexample {
                        props: self.slots.props.iter().cloned().zip(props.iter().map(|&e| alg.set(e))).collect(),
                        noms: self.slots.noms.iter().cloned().zip(noms.iter().map(|&e| alg.set(e))).collect(),
                        point: witness,
                    });
                }
            }
            // odometer step, last position fastest
            let mut k = digits.len();
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < radices[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
    }
}

pub fn inequality_valid(model: &Model, ineq: &Inequality, mode: Mode) -> Result<(), Counterexample> {
    QuasiChecker::new(&QuasiInequality::new(vec![], ineq.clone())).check(model, mode)
}

pub fn quasi_valid(model: &Model, q: &QuasiInequality, mode: Mode) -> Result<(), Counterexample> {
    QuasiChecker::new(q).check(model, mode)
}

/// First-order formula prepared for repeated evaluation: bound variables are
/// renamed apart and every subformula is evaluated once, as a table over its
/// free variables.
pub struct CompiledFo {
    nodes: Vec<FoNode>,
    var_names: Vec<String>,
    root_free: Vec<usize>,
}

#[derive(Clone, Debug)]
enum FoTerm {
    Var(usize),
    Const(String),
}

#[derive(Clone, Debug)]
enum FoKind {
    Top,
    Bottom,
    Eq(FoTerm, FoTerm),
    Rel(RelSym, FoTerm, FoTerm),
    Pred(String, FoTerm),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    ForAll(usize, usize),
    Exists(usize, usize),
}

#[derive(Clone, Debug)]
struct FoNode {
    kind: FoKind,
    free: Vec<usize>,
}

impl CompiledFo {
    pub fn new(alpha: &FOFormula) -> CompiledFo {
        let renamed = canonical_names(alpha);
        let mut c = CompiledFo {
            nodes: Vec::new(),
            var_names: Vec::new(),
            root_free: Vec::new(),
        };
        let root = c.build(&renamed);
        debug_assert_eq!(root, c.nodes.len() - 1);
        c.root_free = c.nodes[root].free.clone();
        c
    }

    fn var(&mut self, name: &str) -> usize {
        match self.var_names.iter().position(|v| v == name) {
            Some(k) => k,
            None => {
                self.var_names.push(name.to_string());
                self.var_names.len() - 1
            }
        }
    }

    fn term(&mut self, t: &Term) -> FoTerm {
        match t {
            Term::Var(v) => FoTerm::Var(self.var(v)),
            Term::Const(c) => FoTerm::Const(c.clone()),
        }
    }

    fn push(&mut self, kind: FoKind, mut free: Vec<usize>) -> usize {
        free.sort_unstable();
        free.dedup();
        self.nodes.push(FoNode { kind, free });
        self.nodes.len() - 1
    }

    fn build(&mut self, f: &FOFormula) -> usize {
        let tvars = |ts: &[&FoTerm]| {
            ts.iter()
                .filter_map(|t| match t {
                    FoTerm::Var(v) => Some(*v),
                    FoTerm::Const(_) => None,
                })
                .collect::<Vec<_>>()
        };
        match f {
            FOFormula::Top => self.push(FoKind::Top, vec![]),
            FOFormula::Bottom => self.push(FoKind::Bottom, vec![]),
            FOFormula::Eq(a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                let fv = tvars(&[&a, &b]);
                self.push(FoKind::Eq(a, b), fv)
            }
            FOFormula::Rel(r, a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                let fv = tvars(&[&a, &b]);
                self.push(FoKind::Rel(*r, a, b), fv)
            }
            FOFormula::Pred(p, a) => {
                let a = self.term(a);
                let fv = tvars(&[&a]);
                self.push(FoKind::Pred(p.clone(), a), fv)
            }
            FOFormula::Not(a) => {
                let a = self.build(a);
                let fv = self.nodes[a].free.clone();
                self.push(FoKind::Not(a), fv)
            }
            FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Implies(a, b) => {
                let a = self.build(a);
                let b = self.build(b);
                let mut fv = self.nodes[a].free.clone();
                fv.extend(self.nodes[b].free.iter().copied());
                let kind = match f {
                    FOFormula::And(..) => FoKind::And(a, b),
                    FOFormula::Or(..) => FoKind::Or(a, b),
                    _ => FoKind::Implies(a, b),
                };
                self.push(kind, fv)
            }
            FOFormula::ForAll(v, a) | FOFormula::Exists(v, a) => {
                let v = self.var(v);
                let a = self.build(a);
                let fv: Vec<usize> = self.nodes[a].free.iter().copied().filter(|&x| x != v).collect();
                let kind = match f {
                    FOFormula::ForAll(..) => FoKind::ForAll(v, a),
                    _ => FoKind::Exists(v, a),
                };
                self.push(kind, fv)
            }
        }
    }

    /// Names of the free variables of the formula.
    pub fn free_vars(&self) -> Vec<String> {
        self.root_free.iter().map(|&v| self.var_names[v].clone()).collect()
    }

    /// Truth table of the root over its free variables (mixed radix `n`,
    /// first free variable most significant).
    fn table(
        &self,
        poset: &Poset,
        acc: &Relation,
        consts: &HashMap<String, usize>,
        preds: &HashMap<String, PointSet>,
    ) -> Result<Vec<bool>, CheckError> {
        let n = poset.size();
        let mut tables: Vec<Vec<bool>> = Vec::with_capacity(self.nodes.len());
        let mut vals = vec![0usize; self.var_names.len()];
        let index = |free: &[usize], vals: &[usize]| free.iter().fold(0, |acc, &v| acc * n + vals[v]);
        let point = |t: &FoTerm, vals: &[usize]| -> Result<usize, CheckError> {
            match t {
                FoTerm::Var(v) => Ok(vals[*v]),
                FoTerm::Const(c) => consts.get(c).copied().ok_or_else(|| CheckError::UnboundSymbol(c.clone())),
            }
        };
        for node in &self.nodes {
            let rows = n.pow(node.free.len() as u32);
            let mut table = Vec::with_capacity(rows);
            for row in 0..rows {
                let mut r = row;
                for &v in node.free.iter().rev() {
                    vals[v] = r % n;
                    r /= n;
                }
                let value = match &node.kind {
                    FoKind::Top => true,
                    FoKind::Bottom => false,
                    FoKind::Eq(a, b) => point(a, &vals)? == point(b, &vals)?,
                    FoKind::Rel(RelSym::Leq, a, b) => poset.leq(point(a, &vals)?, point(b, &vals)?),
                    FoKind::Rel(RelSym::Acc, a, b) => acc.holds(point(a, &vals)?, point(b, &vals)?),
                    FoKind::Pred(p, a) => preds
                        .get(p)
                        .ok_or_else(|| CheckError::UnboundSymbol(p.clone()))?
                        .contains(point(a, &vals)?),
                    FoKind::Not(a) => !tables[*a][index(&self.nodes[*a].free, &vals)],
                    FoKind::And(a, b) => {
                        tables[*a][index(&self.nodes[*a].free, &vals)]
                            && tables[*b][index(&self.nodes[*b].free, &vals)]
                    }
                    FoKind::Or(a, b) => {
                        tables[*a][index(&self.nodes[*a].free, &vals)]
                            || tables[*b][index(&self.nodes[*b].free, &vals)]
                    }
                    FoKind::Implies(a, b) => {
                        !tables[*a][index(&self.nodes[*a].free, &vals)]
                            || tables[*b][index(&self.nodes[*b].free, &vals)]
                    }
                    FoKind::ForAll(v, a) | FoKind::Exists(v, a) => {
                        let universal = matches!(node.kind, FoKind::ForAll(..));
                        let child = &self.nodes[*a];
                        let mut result = universal;
                        for w in 0..n {
                            vals[*v] = w;
                            if tables[*a][index(&child.free, &vals)] != universal {
                                result = !universal;
                                break;
                            }
                        }
                        result
                    }
                };
                table.push(value);
            }
            tables.push(table);
        }
        Ok(tables.pop().expect("root table"))
    }

    pub fn eval(
        &self,
        poset: &Poset,
        acc: &Relation,
        env: &HashMap<String, usize>,
        consts: &HashMap<String, usize>,
        preds: &HashMap<String, PointSet>,
    ) -> Result<bool, CheckError> {
        let vals = self
            .root_free
            .iter()
            .map(|&v| {
                let name = &self.var_names[v];
                env.get(name).copied().ok_or_else(|| CheckError::UnboundSymbol(name.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let table = self.table(poset, acc, consts, preds)?;
        let n = poset.size();
        Ok(table[vals.iter().fold(0, |a, &v| a * n + v)])
    }

    /// Points `w` at which the formula holds with its only free variable
    /// `x` set to `w`.
    pub fn truth_set(
        &self,
        poset: &Poset,
        acc: &Relation,
        x: &str,
        consts: &HashMap<String, usize>,
        preds: &HashMap<String, PointSet>,
    ) -> Result<PointSet, CheckError> {
        let table = self.table(poset, acc, consts, preds)?;
        match self.free_vars().as_slice() {
            [] => Ok(if table[0] { poset.full() } else { PointSet::EMPTY }),
            [v] if v == x => Ok(PointSet::from_points((0..poset.size()).filter(|&w| table[w]))),
            other => Err(CheckError::UnboundSymbol(other.join(","))),
        }
    }

    /// Truth with free variables and constants both read universally over
    /// the points of the frame.
    pub fn valid(&self, poset: &Poset, acc: &Relation, constants: &BTreeSet<String>) -> Result<bool, CheckError> {
        let n = poset.size();
        let consts: Vec<&String> = constants.iter().collect();
        let total = n.pow(consts.len() as u32);
        for row in 0..total {
            let mut r = row;
            let mut map = HashMap::new();
            for c in consts.iter().rev() {
                map.insert((*c).clone(), r % n);
                r /= n;
            }
            let table = self.table(poset, acc, &map, &HashMap::new())?;
            if table.iter().any(|&b| !b) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn eval_fo(
    frame: &PossibilityFrame,
    alpha: &FOFormula,
    env: &HashMap<String, usize>,
    consts: &HashMap<String, usize>,
    preds: &HashMap<String, PointSet>,
) -> Result<bool, CheckError> {
    CompiledFo::new(alpha).eval(&frame.poset, &frame.acc, env, consts, preds)
}

/// Outcome on one frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub frame_index: usize,
    pub modal_valid: bool,
    pub pure_valid: Option<bool>,
    pub fo_valid: bool,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    pub fn agrees(&self) -> bool {
        self.modal_valid == self.fo_valid && self.pure_valid.is_none_or(|p| p == self.modal_valid)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub verdicts: Vec<Verdict>,
    /// Dump of the first frame where the verdicts disagree.
    pub first_disagreement: Option<String>,
}

impl Report {
    pub fn agree_count(&self) -> usize {
        self.verdicts.iter().filter(|v| v.agrees()).count()
    }

    pub fn all_agree(&self) -> bool {
        self.agree_count() == self.verdicts.len()
    }

    pub fn summary(&self) -> String {
        let tag = if self.all_agree() { "AGREE" } else { "DISAGREE" };
        format!("{tag} {}/{}", self.agree_count(), self.verdicts.len())
    }
}

/// Compares modal validity of `ineq`, validity of the first-order
/// correspondent `fo` and, when given, of the pure quasi-inequalities.
pub fn verify_correspondence(
    ineq: &Inequality,
    fo: &FOFormula,
    pure: Option<&[QuasiInequality]>,
    frames: impl IntoIterator<Item = PossibilityFrame>,
) -> Result<Report, CheckError> {
    let modal = QuasiChecker::new(&QuasiInequality::new(vec![], ineq.clone()));
    let pure_checkers: Option<Vec<QuasiChecker>> = pure.map(|qs| qs.iter().map(QuasiChecker::new).collect());
    let compiled = CompiledFo::new(fo);
    // free variables and constants are both read universally
    let constants = fo.constants();
    let mut report = Report::default();
    for (k, frame) in frames.into_iter().enumerate() {
        let model = Model::new(frame)?;
        let modal_result = modal.check(&model, Mode::Full);
        let pure_valid = pure_checkers
            .as_ref()
            .map(|cs| cs.iter().all(|c| c.check(&model, Mode::Full).is_ok()));
        let fo_valid = compiled.valid(&model.frame.poset, &model.frame.acc, &constants)?;
        let verdict = Verdict {
            frame_index: k,
            modal_valid: modal_result.is_ok(),
            pure_valid,
            fo_valid,
            counterexample: modal_result.err(),
        };
        if !verdict.agrees() && report.first_disagreement.is_none() {
            let mut dump = dump_frame(k, &model.frame);
            if let Some(c) = &verdict.counterexample {
                dump.push_str(&format!("counterexample {c}\n"));
            }
            dump.push_str(&format!(
                "modal_valid {} fo_valid {} pure_valid {:?}\n",
                verdict.modal_valid, verdict.fo_valid, verdict.pure_valid
            ));
            report.first_disagreement = Some(dump);
        }
        report.verdicts.push(verdict);
    }
    Ok(report)
}
