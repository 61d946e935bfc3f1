//! Signed generation trees and the Sahlqvist / inductive classifier.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Inequality, Path, Sign};

/// Value of an order type at one variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Eps {
    One,
    Dual,
}

impl Eps {
    pub fn flip(self) -> Eps {
        match self {
            Eps::One => Eps::Dual,
            Eps::Dual => Eps::One,
        }
    }

    /// Sign of the leaves this value makes critical.
    pub fn critical_sign(self) -> Sign {
        match self {
            Eps::One => Sign::Plus,
            Eps::Dual => Sign::Minus,
        }
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Eps::One => "1",
            Eps::Dual => "∂",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderType(pub BTreeMap<String, Eps>);

impl OrderType {
    pub fn get(&self, v: &str) -> Option<Eps> {
        self.0.get(v).copied()
    }

    pub fn dual(&self) -> OrderType {
        OrderType(self.0.iter().map(|(k, e)| (k.clone(), e.flip())).collect())
    }

    /// Whether a leaf `sign p` is critical.
    pub fn is_critical(&self, v: &str, sign: Sign) -> bool {
        self.get(v).is_some_and(|e| e.critical_sign() == sign)
    }

    /// All order types on `vars`, all-`1` first, the first variable being
    /// the most significant position.
    pub fn enumerate(vars: &BTreeSet<String>) -> Vec<OrderType> {
        let vars: Vec<&String> = vars.iter().collect();
        let n = vars.len();
        (0u32..1 << n)
            .map(|mask| {
                OrderType(
                    vars.iter()
                        .enumerate()
                        .map(|(k, v)| {
                            let dual = mask >> (n - 1 - k) & 1 == 1;
                            ((*v).clone(), if dual { Eps::Dual } else { Eps::One })
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, e)| format!("{k}:{e}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `Ω` as a set of pairs `(a, b)` meaning `a <_Ω b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DependenceOrder(pub BTreeSet<(String, String)>);

impl DependenceOrder {
    pub fn less(&self, a: &str, b: &str) -> bool {
        self.0.contains(&(a.to_string(), b.to_string()))
    }

    pub fn transitive_closure(&self) -> DependenceOrder {
        let mut pairs = self.0.clone();
        loop {
            let mut added = Vec::new();
            for (a, b) in &pairs {
                for (c, d) in &pairs {
                    if b == c && !pairs.contains(&(a.clone(), d.clone())) {
                        added.push((a.clone(), d.clone()));
                    }
                }
            }
            if added.is_empty() {
                return DependenceOrder(pairs);
            }
            pairs.extend(added);
        }
    }

    pub fn is_strict_partial_order(&self) -> bool {
        self.0.iter().all(|(a, b)| a != b) && self.transitive_closure() == *self
    }

    /// Variables with no `Ω`-smaller variable among `remaining`, sorted.
    pub fn minimal<'a>(&self, remaining: &'a BTreeSet<String>) -> Vec<&'a String> {
        remaining
            .iter()
            .filter(|v| !remaining.iter().any(|u| self.less(u, v)))
            .collect()
    }
}

impl fmt::Display for DependenceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.0.iter().map(|(a, b)| format!("{a} < {b}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Node labels of the basic language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Top,
    Bottom,
    Prop(String),
    Neg,
    And,
    Or,
    Implies,
    Box,
    Diamond,
}

impl Label {
    fn of(f: &Formula) -> Option<Label> {
        Some(match f {
            Formula::Top => Label::Top,
            Formula::Bottom => Label::Bottom,
            Formula::Prop(p) => Label::Prop(p.clone()),
            Formula::Neg(_) => Label::Neg,
            Formula::And(..) => Label::And,
            Formula::Or(..) => Label::Or,
            Formula::Implies(..) => Label::Implies,
            Formula::Box(_) => Label::Box,
            Formula::Diamond(_) => Label::Diamond,
            Formula::Nominal(_) | Formula::BlackDiamond(_) | Formula::BlackBox(_) => return None,
        })
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Label::Top | Label::Bottom | Label::Prop(_))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Top => f.write_str("⊤"),
            Label::Bottom => f.write_str("⊥"),
            Label::Prop(p) => f.write_str(p),
            Label::Neg => f.write_str("¬"),
            Label::And => f.write_str("∧"),
            Label::Or => f.write_str("∨"),
            Label::Implies => f.write_str("→"),
            Label::Box => f.write_str("□"),
            Label::Diamond => f.write_str("◇"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeClass {
    DeltaAdjoint,
    Sra,
    Slr,
    Srr,
    Leaf,
}

impl fmt::Display for NodeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeClass::DeltaAdjoint => "Δ",
            NodeClass::Sra => "SRA",
            NodeClass::Slr => "SLR",
            NodeClass::Srr => "SRR",
            NodeClass::Leaf => "leaf",
        })
    }
}

/// Every class a signed node may be read as. Some labels appear in more than
/// one box of the table (`+∧` is a Δ-adjoint, SRA and SLR).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Readings {
    pub delta: bool,
    pub sra: bool,
    pub slr: bool,
    pub srr: bool,
}

impl Readings {
    pub fn skeleton(self) -> bool {
        self.delta || self.slr
    }

    pub fn pia(self) -> bool {
        self.sra || self.srr
    }
}

const fn readings_of(delta: bool, sra: bool, slr: bool, srr: bool) -> Readings {
    Readings {
        delta,
        sra,
        slr,
        srr,
    }
}

/// Table of node readings. Leaves, nominals and black connectives have none.
pub fn readings(sign: Sign, f: &Formula) -> Readings {
    use Sign::*;
    match (sign, f) {
        (Plus, Formula::Or(..)) | (Minus, Formula::And(..)) => readings_of(true, false, false, true),
        (Plus, Formula::And(..)) | (Minus, Formula::Or(..)) => readings_of(true, true, true, false),
        (Plus, Formula::Box(_)) | (Minus, Formula::Diamond(_)) => readings_of(false, true, false, false),
        (Minus, Formula::Box(_)) | (Plus, Formula::Diamond(_)) => readings_of(false, false, true, false),
        (_, Formula::Neg(_)) => readings_of(false, true, true, false),
        (Plus, Formula::Implies(..)) => readings_of(false, false, false, true),
        (Minus, Formula::Implies(..)) => readings_of(false, false, true, false),
        _ => Readings::default(),
    }
}

/// The class used when a single name is needed for a node.
pub fn primary_class(sign: Sign, f: &Formula) -> NodeClass {
    use Sign::*;
    match (sign, f) {
        (Plus, Formula::Or(..)) | (Minus, Formula::And(..)) => NodeClass::DeltaAdjoint,
        (Plus, Formula::And(..))
        | (Minus, Formula::Or(..))
        | (_, Formula::Neg(_))
        | (Plus, Formula::Box(_))
        | (Minus, Formula::Diamond(_)) => NodeClass::Sra,
        (Minus, Formula::Box(_)) | (Plus, Formula::Diamond(_)) | (Minus, Formula::Implies(..)) => {
            NodeClass::Slr
        }
        (Plus, Formula::Implies(..)) => NodeClass::Srr,
        _ => NodeClass::Leaf,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub sign: Sign,
    pub label: Label,
    pub class: NodeClass,
    pub readings: Readings,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    /// Position of the node's subformula inside the root formula.
    pub path: Path,
}

impl Node {
    pub fn signed_label(&self) -> String {
        format!("{}{}", self.sign.symbol(), self.label)
    }
}

/// Generation tree of a basic formula; node 0 is the root, nodes are stored
/// in pre-order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedTree {
    pub formula: Formula,
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SgError {
    #[error("formula `{0}` is outside the basic language")]
    NotBasic(String),
}

pub fn build_signed_tree(phi: &Formula, sign: Sign) -> Result<SignedTree, SgError> {
    if !phi.is_basic() {
        return Err(SgError::NotBasic(phi.to_string()));
    }
    let mut nodes = Vec::new();
    push_node(&mut nodes, phi, sign, None, Vec::new());
    Ok(SignedTree {
        formula: phi.clone(),
        nodes,
    })
}

fn push_node(nodes: &mut Vec<Node>, f: &Formula, sign: Sign, parent: Option<usize>, path: Path) -> usize {
    let id = nodes.len();
    nodes.push(Node {
        sign,
        label: Label::of(f).expect("basic formula"),
        class: primary_class(sign, f),
        readings: readings(sign, f),
        children: Vec::new(),
        parent,
        path: path.clone(),
    });
    for (k, c) in f.children().into_iter().enumerate() {
        let mut child_path = path.clone();
        child_path.push(k);
        let cid = push_node(nodes, c, f.child_sign(sign, k), Some(id), child_path);
        nodes[id].children.push(cid);
    }
    id
}

/// Node ids from a leaf up to the root, leaf first.
pub type Branch = Vec<usize>;

impl SignedTree {
    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn branch_from(&self, leaf: usize) -> Branch {
        let mut out = vec![leaf];
        let mut cur = leaf;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out
    }

    /// Subformula rooted at a node.
    pub fn subformula(&self, id: usize) -> &Formula {
        self.formula.at(&self.nodes[id].path).expect("node path")
    }

    pub fn render_branch(&self, branch: &Branch) -> String {
        branch
            .iter()
            .map(|&id| self.nodes[id].signed_label())
            .collect::<Vec<_>>()
            .join(" < ")
    }
}

pub fn critical_branches(tree: &SignedTree, eps: &OrderType) -> Vec<Branch> {
    tree.nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| match &n.label {
            Label::Prop(p) => eps.is_critical(p, n.sign),
            _ => false,
        })
        .map(|(id, _)| tree.branch_from(id))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quality {
    Excellent,
    Good,
    NotGood,
}

/// How a critical branch splits into its PIA part `P1` (from the leaf) and
/// Skeleton part `P2` (up to the root).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchReport {
    pub branch: Branch,
    pub quality: Quality,
    /// Nodes `branch[1..=p1_len]` form `P1`.
    pub p1_len: usize,
    /// Class each non-leaf node is read as, in branch order.
    pub reading: Vec<NodeClass>,
    /// Nodes of `P1` that can only be read as SRR.
    pub srr_nodes: Vec<usize>,
}

impl BranchReport {
    pub fn p1(&self) -> &[usize] {
        &self.branch[1..1 + self.p1_len]
    }

    pub fn p2(&self) -> &[usize] {
        &self.branch[1 + self.p1_len..]
    }
}

/// Splits with the shortest possible `P1`, which is the split imposing the
/// fewest conditions: any good split has a `P1` extending this one.
pub fn branch_quality(tree: &SignedTree, branch: &Branch) -> BranchReport {
    let inner = &branch[1..];
    let r = |id: usize| tree.nodes[id].readings;
    let mut k = inner.len();
    while k > 0 && r(inner[k - 1]).skeleton() {
        k -= 1;
    }
    let good = inner[..k].iter().all(|&id| r(id).pia());
    let mut reading = Vec::with_capacity(inner.len());
    let mut srr_nodes = Vec::new();
    for (pos, &id) in inner.iter().enumerate() {
        let rd = r(id);
        let class = if pos < k {
            if rd.sra {
                NodeClass::Sra
            } else if rd.srr {
                srr_nodes.push(id);
                NodeClass::Srr
            } else {
                tree.nodes[id].class
            }
        } else if rd.slr {
            NodeClass::Slr
        } else {
            NodeClass::DeltaAdjoint
        };
        reading.push(class);
    }
    let quality = if !good {
        Quality::NotGood
    } else if srr_nodes.is_empty() {
        Quality::Excellent
    } else {
        Quality::Good
    };
    BranchReport {
        branch: branch.clone(),
        quality,
        p1_len: k,
        reading,
        srr_nodes,
    }
}

/// Whether every propositional leaf of the subtree at `id` is critical for
/// `eps`. Constant leaves impose nothing.
pub fn subtree_agrees(tree: &SignedTree, id: usize, eps: &OrderType) -> bool {
    let node = &tree.nodes[id];
    match &node.label {
        Label::Prop(p) => eps.is_critical(p, node.sign),
        _ => node.children.iter().all(|&c| subtree_agrees(tree, c, eps)),
    }
}

fn subtree_props(tree: &SignedTree, id: usize, out: &mut BTreeSet<String>) {
    let node = &tree.nodes[id];
    if let Label::Prop(p) = &node.label {
        out.insert(p.clone());
    }
    for &c in &node.children {
        subtree_props(tree, c, out);
    }
}

/// Which side of the inequality a tree comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Lhs,
    Rhs,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lhs => "+lhs",
            Side::Rhs => "-rhs",
        })
    }
}

/// Reason an inequality fails to be `(Ω, ε)`-inductive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Diagnostic {
    NotGood { side: Side, branch: String },
    SideFormulaDisagrees { side: Side, node: String, side_formula: String },
    MissingOrder { below: String, above: String },
    CyclicConstraint { below: String, above: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NotGood { side, branch } => write!(f, "{side}: branch {branch} is not good"),
            Diagnostic::SideFormulaDisagrees {
                side,
                node,
                side_formula,
            } => write!(
                f,
                "{side}: side formula {side_formula} of SRR node {node} does not agree with the dual order type"
            ),
            Diagnostic::MissingOrder { below, above } => {
                write!(f, "constraint {below} < {above} is not in the dependence order")
            }
            Diagnostic::CyclicConstraint { below, above } => {
                write!(f, "constraint {below} < {above} closes a cycle")
            }
        }
    }
}

/// Branch analysis of both sides of an inequality under one order type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsAnalysis {
    pub eps: OrderType,
    pub trees: [SignedTree; 2],
    pub branches: Vec<(Side, BranchReport)>,
    /// Required pairs `p_k <_Ω p_i`, in discovery order.
    pub constraints: Vec<(String, String)>,
    pub failure: Option<Diagnostic>,
}

impl EpsAnalysis {
    pub fn all_excellent(&self) -> bool {
        self.failure.is_none() && self.branches.iter().all(|(_, b)| b.quality == Quality::Excellent)
    }

    pub fn tree(&self, side: Side) -> &SignedTree {
        match side {
            Side::Lhs => &self.trees[0],
            Side::Rhs => &self.trees[1],
        }
    }

    /// First constraint whose addition makes the constraint graph cyclic.
    pub fn first_cycle(&self) -> Option<(String, String)> {
        let mut acc = DependenceOrder::default();
        for c in &self.constraints {
            acc.0.insert(c.clone());
            if acc.transitive_closure().0.iter().any(|(a, b)| a == b) {
                return Some(c.clone());
            }
        }
        None
    }
}

pub fn analyze(ineq: &Inequality, eps: &OrderType) -> Result<EpsAnalysis, SgError> {
    let trees = [
        build_signed_tree(&ineq.lhs, Sign::Plus)?,
        build_signed_tree(&ineq.rhs, Sign::Minus)?,
    ];
    let dual = eps.dual();
    let mut branches = Vec::new();
    let mut constraints = Vec::new();
    let mut failure = None;
    for (side, tree) in [(Side::Lhs, &trees[0]), (Side::Rhs, &trees[1])] {
        for branch in critical_branches(tree, eps) {
            let report = branch_quality(tree, &branch);
            if report.quality == Quality::NotGood {
                failure.get_or_insert(Diagnostic::NotGood {
                    side,
                    branch: tree.render_branch(&branch),
                });
            }
            let Label::Prop(critical) = &tree.nodes[branch[0]].label else {
                unreachable!("critical branches start at propositional leaves")
            };
            for &srr in &report.srr_nodes {
                let pos = branch.iter().position(|&x| x == srr).expect("node on branch");
                let from_child = branch[pos - 1];
                for &gamma in tree.nodes[srr].children.iter().filter(|&&c| c != from_child) {
                    if !subtree_agrees(tree, gamma, &dual) {
                        failure.get_or_insert(Diagnostic::SideFormulaDisagrees {
                            side,
                            node: tree.nodes[srr].signed_label(),
                            side_formula: tree.subformula(gamma).unicode(),
                        });
                    }
                    let mut vars = BTreeSet::new();
                    subtree_props(tree, gamma, &mut vars);
                    for v in vars {
                        let c = (v, critical.clone());
                        if !constraints.contains(&c) {
                            constraints.push(c);
                        }
                    }
                }
            }
            branches.push((side, report));
        }
    }
    Ok(EpsAnalysis {
        eps: eps.clone(),
        trees,
        branches,
        constraints,
        failure,
    })
}

pub fn check_inductive(
    ineq: &Inequality,
    om: &DependenceOrder,
    eps: &OrderType,
) -> Result<Result<(), Diagnostic>, SgError> {
    let a = analyze(ineq, eps)?;
    if let Some(d) = a.failure {
        return Ok(Err(d));
    }
    for (below, above) in a.constraints {
        if !om.less(&below, &above) {
            return Ok(Err(Diagnostic::MissingOrder { below, above }));
        }
    }
    Ok(Ok(()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Sahlqvist { eps: OrderType },
    Inductive { omega: DependenceOrder, eps: OrderType },
    NotInductive,
}

impl Verdict {
    pub fn is_inductive(&self) -> bool {
        !matches!(self, Verdict::NotInductive)
    }

    /// The `(Ω, ε)` witness, with `Ω = ∅` for Sahlqvist verdicts.
    pub fn witness(&self) -> Option<(DependenceOrder, OrderType)> {
        match self {
            Verdict::Sahlqvist { eps } => Some((DependenceOrder::default(), eps.clone())),
            Verdict::Inductive { omega, eps } => Some((omega.clone(), eps.clone())),
            Verdict::NotInductive => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Sahlqvist { eps } => write!(f, "Sahlqvist ε={eps}"),
            Verdict::Inductive { omega, eps } => write!(f, "Inductive Ω={{{omega}}} ε={eps}"),
            Verdict::NotInductive => f.write_str("NotInductive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// Analysis under the witnessing order type, or under the first order
    /// type when there is no witness.
    pub analysis: EpsAnalysis,
    /// First failure reason for every order type that was rejected.
    pub rejected: Vec<(OrderType, Diagnostic)>,
}

impl Classification {
    /// Branch table: one line per critical branch.
    pub fn branch_table(&self) -> Vec<String> {
        self.analysis
            .branches
            .iter()
            .map(|(side, rep)| {
                let tree = self.analysis.tree(*side);
                let show = |ids: &[usize], off: usize| {
                    ids.iter()
                        .enumerate()
                        .map(|(k, &id)| format!("{} {}", tree.nodes[id].signed_label(), rep.reading[off + k]))
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                format!(
                    "{side}  {}  P1=[{}]  P2=[{}]  {:?}",
                    tree.render_branch(&rep.branch),
                    show(rep.p1(), 0),
                    show(rep.p2(), rep.p1_len),
                    rep.quality
                )
            })
            .collect()
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.verdict)?;
        for line in self.branch_table() {
            writeln!(f, "  {line}")?;
        }
        if !self.verdict.is_inductive() {
            for (eps, d) in &self.rejected {
                writeln!(f, "  rejected ε={eps}: {d}")?;
            }
        }
        Ok(())
    }
}

pub fn classify(ineq: &Inequality) -> Result<Classification, SgError> {
    let eps_list = OrderType::enumerate(&ineq.props());
    let mut analyses = Vec::with_capacity(eps_list.len());
    for eps in &eps_list {
        analyses.push(analyze(ineq, eps)?);
    }
    let mut rejected = Vec::new();
    if let Some(a) = analyses.iter().find(|a| a.all_excellent()) {
        return Ok(Classification {
            verdict: Verdict::Sahlqvist { eps: a.eps.clone() },
            analysis: a.clone(),
            rejected,
        });
    }
    for a in &analyses {
        if let Some(d) = &a.failure {
            rejected.push((a.eps.clone(), d.clone()));
            continue;
        }
        if let Some((below, above)) = a.first_cycle() {
            rejected.push((a.eps.clone(), Diagnostic::CyclicConstraint { below, above }));
            continue;
        }
        let omega = DependenceOrder(a.constraints.iter().cloned().collect()).transitive_closure();
        return Ok(Classification {
            verdict: Verdict::Inductive {
                omega,
                eps: a.eps.clone(),
            },
            analysis: a.clone(),
            rejected,
        });
    }
    Ok(Classification {
        verdict: Verdict::NotInductive,
        analysis: analyses.swap_remove(0),
        rejected,
    })
}

/// No critical branch has a Skeleton node that must be read as a Δ-adjoint.
pub fn is_definite(ineq: &Inequality, eps: &OrderType) -> Result<bool, SgError> {
    let a = analyze(ineq, eps)?;
    Ok(a.branches.iter().all(|(_, rep)| {
        rep.reading[rep.p1_len..]
            .iter()
            .all(|&c| c != NodeClass::DeltaAdjoint)
    }))
}
