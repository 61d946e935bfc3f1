//! First-order correspondence language and the regular open translation.
//!
//! Bounded quantifiers are expanded when built: `(∀y ⊑ x)φ` becomes
//! `∀y(y ⊑ x → φ)` and `(∃z ⊑ y)φ` becomes `∃z(z ⊑ y ∧ φ)`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{is_nominal_name, Formula, QuasiInequality};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "name")]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(s: &str) -> Term {
        Term::Var(s.to_string())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(s) | Term::Const(s) => s,
        }
    }
}

/// `Leq(a, b)` is `a ⊑ b`; `Acc(a, b)` is `R(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelSym {
    Leq,
    Acc,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", content = "args")]
pub enum FOFormula {
    Top,
    Bottom,
    Eq(Term, Term),
    Rel(RelSym, Term, Term),
    Pred(String, Term),
    Not(Box<FOFormula>),
    And(Box<FOFormula>, Box<FOFormula>),
    Or(Box<FOFormula>, Box<FOFormula>),
    Implies(Box<FOFormula>, Box<FOFormula>),
    ForAll(String, Box<FOFormula>),
    Exists(String, Box<FOFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoError {
    #[error("quasi-inequality `{0}` contains propositional variables")]
    NotPure(String),
    #[error("formula has free variables: {0:?}")]
    Open(Vec<String>),
}

pub fn leq(a: &str, b: &str) -> FOFormula {
    FOFormula::Rel(RelSym::Leq, Term::var(a), Term::var(b))
}

pub fn acc(a: &str, b: &str) -> FOFormula {
    FOFormula::Rel(RelSym::Acc, Term::var(a), Term::var(b))
}

impl FOFormula {
    pub fn not(a: FOFormula) -> FOFormula {
        FOFormula::Not(Box::new(a))
    }

    pub fn and(a: FOFormula, b: FOFormula) -> FOFormula {
        FOFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FOFormula, b: FOFormula) -> FOFormula {
        FOFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: FOFormula, b: FOFormula) -> FOFormula {
        FOFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, a: FOFormula) -> FOFormula {
        FOFormula::ForAll(v.to_string(), Box::new(a))
    }

    pub fn exists(v: &str, a: FOFormula) -> FOFormula {
        FOFormula::Exists(v.to_string(), Box::new(a))
    }

    /// `∀y(y ⊑ x → body)`.
    pub fn forall_below(y: &str, x: &str, body: FOFormula) -> FOFormula {
        FOFormula::forall(y, FOFormula::implies(leq(y, x), body))
    }

    /// `∃z(z ⊑ y ∧ body)`.
    pub fn exists_below(z: &str, y: &str, body: FOFormula) -> FOFormula {
        FOFormula::exists(z, FOFormula::and(leq(z, y), body))
    }

    /// `∃z′(z ⊑ z′ ∧ body)`.
    pub fn exists_above(z2: &str, z: &str, body: FOFormula) -> FOFormula {
        FOFormula::exists(z2, FOFormula::and(leq(z, z2), body))
    }

    /// `∀z(y ⊑ z → body)`.
    pub fn forall_above(z: &str, y: &str, body: FOFormula) -> FOFormula {
        FOFormula::forall(z, FOFormula::implies(leq(y, z), body))
    }

    fn children(&self) -> Vec<&FOFormula> {
        use FOFormula::*;
        match self {
            Top | Bottom | Eq(..) | Rel(..) | Pred(..) => vec![],
            Not(a) | ForAll(_, a) | Exists(_, a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) => vec![a, b],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(FOFormula::size).sum::<usize>()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term| {
            if let Term::Var(v) = t {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            FOFormula::Eq(a, b) | FOFormula::Rel(_, a, b) => {
                term(a);
                term(b);
            }
            FOFormula::Pred(_, a) => term(a),
            FOFormula::ForAll(v, a) | FOFormula::Exists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let Term::Const(c) = t {
                out.insert(c.clone());
            }
        });
        out
    }

    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let FOFormula::Pred(p, _) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    fn all_names(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        self.visit(&mut |f| {
            if let FOFormula::ForAll(v, _) | FOFormula::Exists(v, _) = f {
                out.insert(v.clone());
            }
        });
        self.visit_terms(&mut |t| {
            out.insert(t.name().to_string());
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&FOFormula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        self.visit(&mut |g| match g {
            FOFormula::Eq(a, b) | FOFormula::Rel(_, a, b) => {
                f(a);
                f(b);
            }
            FOFormula::Pred(_, a) => f(a),
            _ => {}
        });
    }

    /// Replaces free occurrences of variable `x` by `t`. Callers supply a
    /// `t` that is not bound inside `self`.
    pub fn substitute_var(&self, x: &str, t: &Term) -> FOFormula {
        let sub = |u: &Term| match u {
            Term::Var(v) if v == x => t.clone(),
            _ => u.clone(),
        };
        match self {
            FOFormula::Eq(a, b) => FOFormula::Eq(sub(a), sub(b)),
            FOFormula::Rel(r, a, b) => FOFormula::Rel(*r, sub(a), sub(b)),
            FOFormula::Pred(p, a) => FOFormula::Pred(p.clone(), sub(a)),
            FOFormula::ForAll(v, _) | FOFormula::Exists(v, _) if v == x => self.clone(),
            FOFormula::ForAll(v, a) => FOFormula::forall(v, a.substitute_var(x, t)),
            FOFormula::Exists(v, a) => FOFormula::exists(v, a.substitute_var(x, t)),
            FOFormula::Not(a) => FOFormula::not(a.substitute_var(x, t)),
            FOFormula::And(a, b) => FOFormula::and(a.substitute_var(x, t), b.substitute_var(x, t)),
            FOFormula::Or(a, b) => FOFormula::or(a.substitute_var(x, t), b.substitute_var(x, t)),
            FOFormula::Implies(a, b) => {
                FOFormula::implies(a.substitute_var(x, t), b.substitute_var(x, t))
            }
            FOFormula::Top | FOFormula::Bottom => self.clone(),
        }
    }
}

/// Predicate symbol standing for a propositional variable.
pub fn predicate_name(prop: &str) -> String {
    prop.to_uppercase()
}

/// Fresh-name source for one translation call.
#[derive(Debug, Default)]
pub struct Translator {
    counter: usize,
    avoid: HashSet<String>,
    nominals_as_vars: bool,
}

impl Translator {
    pub fn new() -> Translator {
        Translator::default()
    }

    /// Nominals become variables named like the nominal instead of
    /// individual constants, to be bound by an enclosing quantifier.
    pub fn with_nominal_vars(mut self) -> Translator {
        self.nominals_as_vars = true;
        self
    }

    fn avoiding(names: HashSet<String>) -> Translator {
        Translator {
            avoid: names,
            ..Translator::default()
        }
    }

    pub fn fresh(&mut self, letter: char) -> String {
        loop {
            let name = format!("{letter}{}", self.counter);
            self.counter += 1;
            if !self.avoid.contains(&name) {
                return name;
            }
        }
    }

    /// `RO_x(α) = (∀y ⊑ x)(∃z ⊑ y)(∃z′ ⊒ z) α(z′)`, with `body` building
    /// `α` at the variable it is given.
    pub fn ro(&mut self, x: &str, body: impl FnOnce(&mut Translator, &str) -> FOFormula) -> FOFormula {
        let y = self.fresh('y');
        let z = self.fresh('z');
        let z2 = self.fresh('z');
        let inner = body(self, &z2);
        FOFormula::forall_below(
            &y,
            x,
            FOFormula::exists_below(&z, &y, FOFormula::exists_above(&z2, &z, inner)),
        )
    }

    fn nominal_term(&self, name: &str) -> Term {
        if self.nominals_as_vars {
            Term::Var(name.to_string())
        } else {
            Term::Const(name.to_string())
        }
    }

    pub fn st(&mut self, phi: &Formula, x: &str) -> FOFormula {
        match phi {
            Formula::Top => FOFormula::Top,
            Formula::Bottom => FOFormula::Bottom,
            Formula::Prop(p) => FOFormula::Pred(predicate_name(p), Term::var(x)),
            Formula::Nominal(i) => {
                let i = self.nominal_term(i);
                self.ro(x, |_, z| FOFormula::Eq(Term::var(z), i))
            }
            Formula::Neg(a) => {
                let y = self.fresh('y');
                let inner = self.st(a, &y);
                FOFormula::forall_below(&y, x, FOFormula::not(inner))
            }
            Formula::And(a, b) => FOFormula::and(self.st(a, x), self.st(b, x)),
            Formula::Box(a) => {
                let y = self.fresh('y');
                let inner = self.st(a, &y);
                FOFormula::forall(&y, FOFormula::implies(acc(x, &y), inner))
            }
            Formula::BlackDiamond(a) => self.ro(x, |t, z| {
                let y = t.fresh('y');
                let inner = t.st(a, &y);
                FOFormula::exists(&y, FOFormula::and(acc(&y, z), inner))
            }),
            Formula::Or(a, b) => {
                let y = self.fresh('y');
                let z = self.fresh('z');
                let l = self.st(a, &z);
                let r = self.st(b, &z);
                FOFormula::forall_below(&y, x, FOFormula::exists_below(&z, &y, FOFormula::or(l, r)))
            }
            Formula::Implies(a, b) => {
                let y = self.fresh('y');
                let l = self.st(a, &y);
                let r = self.st(b, &y);
                FOFormula::forall_below(&y, x, FOFormula::implies(l, r))
            }
            Formula::Diamond(a) => {
                let y = self.fresh('y');
                let z = self.fresh('z');
                let w = self.fresh('w');
                let inner = self.st(a, &w);
                FOFormula::forall_below(
                    &y,
                    x,
                    FOFormula::exists(
                        &z,
                        FOFormula::and(acc(&y, &z), FOFormula::exists_below(&w, &z, inner)),
                    ),
                )
            }
            Formula::BlackBox(a) => {
                let y = self.fresh('y');
                let z = self.fresh('z');
                let w = self.fresh('w');
                let v = self.fresh('v');
                let inner = self.st(a, &v);
                FOFormula::forall_below(
                    &y,
                    x,
                    FOFormula::forall_above(
                        &z,
                        &y,
                        FOFormula::forall(
                            &w,
                            FOFormula::implies(acc(&w, &z), FOFormula::exists_below(&v, &w, inner)),
                        ),
                    ),
                )
            }
        }
    }

    /// The variant obtained by unfolding `φ → ψ` as `¬φ ∨ ψ`:
    /// `(∀y ⊑ x)(∃z ⊑ y)(((∀w ⊑ z)¬ST_w(φ)) ∨ ST_z(ψ))`.
    pub fn st_implies_direct(&mut self, a: &Formula, b: &Formula, x: &str) -> FOFormula {
        let y = self.fresh('y');
        let z = self.fresh('z');
        let w = self.fresh('w');
        let na = self.st(a, &w);
        let nb = self.st(b, &z);
        FOFormula::forall_below(
            &y,
            x,
            FOFormula::exists_below(
                &z,
                &y,
                FOFormula::or(FOFormula::forall_below(&w, &z, FOFormula::not(na)), nb),
            ),
        )
    }

    /// `∀x(ST_x(φ) → ST_x(ψ))`.
    fn inequality(&mut self, lhs: &Formula, rhs: &Formula) -> FOFormula {
        let x = self.fresh('x');
        let l = self.st(lhs, &x);
        let r = self.st(rhs, &x);
        FOFormula::forall(&x, FOFormula::implies(l, r))
    }
}

/// Regular open translation with nominals as individual constants.
pub fn st(phi: &Formula, x: &str) -> FOFormula {
    let mut t = Translator::avoiding([x.to_string()].into_iter().collect());
    t.st(phi, x)
}

/// Syntactic regular open closure of `alpha` in its free variable `x`.
pub fn ro_x(alpha: &FOFormula, x: &str) -> FOFormula {
    let mut names = alpha.all_names();
    names.insert(x.to_string());
    let mut t = Translator::avoiding(names);
    t.ro(x, |_, z| alpha.substitute_var(x, &Term::var(z)))
}

/// Sort key placing fresh nominals in creation order: `i, j, k, i1, j1, …`.
fn nominal_order(name: &str) -> (u64, String) {
    let digits: String = name.chars().skip_while(|c| !c.is_ascii_digit()).collect();
    (digits.parse().unwrap_or(0), name.to_string())
}

pub fn nominals_in_creation_order(names: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut v: Vec<String> = names.into_iter().collect();
    v.sort_by_key(|n| nominal_order(n));
    v.dedup();
    v
}

/// `⋀_i ∀j⃗ (⋀_k ∀x(ST φ_k → ST ψ_k) → ∀x(ST φ → ST ψ))`, closed.
pub fn translate_quasi(quasis: &[QuasiInequality]) -> Result<FOFormula, FoError> {
    let mut blocks = Vec::with_capacity(quasis.len());
    for q in quasis {
        if !q.is_pure() {
            return Err(FoError::NotPure(q.to_string()));
        }
        let mut t = Translator::new().with_nominal_vars();
        let conclusion = t.inequality(&q.conclusion.lhs, &q.conclusion.rhs);
        let premises = q
            .premises
            .iter()
            .map(|p| t.inequality(&p.lhs, &p.rhs))
            .reduce(FOFormula::and);
        let mut body = match premises {
            Some(p) => FOFormula::implies(p, conclusion),
            None => conclusion,
        };
        let noms = nominals_in_creation_order(q.nominals());
        debug_assert!(noms.iter().all(|n| is_nominal_name(n)));
        for n in noms.iter().rev() {
            body = FOFormula::forall(n, body);
        }
        blocks.push(body);
    }
    Ok(blocks.into_iter().reduce(FOFormula::and).unwrap_or(FOFormula::Top))
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &FOFormula, b: &FOFormula) -> bool {
    fn term_eq(s: &Term, t: &Term, ea: &[String], eb: &[String]) -> bool {
        match (s, t) {
            (Term::Const(x), Term::Const(y)) => x == y,
            (Term::Var(x), Term::Var(y)) => {
                let ia = ea.iter().rposition(|v| v == x);
                let ib = eb.iter().rposition(|v| v == y);
                match (ia, ib) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            _ => false,
        }
    }
    fn go(a: &FOFormula, b: &FOFormula, ea: &mut Vec<String>, eb: &mut Vec<String>) -> bool {
        use FOFormula::*;
        match (a, b) {
            (Top, Top) | (Bottom, Bottom) => true,
            (Eq(a1, a2), Eq(b1, b2)) => term_eq(a1, b1, ea, eb) && term_eq(a2, b2, ea, eb),
            (Rel(r, a1, a2), Rel(s, b1, b2)) => {
                r == s && term_eq(a1, b1, ea, eb) && term_eq(a2, b2, ea, eb)
            }
            (Pred(p, a1), Pred(q, b1)) => p == q && term_eq(a1, b1, ea, eb),
            (Not(x), Not(y)) => go(x, y, ea, eb),
            (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)) | (Implies(a1, a2), Implies(b1, b2)) => {
                go(a1, b1, ea, eb) && go(a2, b2, ea, eb)
            }
            (ForAll(x, a1), ForAll(y, b1)) | (Exists(x, a1), Exists(y, b1)) => {
                ea.push(x.clone());
                eb.push(y.clone());
                let r = go(a1, b1, ea, eb);
                ea.pop();
                eb.pop();
                r
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FoFormat {
    Unicode,
    Tptp,
}

pub fn print_fo(alpha: &FOFormula, format: FoFormat) -> Result<String, FoError> {
    match format {
        FoFormat::Unicode => Ok(print_unicode(alpha)),
        FoFormat::Tptp => print_tptp(alpha, "correspondent", "axiom"),
    }
}

pub fn print_unicode(alpha: &FOFormula) -> String {
    let mut s = String::new();
    unicode_into(&mut s, alpha, false);
    s
}

fn is_binary(f: &FOFormula) -> bool {
    matches!(f, FOFormula::And(..) | FOFormula::Or(..) | FOFormula::Implies(..))
}

fn unicode_into(out: &mut String, f: &FOFormula, nested: bool) {
    let rel = |r: RelSym, a: &Term, b: &Term| match r {
        RelSym::Leq => format!("{} ⊑ {}", a.name(), b.name()),
        RelSym::Acc => format!("R({}, {})", a.name(), b.name()),
    };
    match f {
        FOFormula::Top => out.push('⊤'),
        FOFormula::Bottom => out.push('⊥'),
        FOFormula::Eq(a, b) => {
            let _ = write!(out, "{} = {}", a.name(), b.name());
        }
        FOFormula::Rel(r, a, b) => out.push_str(&rel(*r, a, b)),
        FOFormula::Pred(p, a) => {
            let _ = write!(out, "{p}({})", a.name());
        }
        FOFormula::Not(a) => {
            out.push('¬');
            let wrap = is_binary(a) || matches!(**a, FOFormula::Eq(..) | FOFormula::Rel(RelSym::Leq, ..));
            if wrap {
                out.push('(');
            }
            unicode_into(out, a, false);
            if wrap {
                out.push(')');
            }
        }
        FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Implies(a, b) => {
            let op = match f {
                FOFormula::And(..) => " ∧ ",
                FOFormula::Or(..) => " ∨ ",
                _ => " → ",
            };
            if nested {
                out.push('(');
            }
            unicode_into(out, a, true);
            out.push_str(op);
            unicode_into(out, b, true);
            if nested {
                out.push(')');
            }
        }
        FOFormula::ForAll(v, a) | FOFormula::Exists(v, a) => {
            out.push(if matches!(f, FOFormula::ForAll(..)) { '∀' } else { '∃' });
            out.push_str(v);
            if matches!(**a, FOFormula::ForAll(..) | FOFormula::Exists(..)) {
                unicode_into(out, a, false);
            } else {
                out.push('(');
                unicode_into(out, a, false);
                out.push(')');
            }
        }
    }
}

/// A single TPTP `fof` unit. Variables are upper-cased, constants and
/// predicate symbols lower-cased; `⊑` is `leq` and `R` is `acc`.
pub fn print_tptp(alpha: &FOFormula, name: &str, role: &str) -> Result<String, FoError> {
    let free = alpha.free_vars();
    if !free.is_empty() {
        return Err(FoError::Open(free.into_iter().collect()));
    }
    let mut body = String::new();
    tptp_into(&mut body, alpha);
    Ok(format!("fof({name}, {role}, {body})."))
}

fn tptp_term(t: &Term) -> String {
    match t {
        Term::Var(v) => {
            let mut c = v.chars();
            let head = c.next().map(|h| h.to_ascii_uppercase()).unwrap_or('X');
            format!("{head}{}", c.as_str())
        }
        Term::Const(c) => c.to_lowercase(),
    }
}

fn tptp_into(out: &mut String, f: &FOFormula) {
    match f {
        FOFormula::Top => out.push_str("$true"),
        FOFormula::Bottom => out.push_str("$false"),
        FOFormula::Eq(a, b) => {
            let _ = write!(out, "{} = {}", tptp_term(a), tptp_term(b));
        }
        FOFormula::Rel(r, a, b) => {
            let sym = match r {
                RelSym::Leq => "leq",
                RelSym::Acc => "acc",
            };
            let _ = write!(out, "{sym}({},{})", tptp_term(a), tptp_term(b));
        }
        FOFormula::Pred(p, a) => {
            let _ = write!(out, "{}({})", p.to_lowercase(), tptp_term(a));
        }
        FOFormula::Not(a) => {
            out.push_str("~ (");
            tptp_into(out, a);
            out.push(')');
        }
        FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Implies(a, b) => {
            let op = match f {
                FOFormula::And(..) => " & ",
                FOFormula::Or(..) => " | ",
                _ => " => ",
            };
            out.push('(');
            tptp_into(out, a);
            out.push_str(op);
            tptp_into(out, b);
            out.push(')');
        }
        FOFormula::ForAll(v, a) | FOFormula::Exists(v, a) => {
            let q = if matches!(f, FOFormula::ForAll(..)) { '!' } else { '?' };
            let _ = write!(out, "{q} [{}] : (", tptp_term(&Term::var(v)));
            tptp_into(out, a);
            out.push(')');
        }
    }
}

/// Renames bound variables to `v0, v1, …` in binding order; free variables
/// keep their names.
pub fn canonical_names(alpha: &FOFormula) -> FOFormula {
    fn go(f: &FOFormula, env: &mut HashMap<String, Vec<String>>, next: &mut usize) -> FOFormula {
        let t = |u: &Term, env: &HashMap<String, Vec<String>>| match u {
            Term::Var(v) => Term::Var(env.get(v).and_then(|s| s.last()).cloned().unwrap_or(v.clone())),
            c => c.clone(),
        };
        match f {
            FOFormula::Top | FOFormula::Bottom => f.clone(),
            FOFormula::Eq(a, b) => FOFormula::Eq(t(a, env), t(b, env)),
            FOFormula::Rel(r, a, b) => FOFormula::Rel(*r, t(a, env), t(b, env)),
            FOFormula::Pred(p, a) => FOFormula::Pred(p.clone(), t(a, env)),
            FOFormula::Not(a) => FOFormula::not(go(a, env, next)),
            FOFormula::And(a, b) => FOFormula::and(go(a, env, next), go(b, env, next)),
            FOFormula::Or(a, b) => FOFormula::or(go(a, env, next), go(b, env, next)),
            FOFormula::Implies(a, b) => FOFormula::implies(go(a, env, next), go(b, env, next)),
            FOFormula::ForAll(v, a) | FOFormula::Exists(v, a) => {
                let fresh = format!("v{next}");
                *next += 1;
                env.entry(v.clone()).or_default().push(fresh.clone());
                let body = go(a, env, next);
                env.get_mut(v).expect("pushed").pop();
                if matches!(f, FOFormula::ForAll(..)) {
                    FOFormula::forall(&fresh, body)
                } else {
                    FOFormula::exists(&fresh, body)
                }
            }
        }
    }
    go(alpha, &mut HashMap::new(), &mut 0)
}
