//! Formulas of the basic modal language and its expansion with nominals and
//! the black connectives, plus inequalities and quasi-inequalities.
//!
//! Concrete syntax (ASCII, with Unicode alternatives accepted by the parser):
//!
//! ```text
//! ineq    := formula "<=" formula
//! formula := or ("->" formula)?             right associative
//! or      := and ("|" and)*                 left associative
//! and     := unary ("&" unary)*             left associative
//! unary   := ("~" | "box" | "dia" | "bdia" | "bbox") unary | atom
//! atom    := "T" | "F" | prop | nominal | "(" formula ")"
//! prop    := [p-z][0-9]*
//! nominal := [i-k][0-9]*
//! ```

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A term of the expanded modal language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "op", content = "args")]
pub enum Formula {
    Top,
    Bottom,
    Prop(String),
    Nominal(String),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
    BlackDiamond(Box<Formula>),
    BlackBox(Box<Formula>),
}

/// Sign of a node in a signed generation tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Occurrence profile of a variable inside a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
    Both,
    Absent,
}

impl Polarity {
    fn add(self, sign: Sign) -> Polarity {
        use Polarity::*;
        match (self, sign) {
            (Absent, Sign::Plus) | (Positive, Sign::Plus) => Positive,
            (Absent, Sign::Minus) | (Negative, Sign::Minus) => Negative,
            _ => Both,
        }
    }

    pub fn swap(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            other => other,
        }
    }
}

/// Position of a subformula: child indices from the root.
pub type Path = Vec<usize>;

pub fn is_prop_name(s: &str) -> bool {
    name_matches(s, 'p'..='z')
}

pub fn is_nominal_name(s: &str) -> bool {
    name_matches(s, 'i'..='k')
}

fn name_matches(s: &str, head: std::ops::RangeInclusive<char>) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if head.contains(&c) => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

impl Formula {
    pub fn prop(name: &str) -> Formula {
        debug_assert!(is_prop_name(name), "bad prop name {name}");
        Formula::Prop(name.to_string())
    }

    pub fn nominal(name: &str) -> Formula {
        debug_assert!(is_nominal_name(name), "bad nominal name {name}");
        Formula::Nominal(name.to_string())
    }

    pub fn neg(a: Formula) -> Formula {
        Formula::Neg(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    pub fn diamond(a: Formula) -> Formula {
        Formula::Diamond(Box::new(a))
    }

    pub fn black_diamond(a: Formula) -> Formula {
        Formula::BlackDiamond(Box::new(a))
    }

    pub fn black_box(a: Formula) -> Formula {
        Formula::BlackBox(Box::new(a))
    }

    /// Join of a list, folded to the left; the empty join is `⊥`.
    pub fn big_or(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bottom)
    }

    /// Meet of a list, folded to the left; the empty meet is `⊤`.
    pub fn big_and(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Top | Bottom | Prop(_) | Nominal(_) => vec![],
            Neg(a) | Box(a) | Diamond(a) | BlackDiamond(a) | BlackBox(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) => vec![a, b],
        }
    }

    fn children_mut(&mut self) -> Vec<&mut Formula> {
        use Formula::*;
        match self {
            Top | Bottom | Prop(_) | Nominal(_) => vec![],
            Neg(a) | Box(a) | Diamond(a) | BlackDiamond(a) | BlackBox(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) => vec![a, b],
        }
    }

    /// Sign received by child `index` of a node carrying `sign`.
    pub fn child_sign(&self, sign: Sign, index: usize) -> Sign {
        match self {
            Formula::Neg(_) => sign.flip(),
            Formula::Implies(_, _) if index == 0 => sign.flip(),
            _ => sign,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(
            self,
            Formula::Top | Formula::Bottom | Formula::Prop(_) | Formula::Nominal(_)
        )
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Propositional variables, sorted.
    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out, &mut BTreeSet::new());
        out
    }

    pub fn nominals(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut BTreeSet::new(), &mut out);
        out
    }

    pub(crate) fn collect_names(&self, props: &mut BTreeSet<String>, noms: &mut BTreeSet<String>) {
        match self {
            Formula::Prop(p) => {
                props.insert(p.clone());
            }
            Formula::Nominal(n) => {
                noms.insert(n.clone());
            }
            _ => {
                for c in self.children() {
                    c.collect_names(props, noms);
                }
            }
        }
    }

    pub fn contains_prop(&self, v: &str) -> bool {
        match self {
            Formula::Prop(p) => p == v,
            _ => self.children().into_iter().any(|c| c.contains_prop(v)),
        }
    }

    pub fn has_props(&self) -> bool {
        match self {
            Formula::Prop(_) => true,
            _ => self.children().into_iter().any(Formula::has_props),
        }
    }

    /// No nominals and no black connectives.
    pub fn is_basic(&self) -> bool {
        match self {
            Formula::Nominal(_) | Formula::BlackDiamond(_) | Formula::BlackBox(_) => false,
            _ => self.children().into_iter().all(Formula::is_basic),
        }
    }

    /// No propositional variables.
    pub fn is_pure(&self) -> bool {
        !self.has_props()
    }

    /// Occurrence profile of `v` in the positive generation tree of `self`.
    pub fn polarity(&self, v: &str) -> Polarity {
        let mut acc = Polarity::Absent;
        self.signs_of(v, Sign::Plus, &mut |s| acc = acc.add(s));
        acc
    }

    /// Calls `f` with the sign of every occurrence of prop `v`, the root
    /// carrying `sign`.
    pub fn signs_of(&self, v: &str, sign: Sign, f: &mut impl FnMut(Sign)) {
        match self {
            Formula::Prop(p) if p == v => f(sign),
            _ => {
                for (i, c) in self.children().into_iter().enumerate() {
                    c.signs_of(v, self.child_sign(sign, i), f);
                }
            }
        }
    }

    /// Replaces every `Prop(v)` leaf by `psi`. No simplification.
    pub fn substitute(&self, v: &str, psi: &Formula) -> Formula {
        match self {
            Formula::Prop(p) if p == v => psi.clone(),
            _ => {
                let mut out = self.clone();
                for c in out.children_mut() {
                    *c = c.substitute(v, psi);
                }
                out
            }
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Formula> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i).and_then(|c| c.at(rest)),
        }
    }

    /// Sign of the node at `path` when the root carries `root`.
    pub fn sign_at(&self, path: &[usize], root: Sign) -> Option<Sign> {
        match path.split_first() {
            None => Some(root),
            Some((&i, rest)) => {
                let child = *self.children().get(i)?;
                child.sign_at(rest, self.child_sign(root, i))
            }
        }
    }

    /// Copy of `self` with the subformula at `path` replaced.
    pub fn replace_at(&self, path: &[usize], new: Formula) -> Option<Formula> {
        match path.split_first() {
            None => Some(new),
            Some((&i, rest)) => {
                let mut out = self.clone();
                let slot = out.children_mut().into_iter().nth(i)?;
                *slot = slot.replace_at(rest, new)?;
                Some(out)
            }
        }
    }

    /// Rewrites `∨ → ◇ ■ ⊤ ⊥` into the `¬ ∧ □ ◆` core.
    pub fn expand_abbreviations(&self) -> Formula {
        use Formula::*;
        let bot = || Formula::and(Formula::prop("p"), Formula::neg(Formula::prop("p")));
        match self {
            Top => Formula::neg(bot()),
            Bottom => bot(),
            Prop(_) | Nominal(_) => self.clone(),
            Neg(a) => Formula::neg(a.expand_abbreviations()),
            And(a, b) => Formula::and(a.expand_abbreviations(), b.expand_abbreviations()),
            Or(a, b) => Formula::neg(Formula::and(
                Formula::neg(a.expand_abbreviations()),
                Formula::neg(b.expand_abbreviations()),
            )),
            Implies(a, b) => Formula::neg(Formula::and(
                a.expand_abbreviations(),
                Formula::neg(b.expand_abbreviations()),
            )),
            Box(a) => Formula::boxed(a.expand_abbreviations()),
            Diamond(a) => Formula::neg(Formula::boxed(Formula::neg(a.expand_abbreviations()))),
            BlackDiamond(a) => Formula::black_diamond(a.expand_abbreviations()),
            BlackBox(a) => Formula::neg(Formula::black_diamond(Formula::neg(
                a.expand_abbreviations(),
            ))),
        }
    }

    /// Unicode rendering (`□ ◇ ◆ ■ ¬ ∧ ∨ → ⊤ ⊥`).
    pub fn unicode(&self) -> String {
        let mut s = String::new();
        write_formula(&mut s, self, 0, &UNICODE).expect("string write");
        s
    }
}

struct Symbols {
    top: &'static str,
    bottom: &'static str,
    neg: &'static str,
    boxed: &'static str,
    diamond: &'static str,
    black_diamond: &'static str,
    black_box: &'static str,
    and: &'static str,
    or: &'static str,
    implies: &'static str,
    leq: &'static str,
}

const ASCII: Symbols = Symbols {
    top: "T",
    bottom: "F",
    neg: "~",
    boxed: "box ",
    diamond: "dia ",
    black_diamond: "bdia ",
    black_box: "bbox ",
    and: " & ",
    or: " | ",
    implies: " -> ",
    leq: " <= ",
};

const UNICODE: Symbols = Symbols {
    top: "⊤",
    bottom: "⊥",
    neg: "¬",
    boxed: "□",
    diamond: "◇",
    black_diamond: "◆",
    black_box: "■",
    and: " ∧ ",
    or: " ∨ ",
    implies: " → ",
    leq: " ≤ ",
};

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

fn write_formula(out: &mut impl fmt::Write, f: &Formula, min: u8, sym: &Symbols) -> fmt::Result {
    let prec = match f {
        Formula::Top | Formula::Bottom | Formula::Prop(_) | Formula::Nominal(_) => u8::MAX,
        Formula::And(..) => PREC_AND,
        Formula::Or(..) => PREC_OR,
        Formula::Implies(..) => PREC_IMP,
        _ => PREC_UNARY,
    };
    if prec < min {
        out.write_char('(')?;
    }
    match f {
        Formula::Top => out.write_str(sym.top)?,
        Formula::Bottom => out.write_str(sym.bottom)?,
        Formula::Prop(n) | Formula::Nominal(n) => out.write_str(n)?,
        Formula::Neg(a) => write_unary(out, sym.neg, a, sym)?,
        Formula::Box(a) => write_unary(out, sym.boxed, a, sym)?,
        Formula::Diamond(a) => write_unary(out, sym.diamond, a, sym)?,
        Formula::BlackDiamond(a) => write_unary(out, sym.black_diamond, a, sym)?,
        Formula::BlackBox(a) => write_unary(out, sym.black_box, a, sym)?,
        Formula::And(a, b) => write_binary(out, a, sym.and, b, PREC_AND, PREC_AND + 1, sym)?,
        Formula::Or(a, b) => write_binary(out, a, sym.or, b, PREC_OR, PREC_OR + 1, sym)?,
        Formula::Implies(a, b) => write_binary(out, a, sym.implies, b, PREC_IMP + 1, PREC_IMP, sym)?,
    }
    if prec < min {
        out.write_char(')')?;
    }
    Ok(())
}

fn write_unary(out: &mut impl fmt::Write, op: &str, a: &Formula, sym: &Symbols) -> fmt::Result {
    out.write_str(op)?;
    write_formula(out, a, PREC_UNARY, sym)
}

fn write_binary(
    out: &mut impl fmt::Write,
    a: &Formula,
    op: &str,
    b: &Formula,
    left_min: u8,
    right_min: u8,
    sym: &Symbols,
) -> fmt::Result {
    write_formula(out, a, left_min, sym)?;
    out.write_str(op)?;
    write_formula(out, b, right_min, sym)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0, &ASCII)
    }
}

/// `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Inequality {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Inequality { lhs, rhs }
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut p = self.lhs.props();
        p.extend(self.rhs.props());
        p
    }

    pub fn nominals(&self) -> BTreeSet<String> {
        let mut n = self.lhs.nominals();
        n.extend(self.rhs.nominals());
        n
    }

    pub fn contains_prop(&self, v: &str) -> bool {
        self.lhs.contains_prop(v) || self.rhs.contains_prop(v)
    }

    pub fn is_basic(&self) -> bool {
        self.lhs.is_basic() && self.rhs.is_basic()
    }

    pub fn is_pure(&self) -> bool {
        self.lhs.is_pure() && self.rhs.is_pure()
    }

    pub fn substitute(&self, v: &str, psi: &Formula) -> Inequality {
        Inequality::new(self.lhs.substitute(v, psi), self.rhs.substitute(v, psi))
    }

    pub fn unicode(&self) -> String {
        format!("{}{}{}", self.lhs.unicode(), UNICODE.leq, self.rhs.unicode())
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.lhs, ASCII.leq, self.rhs)
    }
}

/// `premises₁ & … & premisesₙ ⇒ conclusion`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuasiInequality {
    pub premises: Vec<Inequality>,
    pub conclusion: Inequality,
}

impl QuasiInequality {
    pub fn new(premises: Vec<Inequality>, conclusion: Inequality) -> Self {
        QuasiInequality { premises, conclusion }
    }

    pub fn is_pure(&self) -> bool {
        self.conclusion.is_pure() && self.premises.iter().all(Inequality::is_pure)
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut p = self.conclusion.props();
        for q in &self.premises {
            p.extend(q.props());
        }
        p
    }

    pub fn nominals(&self) -> BTreeSet<String> {
        let mut n = self.conclusion.nominals();
        for q in &self.premises {
            n.extend(q.nominals());
        }
        n
    }

    pub fn unicode(&self) -> String {
        let mut s = String::new();
        for (k, p) in self.premises.iter().enumerate() {
            if k > 0 {
                s.push_str(" & ");
            }
            s.push_str(&p.unicode());
        }
        if !self.premises.is_empty() {
            s.push_str(" ⇒ ");
        }
        s.push_str(&self.conclusion.unicode());
        s
    }
}

impl fmt::Display for QuasiInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.premises.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        if !self.premises.is_empty() {
            f.write_str(" ==> ")?;
        }
        write!(f, "{}", self.conclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("identifier `{name}` at {pos} is neither a proposition ([p-z][0-9]*) nor a nominal ([i-k][0-9]*)")]
    UnknownIdentifier { pos: usize, name: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Neg,
    And,
    Or,
    Arrow,
    Leq,
    LParen,
    RParen,
    Box,
    Dia,
    BDia,
    BBox,
    Top,
    Bottom,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        let next = chars.get(k + 1).map(|&(_, c)| c);
        let single = match c {
            c if c.is_whitespace() => {
                k += 1;
                continue;
            }
            '~' | '¬' => Some(Tok::Neg),
            '&' | '∧' => Some(Tok::And),
            '|' | '∨' => Some(Tok::Or),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '→' => Some(Tok::Arrow),
            '≤' => Some(Tok::Leq),
            '□' => Some(Tok::Box),
            '◇' => Some(Tok::Dia),
            '◆' => Some(Tok::BDia),
            '■' => Some(Tok::BBox),
            '⊤' => Some(Tok::Top),
            '⊥' => Some(Tok::Bottom),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            k += 1;
            continue;
        }
        if c == '-' && next == Some('>') {
            out.push((pos, Tok::Arrow));
            k += 2;
            continue;
        }
        if c == '<' && next == Some('=') {
            out.push((pos, Tok::Leq));
            k += 2;
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_ascii_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            let word: String = chars[start..k].iter().map(|&(_, c)| c).collect();
            let tok = match word.as_str() {
                "box" => Tok::Box,
                "dia" => Tok::Dia,
                "bdia" => Tok::BDia,
                "bbox" => Tok::BBox,
                "T" => Tok::Top,
                "F" => Tok::Bottom,
                _ => Tok::Word(word),
            };
            out.push((pos, tok));
            continue;
        }
        return Err(ParseError::Syntax {
            pos,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    k: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            k: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.k).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.k).map(|&(p, _)| p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.k += 1;
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.err(format!("unexpected trailing token {t:?}")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            Ok(Formula::implies(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while self.eat(&Tok::Or) {
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let wrap: fn(Formula) -> Formula = match self.peek() {
            Some(Tok::Neg) => Formula::neg,
            Some(Tok::Box) => Formula::boxed,
            Some(Tok::Dia) => Formula::diamond,
            Some(Tok::BDia) => Formula::black_diamond,
            Some(Tok::BBox) => Formula::black_box,
            _ => return self.atom(),
        };
        self.k += 1;
        Ok(wrap(self.unary()?))
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Top) => {
                self.k += 1;
                Ok(Formula::Top)
            }
            Some(Tok::Bottom) => {
                self.k += 1;
                Ok(Formula::Bottom)
            }
            Some(Tok::LParen) => {
                self.k += 1;
                let f = self.formula()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(f)
            }
            Some(Tok::Word(w)) => {
                self.k += 1;
                if is_prop_name(&w) {
                    Ok(Formula::Prop(w))
                } else if is_nominal_name(&w) {
                    Ok(Formula::Nominal(w))
                } else {
                    Err(ParseError::UnknownIdentifier { pos, name: w })
                }
            }
            Some(t) => self.err(format!("expected a formula, found {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_inequality(text: &str) -> Result<Inequality, ParseError> {
    let mut p = Parser::new(text)?;
    let lhs = p.formula()?;
    if !p.eat(&Tok::Leq) {
        return p.err("expected `<=`");
    }
    let rhs = p.formula()?;
    p.finish()?;
    Ok(Inequality::new(lhs, rhs))
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl std::str::FromStr for Inequality {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_inequality(s)
    }
}
