//! Finite possibility frames and their regular open algebras.
//!
//! Points are numbered `0..n` and sets of points are `u64` bitsets, so frames
//! are limited to 64 points; building the algebra enumerates all subsets and
//! is only practical for small `n`.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_POINTS: usize = 64;
/// Largest poset for which the regular open algebra is materialised.
pub const MAX_ALGEBRA_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame has {0} points; at most {MAX_POINTS} are supported")]
    TooLarge(usize),
    #[error("order is not {0}")]
    NotPartialOrder(&'static str),
    #[error("matrix is not {0}x{0}")]
    BadShape(usize),
    #[error("admissible set {0} is not regular open")]
    NotRegularOpen(PointSet),
    #[error("admissible family is not closed under {0}")]
    NotClosed(&'static str),
    #[error("box does not preserve regular opens; the full frame is not well defined")]
    NotFull,
    #[error("{0} is not an element of the algebra")]
    NotInCarrier(PointSet),
}

/// A set of points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn full(n: usize) -> PointSet {
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(w: usize) -> PointSet {
        PointSet(1 << w)
    }

    pub fn from_points(points: impl IntoIterator<Item = usize>) -> PointSet {
        PointSet(points.into_iter().fold(0, |acc, w| acc | (1 << w)))
    }

    pub fn contains(self, w: usize) -> bool {
        self.0 >> w & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, o: PointSet) -> PointSet {
        PointSet(self.0 | o.0)
    }

    pub fn intersection(self, o: PointSet) -> PointSet {
        PointSet(self.0 & o.0)
    }

    pub fn minus(self, o: PointSet) -> PointSet {
        PointSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: PointSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w)
            }
        })
    }

    /// `n` characters, point 0 first.
    pub fn bitstring(self, n: usize) -> String {
        (0..n).map(|w| if self.contains(w) { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, w) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "w{w}")?;
        }
        f.write_str("}")
    }
}

/// A finite partial order. `below[x]` holds every `y ⊑ x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    below: Vec<u64>,
    above: Vec<u64>,
}

impl Poset {
    /// Builds the order with `leq(x, y)` meaning `x ⊑ y`.
    pub fn new(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Poset, FrameError> {
        if n > MAX_POINTS {
            return Err(FrameError::TooLarge(n));
        }
        let mut below = vec![0u64; n];
        let mut above = vec![0u64; n];
        for x in 0..n {
            for y in 0..n {
                if leq(x, y) {
                    below[y] |= 1 << x;
                    above[x] |= 1 << y;
                }
            }
        }
        let p = Poset { n, below, above };
        p.validate()?;
        Ok(p)
    }

    pub fn from_matrix(m: &[Vec<bool>]) -> Result<Poset, FrameError> {
        let n = m.len();
        if m.iter().any(|row| row.len() != n) {
            return Err(FrameError::BadShape(n));
        }
        Poset::new(n, |x, y| m[x][y])
    }

    fn validate(&self) -> Result<(), FrameError> {
        for x in 0..self.n {
            if !self.leq(x, x) {
                return Err(FrameError::NotPartialOrder("reflexive"));
            }
            for y in 0..self.n {
                if x != y && self.leq(x, y) && self.leq(y, x) {
                    return Err(FrameError::NotPartialOrder("antisymmetric"));
                }
                // x ⊑ y implies everything below x is below y
                if self.leq(x, y) && self.below[x] & !self.below[y] != 0 {
                    return Err(FrameError::NotPartialOrder("transitive"));
                }
            }
        }
        Ok(())
    }

    pub fn discrete(n: usize) -> Poset {
        Poset::new(n, |x, y| x == y).expect("discrete order")
    }

    /// `w_{n-1} ⊑ … ⊑ w_1 ⊑ w_0`.
    pub fn chain(n: usize) -> Poset {
        Poset::new(n, |x, y| x >= y).expect("chain order")
    }

    /// Root `w0` refined by the two incomparable points `w1`, `w2`.
    pub fn fork() -> Poset {
        Poset::new(3, |x, y| x == y || y == 0).expect("fork order")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `x ⊑ y`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.below[y] >> x & 1 == 1
    }

    pub fn below(&self, x: usize) -> PointSet {
        PointSet(self.below[x])
    }

    pub fn above(&self, x: usize) -> PointSet {
        PointSet(self.above[x])
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.n)
    }

    /// `⇓X = {x | ∃y ⊒ x, y ∈ X}`.
    pub fn down_closure(&self, x: PointSet) -> PointSet {
        PointSet(x.iter().fold(0, |acc, y| acc | self.below[y]))
    }

    /// `cl(X) = {x | ∃y ⊑ x, y ∈ X}`.
    pub fn closure(&self, x: PointSet) -> PointSet {
        PointSet::from_points((0..self.n).filter(|&w| self.below[w] & x.0 != 0))
    }

    /// `int(X) = {x | ∀y ⊑ x, y ∈ X}`.
    pub fn interior(&self, x: PointSet) -> PointSet {
        PointSet::from_points((0..self.n).filter(|&w| self.below[w] & !x.0 == 0))
    }

    /// Least regular open superset: `int(cl(⇓X))`.
    pub fn ro_closure(&self, x: PointSet) -> PointSet {
        self.interior(self.closure(self.down_closure(x)))
    }

    pub fn is_down_set(&self, x: PointSet) -> bool {
        self.down_closure(x) == x
    }

    pub fn is_regular_open(&self, x: PointSet) -> bool {
        self.interior(self.closure(x)) == x
    }

    /// All regular open sets, sorted by bitset value.
    pub fn regular_open_family(&self) -> Vec<PointSet> {
        assert!(
            self.n <= MAX_ALGEBRA_POINTS,
            "regular open family requested for {} points",
            self.n
        );
        (0..1u64 << self.n)
            .map(PointSet)
            .filter(|&x| self.is_regular_open(x))
            .collect()
    }
}

/// A binary relation; `succ[w] = R[w] = {v | wRv}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    succ: Vec<u64>,
}

impl Relation {
    pub fn new(n: usize, rel: impl Fn(usize, usize) -> bool) -> Relation {
        let succ = (0..n)
            .map(|w| (0..n).filter(|&v| rel(w, v)).fold(0, |a, v| a | 1 << v))
            .collect();
        Relation { n, succ }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::new(n, |w, v| pairs.contains(&(w, v)))
    }

    pub fn from_matrix(m: &[Vec<bool>]) -> Result<Relation, FrameError> {
        let n = m.len();
        if m.iter().any(|row| row.len() != n) {
            return Err(FrameError::BadShape(n));
        }
        Ok(Relation::new(n, |w, v| m[w][v]))
    }

    /// Row-major bits: bit `w*n + v` is `wRv`.
    pub fn from_bits(n: usize, bits: u64) -> Relation {
        Relation::new(n, |w, v| bits >> (w * n + v) & 1 == 1)
    }

    pub fn empty(n: usize) -> Relation {
        Relation::new(n, |_, _| false)
    }

    pub fn identity(n: usize) -> Relation {
        Relation::new(n, |w, v| w == v)
    }

    pub fn total(n: usize) -> Relation {
        Relation::new(n, |_, _| true)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn holds(&self, w: usize, v: usize) -> bool {
        self.succ[w] >> v & 1 == 1
    }

    pub fn successors(&self, w: usize) -> PointSet {
        PointSet(self.succ[w])
    }

    /// `R[X] = {v | ∃x ∈ X, xRv}`.
    pub fn image(&self, x: PointSet) -> PointSet {
        PointSet(x.iter().fold(0, |acc, w| acc | self.succ[w]))
    }

    /// `□X = {w | R[w] ⊆ X}`.
    pub fn box_op(&self, x: PointSet) -> PointSet {
        PointSet::from_points((0..self.n).filter(|&w| self.succ[w] & !x.0 == 0))
    }
}

/// Whether `□` maps every regular open set of `poset` to a regular open set.
pub fn is_full_frame(poset: &Poset, acc: &Relation) -> bool {
    poset
        .regular_open_family()
        .into_iter()
        .all(|x| poset.is_regular_open(acc.box_op(x)))
}

/// `(W, ⊑, R, P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PossibilityFrame {
    pub poset: Poset,
    pub acc: Relation,
    /// Sorted by bitset value.
    pub admissible: Vec<PointSet>,
}

impl PossibilityFrame {
    pub fn new(
        poset: Poset,
        acc: Relation,
        mut admissible: Vec<PointSet>,
    ) -> Result<PossibilityFrame, FrameError> {
        if acc.size() != poset.size() {
            return Err(FrameError::BadShape(poset.size()));
        }
        admissible.sort();
        admissible.dedup();
        let full = poset.full();
        for &x in &admissible {
            if !x.is_subset(full) || !poset.is_regular_open(x) {
                return Err(FrameError::NotRegularOpen(x));
            }
        }
        let has = |x: PointSet| admissible.binary_search(&x).is_ok();
        if !has(PointSet::EMPTY) || !has(full) {
            return Err(FrameError::NotClosed("constants"));
        }
        for &x in &admissible {
            if !has(poset.interior(full.minus(x))) {
                return Err(FrameError::NotClosed("complement"));
            }
            if !has(acc.box_op(x)) {
                return Err(FrameError::NotClosed("box"));
            }
            for &y in &admissible {
                if !has(x.intersection(y)) {
                    return Err(FrameError::NotClosed("meet"));
                }
                if !has(poset.interior(poset.closure(x.union(y)))) {
                    return Err(FrameError::NotClosed("join"));
                }
            }
        }
        Ok(PossibilityFrame {
            poset,
            acc,
            admissible,
        })
    }

    /// The frame with `P = RO(W)`; fails unless `□` preserves regular opens.
    pub fn full(poset: Poset, acc: Relation) -> Result<PossibilityFrame, FrameError> {
        if acc.size() != poset.size() {
            return Err(FrameError::BadShape(poset.size()));
        }
        if !is_full_frame(&poset, &acc) {
            return Err(FrameError::NotFull);
        }
        let admissible = poset.regular_open_family();
        Ok(PossibilityFrame {
            poset,
            acc,
            admissible,
        })
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn is_full(&self) -> bool {
        self.admissible == self.poset.regular_open_family()
    }

    /// `P(w) = {X ∈ P | w ∈ X}`.
    fn neighbourhood(&self, w: usize) -> Vec<bool> {
        self.admissible.iter().map(|x| x.contains(w)).collect()
    }

    pub fn tightness(&self) -> Tightness {
        let n = self.size();
        let r_tight = (0..n).all(|w| {
            (0..n).all(|v| {
                let premise = self
                    .admissible
                    .iter()
                    .all(|&x| !self.acc.box_op(x).contains(w) || x.contains(v));
                !premise || self.acc.holds(w, v)
            })
        });
        let order_tight = (0..n).all(|w| {
            (0..n).all(|v| {
                let premise = self
                    .admissible
                    .iter()
                    .all(|&x| !x.contains(w) || x.contains(v));
                !premise || self.poset.leq(v, w)
            })
        });
        let filter_descriptive = r_tight && order_tight && {
            let neighbourhoods: Vec<Vec<bool>> = (0..n).map(|w| self.neighbourhood(w)).collect();
            self.admissible.iter().filter(|a| !a.is_empty()).all(|&a| {
                let principal: Vec<bool> = self.admissible.iter().map(|&x| a.is_subset(x)).collect();
                neighbourhoods.contains(&principal)
            })
        };
        Tightness {
            r_tight,
            order_tight,
            filter_descriptive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tightness {
    pub r_tight: bool,
    pub order_tight: bool,
    pub filter_descriptive: bool,
}

/// Index of an element of an [`RoAlgebra`] carrier.
pub type Elem = usize;

/// The regular open algebra of a full frame with its operation tables.
#[derive(Clone, Debug)]
pub struct RoAlgebra {
    poset: Poset,
    acc: Relation,
    carrier: Vec<PointSet>,
    index: HashMap<PointSet, Elem>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    implies: Vec<Elem>,
    complement: Vec<Elem>,
    boxed: Vec<Elem>,
    diamond: Vec<Elem>,
    black_diamond: Vec<Elem>,
    black_box: Vec<Elem>,
    psat: Vec<(Elem, usize)>,
}

impl RoAlgebra {
    pub fn new(poset: &Poset, acc: &Relation) -> Result<RoAlgebra, FrameError> {
        if acc.size() != poset.size() {
            return Err(FrameError::BadShape(poset.size()));
        }
        let carrier = poset.regular_open_family();
        let index: HashMap<PointSet, Elem> =
            carrier.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let m = carrier.len();
        let full = poset.full();
        let lookup = |x: PointSet| index.get(&x).copied().ok_or(FrameError::NotFull);

        let complement: Vec<Elem> = carrier
            .iter()
            .map(|&x| lookup(poset.interior(full.minus(x))))
            .collect::<Result<_, _>>()?;
        let boxed: Vec<Elem> = carrier
            .iter()
            .map(|&x| lookup(acc.box_op(x)))
            .collect::<Result<_, _>>()?;
        let black_diamond: Vec<Elem> = carrier
            .iter()
            .map(|&x| lookup(poset.ro_closure(acc.image(x))))
            .collect::<Result<_, _>>()?;
        let diamond: Vec<Elem> = (0..m).map(|a| complement[boxed[complement[a]]]).collect();
        let black_box: Vec<Elem> = (0..m)
            .map(|a| complement[black_diamond[complement[a]]])
            .collect();

        let mut meet = vec![0; m * m];
        let mut join = vec![0; m * m];
        let mut implies = vec![0; m * m];
        for (a, &x) in carrier.iter().enumerate() {
            for (b, &y) in carrier.iter().enumerate() {
                meet[a * m + b] = lookup(x.intersection(y))?;
                join[a * m + b] = lookup(poset.interior(poset.closure(x.union(y))))?;
                implies[a * m + b] = lookup(poset.interior(full.minus(x).union(y)))?;
            }
        }

        let mut psat: Vec<(Elem, usize)> = Vec::new();
        for w in 0..poset.size() {
            let e = lookup(poset.ro_closure(PointSet::singleton(w)))?;
            if !psat.iter().any(|&(x, _)| x == e) {
                psat.push((e, w));
            }
        }

        Ok(RoAlgebra {
            poset: poset.clone(),
            acc: acc.clone(),
            carrier,
            index,
            meet,
            join,
            implies,
            complement,
            boxed,
            diamond,
            black_diamond,
            black_box,
            psat,
        })
    }

    pub fn of_frame(frame: &PossibilityFrame) -> Result<RoAlgebra, FrameError> {
        RoAlgebra::new(&frame.poset, &frame.acc)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn acc(&self) -> &Relation {
        &self.acc
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn carrier(&self) -> &[PointSet] {
        &self.carrier
    }

    pub fn set(&self, a: Elem) -> PointSet {
        self.carrier[a]
    }

    pub fn index_of(&self, x: PointSet) -> Result<Elem, FrameError> {
        self.index.get(&x).copied().ok_or(FrameError::NotInCarrier(x))
    }

    pub fn bottom(&self) -> Elem {
        0
    }

    pub fn top(&self) -> Elem {
        self.carrier.len() - 1
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.carrier[a].is_subset(self.carrier[b])
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.len() + b]
    }

    pub fn implies(&self, a: Elem, b: Elem) -> Elem {
        self.implies[a * self.len() + b]
    }

    pub fn complement(&self, a: Elem) -> Elem {
        self.complement[a]
    }

    pub fn box_op(&self, a: Elem) -> Elem {
        self.boxed[a]
    }

    pub fn diamond(&self, a: Elem) -> Elem {
        self.diamond[a]
    }

    pub fn black_diamond(&self, a: Elem) -> Elem {
        self.black_diamond[a]
    }

    pub fn black_box(&self, a: Elem) -> Elem {
        self.black_box[a]
    }

    /// Pseudo-atoms `ro({w})`, each with its first witnessing point.
    pub fn psat(&self) -> &[(Elem, usize)] {
        &self.psat
    }

    /// Embedding into the powerset algebra.
    pub fn e(&self, a: Elem) -> PointSet {
        self.carrier[a]
    }

    /// Left adjoint of [`RoAlgebra::e`].
    pub fn c(&self, x: PointSet) -> Elem {
        self.index[&self.poset.ro_closure(x)]
    }

    /// Join of an arbitrary family, `int(cl(⋃))`.
    pub fn big_join(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        let u = items
            .into_iter()
            .fold(PointSet::EMPTY, |acc, a| acc.union(self.carrier[a]));
        self.index[&self.poset.interior(self.poset.closure(u))]
    }

    pub fn big_meet(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        let full = self.poset.full();
        let i = items
            .into_iter()
            .fold(full, |acc, a| acc.intersection(self.carrier[a]));
        self.index[&i]
    }
}

/// How many accessibility relations to try per frame size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AccBudget {
    Exhaustive,
    /// Sizes with more than this many candidate relations are sampled until
    /// this many full frames have been produced.
    Samples(usize),
}

/// All labeled partial orders on `n` points, in a fixed order.
pub fn labeled_posets(n: usize) -> Vec<Poset> {
    assert!(n <= 6, "labeled poset enumeration is limited to 6 points");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    (0u64..1 << pairs.len())
        .filter_map(|mask| {
            Poset::new(n, |x, y| {
                x == y
                    || pairs
                        .iter()
                        .position(|&p| p == (x, y))
                        .is_some_and(|k| mask >> k & 1 == 1)
            })
            .ok()
        })
        .collect()
}

/// Full frames on `1..=max_size` points.
///
/// A size is enumerated exhaustively when its `2^(n²)` candidate relations fit
/// in the budget; otherwise posets and relations are drawn uniformly from a
/// seeded generator until the budget's number of full frames is reached.
pub fn enumerate_full_frames(
    max_size: usize,
    acc_budget: AccBudget,
    seed: u64,
) -> impl Iterator<Item = PossibilityFrame> {
    assert!(max_size >= 1, "max_size must be at least 1");
    (1..=max_size).flat_map(move |n| frames_of_size(n, acc_budget, seed))
}

fn frames_of_size(n: usize, budget: AccBudget, seed: u64) -> Box<dyn Iterator<Item = PossibilityFrame>> {
    let posets = labeled_posets(n);
    let bits = n * n;
    let sample = match budget {
        AccBudget::Samples(k) if bits >= 63 || (1u64 << bits) > k as u64 => Some(k),
        _ => None,
    };
    match sample {
        None => Box::new(posets.into_iter().flat_map(move |p| {
            (0u64..1 << bits).filter_map(move |r| {
                PossibilityFrame::full(p.clone(), Relation::from_bits(n, r)).ok()
            })
        })),
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9));
            let max_attempts = k.saturating_mul(1000).max(1000);
            let mut attempts = 0usize;
            let mut produced = 0usize;
            Box::new(std::iter::from_fn(move || {
                while produced < k && attempts < max_attempts {
                    attempts += 1;
                    let p = &posets[rng.gen_range(0..posets.len())];
                    let r = rng.gen::<u64>() & ((1u64 << bits) - 1);
                    if let Ok(f) = PossibilityFrame::full(p.clone(), Relation::from_bits(n, r)) {
                        produced += 1;
                        return Some(f);
                    }
                }
                None
            }))
        }
    }
}

fn matrix_rows(n: usize, f: impl Fn(usize, usize) -> bool) -> Vec<String> {
    (0..n)
        .map(|x| (0..n).map(|y| if f(x, y) { '1' } else { '0' }).collect())
        .collect()
}

/// Line-oriented dump: header, order rows (`x ⊑ y` at row x, column y),
/// accessibility rows, then one bitstring per admissible set.
pub fn dump_frame(index: usize, frame: &PossibilityFrame) -> String {
    let n = frame.size();
    let mut out = format!("frame {index} size {n}\n");
    for row in matrix_rows(n, |x, y| frame.poset.leq(x, y)) {
        out.push_str(&format!("leq {row}\n"));
    }
    for row in matrix_rows(n, |x, y| frame.acc.holds(x, y)) {
        out.push_str(&format!("acc {row}\n"));
    }
    for x in &frame.admissible {
        out.push_str(&format!("ro  {}\n", x.bitstring(n)));
    }
    out.push_str("end\n");
    out
}
