use serde::{Deserialize, Serialize};

use crate::bits;
use crate::complexes::PairElement;
use crate::error::{Error, Result};
use crate::stable_sets::{contains_stable, extreme_stable_within, LexOrder};

/// A chain `(A_1, B_1) ⊂ ... ⊂ (A_l, B_l)` in the pair poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ChainSimplex(Vec<PairElement>);

impl ChainSimplex {
    pub fn new(mut elements: Vec<PairElement>) -> Result<Self> {
        elements.sort_by_key(PairElement::size);
        if elements.is_empty() {
            return Err(Error::param("a chain needs at least one element"));
        }
        if elements.windows(2).any(|w| w[0] == w[1] || !w[0].leq(&w[1])) {
            return Err(Error::param("elements do not form a strictly increasing chain"));
        }
        Ok(ChainSimplex(elements))
    }

    pub(crate) fn from_sorted(elements: Vec<PairElement>) -> Self {
        ChainSimplex(elements)
    }

    pub fn elements(&self) -> &[PairElement] {
        &self.0
    }

    /// `l(σ)`, the index of the top element.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(A_j, B_j)`, 1-indexed.
    pub fn at(&self, j: usize) -> PairElement {
        self.0[j - 1]
    }

    pub fn first(&self) -> PairElement {
        self.0[0]
    }

    pub fn last(&self) -> PairElement {
        self.0[self.0.len() - 1]
    }

    pub fn swapped(&self) -> ChainSimplex {
        ChainSimplex(self.0.iter().map(PairElement::swapped).collect())
    }

    /// Inserts `e` after position `j` (so it becomes element `j + 1`).
    pub fn inserted(&self, j: usize, e: PairElement) -> ChainSimplex {
        let mut v = self.0.clone();
        v.insert(j, e);
        ChainSimplex(v)
    }

    pub fn is_strict_chain(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1] && w[0].leq(&w[1]))
    }
}

/// How `D(σ)` is picked among the `s*`-stable `k`-sets inside `A_1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DSelection {
    #[default]
    LexLargest,
    LexSmallest,
}

impl DSelection {
    fn order(self) -> LexOrder {
        match self {
            DSelection::LexLargest => LexOrder::Largest,
            DSelection::LexSmallest => LexOrder::Smallest,
        }
    }
}

/// Everything the matchings read off a chain. Sets are sorted element lists;
/// indices are 1-based with 0 meaning "no such index".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainFeatures {
    pub l: usize,
    /// `[n] \ A_l` contains no `s*`-stable `k`-set.
    pub in_h1: bool,
    pub c: Option<Vec<u32>>,
    pub r: Option<usize>,
    pub q: Option<usize>,
    pub in_h2: bool,
    pub d: Option<Vec<u32>>,
    /// `D - 1`; absent when `D` is absent or starts at 1.
    pub e_set: Option<Vec<u32>>,
    pub e_set_stable: Option<bool>,
    pub e: Option<usize>,
    /// `[n] \ B_l` contains no `s*`-stable `k`-set.
    pub in_h3: bool,
    /// Outside `H1 ∪ H3` and `B_1` contains no `s*`-stable `k`-set.
    pub in_h5: bool,
    pub f_set: Option<Vec<u32>>,
    pub f: Option<usize>,
    /// Outside `H1 ∪ H3` and `A_1` contains no `s*`-stable `k`-set.
    pub in_h6: bool,
}

/// Parameters shared by every chain of one complex.
#[derive(Clone, Debug)]
pub struct ChainContext {
    pub n: u32,
    pub s: Vec<u32>,
    pub s_star: Vec<u32>,
    pub d_selection: DSelection,
}

impl ChainContext {
    fn full(&self) -> u64 {
        bits::full(self.n)
    }

    pub(crate) fn c_set(&self, sigma: &ChainSimplex) -> Option<u64> {
        let rest = self.full() & !sigma.last().a;
        extreme_stable_within(rest, self.n, &self.s, LexOrder::Smallest)
    }

    pub(crate) fn in_h1(&self, sigma: &ChainSimplex) -> bool {
        !contains_stable(self.full() & !sigma.last().a, self.n, &self.s_star)
    }

    pub(crate) fn in_h3(&self, sigma: &ChainSimplex) -> bool {
        self.in_h1(&sigma.swapped())
    }

    /// `max{j : C ⊄ B_j} ∪ {0}`.
    pub(crate) fn r_index(sigma: &ChainSimplex, c: u64) -> usize {
        (1..=sigma.len())
            .rev()
            .find(|&j| !bits::is_subset(c, sigma.at(j).b))
            .unwrap_or(0)
    }

    /// `max{j : B_j = C} ∪ {0}`.
    pub(crate) fn q_index(sigma: &ChainSimplex, c: u64) -> usize {
        (1..=sigma.len()).rev().find(|&j| sigma.at(j).b == c).unwrap_or(0)
    }

    pub(crate) fn in_h2(&self, sigma: &ChainSimplex) -> bool {
        self.in_h1(sigma)
            && self
                .c_set(sigma)
                .map_or(false, |c| Self::q_index(sigma, c) == sigma.len())
    }

    pub(crate) fn d_set(&self, sigma: &ChainSimplex) -> Option<u64> {
        extreme_stable_within(sigma.first().a, self.n, &self.s_star, self.d_selection.order())
    }

    /// `D - 1`, if `1 ∉ D`.
    pub(crate) fn e_set(d: u64) -> Option<u64> {
        (d & 1 == 0).then_some(d >> 1)
    }

    /// `max{j : A_j ∩ E = ∅} ∪ {0}`.
    pub(crate) fn e_index(sigma: &ChainSimplex, e: u64) -> usize {
        (1..=sigma.len())
            .rev()
            .find(|&j| sigma.at(j).a & e == 0)
            .unwrap_or(0)
    }

    pub(crate) fn f_set(&self, sigma: &ChainSimplex) -> Option<u64> {
        let rest = self.full() & !sigma.last().a;
        extreme_stable_within(rest, self.n, &self.s_star, LexOrder::Smallest)
    }

    /// `max{j : F ⊄ B_j} ∪ {0}`.
    pub(crate) fn f_index(sigma: &ChainSimplex, f: u64) -> usize {
        Self::r_index(sigma, f)
    }

    pub(crate) fn b1_lacks_star(&self, sigma: &ChainSimplex) -> bool {
        !contains_stable(sigma.first().b, self.n, &self.s_star)
    }

    pub(crate) fn in_h5(&self, sigma: &ChainSimplex) -> bool {
        !self.in_h1(sigma) && !self.in_h3(sigma) && self.b1_lacks_star(sigma)
    }

    pub(crate) fn in_h6(&self, sigma: &ChainSimplex) -> bool {
        self.in_h5(&sigma.swapped())
    }

    pub fn classify(&self, sigma: &ChainSimplex) -> ChainFeatures {
        let list = |m: u64| bits::elements_of(m);
        let in_h1 = self.in_h1(sigma);
        let c = in_h1.then(|| self.c_set(sigma)).flatten();
        let in_h2 = self.in_h2(sigma);
        let d = if in_h2 { self.d_set(sigma) } else { None };
        let e_set = d.and_then(Self::e_set);
        let f_set = if self.in_h5(sigma) { self.f_set(sigma) } else { None };
        ChainFeatures {
            l: sigma.len(),
            in_h1,
            c: c.map(list),
            r: c.map(|c| Self::r_index(sigma, c)),
            q: c.map(|c| Self::q_index(sigma, c)),
            in_h2,
            d: d.map(list),
            e_set: e_set.map(list),
            e_set_stable: e_set.map(|e| contains_stable(e, self.n, &self.s_star)),
            e: e_set.map(|e| Self::e_index(sigma, e)),
            in_h3: self.in_h3(sigma),
            in_h5: self.in_h5(sigma),
            f_set: f_set.map(list),
            f: f_set.map(|f| Self::f_index(sigma, f)),
            in_h6: self.in_h6(sigma),
        }
    }
}

/// Feature record of one chain of `Δ(P(n, k, s))` relative to `s*`.
pub fn classify_chain(
    sigma: &ChainSimplex,
    n: u32,
    s: &[u32],
    s_star: &[u32],
    d_selection: DSelection,
) -> ChainFeatures {
    ChainContext {
        n,
        s: s.to_vec(),
        s_star: s_star.to_vec(),
        d_selection,
    }
    .classify(sigma)
}
