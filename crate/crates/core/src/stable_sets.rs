//! Stability vectors, `k`-subsets of `[n]`, and enumeration of the stable ones.
//!
//! A `k`-subset `A = {A(1) < ... < A(k)}` of `[n]` is stable with respect to
//! `s = (s_1, ..., s_k)` when every consecutive gap satisfies
//! `A(j+1) - A(j) >= s_j` and the spread satisfies `A(k) - A(1) <= n - s_k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{self, MAX_N};
use crate::error::{Error, Result};

/// The vector `(s_1, ..., s_k)` of gap lower bounds; the last entry bounds the
/// wrap-around gap through the spread condition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct StabilityVector {
    entries: Vec<u32>,
    theorem_regime: bool,
}

impl StabilityVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::param("stability vector must have at least one entry"));
        }
        if entries.iter().any(|&e| e == 0) {
            return Err(Error::param("stability vector entries must be positive"));
        }
        let k = entries.len();
        let theorem_regime =
            entries[..k - 1].iter().all(|&e| e >= 2) && matches!(entries[k - 1], 1 | 2);
        Ok(StabilityVector {
            entries,
            theorem_regime,
        })
    }

    /// `(s, ..., s)`: the usual `s`-stable notion.
    pub fn uniform(s: u32, k: usize) -> Result<Self> {
        Self::new(vec![s; k])
    }

    /// `(s, ..., s, 1)`: the almost `s`-stable notion.
    pub fn almost(s: u32, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("k must be positive"));
        }
        let mut entries = vec![s; k];
        entries[k - 1] = 1;
        Self::new(entries)
    }

    /// Parses a comma separated list such as `2,2,1`.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::param(format!("bad stability entry `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn last(&self) -> u32 {
        self.entries[self.entries.len() - 1]
    }

    /// `s_i >= 2` for `i < k` and `s_k` in `{1, 2}`. Computed, never set.
    pub fn theorem_regime(&self) -> bool {
        self.theorem_regime
    }

    /// `s_1 + ... + s_{k-1}`.
    pub fn head_sum(&self) -> u32 {
        self.entries[..self.k() - 1].iter().sum()
    }

    /// Same head, different last entry.
    pub fn with_last(&self, last: u32) -> Result<Self> {
        let mut entries = self.entries.clone();
        let k = entries.len();
        entries[k - 1] = last;
        Self::new(entries)
    }

    /// Whether `(n, k, s)` satisfies every hypothesis of the sphere and
    /// chromatic-number theorems: `k >= 2`, the regime flag, and `n >= head_sum + 2`.
    pub fn in_theorem_regime(&self, n: u32) -> bool {
        self.k() >= 2 && self.theorem_regime && n >= self.head_sum() + 2
    }

    /// `n - (s_1 + ... + s_{k-1})` when the parameters are in the theorem regime.
    pub fn chromatic_formula(&self, n: u32) -> Option<u32> {
        self.in_theorem_regime(n).then(|| n - self.head_sum())
    }

    /// The sphere dimension `n - (s_1 + ... + s_{k-1}) - 2` predicted in the theorem regime.
    pub fn sphere_dimension(&self, n: u32) -> Option<i64> {
        self.in_theorem_regime(n)
            .then(|| n as i64 - self.head_sum() as i64 - 2)
    }
}

impl TryFrom<Vec<u32>> for StabilityVector {
    type Error = Error;

    fn try_from(entries: Vec<u32>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<StabilityVector> for Vec<u32> {
    fn from(s: StabilityVector) -> Self {
        s.entries
    }
}

impl fmt::Display for StabilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A strictly increasing list of elements of `[n]`. Serializes as the bare list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "Vec<u32>")]
pub struct KSubset {
    ambient_n: u32,
    elements: Vec<u32>,
}

impl KSubset {
    pub fn new(ambient_n: u32, elements: Vec<u32>) -> Result<Self> {
        check_n(ambient_n)?;
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param(format!(
                "subset elements must be strictly increasing: {elements:?}"
            )));
        }
        if elements.iter().any(|&e| e == 0 || e > ambient_n) {
            return Err(Error::param(format!(
                "subset {elements:?} not contained in [1, {ambient_n}]"
            )));
        }
        Ok(KSubset {
            ambient_n,
            elements,
        })
    }

    pub(crate) fn from_mask(ambient_n: u32, mask: u64) -> Self {
        KSubset {
            ambient_n,
            elements: bits::elements_of(mask),
        }
    }

    pub fn ambient_n(&self) -> u32 {
        self.ambient_n
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `A(j)`, 1-indexed.
    pub fn at(&self, j: usize) -> u32 {
        self.elements[j - 1]
    }

    pub fn min(&self) -> Option<u32> {
        self.elements.first().copied()
    }

    pub fn mask(&self) -> u64 {
        bits::mask_of(&self.elements)
    }

    pub fn is_disjoint(&self, other: &KSubset) -> bool {
        self.mask() & other.mask() == 0
    }
}

impl From<KSubset> for Vec<u32> {
    fn from(a: KSubset) -> Self {
        a.elements
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub(crate) fn check_n(n: u32) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::param(format!("n must lie in [1, {MAX_N}], got {n}")));
    }
    Ok(())
}

/// Stability test on an already sorted element list.
pub(crate) fn sorted_is_stable(elements: &[u32], n: u32, s: &[u32]) -> bool {
    let k = s.len();
    if elements.len() != k {
        return false;
    }
    for j in 0..k - 1 {
        if elements[j + 1] < elements[j] + s[j] {
            return false;
        }
    }
    (elements[k - 1] - elements[0]) as i64 <= n as i64 - s[k - 1] as i64
}

pub fn is_stable(a: &KSubset, s: &StabilityVector) -> Result<bool> {
    if a.len() != s.k() {
        return Err(Error::param(format!(
            "subset {a} has {} elements but the stability vector has {}",
            a.len(),
            s.k()
        )));
    }
    Ok(sorted_is_stable(a.elements(), a.ambient_n(), s.entries()))
}

/// All `s`-stable `k`-subsets of `[n]` in lexicographic order of their element lists.
pub fn enumerate_stable(n: u32, k: usize, s: &StabilityVector) -> Result<Vec<KSubset>> {
    Ok(enumerate_stable_masks(n, k, s)?
        .into_iter()
        .map(|m| KSubset::from_mask(n, m))
        .collect())
}

pub(crate) fn enumerate_stable_masks(n: u32, k: usize, s: &StabilityVector) -> Result<Vec<u64>> {
    check_n(n)?;
    if k == 0 || k as u32 > n {
        return Err(Error::param(format!("need n >= k >= 1, got n={n}, k={k}")));
    }
    if s.k() != k {
        return Err(Error::param(format!(
            "stability vector {s} has length {} but k = {k}",
            s.k()
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    extend_lex(n, s.entries(), 1, &mut current, &mut out);
    Ok(out)
}

fn extend_lex(n: u32, s: &[u32], from: u32, current: &mut Vec<u32>, out: &mut Vec<u64>) {
    let k = s.len();
    if current.len() == k {
        if sorted_is_stable(current, n, s) {
            out.push(bits::mask_of(current));
        }
        return;
    }
    let remaining = (k - current.len()) as u32;
    for e in from..=n {
        // Not enough room left for the remaining elements at minimum spacing.
        let min_tail: u32 = s[current.len()..k - 1].iter().sum();
        if e + min_tail > n || remaining > n - e + 1 {
            break;
        }
        if let Some(&first) = current.first() {
            if (e - first) as i64 > n as i64 - s[k - 1] as i64 {
                break;
            }
        }
        current.push(e);
        let next = e + s[current.len() - 1];
        extend_lex(n, s, next, current, out);
        current.pop();
    }
}

/// Direction of a lexicographic search over sorted element lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LexOrder {
    Smallest,
    Largest,
}

/// The lexicographically smallest (or largest) `s`-stable `k`-subset contained
/// in `within`, as a mask.
pub fn extreme_stable_within(within: u64, n: u32, s: &[u32], order: LexOrder) -> Option<u64> {
    let candidates: Vec<u32> = match order {
        LexOrder::Smallest => bits::elements_of(within),
        LexOrder::Largest => bits::elements_of(within).into_iter().rev().collect(),
    };
    let mut current = Vec::with_capacity(s.len());
    if search_within(&candidates, n, s, order, &mut current) {
        Some(bits::mask_of(&current))
    } else {
        None
    }
}

fn search_within(
    candidates: &[u32],
    n: u32,
    s: &[u32],
    order: LexOrder,
    current: &mut Vec<u32>,
) -> bool {
    let k = s.len();
    if current.len() == k {
        return sorted_is_stable(current, n, s);
    }
    for &e in candidates {
        if let Some(&prev) = current.last() {
            if e < prev + s[current.len() - 1] {
                continue;
            }
        }
        if let Some(&first) = current.first() {
            if (e - first) as i64 > n as i64 - s[k - 1] as i64 {
                continue;
            }
        }
        current.push(e);
        if search_within(candidates, n, s, order, current) {
            return true;
        }
        current.pop();
    }
    false
}

pub fn contains_stable(within: u64, n: u32, s: &[u32]) -> bool {
    extreme_stable_within(within, n, s, LexOrder::Smallest).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(e: &[u32]) -> StabilityVector {
        StabilityVector::new(e.to_vec()).unwrap()
    }

    fn ks(n: u32, e: &[u32]) -> KSubset {
        KSubset::new(n, e.to_vec()).unwrap()
    }

    fn lists(v: &[KSubset]) -> Vec<Vec<u32>> {
        v.iter().map(|a| a.elements().to_vec()).collect()
    }

    #[test]
    fn stability_examples() {
        assert!(is_stable(&ks(9, &[1, 4, 7]), &sv(&[3, 3, 3])).unwrap());
        assert!(!is_stable(&ks(9, &[1, 4, 8]), &sv(&[3, 3, 3])).unwrap());
        assert!(!is_stable(&ks(5, &[1, 5]), &sv(&[2, 2])).unwrap());
        assert!(is_stable(&ks(5, &[1, 5]), &sv(&[2, 1])).unwrap());
    }

    #[test]
    fn stability_length_mismatch() {
        assert!(matches!(
            is_stable(&ks(5, &[1, 3]), &sv(&[2, 2, 1])),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            lists(&enumerate_stable(4, 2, &sv(&[2, 1])).unwrap()),
            vec![vec![1, 3], vec![1, 4], vec![2, 4]]
        );
        assert_eq!(
            lists(&enumerate_stable(5, 2, &sv(&[2, 2])).unwrap()),
            vec![vec![1, 3], vec![1, 4], vec![2, 4], vec![2, 5], vec![3, 5]]
        );
        assert_eq!(
            lists(&enumerate_stable(9, 3, &sv(&[3, 3, 3])).unwrap()),
            vec![vec![1, 4, 7], vec![2, 5, 8], vec![3, 6, 9]]
        );
    }

    #[test]
    fn k_equal_one_uses_spread_only() {
        let all = enumerate_stable(4, 1, &sv(&[3])).unwrap();
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn enumeration_rejects_bad_params() {
        assert!(enumerate_stable(3, 4, &sv(&[1, 1, 1, 1])).is_err());
        assert!(enumerate_stable(5, 2, &sv(&[2, 2, 2])).is_err());
        assert!(enumerate_stable(64, 2, &sv(&[2, 2])).is_err());
    }

    #[test]
    fn regime_flag() {
        assert!(sv(&[2, 1]).theorem_regime());
        assert!(sv(&[3, 2, 2]).theorem_regime());
        assert!(!sv(&[3, 3, 3]).theorem_regime());
        assert!(!sv(&[1, 1]).theorem_regime());
        assert!(sv(&[2, 2]).in_theorem_regime(4));
        assert!(!sv(&[2, 2]).in_theorem_regime(3));
        assert!(!sv(&[2]).in_theorem_regime(10));
        assert_eq!(sv(&[3, 1]).chromatic_formula(6), Some(3));
        assert_eq!(sv(&[2, 2, 1]).sphere_dimension(7), Some(1));
    }

    #[test]
    fn parse_and_serde() {
        let s = StabilityVector::parse("2, 2,1").unwrap();
        assert_eq!(s.entries(), &[2, 2, 1]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[2,2,1]");
        let back: StabilityVector = serde_json::from_str("[3,1]").unwrap();
        assert_eq!(back.entries(), &[3, 1]);
        assert!(serde_json::from_str::<StabilityVector>("[0,1]").is_err());
        assert!(StabilityVector::parse("2,x").is_err());
        assert_eq!(serde_json::to_string(&ks(9, &[1, 4, 7])).unwrap(), "[1,4,7]");
    }

    #[test]
    fn extreme_within() {
        let s = [2, 2];
        let within = bits::mask_of(&[2, 3, 4, 5]);
        let lo = extreme_stable_within(within, 6, &s, LexOrder::Smallest).unwrap();
        let hi = extreme_stable_within(within, 6, &s, LexOrder::Largest).unwrap();
        assert_eq!(bits::elements_of(lo), vec![2, 4]);
        assert_eq!(bits::elements_of(hi), vec![3, 5]);
        assert_eq!(
            extreme_stable_within(bits::mask_of(&[1, 5]), 5, &s, LexOrder::Smallest),
            None
        );
    }
}
