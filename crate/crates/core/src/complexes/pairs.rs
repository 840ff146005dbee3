//! The pair poset `P(n, k, s)` and the Hom-poset `Hom_p(K_2, G)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::poset::Poset;
use crate::bits;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::kneser::StableKneserGraph;
use crate::stable_sets::{check_n, enumerate_stable_masks, StabilityVector};

const MAX_PAIR_N: u32 = 24;

/// A pair `(A, B)` of disjoint subsets of `[n]`, ordered componentwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairElement {
    pub a: u64,
    pub b: u64,
}

impl PairElement {
    pub fn new(a: u64, b: u64) -> Self {
        PairElement { a, b }
    }

    pub fn from_lists(a: &[u32], b: &[u32]) -> Self {
        PairElement {
            a: bits::mask_of(a),
            b: bits::mask_of(b),
        }
    }

    pub fn is_disjoint(&self) -> bool {
        self.a & self.b == 0
    }

    /// Componentwise inclusion.
    pub fn leq(&self, other: &PairElement) -> bool {
        bits::is_subset(self.a, other.a) && bits::is_subset(self.b, other.b)
    }

    /// `|A| + |B|`; strictly increasing along any chain.
    pub fn size(&self) -> u32 {
        self.a.count_ones() + self.b.count_ones()
    }

    pub fn swapped(&self) -> PairElement {
        PairElement {
            a: self.b,
            b: self.a,
        }
    }

    pub fn a_elements(&self) -> Vec<u32> {
        bits::elements_of(self.a)
    }

    pub fn b_elements(&self) -> Vec<u32> {
        bits::elements_of(self.b)
    }
}

impl Ord for PairElement {
    fn cmp(&self, other: &Self) -> Ordering {
        bits::cmp_lex(self.a, other.a).then_with(|| bits::cmp_lex(self.b, other.b))
    }
}

impl PartialOrd for PairElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PairElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?},{:?})", self.a_elements(), self.b_elements())
    }
}

#[derive(Serialize)]
struct PairJson {
    a: Vec<u32>,
    b: Vec<u32>,
}

impl Serialize for PairElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PairJson {
            a: self.a_elements(),
            b: self.b_elements(),
        }
        .serialize(serializer)
    }
}

/// For every subset `X` of `[n]`, whether `X` contains an `s`-stable `k`-set.
pub(crate) fn containment_table(n: u32, k: usize, s: &StabilityVector) -> Result<Vec<bool>> {
    check_n(n)?;
    if n > MAX_PAIR_N {
        return Err(Error::param(format!(
            "pair posets are limited to n <= {MAX_PAIR_N}, got {n}"
        )));
    }
    let mut good = vec![false; 1usize << n];
    if k as u32 <= n {
        for t in enumerate_stable_masks(n, k, s)? {
            good[t as usize] = true;
        }
    } else if s.k() != k {
        return Err(Error::param("stability vector length must equal k"));
    }
    for bit in 0..n {
        let step = 1usize << bit;
        for x in 0..good.len() {
            if x & step != 0 && good[x ^ step] {
                good[x] = true;
            }
        }
    }
    Ok(good)
}

/// `P(n, k, s)`: all `(A, B)` with `A ∩ B = ∅` where each side contains an
/// `s`-stable `k`-set, ordered by componentwise inclusion. Elements are sorted
/// lexicographically by their `(A, B)` element lists.
pub fn build_pair_poset(n: u32, k: usize, s: &StabilityVector, caps: &Caps) -> Result<Poset<PairElement>> {
    if s.k() != k {
        return Err(Error::param(format!(
            "stability vector {s} has length {} but k = {k}",
            s.k()
        )));
    }
    let good = containment_table(n, k, s)?;
    let full = bits::full(n);
    let mut elements = Vec::new();
    for a in 0..=full {
        if !good[a as usize] {
            continue;
        }
        let rest = full & !a;
        let mut b = rest;
        loop {
            if good[b as usize] {
                elements.push(PairElement { a, b });
                caps.check_elements(elements.len())?;
            }
            if b == 0 {
                break;
            }
            b = (b - 1) & rest;
        }
    }
    elements.sort_unstable();
    let index: HashMap<PairElement, u32> = elements
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i as u32))
        .collect();
    let above = elements
        .iter()
        .map(|e| {
            let free = full & !(e.a | e.b);
            let mut up = Vec::new();
            // Every way of distributing some free elements onto A and B.
            let mut x = free;
            loop {
                let rest = free & !x;
                let mut y = rest;
                loop {
                    if x | y != 0 {
                        if let Some(&j) = index.get(&PairElement::new(e.a | x, e.b | y)) {
                            up.push(j);
                        }
                    }
                    if y == 0 {
                        break;
                    }
                    y = (y - 1) & rest;
                }
                if x == 0 {
                    break;
                }
                x = (x - 1) & free;
            }
            up
        })
        .collect();
    Poset::from_upsets(elements, above)
}

/// A pair of nonempty disjoint vertex sets of a graph with every cross pair
/// an edge. Vertex `v` lives at bit `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomPosetElement {
    pub a: u64,
    pub b: u64,
}

impl HomPosetElement {
    pub fn leq(&self, other: &HomPosetElement) -> bool {
        bits::is_subset(self.a, other.a) && bits::is_subset(self.b, other.b)
    }

    pub fn a_vertices(&self) -> Vec<usize> {
        vertex_list(self.a)
    }

    pub fn b_vertices(&self) -> Vec<usize> {
        vertex_list(self.b)
    }
}

pub(crate) fn vertex_list(mask: u64) -> Vec<usize> {
    bits::elements_of(mask).into_iter().map(|e| e as usize - 1).collect()
}

impl Ord for HomPosetElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.a_vertices()
            .cmp(&other.a_vertices())
            .then_with(|| self.b_vertices().cmp(&other.b_vertices()))
    }
}

impl PartialOrd for HomPosetElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Serialize)]
struct HomJson {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Serialize for HomPosetElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        HomJson {
            a: self.a_vertices(),
            b: self.b_vertices(),
        }
        .serialize(serializer)
    }
}

pub(crate) fn adjacency_masks(g: &StableKneserGraph) -> Result<Vec<u64>> {
    if g.num_vertices() > 64 {
        return Err(Error::Resource {
            what: "graph vertices for Hom-poset",
            count: g.num_vertices(),
            cap: 64,
        });
    }
    Ok((0..g.num_vertices())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1u64 << u)))
        .collect())
}

/// `Hom_p(K_2, G)` ordered componentwise.
pub fn build_hom_poset(g: &StableKneserGraph, caps: &Caps) -> Result<Poset<HomPosetElement>> {
    let adj = adjacency_masks(g)?;
    let mut elements = Vec::new();
    let mut stack = Vec::new();
    collect_hom(&adj, 0, 0, u64::MAX, &mut stack, &mut elements, caps)?;
    elements.sort_unstable();
    let index: HashMap<HomPosetElement, u32> = elements.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect();
    let common = |a: u64| {
        (0..adj.len())
            .filter(|&v| a >> v & 1 == 1)
            .fold(u64::MAX, |acc, v| acc & adj[v])
    };
    // (a', b') lies above (a, b) when a' grows a inside the vertices adjacent
    // to all of b, and b' grows b inside the common neighbors of a'.
    let above = elements
        .iter()
        .map(|e| {
            let room_a = (0..adj.len())
                .filter(|&v| e.b & !adj[v] == 0)
                .fold(0u64, |acc, v| acc | 1u64 << v)
                & !e.a;
            let mut up = Vec::new();
            for_each_submask(room_a, |x| {
                let a = e.a | x;
                let room_b = common(a) & !e.b;
                for_each_submask(room_b, |y| {
                    if x | y != 0 {
                        up.push(index[&HomPosetElement { a, b: e.b | y }]);
                    }
                });
            });
            up
        })
        .collect();
    Poset::from_upsets(elements, above)
}

fn for_each_submask(mask: u64, mut f: impl FnMut(u64)) {
    let mut x = mask;
    loop {
        f(x);
        if x == 0 {
            break;
        }
        x = (x - 1) & mask;
    }
}

fn collect_hom(
    adj: &[u64],
    from: usize,
    a: u64,
    common: u64,
    stack: &mut Vec<usize>,
    out: &mut Vec<HomPosetElement>,
    caps: &Caps,
) -> Result<()> {
    if a != 0 {
        let mut b = common;
        while b != 0 {
            out.push(HomPosetElement { a, b });
            caps.check_elements(out.len())?;
            b = (b - 1) & common;
        }
    }
    for v in from..adj.len() {
        let next = common & adj[v];
        if next == 0 {
            continue;
        }
        stack.push(v);
        collect_hom(adj, v + 1, a | (1u64 << v), next, stack, out, caps)?;
        stack.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kneser::build_graph;

    fn sv(e: &[u32]) -> StabilityVector {
        StabilityVector::new(e.to_vec()).unwrap()
    }

    #[test]
    fn pair_poset_examples() {
        let caps = Caps::default();
        let p = build_pair_poset(4, 2, &sv(&[2, 1]), &caps).unwrap();
        assert_eq!(
            p.elements(),
            &[
                PairElement::from_lists(&[1, 3], &[2, 4]),
                PairElement::from_lists(&[2, 4], &[1, 3])
            ]
        );
        assert!(!p.leq(0, 1) && !p.leq(1, 0));

        let p = build_pair_poset(4, 2, &sv(&[2, 2]), &caps).unwrap();
        let minimal: Vec<PairElement> = p.minimal_elements().iter().map(|&i| *p.element(i)).collect();
        assert_eq!(
            minimal,
            vec![
                PairElement::from_lists(&[1, 3], &[2, 4]),
                PairElement::from_lists(&[2, 4], &[1, 3])
            ]
        );

        assert!(build_pair_poset(3, 2, &sv(&[2, 1]), &caps).unwrap().is_empty());
    }

    #[test]
    fn pair_poset_order_is_inclusion() {
        let p = build_pair_poset(6, 2, &sv(&[2, 1]), &Caps::default()).unwrap();
        for i in 0..p.len() as u32 {
            for j in 0..p.len() as u32 {
                assert_eq!(p.leq(i, j), p.element(i).leq(p.element(j)));
            }
        }
        for (lo, hi) in p.cover_pairs() {
            assert_eq!(p.element(hi).size(), p.element(lo).size() + 1);
        }
    }

    #[test]
    fn pair_poset_cap() {
        let caps = Caps {
            max_elements: 10,
            ..Caps::default()
        };
        assert!(build_pair_poset(6, 2, &sv(&[2, 1]), &caps).unwrap_err().is_resource());
    }

    #[test]
    fn hom_poset_of_single_edge() {
        let g = build_graph(4, 2, &sv(&[2, 1])).unwrap();
        // Vertices {1,3}, {1,4}, {2,4}; only 0 and 2 are adjacent.
        let p = build_hom_poset(&g, &Caps::default()).unwrap();
        let elems: Vec<(Vec<usize>, Vec<usize>)> = p
            .elements()
            .iter()
            .map(|e| (e.a_vertices(), e.b_vertices()))
            .collect();
        assert_eq!(elems, vec![(vec![0], vec![2]), (vec![2], vec![0])]);
    }

    #[test]
    fn hom_poset_of_edgeless_graph() {
        let g = build_graph(4, 2, &sv(&[3, 1])).unwrap();
        assert_eq!(g.num_edges(), 0);
        assert!(build_hom_poset(&g, &Caps::default()).unwrap().is_empty());
    }

    #[test]
    fn hom_poset_of_five_cycle() {
        let g = build_graph(5, 2, &sv(&[2, 2])).unwrap();
        let p = build_hom_poset(&g, &Caps::default()).unwrap();
        for e in p.elements() {
            let (x, y) = (e.a.count_ones(), e.b.count_ones());
            assert!((x, y) == (1, 1) || (x, y) == (1, 2) || (x, y) == (2, 1));
            for &u in &e.a_vertices() {
                for &v in &e.b_vertices() {
                    assert!(g.is_adjacent(u, v));
                }
            }
        }
        // 10 directed edges, 5 vertices times two orientations of their neighborhood.
        assert_eq!(p.len(), 20);
    }
}
