use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::complexes::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// A set of pairs `σ ↦ μ(σ)` on the face poset of a complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PartialMatching {
    pairs: Vec<(Simplex, Simplex)>,
}

impl PartialMatching {
    pub fn new(pairs: Vec<(Simplex, Simplex)>) -> Self {
        PartialMatching { pairs }
    }

    pub fn pairs(&self) -> &[(Simplex, Simplex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Simplex> {
        self.pairs.iter().map(|p| &p.0)
    }

    pub fn images(&self) -> impl Iterator<Item = &Simplex> {
        self.pairs.iter().map(|p| &p.1)
    }

    /// Every simplex touched by the matching.
    pub fn matched_cells(&self) -> HashSet<&Simplex> {
        self.domain().chain(self.images()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingValidity {
    pub injective: bool,
    /// `Σ ∩ μ(Σ) = ∅` and no simplex is matched twice from below.
    pub disjoint: bool,
    /// `μ(σ)` covers `σ` for every pair.
    pub covers: bool,
    /// Both ends of every pair are simplices of the complex.
    pub within_complex: bool,
    pub valid: bool,
    /// First offending pair, if any.
    pub witness: Option<(Simplex, Simplex)>,
}

pub fn check_matching(c: &SimplicialComplex, m: &PartialMatching) -> MatchingValidity {
    let mut witness = None;
    let mut note = |ok: bool, pair: &(Simplex, Simplex)| {
        if !ok && witness.is_none() {
            witness = Some(pair.clone());
        }
        ok
    };
    let mut covers = true;
    let mut within_complex = true;
    for pair in m.pairs() {
        let (s, t) = pair;
        covers &= note(t.len() == s.len() + 1 && s.is_face_of(t), pair);
        within_complex &= note(c.contains(s.vertices()) && c.contains(t.vertices()), pair);
    }
    let mut seen_images: HashSet<&Simplex> = HashSet::new();
    let mut injective = true;
    for pair in m.pairs() {
        injective &= note(seen_images.insert(&pair.1), pair);
    }
    let mut seen_domain: HashSet<&Simplex> = HashSet::new();
    let mut disjoint = true;
    for pair in m.pairs() {
        disjoint &= note(seen_domain.insert(&pair.0), pair);
    }
    for pair in m.pairs() {
        disjoint &= note(!seen_images.contains(&pair.0), pair);
    }
    MatchingValidity {
        injective,
        disjoint,
        covers,
        within_complex,
        valid: injective && disjoint && covers && within_complex,
        witness,
    }
}

/// No closed gradient path: on the matched lower cells, `σ → σ'` whenever
/// `σ' ≠ σ` is a facet of `μ(σ)`; the matching is acyclic iff this digraph is.
pub fn check_acyclic(m: &PartialMatching) -> bool {
    find_cycle(m).is_none()
}

/// A matched cell that no topological order reaches, present iff there is a gradient cycle.
pub fn find_cycle(m: &PartialMatching) -> Option<Simplex> {
    let index: HashMap<&Simplex, usize> = m.domain().enumerate().map(|(i, s)| (s, i)).collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); m.len()];
    let mut indegree = vec![0usize; m.len()];
    for (i, (s, t)) in m.pairs().iter().enumerate() {
        for facet in t.facets() {
            if &facet == s {
                continue;
            }
            if let Some(&j) = index.get(&facet) {
                out[i].push(j);
                indegree[j] += 1;
            }
        }
    }
    let mut queue: VecDeque<usize> = (0..m.len()).filter(|&i| indegree[i] == 0).collect();
    let mut done = 0;
    while let Some(i) = queue.pop_front() {
        done += 1;
        for &j in &out[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                queue.push_back(j);
            }
        }
    }
    if done == m.len() {
        return None;
    }
    (0..m.len())
        .find(|&i| indegree[i] > 0)
        .map(|i| m.pairs()[i].0.clone())
}

/// Cells of `c` not touched by the matching.
pub fn critical_cells(c: &SimplicialComplex, m: &PartialMatching) -> Vec<Simplex> {
    let matched = m.matched_cells();
    c.iter().filter(|s| !matched.contains(s)).cloned().collect()
}

/// The critical cells as a complex, or [`Error::NotClosed`] naming a missing face.
pub fn critical_subcomplex(c: &SimplicialComplex, m: &PartialMatching) -> Result<SimplicialComplex> {
    let cells: HashSet<Simplex> = critical_cells(c, m).into_iter().collect();
    if let Some((simplex, face)) = crate::complexes::first_missing_face(&cells) {
        return Err(Error::NotClosed {
            simplex: simplex.vertices().to_vec(),
            face: face.vertices().to_vec(),
        });
    }
    Ok(SimplicialComplex::assemble(cells))
}

/// Critical cell counts per dimension, from dimension 0.
pub fn critical_counts(c: &SimplicialComplex, m: &PartialMatching) -> Vec<usize> {
    let mut counts = vec![0usize; c.f_vector().len()];
    for s in critical_cells(c, m) {
        counts[s.len() - 1] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;

    fn sx(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec())
    }

    fn complex(facets: &[&[u32]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|f| sx(f)), &Caps::default()).unwrap()
    }

    #[test]
    fn empty_matching() {
        let c = complex(&[&[0, 1], &[1, 2]]);
        let m = PartialMatching::default();
        assert!(check_matching(&c, &m).valid);
        assert!(check_acyclic(&m));
        assert_eq!(critical_subcomplex(&c, &m).unwrap(), c);
    }

    #[test]
    fn cover_violation() {
        let c = complex(&[&[0, 1], &[1, 2]]);
        let m = PartialMatching::new(vec![(sx(&[0]), sx(&[1, 2]))]);
        let v = check_matching(&c, &m);
        assert!(!v.covers && !v.valid);
        assert_eq!(v.witness, Some((sx(&[0]), sx(&[1, 2]))));
    }

    #[test]
    fn double_use_is_invalid() {
        let c = complex(&[&[0, 1], &[1, 2]]);
        let m = PartialMatching::new(vec![(sx(&[1]), sx(&[0, 1])), (sx(&[0]), sx(&[0, 1]))]);
        assert!(!check_matching(&c, &m).injective);
        let m = PartialMatching::new(vec![(sx(&[1]), sx(&[0, 1])), (sx(&[0, 1]), sx(&[0, 1, 2]))]);
        assert!(!check_matching(&c, &m).disjoint);
    }

    #[test]
    fn collapse_of_a_path() {
        let c = complex(&[&[0, 1], &[1, 2]]);
        let m = PartialMatching::new(vec![(sx(&[1]), sx(&[0, 1])), (sx(&[2]), sx(&[1, 2]))]);
        assert!(check_matching(&c, &m).valid);
        assert!(check_acyclic(&m));
        let crit = critical_subcomplex(&c, &m).unwrap();
        assert_eq!(crit.f_vector(), vec![1]);
        assert_eq!(critical_counts(&c, &m), vec![1, 0]);
    }

    #[test]
    fn gradient_cycle_around_a_triangle() {
        let c = complex(&[&[0, 1], &[1, 2], &[0, 2]]);
        let m = PartialMatching::new(vec![
            (sx(&[0]), sx(&[0, 1])),
            (sx(&[1]), sx(&[1, 2])),
            (sx(&[2]), sx(&[0, 2])),
        ]);
        assert!(check_matching(&c, &m).valid);
        assert!(!check_acyclic(&m));
        assert!(find_cycle(&m).is_some());
    }

    #[test]
    fn critical_cells_not_closed() {
        let c = complex(&[&[0, 1]]);
        let m = PartialMatching::new(vec![(sx(&[0]), sx(&[0, 1]))]);
        assert!(matches!(critical_subcomplex(&c, &m), Ok(_)));
        let m = PartialMatching::new(vec![(sx(&[0]), sx(&[0, 1]))]);
        let c2 = complex(&[&[0, 1], &[0, 2]]);
        let err = critical_subcomplex(&c2, &m).unwrap_err();
        assert!(matches!(err, Error::NotClosed { .. }));
    }
}
