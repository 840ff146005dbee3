use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};

/// A simplex as its strictly increasing list of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Sorts and deduplicates.
    pub fn new(mut vertices: Vec<u32>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex(vertices)
    }

    pub(crate) fn from_sorted(vertices: Vec<u32>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `len - 1`; the empty simplex has dimension -1.
    pub fn dim(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    /// The codimension-1 face obtained by dropping the vertex at `position`.
    pub fn face_without(&self, position: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(position);
        Simplex(v)
    }

    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).map(move |i| self.face_without(i))
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn map_vertices(&self, f: impl Fn(u32) -> u32) -> Simplex {
        Simplex::new(self.0.iter().map(|&v| f(v)).collect())
    }
}

impl std::borrow::Borrow<[u32]> for Simplex {
    fn borrow(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Finite abstract simplicial complex.
///
/// Stores every nonempty simplex, grouped by dimension and sorted
/// lexicographically inside each group, plus a hash index for O(1)
/// membership and the list of facets (maximal simplices).
#[derive(Clone, Debug, Default)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, (usize, usize)>,
    facets: Vec<Simplex>,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    vertices: Vec<u32>,
    facets: Vec<Simplex>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Downward closure of the given generating simplices.
    pub fn from_facets<I>(generators: I, caps: &Caps) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut all: HashSet<Simplex> = HashSet::new();
        for g in generators {
            if g.is_empty() || all.contains(&g) {
                continue;
            }
            let verts = g.vertices().to_vec();
            if verts.len() > 30 {
                return Err(Error::Resource {
                    what: "simplex dimension",
                    count: verts.len(),
                    cap: 30,
                });
            }
            for subset in 1u64..(1u64 << verts.len()) {
                let face: Vec<u32> = (0..verts.len())
                    .filter(|i| subset >> i & 1 == 1)
                    .map(|i| verts[i])
                    .collect();
                all.insert(Simplex::from_sorted(face));
            }
            caps.check_simplices(all.len())?;
        }
        Ok(Self::assemble(all))
    }

    /// Takes an explicit simplex set, which must already be downward closed.
    pub fn from_simplices<I>(simplices: I, caps: &Caps) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let all: HashSet<Simplex> = simplices.into_iter().filter(|s| !s.is_empty()).collect();
        caps.check_simplices(all.len())?;
        if let Some((simplex, face)) = first_missing_face(&all) {
            return Err(Error::NotClosed {
                simplex: simplex.0,
                face: face.0,
            });
        }
        Ok(Self::assemble(all))
    }

    pub(crate) fn assemble(all: HashSet<Simplex>) -> Self {
        let top = all.iter().map(Simplex::len).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        for group in &mut by_dim {
            group.sort_unstable();
        }
        let mut index = HashMap::new();
        for (d, group) in by_dim.iter().enumerate() {
            for (i, s) in group.iter().enumerate() {
                index.insert(s.clone(), (d, i));
            }
        }
        let mut covered: HashSet<&Simplex> = HashSet::new();
        for group in by_dim.iter().skip(1) {
            for s in group {
                for i in 0..s.len() {
                    if let Some((key, _)) = index.get_key_value(&s.face_without(i)) {
                        covered.insert(key);
                    }
                }
            }
        }
        let mut facets: Vec<Simplex> = by_dim
            .iter()
            .flatten()
            .filter(|s| !covered.contains(s))
            .cloned()
            .collect();
        facets.sort_unstable();
        SimplicialComplex {
            by_dim,
            index,
            facets,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// Dimension of the top simplices; -1 for the empty complex.
    pub fn dim(&self) -> i64 {
        self.by_dim.len() as i64 - 1
    }

    pub fn num_simplices(&self) -> usize {
        self.index.len()
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index.contains_key(s)
    }

    /// Position of `s` within its dimension group.
    pub fn position(&self, s: &[u32]) -> Option<(usize, usize)> {
        self.index.get(s).copied()
    }

    /// Simplices of dimension `d`, sorted lexicographically; empty for other `d`.
    pub fn simplices(&self, d: i64) -> &[Simplex] {
        if d < 0 {
            return &[];
        }
        self.by_dim.get(d as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.simplices(0).iter().map(|s| s.0[0]).collect()
    }

    /// Number of simplices per dimension, starting at dimension 0.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    /// Unreduced Euler characteristic from the face counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    /// Relabels vertices; `f` must be injective on the vertex set.
    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> Self {
        Self::assemble(self.iter().map(|s| s.map_vertices(&f)).collect())
    }

    /// Subcomplex of simplices satisfying `keep`, which must be closed under taking faces.
    pub fn filter(&self, keep: impl Fn(&Simplex) -> bool) -> Self {
        Self::assemble(self.iter().filter(|s| keep(s)).cloned().collect())
    }

    pub fn simplex_set(&self) -> HashSet<Simplex> {
        self.iter().cloned().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ComplexJson {
            vertices: self.vertices(),
            facets: self.facets.clone(),
        })
        .expect("complex serializes")
    }
}

/// True iff both complexes hold exactly the same simplices.
pub fn complex_equality(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    a.by_dim == b.by_dim
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        complex_equality(self, other)
    }
}

impl Eq for SimplicialComplex {}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson {
            vertices: self.vertices(),
            facets: self.facets.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ComplexJson::deserialize(deserializer)?;
        let generators = raw
            .facets
            .into_iter()
            .map(|f| Simplex::new(f.0))
            .chain(raw.vertices.into_iter().map(|v| Simplex::new(vec![v])));
        SimplicialComplex::from_facets(generators, &Caps::default()).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn first_missing_face(all: &HashSet<Simplex>) -> Option<(Simplex, Simplex)> {
    let mut sorted: Vec<&Simplex> = all.iter().collect();
    sorted.sort_unstable();
    for s in sorted {
        if s.len() < 2 {
            continue;
        }
        for face in s.facets() {
            if !all.contains(&face) {
                return Some((s.clone(), face));
            }
        }
    }
    None
}
