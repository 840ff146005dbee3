//! Integer simplicial homology via Smith normal form.

mod matrix;
mod snf;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

pub use matrix::{rank_mod_p, SparseMatrix};
pub use snf::{dense_invariants, smith_normal_form};

use crate::caps::Caps;
use crate::complexes::SimplicialComplex;
use crate::error::{Error, Result};

/// Augmented chain complex of a simplicial complex.
///
/// `boundary(0)` is the augmentation `C_0 -> Z`; `boundary(d)` for `d >= 1`
/// maps `C_d -> C_{d-1}` with rows and columns in lexicographic simplex order.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    f_vector: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn top_dim(&self) -> i64 {
        self.f_vector.len() as i64 - 1
    }

    /// Rank of `C_d`, including `C_{-1} = Z`.
    pub fn rank(&self, d: i64) -> usize {
        match d {
            -1 => 1,
            d if d >= 0 => self.f_vector.get(d as usize).copied().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn boundary(&self, d: i64) -> Option<&SparseMatrix> {
        if d < 0 {
            return None;
        }
        self.boundaries.get(d as usize)
    }

    /// Whether every composite `∂_{d-1} ∂_d` vanishes.
    pub fn squares_to_zero(&self) -> bool {
        self.boundaries
            .windows(2)
            .all(|w| w[0].mul(&w[1]).map_or(false, |p| p.is_zero()))
    }
}

pub fn boundary_matrices(c: &SimplicialComplex, caps: &Caps) -> Result<ChainComplex> {
    caps.check_simplices(c.num_simplices())?;
    let f_vector = c.f_vector();
    let mut boundaries = Vec::with_capacity(f_vector.len());
    if let Some(&f0) = f_vector.first() {
        let mut aug = SparseMatrix::zeros(1, f0);
        for j in 0..f0 {
            aug.push(0, j, 1);
        }
        boundaries.push(aug);
    }
    for d in 1..f_vector.len() as i64 {
        let faces = c.simplices(d - 1).len();
        let mut m = SparseMatrix::zeros(faces, f_vector[d as usize]);
        for (j, s) in c.simplices(d).iter().enumerate() {
            for i in 0..s.len() {
                let face = s.face_without(i);
                let (_, row) = c
                    .position(face.vertices())
                    .ok_or_else(|| Error::Invariant(format!("face {face:?} missing")))?;
                m.push(row as u32, j, if i % 2 == 0 { 1 } else { -1 });
            }
        }
        m.normalize();
        boundaries.push(m);
    }
    let cc = ChainComplex {
        f_vector,
        boundaries,
    };
    if !cc.squares_to_zero() {
        return Err(Error::Invariant("boundary does not square to zero".into()));
    }
    Ok(cc)
}

/// Reduced Betti numbers and torsion per dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    /// Dimensions `0..=dim`, or just `-1` for the empty complex.
    pub reduced_betti: BTreeMap<i64, u64>,
    /// Invariant factors greater than one; only dimensions that have any.
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: BTreeMap<i64, Vec<BigInt>>,
    /// Unreduced Euler characteristic.
    pub euler: i64,
    pub f_vector: Vec<usize>,
    pub sphere_dim: Option<i64>,
}

fn serialize_torsion<S: Serializer>(
    t: &BTreeMap<i64, Vec<BigInt>>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    struct Factors<'a>(&'a [BigInt]);
    impl Serialize for Factors<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(self.0.len()))?;
            for f in self.0 {
                match f.to_u64() {
                    Some(v) => seq.serialize_element(&v)?,
                    None => seq.serialize_element(&f.to_string())?,
                }
            }
            seq.end()
        }
    }
    let view: BTreeMap<i64, Factors> = t.iter().map(|(&d, v)| (d, Factors(v))).collect();
    view.serialize(serializer)
}

impl HomologyReport {
    pub fn betti(&self, d: i64) -> u64 {
        self.reduced_betti.get(&d).copied().unwrap_or(0)
    }

    pub fn torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Trivial reduced homology.
    pub fn is_acyclic(&self) -> bool {
        self.torsion_free() && self.reduced_betti.values().all(|&b| b == 0)
    }

    /// `Σ (-1)^d β̃_d`, which equals `euler - 1`.
    pub fn reduced_euler(&self) -> i64 {
        self.reduced_betti
            .iter()
            .map(|(&d, &b)| if d.rem_euclid(2) == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Unreduced Betti numbers from dimension 0.
    pub fn unreduced_betti(&self) -> BTreeMap<i64, u64> {
        let mut out: BTreeMap<i64, u64> = self
            .reduced_betti
            .iter()
            .filter(|(&d, _)| d >= 0)
            .map(|(&d, &b)| (d, b))
            .collect();
        if !self.f_vector.is_empty() {
            *out.entry(0).or_insert(0) += 1;
        }
        out
    }

    /// Nonzero Betti numbers only; handy for comparing reports of
    /// complexes with different dimensions.
    pub fn nonzero_betti(&self) -> BTreeMap<i64, u64> {
        self.reduced_betti
            .iter()
            .filter(|(_, &b)| b != 0)
            .map(|(&d, &b)| (d, b))
            .collect()
    }

    /// Same reduced homology groups, ignoring the ambient dimension.
    pub fn same_homology(&self, other: &HomologyReport) -> bool {
        self.nonzero_betti() == other.nonzero_betti() && self.torsion == other.torsion
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

pub fn reduced_homology(c: &SimplicialComplex, caps: &Caps) -> Result<HomologyReport> {
    let cc = boundary_matrices(c, caps)?;
    homology_of_chain_complex(&cc)
}

pub fn homology_of_chain_complex(cc: &ChainComplex) -> Result<HomologyReport> {
    let top = cc.top_dim();
    // ranks[d] = rank ∂_d for d = 0..=top+1.
    let mut ranks = vec![0usize; (top + 2) as usize];
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); (top + 2) as usize];
    for d in 0..=top {
        let f = smith_normal_form(cc.boundary(d).expect("boundary exists"));
        ranks[d as usize] = f.len();
        factors[d as usize] = f;
    }
    let mut reduced_betti = BTreeMap::new();
    let mut torsion = BTreeMap::new();
    let start = if top < 0 { -1 } else { 0 };
    for d in start..=top.max(-1) {
        let incoming = if d >= 0 { ranks[d as usize] } else { 0 };
        let outgoing = ranks[(d + 1) as usize];
        let b = cc.rank(d) as i64 - incoming as i64 - outgoing as i64;
        if b < 0 {
            return Err(Error::Invariant(format!("negative Betti number in dimension {d}")));
        }
        reduced_betti.insert(d, b as u64);
        let t: Vec<BigInt> = factors[(d + 1) as usize]
            .iter()
            .filter(|f| !f.is_one())
            .cloned()
            .collect();
        if !t.is_empty() {
            torsion.insert(d, t);
        }
    }
    let euler = cc
        .f_vector
        .iter()
        .enumerate()
        .map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) })
        .sum();
    let mut report = HomologyReport {
        reduced_betti,
        torsion,
        euler,
        f_vector: cc.f_vector.clone(),
        sphere_dim: None,
    };
    if report.reduced_euler() != report.euler - 1 {
        return Err(Error::Invariant("Euler characteristic mismatch".into()));
    }
    report.sphere_dim = report
        .nonzero_betti()
        .keys()
        .next()
        .copied()
        .filter(|&d| is_homology_sphere(&report, d));
    Ok(report)
}

/// Rank one in dimension `d`, zero elsewhere, no torsion.
pub fn is_homology_sphere(r: &HomologyReport, d: i64) -> bool {
    r.torsion_free() && r.nonzero_betti() == BTreeMap::from([(d, 1)])
}

/// Reduced Betti numbers over `F_p`, for cross-checking the integer computation.
pub fn betti_mod_p(cc: &ChainComplex, p: u32) -> BTreeMap<i64, u64> {
    let top = cc.top_dim();
    let ranks: Vec<usize> = (0..=top + 1)
        .map(|d| cc.boundary(d).map_or(0, |m| rank_mod_p(m, p)))
        .collect();
    let start = if top < 0 { -1 } else { 0 };
    (start..=top.max(-1))
        .map(|d| {
            let incoming = if d >= 0 { ranks[d as usize] } else { 0 };
            let b = cc.rank(d) - incoming - ranks[(d + 1) as usize];
            (d, b as u64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::Simplex;

    fn complex(facets: &[&[u32]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(
            facets.iter().map(|f| Simplex::new(f.to_vec())),
            &Caps::default(),
        )
        .unwrap()
    }

    fn homology(c: &SimplicialComplex) -> HomologyReport {
        reduced_homology(c, &Caps::default()).unwrap()
    }

    #[test]
    fn edge_boundary_orientation() {
        let cc = boundary_matrices(&complex(&[&[3, 8]]), &Caps::default()).unwrap();
        assert_eq!(cc.boundary(1).unwrap().to_dense(), vec![vec![-1], vec![1]]);
    }

    #[test]
    fn hollow_triangle() {
        let c = complex(&[&[0, 1], &[1, 2], &[0, 2]]);
        let cc = boundary_matrices(&c, &Caps::default()).unwrap();
        let d1 = cc.boundary(1).unwrap();
        assert_eq!((d1.rows(), d1.cols()), (3, 3));
        assert!(d1.columns().iter().all(|col| col.len() == 2 && col.iter().all(|e| e.1.abs() == 1)));
        assert_eq!(smith_normal_form(d1), vec![BigInt::one(), BigInt::one()]);
        let r = homology(&c);
        assert!(is_homology_sphere(&r, 1));
        assert!(!is_homology_sphere(&r, 2));
        assert_eq!(r.sphere_dim, Some(1));
    }

    #[test]
    fn empty_complex_is_minus_one_sphere() {
        let c = SimplicialComplex::empty();
        let cc = boundary_matrices(&c, &Caps::default()).unwrap();
        assert!(cc.boundary(0).is_none());
        let r = homology(&c);
        assert_eq!(r.reduced_betti, BTreeMap::from([(-1, 1)]));
        assert!(is_homology_sphere(&r, -1));
        assert!(r.unreduced_betti().is_empty());
    }

    #[test]
    fn two_points() {
        let r = homology(&complex(&[&[0], &[1]]));
        assert_eq!(r.reduced_betti, BTreeMap::from([(0, 1)]));
        assert!(is_homology_sphere(&r, 0));
        assert_eq!(r.unreduced_betti(), BTreeMap::from([(0, 2)]));
    }

    #[test]
    fn simplex_is_acyclic() {
        let r = homology(&complex(&[&[0, 1, 2, 3]]));
        assert!(r.is_acyclic());
        assert_eq!(r.sphere_dim, None);
        assert_eq!(r.euler, 1);
    }

    /// Six-vertex triangulation of the real projective plane.
    fn rp2() -> SimplicialComplex {
        complex(&[
            &[0, 1, 2], &[0, 2, 3], &[0, 3, 4], &[0, 4, 5], &[0, 1, 5],
            &[1, 2, 4], &[2, 3, 5], &[1, 3, 4], &[1, 3, 5], &[2, 4, 5],
        ])
    }

    #[test]
    fn projective_plane_has_torsion() {
        let r = homology(&rp2());
        assert!(r.nonzero_betti().is_empty());
        assert_eq!(r.torsion, BTreeMap::from([(1, vec![BigInt::from(2)])]));
        assert_eq!(r.euler, 1);
        let cc = boundary_matrices(&rp2(), &Caps::default()).unwrap();
        assert_eq!(betti_mod_p(&cc, 2), BTreeMap::from([(0, 0), (1, 1), (2, 1)]));
        assert_eq!(betti_mod_p(&cc, 3), BTreeMap::from([(0, 0), (1, 0), (2, 0)]));
    }

    #[test]
    fn report_json_shape() {
        let v = homology(&rp2()).to_json();
        assert_eq!(v["reduced_betti"]["1"], 0);
        assert_eq!(v["torsion"]["1"], serde_json::json!([2]));
        assert_eq!(v["euler"], 1);
        assert!(v["sphere_dim"].is_null());
    }

    #[test]
    fn cap_is_enforced() {
        let caps = Caps {
            max_simplices: 3,
            ..Caps::default()
        };
        assert!(reduced_homology(&complex(&[&[0, 1, 2]]), &caps).unwrap_err().is_resource());
    }
}
