use serde::Serialize;

use super::{delta_homology, pointwise_leq, verify_order_preserving, PosetMap};
use crate::caps::Caps;
use crate::complexes::{
    adjacency_masks, build_hom_poset, build_pair_poset, neighborhood_complex, HomPosetElement,
    PairElement,
};
use crate::error::Result;
use crate::homology::{reduced_homology, HomologyReport};
use crate::kneser::{build_graph, GraphParams};
use crate::stable_sets::StabilityVector;

#[derive(Clone, Debug, Serialize)]
pub struct Lemma5Homology {
    pub ncomplex: HomologyReport,
    pub hom_poset: HomologyReport,
    pub pair_poset: HomologyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma5Report {
    pub check: &'static str,
    pub params: GraphParams,
    pub hom_poset_size: usize,
    /// Size after stripping beat points; its order complex carries the homology.
    pub hom_core_size: usize,
    pub pair_poset_size: usize,
    pub phi_well_defined: bool,
    pub psi_well_defined: bool,
    pub phi_order_preserving: bool,
    pub psi_order_preserving: bool,
    /// `Id ⪯ ψ∘φ` on the Hom-poset.
    pub id_below_psi_phi: bool,
    /// `φ∘ψ ⪯ Id` on the pair poset.
    pub phi_psi_below_id: bool,
    pub homology: Lemma5Homology,
    pub homology_agrees: bool,
    pub ok: bool,
}

/// Compares `Hom_p(K_2, G)` with `P(n, k, s)` through the union map `φ` and
/// the stable-subsets map `ψ`.
pub fn lemma5_verify(n: u32, k: usize, s: &StabilityVector, caps: &Caps) -> Result<Lemma5Report> {
    let g = build_graph(n, k, s)?;
    adjacency_masks(&g)?;
    let hom = build_hom_poset(&g, caps)?;
    let pairs = build_pair_poset(n, k, s, caps)?;
    let vmask: Vec<u64> = g.vertices().iter().map(|v| v.mask()).collect();

    let phi = |e: &HomPosetElement| {
        let union = |m: u64| {
            (0..vmask.len())
                .filter(|&v| m >> v & 1 == 1)
                .fold(0u64, |acc, v| acc | vmask[v])
        };
        PairElement::new(union(e.a), union(e.b))
    };
    let psi = |e: &PairElement| {
        let inside = |m: u64| {
            (0..vmask.len())
                .filter(|&v| vmask[v] & !m == 0)
                .fold(0u64, |acc, v| acc | 1u64 << v)
        };
        HomPosetElement {
            a: inside(e.a),
            b: inside(e.b),
        }
    };

    let phi_map = PosetMap::from_fn(&hom, &pairs, phi).ok();
    let psi_map = PosetMap::from_fn(&pairs, &hom, psi).ok();
    let phi_order_preserving = phi_map.as_ref().map_or(false, verify_order_preserving);
    let psi_order_preserving = psi_map.as_ref().map_or(false, verify_order_preserving);

    let (id_below_psi_phi, phi_psi_below_id) = match (&phi_map, &psi_map) {
        (Some(f), Some(g)) => {
            let psi_phi: Vec<u32> = f.images().iter().map(|&y| g.image_of(y)).collect();
            let phi_psi: Vec<u32> = g.images().iter().map(|&x| f.image_of(x)).collect();
            let hom_id = PosetMap::new(&hom, &hom, (0..hom.len() as u32).collect())?;
            let pair_id = PosetMap::new(&pairs, &pairs, (0..pairs.len() as u32).collect())?;
            (
                pointwise_leq(&hom_id, &PosetMap::new(&hom, &hom, psi_phi)?),
                pointwise_leq(&PosetMap::new(&pairs, &pairs, phi_psi)?, &pair_id),
            )
        }
        _ => (false, false),
    };

    let (hom_core, _) = hom.beat_point_core();
    let homology = Lemma5Homology {
        ncomplex: reduced_homology(&neighborhood_complex(&g, caps)?, caps)?,
        hom_poset: delta_homology(&hom_core, caps)?,
        pair_poset: delta_homology(&pairs, caps)?,
    };
    let homology_agrees = homology.ncomplex.same_homology(&homology.hom_poset)
        && homology.hom_poset.same_homology(&homology.pair_poset);
    let phi_well_defined = phi_map.is_some();
    let psi_well_defined = psi_map.is_some();
    let ok = phi_well_defined
        && psi_well_defined
        && phi_order_preserving
        && psi_order_preserving
        && id_below_psi_phi
        && phi_psi_below_id
        && homology_agrees;
    Ok(Lemma5Report {
        check: "lemma5",
        params: g.params().clone(),
        hom_poset_size: hom.len(),
        hom_core_size: hom_core.len(),
        pair_poset_size: pairs.len(),
        phi_well_defined,
        psi_well_defined,
        phi_order_preserving,
        psi_order_preserving,
        id_below_psi_phi,
        phi_psi_below_id,
        homology,
        homology_agrees,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::is_homology_sphere;

    #[test]
    fn small_instances() {
        for (n, s, d) in [(4, vec![2, 1], 0), (5, vec![2, 2], 1), (5, vec![2, 1], 1)] {
            let sv = StabilityVector::new(s).unwrap();
            let r = lemma5_verify(n, 2, &sv, &Caps::default()).unwrap();
            assert!(r.ok, "{r:?}");
            assert!(is_homology_sphere(&r.homology.pair_poset, d));
        }
    }
}
