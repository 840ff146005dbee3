//! Simplicial complexes, posets, and the complexes attached to a stable Kneser graph.

mod pairs;
mod poset;
mod simplicial;

pub use pairs::{build_hom_poset, build_pair_poset, HomPosetElement, PairElement};
pub(crate) use pairs::adjacency_masks;
pub(crate) use simplicial::first_missing_face;
pub use poset::{order_complex, Poset};
pub use simplicial::{complex_equality, Simplex, SimplicialComplex};

use crate::caps::Caps;
use crate::error::Result;
use crate::kneser::StableKneserGraph;

/// `N(G)`: generated by the neighborhoods `N(v)`; vertex ids are graph vertex indices.
pub fn neighborhood_complex(g: &StableKneserGraph, caps: &Caps) -> Result<SimplicialComplex> {
    let generators = (0..g.num_vertices())
        .map(|v| g.neighbors(v))
        .filter(|nbrs| !nbrs.is_empty())
        .map(|nbrs| Simplex::new(nbrs.iter().map(|&u| u as u32).collect()));
    SimplicialComplex::from_facets(generators, caps)
}
