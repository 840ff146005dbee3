//! Order-preserving maps, monotone operators, and the checks built on them.

mod lemma5;
mod suspension;

use std::collections::HashSet;
use std::hash::Hash;

use serde::Serialize;

pub use lemma5::{lemma5_verify, Lemma5Report};
pub use suspension::{
    suspension_check, theorem7_base_case, theorem7_operator_chain, theorem7_operator_chain_all,
    BaseCaseReport, ChainLevelReport, SuspensionReport,
};

use crate::caps::Caps;
use crate::complexes::{order_complex, Poset};
use crate::error::{Error, Result};
use crate::homology::{reduced_homology, HomologyReport};

/// A total map between two posets, stored as element ids.
#[derive(Debug)]
pub struct PosetMap<'a, S, T> {
    domain: &'a Poset<S>,
    codomain: &'a Poset<T>,
    images: Vec<u32>,
}

impl<'a, S: Clone + Eq + Hash, T: Clone + Eq + Hash> PosetMap<'a, S, T> {
    pub fn new(domain: &'a Poset<S>, codomain: &'a Poset<T>, images: Vec<u32>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::param(format!(
                "map defined on {} of {} elements",
                images.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&j| j as usize >= codomain.len()) {
            return Err(Error::param(format!("image id {bad} outside the codomain")));
        }
        Ok(PosetMap {
            domain,
            codomain,
            images,
        })
    }

    /// Builds the map from a function on elements; every image must be an
    /// element of the codomain.
    pub fn from_fn(domain: &'a Poset<S>, codomain: &'a Poset<T>, f: impl Fn(&S) -> T) -> Result<Self> {
        let images = domain
            .elements()
            .iter()
            .map(|x| codomain.id_of(&f(x)).ok_or_else(|| Error::param("image is not in the codomain")))
            .collect::<Result<Vec<u32>>>()?;
        Self::new(domain, codomain, images)
    }

    pub fn domain(&self) -> &Poset<S> {
        self.domain
    }

    pub fn codomain(&self) -> &Poset<T> {
        self.codomain
    }

    pub fn image_of(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }
}

/// `x ⪯ y` implies `m(x) ⪯ m(y)`; checking cover pairs suffices.
pub fn verify_order_preserving<S, T>(m: &PosetMap<'_, S, T>) -> bool
where
    S: Clone + Eq + Hash,
    T: Clone + Eq + Hash,
{
    m.domain
        .cover_pairs()
        .into_iter()
        .all(|(x, y)| m.codomain.leq(m.image_of(x), m.image_of(y)))
}

/// `f(x) ⪯ g(x)` for every `x`.
pub fn pointwise_leq<S, T>(f: &PosetMap<'_, S, T>, g: &PosetMap<'_, S, T>) -> bool
where
    S: Clone + Eq + Hash,
    T: Clone + Eq + Hash,
{
    (0..f.domain.len() as u32).all(|x| f.codomain.leq(f.image_of(x), g.image_of(x)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
    /// Fixes every element, so both increasing and decreasing.
    Identity,
    Neither,
}

impl Direction {
    /// Whether an operator with this observed direction has the `stated` one.
    pub fn satisfies(self, stated: Direction) -> bool {
        self == stated || self == Direction::Identity
    }
}

/// Observed direction of a self-map.
pub fn direction_of<T: Clone + Eq + Hash>(p: &Poset<T>, images: &[u32]) -> Direction {
    let up = (0..p.len() as u32).all(|x| p.leq(x, images[x as usize]));
    let down = (0..p.len() as u32).all(|x| p.leq(images[x as usize], x));
    match (up, down) {
        (true, true) => Direction::Identity,
        (true, false) => Direction::Increasing,
        (false, true) => Direction::Decreasing,
        (false, false) => Direction::Neither,
    }
}

/// Verdict on a self-map `ψ: Q → Q` of a subposet `Q`.
#[derive(Clone, Debug, Serialize)]
pub struct OperatorReport {
    pub name: String,
    pub well_defined: bool,
    pub order_preserving: bool,
    pub direction: Direction,
    pub stated_direction: Direction,
    pub domain_size: usize,
    pub image_size: usize,
    pub image_matches_predicate: bool,
    /// `Δ(Q)` and `Δ(Img ψ)` have equal reduced homology.
    pub homology_preserved: bool,
    pub ok: bool,
    #[serde(skip)]
    pub image: Vec<u32>,
}

/// Checks an operator on the subposet `domain` (ids into `p`), returning the
/// report and the image as sorted ids into `p`.
pub(crate) fn check_operator<T: Clone + Eq + Hash>(
    name: &str,
    p: &Poset<T>,
    domain: &[u32],
    f: impl Fn(&T) -> T,
    stated: Direction,
    predicted_image: &[u32],
    caps: &Caps,
) -> Result<OperatorReport> {
    let in_domain: HashSet<u32> = domain.iter().copied().collect();
    let sub = sub_poset(p, domain);
    let mut images = Vec::with_capacity(domain.len());
    let mut well_defined = true;
    for &x in domain {
        match p.id_of(&f(p.element(x))) {
            Some(y) if in_domain.contains(&y) => images.push(y),
            _ => {
                well_defined = false;
                break;
            }
        }
    }
    let mut image: Vec<u32> = images.clone();
    image.sort_unstable();
    image.dedup();
    let (order_preserving, direction, homology_preserved) = if well_defined {
        let local: Vec<u32> = images
            .iter()
            .map(|y| sub.id_of(p.element(*y)).expect("image in domain"))
            .collect();
        let map = PosetMap::new(&sub, &sub, local.clone())?;
        let img_poset = sub_poset(p, &image);
        let before = delta_homology(&sub, caps)?;
        let after = delta_homology(&img_poset, caps)?;
        (
            verify_order_preserving(&map),
            direction_of(&sub, &local),
            before.same_homology(&after),
        )
    } else {
        (false, Direction::Neither, false)
    };
    let image_matches_predicate = well_defined && image == predicted_image;
    let ok = well_defined
        && order_preserving
        && direction.satisfies(stated)
        && image_matches_predicate
        && homology_preserved;
    Ok(OperatorReport {
        name: name.to_string(),
        well_defined,
        order_preserving,
        direction,
        stated_direction: stated,
        domain_size: domain.len(),
        image_size: image.len(),
        image_matches_predicate,
        homology_preserved,
        ok,
        image,
    })
}

/// Induced subposet on the given ids.
pub(crate) fn sub_poset<T: Clone + Eq + Hash>(p: &Poset<T>, ids: &[u32]) -> Poset<T> {
    let keep: HashSet<&T> = ids.iter().map(|&i| p.element(i)).collect();
    p.induced(|x| keep.contains(x)).0
}

pub(crate) fn delta_homology<T>(p: &Poset<T>, caps: &Caps) -> Result<HomologyReport> {
    reduced_homology(&order_complex(p, caps)?, caps)
}

/// Whether `p` has a minimum or a maximum, making `Δ(p)` a cone.
pub fn cone_check<T: Clone + Eq + Hash>(p: &Poset<T>) -> bool {
    p.minimum().is_some() || p.maximum().is_some()
}
