use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use serde::Serialize;

use super::simplicial::{Simplex, SimplicialComplex};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// Finite poset on explicitly listed elements. Element ids are positions in
/// the element list.
#[derive(Clone, Debug)]
pub struct Poset<T> {
    elements: Vec<T>,
    // Strictly greater elements, sorted by id.
    above: Vec<Vec<u32>>,
    // Strictly smaller elements, sorted by id.
    below: Vec<Vec<u32>>,
    // Upper covers, sorted by id.
    covers: Vec<Vec<u32>>,
    index: HashMap<T, u32>,
}

impl<T: Clone + Eq + Hash> Poset<T> {
    /// Builds the poset from an order predicate, checking antisymmetry and
    /// transitivity. Reflexivity is assumed (only distinct pairs are queried).
    pub fn from_relation(elements: Vec<T>, leq: impl Fn(&T, &T) -> bool, caps: &Caps) -> Result<Self> {
        caps.check_elements(elements.len())?;
        let n = elements.len();
        let mut above = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && leq(&elements[i], &elements[j]) {
                    above[i].push(j as u32);
                }
            }
        }
        Self::from_upsets(elements, above)
    }

    /// Builds the poset from the strict up-sets `above[i] = {j : i < j}`.
    pub fn from_upsets(elements: Vec<T>, mut above: Vec<Vec<u32>>) -> Result<Self> {
        let n = elements.len();
        if above.len() != n {
            return Err(Error::InvalidPoset("one up-set per element required".into()));
        }
        for (i, up) in above.iter_mut().enumerate() {
            up.sort_unstable();
            up.dedup();
            if up.binary_search(&(i as u32)).is_ok() {
                return Err(Error::InvalidPoset(format!("element {i} is strictly above itself")));
            }
            if up.iter().any(|&j| j as usize >= n) {
                return Err(Error::InvalidPoset(format!("up-set of {i} references unknown ids")));
            }
        }
        let mut stamp = vec![usize::MAX; n];
        for i in 0..n {
            for &j in &above[i] {
                stamp[j as usize] = i;
            }
            for &j in &above[i] {
                let j = j as usize;
                if above[j].binary_search(&(i as u32)).is_ok() {
                    return Err(Error::InvalidPoset(format!("{i} and {j} are mutually above")));
                }
                if above[j].iter().any(|&m| stamp[m as usize] != i) {
                    return Err(Error::InvalidPoset(format!(
                        "not transitive through {i} < {j}"
                    )));
                }
            }
        }
        let mut index = HashMap::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i as u32).is_some() {
                return Err(Error::InvalidPoset(format!("element {i} is listed twice")));
            }
        }
        Ok(Self::finish(elements, above, index))
    }

    fn finish(elements: Vec<T>, above: Vec<Vec<u32>>, index: HashMap<T, u32>) -> Self {
        let n = elements.len();
        let mut below = vec![Vec::new(); n];
        for (i, up) in above.iter().enumerate() {
            for &j in up {
                below[j as usize].push(i as u32);
            }
        }
        // j covers i unless j sits above some other m > i.
        let mut stamp = vec![usize::MAX; n];
        let mut covers = Vec::with_capacity(n);
        for (i, up) in above.iter().enumerate() {
            for &m in up {
                for &j in &above[m as usize] {
                    stamp[j as usize] = i;
                }
            }
            covers.push(up.iter().copied().filter(|&j| stamp[j as usize] != i).collect());
        }
        Poset {
            elements,
            above,
            below,
            covers,
            index,
        }
    }

    /// The induced subposet on the elements satisfying `keep`, together with
    /// the parent id of every new element.
    pub fn induced(&self, keep: impl Fn(&T) -> bool) -> (Poset<T>, Vec<u32>) {
        let parent_ids: Vec<u32> = (0..self.len() as u32)
            .filter(|&i| keep(&self.elements[i as usize]))
            .collect();
        let mut new_id = vec![u32::MAX; self.len()];
        for (new, &old) in parent_ids.iter().enumerate() {
            new_id[old as usize] = new as u32;
        }
        let elements: Vec<T> = parent_ids
            .iter()
            .map(|&i| self.elements[i as usize].clone())
            .collect();
        let above = parent_ids
            .iter()
            .map(|&i| {
                let mut up: Vec<u32> = self.above[i as usize]
                    .iter()
                    .map(|&j| new_id[j as usize])
                    .filter(|&j| j != u32::MAX)
                    .collect();
                up.sort_unstable();
                up
            })
            .collect();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        (Self::finish(elements, above, index), parent_ids)
    }

    /// Removes beat points one at a time until none is left. An element is a
    /// beat point when the elements strictly above it have a least element, or
    /// those strictly below have a greatest one. Each removal is a strong
    /// deformation retraction of the order complex, so the core has the
    /// homotopy type of the original.
    pub fn beat_point_core(&self) -> (Poset<T>, Vec<u32>) {
        let n = self.len();
        let mut alive = vec![true; n];
        let mut up: Vec<usize> = self.above.iter().map(Vec::len).collect();
        let mut down: Vec<usize> = self.below.iter().map(Vec::len).collect();
        // With alive(above(m)) inside alive(above(x)) - {m}, equal counts mean
        // m is the least element above x.
        let is_beat = |x: usize, alive: &[bool], up: &[usize], down: &[usize]| {
            let beat_up = up[x] > 0
                && self.above[x]
                    .iter()
                    .any(|&m| alive[m as usize] && up[m as usize] + 1 == up[x]);
            let beat_down = down[x] > 0
                && self.below[x]
                    .iter()
                    .any(|&m| alive[m as usize] && down[m as usize] + 1 == down[x]);
            beat_up || beat_down
        };
        let mut changed = true;
        while changed {
            changed = false;
            for x in 0..n {
                if alive[x] && is_beat(x, &alive, &up, &down) {
                    alive[x] = false;
                    for &b in &self.below[x] {
                        up[b as usize] -= 1;
                    }
                    for &a in &self.above[x] {
                        down[a as usize] -= 1;
                    }
                    changed = true;
                }
            }
        }
        let keep: HashSet<&T> = (0..n).filter(|&i| alive[i]).map(|i| &self.elements[i]).collect();
        self.induced(|e| keep.contains(e))
    }

    pub fn id_of(&self, e: &T) -> Option<u32> {
        self.index.get(e).copied()
    }

    pub fn contains(&self, e: &T) -> bool {
        self.index.contains_key(e)
    }
}

impl<T> Poset<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn element(&self, id: u32) -> &T {
        &self.elements[id as usize]
    }

    pub fn leq(&self, a: u32, b: u32) -> bool {
        a == b || self.above[a as usize].binary_search(&b).is_ok()
    }

    pub fn lt(&self, a: u32, b: u32) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn above(&self, a: u32) -> &[u32] {
        &self.above[a as usize]
    }

    pub fn below(&self, a: u32) -> &[u32] {
        &self.below[a as usize]
    }

    /// Upper covers of `a`: elements strictly above with nothing in between.
    pub fn upper_covers(&self, a: u32) -> &[u32] {
        &self.covers[a as usize]
    }

    /// All cover pairs `(lower, upper)` in id order.
    pub fn cover_pairs(&self) -> Vec<(u32, u32)> {
        self.covers
            .iter()
            .enumerate()
            .flat_map(|(i, up)| up.iter().map(move |&j| (i as u32, j)))
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<u32> {
        (0..self.len() as u32)
            .filter(|&i| self.below[i as usize].is_empty())
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<u32> {
        (0..self.len() as u32)
            .filter(|&i| self.above[i as usize].is_empty())
            .collect()
    }

    /// The least element, if the poset has one.
    pub fn minimum(&self) -> Option<u32> {
        match self.minimal_elements().as_slice() {
            [only] if self.above[*only as usize].len() + 1 == self.len() => Some(*only),
            _ => None,
        }
    }

    pub fn maximum(&self) -> Option<u32> {
        match self.maximal_elements().as_slice() {
            [only] if self.below[*only as usize].len() + 1 == self.len() => Some(*only),
            _ => None,
        }
    }

    /// Number of nonempty chains, counted without enumerating them.
    pub fn chain_count(&self) -> u128 {
        // Chains with minimum x: 1 + sum over y > x of chains with minimum y.
        // Process in order of decreasing up-set size so dependencies come first.
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.above[i].len());
        let mut starting_at = vec![0u128; self.len()];
        for &i in &order {
            starting_at[i] = 1 + self.above[i]
                .iter()
                .map(|&j| starting_at[j as usize])
                .sum::<u128>();
        }
        starting_at.iter().sum()
    }
}

#[derive(Serialize)]
struct PosetJson<'a, T> {
    elements: &'a [T],
    covers: Vec<(u32, u32)>,
}

impl<T: Serialize> Poset<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PosetJson {
            elements: &self.elements,
            covers: self.cover_pairs(),
        })
        .expect("poset serializes")
    }
}

/// The order complex: one vertex per element id, one simplex per nonempty chain.
pub fn order_complex<T>(p: &Poset<T>, caps: &Caps) -> Result<SimplicialComplex> {
    let mut all: HashSet<Simplex> = HashSet::new();
    let mut stack: Vec<u32> = Vec::new();
    for start in 0..p.len() as u32 {
        stack.push(start);
        collect_chains(p, &mut stack, &mut all, caps)?;
        stack.pop();
    }
    Ok(SimplicialComplex::assemble(all))
}

fn collect_chains<T>(
    p: &Poset<T>,
    stack: &mut Vec<u32>,
    all: &mut HashSet<Simplex>,
    caps: &Caps,
) -> Result<()> {
    all.insert(Simplex::new(stack.clone()));
    caps.check_simplices(all.len())?;
    let top = *stack.last().expect("nonempty chain");
    for &next in p.above(top) {
        stack.push(next);
        collect_chains(p, stack, all, caps)?;
        stack.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(n: u32) -> Poset<u32> {
        let elems: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
        Poset::from_relation(elems, |a, b| b % a == 0, &Caps::default()).unwrap()
    }

    fn chain(len: u32) -> Poset<u32> {
        Poset::from_relation((0..len).collect(), |a, b| a <= b, &Caps::default()).unwrap()
    }

    fn antichain(len: u32) -> Poset<u32> {
        Poset::from_relation((0..len).collect(), |a, b| a == b, &Caps::default()).unwrap()
    }

    #[test]
    fn covers_of_divisor_lattice() {
        let p = divisors(12);
        let id = |x| p.id_of(&x).unwrap();
        let mut covers: Vec<(u32, u32)> = p
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| (*p.element(a), *p.element(b)))
            .collect();
        covers.sort();
        assert_eq!(
            covers,
            vec![(1, 2), (1, 3), (2, 4), (2, 6), (3, 6), (4, 12), (6, 12)]
        );
        assert_eq!(p.minimum(), Some(id(1)));
        assert_eq!(p.maximum(), Some(id(12)));
    }

    #[test]
    fn rejects_non_orders() {
        let caps = Caps::default();
        let cyclic = Poset::from_relation(vec![0u32, 1], |_, _| true, &caps);
        assert!(matches!(cyclic, Err(Error::InvalidPoset(_))));
        // 0 < 1 < 2 but not 0 < 2.
        let intransitive = Poset::from_upsets(vec![0u32, 1, 2], vec![vec![1], vec![2], vec![]]);
        assert!(matches!(intransitive, Err(Error::InvalidPoset(_))));
    }

    #[test]
    fn element_cap() {
        let caps = Caps {
            max_elements: 3,
            ..Caps::default()
        };
        assert!(Poset::from_relation((0..4u32).collect(), |a, b| a <= b, &caps)
            .unwrap_err()
            .is_resource());
    }

    #[test]
    fn order_complex_examples() {
        let caps = Caps::default();
        let edge = order_complex(&chain(2), &caps).unwrap();
        assert_eq!(edge.f_vector(), vec![2, 1]);
        let s0 = order_complex(&antichain(2), &caps).unwrap();
        assert_eq!(s0.f_vector(), vec![2]);
        let d12 = order_complex(&divisors(12), &caps).unwrap();
        assert_eq!(d12.num_simplices() as u128, divisors(12).chain_count());
    }

    #[test]
    fn induced_subposet() {
        let p = divisors(12);
        let (evens, parents) = p.induced(|x| x % 2 == 0);
        assert_eq!(evens.elements(), &[2, 4, 6, 12]);
        assert_eq!(parents.len(), 4);
        assert_eq!(evens.minimum().map(|i| *evens.element(i)), Some(2));
        assert!(evens.leq(evens.id_of(&2).unwrap(), evens.id_of(&12).unwrap()));
    }

    #[test]
    fn poset_json() {
        let v = chain(2).to_json();
        assert_eq!(v, serde_json::json!({"elements": [0, 1], "covers": [[0, 1]]}));
    }

    #[test]
    fn beat_point_cores() {
        let (core, _) = chain(5).beat_point_core();
        assert_eq!(core.len(), 1);
        assert_eq!(divisors(12).beat_point_core().0.len(), 1);
        assert_eq!(antichain(3).beat_point_core().0.len(), 3);
        // Two minima below two maxima: a circle, already minimal.
        let crown = Poset::from_relation(vec![0u32, 1, 2, 3], |a, b| a < &2 && b >= &2, &Caps::default()).unwrap();
        assert_eq!(crown.beat_point_core().0.len(), 4);
        // A circle with a whisker hanging off a maximum.
        let whisker = Poset::from_relation(vec![0u32, 1, 2, 3, 4], |a, b| (a < &2 && (b == &2 || b == &3)) || (a == &0 && b == &4), &Caps::default()).unwrap();
        let (core, parents) = whisker.beat_point_core();
        assert_eq!(core.len(), 4);
        assert_eq!(parents, vec![0, 1, 2, 3]);
    }
}
