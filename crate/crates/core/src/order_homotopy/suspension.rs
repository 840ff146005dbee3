//! The inductive decomposition of `P(n, k, s)` for `s_k = 1`: the base case
//! at `n = Σ + 2`, the suspension split by `n ∉ B` / `n ∉ A`, and the chain of
//! monotone operators contracting `{n ∉ B}`.

use std::collections::HashSet;

use serde::Serialize;

use super::{check_operator, cone_check, delta_homology, sub_poset, Direction, OperatorReport};
use crate::bits;
use crate::caps::Caps;
use crate::complexes::{build_pair_poset, order_complex, PairElement, Poset, Simplex};
use crate::error::{Error, Result};
use crate::homology::{is_homology_sphere, HomologyReport};
use crate::kneser::GraphParams;
use crate::stable_sets::StabilityVector;

fn params(n: u32, s: &StabilityVector) -> GraphParams {
    GraphParams {
        n,
        k: s.k(),
        s: s.clone(),
    }
}

fn require_last_one(k: usize, s: &StabilityVector) -> Result<()> {
    if s.k() != k {
        return Err(Error::param(format!("stability vector {s} has length {} but k = {k}", s.k())));
    }
    if !s.theorem_regime() || s.last() != 1 || k < 2 {
        return Err(Error::param(format!(
            "need k >= 2, s_i >= 2 for i < k and s_k = 1, got {s}"
        )));
    }
    Ok(())
}

fn require_above_base(n: u32, k: usize, s: &StabilityVector) -> Result<()> {
    require_last_one(k, s)?;
    if n <= s.head_sum() + 2 {
        return Err(Error::param(format!(
            "need n > {} for {s}, got n = {n}",
            s.head_sum() + 2
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseCaseReport {
    pub check: &'static str,
    pub params: GraphParams,
    pub u: Vec<u32>,
    pub v: Vec<u32>,
    pub p1_size: usize,
    pub p2_size: usize,
    /// Every element lies in exactly one part and no relation crosses parts.
    pub disjoint_union: bool,
    pub p1_minimum_is_vu: bool,
    pub p2_minimum_is_uv: bool,
    pub homology: HomologyReport,
    pub s0: bool,
    pub ok: bool,
}

/// `n = Σ + 2`: `P` splits into the cones above `(V, U)` and `(U, V)`.
pub fn theorem7_base_case(k: usize, s: &StabilityVector, caps: &Caps) -> Result<BaseCaseReport> {
    require_last_one(k, s)?;
    let n = s.head_sum() + 2;
    let mut u = vec![1u32];
    for &gap in &s.entries()[..k - 1] {
        u.push(u.last().unwrap() + gap);
    }
    let v: Vec<u32> = u.iter().map(|x| x + 1).collect();
    let (um, vm) = (bits::mask_of(&u), bits::mask_of(&v));
    let p = build_pair_poset(n, k, s, caps)?;
    let in1 = |e: &PairElement| bits::is_subset(vm, e.a) && bits::is_subset(um, e.b);
    let in2 = |e: &PairElement| bits::is_subset(um, e.a) && bits::is_subset(vm, e.b);
    let partition_ok = p.elements().iter().all(|e| in1(e) != in2(e));
    let no_cross = (0..p.len() as u32).all(|x| {
        p.above(x)
            .iter()
            .all(|&y| in1(p.element(x)) == in1(p.element(y)))
    });
    let (p1, _) = p.induced(in1);
    let (p2, _) = p.induced(in2);
    let min_is = |q: &Poset<PairElement>, a: u64, b: u64| {
        q.minimum().map(|m| *q.element(m)) == Some(PairElement::new(a, b))
    };
    let homology = delta_homology(&p, caps)?;
    let s0 = is_homology_sphere(&homology, 0);
    let disjoint_union = partition_ok && no_cross;
    let p1_minimum_is_vu = min_is(&p1, vm, um);
    let p2_minimum_is_uv = min_is(&p2, um, vm);
    Ok(BaseCaseReport {
        check: "theorem7_base_case",
        params: params(n, s),
        u,
        v,
        p1_size: p1.len(),
        p2_size: p2.len(),
        disjoint_union,
        p1_minimum_is_vu,
        p2_minimum_is_uv,
        homology,
        s0,
        ok: disjoint_union && p1_minimum_is_vu && p2_minimum_is_uv && s0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainLevelReport {
    pub check: &'static str,
    pub params: GraphParams,
    pub i: usize,
    pub level_size: usize,
    pub operators: Vec<OperatorReport>,
    /// `Img(φ4)` equals the next level `P^(i+1)`.
    pub image_equals_next_level: bool,
    pub p1_homology_trivial: bool,
    pub pk_minimum: Option<PairElement>,
    pub pk_minimum_matches: bool,
    pub pk_is_cone: bool,
    pub ok: bool,
}

struct OperatorChain<'a> {
    n: u32,
    k: usize,
    s: &'a StabilityVector,
    p: Poset<PairElement>,
    // sigma[i] = s_{k-1} + ... + s_{k-i} for i < k.
    sigma: Vec<i64>,
    caps: &'a Caps,
}

impl<'a> OperatorChain<'a> {
    fn new(n: u32, k: usize, s: &'a StabilityVector, caps: &'a Caps) -> Result<Self> {
        require_above_base(n, k, s)?;
        let mut sigma = vec![0i64];
        for j in 1..k {
            sigma.push(sigma[j - 1] + s.entries()[k - j - 1] as i64);
        }
        Ok(OperatorChain {
            n,
            k,
            s,
            p: build_pair_poset(n, k, s, caps)?,
            sigma,
            caps,
        })
    }

    /// `n - σ_i`, or `None` for `i = k` where the sum would need `s_0`;
    /// intervals that start there are clipped to start at 1.
    fn offset(&self, i: usize) -> Option<i64> {
        (i < self.k).then(|| self.n as i64 - self.sigma[i])
    }

    fn a_window(&self, i: usize) -> u64 {
        let lo = self.offset(i).map_or(1, |t| t + 1);
        bits::interval(lo, self.n as i64)
    }

    fn b_window(&self, i: usize) -> u64 {
        let lo = self.offset(i).unwrap_or(1);
        bits::interval(lo, self.n as i64)
    }

    fn a_pattern(&self, i: usize) -> u64 {
        (0..i).fold(0, |m, j| m | bits::interval(self.n as i64 - self.sigma[j], self.n as i64 - self.sigma[j]))
    }

    fn b_pattern(&self, i: usize) -> u64 {
        self.a_pattern(i) >> 1
    }

    fn in_p1(&self, e: &PairElement) -> bool {
        e.b >> (self.n - 1) & 1 == 0
    }

    fn in_level(&self, e: &PairElement, i: usize) -> bool {
        self.in_p1(e)
            && (i == 0
                || (e.a & self.a_window(i) == self.a_pattern(i)
                    && e.b & self.b_window(i) == self.b_pattern(i)))
    }

    fn ids_where(&self, pred: impl Fn(&PairElement) -> bool) -> Vec<u32> {
        (0..self.p.len() as u32).filter(|&x| pred(self.p.element(x))).collect()
    }

    fn stated_minimum(&self) -> PairElement {
        PairElement::new(self.a_pattern(self.k), self.b_pattern(self.k))
    }

    fn level(&self, i: usize, p1_homology_trivial: bool) -> Result<ChainLevelReport> {
        if i >= self.k {
            return Err(Error::param(format!("level i must be < k = {}, got {i}", self.k)));
        }
        let t = self.offset(i).expect("i < k");
        let next = self.offset(i + 1);
        let single = |x: i64| bits::interval(x, x);
        // Windows for the level-(i+1) block: A in [n-σ_{i+1}+1, t], B in [n-σ_{i+1}, t-1].
        let a_block = bits::interval(next.map_or(1, |v| v + 1), t);
        let b_block = bits::interval(next.unwrap_or(1), t - 1);
        let a_strip = bits::interval(next.map_or(1, |v| v + 1), t - 1);
        let b_strip = bits::interval(next.unwrap_or(1), t - 2);

        let level = self.ids_where(|e| self.in_level(e, i));
        let pred1 = self.ids_where(|e| self.in_level(e, i) && e.a & single(t) != 0);
        let pred2 = self.ids_where(|e| self.in_level(e, i) && e.a & a_block == single(t));
        let pred3 = self.ids_where(|e| {
            self.in_level(e, i) && e.a & a_block == single(t) && e.b & single(t - 1) != 0
        });
        let pred4 = self.ids_where(|e| {
            self.in_level(e, i) && e.a & a_block == single(t) && e.b & b_block == single(t - 1)
        });
        let next_level = self.ids_where(|e| self.in_level(e, i + 1));

        let r1 = check_operator(
            "phi1",
            &self.p,
            &level,
            |e| PairElement::new(e.a | single(t), e.b),
            Direction::Increasing,
            &pred1,
            self.caps,
        )?;
        let r2 = check_operator(
            "phi2",
            &self.p,
            &r1.image,
            |e| PairElement::new(e.a & !a_strip, e.b),
            Direction::Decreasing,
            &pred2,
            self.caps,
        )?;
        let r3 = check_operator(
            "phi3",
            &self.p,
            &r2.image,
            |e| PairElement::new(e.a, e.b | single(t - 1)),
            Direction::Increasing,
            &pred3,
            self.caps,
        )?;
        let r4 = check_operator(
            "phi4",
            &self.p,
            &r3.image,
            |e| PairElement::new(e.a, e.b & !b_strip),
            Direction::Decreasing,
            &pred4,
            self.caps,
        )?;
        let image_equals_next_level = r4.well_defined && r4.image == next_level;

        let pk_ids = self.ids_where(|e| self.in_level(e, self.k));
        let pk = sub_poset(&self.p, &pk_ids);
        let pk_minimum = pk.minimum().map(|m| *pk.element(m));
        let pk_minimum_matches = pk_minimum == Some(self.stated_minimum());
        let pk_is_cone = cone_check(&pk);
        let operators = vec![r1, r2, r3, r4];
        let ok = operators.iter().all(|r| r.ok)
            && image_equals_next_level
            && p1_homology_trivial
            && pk_minimum_matches
            && pk_is_cone;
        Ok(ChainLevelReport {
            check: "theorem7_operator_chain",
            params: params(self.n, self.s),
            i,
            level_size: level.len(),
            operators,
            image_equals_next_level,
            p1_homology_trivial,
            pk_minimum,
            pk_minimum_matches,
            pk_is_cone,
            ok,
        })
    }

    fn p1_homology_trivial(&self) -> Result<bool> {
        let (p1, _) = self.p.induced(|e| self.in_p1(e));
        Ok(delta_homology(&p1, self.caps)?.is_acyclic())
    }
}

/// Runs the four operators of level `i` on `P^(i) ⊆ {n ∉ B}`.
pub fn theorem7_operator_chain(
    n: u32,
    k: usize,
    s: &StabilityVector,
    i: usize,
    caps: &Caps,
) -> Result<ChainLevelReport> {
    let chain = OperatorChain::new(n, k, s, caps)?;
    let trivial = chain.p1_homology_trivial()?;
    chain.level(i, trivial)
}

/// All levels `0 <= i < k`.
pub fn theorem7_operator_chain_all(
    n: u32,
    k: usize,
    s: &StabilityVector,
    caps: &Caps,
) -> Result<Vec<ChainLevelReport>> {
    let chain = OperatorChain::new(n, k, s, caps)?;
    let trivial = chain.p1_homology_trivial()?;
    (0..k).map(|i| chain.level(i, trivial)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SuspensionReport {
    pub check: &'static str,
    pub params: GraphParams,
    /// `Δ(P) = Δ(P1) ∪ Δ(P2)` as simplex sets.
    pub union_ok: bool,
    /// `Δ(P1) ∩ Δ(P2) = Δ(P(n-1))` under the verbatim embedding.
    pub intersection_ok: bool,
    pub p1_acyclic: bool,
    pub p2_acyclic: bool,
    pub whole: HomologyReport,
    pub intersection: HomologyReport,
    pub betti_shift_ok: bool,
    pub ok: bool,
}

pub fn suspension_check(n: u32, k: usize, s: &StabilityVector, caps: &Caps) -> Result<SuspensionReport> {
    require_above_base(n, k, s)?;
    let p = build_pair_poset(n, k, s, caps)?;
    let smaller = build_pair_poset(n - 1, k, s, caps)?;
    let top = 1u64 << (n - 1);
    let lifted = |q: &Poset<PairElement>, parents: &[u32]| -> Result<HashSet<Simplex>> {
        Ok(order_complex(q, caps)?
            .iter()
            .map(|sx| Simplex::new(sx.vertices().iter().map(|&v| parents[v as usize]).collect()))
            .collect())
    };
    let (p1, ids1) = p.induced(|e| e.b & top == 0);
    let (p2, ids2) = p.induced(|e| e.a & top == 0);
    let whole_cx = order_complex(&p, caps)?;
    let d1 = lifted(&p1, &ids1)?;
    let d2 = lifted(&p2, &ids2)?;
    let union: HashSet<Simplex> = d1.union(&d2).cloned().collect();
    let union_ok = union == whole_cx.simplex_set();
    let embed: Option<Vec<u32>> = smaller.elements().iter().map(|e| p.id_of(e)).collect();
    let intersection_ok = match embed {
        Some(ids) => {
            let inter: HashSet<Simplex> = d1.intersection(&d2).cloned().collect();
            inter == lifted(&smaller, &ids)?
        }
        None => false,
    };
    let whole = delta_homology(&p, caps)?;
    let intersection = delta_homology(&smaller, caps)?;
    let p1_acyclic = delta_homology(&p1, caps)?.is_acyclic();
    let p2_acyclic = delta_homology(&p2, caps)?.is_acyclic();
    let shifted_betti: std::collections::BTreeMap<i64, u64> =
        intersection.nonzero_betti().into_iter().map(|(d, b)| (d + 1, b)).collect();
    let shifted_torsion: std::collections::BTreeMap<_, _> = intersection
        .torsion
        .iter()
        .map(|(d, t)| (d + 1, t.clone()))
        .collect();
    let betti_shift_ok = whole.nonzero_betti() == shifted_betti && whole.torsion == shifted_torsion;
    let ok = union_ok && intersection_ok && p1_acyclic && p2_acyclic && betti_shift_ok;
    Ok(SuspensionReport {
        check: "suspension",
        params: params(n, s),
        union_ok,
        intersection_ok,
        p1_acyclic,
        p2_acyclic,
        whole,
        intersection,
        betti_shift_ok,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(e: &[u32]) -> StabilityVector {
        StabilityVector::new(e.to_vec()).unwrap()
    }

    #[test]
    fn base_cases() {
        for (s, u, v) in [
            (vec![2, 1], vec![1, 3], vec![2, 4]),
            (vec![2, 2, 1], vec![1, 3, 5], vec![2, 4, 6]),
            (vec![3, 1], vec![1, 4], vec![2, 5]),
        ] {
            let r = theorem7_base_case(s.len(), &sv(&s), &Caps::default()).unwrap();
            assert_eq!((r.u.clone(), r.v.clone()), (u, v));
            assert!(r.ok, "{r:?}");
        }
    }

    #[test]
    fn base_case_needs_last_one() {
        assert!(theorem7_base_case(2, &sv(&[2, 2]), &Caps::default()).is_err());
    }

    #[test]
    fn operator_chain_five() {
        let r = theorem7_operator_chain(5, 2, &sv(&[2, 1]), 0, &Caps::default()).unwrap();
        assert!(r.ok, "{r:#?}");
        assert_eq!(r.pk_minimum, Some(PairElement::from_lists(&[3, 5], &[2, 4])));
        let dirs: Vec<Direction> = r.operators.iter().map(|o| o.stated_direction).collect();
        assert_eq!(
            dirs,
            vec![Direction::Increasing, Direction::Decreasing, Direction::Increasing, Direction::Decreasing]
        );
    }

    #[test]
    fn operator_chain_all_levels() {
        for (n, s) in [(5, vec![2, 1]), (6, vec![2, 1]), (6, vec![3, 1]), (7, vec![2, 2, 1])] {
            for r in theorem7_operator_chain_all(n, s.len(), &sv(&s), &Caps::default()).unwrap() {
                assert!(r.ok, "n={n} s={s:?} i={}: {r:#?}", r.i);
            }
        }
    }

    #[test]
    fn operator_chain_rejects_base_case() {
        assert!(theorem7_operator_chain(4, 2, &sv(&[2, 1]), 0, &Caps::default()).is_err());
        assert!(theorem7_operator_chain(5, 2, &sv(&[2, 1]), 2, &Caps::default()).is_err());
    }

    #[test]
    fn suspensions() {
        let r = suspension_check(5, 2, &sv(&[2, 1]), &Caps::default()).unwrap();
        assert!(r.ok, "{r:?}");
        assert!(is_homology_sphere(&r.intersection, 0) && is_homology_sphere(&r.whole, 1));
        let r = suspension_check(6, 2, &sv(&[2, 1]), &Caps::default()).unwrap();
        assert!(r.ok);
        assert!(is_homology_sphere(&r.intersection, 1) && is_homology_sphere(&r.whole, 2));
        assert!(suspension_check(6, 3, &sv(&[2, 2, 1]), &Caps::default()).is_err());
    }
}
