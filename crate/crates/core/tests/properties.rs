use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use proptest::prelude::*;

use kneser_topo::complexes::{build_pair_poset, neighborhood_complex, order_complex, Poset, Simplex, SimplicialComplex};
use kneser_topo::homology::{boundary_matrices, homology_of_chain_complex, reduced_homology};
use kneser_topo::kneser::{build_graph, chromatic_number_exact};
use kneser_topo::morse::{
    check_acyclic, check_matching, critical_counts, critical_subcomplex, theorem8_verify, MatchingRules,
    MorseContext, PartialMatching, Stage,
};
use kneser_topo::order_homotopy::cone_check;
use kneser_topo::stable_sets::{enumerate_stable, is_stable, StabilityVector};
use kneser_topo::Caps;

fn complex_strategy() -> impl Strategy<Value = SimplicialComplex> {
    let facet = prop::collection::btree_set(0u32..6, 1..=3);
    prop::collection::vec(facet, 1..10).prop_map(|facets| {
        SimplicialComplex::from_facets(
            facets.into_iter().map(|f| Simplex::new(f.into_iter().collect())),
            &Caps::default(),
        )
        .unwrap()
    })
}

/// Greedy matching driven by `picks`: each pick selects a dimension, a cell
/// of that dimension and one of its cofacets. Picking the dimension first
/// keeps the pairs in one or two layers, where gradient cycles actually occur.
fn random_matching(c: &SimplicialComplex, picks: &[(usize, usize)]) -> PartialMatching {
    let mut cofacets: HashMap<&Simplex, Vec<&Simplex>> = HashMap::new();
    for t in c.iter() {
        for s in c.iter().filter(|s| s.len() + 1 == t.len() && s.is_face_of(t)) {
            cofacets.entry(s).or_default().push(t);
        }
    }
    let mut used: HashSet<&Simplex> = HashSet::new();
    let mut pairs = Vec::new();
    if c.dim() < 1 {
        return PartialMatching::default();
    }
    for &(i, j) in picks {
        let layer = c.simplices((i % c.dim() as usize) as i64);
        let s = &layer[(i / 7) % layer.len()];
        if used.contains(s) {
            continue;
        }
        let Some(ups) = cofacets.get(s) else { continue };
        let t = ups[j % ups.len()];
        if used.contains(t) {
            continue;
        }
        used.insert(s);
        used.insert(t);
        pairs.push((s.clone(), t.clone()));
    }
    PartialMatching::new(pairs)
}

/// Looks for `σ_1, μ(σ_1), σ_2, ..., μ(σ_t), σ_1` with at most `max_len` cells.
fn alternating_cycle_brute(m: &PartialMatching, max_len: usize) -> bool {
    let up: HashMap<&Simplex, &Simplex> = m.pairs().iter().map(|(s, t)| (s, t)).collect();
    fn walk<'a>(
        start: &'a Simplex,
        at: &'a Simplex,
        up: &HashMap<&'a Simplex, &'a Simplex>,
        len: usize,
        max_len: usize,
    ) -> bool {
        if len + 2 > max_len {
            return false;
        }
        let t = up[at];
        for f in t.facets() {
            if &f == at {
                continue;
            }
            if &f == start {
                return true;
            }
            if let Some((key, _)) = up.get_key_value(&f) {
                if walk(start, key, up, len + 2, max_len) {
                    return true;
                }
            }
        }
        false
    }
    m.domain().any(|s| walk(s, s, &up, 0, max_len))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn boundary_squares_to_zero(c in complex_strategy()) {
        let cc = boundary_matrices(&c, &Caps::default()).unwrap();
        prop_assert!(cc.squares_to_zero());
    }

    #[test]
    fn euler_characteristic_is_consistent(c in complex_strategy()) {
        let r = reduced_homology(&c, &Caps::default()).unwrap();
        prop_assert_eq!(r.euler, c.euler_characteristic());
        prop_assert_eq!(r.reduced_euler(), c.euler_characteristic() - 1);
        let unreduced: i64 = r.unreduced_betti().iter().map(|(&d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(unreduced, c.euler_characteristic());
    }

    #[test]
    fn stored_complexes_are_closed(c in complex_strategy(), picks in prop::collection::vec(any::<u16>(), 1..20)) {
        let facets = c.facets();
        for p in picks {
            let f = &facets[p as usize % facets.len()];
            let mask = (p as usize >> 3) % (1 << f.len());
            let face: Vec<u32> = f.vertices().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            if !face.is_empty() {
                prop_assert!(c.contains(&face));
            }
        }
    }

    #[test]
    fn acyclicity_matches_brute_force(
        c in complex_strategy(),
        picks in prop::collection::vec((any::<usize>(), any::<usize>()), 0..6),
    ) {
        let m = random_matching(&c, &picks);
        prop_assert!(check_matching(&c, &m).valid);
        // At most 6 pairs, so every cycle has at most 12 cells.
        prop_assert_eq!(check_acyclic(&m), !alternating_cycle_brute(&m, 12));
    }

    #[test]
    fn acyclicity_matches_brute_force_on_loops(
        cycle in prop::sample::subsequence((0u32..8).collect::<Vec<_>>(), 3..=6).prop_shuffle(),
        keep in prop::collection::vec(prop::bool::weighted(0.8), 6),
        extra in prop::collection::vec(prop::collection::btree_set(0u32..8, 2..=3), 0..4),
    ) {
        let len = cycle.len();
        let edges = (0..len).map(|i| Simplex::new(vec![cycle[i], cycle[(i + 1) % len]]));
        let c = SimplicialComplex::from_facets(
            edges.chain(extra.into_iter().map(|f| Simplex::new(f.into_iter().collect()))),
            &Caps::default(),
        ).unwrap();
        let pairs: Vec<(Simplex, Simplex)> = (0..len)
            .filter(|&i| keep[i])
            .map(|i| (Simplex::new(vec![cycle[i]]), Simplex::new(vec![cycle[i], cycle[(i + 1) % len]])))
            .collect();
        let m = PartialMatching::new(pairs);
        prop_assert!(check_matching(&c, &m).valid);
        let brute_cycle = alternating_cycle_brute(&m, 12);
        prop_assert_eq!(check_acyclic(&m), !brute_cycle);
        prop_assert_eq!(brute_cycle, keep[..len].iter().all(|&b| b));
    }

    #[test]
    fn morse_count_and_inequalities(
        c in complex_strategy(),
        picks in prop::collection::vec((any::<usize>(), any::<usize>()), 0..30),
    ) {
        let m = random_matching(&c, &picks);
        prop_assume!(check_acyclic(&m));
        let counts = critical_counts(&c, &m);
        prop_assert_eq!(counts.iter().sum::<usize>(), c.num_simplices() - 2 * m.len());
        let r = reduced_homology(&c, &Caps::default()).unwrap();
        for (d, b) in r.unreduced_betti() {
            prop_assert!(counts[d as usize] as u64 >= b);
        }
        if let Ok(crit) = critical_subcomplex(&c, &m) {
            // A closed set of critical cells is a collapse of the whole complex.
            prop_assert!(reduced_homology(&crit, &Caps::default()).unwrap().same_homology(&r));
        }
    }

    #[test]
    fn enumeration_is_sorted_and_stable(n in 1u32..16, s in prop::collection::vec(1u32..5, 1..5)) {
        let k = s.len();
        prop_assume!(n as usize >= k);
        let sv = StabilityVector::new(s).unwrap();
        let sets = enumerate_stable(n, k, &sv).unwrap();
        for w in sets.windows(2) {
            prop_assert!(w[0].elements() < w[1].elements());
        }
        for a in &sets {
            prop_assert!(is_stable(a, &sv).unwrap());
        }
        let brute = (1..=n).combinations(k).filter(|a| {
            (0..k - 1).all(|j| a[j + 1] - a[j] >= sv.entries()[j]) && a[k - 1] - a[0] + sv.last() <= n
        }).count();
        prop_assert_eq!(sets.len(), brute);
    }

    #[test]
    fn cones_are_acyclic(masks in prop::collection::btree_set(1u32..64, 1..24)) {
        let caps = Caps::default();
        let elems: Vec<u32> = masks.into_iter().collect();
        let p = Poset::from_relation(elems, |a, b| a & !b == 0, &caps).unwrap();
        if cone_check(&p) {
            let r = reduced_homology(&order_complex(&p, &caps).unwrap(), &caps).unwrap();
            prop_assert!(r.is_acyclic());
        }
    }
}

#[test]
fn boundary_and_euler_on_grid_complexes() {
    let caps = Caps::default();
    let grid: &[(u32, &[u32])] = &[(5, &[2, 2]), (6, &[2, 1]), (6, &[3, 1]), (7, &[2, 2, 1]), (8, &[2, 2, 2])];
    for &(n, s) in grid {
        let sv = StabilityVector::new(s.to_vec()).unwrap();
        let g = build_graph(n, sv.k(), &sv).unwrap();
        let p = build_pair_poset(n, sv.k(), &sv, &caps).unwrap();
        for c in [neighborhood_complex(&g, &caps).unwrap(), order_complex(&p, &caps).unwrap()] {
            let cc = boundary_matrices(&c, &caps).unwrap();
            assert!(cc.squares_to_zero());
            let r = homology_of_chain_complex(&cc).unwrap();
            assert_eq!(r.reduced_euler(), c.euler_characteristic() - 1);
        }
    }
}

#[test]
fn stage_matchings_have_no_short_cycles() {
    let caps = Caps::default();
    let s = StabilityVector::new(vec![2, 1]).unwrap();
    let ctx = MorseContext::new(5, 2, &s, MatchingRules::default(), &caps).unwrap();
    let mut residual = ctx.complex().clone();
    assert!(residual.num_simplices() <= 2000);
    for stage in Stage::ALL {
        let built = ctx.build_stage(stage, &residual);
        assert!(check_acyclic(&built.matching));
        assert!(!alternating_cycle_brute(&built.matching, 12));
        residual = critical_subcomplex(&residual, &built.matching).unwrap();
    }
}

#[test]
fn reruns_are_bit_identical() {
    let caps = Caps::default();
    let run = || {
        let s = StabilityVector::new(vec![2, 1]).unwrap();
        let g = build_graph(6, 2, &s).unwrap();
        let p = build_pair_poset(5, 2, &s, &caps).unwrap();
        let nc = neighborhood_complex(&g, &caps).unwrap();
        let chi = chromatic_number_exact(&g, 64).unwrap();
        let t8 = theorem8_verify(5, 2, &s, MatchingRules::default(), &caps).unwrap();
        serde_json::to_string(&(
            p.to_json(),
            nc.to_json(),
            reduced_homology(&nc, &caps).unwrap(),
            chi,
            t8,
        ))
        .unwrap()
    };
    assert_eq!(run(), run());
}
