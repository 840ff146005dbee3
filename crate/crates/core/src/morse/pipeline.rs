//! The staged collapse of `Δ(P(n, k, s))` onto `Δ(P(n, k, s*))` for
//! `s = (s_1, ..., s_{k-1}, 1)` and `s* = (s_1, ..., s_{k-1}, 2)`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::chains::{ChainContext, ChainSimplex, DSelection};
use super::matching::{
    check_acyclic, check_matching, critical_counts, critical_subcomplex, find_cycle,
    PartialMatching,
};
use crate::bits;
use crate::caps::Caps;
use crate::complexes::{
    build_pair_poset, complex_equality, order_complex, PairElement, Poset, Simplex,
    SimplicialComplex,
};
use crate::error::{Error, Result};
use crate::homology::{reduced_homology, HomologyReport};
use crate::kneser::GraphParams;
use crate::stable_sets::{contains_stable, StabilityVector};

/// Which chains of `H2` start a matched pair in the second stage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sigma2Rule {
    /// `e = 0`, or `(A_e, B_e) ≠ (A_{e+1} \ E, B_{e+1})`: exactly the chains
    /// that are not themselves images.
    #[default]
    SetDifference,
    /// `e = 0`, or `A_{e+1} ≠ A_e ∪ E`.
    AsWritten,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingRules {
    pub d_selection: DSelection,
    pub sigma2: Sigma2Rule,
}

impl MatchingRules {
    /// The rules read literally: lexicographically smallest `D`, the printed `Σ2` condition.
    pub fn as_written() -> Self {
        MatchingRules {
            d_selection: DSelection::LexSmallest,
            sigma2: Sigma2Rule::AsWritten,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Mu1,
    Mu2,
    Mu3,
    Mu4,
    Mu5,
    Mu6,
}

impl Stage {
    pub const ALL: [Stage; 6] = [Stage::Mu1, Stage::Mu2, Stage::Mu3, Stage::Mu4, Stage::Mu5, Stage::Mu6];

    fn mirrored(self) -> bool {
        matches!(self, Stage::Mu3 | Stage::Mu4 | Stage::Mu6)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageFailure {
    pub reason: String,
    pub chain: Vec<PairElement>,
}

/// Matching of one stage on its residual complex.
#[derive(Clone, Debug)]
pub struct StageMatching {
    pub stage: Stage,
    /// The chains this stage is meant to remove.
    pub h: Vec<Simplex>,
    pub matching: PartialMatching,
    pub failure: Option<StageFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub stage: Stage,
    pub h_size: usize,
    pub domain_size: usize,
    pub valid: bool,
    pub acyclic: bool,
    /// `Σ ∪ μ(Σ) = H`.
    pub covers_h: bool,
    pub critical_is_subcomplex: bool,
    /// Residual equals the original complex minus the sets removed so far.
    pub residual_identity: bool,
    pub morse_count_ok: bool,
    pub morse_inequalities_ok: bool,
    pub critical_counts: Vec<usize>,
    pub homology_preserved: bool,
    pub residual_homology: Option<HomologyReport>,
    pub failure: Option<StageFailure>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem8Report {
    pub check: &'static str,
    pub params: GraphParams,
    pub s_star: StabilityVector,
    pub rules: MatchingRules,
    pub complex_size: usize,
    pub target_size: usize,
    pub stages: Vec<StageReport>,
    pub final_equals_target: bool,
    pub start_homology: HomologyReport,
    pub end_homology: Option<HomologyReport>,
    pub homology_agrees: bool,
    pub ok: bool,
}

/// The complex `Δ(P(n, k, s))` with everything needed to build the stage matchings.
pub struct MorseContext {
    pub params: GraphParams,
    pub s_star: StabilityVector,
    pub rules: MatchingRules,
    chains: ChainContext,
    poset: Poset<PairElement>,
    complex: SimplicialComplex,
    caps: Caps,
}

type Matcher = fn(&MorseContext, &ChainSimplex) -> std::result::Result<Option<ChainSimplex>, String>;

impl MorseContext {
    pub fn new(n: u32, k: usize, s: &StabilityVector, rules: MatchingRules, caps: &Caps) -> Result<Self> {
        if s.k() != k || k < 2 || !s.theorem_regime() || s.last() != 1 {
            return Err(Error::param(format!(
                "need k >= 2, s_i >= 2 for i < k and s_k = 1, got k = {k}, s = {s}"
            )));
        }
        if n < s.head_sum() + 2 {
            return Err(Error::param(format!("need n >= {}, got {n}", s.head_sum() + 2)));
        }
        let s_star = s.with_last(2)?;
        let poset = build_pair_poset(n, k, s, caps)?;
        let complex = order_complex(&poset, caps)?;
        Ok(MorseContext {
            params: GraphParams { n, k, s: s.clone() },
            chains: ChainContext {
                n,
                s: s.entries().to_vec(),
                s_star: s_star.entries().to_vec(),
                d_selection: rules.d_selection,
            },
            s_star,
            rules,
            poset,
            complex,
            caps: *caps,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn poset(&self) -> &Poset<PairElement> {
        &self.poset
    }

    pub fn chain_of(&self, s: &Simplex) -> ChainSimplex {
        let mut elems: Vec<PairElement> = s.vertices().iter().map(|&v| *self.poset.element(v)).collect();
        elems.sort_by_key(PairElement::size);
        ChainSimplex::from_sorted(elems)
    }

    fn simplex_of(&self, c: &ChainSimplex) -> Option<Simplex> {
        if !c.is_strict_chain() {
            return None;
        }
        let ids: Option<Vec<u32>> = c.elements().iter().map(|e| self.poset.id_of(e)).collect();
        ids.map(Simplex::new)
    }

    fn in_stage_h(&self, stage: Stage, c: &ChainSimplex) -> bool {
        let ch = &self.chains;
        match stage {
            Stage::Mu1 => ch.in_h1(c) && !ch.in_h2(c),
            Stage::Mu2 => ch.in_h2(c),
            Stage::Mu3 => self.in_stage_h(Stage::Mu1, &c.swapped()),
            Stage::Mu4 => self.in_stage_h(Stage::Mu2, &c.swapped()),
            Stage::Mu5 => ch.b1_lacks_star(c),
            Stage::Mu6 => ch.b1_lacks_star(&c.swapped()),
        }
    }

    /// Whether the original-complex chain is gone once `stage` has run.
    fn removed_after(&self, stage: Stage, c: &ChainSimplex) -> bool {
        let ch = &self.chains;
        let h1 = ch.in_h1(c);
        let h3 = ch.in_h3(c);
        match stage {
            Stage::Mu1 => h1 && !ch.in_h2(c),
            Stage::Mu2 => h1,
            Stage::Mu3 => h1 || (h3 && !ch.in_h2(&c.swapped())),
            Stage::Mu4 => h1 || h3,
            Stage::Mu5 => h1 || h3 || ch.in_h5(c),
            Stage::Mu6 => h1 || h3 || ch.in_h5(c) || ch.in_h6(c),
        }
    }

    fn matcher(stage: Stage) -> Matcher {
        match stage {
            Stage::Mu1 | Stage::Mu3 => mu1,
            Stage::Mu2 | Stage::Mu4 => mu2,
            Stage::Mu5 | Stage::Mu6 => mu5,
        }
    }

    /// Builds the matching of `stage` on `residual`.
    pub fn build_stage(&self, stage: Stage, residual: &SimplicialComplex) -> StageMatching {
        let matcher = Self::matcher(stage);
        let mut h = Vec::new();
        let mut pairs = Vec::new();
        let mut failure = None;
        for cell in residual.iter() {
            let chain = self.chain_of(cell);
            if !self.in_stage_h(stage, &chain) {
                continue;
            }
            h.push(cell.clone());
            if failure.is_some() {
                continue;
            }
            let view = if stage.mirrored() { chain.swapped() } else { chain.clone() };
            let outcome = matcher(self, &view).map(|up| up.map(|u| if stage.mirrored() { u.swapped() } else { u }));
            match outcome {
                Ok(None) => {}
                Ok(Some(up)) => match self.simplex_of(&up) {
                    Some(t) => pairs.push((cell.clone(), t)),
                    None => {
                        failure = Some(StageFailure {
                            reason: "inserted element does not extend the chain inside the poset".into(),
                            chain: chain.elements().to_vec(),
                        })
                    }
                },
                Err(reason) => {
                    failure = Some(StageFailure {
                        reason,
                        chain: chain.elements().to_vec(),
                    })
                }
            }
        }
        StageMatching {
            stage,
            h,
            matching: PartialMatching::new(pairs),
            failure,
        }
    }

    pub fn build_mu1(&self, residual: &SimplicialComplex) -> StageMatching {
        self.build_stage(Stage::Mu1, residual)
    }

    pub fn build_mu2(&self, residual: &SimplicialComplex) -> StageMatching {
        self.build_stage(Stage::Mu2, residual)
    }

    pub fn build_mu3(&self, residual: &SimplicialComplex) -> StageMatching {
        self.build_stage(Stage::Mu3, residual)
    }

    pub fn build_mu4(&self, residual: &SimplicialComplex) -> StageMatching {
        self.build_stage(Stage::Mu4, residual)
    }

    pub fn build_mu5(&self, residual: &SimplicialComplex) -> StageMatching {
        self.build_stage(Stage::Mu5, residual)
    }

    pub fn build_mu6(&self, residual: &SimplicialComplex) -> StageMatching {
        self.build_stage(Stage::Mu6, residual)
    }

    /// Runs one stage on `residual`; returns the report and, when the
    /// critical cells form a complex, the next residual.
    pub fn run_stage(
        &self,
        stage: Stage,
        residual: &SimplicialComplex,
        start: &HomologyReport,
    ) -> Result<(StageReport, Option<SimplicialComplex>)> {
        let built = self.build_stage(stage, residual);
        let m = &built.matching;
        let validity = check_matching(residual, m);
        let acyclic = check_acyclic(m);
        let h_set: HashSet<&Simplex> = built.h.iter().collect();
        let matched = m.matched_cells();
        let covers_h = matched == h_set;
        let mut failure = built.failure.clone();
        let witness = |s: &Simplex| Some(self.chain_of(s).elements().to_vec());
        if failure.is_none() {
            let found = if let Some((s, _)) = &validity.witness {
                witness(s).map(|c| ("matching is not valid on the residual complex", c))
            } else if !acyclic {
                find_cycle(m).and_then(|s| witness(&s)).map(|c| ("gradient cycle", c))
            } else if !covers_h {
                let stray = built
                    .h
                    .iter()
                    .find(|s| !matched.contains(s))
                    .or_else(|| matched.iter().copied().find(|s| !h_set.contains(s)));
                stray.and_then(witness).map(|c| ("matched cells differ from H", c))
            } else {
                None
            };
            failure = found.map(|(reason, chain)| StageFailure {
                reason: reason.into(),
                chain,
            });
        }
        let counts = critical_counts(residual, m);
        let critical_total: usize = counts.iter().sum();
        let morse_count_ok = critical_total + 2 * m.len() == residual.num_simplices();
        let morse_inequalities_ok = counts
            .iter()
            .enumerate()
            .all(|(d, &c)| c as u64 >= start.betti(d as i64));
        let (critical_is_subcomplex, next) = match critical_subcomplex(residual, m) {
            Ok(c) => (true, Some(c)),
            Err(Error::NotClosed { simplex, .. }) => {
                if failure.is_none() {
                    failure = Some(StageFailure {
                        reason: "critical cells are not closed under faces".into(),
                        chain: self.chain_of(&Simplex::new(simplex)).elements().to_vec(),
                    });
                }
                (false, None)
            }
            Err(e) => return Err(e),
        };
        let (residual_identity, residual_homology) = match &next {
            Some(c) => {
                let expected: HashSet<Simplex> = self
                    .complex
                    .iter()
                    .filter(|s| !self.removed_after(stage, &self.chain_of(s)))
                    .cloned()
                    .collect();
                (c.simplex_set() == expected, Some(reduced_homology(c, &self.caps)?))
            }
            None => (false, None),
        };
        let homology_preserved = residual_homology.as_ref().map_or(false, |r| r.same_homology(start));
        let ok = failure.is_none()
            && validity.valid
            && acyclic
            && covers_h
            && critical_is_subcomplex
            && residual_identity
            && morse_count_ok
            && morse_inequalities_ok
            && homology_preserved;
        Ok((
            StageReport {
                stage,
                h_size: built.h.len(),
                domain_size: m.len(),
                valid: validity.valid,
                acyclic,
                covers_h,
                critical_is_subcomplex,
                residual_identity,
                morse_count_ok,
                morse_inequalities_ok,
                critical_counts: counts,
                homology_preserved,
                residual_homology,
                failure,
                ok,
            },
            next,
        ))
    }

    /// `Δ(P(n, k, s*))` with vertices renamed to ids of `P(n, k, s)`.
    pub fn target_complex(&self) -> Result<SimplicialComplex> {
        let p = &self.params;
        let star = build_pair_poset(p.n, p.k, &self.s_star, &self.caps)?;
        let ids: Vec<u32> = star
            .elements()
            .iter()
            .map(|e| self.poset.id_of(e).ok_or_else(|| Error::Invariant("P(n,k,s*) ⊄ P(n,k,s)".into())))
            .collect::<Result<_>>()?;
        Ok(order_complex(&star, &self.caps)?.relabel(|v| ids[v as usize]))
    }
}

fn with(a: u64, b: u64) -> PairElement {
    PairElement::new(a, b)
}

fn mu1(ctx: &MorseContext, sigma: &ChainSimplex) -> std::result::Result<Option<ChainSimplex>, String> {
    let c = ctx
        .chains
        .c_set(sigma)
        .ok_or("C undefined: [n] \\ A_l has no s-stable k-set")?;
    let l = sigma.len();
    let r = ChainContext::r_index(sigma, c);
    let q = ChainContext::q_index(sigma, c);
    Ok(if r == l {
        let top = sigma.at(l);
        Some(sigma.inserted(l, with(top.a, top.b | c)))
    } else if r > 0 {
        let star = with(sigma.at(r).a, sigma.at(r).b | c);
        (sigma.at(r + 1) != star).then(|| sigma.inserted(r, star))
    } else if q == 0 {
        Some(sigma.inserted(0, with(sigma.at(1).a, c)))
    } else if q < l && sigma.at(q + 1).a != sigma.at(q).a {
        Some(sigma.inserted(q, with(sigma.at(q + 1).a, c)))
    } else {
        None
    })
}

fn mu2(ctx: &MorseContext, sigma: &ChainSimplex) -> std::result::Result<Option<ChainSimplex>, String> {
    let ch = &ctx.chains;
    let d = ch
        .d_set(sigma)
        .ok_or("D undefined: A_1 has no s*-stable k-set")?;
    let e = ChainContext::e_set(d).ok_or("E undefined: D contains 1")?;
    if !contains_stable(e, ch.n, &ch.s_star) {
        return Err(format!("E = {:?} is not s*-stable", bits::elements_of(e)));
    }
    let l = sigma.len();
    let ei = ChainContext::e_index(sigma, e);
    if ei == l {
        return Err("A_l is disjoint from E".into());
    }
    let next = sigma.at(ei + 1);
    let diamond = with(next.a & !e, next.b);
    let lower = ei == 0
        || match ctx.rules.sigma2 {
            Sigma2Rule::AsWritten => next.a != sigma.at(ei).a | e,
            Sigma2Rule::SetDifference => sigma.at(ei) != diamond,
        };
    Ok(lower.then(|| sigma.inserted(ei, diamond)))
}

fn mu5(ctx: &MorseContext, sigma: &ChainSimplex) -> std::result::Result<Option<ChainSimplex>, String> {
    let f = ctx
        .chains
        .f_set(sigma)
        .ok_or("F undefined: [n] \\ A_l has no s*-stable k-set")?;
    let l = sigma.len();
    let fi = ChainContext::f_index(sigma, f);
    if fi == 0 {
        return Err("F is contained in B_1".into());
    }
    let diamond = with(sigma.at(fi).a, sigma.at(fi).b | f);
    Ok(if fi == l {
        Some(sigma.inserted(l, diamond))
    } else {
        (sigma.at(fi + 1) != diamond).then(|| sigma.inserted(fi, diamond))
    })
}

/// Runs all six stages and compares the final residual with `Δ(P(n, k, s*))`.
pub fn theorem8_verify(
    n: u32,
    k: usize,
    s: &StabilityVector,
    rules: MatchingRules,
    caps: &Caps,
) -> Result<Theorem8Report> {
    let ctx = MorseContext::new(n, k, s, rules, caps)?;
    let start_homology = reduced_homology(&ctx.complex, caps)?;
    let mut residual = ctx.complex.clone();
    let mut stages = Vec::new();
    let mut finished = true;
    for stage in Stage::ALL {
        let (report, next) = ctx.run_stage(stage, &residual, &start_homology)?;
        let ok = report.ok;
        stages.push(report);
        match next {
            Some(c) if ok => residual = c,
            _ => {
                finished = false;
                break;
            }
        }
    }
    let target = ctx.target_complex()?;
    let final_equals_target = finished && complex_equality(&residual, &target);
    let end_homology = if finished {
        Some(reduced_homology(&residual, caps)?)
    } else {
        None
    };
    let homology_agrees = end_homology
        .as_ref()
        .map_or(false, |e| e.same_homology(&start_homology));
    let ok = finished && final_equals_target && homology_agrees;
    Ok(Theorem8Report {
        check: "theorem8",
        params: ctx.params.clone(),
        s_star: ctx.s_star.clone(),
        rules,
        complex_size: ctx.complex.num_simplices(),
        target_size: target.num_simplices(),
        stages,
        final_equals_target,
        start_homology,
        end_homology,
        homology_agrees,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::is_homology_sphere;

    fn sv(e: &[u32]) -> StabilityVector {
        StabilityVector::new(e.to_vec()).unwrap()
    }

    #[test]
    fn pipeline_passes_with_default_rules() {
        for (n, d) in [(4, 0), (5, 1), (6, 2)] {
            let r = theorem8_verify(n, 2, &sv(&[2, 1]), MatchingRules::default(), &Caps::default()).unwrap();
            assert!(r.ok, "n={n}: {}", serde_json::to_string_pretty(&r).unwrap());
            assert!(is_homology_sphere(&r.start_homology, d));
        }
    }

    #[test]
    fn first_stage_is_empty_on_the_base_case() {
        let ctx = MorseContext::new(4, 2, &sv(&[2, 1]), MatchingRules::default(), &Caps::default()).unwrap();
        let m = ctx.build_mu1(ctx.complex());
        assert!(m.h.is_empty() && m.matching.is_empty());
    }

    #[test]
    fn literal_rules_fail_with_a_witness() {
        let r = theorem8_verify(5, 2, &sv(&[2, 1]), MatchingRules::as_written(), &Caps::default()).unwrap();
        assert!(!r.ok);
        let failed = r.stages.iter().find(|s| !s.ok).expect("a failing stage");
        assert_eq!(failed.stage, Stage::Mu2);
        assert!(failed.failure.is_some());
    }

    #[test]
    fn rejects_parameters_outside_the_statement() {
        let caps = Caps::default();
        assert!(MorseContext::new(5, 2, &sv(&[2, 2]), MatchingRules::default(), &caps).is_err());
        assert!(MorseContext::new(3, 2, &sv(&[2, 1]), MatchingRules::default(), &caps).is_err());
    }
}
