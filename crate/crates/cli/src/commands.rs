use serde::Serialize;
use serde_json::json;

use kneser_topo::complexes::{build_hom_poset, build_pair_poset, neighborhood_complex, order_complex};
use kneser_topo::homology::{is_homology_sphere, reduced_homology, HomologyReport};
use kneser_topo::kneser::{
    build_graph, canonical_coloring, chromatic_number_exact, corollary10_check, verify_coloring, ChromaticSummary,
    GraphParams,
};
use kneser_topo::morse::{theorem8_verify, MatchingRules};
use kneser_topo::order_homotopy::{lemma5_verify, suspension_check, theorem7_base_case, theorem7_operator_chain_all};
use kneser_topo::stable_sets::{enumerate_stable, StabilityVector};
use kneser_topo::{Caps, Error, Result};

use crate::args::{Instance, Rules, Target};
use crate::output::{join, Check, Output, VerificationReport};

pub struct Resolved {
    pub n: u32,
    pub k: usize,
    pub s: StabilityVector,
}

impl Resolved {
    pub fn params(&self) -> GraphParams {
        GraphParams {
            n: self.n,
            k: self.k,
            s: self.s.clone(),
        }
    }
}

pub fn resolve(i: &Instance) -> Result<Resolved> {
    let s = StabilityVector::parse(&i.s)?;
    if s.k() != i.k {
        return Err(Error::param(format!("--s has {} entries but --k is {}", s.k(), i.k)));
    }
    if i.n < i.k as u32 {
        return Err(Error::param(format!("need n >= k, got n = {}, k = {}", i.n, i.k)));
    }
    Ok(Resolved { n: i.n, k: i.k, s })
}

fn warn_outside_regime(r: &Resolved) {
    if !r.s.in_theorem_regime(r.n) {
        eprintln!(
            "warning: ({}, {}, {}) is outside the regime k >= 2, s_i >= 2 for i < k, s_k in {{1,2}}, n >= Σ + 2; no formula is asserted",
            r.n, r.k, r.s
        );
    }
}

fn require_regime(r: &Resolved) -> Result<()> {
    if r.s.in_theorem_regime(r.n) {
        Ok(())
    } else {
        Err(Error::param(format!(
            "({}, {}, {}) is outside the regime k >= 2, s_i >= 2 for i < k, s_k in {{1,2}}, n >= Σ + 2",
            r.n, r.k, r.s
        )))
    }
}

pub fn enumerate(i: &Instance) -> Result<Output> {
    let r = resolve(i)?;
    warn_outside_regime(&r);
    let sets = enumerate_stable(r.n, r.k, &r.s)?;
    eprintln!("{} sets", sets.len());
    let rows = sets
        .iter()
        .enumerate()
        .map(|(idx, a)| vec![idx.to_string(), join(a.elements())])
        .collect();
    Ok(Output::info(
        json!({ "params": r.params(), "count": sets.len(), "sets": sets }),
        &["index", "elements"],
        rows,
    ))
}

pub fn graph(i: &Instance) -> Result<Output> {
    let r = resolve(i)?;
    warn_outside_regime(&r);
    let g = build_graph(r.n, r.k, &r.s)?;
    eprintln!("{} vertices, {} edges", g.num_vertices(), g.num_edges());
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let rows = edges
        .iter()
        .map(|&(u, v)| vec![u.to_string(), v.to_string(), join(g.vertices()[u].elements()), join(g.vertices()[v].elements())])
        .collect();
    Ok(Output::info(
        json!({
            "params": r.params(),
            "num_vertices": g.num_vertices(),
            "num_edges": g.num_edges(),
            "vertices": g.vertices(),
            "edges": edges,
        }),
        &["u", "v", "set_u", "set_v"],
        rows,
    ))
}

pub fn ncomplex(i: &Instance, caps: &Caps) -> Result<Output> {
    let r = resolve(i)?;
    warn_outside_regime(&r);
    let g = build_graph(r.n, r.k, &r.s)?;
    let c = neighborhood_complex(&g, caps)?;
    eprintln!("{} facets, f-vector {:?}", c.facets().len(), c.f_vector());
    let rows = c
        .facets()
        .iter()
        .map(|f| vec![f.dim().to_string(), join(f.vertices())])
        .collect();
    Ok(Output::info(
        json!({
            "params": r.params(),
            "vertex_sets": g.vertices(),
            "f_vector": c.f_vector(),
            "complex": c.to_json(),
        }),
        &["dim", "facet"],
        rows,
    ))
}

pub fn pair_poset(i: &Instance, caps: &Caps) -> Result<Output> {
    let r = resolve(i)?;
    warn_outside_regime(&r);
    let p = build_pair_poset(r.n, r.k, &r.s, caps)?;
    let chains = p.chain_count();
    eprintln!("{} elements, {} chains", p.len(), chains);
    let rows = p
        .elements()
        .iter()
        .enumerate()
        .map(|(id, e)| vec![id.to_string(), join(&e.a_elements()), join(&e.b_elements())])
        .collect();
    Ok(Output::info(
        json!({
            "params": r.params(),
            "size": p.len(),
            "chain_count": chains.to_string(),
            "poset": p.to_json(),
        }),
        &["id", "a", "b"],
        rows,
    ))
}

pub fn homology(i: &Instance, target: Target, unreduced: bool, caps: &Caps) -> Result<Output> {
    let r = resolve(i)?;
    warn_outside_regime(&r);
    let (name, report) = match target {
        Target::Ncomplex => {
            let g = build_graph(r.n, r.k, &r.s)?;
            ("ncomplex", reduced_homology(&neighborhood_complex(&g, caps)?, caps)?)
        }
        Target::PairPoset => {
            let p = build_pair_poset(r.n, r.k, &r.s, caps)?;
            ("pair-poset", reduced_homology(&order_complex(&p, caps)?, caps)?)
        }
        Target::HomPoset => {
            let g = build_graph(r.n, r.k, &r.s)?;
            if g.num_vertices() > caps.vertex_budget {
                return Err(Error::Resource {
                    what: "graph vertices for the Hom-poset",
                    count: g.num_vertices(),
                    cap: caps.vertex_budget,
                });
            }
            let p = build_hom_poset(&g, caps)?;
            ("hom-poset", reduced_homology(&order_complex(&p, caps)?, caps)?)
        }
    };
    eprintln!("reduced betti {:?}, sphere_dim {:?}", report.nonzero_betti(), report.sphere_dim);
    let mut rows: Vec<Vec<String>> = report
        .reduced_betti
        .iter()
        .map(|(d, b)| {
            let torsion = report
                .torsion
                .get(d)
                .map(|t| t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                .unwrap_or_default();
            vec![d.to_string(), b.to_string(), torsion]
        })
        .collect();
    rows.sort_by_key(|row| row[0].parse::<i64>().unwrap());
    let mut doc = json!({ "params": r.params(), "target": name, "homology": report });
    if unreduced {
        doc["unreduced_betti"] = json!(report.unreduced_betti());
    }
    Ok(Output::info(doc, &["dim", "reduced_betti", "torsion"], rows))
}

pub fn verify_theorem2(i: &Instance, caps: &Caps) -> Result<Output> {
    let r = resolve(i)?;
    require_regime(&r)?;
    let d = r.s.sphere_dimension(r.n).expect("regime checked");
    let g = build_graph(r.n, r.k, &r.s)?;
    let result = neighborhood_complex(&g, caps)
        .and_then(|c| reduced_homology(&c, caps))
        .map(|homology| SphereCheck { expected_dim: d, homology });
    let check = Check::from_result("neighborhood_complex_sphere", result, |x| is_homology_sphere(&x.homology, d))?;
    Ok(VerificationReport::new("verify-theorem2", r.params(), vec![check]).into_output())
}

#[derive(Serialize)]
struct SphereCheck {
    expected_dim: i64,
    homology: HomologyReport,
}

pub fn verify_theorem3(i: &Instance, caps: &Caps) -> Result<Output> {
    let r = resolve(i)?;
    require_regime(&r)?;
    let g = build_graph(r.n, r.k, &r.s)?;
    let formula = r.s.chromatic_formula(r.n).expect("regime checked");
    let result = chromatic_number_exact(&g, caps.vertex_budget);
    let summary = result.as_ref().ok().map(|res| ChromaticSummary::new(&g, res));
    let exact = Check::from_result("exact_chromatic_number", result, |res| {
        res.chi == formula
            && res.witness.proper
            && res.infeasibility.as_ref().map_or(false, |l| l.exhausted && l.colors + 1 == res.chi)
    })?;
    let colors: Vec<u32> = g
        .vertices()
        .iter()
        .map(|a| canonical_coloring(a, r.n, &r.s))
        .collect::<Result<_>>()?;
    let proper = verify_coloring(&g, &colors);
    let used = colors.iter().copied().max().unwrap_or(0);
    let canonical = Check::new(
        "canonical_coloring",
        proper && used <= formula,
        json!({ "proper": proper, "colors_used": used, "formula": formula, "colors": colors }),
    );
    let mut checks = vec![exact, canonical];
    if let Some(summary) = summary {
        checks.push(Check::new("summary", true, summary));
    }
    Ok(VerificationReport::new("verify-theorem3", r.params(), checks).into_output())
}

pub fn verify_proofs(i: &Instance, s_star: Option<&str>, rules: Rules, caps: &Caps) -> Result<Output> {
    let r = resolve(i)?;
    require_regime(&r)?;
    let last = r.s.last();
    if let Some(text) = s_star {
        let given = StabilityVector::parse(text)?;
        if given != r.s.with_last(2)? {
            return Err(Error::param(format!(
                "--s-star must be s with its last entry set to 2, i.e. {}",
                r.s.with_last(2)?
            )));
        }
    }
    let rules = match rules {
        Rules::Default => MatchingRules::default(),
        Rules::AsWritten => MatchingRules::as_written(),
    };
    let mut checks = Vec::new();
    eprintln!("comparing neighborhood complex, Hom-poset and pair poset");
    checks.push(Check::from_result("lemma5", lemma5_verify(r.n, r.k, &r.s, caps), |x| x.ok)?);
    if last == 1 {
        if r.n == r.s.head_sum() + 2 {
            checks.push(Check::from_result("theorem7_base_case", theorem7_base_case(r.k, &r.s, caps), |x| x.ok)?);
        } else {
            eprintln!("running operator chain and suspension checks");
            checks.push(Check::from_result(
                "theorem7_operator_chain",
                theorem7_operator_chain_all(r.n, r.k, &r.s, caps),
                |v| v.iter().all(|x| x.ok),
            )?);
            checks.push(Check::from_result("suspension", suspension_check(r.n, r.k, &r.s, caps), |x| x.ok)?);
        }
        eprintln!("running the Morse pipeline");
        checks.push(Check::from_result("theorem8", theorem8_verify(r.n, r.k, &r.s, rules, caps), |x| x.ok)?);
    }
    Ok(VerificationReport::new("verify-proofs", r.params(), checks).into_output())
}

pub fn corollary10(n: u32, k: usize, caps: &Caps) -> Result<Output> {
    let rep = corollary10_check(n, k, caps.vertex_budget)?;
    let checks = vec![
        Check::new("embedding", rep.embedding_holds, json!({ "sub_vertices": rep.sub_vertices, "three_stable_vertices": rep.three_stable_vertices })),
        match rep.bound_holds {
            Some(ok) => Check::new("bound", ok, &rep),
            None => Check {
                name: "bound".into(),
                status: crate::output::Status::Capped,
                report: serde_json::to_value(&rep).unwrap(),
            },
        },
    ];
    Ok(VerificationReport::new("corollary10", json!({ "n": n, "k": k }), checks).into_output())
}
