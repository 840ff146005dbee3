use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use kneser_topo::complexes::neighborhood_complex;
use kneser_topo::homology::{is_homology_sphere, reduced_homology};
use kneser_topo::kneser::{build_graph, chromatic_number_exact};
use kneser_topo::morse::{theorem8_verify, MatchingRules};
use kneser_topo::order_homotopy::{lemma5_verify, suspension_check, theorem7_base_case, theorem7_operator_chain_all};
use kneser_topo::stable_sets::StabilityVector;
use kneser_topo::{Caps, Error, Result};

use crate::args::GridArgs;
use crate::output::Output;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "capped")]
    Capped,
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl Verdict {
    fn of<T>(r: Result<T>, ok: impl Fn(&T) -> bool) -> Result<Verdict> {
        match r {
            Ok(v) => Ok(if ok(&v) { Verdict::Pass } else { Verdict::Fail }),
            Err(e) if e.is_resource() => Ok(Verdict::Capped),
            Err(e) => Err(e),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Capped => "capped",
            Verdict::NotApplicable => "n/a",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GridRow {
    pub n: u32,
    pub k: usize,
    pub s: StabilityVector,
    pub num_vertices: usize,
    pub num_edges: usize,
    /// `None` when the graph is over the vertex budget.
    pub chi_exact: Option<u32>,
    /// `None` outside the theorem regime: no formula asserted.
    pub chi_formula: Option<u32>,
    pub chi_match: Option<bool>,
    pub sphere_dim_expected: Option<i64>,
    pub sphere_verified: Verdict,
    pub lemma5: Verdict,
    pub thm7: Verdict,
    pub thm8: Verdict,
}

impl GridRow {
    fn failed(&self) -> bool {
        self.chi_match == Some(false)
            || [self.sphere_verified, self.lemma5, self.thm7, self.thm8].contains(&Verdict::Fail)
    }

    fn csv(&self) -> Vec<String> {
        let opt = |v: Option<String>, none: &str| v.unwrap_or_else(|| none.to_string());
        vec![
            self.n.to_string(),
            self.k.to_string(),
            self.s.entries().iter().map(u32::to_string).collect::<Vec<_>>().join(","),
            self.num_vertices.to_string(),
            self.num_edges.to_string(),
            opt(self.chi_exact.map(|c| c.to_string()), "capped"),
            opt(self.chi_formula.map(|c| c.to_string()), "no formula asserted"),
            opt(self.chi_match.map(|c| c.to_string()), "n/a"),
            opt(self.sphere_dim_expected.map(|c| c.to_string()), "n/a"),
            self.sphere_verified.label().into(),
            self.lemma5.label().into(),
            self.thm7.label().into(),
            self.thm8.label().into(),
        ]
    }
}

pub const COLUMNS: [&str; 13] = [
    "n",
    "k",
    "s",
    "num_vertices",
    "num_edges",
    "chi_exact",
    "chi_formula",
    "chi_match",
    "sphere_dim_expected",
    "sphere_verified",
    "lemma5",
    "thm7",
    "thm8",
];

/// `a..b` inclusive, or a single number. `b < a` gives an empty range.
pub fn parse_range(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::param(format!("bad range `{text}`; expected `a..b` or a number"));
    match text.split_once("..") {
        Some((a, b)) => {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            Ok((a..=b).collect())
        }
        None => Ok(vec![text.trim().parse().map_err(|_| bad())?]),
    }
}

fn vectors(k: usize, max: u32) -> Vec<StabilityVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (1..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|v| StabilityVector::new(v).expect("entries positive")).collect()
}

fn instances(args: &GridArgs) -> Result<Vec<(u32, usize, StabilityVector)>> {
    let ns = parse_range(&args.n)?;
    let ks: Vec<usize> = parse_range(&args.k)?.into_iter().map(|k| k as usize).collect();
    let given: Vec<StabilityVector> = args.s.iter().map(|s| StabilityVector::parse(s)).collect::<Result<_>>()?;
    if let Some(s) = given.iter().find(|s| !ks.contains(&s.k())) {
        return Err(Error::param(format!("--s {s} has length {} outside the k range {}", s.k(), args.k)));
    }
    if args.s_max == 0 {
        return Err(Error::param("--s-max must be positive"));
    }
    let mut out = Vec::new();
    for &n in &ns {
        for &k in &ks {
            if k == 0 || n < k as u32 {
                continue;
            }
            let ss = if given.is_empty() {
                vectors(k, args.s_max)
            } else {
                given.iter().filter(|s| s.k() == k).cloned().collect()
            };
            out.extend(ss.into_iter().map(|s| (n, k, s)));
        }
    }
    Ok(out)
}

fn row(n: u32, k: usize, s: &StabilityVector, caps: &Caps) -> Result<GridRow> {
    let t = Instant::now();
    let g = build_graph(n, k, s)?;
    let regime = s.in_theorem_regime(n);
    let chi_exact = match chromatic_number_exact(&g, caps.vertex_budget) {
        Ok(r) => Some(r.chi),
        Err(e) if e.is_resource() => None,
        Err(e) => return Err(e),
    };
    let chi_formula = s.chromatic_formula(n);
    let chi_match = chi_formula.zip(chi_exact).map(|(f, c)| f == c);
    let sphere_dim_expected = s.sphere_dimension(n);
    let sphere_verified = match sphere_dim_expected {
        Some(d) => Verdict::of(
            neighborhood_complex(&g, caps).and_then(|c| reduced_homology(&c, caps)),
            |h| is_homology_sphere(h, d),
        )?,
        None => Verdict::NotApplicable,
    };
    let lemma5 = if g.num_vertices() > caps.vertex_budget.min(64) {
        Verdict::Capped
    } else {
        Verdict::of(lemma5_verify(n, k, s, caps), |r| r.ok)?
    };
    let last_one = regime && s.last() == 1;
    let thm7 = if !last_one {
        Verdict::NotApplicable
    } else if n == s.head_sum() + 2 {
        Verdict::of(theorem7_base_case(k, s, caps), |r| r.ok)?
    } else {
        let chain = Verdict::of(theorem7_operator_chain_all(n, k, s, caps), |v| v.iter().all(|r| r.ok))?;
        let susp = Verdict::of(suspension_check(n, k, s, caps), |r| r.ok)?;
        combine(chain, susp)
    };
    let thm8 = if last_one {
        Verdict::of(theorem8_verify(n, k, s, MatchingRules::default(), caps), |r| r.ok)?
    } else {
        Verdict::NotApplicable
    };
    eprintln!("grid: n={n} k={k} s={s} done in {:.2?}", t.elapsed());
    Ok(GridRow {
        n,
        k,
        s: s.clone(),
        num_vertices: g.num_vertices(),
        num_edges: g.num_edges(),
        chi_exact,
        chi_formula,
        chi_match,
        sphere_dim_expected,
        sphere_verified,
        lemma5,
        thm7,
        thm8,
    })
}

fn combine(a: Verdict, b: Verdict) -> Verdict {
    use Verdict::*;
    match (a, b) {
        (Fail, _) | (_, Fail) => Fail,
        (Capped, _) | (_, Capped) => Capped,
        _ => Pass,
    }
}

pub fn grid(args: &GridArgs, caps: &Caps, jobs: usize) -> Result<Output> {
    let todo = instances(args)?;
    eprintln!("grid: {} instances on {} threads", todo.len(), jobs.max(1));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::param(format!("cannot start {jobs} threads: {e}")))?;
    let mut rows: Vec<GridRow> = pool.install(|| {
        todo.par_iter()
            .map(|(n, k, s)| row(*n, *k, s, caps))
            .collect::<Result<_>>()
    })?;
    rows.sort_by(|a, b| (a.n, a.k, &a.s).cmp(&(b.n, b.k, &b.s)));
    let failed = rows.iter().any(GridRow::failed);
    let csv_rows = rows.iter().map(GridRow::csv).collect();
    Ok(Output {
        json: json!({ "columns": COLUMNS, "rows": rows, "pass": !failed }),
        header: COLUMNS.iter().map(|c| c.to_string()).collect(),
        rows: csv_rows,
        exit_code: i32::from(failed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4..6").unwrap(), vec![4, 5, 6]);
        assert_eq!(parse_range("7").unwrap(), vec![7]);
        assert!(parse_range("5..4").unwrap().is_empty());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn vector_enumeration() {
        let v = vectors(2, 3);
        assert_eq!(v.len(), 9);
        assert_eq!(v[0].entries(), &[1, 1]);
        assert_eq!(v[8].entries(), &[3, 3]);
    }
}
