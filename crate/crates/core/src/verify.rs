//! Property grids behind `qlab verify`, and the criteria table behind
//! `qlab reproduce`.
//!
//! Every suite returns one [`Check`] per grid cell so failures carry the
//! parameters that produced them. Nothing here extrapolates: a passing
//! suite speaks only for the cells it lists.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::fi::{
    cone_certificate, generator_degree_check, homology_map_is_zero, homology_map_is_zero_with,
    BoundaryTest, Injection,
};
use crate::graph::{build_commuting_graph, build_kneser_graph, CycleBound, LabeledGraph};
use crate::homology::{
    reduced_h0_from_components, reduced_homology_basis, reduced_homology_with, HomologyGroup,
    HomologyOptions,
};
use crate::integer::Integer;
use crate::matrix::SparseIntMatrix;
use crate::perm::GroundSet;
use crate::simplicial::{clique_complex_with_budget, CliqueComplex};
use crate::snf::{smith_normal_form, smith_normal_form_with_budget, Budget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    FiTorsion,
    Cone,
    GeneratorDegree,
    Snf,
    TheoremA,
    KneserAcyclicity,
    Dimension,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::FiTorsion,
        Suite::Cone,
        Suite::GeneratorDegree,
        Suite::Snf,
        Suite::TheoremA,
        Suite::KneserAcyclicity,
        Suite::Dimension,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FiTorsion => "fi-torsion",
            Suite::Cone => "cone",
            Suite::GeneratorDegree => "generator-degree",
            Suite::Snf => "snf",
            Suite::TheoremA => "theorem-a",
            Suite::KneserAcyclicity => "kneser-acyclicity",
            Suite::Dimension => "dimension",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// Restrictions on a suite's default grid. `None` keeps the default range.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub p: Option<usize>,
    pub a: Option<usize>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub k: Option<usize>,
    pub trials: usize,
    pub size: usize,
    pub seed: u64,
    pub budget: Budget,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            p: None,
            a: None,
            n: None,
            n_max: None,
            k: None,
            trials: 200,
            size: 5,
            seed: 42,
            budget: Budget::default(),
        }
    }
}

impl SuiteOptions {
    fn ps(&self) -> Vec<usize> {
        self.p.map_or(vec![2, 3], |p| vec![p])
    }

    fn bounds(&self) -> Vec<usize> {
        self.a.map_or(vec![1, 2], |a| vec![a])
    }
}

/// Outcome of one grid cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    fn new(label: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            label: label.into(),
            ok,
            detail: detail.into(),
        }
    }

    fn from_result(label: String, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((ok, detail)) => Check::new(label, ok, detail),
            Err(e) => Check::new(label, false, format!("error: {e}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "passed": self.passed(),
            "cells": self.checks.len(),
            "failures": self.failures().collect::<Vec<_>>(),
            "elapsed_ms": self.elapsed.as_millis() as u64,
            "scope": "within computed range",
        })
    }
}

fn commuting_graph(n: usize, p: usize, a: usize) -> Result<Arc<LabeledGraph>> {
    Ok(Arc::new(build_commuting_graph(
        &GroundSet::range(n),
        p,
        CycleBound::AtMost(a),
    )?))
}

fn commuting(
    n: usize,
    p: usize,
    a: usize,
    max_dim: usize,
    budget: Budget,
) -> Result<CliqueComplex> {
    clique_complex_with_budget(commuting_graph(n, p, a)?, max_dim, budget)
}

fn homology_upto(cx: &CliqueComplex, k: usize, budget: Budget) -> Result<Vec<HomologyGroup>> {
    let opts = HomologyOptions {
        reduce_segment: true,
        budget,
    };
    (0..=k)
        .map(|t| reduced_homology_with(cx, t, opts))
        .collect()
}

fn render_groups(groups: &[HomologyGroup]) -> String {
    groups
        .iter()
        .enumerate()
        .map(|(t, g)| format!("H̃_{t} = {g}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = match suite {
        Suite::FiTorsion => fi_torsion(opts),
        Suite::Cone => cone(opts),
        Suite::GeneratorDegree => generator_degree(opts),
        Suite::Snf => snf_oracle(opts),
        Suite::TheoremA => theorem_a(opts),
        Suite::KneserAcyclicity => kneser_acyclicity(opts),
        Suite::Dimension => dimension(opts),
    }?;
    Ok(SuiteReport {
        suite,
        checks,
        elapsed: start.elapsed(),
    })
}

/// Source and target sizes with `|S| <= s_max`, `|T| <= t_max`, `|T| - |S| >= p`.
fn injection_grid(p: usize, s_max: usize, t_max: usize) -> Vec<(usize, usize)> {
    (1..=s_max)
        .flat_map(|s| (s + p..=t_max).map(move |t| (s, t)))
        .collect()
}

fn fi_torsion(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let ks: Vec<usize> = opts.k.map_or(vec![0, 1], |k| vec![k]);
    let (s_max, t_max) = (opts.n.unwrap_or(7), opts.n_max.unwrap_or(9));
    // one group per target complex; its boundary factorization is shared
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut groups = Vec::new();
    for p in opts.ps() {
        for a in opts.bounds() {
            for &k in &ks {
                for t in p + 1..=t_max {
                    let sources: Vec<(usize, Injection)> = (1..=s_max.min(t - p))
                        .map(|s| {
                            let random = Injection::random(
                                GroundSet::range(s),
                                GroundSet::range(t),
                                &mut rng,
                            )
                            .expect("s <= t");
                            (s, random)
                        })
                        .collect();
                    groups.push((p, a, k, t, sources));
                }
            }
        }
    }
    let per_group: Vec<Vec<Check>> = groups
        .into_par_iter()
        .map(|(p, a, k, t, sources)| {
            let target = match commuting(t, p, a, k, opts.budget) {
                Ok(cx) => cx,
                Err(e) => {
                    return vec![Check::new(
                        format!("p={p} a={a} |T|={t} k={k}"),
                        false,
                        format!("error: {e}"),
                    )];
                }
            };
            let test = BoundaryTest::new(&target, k).expect("target stores degree k");
            let mut checks = Vec::new();
            for (s, random) in sources {
                let prepared = commuting(s, p, a, k, opts.budget)
                    .and_then(|cx| reduced_homology_basis(&cx, k).map(|basis| (cx, basis)))
                    .map_err(|e| e.to_string());
                let inclusion =
                    Injection::inclusion(GroundSet::range(s), GroundSet::range(t)).expect("s <= t");
                for (how, j) in [("inclusion", inclusion), ("random", random)] {
                    let label = format!("p={p} a={a} |S|={s} |T|={t} k={k} {how}");
                    let r = match &prepared {
                        Ok((cx, basis)) => homology_map_is_zero_with(&j, cx, basis, &test)
                            .map(|m| (m.is_zero, format!("source H̃_{k} = {}", m.source_group))),
                        Err(e) => Ok((false, format!("error: {e}"))),
                    };
                    checks.push(Check::from_result(label, r));
                }
            }
            checks
        })
        .collect();
    Ok(per_group.into_iter().flatten().collect())
}

fn cone(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let (s_max, t_max) = (opts.n.unwrap_or(7), opts.n_max.unwrap_or(9));
    let max_dim = opts.k;
    let mut cells = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for p in opts.ps() {
        for a in opts.bounds() {
            for (s, t) in injection_grid(p, s_max, t_max) {
                let random = Injection::random(GroundSet::range(s), GroundSet::range(t), &mut rng)
                    .expect("s <= t");
                cells.push((p, a, s, t, random));
            }
        }
    }
    Ok(cells
        .into_par_iter()
        .flat_map_iter(|(p, a, s, t, random)| {
            let inclusion =
                Injection::inclusion(GroundSet::range(s), GroundSet::range(t)).expect("s <= t");
            [("inclusion", inclusion), ("random", random)]
                .into_iter()
                .map(move |(how, j)| {
                    let label = format!("p={p} a={a} |S|={s} |T|={t} {how}");
                    let r = (|| {
                        let graph = commuting_graph(s, p, a)?;
                        // the whole complex unless a cap was requested
                        let dim =
                            max_dim.unwrap_or_else(|| graph.max_clique().len().saturating_sub(1));
                        let source = clique_complex_with_budget(graph, dim, opts.budget)?;
                        let cert = cone_certificate(&j, &source, p, a)?;
                        let detail = match &cert.failure {
                            None => {
                                format!("σ = {}, {} simplices", cert.sigma, cert.simplices_checked)
                            }
                            Some((k, s)) => {
                                format!("σ = {} fails on {k}-simplex {s:?}", cert.sigma)
                            }
                        };
                        Ok((cert.ok, detail))
                    })();
                    Check::from_result(label, r)
                })
        })
        .collect())
}

fn generator_degree(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let n_max = opts.n_max.or(opts.n).unwrap_or(10);
    let n_min = opts.n.unwrap_or(1);
    let k_max = opts.k.unwrap_or(2);
    let mut cells = Vec::new();
    for p in opts.ps() {
        for a in opts.bounds() {
            for n in n_min..=n_max {
                cells.push((p, a, n));
            }
        }
    }
    Ok(cells
        .into_par_iter()
        .flat_map_iter(|(p, a, n)| {
            let built = commuting(n, p, a, k_max, opts.budget);
            (0..=k_max).map(move |k| {
                let label = format!("p={p} a={a} n={n} k={k}");
                match &built {
                    Ok(cx) => {
                        let r = generator_degree_check(cx, k, p, a);
                        let detail = if r.vacuous {
                            "no simplices".to_string()
                        } else {
                            format!(
                                "max support {} <= {} over {} simplices",
                                r.max_support, r.bound, r.simplices_checked
                            )
                        };
                        Check::new(label, r.ok, detail)
                    }
                    Err(e) => Check::new(label, false, format!("error: {e}")),
                }
            })
        })
        .collect())
}

/// Determinant by fraction-free elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// `k x k` minors and the `k`-th factor is `d_k / d_{k-1}`.
pub fn determinantal_invariant_factors(a: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut factors = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=rows.min(cols) {
        let mut d = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| BigInt::from(a[r][c])).collect())
                    .collect();
                d = d.gcd(&bareiss_determinant(minor));
            }
        }
        if d.is_zero() {
            break;
        }
        factors.push(&d / &prev);
        prev = d;
    }
    factors
}

fn dense_big(m: &SparseIntMatrix) -> Vec<Vec<BigInt>> {
    let mut d = vec![vec![BigInt::zero(); m.n_cols()]; m.n_rows()];
    for (r, c, v) in m.triplets() {
        d[r][c] = v.to_big();
    }
    d
}

/// Checks `U·A·V = D` with `D` the Smith form padded to `A`'s shape and
/// `det U`, `det V` equal to `±1`.
pub fn check_snf_transforms(a: &SparseIntMatrix) -> Result<(bool, String)> {
    let snf = smith_normal_form(a, true)?;
    let t = snf.transforms.as_ref().expect("requested");
    let (u, v) = (t.u_matrix(), t.v_matrix());
    let uav = u.mul(a)?.mul(&v)?;
    let diag = snf
        .invariant_factors
        .iter()
        .enumerate()
        .map(|(i, d)| (i, i, d.clone()));
    let d = SparseIntMatrix::from_triplets(a.n_rows(), a.n_cols(), diag)?;
    let det_u = bareiss_determinant(dense_big(&u));
    let det_v = bareiss_determinant(dense_big(&v));
    let unimodular = det_u.abs() == BigInt::from(1) && det_v.abs() == BigInt::from(1);
    let chain = snf
        .invariant_factors
        .windows(2)
        .all(|w| w[0].divides(&w[1]));
    let ok = uav == d && unimodular && chain;
    Ok((
        ok,
        format!(
            "UAV=D {} det U = {det_u} det V = {det_v} chain {chain}",
            uav == d
        ),
    ))
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, range: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-range..=range)).collect())
        .collect()
}

fn snf_oracle(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let matrices: Vec<Vec<Vec<i64>>> = (0..opts.trials)
        .map(|_| random_matrix(&mut rng, opts.size, opts.size, 9))
        .collect();
    Ok(matrices
        .into_par_iter()
        .enumerate()
        .map(|(i, dense)| {
            let r = (|| {
                let a = SparseIntMatrix::from_dense(&dense);
                let ours: Vec<BigInt> = smith_normal_form(&a, false)?
                    .invariant_factors
                    .iter()
                    .map(Integer::to_big)
                    .collect();
                let oracle = determinantal_invariant_factors(&dense);
                let (transforms_ok, detail) = check_snf_transforms(&a)?;
                let agree = ours == oracle;
                let detail = if agree {
                    detail
                } else {
                    format!("matrix {dense:?}: ours {ours:?}, oracle {oracle:?}")
                };
                Ok((agree && transforms_ok, detail))
            })();
            Check::from_result(
                format!("trial {i} seed={} size={}", opts.seed, opts.size),
                r,
            )
        })
        .collect())
}

/// Smallest `n` covered by the acyclicity bound `n >= 2(k+2)ap - 1`.
pub fn theorem_a_bound(p: usize, a: usize, k: usize) -> usize {
    2 * (k + 2) * a * p - 1
}

/// H̃_t for `t <= k`; degree 0 by component count, higher degrees by Smith
/// forms on a complex capped at `k`.
fn vanishing_upto(
    graph: Arc<LabeledGraph>,
    k: usize,
    budget: Budget,
) -> Result<Vec<HomologyGroup>> {
    let mut groups = vec![reduced_h0_from_components(&graph)];
    if k >= 1 {
        let cx = clique_complex_with_budget(graph, k, budget)?;
        let opts = HomologyOptions {
            reduce_segment: true,
            budget,
        };
        for t in 1..=k {
            groups.push(reduced_homology_with(&cx, t, opts)?);
        }
    }
    Ok(groups)
}

fn theorem_a(opts: &SuiteOptions) -> Result<Vec<Check>> {
    // (p, a, k, extra sizes past the bound)
    let defaults = [(2, 1, 0, 2), (3, 1, 0, 0), (2, 2, 0, 0), (2, 1, 1, 0)];
    let mut cells = Vec::new();
    for (p, a, k, extra) in defaults {
        if opts.p.is_some_and(|x| x != p)
            || opts.a.is_some_and(|x| x != a)
            || opts.k.is_some_and(|x| x != k)
        {
            continue;
        }
        let bound = theorem_a_bound(p, a, k);
        let top = opts.n_max.unwrap_or(bound + extra);
        for n in opts.n.unwrap_or(bound).max(bound)..=top {
            cells.push((p, a, k, n));
        }
    }
    if cells.is_empty() {
        if let (Some(p), Some(a), Some(k)) = (opts.p, opts.a, opts.k) {
            let bound = theorem_a_bound(p, a, k);
            for n in opts.n.unwrap_or(bound).max(bound)..=opts.n_max.unwrap_or(bound) {
                cells.push((p, a, k, n));
            }
        }
    }
    Ok(cells
        .into_par_iter()
        .map(|(p, a, k, n)| {
            let r = (|| {
                let groups = vanishing_upto(commuting_graph(n, p, a)?, k, opts.budget)?;
                Ok((
                    groups.iter().all(HomologyGroup::is_zero),
                    render_groups(&groups),
                ))
            })();
            Check::from_result(format!("p={p} a={a} k={k} n={n}"), r)
        })
        .collect())
}

/// Smallest ground-set size covered by `|S| >= (k+2)p + k + 1`.
pub fn kneser_bound(p: usize, k: usize) -> usize {
    (k + 2) * p + k + 1
}

fn kneser_acyclicity(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let defaults = [(2, 0, 2), (3, 0, 2), (2, 1, 1), (3, 1, 0)];
    let mut cells = Vec::new();
    for (p, k, extra) in defaults {
        if opts.p.is_some_and(|x| x != p) || opts.k.is_some_and(|x| x != k) {
            continue;
        }
        let bound = kneser_bound(p, k);
        for n in opts.n.unwrap_or(bound).max(bound)..=opts.n_max.unwrap_or(bound + extra) {
            cells.push((p, k, n));
        }
    }
    if cells.is_empty() {
        if let (Some(p), Some(k)) = (opts.p, opts.k) {
            let bound = kneser_bound(p, k);
            for n in opts.n.unwrap_or(bound).max(bound)..=opts.n_max.unwrap_or(bound) {
                cells.push((p, k, n));
            }
        }
    }
    Ok(cells
        .into_par_iter()
        .map(|(p, k, n)| {
            let r = (|| {
                let graph = Arc::new(build_kneser_graph(&GroundSet::range(n), p)?);
                let groups = vanishing_upto(graph, k, opts.budget)?;
                Ok((
                    groups.iter().all(HomologyGroup::is_zero),
                    render_groups(&groups),
                ))
            })();
            Check::from_result(format!("M_{p}({n}) k={k}"), r)
        })
        .collect())
}

fn dimension(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let n_max = opts.n_max.or(opts.n).unwrap_or(10);
    let n_min = opts.n.unwrap_or(1);
    let mut cells = Vec::new();
    for p in opts.ps() {
        for a in opts.bounds() {
            for n in n_min..=n_max {
                cells.push((p, a, n));
            }
        }
    }
    Ok(cells
        .into_par_iter()
        .map(|(p, a, n)| {
            let r = (|| {
                let graph = commuting_graph(n, p, a)?;
                let clique = graph.max_clique();
                let expected = n / p;
                let detail = if clique.len() == expected {
                    format!("dimension {}", expected as i64 - 1)
                } else {
                    let shown: Vec<String> = clique
                        .iter()
                        .map(|&v| graph.vertices()[v as usize].to_string())
                        .collect();
                    format!(
                        "dimension {} (clique {{{}}}) but floor(n/p) - 1 = {}",
                        clique.len() as i64 - 1,
                        shown.join(", "),
                        expected as i64 - 1
                    )
                };
                Ok((clique.len() == expected, detail))
            })();
            Check::from_result(format!("p={p} a={a} n={n}"), r)
        })
        .collect())
}

/// Reduced Euler characteristic of the stored chain groups against the
/// homology it carries. With the complex cut off at `d`, the identity reads
/// `Σ_{k=-1}^{d} (-1)^k c_k = Σ_{k=0}^{d} (-1)^k b_k + (-1)^d rank ∂_{d+1}`.
pub fn euler_consistent(cx: &CliqueComplex, budget: Budget) -> Result<bool> {
    let d = cx.max_dim();
    let mut lhs: i64 = -1;
    for k in 0..=d {
        lhs += sign(k) * cx.simplices(k).len() as i64;
    }
    let groups = homology_upto(cx, d, budget)?;
    let mut rhs: i64 = groups
        .iter()
        .enumerate()
        .map(|(k, g)| sign(k) * g.betti as i64)
        .sum();
    let top = smith_normal_form_with_budget(&cx.boundary_matrix(d + 1, true)?, false, budget)?;
    rhs += sign(d) * top.rank() as i64;
    Ok(lhs == rhs)
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `∂_{k} ∘ ∂_{k+1} = 0` for every stored pair, augmentation included.
pub fn boundary_squares_vanish(cx: &CliqueComplex) -> Result<bool> {
    for k in 0..cx.top_stored_dim() {
        if !cx
            .boundary_matrix(k, true)?
            .mul(&cx.boundary_matrix(k + 1, true)?)?
            .is_zero()
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Where complexes come from during a reproduction run.
pub struct Workspace {
    pub cache: Option<Cache>,
    pub budget: Budget,
}

impl Workspace {
    pub fn new(cache: Option<Cache>, budget: Budget) -> Self {
        Workspace { cache, budget }
    }

    pub fn complex(&self, graph: Arc<LabeledGraph>, max_dim: usize) -> Result<CliqueComplex> {
        match &self.cache {
            Some(cache) => Ok(cache.complex(graph, max_dim, self.budget)?.0),
            None => clique_complex_with_budget(graph, max_dim, self.budget),
        }
    }

    pub fn commuting(&self, n: usize, p: usize, a: usize, max_dim: usize) -> Result<CliqueComplex> {
        self.complex(commuting_graph(n, p, a)?, max_dim)
    }

    pub fn kneser(&self, n: usize, p: usize, max_dim: usize) -> Result<CliqueComplex> {
        self.complex(
            Arc::new(build_kneser_graph(&GroundSet::range(n), p)?),
            max_dim,
        )
    }

    /// `H̃_k` from (possibly cached) boundary matrices.
    pub fn reduced_homology(&self, cx: &CliqueComplex, k: usize) -> Result<HomologyGroup> {
        let Some(cache) = &self.cache else {
            return reduced_homology_with(
                cx,
                k,
                HomologyOptions {
                    reduce_segment: true,
                    budget: self.budget,
                },
            );
        };
        let (bk, _) = cache.boundary(cx, k, true)?;
        let (bk1, _) = cache.boundary(cx, k + 1, true)?;
        crate::homology::homology_with(
            cx.simplices(k).len(),
            &bk,
            &bk1,
            HomologyOptions {
                reduce_segment: true,
                budget: self.budget,
            },
        )
    }
}

/// One row of the criteria table.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub ok: bool,
    pub detail: String,
    pub elapsed_ms: u64,
    pub limit_ms: Option<u64>,
}

type CriterionFn = fn(&Workspace) -> Result<(bool, String)>;

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub limit: Option<Duration>,
    run: CriterionFn,
}

impl Criterion {
    pub fn run(&self, ws: &Workspace) -> CriterionReport {
        let start = Instant::now();
        let outcome = (self.run)(ws);
        let elapsed = start.elapsed();
        let (mut ok, mut detail) = match outcome {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if let Some(limit) = self.limit {
            if elapsed > limit {
                ok = false;
                detail = format!("{detail}; took {elapsed:?}, limit {limit:?}");
            }
        }
        CriterionReport {
            id: self.id,
            title: self.title,
            ok,
            detail,
            elapsed_ms: elapsed.as_millis() as u64,
            limit_ms: self.limit.map(|l| l.as_millis() as u64),
        }
    }
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "H̃_0(Δ_2(Σ_4,1)) = Z^2",
            limit: secs(1),
            run: c1,
        },
        Criterion {
            id: 2,
            title: "H̃_1(Δ_2(Σ_7,1)) = Z/3 and H̃_0 = 0",
            limit: secs(10),
            run: c2,
        },
        Criterion {
            id: 3,
            title: "H̃_1(Δ_2(Σ_5,1)) = Z^6",
            limit: secs(1),
            run: c3,
        },
        Criterion {
            id: 4,
            title: "connected for 2p+1 <= n <= 2p+4, not at Σ_4",
            limit: secs(30),
            run: c4,
        },
        Criterion {
            id: 5,
            title: "H̃_0 = 0 for Δ_2(Σ_7,1) and Δ_2(Σ_15,2)",
            limit: secs(120),
            run: c5,
        },
        Criterion {
            id: 6,
            title: "H̃_0 = H̃_1 = 0 for Δ_2(Σ_11,1)",
            limit: secs(900),
            run: c6,
        },
        Criterion {
            id: 7,
            title: "H̃_1(Δ_2(Σ_8,1)) = 0",
            limit: secs(60),
            run: c7,
        },
        Criterion {
            id: 8,
            title: "injection-induced maps vanish; cone certificates hold",
            limit: secs(300),
            run: c8,
        },
        Criterion {
            id: 9,
            title: "k-simplex supports have size <= (k+1)ap",
            limit: secs(120),
            run: c9,
        },
        Criterion {
            id: 10,
            title: "Δ_p(Σ_n,a) has dimension floor(n/p) - 1",
            limit: None,
            run: c10,
        },
        Criterion {
            id: 11,
            title: "H̃_0(M_3(7)) = 0 and H̃_t(M_2(8)) = 0 for t <= 1",
            limit: secs(120),
            run: c11,
        },
        Criterion {
            id: 12,
            title: "property suites",
            limit: None,
            run: c12,
        },
    ]
}

pub fn run_criteria(ws: &Workspace, ids: Option<&[u32]>) -> Vec<CriterionReport> {
    criteria()
        .iter()
        .filter(|c| ids.map_or(true, |ids| ids.contains(&c.id)))
        .map(|c| c.run(ws))
        .collect()
}

fn expect_group(
    ws: &Workspace,
    cx: &CliqueComplex,
    k: usize,
    want: &HomologyGroup,
    name: &str,
) -> Result<(bool, String)> {
    let got = ws.reduced_homology(cx, k)?;
    Ok((&got == want, format!("{name}: H̃_{k} = {got}")))
}

fn all_of(parts: Vec<(bool, String)>) -> (bool, String) {
    let ok = parts.iter().all(|p| p.0);
    (
        ok,
        parts
            .into_iter()
            .map(|p| p.1)
            .collect::<Vec<_>>()
            .join("; "),
    )
}

fn c1(ws: &Workspace) -> Result<(bool, String)> {
    let cx = ws.commuting(4, 2, 1, 0)?;
    expect_group(ws, &cx, 0, &HomologyGroup::free(2), "Δ_2(Σ_4,1)")
}

fn c2(ws: &Workspace) -> Result<(bool, String)> {
    let cx = ws.commuting(7, 2, 1, 1)?;
    Ok(all_of(vec![
        expect_group(ws, &cx, 1, &HomologyGroup::new(0, vec![3]), "Δ_2(Σ_7,1)")?,
        expect_group(ws, &cx, 0, &HomologyGroup::zero(), "Δ_2(Σ_7,1)")?,
    ]))
}

fn c3(ws: &Workspace) -> Result<(bool, String)> {
    let cx = ws.commuting(5, 2, 1, 1)?;
    expect_group(ws, &cx, 1, &HomologyGroup::free(6), "Δ_2(Σ_5,1)")
}

fn c4(ws: &Workspace) -> Result<(bool, String)> {
    let mut parts = Vec::new();
    for p in [2, 3] {
        for n in 2 * p + 1..=2 * p + 4 {
            let cx = ws.commuting(n, p, 1, 0)?;
            parts.push(expect_group(
                ws,
                &cx,
                0,
                &HomologyGroup::zero(),
                &format!("Δ_{p}(Σ_{n},1)"),
            )?);
        }
    }
    let sharp = ws.reduced_homology(&ws.commuting(4, 2, 1, 0)?, 0)?;
    parts.push((!sharp.is_zero(), format!("Δ_2(Σ_4,1): H̃_0 = {sharp}")));
    Ok(all_of(parts))
}

fn c5(ws: &Workspace) -> Result<(bool, String)> {
    let small = ws.reduced_homology(&ws.commuting(7, 2, 1, 0)?, 0)?;
    let big = commuting_graph(15, 2, 2)?;
    let by_components = reduced_h0_from_components(&big);
    Ok(all_of(vec![
        (small.is_zero(), format!("Δ_2(Σ_7,1): H̃_0 = {small}")),
        (
            by_components.is_zero(),
            format!(
                "Δ_2(Σ_15,2): {} vertices, {} components",
                big.vertex_count(),
                big.connected_components()
            ),
        ),
    ]))
}

fn c6(ws: &Workspace) -> Result<(bool, String)> {
    let cx = ws.commuting(11, 2, 1, 1)?;
    let ranks = cx.chain_ranks();
    Ok(all_of(vec![
        expect_group(ws, &cx, 0, &HomologyGroup::zero(), "Δ_2(Σ_11,1)")?,
        expect_group(ws, &cx, 1, &HomologyGroup::zero(), "Δ_2(Σ_11,1)")?,
        (
            ranks[..3] == [55, 990, 6930],
            format!("chain ranks {ranks:?}"),
        ),
    ]))
}

fn c7(ws: &Workspace) -> Result<(bool, String)> {
    let cx = ws.commuting(8, 2, 1, 1)?;
    expect_group(ws, &cx, 1, &HomologyGroup::zero(), "Δ_2(Σ_8,1)")
}

fn c8(_: &Workspace) -> Result<(bool, String)> {
    let opts = SuiteOptions::default();
    let named = |s: usize, t: usize, k: usize| -> Result<(bool, String)> {
        let source = commuting(s, 2, 1, k, opts.budget)?;
        let target = commuting(t, 2, 1, k, opts.budget)?;
        let j = Injection::inclusion(GroundSet::range(s), GroundSet::range(t))?;
        let map = homology_map_is_zero(&j, &source, &target, k)?;
        Ok((
            map.is_zero,
            format!(
                "H̃_{k}(Δ_2(Σ_{s},1)) = {} → Σ_{t}: zero {}",
                map.source_group, map.is_zero
            ),
        ))
    };
    let cone = run_suite(Suite::Cone, &opts)?;
    let torsion = run_suite(Suite::FiTorsion, &opts)?;
    Ok(all_of(vec![
        named(5, 7, 1)?,
        named(4, 6, 0)?,
        (cone.passed(), summarize(&cone)),
        (torsion.passed(), summarize(&torsion)),
    ]))
}

fn summarize(r: &SuiteReport) -> String {
    let failed: Vec<String> = r
        .failures()
        .take(3)
        .map(|c| format!("{} ({})", c.label, c.detail))
        .collect();
    if failed.is_empty() {
        format!("{}: {} cells pass", r.suite, r.checks.len())
    } else {
        format!(
            "{}: {} of {} cells fail, e.g. {}",
            r.suite,
            r.failures().count(),
            r.checks.len(),
            failed.join(", ")
        )
    }
}

fn c9(_: &Workspace) -> Result<(bool, String)> {
    let r = run_suite(Suite::GeneratorDegree, &SuiteOptions::default())?;
    Ok((r.passed(), summarize(&r)))
}

fn c10(_: &Workspace) -> Result<(bool, String)> {
    let r = run_suite(Suite::Dimension, &SuiteOptions::default())?;
    Ok((r.passed(), summarize(&r)))
}

fn c11(ws: &Workspace) -> Result<(bool, String)> {
    let m37 = ws.kneser(7, 3, 0)?;
    let m28 = ws.kneser(8, 2, 1)?;
    Ok(all_of(vec![
        expect_group(ws, &m37, 0, &HomologyGroup::zero(), "M_3(7)")?,
        expect_group(ws, &m28, 0, &HomologyGroup::zero(), "M_2(8)")?,
        expect_group(ws, &m28, 1, &HomologyGroup::zero(), "M_2(8)")?,
    ]))
}

/// The complexes behind criteria 1-11 that are built as simplicial
/// complexes (kind, n, p, a, cap).
pub const TABLE_COMPLEXES: [(&str, usize, usize, usize, usize); 14] = [
    ("commuting", 4, 2, 1, 0),
    ("commuting", 5, 2, 1, 1),
    ("commuting", 5, 2, 1, 0),
    ("commuting", 6, 2, 1, 0),
    ("commuting", 7, 2, 1, 1),
    ("commuting", 7, 2, 1, 0),
    ("commuting", 8, 2, 1, 1),
    ("commuting", 8, 2, 1, 0),
    ("commuting", 11, 2, 1, 1),
    ("commuting", 7, 3, 1, 0),
    ("commuting", 8, 3, 1, 0),
    ("commuting", 10, 3, 1, 0),
    ("kneser", 7, 3, 0, 0),
    ("kneser", 8, 2, 0, 1),
];

fn table_complex(
    ws: &Workspace,
    entry: (&str, usize, usize, usize, usize),
) -> Result<CliqueComplex> {
    let (kind, n, p, a, d) = entry;
    if kind == "kneser" {
        ws.kneser(n, p, d)
    } else {
        ws.commuting(n, p, a, d)
    }
}

/// Homology fields for the table complexes, as a JSON string. Used to
/// compare runs across thread counts and cache states.
pub fn homology_table(ws: &Workspace) -> Result<String> {
    let rows = TABLE_COMPLEXES
        .par_iter()
        .map(|&entry| {
            let cx = table_complex(ws, entry)?;
            let groups = (0..=cx.max_dim())
                .map(|k| ws.reduced_homology(&cx, k))
                .collect::<Result<Vec<_>>>()?;
            let (kind, n, p, a, d) = entry;
            Ok(json!({"kind": kind, "n": n, "p": p, "a": a, "max_dim": d, "homology": groups}))
        })
        .collect::<Result<Vec<Value>>>()?;
    Ok(serde_json::to_string(&rows).expect("serializable"))
}

fn c12(ws: &Workspace) -> Result<(bool, String)> {
    let mut parts = Vec::new();

    let mut dd = true;
    let mut euler = true;
    let mut transforms = true;
    for entry in TABLE_COMPLEXES {
        let cx = table_complex(ws, entry)?;
        dd &= boundary_squares_vanish(&cx)?;
        euler &= euler_consistent(&cx, ws.budget)?;
        if cx.simplices(1).len() <= 400 {
            for k in 0..=cx.top_stored_dim() {
                transforms &= check_snf_transforms(&cx.boundary_matrix(k, true)?)?.0;
            }
        }
    }
    parts.push((dd, format!("∂∂ = 0 on {} complexes", TABLE_COMPLEXES.len())));
    parts.push((euler, "Euler characteristic consistent".to_string()));

    let snf = run_suite(Suite::Snf, &SuiteOptions::default())?;
    parts.push((snf.passed(), summarize(&snf)));
    parts.push((
        transforms,
        "UAV = D with unimodular U, V on small boundary matrices".to_string(),
    ));

    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let fresh = Workspace::new(None, ws.budget);
    let a = one.install(|| homology_table(&fresh))?;
    let b = four.install(|| homology_table(&fresh))?;
    let c = homology_table(ws)?;
    parts.push((
        a == b,
        "homology fields identical across 1 and 4 workers".to_string(),
    ));
    parts.push((
        a == c,
        "homology fields identical with and without the cache".to_string(),
    ));
    Ok(all_of(parts))
}
