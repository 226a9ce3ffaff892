//! Clique complexes up to a dimension cap, with signed boundary matrices.
//!
//! A k-simplex is a (k+1)-clique of the underlying graph, stored as its
//! ascending vertex indices; that order fixes the orientation. Simplices of
//! each dimension are kept in lexicographic order so indices are stable.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, VertexKind};
use crate::integer::Integer;
use crate::matrix::SparseIntMatrix;
use crate::perm::GroundSet;
use crate::snf::Budget;

/// Ascending vertex indices of a clique.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(pub Vec<u32>);

impl Simplex {
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    /// The face opposite the `i`-th vertex.
    pub fn facet(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }
}

#[derive(Clone, Debug)]
pub struct CliqueComplex {
    graph: Arc<LabeledGraph>,
    max_dim: usize,
    /// `skeleton[k]`: sorted k-simplices for `k` in `0..=max_dim + 1`.
    skeleton: Vec<Vec<Simplex>>,
}

/// Enumerates all cliques of size `1..=max_dim + 2` with the default budget.
pub fn clique_complex(graph: Arc<LabeledGraph>, max_dim: usize) -> Result<CliqueComplex> {
    clique_complex_with_budget(graph, max_dim, Budget::default())
}

/// As [`clique_complex`], failing with [`Error::BudgetExceeded`] once more
/// than `budget.max_entries` simplices have been produced.
pub fn clique_complex_with_budget(
    graph: Arc<LabeledGraph>,
    max_dim: usize,
    budget: Budget,
) -> Result<CliqueComplex> {
    let top = max_dim + 1;
    let counter = AtomicU64::new(0);
    let limit = budget.max_entries;
    let per_root: Vec<Vec<Vec<Simplex>>> = (0..graph.vertex_count())
        .into_par_iter()
        .map(|root| {
            let mut out = vec![Vec::new(); top + 1];
            let mut stack = vec![root as u32];
            extend(
                &graph,
                &mut stack,
                graph.higher_neighbors(root),
                top,
                &mut out,
                &counter,
                limit,
            )?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut skeleton: Vec<Vec<Simplex>> = vec![Vec::new(); top + 1];
    for root in per_root {
        for (k, simplices) in root.into_iter().enumerate() {
            skeleton[k].extend(simplices);
        }
    }
    Ok(CliqueComplex {
        graph,
        max_dim,
        skeleton,
    })
}

/// Depth-first extension in ascending vertex order; emits each clique in
/// lexicographic order within its dimension.
fn extend(
    graph: &LabeledGraph,
    stack: &mut Vec<u32>,
    candidates: &[u32],
    top: usize,
    out: &mut [Vec<Simplex>],
    counter: &AtomicU64,
    limit: u64,
) -> Result<()> {
    let count = counter.fetch_add(1, Ordering::Relaxed) + 1;
    if count > limit {
        return Err(Error::BudgetExceeded {
            what: "simplices",
            count,
            limit,
        });
    }
    out[stack.len() - 1].push(Simplex(stack.clone()));
    if stack.len() == top + 1 {
        return Ok(());
    }
    for (i, &v) in candidates.iter().enumerate() {
        let next: Vec<u32> = intersect(&candidates[i + 1..], graph.higher_neighbors(v as usize));
        stack.push(v);
        extend(graph, stack, &next, top, out, counter, limit)?;
        stack.pop();
    }
    Ok(())
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl CliqueComplex {
    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<LabeledGraph> {
        &self.graph
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Highest stored dimension (`max_dim + 1`).
    pub fn top_stored_dim(&self) -> usize {
        self.max_dim + 1
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.skeleton.get(k).map_or(&[], Vec::as_slice)
    }

    /// `dim C_k` for every stored `k`.
    pub fn chain_ranks(&self) -> Vec<usize> {
        self.skeleton.iter().map(Vec::len).collect()
    }

    pub fn simplex_count(&self) -> usize {
        self.skeleton.iter().map(Vec::len).sum()
    }

    /// Highest dimension with a stored simplex, `None` for the empty complex.
    pub fn observed_dim(&self) -> Option<usize> {
        self.skeleton.iter().rposition(|s| !s.is_empty())
    }

    /// True when the cap did not cut anything off: no simplices at the top
    /// stored dimension, so every higher clique is absent too.
    pub fn is_complete(&self) -> bool {
        self.skeleton[self.max_dim + 1].is_empty()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.skeleton.get(s.dim())?.binary_search(s).ok()
    }

    /// `∂_k : C_k → C_{k-1}`. The facet dropping vertex `i` gets sign
    /// `(-1)^i`. For `k = 0` this is the all-ones augmentation row when
    /// `reduced`, and a `0 × |C_0|` matrix otherwise.
    pub fn boundary_matrix(&self, k: usize, reduced: bool) -> Result<SparseIntMatrix> {
        let top = self.top_stored_dim();
        if k > top {
            return Err(Error::OutOfRange {
                what: "boundary degree",
                index: k,
                max: top,
            });
        }
        let cols_src = &self.skeleton[k];
        if k == 0 {
            let rows = usize::from(reduced);
            let cols = cols_src
                .iter()
                .map(|_| {
                    if reduced {
                        vec![(0u32, Integer::ONE)]
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            return Ok(SparseIntMatrix::from_columns(rows, cols));
        }
        let faces = &self.skeleton[k - 1];
        let cols = cols_src
            .par_iter()
            .map(|s| {
                let mut col: Vec<(u32, Integer)> = (0..=k)
                    .map(|i| {
                        let f = s.facet(i);
                        let row = faces
                            .binary_search(&f)
                            .expect("clique complexes are closed under faces");
                        let sign = if i % 2 == 0 {
                            Integer::ONE
                        } else {
                            -Integer::ONE
                        };
                        (row as u32, sign)
                    })
                    .collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect();
        Ok(SparseIntMatrix::from_columns(faces.len(), cols))
    }

    /// Union of the supports of the simplex's vertices (for Kneser complexes,
    /// the union of the subsets).
    pub fn simplex_support(&self, s: &Simplex) -> GroundSet {
        s.vertices().iter().fold(GroundSet::empty(), |acc, &v| {
            acc.union(&self.graph.vertices()[v as usize].support())
        })
    }

    /// Cache text: header `qlab-complex v1 n p a max_dim`, then one line
    /// `k: i_0 ... i_k` per simplex in sorted order. `a` is `0` for Kneser
    /// complexes.
    pub fn to_text(&self) -> String {
        let a = self.graph.a().unwrap_or(0);
        let mut s = format!(
            "qlab-complex v1 {} {} {} {}\n",
            self.graph.n(),
            self.graph.p(),
            a,
            self.max_dim
        );
        for (k, simplices) in self.skeleton.iter().enumerate() {
            for simplex in simplices {
                write!(s, "{k}:").expect("writing to a String");
                for v in simplex.vertices() {
                    write!(s, " {v}").expect("writing to a String");
                }
                s.push('\n');
            }
        }
        s
    }

    /// Reattaches cached simplices to a freshly built graph, validating the
    /// header, sort order, clique property and face closure.
    pub fn from_text(graph: Arc<LabeledGraph>, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty complex file".into()))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        let expected_a = graph.a().unwrap_or(0).to_string();
        if f.len() != 6
            || f[0] != "qlab-complex"
            || f[1] != "v1"
            || f[2] != graph.n().to_string()
            || f[3] != graph.p().to_string()
            || f[4] != expected_a
        {
            return Err(Error::Parse(format!(
                "complex header {header:?} does not match the graph"
            )));
        }
        let max_dim: usize = f[5]
            .parse()
            .map_err(|e| Error::Parse(format!("max_dim: {e}")))?;
        let mut skeleton: Vec<Vec<Simplex>> = vec![Vec::new(); max_dim + 2];
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (k, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad line {line:?}")))?;
            let k: usize = k
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("dimension: {e}")))?;
            let verts = rest
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|e| Error::Parse(format!("vertex {t:?}: {e}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            if k > max_dim + 1 || verts.len() != k + 1 {
                return Err(Error::Parse(format!(
                    "simplex {line:?} inconsistent with its dimension"
                )));
            }
            if verts.iter().any(|&v| v as usize >= graph.vertex_count()) {
                return Err(Error::Parse(format!(
                    "vertex index out of range in {line:?}"
                )));
            }
            for (x, &i) in verts.iter().enumerate() {
                for &j in &verts[x + 1..] {
                    if i >= j || !graph.adjacent(i as usize, j as usize) {
                        return Err(Error::Parse(format!("{line:?} is not an ascending clique")));
                    }
                }
            }
            let s = Simplex(verts);
            if skeleton[k].last().is_some_and(|last| last >= &s) {
                return Err(Error::Parse("simplices not in sorted order".into()));
            }
            skeleton[k].push(s);
        }
        let cx = CliqueComplex {
            graph,
            max_dim,
            skeleton,
        };
        for k in 1..=max_dim + 1 {
            for s in cx.simplices(k) {
                for i in 0..=k {
                    if cx.index_of(&s.facet(i)).is_none() {
                        return Err(Error::Parse(format!("missing face of {:?}", s.vertices())));
                    }
                }
            }
        }
        Ok(cx)
    }

    /// `p`, resolved `a`, and whether the vertices are permutations.
    pub fn parameters(&self) -> (usize, Option<usize>, VertexKind) {
        (self.graph.p(), self.graph.a(), self.graph.kind())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_commuting_graph, build_kneser_graph, CycleBound, Vertex};
    use crate::perm::Permutation;

    fn matching(n: usize, max_dim: usize) -> CliqueComplex {
        let g = build_commuting_graph(&GroundSet::range(n), 2, CycleBound::AtMost(1)).unwrap();
        clique_complex(Arc::new(g), max_dim).unwrap()
    }

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn kneser_two_four() {
        let g = build_kneser_graph(&GroundSet::range(4), 2).unwrap();
        let cx = clique_complex(Arc::new(g), 1).unwrap();
        assert_eq!(cx.chain_ranks(), vec![6, 3, 0]);
        let d1 = cx.boundary_matrix(1, true).unwrap();
        assert_eq!((d1.n_rows(), d1.n_cols()), (6, 3));
        for c in 0..3 {
            let vals: Vec<i64> = d1
                .column(c)
                .iter()
                .map(|(_, v)| v.to_i64().unwrap())
                .collect();
            let mut sorted = vals.clone();
            sorted.sort();
            assert_eq!(sorted, vec![-1, 1]);
        }
    }

    #[test]
    fn perfect_matchings_of_k6() {
        let cx = matching(6, 2);
        assert_eq!(cx.simplices(2).len(), 15);
        assert!(cx.is_complete());
        assert_eq!(cx.observed_dim(), Some(2));
    }

    #[test]
    fn empty_graph_gives_empty_complex() {
        let cx = matching(1, 3);
        assert_eq!(cx.simplex_count(), 0);
        assert_eq!(cx.observed_dim(), None);
        let d0 = cx.boundary_matrix(0, true).unwrap();
        assert_eq!((d0.n_rows(), d0.n_cols()), (1, 0));
    }

    #[test]
    fn single_edge_orientation() {
        let cx = matching(4, 1);
        // edge [0, 3] = {(3 4), (1 2)}
        let e = cx.simplices(1)[0].clone();
        assert_eq!(e.vertices(), &[0, 3]);
        let d1 = cx.boundary_matrix(1, true).unwrap();
        assert_eq!(d1.get(0, 0), -Integer::ONE);
        assert_eq!(d1.get(3, 0), Integer::ONE);
        assert!(cx.boundary_matrix(3, true).is_err());
        let d0 = cx.boundary_matrix(0, false).unwrap();
        assert_eq!((d0.n_rows(), d0.n_cols()), (0, 6));
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        for n in 2..=8 {
            for (p, a) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
                let g =
                    build_commuting_graph(&GroundSet::range(n), p, CycleBound::AtMost(a)).unwrap();
                let cx = clique_complex(Arc::new(g), 2).unwrap();
                for k in 0..cx.top_stored_dim() {
                    let prod = cx
                        .boundary_matrix(k, true)
                        .unwrap()
                        .mul(&cx.boundary_matrix(k + 1, true).unwrap())
                        .unwrap();
                    assert!(prod.is_zero(), "n={n} p={p} a={a} k={k}");
                }
            }
        }
    }

    #[test]
    fn face_closure() {
        let cx = matching(8, 2);
        for k in 1..=cx.top_stored_dim() {
            for s in cx.simplices(k) {
                for i in 0..=k {
                    assert!(cx.index_of(&s.facet(i)).is_some());
                }
            }
        }
    }

    #[test]
    fn simplex_counts_are_matching_numbers() {
        for n in 0..=11usize {
            let cx = matching(n, 3);
            for k in 0..=4usize {
                let size = 2 * (k + 1);
                let expected = if size > n {
                    0
                } else {
                    factorial(n as u64)
                        / (2u64.pow(k as u32 + 1)
                            * factorial(k as u64 + 1)
                            * factorial((n - size) as u64))
                };
                assert_eq!(cx.simplices(k).len() as u64, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn support_of_simplices() {
        let ground = GroundSet::range(10);
        let g = Arc::new(build_commuting_graph(&ground, 2, CycleBound::AtMost(3)).unwrap());
        let idx = |t: &str| {
            g.index_of(&Vertex::Perm(
                Permutation::parse_cycles(ground.clone(), t).unwrap(),
            ))
            .unwrap() as u32
        };
        let cx = clique_complex(g.clone(), 0).unwrap();
        assert_eq!(
            cx.simplex_support(&Simplex(vec![idx("(1 2)")])).labels(),
            &[1, 2]
        );
        let mut e = vec![idx("(1 2)"), idx("(3 4)")];
        e.sort();
        assert_eq!(cx.simplex_support(&Simplex(e)).labels(), &[1, 2, 3, 4]);
        let mut q: Vec<u32> = ["(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)", "(5 6)(7 8)(9 10)"]
            .iter()
            .map(|t| idx(t))
            .collect();
        q.sort();
        assert_eq!(
            cx.simplex_support(&Simplex(q)).labels(),
            &(1..=10).collect::<Vec<u32>>()[..]
        );
    }

    #[test]
    fn generator_degree_bound_holds() {
        for n in 2..=9 {
            for (p, a) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
                let g =
                    build_commuting_graph(&GroundSet::range(n), p, CycleBound::AtMost(a)).unwrap();
                let cx = clique_complex(Arc::new(g), 1).unwrap();
                for k in 0..=2 {
                    for s in cx.simplices(k) {
                        assert!(cx.simplex_support(s).len() <= (k + 1) * a * p);
                    }
                }
            }
        }
    }

    #[test]
    fn text_round_trip_and_corruption() {
        let cx = matching(6, 1);
        let text = cx.to_text();
        assert!(text.starts_with("qlab-complex v1 6 2 1 1\n0: 0\n"));
        let back = CliqueComplex::from_text(cx.graph_arc().clone(), &text).unwrap();
        assert_eq!(back.chain_ranks(), cx.chain_ranks());
        for k in 0..=2 {
            assert_eq!(back.simplices(k), cx.simplices(k));
        }
        let broken = text.replacen("1: 0 ", "1: 1 ", 1);
        assert!(CliqueComplex::from_text(cx.graph_arc().clone(), &broken).is_err());
        let wrong_header = text.replacen("v1 6", "v1 7", 1);
        assert!(CliqueComplex::from_text(cx.graph_arc().clone(), &wrong_header).is_err());
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let g = build_commuting_graph(&GroundSet::range(8), 2, CycleBound::AtMost(1)).unwrap();
        let err = clique_complex_with_budget(
            Arc::new(g),
            2,
            Budget {
                max_entries: 100,
                max_bits: 64,
            },
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                what: "simplices",
                ..
            }
        ));
    }
}
