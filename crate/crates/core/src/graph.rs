//! Commuting graphs of bounded p-elements and Kneser graphs.
//!
//! Vertices are enumerated exhaustively and sorted by their canonical
//! encoding, so vertex indices (and everything downstream of them) are
//! reproducible regardless of thread count.

use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fi::Injection;
use crate::perm::{GroundSet, Permutation};

/// Bound on the number of disjoint p-cycles in a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleBound {
    AtMost(usize),
    /// No bound; equivalent to `AtMost(n / p)`.
    Unbounded,
}

impl CycleBound {
    pub fn resolve(self, n: usize, p: usize) -> usize {
        match self {
            CycleBound::AtMost(a) => a,
            CycleBound::Unbounded => n / p.max(1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    /// Permutations that are products of at most `a` disjoint `p`-cycles.
    BoundedPElement { p: usize, a: CycleBound },
    /// Size-`p` subsets of the ground set.
    PSubset { p: usize },
}

impl VertexKind {
    pub fn p(&self) -> usize {
        match *self {
            VertexKind::BoundedPElement { p, .. } | VertexKind::PSubset { p } => p,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            VertexKind::BoundedPElement { .. } => "commuting",
            VertexKind::PSubset { .. } => "kneser",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Perm(Permutation),
    Subset(GroundSet),
}

impl Vertex {
    /// Labels moved by a permutation vertex, or the subset itself.
    pub fn support(&self) -> GroundSet {
        match self {
            Vertex::Perm(f) => f.support(),
            Vertex::Subset(s) => s.clone(),
        }
    }

    pub fn relabel(&self, j: &Injection) -> Result<Vertex> {
        match self {
            Vertex::Perm(f) => Ok(Vertex::Perm(f.relabel(j)?)),
            Vertex::Subset(s) => {
                let img = s
                    .labels()
                    .iter()
                    .map(|&x| j.apply(x).ok_or(Error::DomainMismatch))
                    .collect::<Result<Vec<u32>>>()?;
                Ok(Vertex::Subset(GroundSet::new(img)?))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Vertex::Perm(f) => Value::String(f.to_string()),
            Vertex::Subset(s) => json!(s.labels()),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Perm(p) => p.fmt(f),
            Vertex::Subset(s) => s.fmt(f),
        }
    }
}

/// A simple graph on canonically sorted vertices.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    ground: GroundSet,
    kind: VertexKind,
    vertices: Vec<Vertex>,
    /// `higher[i]`: sorted neighbours `j > i`.
    higher: Vec<Vec<u32>>,
}

impl LabeledGraph {
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn kind(&self) -> VertexKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn p(&self) -> usize {
        self.kind.p()
    }

    /// Resolved cycle bound for commuting graphs, `None` for Kneser graphs.
    pub fn a(&self) -> Option<usize> {
        match self.kind {
            VertexKind::BoundedPElement { p, a } => Some(a.resolve(self.n(), p)),
            VertexKind::PSubset { .. } => None,
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.higher.iter().map(Vec::len).sum()
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.higher
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().map(move |&j| (i as u32, j)))
    }

    pub fn higher_neighbors(&self, i: usize) -> &[u32] {
        &self.higher[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        lo != hi && self.higher[lo].binary_search(&(hi as u32)).is_ok()
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    pub fn connected_components(&self) -> usize {
        let labels = self.component_labels();
        labels.iter().enumerate().filter(|&(i, &l)| i == l).count()
    }

    /// For each vertex, the smallest vertex index in its component.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, j) in self.edges() {
            let (ri, rj) = (find(&mut parent, i as usize), find(&mut parent, j as usize));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        (0..parent.len()).map(|x| find(&mut parent, x)).collect()
    }

    /// A maximum clique, found by branch and bound with greedy colouring bounds.
    pub fn max_clique(&self) -> Vec<u32> {
        MaxClique::new(self).run()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "p": self.p(),
            "a": self.a(),
            "kind": self.kind.name(),
            "vertices": self.vertices.iter().map(Vertex::to_json).collect::<Vec<_>>(),
            "edges": self.edges().map(|(i, j)| [i, j]).collect::<Vec<_>>(),
        })
    }

    fn from_vertices(ground: GroundSet, kind: VertexKind, mut vertices: Vec<Vertex>) -> Self {
        vertices.sort_unstable();
        let masks: Vec<u128> = vertices.iter().map(|v| support_mask(&ground, v)).collect();
        let images: Vec<Vec<u8>> = vertices
            .iter()
            .map(|v| match v {
                Vertex::Perm(f) => f.index_images().into_iter().map(|x| x as u8).collect(),
                Vertex::Subset(_) => Vec::new(),
            })
            .collect();
        let higher = (0..vertices.len())
            .into_par_iter()
            .map(|i| {
                ((i + 1)..vertices.len())
                    .filter(|&j| {
                        if masks[i] & masks[j] == 0 {
                            return true;
                        }
                        match kind {
                            VertexKind::PSubset { .. } => false,
                            VertexKind::BoundedPElement { .. } => {
                                commute_indices(&images[i], &images[j])
                            }
                        }
                    })
                    .map(|j| j as u32)
                    .collect()
            })
            .collect();
        LabeledGraph {
            ground,
            kind,
            vertices,
            higher,
        }
    }
}

fn support_mask(ground: &GroundSet, v: &Vertex) -> u128 {
    v.support()
        .labels()
        .iter()
        .map(|&l| 1u128 << ground.index_of(l).expect("support inside ground"))
        .fold(0, |a, b| a | b)
}

fn commute_indices(f: &[u8], g: &[u8]) -> bool {
    (0..f.len()).all(|x| f[g[x] as usize] == g[f[x] as usize])
}

/// Commuting graph on the permutations of `ground` that are products of
/// between one and `a` disjoint `p`-cycles.
pub fn build_commuting_graph(ground: &GroundSet, p: usize, a: CycleBound) -> Result<LabeledGraph> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must be at least 2"
        )));
    }
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not prime")));
    }
    if a == CycleBound::AtMost(0) {
        return Err(Error::InvalidParameter("a must be at least 1".into()));
    }
    check_ground_size(ground)?;
    let n = ground.len();
    let max_cycles = a.resolve(n, p).min(n / p);
    let mut out = Vec::new();
    let mut image: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    enumerate_bounded(0, p, max_cycles, 0, &mut image, &mut used, &mut out);
    let vertices = out
        .into_iter()
        .map(|img| {
            let labels = img.iter().map(|&i| ground.labels()[i]).collect();
            Vertex::Perm(
                Permutation::from_images(ground.clone(), labels).expect("valid permutation"),
            )
        })
        .collect();
    Ok(LabeledGraph::from_vertices(
        ground.clone(),
        VertexKind::BoundedPElement { p, a },
        vertices,
    ))
}

/// Kneser graph: size-`p` subsets of `ground`, adjacent when disjoint.
pub fn build_kneser_graph(ground: &GroundSet, p: usize) -> Result<LabeledGraph> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    check_ground_size(ground)?;
    let mut vertices = Vec::new();
    let labels = ground.labels();
    let mut combo: Vec<usize> = Vec::with_capacity(p);
    fn rec(start: usize, p: usize, labels: &[u32], combo: &mut Vec<usize>, out: &mut Vec<Vertex>) {
        if combo.len() == p {
            let set = combo.iter().map(|&i| labels[i]).collect();
            out.push(Vertex::Subset(
                GroundSet::new(set).expect("distinct labels"),
            ));
            return;
        }
        for i in start..labels.len() {
            if labels.len() - i < p - combo.len() {
                break;
            }
            combo.push(i);
            rec(i + 1, p, labels, combo, out);
            combo.pop();
        }
    }
    rec(0, p, labels, &mut combo, &mut vertices);
    Ok(LabeledGraph::from_vertices(
        ground.clone(),
        VertexKind::PSubset { p },
        vertices,
    ))
}

fn check_ground_size(ground: &GroundSet) -> Result<()> {
    if ground.len() > 128 {
        return Err(Error::InvalidParameter(format!(
            "ground sets of size {} exceed the supported 128 labels",
            ground.len()
        )));
    }
    Ok(())
}

pub(crate) fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Recursively assigns each index either as a fixed point or as the minimum
/// of a new p-cycle whose remaining entries are taken from larger unused
/// indices. Every permutation with the requested cycle type appears once.
fn enumerate_bounded(
    pos: usize,
    p: usize,
    max_cycles: usize,
    cycles: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    let n = image.len();
    let mut pos = pos;
    while pos < n && used[pos] {
        pos += 1;
    }
    if pos == n {
        if cycles > 0 {
            out.push(image.clone());
        }
        return;
    }
    // pos fixed
    enumerate_bounded(pos + 1, p, max_cycles, cycles, image, used, out);
    if cycles == max_cycles {
        return;
    }
    used[pos] = true;
    let mut cycle = vec![pos];
    extend_cycle(pos, p, max_cycles, cycles, &mut cycle, image, used, out);
    used[pos] = false;
}

#[allow(clippy::too_many_arguments)]
fn extend_cycle(
    start: usize,
    p: usize,
    max_cycles: usize,
    cycles: usize,
    cycle: &mut Vec<usize>,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    if cycle.len() == p {
        for k in 0..p {
            image[cycle[k]] = cycle[(k + 1) % p];
        }
        enumerate_bounded(start + 1, p, max_cycles, cycles + 1, image, used, out);
        for &x in cycle.iter() {
            image[x] = x;
        }
        return;
    }
    for next in (start + 1)..image.len() {
        if used[next] {
            continue;
        }
        used[next] = true;
        cycle.push(next);
        extend_cycle(start, p, max_cycles, cycles, cycle, image, used, out);
        cycle.pop();
        used[next] = false;
    }
}

struct MaxClique {
    adj: Vec<Vec<u64>>,
    words: usize,
    best: Vec<u32>,
}

impl MaxClique {
    fn new(g: &LabeledGraph) -> Self {
        let n = g.vertex_count();
        let words = n.div_ceil(64);
        let mut adj = vec![vec![0u64; words]; n];
        for (i, j) in g.edges() {
            let (i, j) = (i as usize, j as usize);
            adj[i][j / 64] |= 1 << (j % 64);
            adj[j][i / 64] |= 1 << (i % 64);
        }
        MaxClique {
            adj,
            words,
            best: Vec::new(),
        }
    }

    fn run(mut self) -> Vec<u32> {
        let n = self.adj.len();
        let mut all = vec![0u64; self.words];
        for v in 0..n {
            all[v / 64] |= 1 << (v % 64);
        }
        let mut current = Vec::new();
        self.expand(&mut current, all);
        self.best.sort_unstable();
        self.best
    }

    fn members(set: &[u64]) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &bits) in set.iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                out.push(w * 64 + b.trailing_zeros() as usize);
                b &= b - 1;
            }
        }
        out
    }

    /// Greedy colouring of the candidate set; returns vertices in colour order
    /// with their colour numbers (an upper bound on the clique they can extend).
    fn colour(&self, cand: &[u64]) -> Vec<(usize, usize)> {
        let mut remaining = cand.to_vec();
        let mut order = Vec::new();
        let mut colour = 0;
        while remaining.iter().any(|&w| w != 0) {
            colour += 1;
            let mut avail = remaining.clone();
            while let Some(v) = Self::members(&avail).first().copied() {
                order.push((v, colour));
                remaining[v / 64] &= !(1 << (v % 64));
                avail[v / 64] &= !(1 << (v % 64));
                for (a, n) in avail.iter_mut().zip(&self.adj[v]) {
                    *a &= !n;
                }
            }
        }
        order
    }

    fn expand(&mut self, current: &mut Vec<u32>, mut cand: Vec<u64>) {
        let order = self.colour(&cand);
        for &(v, c) in order.iter().rev() {
            if current.len() + c <= self.best.len() {
                return;
            }
            current.push(v as u32);
            let next: Vec<u64> = cand.iter().zip(&self.adj[v]).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            cand[v / 64] &= !(1 << (v % 64));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    fn all_permutations(n: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur: Vec<u32> = (1..=n as u32).collect();
        fn heap(k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if k <= 1 {
                out.push(cur.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, cur, out);
                if k % 2 == 0 {
                    cur.swap(i, k - 1);
                } else {
                    cur.swap(0, k - 1);
                }
            }
        }
        heap(n, &mut cur, &mut out);
        out
    }

    fn formula_count(n: usize, p: usize, a: usize) -> u64 {
        (1..=a.min(n / p))
            .map(|c| {
                factorial(n as u64)
                    / ((p as u64).pow(c as u32)
                        * factorial(c as u64)
                        * factorial((n - c * p) as u64))
            })
            .sum()
    }

    #[test]
    fn vertex_count_matches_exhaustive_enumeration() {
        for n in 0..=9 {
            let g = GroundSet::range(n);
            let all: Vec<Permutation> = all_permutations(n)
                .into_iter()
                .map(|img| Permutation::from_images(g.clone(), img).unwrap())
                .collect();
            for p in [2usize, 3, 5] {
                for a in 1..=3 {
                    let brute = all.iter().filter(|f| f.is_bounded_p_element(p, a)).count() as u64;
                    let graph = build_commuting_graph(&g, p, CycleBound::AtMost(a)).unwrap();
                    assert_eq!(graph.vertex_count() as u64, brute, "n={n} p={p} a={a}");
                    assert_eq!(brute, formula_count(n, p, a), "n={n} p={p} a={a}");
                }
            }
        }
    }

    #[test]
    fn small_matching_graphs() {
        let g4 = build_commuting_graph(&GroundSet::range(4), 2, CycleBound::AtMost(1)).unwrap();
        assert_eq!(
            (
                g4.vertex_count(),
                g4.edge_count(),
                g4.connected_components()
            ),
            (6, 3, 3)
        );
        let g5 = build_commuting_graph(&GroundSet::range(5), 2, CycleBound::AtMost(1)).unwrap();
        assert_eq!((g5.vertex_count(), g5.edge_count()), (10, 15));
        // Petersen: 3-regular, girth 5
        for i in 0..10 {
            assert_eq!((0..10).filter(|&j| g5.adjacent(i, j)).count(), 3);
        }
        let g3 = build_commuting_graph(&GroundSet::range(3), 2, CycleBound::AtMost(1)).unwrap();
        assert_eq!((g3.vertex_count(), g3.edge_count()), (3, 0));
        let g1 = build_commuting_graph(&GroundSet::range(1), 2, CycleBound::AtMost(1)).unwrap();
        assert_eq!(g1.vertex_count(), 0);
    }

    #[test]
    fn klein_four_clique_in_sigma_ten() {
        let ground = GroundSet::range(10);
        let g = build_commuting_graph(&ground, 2, CycleBound::AtMost(3)).unwrap();
        let clique: Vec<usize> = ["(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)", "(5 6)(7 8)(9 10)"]
            .iter()
            .map(|t| {
                g.index_of(&Vertex::Perm(
                    Permutation::parse_cycles(ground.clone(), t).unwrap(),
                ))
                .unwrap()
            })
            .collect();
        for (x, &i) in clique.iter().enumerate() {
            for &j in &clique[x + 1..] {
                assert!(g.adjacent(i, j));
            }
        }
    }

    #[test]
    fn kneser_examples() {
        let k = build_kneser_graph(&GroundSet::range(4), 2).unwrap();
        assert_eq!((k.vertex_count(), k.edge_count()), (6, 3));
        let k = build_kneser_graph(&GroundSet::range(5), 5).unwrap();
        assert_eq!((k.vertex_count(), k.edge_count()), (1, 0));
        for p in 1..=4 {
            let k = build_kneser_graph(&GroundSet::range(2 * p - 1), p).unwrap();
            let binom =
                factorial(2 * p as u64 - 1) / (factorial(p as u64) * factorial(p as u64 - 1));
            assert_eq!((k.vertex_count() as u64, k.edge_count()), (binom, 0));
        }
        let sets: Vec<Vec<u32>> = build_kneser_graph(&GroundSet::range(4), 2)
            .unwrap()
            .vertices()
            .iter()
            .map(|v| v.support().labels().to_vec())
            .collect();
        assert_eq!(
            sets,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
    }

    #[test]
    fn kneser_two_is_the_transposition_graph() {
        for n in 0..=8 {
            let ground = GroundSet::range(n);
            let k = build_kneser_graph(&ground, 2).unwrap();
            let c = build_commuting_graph(&ground, 2, CycleBound::AtMost(1)).unwrap();
            assert_eq!(k.vertex_count(), c.vertex_count());
            // {x, y} -> (x y)
            let map: Vec<usize> = k
                .vertices()
                .iter()
                .map(|v| {
                    let s = v.support();
                    let t = Permutation::from_cycles(ground.clone(), &[s.labels()]).unwrap();
                    c.index_of(&Vertex::Perm(t)).unwrap()
                })
                .collect();
            for i in 0..k.vertex_count() {
                for j in 0..k.vertex_count() {
                    assert_eq!(k.adjacent(i, j), c.adjacent(map[i], map[j]));
                }
            }
        }
    }

    #[test]
    fn smaller_bound_gives_induced_subgraph() {
        for n in 2..=8 {
            let ground = GroundSet::range(n);
            for p in [2, 3] {
                for a in 1..=2 {
                    let small = build_commuting_graph(&ground, p, CycleBound::AtMost(a)).unwrap();
                    let big = build_commuting_graph(&ground, p, CycleBound::AtMost(a + 1)).unwrap();
                    let map: Vec<usize> = small
                        .vertices()
                        .iter()
                        .map(|v| big.index_of(v).unwrap())
                        .collect();
                    for i in 0..small.vertex_count() {
                        for j in 0..small.vertex_count() {
                            assert_eq!(small.adjacent(i, j), big.adjacent(map[i], map[j]));
                        }
                    }
                }
            }
        }
    }

    fn brute_force_clique_number(g: &LabeledGraph) -> usize {
        fn grow(g: &LabeledGraph, clique: &mut Vec<usize>, start: usize, best: &mut usize) {
            *best = (*best).max(clique.len());
            for v in start..g.vertex_count() {
                if clique.iter().all(|&u| g.adjacent(u, v)) {
                    clique.push(v);
                    grow(g, clique, v + 1, best);
                    clique.pop();
                }
            }
        }
        let mut best = 0;
        grow(g, &mut Vec::new(), 0, &mut best);
        best
    }

    #[test]
    fn max_clique_matches_exhaustive_search() {
        for n in 0..=6 {
            for p in [2, 3] {
                for a in [CycleBound::AtMost(1), CycleBound::AtMost(2)] {
                    let g = build_commuting_graph(&GroundSet::range(n), p, a).unwrap();
                    let c = g.max_clique();
                    for (x, &u) in c.iter().enumerate() {
                        for &v in &c[x + 1..] {
                            assert!(g.adjacent(u as usize, v as usize));
                        }
                    }
                    assert_eq!(
                        c.len(),
                        brute_force_clique_number(&g),
                        "n={n} p={p} a={a:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn transposition_cliques_are_perfect_partial_matchings() {
        for n in 0..=10 {
            let g = build_commuting_graph(&GroundSet::range(n), 2, CycleBound::AtMost(1)).unwrap();
            assert_eq!(g.max_clique().len(), n / 2);
        }
    }

    #[test]
    fn cliques_beyond_floor_n_over_p() {
        // a 3-cycle commutes with its inverse
        let g = build_commuting_graph(&GroundSet::range(3), 3, CycleBound::AtMost(1)).unwrap();
        assert_eq!(g.max_clique().len(), 2);
        // (1 2), (3 4) and their product
        let g = build_commuting_graph(&GroundSet::range(4), 2, CycleBound::AtMost(2)).unwrap();
        assert_eq!(g.max_clique().len(), 3);
    }

    #[test]
    fn unbounded_is_floor_n_over_p() {
        let ground = GroundSet::range(7);
        let u = build_commuting_graph(&ground, 2, CycleBound::Unbounded).unwrap();
        let b = build_commuting_graph(&ground, 2, CycleBound::AtMost(3)).unwrap();
        assert_eq!(u.vertices(), b.vertices());
        assert_eq!(u.edge_count(), b.edge_count());
        assert_eq!(u.a(), Some(3));
    }

    #[test]
    fn json_export_shape() {
        let g = build_commuting_graph(&GroundSet::range(4), 2, CycleBound::AtMost(1)).unwrap();
        let v = g.to_json();
        assert_eq!(v["n"], 4);
        assert_eq!(v["kind"], "commuting");
        // sorted by image array: [1,2,4,3] = (3 4) comes first
        assert_eq!(v["vertices"][0], "(3 4)");
        assert_eq!(v["vertices"][3], "(1 2)");
        assert_eq!(v["edges"].as_array().unwrap().len(), 3);
        assert_eq!(v["edges"][0], json!([0, 3]));
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = GroundSet::range(4);
        assert!(build_commuting_graph(&g, 4, CycleBound::AtMost(1)).is_err());
        assert!(build_commuting_graph(&g, 2, CycleBound::AtMost(0)).is_err());
        assert!(build_kneser_graph(&g, 0).is_err());
    }
}
