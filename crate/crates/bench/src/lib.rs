//! Fixtures shared by the criterion benches.

use std::sync::Arc;

use qlab::{
    build_commuting_graph, clique_complex, CliqueComplex, CycleBound, GroundSet, LabeledGraph,
    SparseIntMatrix,
};

/// Commuting graph of p-elements in Σ_n with at most `a` cycles.
pub fn commuting_graph(n: usize, p: usize, a: usize) -> LabeledGraph {
    build_commuting_graph(&GroundSet::range(n), p, CycleBound::AtMost(a))
        .expect("valid bench parameters")
}

pub fn commuting_complex(n: usize, p: usize, a: usize, max_dim: usize) -> CliqueComplex {
    clique_complex(Arc::new(commuting_graph(n, p, a)), max_dim)
        .expect("bench complex fits the default budget")
}

/// Augmented boundary matrix ∂_k of a commuting complex.
pub fn boundary(n: usize, p: usize, a: usize, k: usize) -> SparseIntMatrix {
    commuting_complex(n, p, a, k)
        .boundary_matrix(k, true)
        .expect("k within stored dimensions")
}
