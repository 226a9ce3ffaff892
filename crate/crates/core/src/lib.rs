//! Bounded commuting complexes of symmetric groups and hypergraph matching
//! complexes, with exact integral homology and the maps induced by injections
//! of label sets.
//!
//! The pipeline is
//! [`build_commuting_graph`] / [`build_kneser_graph`] → [`CliqueComplex`] →
//! boundary matrices → [`smith_normal_form`] → [`HomologyGroup`].
//! Transition maps along injections live in [`fi`].

pub mod cache;
pub mod error;
pub mod fi;
pub mod graph;
pub mod homology;
pub mod integer;
pub mod matrix;
pub mod perm;
pub mod simplicial;
pub mod snf;
pub mod verify;

pub use error::{Error, Result};
pub use fi::{
    cone_certificate, generator_degree_check, induced_homology_map, induced_simplicial_map,
    ChainMap, ConeCertificate, HomologyMap, Injection,
};
pub use graph::{
    build_commuting_graph, build_kneser_graph, CycleBound, LabeledGraph, Vertex, VertexKind,
};
pub use homology::{homology, homology_basis, reduced_homology, HomologyBasis, HomologyGroup};
pub use integer::Integer;
pub use matrix::SparseIntMatrix;
pub use perm::{CycleDecomposition, GroundSet, Permutation};
pub use simplicial::{clique_complex, clique_complex_with_budget, CliqueComplex, Simplex};
pub use snf::{smith_normal_form, solve_in_image, Budget, SnfResult};
