//! Integral homology of a chain segment `C_{k+1} → C_k → C_{k-1}`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::integer::Integer;
use crate::matrix::SparseIntMatrix;
use crate::simplicial::CliqueComplex;
use crate::snf::{rank_over_rationals, smith_normal_form_with_budget, Budget, SnfResult};

/// `Z^betti ⊕ Z/d_1 ⊕ ... ⊕ Z/d_m` in invariant-factor form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<Integer>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup::default()
    }

    pub fn free(betti: usize) -> Self {
        HomologyGroup {
            betti,
            torsion: Vec::new(),
        }
    }

    pub fn new(betti: usize, torsion: Vec<i64>) -> Self {
        HomologyGroup {
            betti,
            torsion: torsion.into_iter().map(Integer::from).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomologyOptions {
    /// Eliminate unit pivots of `∂_{k+1}` jointly with the matching columns
    /// of `∂_k` before the Smith forms are taken.
    pub reduce_segment: bool,
    pub budget: Budget,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        HomologyOptions {
            reduce_segment: false,
            budget: Budget::default(),
        }
    }
}

fn check_segment(dim_ck: usize, bk: &SparseIntMatrix, bk1: &SparseIntMatrix) -> Result<()> {
    if bk.n_cols() != dim_ck || bk1.n_rows() != dim_ck {
        return Err(Error::Shape(format!(
            "dim C_k = {dim_ck} but boundaries are {}x{} and {}x{}",
            bk.n_rows(),
            bk.n_cols(),
            bk1.n_rows(),
            bk1.n_cols()
        )));
    }
    if !bk.mul(bk1)?.is_zero() {
        return Err(Error::NotAChainComplex(format!(
            "∂_k·∂_(k+1) ≠ 0 at dim C_k = {dim_ck}"
        )));
    }
    Ok(())
}

/// `H_k = ker ∂_k / im ∂_{k+1}`.
pub fn homology(
    dim_ck: usize,
    bk: &SparseIntMatrix,
    bk1: &SparseIntMatrix,
) -> Result<HomologyGroup> {
    homology_with(dim_ck, bk, bk1, HomologyOptions::default())
}

pub fn homology_with(
    dim_ck: usize,
    bk: &SparseIntMatrix,
    bk1: &SparseIntMatrix,
    opts: HomologyOptions,
) -> Result<HomologyGroup> {
    check_segment(dim_ck, bk, bk1)?;
    if opts.reduce_segment {
        let reduced = reduce_segment(bk, bk1, opts.budget)?;
        let rank_k = smith_normal_form_with_budget(&reduced.bk, false, opts.budget)?.rank();
        let residual = smith_normal_form_with_budget(&reduced.bk1_residual, false, opts.budget)?;
        let rank_k1 = reduced.eliminated + residual.rank();
        return Ok(HomologyGroup {
            betti: dim_ck - rank_k - rank_k1,
            torsion: residual.torsion(),
        });
    }
    let snf_k = smith_normal_form_with_budget(bk, false, opts.budget)?;
    let snf_k1 = smith_normal_form_with_budget(bk1, false, opts.budget)?;
    Ok(HomologyGroup {
        betti: dim_ck - snf_k.rank() - snf_k1.rank(),
        torsion: snf_k1.torsion(),
    })
}

/// Betti number from ranks over the rationals; no torsion information.
pub fn betti_over_rationals(
    dim_ck: usize,
    bk: &SparseIntMatrix,
    bk1: &SparseIntMatrix,
) -> Result<usize> {
    check_segment(dim_ck, bk, bk1)?;
    Ok(dim_ck - rank_over_rationals(bk) - rank_over_rationals(bk1))
}

/// Reduced homology `H̃_k` of a clique complex. Needs `k <= max_dim`.
pub fn reduced_homology(cx: &CliqueComplex, k: usize) -> Result<HomologyGroup> {
    reduced_homology_with(cx, k, HomologyOptions::default())
}

pub fn reduced_homology_with(
    cx: &CliqueComplex,
    k: usize,
    opts: HomologyOptions,
) -> Result<HomologyGroup> {
    if k > cx.max_dim() {
        return Err(Error::OutOfRange {
            what: "homology degree",
            index: k,
            max: cx.max_dim(),
        });
    }
    let bk = cx.boundary_matrix(k, true)?;
    let bk1 = cx.boundary_matrix(k + 1, true)?;
    homology_with(cx.simplices(k).len(), &bk, &bk1, opts)
}

/// `H̃_0` of a clique complex read off from the connected components of its
/// graph. `H_0` is always free, so one fewer than the component count is
/// the whole answer.
pub fn reduced_h0_from_components(graph: &LabeledGraph) -> HomologyGroup {
    HomologyGroup::free(graph.connected_components().saturating_sub(1))
}

struct ReducedSegment {
    bk: SparseIntMatrix,
    bk1_residual: SparseIntMatrix,
    eliminated: usize,
}

/// Pairs off unit entries of `∂_{k+1}` (a k-simplex with a (k+1)-simplex).
/// Each pair drops a row and column of `∂_{k+1}` (with the Schur update) and
/// the matching column of `∂_k`, which is an integer combination of the
/// remaining columns since `∂_k·∂_{k+1} = 0`. Homology is unchanged.
fn reduce_segment(
    bk: &SparseIntMatrix,
    bk1: &SparseIntMatrix,
    budget: Budget,
) -> Result<ReducedSegment> {
    let partial = crate::snf::eliminate_units(bk1, budget)?;
    let mut dropped = vec![false; bk.n_cols()];
    for &r in &partial.pivot_rows {
        dropped[r] = true;
    }
    let keep: Vec<usize> = (0..bk.n_cols()).filter(|&c| !dropped[c]).collect();
    Ok(ReducedSegment {
        bk: bk.select_columns(&keep),
        eliminated: partial.pivot_rows.len(),
        bk1_residual: partial.residual,
    })
}

/// Cycle representatives generating `H_k`, with the data needed to read off
/// the class of any other cycle.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    /// Free generators, as vectors in `C_k`.
    pub free: Vec<Vec<Integer>>,
    /// Torsion generators with their orders.
    pub torsion: Vec<(Vec<Integer>, Integer)>,
    kernel: SnfResult,
    /// Position of each non-pivot column of `∂_k` in the kernel coordinates.
    kernel_slot: Vec<Option<usize>>,
    quotient: SnfResult,
    free_rows: Vec<usize>,
    torsion_rows: Vec<(usize, Integer)>,
}

impl HomologyBasis {
    pub fn group(&self) -> HomologyGroup {
        HomologyGroup {
            betti: self.free.len(),
            torsion: self.torsion.iter().map(|t| t.1.clone()).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.free.is_empty() && self.torsion.is_empty()
    }

    /// Generators in coordinate order: free first, then torsion.
    pub fn generators(&self) -> impl Iterator<Item = &Vec<Integer>> {
        self.free.iter().chain(self.torsion.iter().map(|t| &t.0))
    }

    /// Coordinates of the class of cycle `z`: integers for the free part,
    /// residues in `0..d` for each torsion generator.
    pub fn coordinates(&self, z: &[Integer]) -> Result<Vec<Integer>> {
        let kt = self
            .kernel
            .transforms
            .as_ref()
            .expect("basis built with transforms");
        if z.len() != self.kernel_slot.len() {
            return Err(Error::Shape(format!(
                "chain of length {} for dim C_k = {}",
                z.len(),
                self.kernel_slot.len()
            )));
        }
        let mut y = z.to_vec();
        kt.apply_v_inverse_unpermuted(&mut y);
        let mut w = vec![Integer::ZERO; self.quotient.n_rows];
        for (c, v) in y.into_iter().enumerate() {
            match self.kernel_slot[c] {
                Some(slot) => w[slot] = v,
                None if !v.is_zero() => {
                    return Err(Error::InvalidParameter("vector is not a cycle".into()))
                }
                None => {}
            }
        }
        self.quotient
            .transforms
            .as_ref()
            .expect("transforms")
            .apply_u_unpermuted(&mut w);
        let mut coords: Vec<Integer> = self.free_rows.iter().map(|&r| w[r].clone()).collect();
        coords.extend(self.torsion_rows.iter().map(|(r, d)| w[*r].rem_euclid(d)));
        Ok(coords)
    }
}

/// Explicit generators of `H_k` for the segment `∂_k`, `∂_{k+1}`.
pub fn homology_basis(
    dim_ck: usize,
    bk: &SparseIntMatrix,
    bk1: &SparseIntMatrix,
) -> Result<HomologyBasis> {
    homology_basis_with_budget(dim_ck, bk, bk1, Budget::default())
}

pub fn homology_basis_with_budget(
    dim_ck: usize,
    bk: &SparseIntMatrix,
    bk1: &SparseIntMatrix,
    budget: Budget,
) -> Result<HomologyBasis> {
    check_segment(dim_ck, bk, bk1)?;
    // ker ∂_k = V · span{e_c : c not a pivot column}
    let kernel = smith_normal_form_with_budget(bk, true, budget)?;
    let kt = kernel.transforms.as_ref().expect("requested transforms");
    let free_cols = kernel.free_columns();
    let mut kernel_slot = vec![None; dim_ck];
    for (i, &c) in free_cols.iter().enumerate() {
        kernel_slot[c] = Some(i);
    }
    // im ∂_{k+1} in kernel coordinates
    let cols: Vec<Vec<(u32, Integer)>> = bk1
        .columns()
        .iter()
        .map(|col| {
            let mut y = vec![Integer::ZERO; dim_ck];
            for (r, v) in col {
                y[*r as usize] = v.clone();
            }
            kt.apply_v_inverse_unpermuted(&mut y);
            y.into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| {
                    let slot = kernel_slot[c].expect("boundaries lie in the kernel");
                    (slot as u32, v)
                })
                .collect()
        })
        .collect();
    let b = SparseIntMatrix::from_columns(free_cols.len(), cols);
    let quotient = smith_normal_form_with_budget(&b, true, budget)?;
    let qt = quotient.transforms.as_ref().expect("requested transforms");

    let lift = |row: usize| -> Vec<Integer> {
        let mut w = vec![Integer::ZERO; free_cols.len()];
        w[row] = Integer::ONE;
        qt.apply_u_inverse_unpermuted(&mut w);
        let mut chain = vec![Integer::ZERO; dim_ck];
        for (slot, v) in w.into_iter().enumerate() {
            chain[free_cols[slot]] = v;
        }
        kt.apply_v_unpermuted(&mut chain);
        chain
    };
    let free_rows = quotient.free_rows();
    let torsion_rows: Vec<(usize, Integer)> = quotient
        .pivots
        .iter()
        .filter(|p| !p.value.is_unit())
        .map(|p| (p.row, p.value.clone()))
        .collect();
    let free = free_rows.iter().map(|&r| lift(r)).collect();
    let torsion = torsion_rows
        .iter()
        .map(|(r, d)| (lift(*r), d.clone()))
        .collect();
    Ok(HomologyBasis {
        free,
        torsion,
        kernel,
        kernel_slot,
        quotient,
        free_rows,
        torsion_rows,
    })
}

/// Basis of `H̃_k` of a clique complex.
pub fn reduced_homology_basis(cx: &CliqueComplex, k: usize) -> Result<HomologyBasis> {
    if k > cx.max_dim() {
        return Err(Error::OutOfRange {
            what: "homology degree",
            index: k,
            max: cx.max_dim(),
        });
    }
    homology_basis(
        cx.simplices(k).len(),
        &cx.boundary_matrix(k, true)?,
        &cx.boundary_matrix(k + 1, true)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_commuting_graph, CycleBound};
    use crate::perm::GroundSet;
    use crate::simplicial::clique_complex;
    use crate::snf::solve_in_image;
    use std::sync::Arc;

    fn matching(n: usize, max_dim: usize) -> CliqueComplex {
        let g = build_commuting_graph(&GroundSet::range(n), 2, CycleBound::AtMost(1)).unwrap();
        clique_complex(Arc::new(g), max_dim).unwrap()
    }

    #[test]
    fn named_values() {
        assert_eq!(
            reduced_homology(&matching(4, 1), 0).unwrap(),
            HomologyGroup::free(2)
        );
        assert_eq!(
            reduced_homology(&matching(5, 1), 1).unwrap(),
            HomologyGroup::free(6)
        );
        let m7 = matching(7, 2);
        assert_eq!(
            reduced_homology(&m7, 1).unwrap(),
            HomologyGroup::new(0, vec![3])
        );
        assert!(reduced_homology(&m7, 0).unwrap().is_zero());
    }

    #[test]
    fn components_agree_with_smith_form() {
        for n in 0..=8 {
            for (p, a) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
                let g = Arc::new(
                    build_commuting_graph(&GroundSet::range(n), p, CycleBound::AtMost(a)).unwrap(),
                );
                let cx = clique_complex(g.clone(), 0).unwrap();
                assert_eq!(
                    reduced_h0_from_components(&g),
                    reduced_homology(&cx, 0).unwrap(),
                    "n={n} p={p} a={a}"
                );
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(HomologyGroup::zero().to_string(), "0");
        assert_eq!(HomologyGroup::free(6).to_string(), "Z^6");
        assert_eq!(HomologyGroup::new(1, vec![3]).to_string(), "Z + Z/3");
        assert_eq!(
            serde_json::to_string(&HomologyGroup::new(0, vec![3])).unwrap(),
            r#"{"betti":0,"torsion":[3]}"#
        );
    }

    #[test]
    fn segment_checks() {
        let bad = SparseIntMatrix::from_dense(&[vec![1, 1]]);
        let also_bad = SparseIntMatrix::from_dense(&[vec![1], vec![1]]);
        assert!(matches!(
            homology(2, &bad, &also_bad),
            Err(Error::NotAChainComplex(_))
        ));
        assert!(matches!(homology(3, &bad, &also_bad), Err(Error::Shape(_))));
        assert!(reduced_homology(&matching(4, 1), 2).is_err());
    }

    #[test]
    fn bases() {
        let petersen = matching(5, 1);
        let basis = reduced_homology_basis(&petersen, 1).unwrap();
        assert_eq!((basis.free.len(), basis.torsion.len()), (6, 0));
        let d1 = petersen.boundary_matrix(1, true).unwrap();
        for z in basis.generators() {
            assert!(d1.mul_vec(z).unwrap().iter().all(Integer::is_zero));
        }
        // independence: the coordinate map sends generator i to e_i
        for (i, z) in basis.generators().enumerate() {
            let c = basis.coordinates(z).unwrap();
            for (j, v) in c.iter().enumerate() {
                assert_eq!(v, &Integer::from(i64::from(i == j)));
            }
        }

        let m7 = matching(7, 2);
        let basis = reduced_homology_basis(&m7, 1).unwrap();
        assert!(basis.free.is_empty());
        assert_eq!(basis.torsion.len(), 1);
        let (z, d) = &basis.torsion[0];
        assert_eq!(d, &Integer::from(3));
        let d2 = m7.boundary_matrix(2, true).unwrap();
        assert!(solve_in_image(&d2, z).unwrap().is_none());
        let three_z: Vec<Integer> = z.iter().map(|v| v * &Integer::from(3)).collect();
        assert!(solve_in_image(&d2, &three_z).unwrap().is_some());

        let empty = reduced_homology_basis(&matching(8, 2), 1).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn segment_reduction_agrees_with_direct_path() {
        let opts = HomologyOptions {
            reduce_segment: true,
            ..Default::default()
        };
        for n in 2..=8 {
            for (p, a) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
                let g =
                    build_commuting_graph(&GroundSet::range(n), p, CycleBound::AtMost(a)).unwrap();
                let cx = clique_complex(Arc::new(g), 2).unwrap();
                for k in 0..=2 {
                    let direct = reduced_homology(&cx, k).unwrap();
                    let reduced = reduced_homology_with(&cx, k, opts).unwrap();
                    assert_eq!(direct, reduced, "n={n} p={p} a={a} k={k}");
                    let bk = cx.boundary_matrix(k, true).unwrap();
                    let bk1 = cx.boundary_matrix(k + 1, true).unwrap();
                    assert_eq!(
                        betti_over_rationals(cx.simplices(k).len(), &bk, &bk1).unwrap(),
                        direct.betti
                    );
                }
            }
        }
    }

    #[test]
    fn torsion_segment() {
        // C_1 = Z -> C_0 = Z by 2: H_0 = Z/2
        let bk = SparseIntMatrix::zeros(0, 1);
        let bk1 = SparseIntMatrix::from_dense(&[vec![2]]);
        assert_eq!(
            homology(1, &bk, &bk1).unwrap(),
            HomologyGroup::new(0, vec![2])
        );
        let basis = homology_basis(1, &bk, &bk1).unwrap();
        assert_eq!(basis.torsion.len(), 1);
        assert_eq!(
            basis.coordinates(&[Integer::from(5)]).unwrap(),
            vec![Integer::ONE]
        );
    }
}
