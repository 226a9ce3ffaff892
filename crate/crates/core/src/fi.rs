//! Injections of label sets and the maps they induce on commuting complexes.
//!
//! An injection `j: S ↪ T` pushes every vertex forward by relabeling, which
//! gives a simplicial map, a chain map, and a map on homology. When
//! `|T| - |S| >= p` the map factors through a cone: pick a p-cycle `σ` on
//! labels missed by `j`; it commutes with everything in the image, so
//! `Q ↦ j(Q) ⊔ {σ}` is a simplicial map sandwiched between `j` and the
//! constant map at `σ`.

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{CycleBound, Vertex, VertexKind};
use crate::homology::{reduced_homology_basis, HomologyBasis};
use crate::integer::Integer;
use crate::matrix::SparseIntMatrix;
use crate::perm::{GroundSet, Permutation};
use crate::simplicial::{CliqueComplex, Simplex};
use crate::snf::{smith_normal_form, solve_with, SnfResult};

/// An injective map between finite label sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Injection {
    domain: GroundSet,
    codomain: GroundSet,
    map: Vec<u32>,
}

impl Injection {
    /// `map[i]` is the image of `domain.labels()[i]`.
    pub fn new(domain: GroundSet, codomain: GroundSet, map: Vec<u32>) -> Result<Self> {
        if map.len() != domain.len() {
            return Err(Error::InvalidParameter(format!(
                "injection lists {} images for a domain of size {}",
                map.len(),
                domain.len()
            )));
        }
        if let Some(bad) = map.iter().find(|&&y| !codomain.contains(y)) {
            return Err(Error::InvalidParameter(format!(
                "image label {bad} not in codomain"
            )));
        }
        let mut sorted = map.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("map is not injective".into()));
        }
        Ok(Injection {
            domain,
            codomain,
            map,
        })
    }

    pub fn identity(set: GroundSet) -> Self {
        let map = set.labels().to_vec();
        Injection {
            domain: set.clone(),
            codomain: set,
            map,
        }
    }

    /// The inclusion `domain ⊆ codomain`.
    pub fn inclusion(domain: GroundSet, codomain: GroundSet) -> Result<Self> {
        let map = domain.labels().to_vec();
        Injection::new(domain, codomain, map)
    }

    /// A uniformly random injection.
    pub fn random(domain: GroundSet, codomain: GroundSet, rng: &mut impl Rng) -> Result<Self> {
        if domain.len() > codomain.len() {
            return Err(Error::InvalidParameter(
                "domain larger than codomain".into(),
            ));
        }
        let mut pool = codomain.labels().to_vec();
        pool.shuffle(rng);
        pool.truncate(domain.len());
        Injection::new(domain, codomain, pool)
    }

    pub fn domain(&self) -> &GroundSet {
        &self.domain
    }

    pub fn codomain(&self) -> &GroundSet {
        &self.codomain
    }

    pub fn apply(&self, label: u32) -> Option<u32> {
        self.domain.index_of(label).map(|i| self.map[i])
    }

    pub fn image(&self) -> GroundSet {
        GroundSet::new(self.map.clone()).expect("injective images are distinct")
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Injection) -> Result<Injection> {
        if first.codomain != self.domain {
            return Err(Error::DomainMismatch);
        }
        let map = first
            .map
            .iter()
            .map(|&y| self.apply(y).expect("label in domain"))
            .collect();
        Ok(Injection {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            map,
        })
    }
}

/// Degree-wise matrices `M_k : C_k(source) → C_k(target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub matrices: Vec<SparseIntMatrix>,
}

impl ChainMap {
    pub fn degree(&self, k: usize) -> Option<&SparseIntMatrix> {
        self.matrices.get(k)
    }

    /// Checks `∂ᵗ_k · M_k = M_{k-1} · ∂ˢ_k` in every stored degree, with the
    /// augmentation square `ε_T · M_0 = ε_S` in degree zero.
    pub fn check_commutes(&self, source: &CliqueComplex, target: &CliqueComplex) -> Result<()> {
        for (k, m) in self.matrices.iter().enumerate() {
            let lhs = target.boundary_matrix(k, true)?.mul(m)?;
            let rhs = if k == 0 {
                source.boundary_matrix(0, true)?
            } else {
                self.matrices[k - 1].mul(&source.boundary_matrix(k, true)?)?
            };
            if lhs != rhs {
                return Err(Error::NotAChainComplex(format!(
                    "chain map square fails in degree {k}"
                )));
            }
        }
        Ok(())
    }

    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        let matrices = self
            .matrices
            .iter()
            .zip(&first.matrices)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainMap { matrices })
    }
}

fn check_compatible(j: &Injection, source: &CliqueComplex, target: &CliqueComplex) -> Result<()> {
    if source.graph().ground() != j.domain() || target.graph().ground() != j.codomain() {
        return Err(Error::DomainMismatch);
    }
    if target.max_dim() < source.max_dim() {
        return Err(Error::InvalidParameter(
            "target stores fewer dimensions than source".into(),
        ));
    }
    let ok = match (source.graph().kind(), target.graph().kind()) {
        (
            VertexKind::BoundedPElement { p: ps, a: a_s },
            VertexKind::BoundedPElement { p: pt, a: a_t },
        ) => {
            let effective_source = a_s
                .resolve(source.graph().n(), ps)
                .min(source.graph().n() / ps);
            ps == pt
                && (a_t == CycleBound::Unbounded
                    || effective_source <= a_t.resolve(target.graph().n(), pt))
        }
        (VertexKind::PSubset { p: ps }, VertexKind::PSubset { p: pt }) => ps == pt,
        _ => false,
    };
    if !ok {
        return Err(Error::InvalidParameter(
            "source and target complexes have incompatible parameters".into(),
        ));
    }
    Ok(())
}

/// Image of each source vertex in the target's vertex list.
fn vertex_map(j: &Injection, source: &CliqueComplex, target: &CliqueComplex) -> Result<Vec<u32>> {
    source
        .graph()
        .vertices()
        .iter()
        .map(|v| {
            let w = v.relabel(j)?;
            target
                .graph()
                .index_of(&w)
                .map(|i| i as u32)
                .ok_or_else(|| {
                    Error::InvalidParameter(format!("image {w} of {v} is not a target vertex"))
                })
        })
        .collect()
}

/// Sorts `v` in place and returns the sign of the sorting permutation.
fn sort_with_sign(v: &mut [u32]) -> i64 {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut k = i;
        while k > 0 && v[k - 1] > v[k] {
            v.swap(k - 1, k);
            sign = -sign;
            k -= 1;
        }
    }
    sign
}

/// The chain map induced by relabeling along `j`, in degrees
/// `0..=source.max_dim() + 1`.
pub fn induced_simplicial_map(
    j: &Injection,
    source: &CliqueComplex,
    target: &CliqueComplex,
) -> Result<ChainMap> {
    check_compatible(j, source, target)?;
    let vmap = vertex_map(j, source, target)?;
    let matrices = (0..=source.top_stored_dim())
        .map(|k| {
            let cols = source
                .simplices(k)
                .iter()
                .map(|s| {
                    let mut img: Vec<u32> =
                        s.vertices().iter().map(|&v| vmap[v as usize]).collect();
                    let sign = sort_with_sign(&mut img);
                    let idx = target.index_of(&Simplex(img)).ok_or_else(|| {
                        Error::InvalidParameter("image simplex missing from target".into())
                    })?;
                    Ok(vec![(idx as u32, Integer::from(sign))])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SparseIntMatrix::from_columns(
                target.simplices(k).len(),
                cols,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainMap { matrices })
}

/// Action of an injection on `H̃_k`.
#[derive(Clone, Debug)]
pub struct HomologyMap {
    pub k: usize,
    /// Images of the source generators, as target chains.
    pub generator_images: Vec<Vec<Integer>>,
    /// Column `i`: target coordinates of the image of source generator `i`.
    /// Present when the target basis was computed.
    pub matrix: Option<Vec<Vec<Integer>>>,
    /// Every source generator maps to a boundary.
    pub is_zero: bool,
    pub source_group: crate::homology::HomologyGroup,
}

/// Pushes the generators of `H̃_k(source)` into the target and decides, one
/// generator at a time, whether each image is a boundary there. Also reads
/// off the images in the target's own homology basis.
pub fn induced_homology_map(
    j: &Injection,
    source: &CliqueComplex,
    target: &CliqueComplex,
    k: usize,
) -> Result<HomologyMap> {
    homology_map(j, source, target, k, true)
}

/// As [`induced_homology_map`] without computing the target basis.
pub fn homology_map_is_zero(
    j: &Injection,
    source: &CliqueComplex,
    target: &CliqueComplex,
    k: usize,
) -> Result<HomologyMap> {
    homology_map(j, source, target, k, false)
}

/// Decides whether a reduced k-cycle of one fixed complex is a boundary.
/// Degree zero uses connected components; higher degrees factor `∂_{k+1}`
/// on first use and reuse the factorization for every later query.
pub struct BoundaryTest<'a> {
    complex: &'a CliqueComplex,
    k: usize,
    smith: OnceLock<(SparseIntMatrix, SnfResult)>,
}

impl<'a> BoundaryTest<'a> {
    pub fn new(complex: &'a CliqueComplex, k: usize) -> Result<Self> {
        if k > complex.max_dim() {
            return Err(Error::OutOfRange {
                what: "homology degree",
                index: k,
                max: complex.max_dim(),
            });
        }
        Ok(BoundaryTest {
            complex,
            k,
            smith: OnceLock::new(),
        })
    }

    pub fn complex(&self) -> &CliqueComplex {
        self.complex
    }

    /// `z` must be a reduced cycle; for `k = 0` that means its coefficients
    /// sum to zero.
    pub fn is_boundary(&self, z: &[Integer]) -> Result<bool> {
        if z.len() != self.complex.simplices(self.k).len() {
            return Err(Error::Shape(format!(
                "chain of length {} in degree {}",
                z.len(),
                self.k
            )));
        }
        if self.k == 0 {
            let labels = self.complex.graph().component_labels();
            let mut sums = vec![Integer::ZERO; labels.len()];
            for (i, c) in z.iter().enumerate() {
                sums[labels[i]] = &sums[labels[i]] + c;
            }
            return Ok(sums.iter().all(Integer::is_zero));
        }
        if self.smith.get().is_none() {
            let bk1 = self.complex.boundary_matrix(self.k + 1, true)?;
            let snf = smith_normal_form(&bk1, true)?;
            let _ = self.smith.set((bk1, snf));
        }
        let (bk1, snf) = self.smith.get().expect("initialized above");
        Ok(solve_with(bk1, snf, z)?.is_some())
    }
}

/// Images of the generators of `H̃_k(source)` under `j`, tested against a
/// shared [`BoundaryTest`] of the target.
pub fn homology_map_is_zero_with(
    j: &Injection,
    source: &CliqueComplex,
    source_basis: &HomologyBasis,
    test: &BoundaryTest<'_>,
) -> Result<HomologyMap> {
    let k = test.k;
    let chain = induced_simplicial_map(j, source, test.complex)?;
    let mk = chain.degree(k).expect("degree stored");
    let generator_images = source_basis
        .generators()
        .map(|z| mk.mul_vec(z))
        .collect::<Result<Vec<_>>>()?;
    let mut is_zero = true;
    for z in &generator_images {
        if !test.is_boundary(z)? {
            is_zero = false;
            break;
        }
    }
    Ok(HomologyMap {
        k,
        generator_images,
        matrix: None,
        is_zero,
        source_group: source_basis.group(),
    })
}

fn homology_map(
    j: &Injection,
    source: &CliqueComplex,
    target: &CliqueComplex,
    k: usize,
    with_matrix: bool,
) -> Result<HomologyMap> {
    if k > source.max_dim() {
        return Err(Error::OutOfRange {
            what: "homology degree",
            index: k,
            max: source.max_dim(),
        });
    }
    let basis: HomologyBasis = reduced_homology_basis(source, k)?;
    let test = BoundaryTest::new(target, k)?;
    let mut map = homology_map_is_zero_with(j, source, &basis, &test)?;
    if with_matrix {
        let tb = reduced_homology_basis(target, k)?;
        map.matrix = Some(
            map.generator_images
                .iter()
                .map(|z| tb.coordinates(z))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(map)
}

/// Evidence that `j_*` is null-homotopic: a p-cycle `σ` on labels outside
/// `j(S)` that extends every image simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCertificate {
    pub p: usize,
    pub a: usize,
    pub source_labels: GroundSet,
    pub target_labels: GroundSet,
    pub cone_labels: GroundSet,
    pub sigma: Permutation,
    pub simplices_checked: usize,
    pub ok: bool,
    /// First simplex (vertex indices, dimension) that failed, if any.
    pub failure: Option<(usize, Vec<u32>)>,
}

impl ConeCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "a": self.a,
            "S": self.source_labels.labels(),
            "T": self.target_labels.labels(),
            "B": self.cone_labels.labels(),
            "sigma": self.sigma.to_string(),
            "simplices_checked": self.simplices_checked,
            "ok": self.ok,
        })
    }
}

/// Builds the cone vertex for `j` and checks, for every stored simplex `Q`
/// of `source`, that `j(Q) ⊔ {σ}` is a simplex of the `(p, a)` commuting
/// complex on the codomain.
pub fn cone_certificate(
    j: &Injection,
    source: &CliqueComplex,
    p: usize,
    a: usize,
) -> Result<ConeCertificate> {
    let gap = j.codomain().len() - j.domain().len();
    if gap < p {
        return Err(Error::GapSmallerThanP { gap, p });
    }
    if source.graph().ground() != j.domain() {
        return Err(Error::DomainMismatch);
    }
    let free = j.codomain().difference(&j.image());
    let cone_labels = GroundSet::new(free.labels()[..p].to_vec())?;
    let sigma = Permutation::from_cycles(j.codomain().clone(), &[cone_labels.labels()])?;

    let images: Vec<Option<Permutation>> = source
        .graph()
        .vertices()
        .iter()
        .map(|v| match v {
            Vertex::Perm(f) => f.relabel(j).ok(),
            Vertex::Subset(_) => None,
        })
        .collect();
    let vertex_ok: Vec<bool> = images
        .iter()
        .map(|img| match img {
            Some(g) => {
                g.is_bounded_p_element(p, a) && g != &sigma && g.commutes(&sigma).unwrap_or(false)
            }
            None => false,
        })
        .collect();
    let sigma_ok = sigma.is_bounded_p_element(p, a);

    let mut checked = 0;
    let mut failure = None;
    'outer: for k in 0..=source.top_stored_dim() {
        for s in source.simplices(k) {
            checked += 1;
            let vs = s.vertices();
            let mut good = sigma_ok && vs.iter().all(|&v| vertex_ok[v as usize]);
            if good {
                'pairs: for (x, &u) in vs.iter().enumerate() {
                    for &w in &vs[x + 1..] {
                        let (fu, fw) = (images[u as usize].as_ref(), images[w as usize].as_ref());
                        let (fu, fw) = (fu.expect("checked"), fw.expect("checked"));
                        if fu == fw || !fu.commutes(fw)? {
                            good = false;
                            break 'pairs;
                        }
                    }
                }
            }
            if !good {
                failure = Some((k, vs.to_vec()));
                break 'outer;
            }
        }
    }
    Ok(ConeCertificate {
        p,
        a,
        source_labels: j.domain().clone(),
        target_labels: j.codomain().clone(),
        cone_labels,
        sigma,
        simplices_checked: checked,
        ok: failure.is_none(),
        failure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorDegreeReport {
    pub ok: bool,
    pub max_support: usize,
    pub bound: usize,
    pub simplices_checked: usize,
    /// No k-simplices were stored, so the check holds trivially.
    pub vacuous: bool,
}

/// Checks that every k-simplex moves at most `(k + 1)·a·p` labels.
pub fn generator_degree_check(
    cx: &CliqueComplex,
    k: usize,
    p: usize,
    a: usize,
) -> GeneratorDegreeReport {
    let bound = (k + 1) * a * p;
    let simplices = cx.simplices(k);
    let max_support = simplices
        .iter()
        .map(|s| cx.simplex_support(s).len())
        .max()
        .unwrap_or(0);
    GeneratorDegreeReport {
        ok: max_support <= bound,
        max_support,
        bound,
        simplices_checked: simplices.len(),
        vacuous: simplices.is_empty(),
    }
}
