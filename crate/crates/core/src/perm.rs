//! Permutations of finite label sets.
//!
//! A [`Permutation`] is stored canonically as its sorted ground set together
//! with the image of each ground label, so equality and ordering are plain
//! structural comparisons. Labels are arbitrary positive integers: maps
//! between different finite sets are first-class and nothing is ever
//! renumbered behind the caller's back.

use std::fmt;

use num_integer::Integer as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fi::Injection;

/// A finite set of positive integer labels, kept sorted and duplicate free.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct GroundSet(Vec<u32>);

impl GroundSet {
    /// Builds a ground set from labels in any order.
    pub fn new(mut labels: Vec<u32>) -> Result<Self> {
        labels.sort_unstable();
        if labels.first() == Some(&0) {
            return Err(Error::InvalidParameter(
                "labels must be positive integers".into(),
            ));
        }
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(
                "duplicate label in ground set".into(),
            ));
        }
        Ok(GroundSet(labels))
    }

    /// The standard set `{1, ..., n}`.
    pub fn range(n: usize) -> Self {
        GroundSet((1..=n as u32).collect())
    }

    pub fn empty() -> Self {
        GroundSet(Vec::new())
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: u32) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    /// Position of `label` in the sorted label list.
    pub fn index_of(&self, label: u32) -> Option<usize> {
        self.0.binary_search(&label).ok()
    }

    pub fn is_disjoint(&self, other: &GroundSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &GroundSet) -> GroundSet {
        let mut v: Vec<u32> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        GroundSet(v)
    }

    /// Labels of `self` that are not in `other`.
    pub fn difference(&self, other: &GroundSet) -> GroundSet {
        GroundSet(
            self.0
                .iter()
                .copied()
                .filter(|l| !other.contains(*l))
                .collect(),
        )
    }
}

impl TryFrom<Vec<u32>> for GroundSet {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        GroundSet::new(v)
    }
}

impl From<GroundSet> for Vec<u32> {
    fn from(g: GroundSet) -> Vec<u32> {
        g.0
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// A bijection of a [`GroundSet`]; `image[i]` is the image of `ground.labels()[i]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    ground: GroundSet,
    image: Vec<u32>,
}

/// Disjoint cycles of a permutation, fixed points omitted.
///
/// Each cycle starts with its minimum label; cycles are sorted by that label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<u32>>,
}

impl CycleDecomposition {
    pub fn cycle_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycles.iter().map(Vec::len)
    }

    /// Rebuilds the permutation on `ground`.
    pub fn to_permutation(&self, ground: &GroundSet) -> Result<Permutation> {
        let cycles: Vec<&[u32]> = self.cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(ground.clone(), &cycles)
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycles.is_empty() {
            return write!(f, "()");
        }
        for c in &self.cycles {
            write!(f, "(")?;
            for (i, l) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{l}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Permutation {
    pub fn identity(ground: GroundSet) -> Self {
        let image = ground.labels().to_vec();
        Permutation { ground, image }
    }

    /// Builds a permutation from the image of each ground label (in ground order).
    pub fn from_images(ground: GroundSet, image: Vec<u32>) -> Result<Self> {
        if image.len() != ground.len() {
            return Err(Error::InvalidParameter(format!(
                "image has {} entries for a ground set of size {}",
                image.len(),
                ground.len()
            )));
        }
        let mut seen = vec![false; ground.len()];
        for &y in &image {
            let idx = ground.index_of(y).ok_or_else(|| {
                Error::InvalidParameter(format!("image label {y} not in ground set"))
            })?;
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::InvalidParameter(format!(
                    "label {y} hit twice; not a bijection"
                )));
            }
        }
        Ok(Permutation { ground, image })
    }

    /// Builds a permutation from disjoint cycles; labels not mentioned are fixed.
    pub fn from_cycles(ground: GroundSet, cycles: &[&[u32]]) -> Result<Self> {
        let mut image = ground.labels().to_vec();
        let mut touched = vec![false; ground.len()];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let idx = ground.index_of(x).ok_or_else(|| {
                    Error::InvalidParameter(format!("cycle label {x} not in ground set"))
                })?;
                if std::mem::replace(&mut touched[idx], true) {
                    return Err(Error::InvalidParameter(format!(
                        "label {x} appears in two cycles"
                    )));
                }
                image[idx] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { ground, image })
    }

    /// Parses cycle notation such as `"(1 2)(3 4)"`; `"()"` is the identity.
    pub fn parse_cycles(ground: GroundSet, text: &str) -> Result<Self> {
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let end = body
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let cycle = body[..end]
                .split(|c: char| c == ' ' || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|e| Error::Parse(format!("bad label {t:?}: {e}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body[end + 1..].trim_start();
        }
        let refs: Vec<&[u32]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(ground, &refs)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn images(&self) -> &[u32] {
        &self.image
    }

    /// Image of a label; labels outside the ground set are returned unchanged.
    pub fn apply(&self, label: u32) -> u32 {
        match self.ground.index_of(label) {
            Some(i) => self.image[i],
            None => label,
        }
    }

    /// Image array in index form: `f(labels[i]) = labels[out[i]]`.
    pub fn index_images(&self) -> Vec<usize> {
        self.image
            .iter()
            .map(|&y| self.ground.index_of(y).expect("image label in ground"))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.as_slice() == self.ground.labels()
    }

    /// `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        let image = other.image.iter().map(|&y| self.apply(y)).collect();
        Ok(Permutation {
            ground: self.ground.clone(),
            image,
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (i, &y) in self.image.iter().enumerate() {
            let j = self.ground.index_of(y).expect("image label in ground");
            image[j] = self.ground.labels()[i];
        }
        Permutation {
            ground: self.ground.clone(),
            image,
        }
    }

    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let labels = self.ground.labels();
        let idx = self.index_images();
        let mut seen = vec![false; labels.len()];
        let mut cycles = Vec::new();
        // ground labels are ascending, so the first unseen label of a cycle is its minimum
        for start in 0..labels.len() {
            if seen[start] || idx[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(labels[i]);
                i = idx[i];
            }
            cycles.push(cycle);
        }
        CycleDecomposition { cycles }
    }

    /// Least `m >= 1` with `self^m = id`: the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_decomposition()
            .cycle_lengths()
            .fold(1u64, |acc, len| acc.lcm(&(len as u64)))
    }

    /// True iff the permutation is a product of between 1 and `a` disjoint
    /// cycles, all of length exactly `p`.
    pub fn is_bounded_p_element(&self, p: usize, a: usize) -> bool {
        let cd = self.cycle_decomposition();
        !cd.cycles.is_empty() && cd.cycles.len() <= a && cd.cycle_lengths().all(|l| l == p)
    }

    pub fn commutes(&self, other: &Permutation) -> Result<bool> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        Ok(self
            .image
            .iter()
            .zip(other.image.iter())
            .all(|(&fx, &gx)| self.apply(gx) == other.apply(fx)))
    }

    /// Labels moved by the permutation.
    pub fn support(&self) -> GroundSet {
        GroundSet(
            self.ground
                .labels()
                .iter()
                .zip(self.image.iter())
                .filter(|(x, y)| x != y)
                .map(|(x, _)| *x)
                .collect(),
        )
    }

    /// Pushes the permutation forward along an injection: acts as `j ∘ f ∘ j⁻¹`
    /// on the image of `j` and fixes every other codomain label.
    pub fn relabel(&self, j: &Injection) -> Result<Permutation> {
        if &self.ground != j.domain() {
            return Err(Error::DomainMismatch);
        }
        let target = j.codomain().clone();
        let mut image = target.labels().to_vec();
        for (x, y) in self.ground.labels().iter().zip(self.image.iter()) {
            let jx = j.apply(*x).expect("label in domain");
            let idx = target.index_of(jx).expect("injection lands in codomain");
            image[idx] = j.apply(*y).expect("label in domain");
        }
        Ok(Permutation {
            ground: target,
            image,
        })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.cycle_decomposition().fmt(f)
    }
}
