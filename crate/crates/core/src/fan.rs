//! Fans: finite collections of cones meeting along common faces.

use std::collections::BTreeSet;
use std::fmt;

use crate::cone::{self, intersection, is_face, make_cone, Cone};
use crate::error::{Error, Result};
use num_traits::Zero;

use crate::lattice::{self, LatticeVector};

/// A fan stored through its maximal cones, kept in canonical (sorted) order
/// so that equality is equality of sets of cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    cones: Vec<Cone>,
}

impl Fan {
    /// Assembles a fan without the pairwise compatibility check. Used for
    /// subdivisions that are compatible by construction; tests re-validate
    /// them with [`make_fan`].
    pub(crate) fn from_trusted(rank: usize, cones: Vec<Cone>) -> Fan {
        let mut cones = drop_non_maximal(cones);
        cones.sort();
        Fan { rank, cones }
    }

    pub fn empty(rank: usize) -> Fan {
        Fan { rank, cones: Vec::new() }
    }

    pub fn lattice_rank(&self) -> usize {
        self.rank
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.cones
    }

    /// `Gen(Δ)`: all ray generators, sorted and deduplicated.
    pub fn rays(&self) -> Vec<LatticeVector> {
        let set: BTreeSet<&LatticeVector> = self.cones.iter().flat_map(|c| c.rays()).collect();
        set.into_iter().cloned().collect()
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        self.cones.iter().any(|c| c.contains(x))
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    pub fn is_basic(&self) -> bool {
        self.cones.iter().all(Cone::is_basic)
    }

    /// Every cone of the fan, faces included.
    pub fn all_cones(&self) -> Vec<Cone> {
        let set: BTreeSet<Cone> = self.cones.iter().flat_map(cone::faces).collect();
        set.into_iter().collect()
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fan[")?;
        for (i, c) in self.cones.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

fn drop_non_maximal(cones: Vec<Cone>) -> Vec<Cone> {
    let unique: BTreeSet<Cone> = cones.into_iter().collect();
    let unique: Vec<Cone> = unique.into_iter().collect();
    unique
        .iter()
        .filter(|c| !unique.iter().any(|d| d != *c && d.dim() > c.dim() && is_face(c, d)))
        .cloned()
        .collect()
}

/// Validates that every pairwise intersection is a face of both cones and
/// keeps only the maximal cones.
pub fn make_fan(cs: &[Cone]) -> Result<Fan> {
    let Some(first) = cs.first() else {
        return Err(Error::Precondition("a fan needs at least one cone; use Fan::empty".into()));
    };
    let rank = first.lattice_rank();
    if let Some(bad) = cs.iter().find(|c| c.lattice_rank() != rank) {
        return Err(Error::RankMismatch { expected: rank, found: bad.lattice_rank() });
    }
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let meet = intersection(&cs[i], &cs[j])?;
            if !is_face(&meet, &cs[i]) || !is_face(&meet, &cs[j]) {
                return Err(Error::IncompatibleCones { first: i, second: j });
            }
        }
    }
    Ok(Fan::from_trusted(rank, cs.to_vec()))
}

/// Stellar subdivision of `f` at the primitive vector `v`.
pub fn star_subdivision(f: &Fan, v: &LatticeVector) -> Result<Fan> {
    if !v.is_primitive() {
        return Err(Error::NotPrimitive(v.to_string()));
    }
    if !f.contains(v) {
        return Err(Error::OutsideSupport(v.to_string()));
    }
    let mut out = Vec::new();
    for c in &f.cones {
        if !c.contains(v) || c.has_ray(v) {
            out.push(c.clone());
            continue;
        }
        for n in c.facets() {
            if n.dot(v).is_zero() {
                continue;
            }
            let mut gens = c.rays_on(n);
            gens.push(v.clone());
            out.push(make_cone(&gens)?);
        }
        if c.dim() == 1 {
            // v on the ray itself is excluded above, so this is unreachable
            return Err(Error::Invariant(format!("{v} inside the ray {c}")));
        }
    }
    Ok(Fan::from_trusted(f.rank, out))
}

/// The star subdivision at a point of some cone of multiplicity > 1 that
/// strictly lowers the largest multiplicity among the new cones below that
/// of the subdivided cone, or `None` when `c` is basic.
pub fn multiplicity_reducing_point(c: &Cone) -> Result<Option<LatticeVector>> {
    if !c.is_simplicial() {
        return Err(Error::NotSimplicial(c.to_string()));
    }
    if c.is_basic() {
        return Ok(None);
    }
    let pts = lattice::parallelepiped_points(c.rays())?;
    // a nonzero point Σ λᵢ vᵢ with 0 ≤ λᵢ < 1; each new cone replaces one vᵢ
    // by it and has multiplicity λᵢ·mult(c) < mult(c)
    Ok(pts.into_iter().find(|p| !p.is_zero()).map(|p| lattice::primitive(&p).expect("nonzero")))
}
