//! Hilbert bases of cone semigroups `σ ∩ N`, embedding dimensions and
//! binomial relations among the generators of `σ∨ ∩ M`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::cone::{triangulate, Cone};
use crate::error::{Error, Result};
use crate::lattice::{self, LatticeVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub cone: Cone,
    /// Sorted lexicographically.
    pub members: Vec<LatticeVector>,
}

impl HilbertBasis {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A strictly positive grading on `σ ∖ {0}`: the sum of the facet normals
/// (for a ray, its single normal).
pub fn grading(c: &Cone) -> LatticeVector {
    c.facets().iter().fold(LatticeVector::zero(c.lattice_rank()), |acc, n| &acc + n)
}

/// The minimal generating system of `σ ∩ N`.
pub fn hilbert_basis(c: &Cone) -> Result<HilbertBasis> {
    if c.dim() == 0 {
        return Ok(HilbertBasis { cone: c.clone(), members: Vec::new() });
    }
    let mut candidates: BTreeSet<LatticeVector> = c.rays().iter().cloned().collect();
    for piece in triangulate(c) {
        for p in lattice::parallelepiped_points(&piece)? {
            if !p.is_zero() {
                candidates.insert(p);
            }
        }
    }
    Ok(HilbertBasis { cone: c.clone(), members: sieve(c, candidates.into_iter().collect()) })
}

/// Keeps the irreducible elements of a candidate set that contains every
/// irreducible element of the semigroup.
fn sieve(c: &Cone, candidates: Vec<LatticeVector>) -> Vec<LatticeVector> {
    let w = grading(c);
    let mut by_degree: Vec<(BigInt, LatticeVector)> = candidates.into_iter().map(|x| (w.dot(&x), x)).collect();
    by_degree.sort();
    let mut basis: Vec<LatticeVector> = Vec::new();
    for (_, x) in by_degree {
        if !basis.iter().any(|h| c.contains(&(&x - h))) {
            basis.push(x);
        }
    }
    basis.sort();
    basis
}

/// `#Hilb(σ∨)`, the embedding dimension of the affine toric variety.
pub fn embedding_dimension(c: &Cone) -> Result<usize> {
    if !c.is_full_dimensional() {
        return Err(Error::Precondition(format!("{c} is not full-dimensional, so its dual is not pointed")));
    }
    let dual = c.dual().to_cone()?;
    Ok(hilbert_basis(&dual)?.len())
}

/// A binomial `z^lhs = z^rhs` over the dual Hilbert basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Relation {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
}

/// The dual Hilbert basis and binomial relations among its members that
/// generate every relation of total degree at most `degree_bound`.
///
/// Monomials are grouped into fibres of the map to `M`. Fibres are visited
/// by increasing grading; inside a fibre, monomials already connected by
/// multiples of earlier relations are merged, and each remaining component
/// is joined to the first by one new relation.
pub fn toric_relations(c: &Cone, degree_bound: u32) -> Result<(Vec<LatticeVector>, Vec<Relation>)> {
    if !c.is_full_dimensional() {
        return Err(Error::Precondition(format!("{c} is not full-dimensional")));
    }
    let dual = c.dual().to_cone()?;
    let basis = hilbert_basis(&dual)?.members;
    let w = grading(&dual);
    let n = basis.len();

    let mut fibres: BTreeMap<(BigInt, LatticeVector), Vec<Vec<u32>>> = BTreeMap::new();
    let mut exps = vec![0u32; n];
    enumerate_monomials(&mut exps, 0, degree_bound, &mut |e| {
        if e.iter().all(|&x| x == 0) {
            return;
        }
        let image = e
            .iter()
            .zip(&basis)
            .fold(LatticeVector::zero(c.lattice_rank()), |acc, (&k, b)| &acc + &b.scale(&BigInt::from(k)));
        fibres.entry((w.dot(&image), image)).or_default().push(e.to_vec());
    });

    let mut relations: Vec<Relation> = Vec::new();
    for (_, mut monos) in fibres {
        if monos.len() < 2 {
            continue;
        }
        monos.sort();
        let index: BTreeMap<Vec<u32>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut parent: Vec<usize> = (0..monos.len()).collect();
        for (i, a) in monos.iter().enumerate() {
            for r in &relations {
                for (p, q) in [(&r.lhs, &r.rhs), (&r.rhs, &r.lhs)] {
                    if a.iter().zip(p).all(|(x, y)| x >= y) {
                        let b: Vec<u32> = a.iter().zip(p).zip(q).map(|((x, y), z)| x - y + z).collect();
                        if let Some(&j) = index.get(&b) {
                            union(&mut parent, i, j);
                        }
                    }
                }
            }
        }
        // one relation per extra component, from the lex-first monomial of
        // the first component to the lex-first monomial of each other one
        let mut reps: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..monos.len() {
            let root = find(&mut parent, i);
            reps.entry(root).or_insert(i);
        }
        let mut firsts: Vec<usize> = reps.values().copied().collect();
        firsts.sort();
        for &j in &firsts[1..] {
            relations.push(Relation { lhs: monos[firsts[0]].clone(), rhs: monos[j].clone() });
        }
    }
    Ok((basis, relations))
}

fn enumerate_monomials(exps: &mut Vec<u32>, i: usize, budget: u32, f: &mut impl FnMut(&[u32])) {
    if i == exps.len() {
        f(exps);
        return;
    }
    for k in 0..=budget {
        exps[i] = k;
        enumerate_monomials(exps, i + 1, budget - k, f);
    }
    exps[i] = 0;
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let ra = find(parent, a);
    let rb = find(parent, b);
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}
