//! Strongly convex rational polyhedral cones.
//!
//! A [`Cone`] always carries both descriptions: its primitive extreme ray
//! generators and its facet inequalities. Facets are found by brute force
//! over subsets of generators, which is plenty for rank ≤ 4 and a few dozen
//! generators.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, LatticeVector};
use crate::linalg;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    rank: usize,
    dim: usize,
    rays: Vec<LatticeVector>,
    facets: Vec<LatticeVector>,
    equations: Vec<LatticeVector>,
}

/// Dual of a cone: `pos(generators) + lin(lineality)`. The lineality space is
/// nonzero exactly when the primal cone is not full-dimensional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCone {
    pub generators: Vec<LatticeVector>,
    pub lineality: Vec<LatticeVector>,
}

impl DualCone {
    /// The dual as a pointed [`Cone`]; fails when it has a lineality space.
    pub fn to_cone(&self) -> Result<Cone> {
        if !self.lineality.is_empty() {
            let shown: Vec<String> = self.lineality.iter().map(ToString::to_string).collect();
            return Err(Error::NotPointed(format!("dual has lineality spanned by {}", shown.join(", "))));
        }
        make_cone(&self.generators)
    }
}

/// Facet normals and equations of `pos(gens)`, which need not be pointed.
///
/// The equations form a saturated basis of `pos(gens)^⊥`. Each facet normal
/// is primitive, orthogonal to every equation, nonnegative on all
/// generators and zero on a codimension-one face.
pub fn facets_of(rank: usize, gens: &[LatticeVector]) -> (Vec<LatticeVector>, Vec<LatticeVector>) {
    let gens: Vec<LatticeVector> = dedup_primitive(gens);
    let equations = lattice::integer_kernel(rank, &gens);
    let dim = rank - equations.len();
    let mut facets = BTreeSet::new();
    if dim == 0 {
        return (Vec::new(), equations);
    }
    let k = dim - 1;
    let mut seen = BTreeSet::new();
    for_each_subset(gens.len(), k, |idx| {
        let mut rows: Vec<LatticeVector> = idx.iter().map(|&i| gens[i].clone()).collect();
        if k > 0 && linalg::rank_int(&rows) < k {
            return;
        }
        rows.extend(equations.iter().cloned());
        let ker = lattice::integer_kernel(rank, &rows);
        if ker.len() != 1 {
            return;
        }
        let n = &ker[0];
        if !seen.insert(n.clone()) {
            return;
        }
        let mut pos = false;
        let mut neg = false;
        for g in &gens {
            let s = n.dot(g);
            if s.is_positive() {
                pos = true;
            } else if s.is_negative() {
                neg = true;
            }
        }
        match (pos, neg) {
            (true, false) => {
                facets.insert(n.clone());
            }
            (false, true) => {
                facets.insert(-n);
            }
            _ => {}
        }
    });
    (facets.into_iter().collect(), equations)
}

fn dedup_primitive(gens: &[LatticeVector]) -> Vec<LatticeVector> {
    let set: BTreeSet<LatticeVector> =
        gens.iter().filter(|g| !g.is_zero()).map(|g| lattice::primitive(g).expect("nonzero")).collect();
    set.into_iter().collect()
}

/// Calls `f` on every `k`-subset of `0..n`, in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    'outer: loop {
        f(&idx);
        let mut i = k;
        while i > 0 {
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                continue 'outer;
            }
        }
        return;
    }
}

/// Builds `pos(vs)`, keeping only primitive extreme ray generators.
pub fn make_cone(vs: &[LatticeVector]) -> Result<Cone> {
    let Some(first) = vs.first() else {
        return Err(Error::Precondition("a cone needs at least one generator".into()));
    };
    let rank = first.rank();
    if let Some(bad) = vs.iter().find(|v| v.rank() != rank) {
        return Err(Error::RankMismatch { expected: rank, found: bad.rank() });
    }
    let gens = dedup_primitive(vs);
    if gens.is_empty() {
        return Ok(Cone::zero(rank));
    }
    let (facets, equations) = facets_of(rank, &gens);
    let dim = rank - equations.len();
    let mut normals = facets.clone();
    normals.extend(equations.iter().cloned());
    if linalg::rank_int(&normals) < rank {
        let shown: Vec<String> = vs.iter().map(ToString::to_string).collect();
        return Err(Error::NotPointed(format!("pos{{{}}}", shown.join(", "))));
    }
    let rays: Vec<LatticeVector> = gens
        .into_iter()
        .filter(|g| {
            let mut tight: Vec<LatticeVector> = facets.iter().filter(|f| f.dot(g).is_zero()).cloned().collect();
            tight.extend(equations.iter().cloned());
            linalg::rank_int(&tight) == rank - 1
        })
        .collect();
    Ok(Cone { rank, dim, rays, facets, equations })
}

/// `pos(vs)` from integer coordinate rows; convenient in tests and examples.
pub fn cone_from_i64(rows: &[&[i64]]) -> Result<Cone> {
    make_cone(&rows.iter().map(|r| LatticeVector::from_i64s(r)).collect::<Vec<_>>())
}

impl Cone {
    pub fn zero(rank: usize) -> Cone {
        Cone {
            rank,
            dim: 0,
            rays: Vec::new(),
            facets: Vec::new(),
            equations: (0..rank).map(|i| LatticeVector::unit(rank, i)).collect(),
        }
    }

    /// Rank of the ambient lattice.
    pub fn lattice_rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Gen(σ)`, in lexicographic order.
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// Primitive inward facet normals.
    pub fn facets(&self) -> &[LatticeVector] {
        &self.facets
    }

    /// Saturated basis of `σ^⊥`.
    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.rank
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    pub fn is_basic(&self) -> bool {
        self.is_simplicial() && self.multiplicity().map_or(false, |m| m == BigInt::from(1))
    }

    pub fn multiplicity(&self) -> Result<BigInt> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial(self.to_string()));
        }
        lattice::lattice_determinant(&self.rays)
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        self.equations.iter().all(|e| e.dot(x).is_zero()) && self.facets.iter().all(|f| !f.dot(x).is_negative())
    }

    pub fn contains_rational(&self, x: &[BigRational]) -> bool {
        let pair = |v: &LatticeVector| {
            v.coords()
                .iter()
                .zip(x)
                .fold(BigRational::zero(), |acc, (a, b)| acc + BigRational::from_integer(a.clone()) * b)
        };
        self.equations.iter().all(|e| pair(e).is_zero()) && self.facets.iter().all(|f| !pair(f).is_negative())
    }

    /// Relative interior membership.
    pub fn contains_in_relative_interior(&self, x: &LatticeVector) -> bool {
        self.equations.iter().all(|e| e.dot(x).is_zero()) && self.facets.iter().all(|f| f.dot(x).is_positive())
    }

    pub fn has_ray(&self, v: &LatticeVector) -> bool {
        self.rays.binary_search(v).is_ok()
    }

    pub fn dual(&self) -> DualCone {
        dual_cone(self)
    }

    /// Saturated basis of the lattice `N_σ = lin(σ) ∩ N`.
    pub fn span_basis(&self) -> Vec<LatticeVector> {
        lattice::saturated_basis(self.rank, &self.rays)
    }

    /// The face cut out by the supporting functional `m`, which must be
    /// nonnegative on the cone.
    pub fn face_of(&self, m: &LatticeVector) -> Result<Cone> {
        if self.rays.iter().any(|r| m.dot(r).is_negative()) {
            return Err(Error::Precondition(format!("{m} is not in the dual of {self}")));
        }
        let sub: Vec<LatticeVector> = self.rays.iter().filter(|r| m.dot(r).is_zero()).cloned().collect();
        if sub.is_empty() {
            return Ok(Cone::zero(self.rank));
        }
        make_cone(&sub)
    }

    /// Rays lying on the given facet normal.
    pub fn rays_on(&self, normal: &LatticeVector) -> Vec<LatticeVector> {
        self.rays.iter().filter(|r| normal.dot(r).is_zero()).cloned().collect()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pos{{")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

pub fn dual_cone(c: &Cone) -> DualCone {
    DualCone { generators: c.facets.clone(), lineality: c.equations.clone() }
}

/// All faces, from `{0}` up to `c` itself, sorted by dimension and then by
/// rays.
pub fn faces(c: &Cone) -> Vec<Cone> {
    let mut found: BTreeSet<(usize, Vec<LatticeVector>)> = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack = vec![c.clone()];
    while let Some(f) = stack.pop() {
        if !found.insert((f.dim, f.rays.clone())) {
            continue;
        }
        for n in &f.facets {
            let sub = f.rays_on(n);
            let face = if sub.is_empty() { Cone::zero(c.rank) } else { make_cone(&sub).expect("face of a pointed cone") };
            stack.push(face);
        }
        if f.dim == 1 {
            stack.push(Cone::zero(c.rank));
        }
        out.push(f);
    }
    if c.dim == 0 {
        return vec![c.clone()];
    }
    out.sort_by(|a, b| (a.dim, &a.rays).cmp(&(b.dim, &b.rays)));
    out
}

/// `σ₁ ∩ σ₂`, computed by dualizing `σ₁∨ + σ₂∨`.
pub fn intersection(a: &Cone, b: &Cone) -> Result<Cone> {
    if a.rank != b.rank {
        return Err(Error::RankMismatch { expected: a.rank, found: b.rank });
    }
    let mut d: Vec<LatticeVector> = Vec::new();
    d.extend(a.facets.iter().cloned());
    d.extend(b.facets.iter().cloned());
    for e in a.equations.iter().chain(&b.equations) {
        d.push(e.clone());
        d.push(-e);
    }
    if d.is_empty() {
        return Err(Error::NotPointed("intersection of two whole spaces".into()));
    }
    let (rays, _) = facets_of(a.rank, &d);
    if rays.is_empty() {
        return Ok(Cone::zero(a.rank));
    }
    make_cone(&rays)
}

/// Whether `sub` is a face of `of`.
pub fn is_face(sub: &Cone, of: &Cone) -> bool {
    if sub.rank != of.rank || !sub.rays.iter().all(|r| of.has_ray(r)) {
        return false;
    }
    let tight: Vec<&LatticeVector> = of.facets.iter().filter(|f| sub.rays.iter().all(|r| f.dot(r).is_zero())).collect();
    let cut: Vec<&LatticeVector> = of.rays.iter().filter(|r| tight.iter().all(|f| f.dot(r).is_zero())).collect();
    cut.len() == sub.rays.len()
}

/// A triangulation of `c` into simplicial cones using only its rays
/// (pulling the lexicographically first ray recursively).
pub fn triangulate(c: &Cone) -> Vec<Vec<LatticeVector>> {
    if c.is_simplicial() {
        return vec![c.rays.clone()];
    }
    let apex = c.rays[0].clone();
    let mut out = Vec::new();
    for n in &c.facets {
        if n.dot(&apex).is_zero() {
            continue;
        }
        let facet = make_cone(&c.rays_on(n)).expect("facet of a pointed cone");
        for mut piece in triangulate(&facet) {
            piece.push(apex.clone());
            piece.sort();
            out.push(piece);
        }
    }
    out.sort();
    out
}

/// Solves `x = Σ λᵢ gᵢ` with `λ ≥ 0` for some simplicial piece of a
/// triangulation; an independent membership oracle for tests.
pub fn in_cone_by_combination(c: &Cone, x: &LatticeVector) -> bool {
    if x.is_zero() {
        return true;
    }
    triangulate(c).iter().any(|piece| {
        let a: Vec<Vec<BigRational>> = (0..c.rank)
            .map(|i| piece.iter().map(|g| BigRational::from_integer(g[i].clone())).collect())
            .collect();
        match linalg::solve(&a, &x.to_rational(), piece.len()) {
            Some(lambda) => {
                // the solve picks one solution; pieces are simplicial so it is unique
                let back: Vec<BigRational> = (0..c.rank)
                    .map(|i| {
                        piece.iter().zip(&lambda).fold(BigRational::zero(), |acc, (g, l)| {
                            acc + BigRational::from_integer(g[i].clone()) * l
                        })
                    })
                    .collect();
                back == x.to_rational() && lambda.iter().all(|l| !l.is_negative())
            }
            None => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    #[test]
    fn make_cone_examples() {
        let c = cone_from_i64(&[&[1, 0], &[1, 1], &[4, 5]]).unwrap();
        assert_eq!(c.rays(), &[lv(&[1, 0]), lv(&[4, 5])]);
        let orth = cone_from_i64(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(orth.facets(), &[lv(&[0, 1]), lv(&[1, 0])]);
        assert!(matches!(cone_from_i64(&[&[1, 0], &[-1, 0]]), Err(Error::NotPointed(_))));
        assert!(matches!(cone_from_i64(&[&[1, 0], &[-1, 0], &[0, 1]]), Err(Error::NotPointed(_))));
    }

    #[test]
    fn dual_examples() {
        let c = cone_from_i64(&[&[1, 0], &[4, 5]]).unwrap();
        assert_eq!(c.dual().to_cone().unwrap().rays(), &[lv(&[0, 1]), lv(&[5, -4])]);
        let orth = cone_from_i64(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(orth.dual().to_cone().unwrap(), orth);
        let c = cone_from_i64(&[&[0, 1], &[2, 1]]).unwrap();
        assert_eq!(c.dual().to_cone().unwrap().rays(), &[lv(&[-1, 2]), lv(&[1, 0])]);
        let ray = cone_from_i64(&[&[1, 1, 0]]).unwrap();
        let d = ray.dual();
        assert_eq!(d.lineality.len(), 2);
        assert!(d.to_cone().is_err());
    }

    #[test]
    fn face_counts() {
        let c = cone_from_i64(&[&[1, 0], &[4, 5]]).unwrap();
        assert_eq!(faces(&c).len(), 4);
        let sq = cone_from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap();
        let fs = faces(&sq);
        assert_eq!(fs.len(), 10);
        assert_eq!(fs.iter().filter(|f| f.dim() == 2).count(), 4);
        let ray = cone_from_i64(&[&[2, 3]]).unwrap();
        assert_eq!(faces(&ray).len(), 2);
        for f in &fs {
            assert!(is_face(f, &sq));
        }
    }

    #[test]
    fn multiplicity_examples() {
        let c = cone_from_i64(&[&[1, 0], &[4, 5]]).unwrap();
        assert_eq!(c.multiplicity().unwrap(), BigInt::from(5));
        assert!(c.is_simplicial() && !c.is_basic());
        let c = cone_from_i64(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]).unwrap();
        assert_eq!(c.multiplicity().unwrap(), BigInt::from(2));
        assert!(cone_from_i64(&[&[1, 0], &[0, 1]]).unwrap().is_basic());
        let sq = cone_from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap();
        assert!(!sq.is_simplicial());
        assert!(matches!(sq.multiplicity(), Err(Error::NotSimplicial(_))));
    }

    #[test]
    fn intersections() {
        let a = cone_from_i64(&[&[1, 0], &[0, 1]]).unwrap();
        let b = cone_from_i64(&[&[1, 1], &[1, -1]]).unwrap();
        let i = intersection(&a, &b).unwrap();
        assert_eq!(i.rays(), &[lv(&[1, 0]), lv(&[1, 1])]);
        assert!(!is_face(&i, &a));
        let c = cone_from_i64(&[&[1, 1], &[4, 5]]).unwrap();
        let d = cone_from_i64(&[&[1, 0], &[1, 1]]).unwrap();
        assert_eq!(intersection(&c, &d).unwrap().rays(), &[lv(&[1, 1])]);
        let e = cone_from_i64(&[&[-1, 0], &[0, -1]]).unwrap();
        assert_eq!(intersection(&a, &e).unwrap().dim(), 0);
    }

    #[test]
    fn triangulation_of_square_cone() {
        let sq = cone_from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap();
        let t = triangulate(&sq);
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|p| p.len() == 3));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn gens(rank: usize) -> impl Strategy<Value = Vec<LatticeVector>> {
            proptest::collection::vec(proptest::collection::vec(-6i64..=6, rank), 1..6)
                .prop_map(|vs| vs.iter().map(|v| LatticeVector::from_i64s(v)).collect())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn double_dual_is_identity(vs in gens(3)) {
                let Ok(c) = make_cone(&vs) else { return Ok(()) };
                prop_assume!(c.is_full_dimensional());
                let d = c.dual().to_cone().unwrap();
                prop_assert_eq!(d.dual().to_cone().unwrap(), c);
            }

            #[test]
            fn lineality_plus_dual_dimension(vs in gens(3)) {
                // dim(σ ∩ −σ) + dim(σ∨) = r, also for non-pointed σ
                let (facets, equations) = facets_of(3, &vs);
                let mut normals = facets.clone();
                normals.extend(equations.iter().cloned());
                let dual_dim = if facets.is_empty() && equations.is_empty() { 0 } else {
                    let mut gens = facets.clone();
                    for e in &equations { gens.push(e.clone()); gens.push(-e); }
                    linalg::rank_int(&gens)
                };
                // lineality of pos(vs) is the common kernel of all facet normals and equations
                let lineality = 3 - linalg::rank_int(&normals);
                prop_assert_eq!(lineality + dual_dim, 3);
            }

            #[test]
            fn membership_oracles_agree(vs in gens(3), pts in proptest::collection::vec(proptest::collection::vec(-8i64..=8, 3), 20)) {
                let Ok(c) = make_cone(&vs) else { return Ok(()) };
                for p in pts {
                    let x = LatticeVector::from_i64s(&p);
                    prop_assert_eq!(c.contains(&x), in_cone_by_combination(&c, &x));
                }
            }

            #[test]
            fn rays_are_primitive_and_extreme(vs in gens(3)) {
                let Ok(c) = make_cone(&vs) else { return Ok(()) };
                for r in c.rays() {
                    prop_assert!(r.is_primitive());
                    let others: Vec<LatticeVector> = c.rays().iter().filter(|s| *s != r).cloned().collect();
                    if !others.is_empty() {
                        let rest = make_cone(&others).unwrap();
                        prop_assert!(!rest.contains(r));
                    }
                }
                for v in &vs {
                    prop_assert!(c.contains(v));
                }
            }
        }
    }
}
