//! Classification of affine toric singularities `U_σ`.
//!
//! Non-full-dimensional cones are classified through their image in the
//! induced lattice `N_σ`, since `U_σ ≅ U_σ' × (C*)^{r−d}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cone::{make_cone, Cone};
use crate::divisors::gorenstein_degree;
use crate::error::{Error, Result};
use crate::hilbert::embedding_dimension;
use crate::lattice::{self, Covector, IntMatrix, LatticeVector};
use crate::linalg;
use crate::polytope::LatticePolytope;

/// The Gorenstein degree `m_σ` and the index `min{κ ≥ 1 : κ·m_σ ∈ M}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinData {
    pub m_sigma: Covector,
    pub index: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityReport {
    pub smooth: bool,
    pub q_factorial: bool,
    pub q_gorenstein: Option<GorensteinData>,
    pub gorenstein: bool,
    pub terminal: bool,
    pub canonical: bool,
    pub log_terminal: bool,
    /// Only decided for Gorenstein cones of dimension at most 3.
    pub lci: Option<bool>,
    /// Toric singularities are always rational.
    pub rational: bool,
    /// `#Hilb(σ∨)`; present for full-dimensional cones.
    pub embedding_dim: Option<usize>,
}

/// `m_σ` and the index, or `None` when `σ` is not Q-Gorenstein.
pub fn gorenstein_data(c: &Cone) -> Result<Option<GorensteinData>> {
    if !c.is_full_dimensional() {
        return Err(Error::Precondition(format!("{c} is not full-dimensional")));
    }
    let Some(m) = gorenstein_degree(c) else { return Ok(None) };
    let index = m.denominator();
    if index.is_one() {
        // integral m with value 1 somewhere is primitive, so Gen(σ) lies on a
        // primitive affine hyperplane
        let mi = m.clear_denominator();
        if !mi.is_primitive() {
            return Err(Error::Invariant(format!("non-primitive Gorenstein degree {mi} for {c}")));
        }
    }
    Ok(Some(GorensteinData { m_sigma: m, index }))
}

/// The image of `c` in `Z^d ≅ N_σ`, for a saturated basis of `lin(σ) ∩ N`.
pub fn project_to_span(c: &Cone) -> Result<Cone> {
    if c.is_full_dimensional() {
        return Ok(c.clone());
    }
    let basis = c.span_basis();
    let d = basis.len();
    let cols: Vec<Vec<BigRational>> = (0..c.lattice_rank())
        .map(|i| basis.iter().map(|b| BigRational::from_integer(b[i].clone())).collect())
        .collect();
    let mut images = Vec::new();
    for r in c.rays() {
        let x = linalg::solve(&cols, &r.to_rational(), d)
            .ok_or_else(|| Error::Invariant(format!("{r} outside the span of {c}")))?;
        if x.iter().any(|t| !t.is_integer()) {
            return Err(Error::Invariant(format!("{r} not in the saturated span lattice")));
        }
        images.push(LatticeVector::new(x.into_iter().map(|t| t.to_integer()).collect()));
    }
    make_cone(&images)
}

/// Lattice points `x ≠ 0` of `σ` with `⟨m_σ, x⟩ ≤ 1`, i.e. of
/// `conv({0} ∪ Gen(σ)) ∖ {0}`.
fn slab_points(c: &Cone, m: &Covector) -> Vec<LatticeVector> {
    let r = c.lattice_rank();
    let lo: Vec<BigInt> = (0..r).map(|i| c.rays().iter().map(|v| v[i].clone()).fold(BigInt::zero(), |a, b| a.min(b))).collect();
    let hi: Vec<BigInt> = (0..r).map(|i| c.rays().iter().map(|v| v[i].clone()).fold(BigInt::zero(), |a, b| a.max(b))).collect();
    let one = BigRational::one();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        let p = LatticeVector::new(x.clone());
        if !p.is_zero() && c.contains(&p) && m.pair(&p) <= one {
            out.push(p);
        }
        let mut i = 0;
        while i < r {
            x[i] += 1;
            if x[i] <= hi[i] {
                break;
            }
            x[i] = lo[i].clone();
            i += 1;
        }
        if i == r {
            return out;
        }
    }
}

pub fn classify(c: &Cone) -> Result<SingularityReport> {
    let c = project_to_span(c)?;
    if c.dim() == 0 {
        return Ok(SingularityReport {
            smooth: true,
            q_factorial: true,
            q_gorenstein: Some(GorensteinData { m_sigma: Covector::new(Vec::new()), index: BigInt::one() }),
            gorenstein: true,
            terminal: true,
            canonical: true,
            log_terminal: true,
            lci: Some(true),
            rational: true,
            embedding_dim: Some(0),
        });
    }
    let smooth = c.is_basic();
    let q_factorial = c.is_simplicial();
    let q_gorenstein = gorenstein_data(&c)?;
    let gorenstein = q_gorenstein.as_ref().map_or(false, |g| g.index.is_one());
    let (canonical, terminal) = match &q_gorenstein {
        Some(g) => {
            let pts = slab_points(&c, &g.m_sigma);
            let one = BigRational::one();
            let canonical = pts.iter().all(|p| g.m_sigma.pair(p) >= one);
            let terminal = canonical && pts.iter().all(|p| c.has_ray(p));
            (canonical, terminal)
        }
        None => (false, false),
    };
    let lci = if gorenstein && c.dim() <= 3 {
        let m = q_gorenstein.as_ref().expect("gorenstein").m_sigma.clear_denominator();
        let (p, _) = height_one_polytope(&c, &m)?;
        Some(is_nakajima(&p)?)
    } else {
        None
    };
    Ok(SingularityReport {
        smooth,
        q_factorial,
        log_terminal: q_gorenstein.is_some(),
        q_gorenstein,
        gorenstein,
        terminal,
        canonical,
        lci,
        rational: true,
        embedding_dim: Some(embedding_dimension(&c)?),
    })
}

/// Unimodular `A` with last row `m` (the identity when `m` is already the
/// last unit vector) and the polytope `{(A·v) without its last coordinate}`
/// over `Gen(c)`, which lie at height `⟨m, v⟩ = 1`.
pub fn height_one_polytope(c: &Cone, m: &LatticeVector) -> Result<(LatticePolytope, IntMatrix)> {
    let r = c.lattice_rank();
    if let Some(v) = c.rays().iter().find(|v| !m.dot(v).is_one()) {
        return Err(Error::Precondition(format!("{v} is not at height one under {m}")));
    }
    let a = if *m == LatticeVector::unit(r, r - 1) { IntMatrix::identity(r) } else { lattice::complete_to_unimodular(m)? };
    let pts: Vec<LatticeVector> = c.rays().iter().map(|v| a.mul_vector(v).truncated()).collect();
    Ok((LatticePolytope::new(&pts)?, a))
}

pub fn is_elementary(p: &LatticePolytope) -> bool {
    p.is_elementary()
}

/// Normal form `{0 ≤ x ≤ length, 0 ≤ y ≤ offset + slope·x}` together with
/// the affine unimodular map `x ↦ origin + x·u + y·e` onto the polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NakajimaWitness {
    pub length: BigInt,
    pub slope: BigInt,
    pub offset: BigInt,
    pub origin: LatticeVector,
    pub u: LatticeVector,
    pub e: LatticeVector,
}

impl NakajimaWitness {
    /// Vertices of the image of the normal form.
    pub fn image_vertices(&self) -> Vec<LatticeVector> {
        let at = |x: &BigInt, y: &BigInt| &(&self.origin + &self.u.scale(x)) + &self.e.scale(y);
        let z = BigInt::zero();
        let top = &self.offset + &self.slope * &self.length;
        let mut v = vec![at(&z, &z), at(&self.length, &z)];
        if top.is_positive() {
            v.push(at(&self.length, &top));
        }
        if self.offset.is_positive() {
            v.push(at(&z, &self.offset));
        }
        v.sort();
        v.dedup();
        v
    }
}

/// Lattice equivalence to a Nakajima polygon, with a witness.
///
/// A full-dimensional Nakajima polygon has an edge `[p, q]` of lattice
/// length `L` and direction `u`, a primitive `e` with `det(u, e) = ±1`, and
/// its other vertices are `p + h₀e` and/or `q + h₁e` with `h₀, h₁ ≥ 0` and
/// `L | h₁ − h₀`. Points and segments are Nakajima.
pub fn nakajima_witness(p: &LatticePolytope) -> Result<Option<NakajimaWitness>> {
    if p.dim() > 2 {
        return Err(Error::OutOfScope(format!("{p} has dimension {} > 2", p.dim())));
    }
    if p.dim() < 2 {
        let vs = p.vertices();
        let origin = vs[0].clone();
        let r = origin.rank();
        let (length, u) = if vs.len() == 2 {
            let d = &vs[1] - &vs[0];
            let l = d.content();
            (l.clone(), d.div_exact(&l))
        } else {
            (BigInt::zero(), LatticeVector::unit(r, 0))
        };
        return Ok(Some(NakajimaWitness {
            length,
            slope: BigInt::zero(),
            offset: BigInt::zero(),
            origin,
            u,
            e: LatticeVector::zero(r),
        }));
    }
    let vs = p.vertices();
    if vs.len() > 4 || p.ambient_rank() != 2 {
        return Ok(None);
    }
    let n = vs.len();
    for i in 0..n {
        for (a, b) in [(vs[i].clone(), vs[(i + 1) % n].clone()), (vs[(i + 1) % n].clone(), vs[i].clone())] {
            let d = &b - &a;
            let length = d.content();
            let u = d.div_exact(&length);
            let others: Vec<&LatticeVector> = vs.iter().filter(|v| **v != a && **v != b).collect();
            // direction of a side leaving [a, b]
            let first = others[0];
            for base in [&a, &b] {
                let Ok(e) = lattice::primitive(&(first - base)) else { continue };
                let det = &u[0] * &e[1] - &u[1] * &e[0];
                if !det.abs().is_one() {
                    continue;
                }
                let height_over = |base: &LatticeVector, v: &LatticeVector| -> Option<BigInt> {
                    let w = v - base;
                    let t = w.content();
                    (t.is_positive() && e.scale(&t) == w).then_some(t)
                };
                let mut h0 = BigInt::zero();
                let mut h1 = BigInt::zero();
                let mut ok = true;
                for v in &others {
                    if let Some(t) = height_over(&a, v).filter(|_| h0.is_zero()) {
                        h0 = t;
                    } else if let Some(t) = height_over(&b, v).filter(|_| h1.is_zero()) {
                        h1 = t;
                    } else {
                        ok = false;
                    }
                }
                if !ok || !(&h1 - &h0).is_multiple_of_len(&length) {
                    continue;
                }
                let w = NakajimaWitness {
                    slope: (&h1 - &h0) / &length,
                    offset: h0,
                    length,
                    origin: a.clone(),
                    u: u.clone(),
                    e,
                };
                let mut expect = vs.to_vec();
                expect.sort();
                if w.image_vertices() == expect {
                    return Ok(Some(w));
                }
                break;
            }
        }
    }
    Ok(None)
}

trait MultipleOf {
    fn is_multiple_of_len(&self, l: &BigInt) -> bool;
}

impl MultipleOf for BigInt {
    fn is_multiple_of_len(&self, l: &BigInt) -> bool {
        (self % l).is_zero()
    }
}

pub fn is_nakajima(p: &LatticePolytope) -> Result<bool> {
    Ok(nakajima_witness(p)?.is_some())
}

/// `LRI = edim − 1` for a general hyperplane section through a Gorenstein
/// rank-3 singular point of embedding dimension at least 5.
pub fn lri_general_section(c: &Cone) -> Result<usize> {
    if c.lattice_rank() != 3 || !c.is_full_dimensional() {
        return Err(Error::Precondition(format!("{c} is not a full-dimensional rank-3 cone")));
    }
    if !gorenstein_data(c)?.map_or(false, |g| g.index.is_one()) {
        return Err(Error::Precondition(format!("{c} is not Gorenstein")));
    }
    if c.is_basic() {
        return Err(Error::Precondition(format!("{c} is smooth")));
    }
    let e = embedding_dimension(c)?;
    if e < 5 {
        return Err(Error::Precondition(format!("{c} has embedding dimension {e} < 5")));
    }
    Ok(e - 1)
}

/// Inclusion `N₀ ⊂ N` of index `index`; rows of `basis` are a basis of `N₀`
/// in `N`-coordinates, in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeChange {
    pub basis: IntMatrix,
    pub index: BigInt,
}

impl LatticeChange {
    /// `N₀`-coordinates of a point of `N₀`.
    pub fn to_sublattice(&self, v: &LatticeVector) -> Result<LatticeVector> {
        let r = v.rank();
        let cols: Vec<Vec<BigRational>> = (0..r)
            .map(|i| (0..r).map(|j| BigRational::from_integer(self.basis.get(j, i).clone())).collect())
            .collect();
        let x = linalg::solve(&cols, &v.to_rational(), r).ok_or_else(|| Error::Invariant("singular basis".into()))?;
        if x.iter().any(|t| !t.is_integer()) {
            return Err(Error::Precondition(format!("{v} is not in the sublattice")));
        }
        Ok(LatticeVector::new(x.into_iter().map(|t| t.to_integer()).collect()))
    }

    /// `N`-coordinates of a point given in `N₀`-coordinates.
    pub fn to_ambient(&self, x: &LatticeVector) -> LatticeVector {
        self.basis.transpose().mul_vector(x)
    }
}

/// `c` re-coordinatized in `N₀ = {n : ⟨m_σ, n⟩ ∈ Z}`, where it is Gorenstein.
pub fn index_one_cover(c: &Cone) -> Result<(Cone, LatticeChange)> {
    let g = gorenstein_data(c)?.ok_or_else(|| Error::NotQGorenstein(c.to_string()))?;
    if g.index.is_one() {
        return Err(Error::Precondition(format!("{c} is already index one")));
    }
    let r = c.lattice_rank();
    let scaled = g.m_sigma.clear_denominator();
    // N₀ is the projection of ker[m' | −ℓ] ⊂ Z^{r+1}
    let row = scaled.extended(-g.index.clone());
    let kernel = lattice::integer_kernel(r + 1, &[row]);
    let gens: Vec<LatticeVector> = kernel.iter().map(LatticeVector::truncated).collect();
    let (h, _) = lattice::hermite_normal_form(&IntMatrix::from_vectors(r, &gens));
    let basis = IntMatrix::from_rows(r, (0..r).map(|i| h.row(i).into_coords()).collect());
    let index = basis.determinant().abs();
    if index != g.index {
        return Err(Error::Invariant(format!("sublattice index {index} differs from {}", g.index)));
    }
    let change = LatticeChange { basis, index };
    let rays: Vec<LatticeVector> = c.rays().iter().map(|v| change.to_sublattice(v)).collect::<Result<_>>()?;
    Ok((make_cone(&rays)?, change))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::cone_from_i64;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn big_triangle() -> Cone {
        cone_from_i64(&[&[-3, 3, 1], &[3, 1, 1], &[0, -3, 1]]).unwrap()
    }

    fn poly(pts: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::from_i64(pts).unwrap()
    }

    pub(crate) fn chain_holds(r: &SingularityReport) -> bool {
        (!r.smooth || r.terminal)
            && (!r.terminal || r.canonical)
            && (!r.canonical || r.log_terminal)
            && (!r.gorenstein || r.q_gorenstein.as_ref().map_or(false, |g| g.index.is_one()))
            && (!r.smooth || (r.q_factorial && r.gorenstein && r.lci != Some(false)))
            && r.rational
    }

    #[test]
    fn gorenstein_examples() {
        let g = gorenstein_data(&big_triangle()).unwrap().unwrap();
        assert_eq!(g.m_sigma, Covector::from_integral(&lv(&[0, 0, 1])));
        assert!(g.index.is_one());
        let g = gorenstein_data(&cone_from_i64(&[&[1, 0], &[-1, 4]]).unwrap()).unwrap().unwrap();
        assert_eq!(g.m_sigma, Covector::new(vec![q(1, 1), q(1, 2)]));
        assert_eq!(g.index, BigInt::from(2));
        let sq = cone_from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap();
        assert_eq!(gorenstein_data(&sq).unwrap().unwrap().m_sigma, Covector::from_integral(&lv(&[0, 0, 1])));
        // four rays not on a common plane
        let bent = cone_from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[2, 2, 3]]).unwrap();
        assert_eq!(gorenstein_data(&bent).unwrap(), None);
    }

    #[test]
    fn classify_examples() {
        let r = classify(&cone_from_i64(&[&[1, 0], &[4, 5]]).unwrap()).unwrap();
        assert!(!r.smooth && r.q_factorial && r.log_terminal && !r.canonical && !r.gorenstein);
        let g = r.q_gorenstein.as_ref().unwrap();
        assert_eq!(g.index, BigInt::from(5));
        assert_eq!(g.m_sigma, Covector::new(vec![q(1, 1), q(-3, 5)]));
        assert_eq!(r.embedding_dim, Some(6));
        assert_eq!(r.lci, None);

        let r = classify(&big_triangle()).unwrap();
        assert!(r.gorenstein && r.canonical && !r.terminal && !r.smooth && r.q_factorial);
        assert_eq!(r.embedding_dim, Some(14));
        assert_eq!(r.lci, Some(false));

        let r = classify(&cone_from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap()).unwrap();
        assert!(r.smooth && r.terminal && r.canonical && r.log_terminal && r.gorenstein && r.q_factorial);
        assert_eq!(r.lci, Some(true));
        assert!(chain_holds(&r));

        // the ordinary double point: terminal, Gorenstein, a hypersurface
        let sq = cone_from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap();
        let r = classify(&sq).unwrap();
        assert!(r.terminal && !r.q_factorial && r.gorenstein);
        assert_eq!(r.lci, Some(true));
        assert_eq!(r.embedding_dim, Some(4));

        // a lower-dimensional cone is classified in its span
        let r = classify(&cone_from_i64(&[&[1, 0, 0], &[1, 2, 0]]).unwrap()).unwrap();
        assert!(r.gorenstein && !r.smooth);
        assert_eq!(r.embedding_dim, Some(3));
    }

    #[test]
    fn not_q_gorenstein() {
        let bent = cone_from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[2, 2, 3]]).unwrap();
        let r = classify(&bent).unwrap();
        assert!(r.q_gorenstein.is_none() && !r.log_terminal && !r.canonical && !r.gorenstein);
        assert!(chain_holds(&r));
    }

    #[test]
    fn elementary_examples() {
        assert!(is_elementary(&poly(&[&[0, 0], &[1, 0], &[0, 1]])));
        assert!(is_elementary(&poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])));
        assert!(!is_elementary(&poly(&[&[0, 0], &[2, 0], &[0, 2]])));
    }

    #[test]
    fn nakajima_examples() {
        assert!(is_nakajima(&poly(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap());
        assert!(is_nakajima(&poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap());
        // the cD4 triangle is {0 ≤ x ≤ 2, 0 ≤ y ≤ 2 − x}
        let w = nakajima_witness(&poly(&[&[0, 0], &[2, 0], &[0, 2]])).unwrap().unwrap();
        assert_eq!(w.length, BigInt::from(2));
        assert_eq!(w.offset.clone() + &w.slope * &w.length, BigInt::zero());
        // slopes must be integral
        assert!(!is_nakajima(&poly(&[&[0, 0], &[2, 0], &[0, 3]])).unwrap());
        assert!(!is_nakajima(&poly(&[&[0, 0], &[2, 0], &[2, 1], &[0, 2]])).unwrap());
        assert!(!is_nakajima(&poly(&[&[-3, 3], &[3, 1], &[0, -3]])).unwrap());
        // too many vertices
        assert!(!is_nakajima(&poly(&[&[0, 0], &[1, 0], &[2, 1], &[1, 2], &[0, 1]])).unwrap());
        assert!(is_nakajima(&poly(&[&[0, 0], &[5, 5]])).unwrap());
        let cube = LatticePolytope::new(&[lv(&[0, 0, 0]), lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1])]).unwrap();
        assert!(matches!(is_nakajima(&cube), Err(Error::OutOfScope(_))));
    }

    #[test]
    fn cd4_is_a_hypersurface() {
        // cross-check for the cD4 triangle: embedding dimension 4, one relation
        let c = cone_from_i64(&[&[0, 0, 1], &[2, 0, 1], &[0, 2, 1]]).unwrap();
        assert_eq!(embedding_dimension(&c).unwrap(), 4);
        let (_, rels) = crate::hilbert::toric_relations(&c, 3).unwrap();
        assert_eq!(rels.len(), 1);
        assert_eq!(classify(&c).unwrap().lci, Some(true));
    }

    #[test]
    fn lri_examples() {
        assert_eq!(lri_general_section(&big_triangle()).unwrap(), 13);
        let cd4 = cone_from_i64(&[&[0, 0, 1], &[2, 0, 1], &[0, 2, 1]]).unwrap();
        assert!(matches!(lri_general_section(&cd4), Err(Error::Precondition(_))));
        let smooth = cone_from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert!(matches!(lri_general_section(&smooth), Err(Error::Precondition(_))));
        // a cone over a triangle with edim 5: conv{(0,0),(3,0),(0,1)}
        let a = cone_from_i64(&[&[0, 0, 1], &[3, 0, 1], &[0, 1, 1]]).unwrap();
        let e = embedding_dimension(&a).unwrap();
        if e >= 5 {
            assert_eq!(lri_general_section(&a).unwrap(), e - 1);
        }
    }

    #[test]
    fn index_one_covers() {
        for gens in [&[&[1i64, 0][..], &[-1, 4]][..], &[&[1, 0], &[4, 5]]] {
            let c = cone_from_i64(gens).unwrap();
            let g = gorenstein_data(&c).unwrap().unwrap();
            let (cover, change) = index_one_cover(&c).unwrap();
            assert_eq!(change.index, g.index);
            let h = gorenstein_data(&cover).unwrap().unwrap();
            assert!(h.index.is_one());
            for r in cover.rays() {
                assert!(c.contains(&change.to_ambient(r)));
            }
        }
        let (cover, _) = index_one_cover(&cone_from_i64(&[&[1, 0], &[4, 5]]).unwrap()).unwrap();
        assert!(cover.is_simplicial());
        assert!(matches!(index_one_cover(&big_triangle()), Err(Error::Precondition(_))));
    }

    #[test]
    fn polygon_of_a_rotated_cone() {
        // m_σ = (1, 0, 0): the generators sit on x = 1
        let c = cone_from_i64(&[&[1, 0, 0], &[1, 2, 0], &[1, 0, 2]]).unwrap();
        let g = gorenstein_data(&c).unwrap().unwrap();
        assert_eq!(g.m_sigma, Covector::from_integral(&lv(&[1, 0, 0])));
        let (p, a) = height_one_polytope(&c, &lv(&[1, 0, 0])).unwrap();
        assert!(a.determinant().abs().is_one());
        assert_eq!(p.area2().unwrap(), BigInt::from(4));
        assert_eq!(p.lattice_points().len(), 6);
    }

    /// Vertex sets (translated to start at the lex-min vertex) of all images
    /// of normal forms under unimodular maps that fit in a box of width 3.
    fn nakajima_oracle() -> std::collections::BTreeSet<Vec<(i64, i64)>> {
        let mut out = std::collections::BTreeSet::new();
        for l in 1..=3i64 {
            for b in 0..=3i64 {
                for a in -3..=3i64 {
                    let top = b + a * l;
                    if !(0..=3).contains(&top) || (b == 0 && top == 0) {
                        continue;
                    }
                    let mut form = vec![(0, 0), (l, 0)];
                    if top > 0 {
                        form.push((l, top));
                    }
                    if b > 0 {
                        form.push((0, b));
                    }
                    for m in (0..7i64.pow(4)).map(|k| [k % 7 - 3, k / 7 % 7 - 3, k / 49 % 7 - 3, k / 343 - 3]) {
                        if (m[0] * m[3] - m[1] * m[2]).abs() != 1 {
                            continue;
                        }
                        let mut img: Vec<(i64, i64)> = form.iter().map(|&(x, y)| (m[0] * x + m[1] * y, m[2] * x + m[3] * y)).collect();
                        img.sort();
                        let o = img[0];
                        let img: Vec<(i64, i64)> = img.iter().map(|&(x, y)| (x - o.0, y - o.1)).collect();
                        if img.iter().all(|&(x, y)| (0..=3).contains(&x) && (-3..=3).contains(&y)) {
                            out.insert(img);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn nakajima_agrees_with_enumeration() {
        let oracle = nakajima_oracle();
        let grid: Vec<(i64, i64)> = (0..4).flat_map(|x| (0..4).map(move |y| (x, y))).collect();
        let mut checked = 0;
        for k in 3..=4 {
            crate::cone::for_each_subset(grid.len(), k, |idx| {
                let pts: Vec<LatticeVector> = idx.iter().map(|&i| lv(&[grid[i].0, grid[i].1])).collect();
                let p = LatticePolytope::new(&pts).unwrap();
                if p.dim() < 2 || p.vertices().len() != k {
                    return;
                }
                let mut vs: Vec<(i64, i64)> = p
                    .vertices()
                    .iter()
                    .map(|v| (i64::try_from(&v[0]).unwrap(), i64::try_from(&v[1]).unwrap()))
                    .collect();
                vs.sort();
                let o = vs[0];
                let key: Vec<(i64, i64)> = vs.iter().map(|&(x, y)| (x - o.0, y - o.1)).collect();
                let w = nakajima_witness(&p).unwrap();
                assert_eq!(w.is_some(), oracle.contains(&key), "{p}");
                if let Some(w) = w {
                    let mut expect = p.vertices().to_vec();
                    expect.sort();
                    assert_eq!(w.image_vertices(), expect);
                    assert!((&w.u[0] * &w.e[1] - &w.u[1] * &w.e[0]).abs().is_one());
                }
                checked += 1;
            });
        }
        assert!(checked > 1000);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn unimodular() -> impl Strategy<Value = IntMatrix> {
            proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 1..6).prop_map(|ops| {
                let mut m = IntMatrix::identity(3);
                for (i, j, k) in ops {
                    if i != j {
                        let mut e = IntMatrix::identity(3);
                        let mut rows: Vec<Vec<BigInt>> = (0..3).map(|r| e.row(r).into_coords()).collect();
                        rows[i][j] = BigInt::from(k);
                        e = IntMatrix::from_rows(3, rows);
                        m = e.mul(&m);
                    }
                }
                m
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn invariant_under_automorphisms(
                gens in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 3..5),
                a in unimodular(),
            ) {
                let vs: Vec<LatticeVector> = gens.iter().map(|g| LatticeVector::from_i64s(g)).collect();
                let Ok(c) = make_cone(&vs) else { return Ok(()) };
                prop_assume!(c.is_full_dimensional());
                let moved = make_cone(&vs.iter().map(|v| a.mul_vector(v)).collect::<Vec<_>>()).unwrap();
                let r1 = classify(&c).unwrap();
                let r2 = classify(&moved).unwrap();
                prop_assert!(chain_holds(&r1));
                prop_assert_eq!(r1.smooth, r2.smooth);
                prop_assert_eq!(r1.q_factorial, r2.q_factorial);
                prop_assert_eq!(r1.gorenstein, r2.gorenstein);
                prop_assert_eq!(r1.terminal, r2.terminal);
                prop_assert_eq!(r1.canonical, r2.canonical);
                prop_assert_eq!(r1.log_terminal, r2.log_terminal);
                prop_assert_eq!(r1.lci, r2.lci);
                prop_assert_eq!(r1.embedding_dim, r2.embedding_dim);
                prop_assert_eq!(r1.q_gorenstein.map(|g| g.index), r2.q_gorenstein.map(|g| g.index));
            }

            #[test]
            fn cover_has_index_one(gens in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 2), 2)) {
                let vs: Vec<LatticeVector> = gens.iter().map(|g| LatticeVector::from_i64s(g)).collect();
                let Ok(c) = make_cone(&vs) else { return Ok(()) };
                prop_assume!(c.is_full_dimensional());
                let g = gorenstein_data(&c).unwrap().unwrap();
                prop_assume!(!g.index.is_one());
                let (cover, _) = index_one_cover(&c).unwrap();
                prop_assert!(gorenstein_data(&cover).unwrap().unwrap().index.is_one());
            }
        }
    }
}
