//! Crepant resolutions of 3-dimensional affine toric singularities: the
//! canonical modification, then fixed-point and curve blow-ups on the
//! height-one polygon of each index-one piece, then a choice of box
//! diagonals.

mod complex;

pub use complex::{
    blowup_curve_phase, blowup_fixed_point, completion, completions, crepant_fixed_point_phase, crepant_fixed_point_phase_by,
    parallelograms, BlowupRecord, CellCensus, Completion, PhaseRun, PolygonComplex, Round,
};

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::classify::{gorenstein_data, height_one_polytope, index_one_cover, LatticeChange};
use crate::cone::{facets_of, make_cone, Cone};
use crate::divisors::{discrepancies, DiscrepancyReport, SupportFunction};
use crate::error::{Error, Result};
use crate::fan::{make_fan, star_subdivision, Fan};
use crate::hilbert::hilbert_basis;
use crate::lattice::{IntMatrix, LatticeVector};
use crate::polytope::LatticePolytope;

/// The fan over the faces of `conv(σ ∩ N ∖ {0})` visible from the origin.
pub fn canonical_modification(c: &Cone) -> Result<Fan> {
    let r = c.lattice_rank();
    if r > 3 {
        return Err(Error::OutOfScope(format!("{c} has rank {r} > 3")));
    }
    if !c.is_full_dimensional() {
        return Err(Error::Precondition(format!("{c} is not full-dimensional")));
    }
    if gorenstein_data(c)?.map_or(false, |g| g.index.is_one()) {
        return Ok(Fan::from_trusted(r, vec![c.clone()]));
    }
    let basis = hilbert_basis(c)?.members;
    let mut gens: Vec<LatticeVector> = basis.iter().map(|h| h.extended(BigInt::one())).collect();
    gens.extend(c.rays().iter().map(|v| v.extended(0.into())));
    let (facets, _) = facets_of(r + 1, &gens);
    let mut pieces = Vec::new();
    for n in facets.iter().filter(|n| n[r].is_negative()) {
        let tight: Vec<LatticeVector> = basis.iter().filter(|h| n.dot(&h.extended(BigInt::one())) == BigInt::from(0)).cloned().collect();
        pieces.push(make_cone(&tight)?);
    }
    Ok(Fan::from_trusted(r, pieces))
}

/// The height-one polygon of a rank-3 Gorenstein cone and a unimodular map
/// sending `m_σ` to the last coordinate.
pub fn polygon_form(c: &Cone) -> Result<(LatticePolytope, IntMatrix)> {
    if c.lattice_rank() != 3 {
        return Err(Error::RankMismatch { expected: 3, found: c.lattice_rank() });
    }
    let g = gorenstein_data(c)?.ok_or_else(|| Error::NotQGorenstein(c.to_string()))?;
    if !g.index.is_one() {
        return Err(Error::NotQGorenstein(format!("{c} has index {}", g.index)));
    }
    height_one_polytope(c, &g.m_sigma.clear_denominator())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Canonical,
    FixedPointBlowUp,
    CurveBlowUp,
    Completion,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Canonical => "canonical",
            Phase::FixedPointBlowUp => "fixed-point-blow-up",
            Phase::CurveBlowUp => "curve-blow-up",
            Phase::Completion => "completion",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub phase: Phase,
    /// Index into [`Resolution::pieces`]; `None` for the canonical step.
    pub piece: Option<usize>,
    /// Blown-up cells, singular edges or split parallelograms, in polygon
    /// coordinates.
    pub centers: Vec<LatticePolytope>,
    /// New rays in the lattice of the piece.
    pub new_rays: Vec<LatticeVector>,
    /// Absent only for the canonical step over a non-Q-Gorenstein cone.
    pub discrepancy: Option<DiscrepancyReport>,
    pub census: Vec<CellCensus>,
    pub blowups: Vec<BlowupRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ResolutionTrace {
    pub steps: Vec<TraceStep>,
}

/// One maximal cone of the canonical modification and its resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub cone: Cone,
    /// For index > 1: the sublattice `N₀` in which the piece is resolved.
    pub cover: Option<LatticeChange>,
    /// `cone` in the coordinates of `N₀` when covered.
    pub resolved_cone: Cone,
    pub polygon: LatticePolytope,
    /// Unimodular map with `⟨m, ·⟩` as last row, taking `resolved_cone` to
    /// the cone over `polygon`.
    pub map: IntMatrix,
    /// After the fixed-point and curve phases: basic triangles and unit parallelograms.
    pub cdv_complex: PolygonComplex,
    /// The chosen completion of `cdv_complex`.
    pub complex: PolygonComplex,
    /// The resolution of `resolved_cone`, in its own lattice.
    pub fan: Fan,
    /// Strictly upper convex support function on `fan`.
    pub certificate: Option<SupportFunction>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub canonical: Fan,
    pub pieces: Vec<Piece>,
    /// All cones basic over index-one pieces; covered pieces stay whole up
    /// to star subdivisions at rays their neighbours put on shared walls.
    pub fan: Fan,
    pub trace: ResolutionTrace,
}

fn to_lattice(map_inv: &IntMatrix, p: &LatticeVector) -> LatticeVector {
    map_inv.mul_vector(&p.extended(BigInt::one()))
}

fn mapped_fan(map_inv: &IntMatrix, fan: &Fan) -> Result<Fan> {
    let cones: Vec<Cone> = fan
        .maximal_cones()
        .iter()
        .map(|c| make_cone(&c.rays().iter().map(|v| map_inv.mul_vector(v)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    Ok(Fan::from_trusted(3, cones))
}

fn step(
    phase: Phase,
    piece: usize,
    base: &Cone,
    map_inv: &IntMatrix,
    centers: Vec<LatticePolytope>,
    fresh: &[LatticeVector],
    complex: &PolygonComplex,
    blowups: Vec<BlowupRecord>,
) -> Result<TraceStep> {
    let fan = mapped_fan(map_inv, &complex.fan())?;
    Ok(TraceStep {
        phase,
        piece: Some(piece),
        centers,
        new_rays: fresh.iter().map(|p| to_lattice(map_inv, p)).collect(),
        discrepancy: Some(discrepancies(base, &fan)?),
        census: complex.census(),
        blowups,
    })
}

impl Piece {
    /// A point of the height-one polygon as a vector of the ambient lattice.
    pub fn to_ambient(&self, p: &LatticeVector) -> Result<LatticeVector> {
        let map_inv = self.map.unimodular_inverse().ok_or_else(|| Error::Invariant("polygon map is not unimodular".into()))?;
        let v = to_lattice(&map_inv, p);
        Ok(match &self.cover {
            Some(change) => change.to_ambient(&v),
            None => v,
        })
    }
}

fn resolve_piece(index: usize, cone: &Cone, choice: usize, trace: &mut ResolutionTrace) -> Result<Piece> {
    let (resolved_cone, cover) = match gorenstein_data(cone)? {
        Some(g) if g.index.is_one() => (cone.clone(), None),
        Some(_) => {
            let (c, change) = index_one_cover(cone)?;
            (c, Some(change))
        }
        None => return Err(Error::Invariant(format!("canonical piece {cone} is not Q-Gorenstein"))),
    };
    let (polygon, map) = polygon_form(&resolved_cone)?;
    let map_inv = map.unimodular_inverse().ok_or_else(|| Error::Invariant("polygon map is not unimodular".into()))?;
    let start = PolygonComplex::new(polygon.clone())?;
    let iii = crepant_fixed_point_phase(&start)?;
    for r in &iii.rounds {
        trace.steps.push(step(
            Phase::FixedPointBlowUp,
            index,
            &resolved_cone,
            &map_inv,
            r.centers.clone(),
            &r.new_vertices,
            &r.complex,
            r.blowups.clone(),
        )?);
    }
    let iv = blowup_curve_phase(&iii.complex)?;
    for r in &iv.rounds {
        trace.steps.push(step(Phase::CurveBlowUp, index, &resolved_cone, &map_inv, r.centers.clone(), &r.new_vertices, &r.complex, Vec::new())?);
    }
    let boxes = parallelograms(&iv.complex)?;
    let k = boxes.len();
    if k < usize::BITS as usize && choice >> k != 0 {
        return Err(Error::Precondition(format!("completion {choice} out of range: piece {cone} has 2^{k} completions")));
    }
    let bits: Vec<bool> = (0..k).map(|j| j < usize::BITS as usize && choice >> j & 1 == 1).collect();
    let done = completion(&iv.complex, &bits)?;
    if !boxes.is_empty() {
        trace.steps.push(step(Phase::Completion, index, &resolved_cone, &map_inv, boxes, &[], &done.complex, Vec::new())?);
    }
    let fan = mapped_fan(&map_inv, &done.fan)?;
    let certificate = match &done.certificate {
        Some(psi) => {
            let values = psi.ray_values.iter().map(|(v, x)| (map_inv.mul_vector(v), x.clone())).collect();
            Some(SupportFunction::new(fan.clone(), values)?)
        }
        None => None,
    };
    Ok(Piece { cone: cone.clone(), cover, resolved_cone, polygon, map, cdv_complex: iv.complex, complex: done.complex, fan, certificate })
}

/// Canonical modification, then for each piece of index one the phases on
/// its height-one polygon and the lexicographically first completion.
/// Pieces of higher index are resolved in their index-one cover.
pub fn resolve(c: &Cone) -> Result<Resolution> {
    resolve_with(c, 0)
}

/// [`resolve`] with every piece completed by the diagonal choices in the
/// bits of `completion_index`, as in [`completions`].
pub fn resolve_with(c: &Cone, completion_index: usize) -> Result<Resolution> {
    if c.lattice_rank() != 3 {
        return Err(Error::RankMismatch { expected: 3, found: c.lattice_rank() });
    }
    let canonical = canonical_modification(c)?;
    let mut trace = ResolutionTrace::default();
    if canonical.maximal_cones() != [c.clone()] {
        let fresh: Vec<LatticeVector> = canonical.rays().into_iter().filter(|v| !c.has_ray(v)).collect();
        let discrepancy = match gorenstein_data(c)? {
            Some(_) => Some(discrepancies(c, &canonical)?),
            None => None,
        };
        trace.steps.push(TraceStep {
            phase: Phase::Canonical,
            piece: None,
            centers: Vec::new(),
            new_rays: fresh,
            discrepancy,
            census: Vec::new(),
            blowups: Vec::new(),
        });
    }
    let pieces: Vec<Piece> = canonical
        .maximal_cones()
        .iter()
        .enumerate()
        .map(|(i, p)| resolve_piece(i, p, completion_index, &mut trace))
        .collect::<Result<_>>()?;
    let mut cones: Vec<Cone> = Vec::new();
    let wall_rays: BTreeSet<LatticeVector> =
        pieces.iter().filter(|p| p.cover.is_none()).flat_map(|p| p.fan.rays()).collect();
    for p in &pieces {
        if p.cover.is_none() {
            cones.extend(p.fan.maximal_cones().iter().cloned());
            continue;
        }
        let mut f = make_fan(&[p.cone.clone()])?;
        for v in wall_rays.iter().filter(|v| p.cone.contains(v) && !p.cone.has_ray(v)) {
            f = star_subdivision(&f, v)?;
        }
        cones.extend(f.maximal_cones().iter().cloned());
    }
    Ok(Resolution { canonical, pieces, fan: Fan::from_trusted(3, cones), trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::cone::cone_from_i64;
    use crate::resolve2d::minimal_resolution;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    fn big_triangle() -> Cone {
        cone_from_i64(&[&[-3, 3, 1], &[3, 1, 1], &[0, -3, 1]]).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let c = big_triangle();
        assert_eq!(canonical_modification(&c).unwrap().maximal_cones(), &[c]);
        let s = cone_from_i64(&[&[1, 0], &[4, 5]]).unwrap();
        let f = canonical_modification(&s).unwrap();
        assert_eq!(f, minimal_resolution(&s).unwrap().fan);
        // terminal, so nothing changes
        let t = cone_from_i64(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 5]]).unwrap();
        assert!(classify(&t).unwrap().terminal);
        assert_eq!(canonical_modification(&t).unwrap().maximal_cones(), &[t]);
        // 1/5(1,1,1): (0,0,1) sits below the generators' hyperplane
        let t = cone_from_i64(&[&[1, 0, 0], &[0, 1, 0], &[-1, -1, 5]]).unwrap();
        assert!(!classify(&t).unwrap().canonical);
        let f = canonical_modification(&t).unwrap();
        assert!(f.maximal_cones().len() > 1);
        assert!(make_fan(f.maximal_cones()).is_ok());
        crate::divisors::check_same_support(&t, &f).unwrap();
        for piece in f.maximal_cones() {
            assert!(classify(piece).unwrap().canonical, "{piece}");
        }
    }

    #[test]
    fn polygon_forms() {
        let (p, a) = polygon_form(&big_triangle()).unwrap();
        assert_eq!(a, IntMatrix::identity(3));
        assert_eq!(p, LatticePolytope::from_i64(&[&[-3, 3], &[3, 1], &[0, -3]]).unwrap());
        let basic = cone_from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert!(polygon_form(&basic).unwrap().0.is_basic_triangle());
        let bad = cone_from_i64(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 5]]).unwrap();
        assert!(matches!(polygon_form(&bad), Err(Error::NotQGorenstein(_))));
    }

    #[test]
    fn resolve_big_triangle() {
        let r = resolve(&big_triangle()).unwrap();
        assert_eq!(r.fan.rays().len(), 19);
        assert_eq!(r.fan.maximal_cones().len(), 30);
        assert!(r.fan.is_basic());
        assert!(r.pieces[0].certificate.is_some());
        assert!(r.trace.steps.iter().all(|s| s.discrepancy.as_ref().unwrap().is_crepant()));
        assert_eq!(r.trace.steps.last().unwrap().phase, Phase::Completion);
    }

    #[test]
    fn every_completion_index_resolves() {
        let fans: Vec<Fan> = (0..8)
            .map(|i| {
                let r = resolve_with(&big_triangle(), i).unwrap();
                assert!(r.fan.is_basic() && r.pieces[0].certificate.is_some());
                assert_eq!(r.pieces[0].complex, completions(&r.pieces[0].cdv_complex).unwrap()[i].complex);
                r.fan
            })
            .collect();
        assert!((0..8).all(|i| (0..i).all(|j| fans[i] != fans[j])));
        assert!(matches!(resolve_with(&big_triangle(), 8), Err(Error::Precondition(_))));
        let r = resolve(&big_triangle()).unwrap();
        assert_eq!(r.pieces[0].to_ambient(&lv(&[0, 0])).unwrap(), lv(&[0, 0, 1]));
    }

    #[test]
    fn resolve_basic_is_trivial() {
        let c = cone_from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let r = resolve(&c).unwrap();
        assert_eq!(r.fan.maximal_cones(), &[c]);
        assert!(r.trace.steps.is_empty());
    }

    #[test]
    fn resolve_non_canonical() {
        let t = cone_from_i64(&[&[1, 0, 0], &[0, 1, 0], &[-1, -1, 5]]).unwrap();
        let r = resolve(&t).unwrap();
        assert_eq!(r.trace.steps[0].phase, Phase::Canonical);
        crate::divisors::check_same_support(&t, &r.fan).unwrap();
        assert!(make_fan(r.fan.maximal_cones()).is_ok());
        for p in r.pieces.iter().filter(|p| p.cover.is_none()) {
            assert!(p.fan.is_basic());
        }
    }

    #[test]
    fn rotated_gorenstein_cone() {
        let c = cone_from_i64(&[&[0, 1, 0], &[0, 0, 1], &[3, -1, -1]]).unwrap();
        let r = resolve(&c).unwrap();
        assert!(r.fan.is_basic());
        crate::divisors::check_same_support(&c, &r.fan).unwrap();
        let g = gorenstein_data(&c).unwrap().unwrap();
        for v in r.fan.rays() {
            assert_eq!(g.m_sigma.pair(&v), num_rational::BigRational::one());
        }
    }

    #[test]
    fn index_two_piece_is_covered() {
        let c = cone_from_i64(&[&[0, 1, 0], &[0, 0, 1], &[2, -1, -1]]).unwrap();
        let r = resolve(&c).unwrap();
        let covered: Vec<&Piece> = r.pieces.iter().filter(|p| p.cover.is_some()).collect();
        assert!(!covered.is_empty());
        for p in covered {
            assert_eq!(p.cover.as_ref().unwrap().index, BigInt::from(2));
            assert!(p.fan.is_basic());
            for v in p.fan.rays() {
                assert!(p.cone.contains(&p.cover.as_ref().unwrap().to_ambient(&v)));
            }
        }
        assert!(make_fan(r.fan.maximal_cones()).is_ok());
        crate::divisors::check_same_support(&c, &r.fan).unwrap();
        assert!(r.fan.contains(&lv(&[1, 0, 0])));
    }
}
