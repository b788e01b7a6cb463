//! Torus-invariant divisors through piecewise-linear support functions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{self, Covector, LatticeVector};
use crate::linalg;

/// A support function given by its values on `Gen(Δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    pub fan: Fan,
    pub ray_values: BTreeMap<LatticeVector, BigInt>,
    /// Per maximal cone (in the fan's order), the linear functional that
    /// interpolates the ray values; `None` if some cone has no interpolant.
    pub representatives: Option<Vec<Covector>>,
}

impl SupportFunction {
    pub fn new(fan: Fan, ray_values: BTreeMap<LatticeVector, BigInt>) -> Result<SupportFunction> {
        if let Some(r) = fan.rays().into_iter().find(|r| !ray_values.contains_key(r)) {
            return Err(Error::Precondition(format!("no value given for the ray {r}")));
        }
        let reps: Option<Vec<Covector>> =
            fan.maximal_cones().iter().map(|c| interpolate(c, &ray_values)).collect();
        Ok(SupportFunction { fan, ray_values, representatives: reps })
    }

    pub fn value(&self, ray: &LatticeVector) -> Option<&BigInt> {
        self.ray_values.get(ray)
    }

    /// `ψ + ⟨m, ·⟩` for an integral functional `m`.
    pub fn add_linear(&self, m: &LatticeVector) -> Result<SupportFunction> {
        let values = self.ray_values.iter().map(|(r, v)| (r.clone(), v + m.dot(r))).collect();
        SupportFunction::new(self.fan.clone(), values)
    }
}

/// The functional with `⟨m, v⟩ = ψ(v)` on the rays of `c`, chosen
/// orthogonal to `c^⊥` so it is unique.
fn interpolate(c: &Cone, values: &BTreeMap<LatticeVector, BigInt>) -> Option<Covector> {
    let r = c.lattice_rank();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for v in c.rays() {
        rows.push(v.to_rational());
        rhs.push(BigRational::from_integer(values[v].clone()));
    }
    for e in c.equations() {
        rows.push(e.to_rational());
        rhs.push(BigRational::zero());
    }
    linalg::solve(&rows, &rhs, r).map(Covector::new)
}

/// `ψ ≡ 1` on every ray: the support function of the canonical divisor.
pub fn canonical_support(f: &Fan) -> SupportFunction {
    let values = f.rays().into_iter().map(|r| (r, BigInt::one())).collect();
    SupportFunction::new(f.clone(), values).expect("every ray has a value")
}

pub fn is_cartier(psi: &SupportFunction) -> bool {
    qcartier_index(psi).map_or(false, |k| k.is_one())
}

/// Least `k ≥ 1` with `k·ψ` integrally linear on every maximal cone.
pub fn qcartier_index(psi: &SupportFunction) -> Option<BigInt> {
    let mut k = BigInt::one();
    for c in psi.fan.maximal_cones() {
        let b: Vec<BigInt> = c.rays().iter().map(|v| psi.ray_values[v].clone()).collect();
        let kc = lattice::integral_scaling_index(c.lattice_rank(), c.rays(), &b)?;
        k = num_integer::lcm(k, kc);
    }
    Some(k)
}

/// Strict upper convexity: `⟨m_σ, v⟩ > ψ(v)` for every maximal cone `σ` and
/// every ray `v` of the fan outside `σ`.
pub fn is_strictly_upper_convex(psi: &SupportFunction) -> Result<bool> {
    let Some(reps) = &psi.representatives else {
        let bad = psi
            .fan
            .maximal_cones()
            .iter()
            .find(|c| interpolate(c, &psi.ray_values).is_none())
            .map_or_else(String::new, ToString::to_string);
        return Err(Error::NotQCartier(bad));
    };
    let rays = psi.fan.rays();
    for (c, m) in psi.fan.maximal_cones().iter().zip(reps) {
        for v in &rays {
            if c.has_ray(v) {
                continue;
            }
            if m.pair(v) <= BigRational::from_integer(psi.ray_values[v].clone()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Discrepancies of the new rays of a refinement over a Q-Gorenstein cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub base_cone: Cone,
    pub m_sigma: Covector,
    /// `(v, ⟨m_σ, v⟩ − 1)`, sorted by `v`.
    pub entries: Vec<(LatticeVector, BigRational)>,
}

impl DiscrepancyReport {
    pub fn is_crepant(&self) -> bool {
        self.entries.iter().all(|(_, a)| a.is_zero())
    }

    pub fn is_log_terminal_witness(&self) -> bool {
        self.entries.iter().all(|(_, a)| *a > -BigRational::one())
    }
}

/// `m` with `⟨m, v⟩ = 1` on `Gen(c)`, orthogonal to `c^⊥`; `None` when the
/// cone is not Q-Gorenstein.
pub fn gorenstein_degree(c: &Cone) -> Option<Covector> {
    let ones = c.rays().iter().map(|r| (r.clone(), BigInt::one())).collect();
    interpolate(c, &ones)
}

pub fn discrepancies(base: &Cone, refinement: &Fan) -> Result<DiscrepancyReport> {
    let m = gorenstein_degree(base).ok_or_else(|| Error::NotQGorenstein(base.to_string()))?;
    check_same_support(base, refinement)?;
    let one = BigRational::one();
    let entries = refinement
        .rays()
        .into_iter()
        .filter(|v| !base.has_ray(v))
        .map(|v| {
            let a = m.pair(&v) - &one;
            (v, a)
        })
        .collect();
    Ok(DiscrepancyReport { base_cone: base.clone(), m_sigma: m, entries })
}

/// `|refinement| = |base|`: every cone lies in `base`, all maximal cones have
/// full dimension in `lin(base)`, and the codimension-one faces pair up
/// (boundary ones once, interior ones twice).
pub fn check_same_support(base: &Cone, refinement: &Fan) -> Result<()> {
    let mismatch = || Error::SupportMismatch(base.to_string());
    let cones = refinement.maximal_cones();
    if cones.is_empty() {
        return if base.dim() == 0 { Ok(()) } else { Err(mismatch()) };
    }
    for c in cones {
        if c.dim() != base.dim() || !c.rays().iter().all(|v| base.contains(v)) {
            return Err(mismatch());
        }
    }
    if base.dim() == 0 {
        return Ok(());
    }
    let mut walls: BTreeMap<Vec<LatticeVector>, usize> = BTreeMap::new();
    for c in cones {
        for n in c.facets() {
            *walls.entry(c.rays_on(n)).or_default() += 1;
        }
    }
    for (wall, count) in walls {
        let on_boundary = base.facets().iter().any(|n| wall.iter().all(|v| n.dot(v).is_zero()));
        let expected = if on_boundary { 1 } else { 2 };
        if count != expected {
            return Err(mismatch());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::cone_from_i64;
    use crate::fan::{make_fan, star_subdivision};

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn surface_fan() -> Fan {
        make_fan(&[cone_from_i64(&[&[1, 0], &[1, 1]]).unwrap(), cone_from_i64(&[&[1, 1], &[4, 5]]).unwrap()]).unwrap()
    }

    fn with_values(f: &Fan, vals: &[(&[i64], i64)]) -> SupportFunction {
        let values = vals.iter().map(|(r, v)| (lv(r), BigInt::from(*v))).collect();
        SupportFunction::new(f.clone(), values).unwrap()
    }

    #[test]
    fn canonical_support_values() {
        let psi = canonical_support(&surface_fan());
        assert_eq!(psi.ray_values.len(), 3);
        assert!(psi.ray_values.values().all(BigInt::is_one));
        assert!(canonical_support(&Fan::empty(2)).ray_values.is_empty());
    }

    #[test]
    fn cartier_and_index() {
        assert!(is_cartier(&canonical_support(&surface_fan())));
        // (1,0) and (1,2) both sit at height one under (1,0)
        let f = make_fan(&[cone_from_i64(&[&[1, 0], &[1, 2]]).unwrap()]).unwrap();
        let psi = canonical_support(&f);
        assert!(is_cartier(&psi));
        assert_eq!(psi.representatives.as_ref().unwrap()[0], Covector::new(vec![q(1, 1), q(0, 1)]));
        let f = make_fan(&[cone_from_i64(&[&[1, 0], &[-1, 4]]).unwrap()]).unwrap();
        let psi = canonical_support(&f);
        assert!(!is_cartier(&psi));
        assert_eq!(qcartier_index(&psi), Some(BigInt::from(2)));
        assert_eq!(psi.representatives.as_ref().unwrap()[0], Covector::new(vec![q(1, 1), q(1, 2)]));

        let p = make_fan(&[cone_from_i64(&[&[-3, 3, 1], &[3, 1, 1], &[0, -3, 1]]).unwrap()]).unwrap();
        let psi = canonical_support(&p);
        assert!(is_cartier(&psi));
        assert_eq!(psi.representatives.unwrap()[0], Covector::from_integral(&lv(&[0, 0, 1])));

        // the cone over the unit square is not simplicial but still Cartier
        let sq = make_fan(&[cone_from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap()]).unwrap();
        assert!(is_cartier(&canonical_support(&sq)));
        // a function that is not linear on it
        let bent = with_values(&sq, &[(&[0, 0, 1], 0), (&[1, 0, 1], 0), (&[0, 1, 1], 0), (&[1, 1, 1], 1)]);
        assert_eq!(qcartier_index(&bent), None);
        assert!(matches!(is_strictly_upper_convex(&bent), Err(Error::NotQCartier(_))));
    }

    #[test]
    fn convexity_examples() {
        let f = surface_fan();
        // the concave choice is strictly upper convex, the opposite bend is not
        let up = with_values(&f, &[(&[1, 0], 0), (&[1, 1], 1), (&[4, 5], 0)]);
        assert!(is_strictly_upper_convex(&up).unwrap());
        let down = with_values(&f, &[(&[1, 0], 0), (&[1, 1], -1), (&[4, 5], 0)]);
        assert!(!is_strictly_upper_convex(&down).unwrap());

        let single = make_fan(&[cone_from_i64(&[&[1, 0], &[4, 5]]).unwrap()]).unwrap();
        assert!(is_strictly_upper_convex(&canonical_support(&single)).unwrap());

        // coplanar across a wall
        let flat = with_values(&f, &[(&[1, 0], 1), (&[1, 1], 1), (&[4, 5], 4)]);
        assert!(!is_strictly_upper_convex(&flat).unwrap());
    }

    #[test]
    fn discrepancy_examples() {
        let base = cone_from_i64(&[&[0, 1], &[2, 1]]).unwrap();
        let refined = star_subdivision(&make_fan(&[base.clone()]).unwrap(), &lv(&[1, 1])).unwrap();
        let rep = discrepancies(&base, &refined).unwrap();
        assert_eq!(rep.m_sigma, Covector::from_integral(&lv(&[0, 1])));
        assert_eq!(rep.entries, vec![(lv(&[1, 1]), q(0, 1))]);
        assert!(rep.is_crepant());

        let base = cone_from_i64(&[&[1, 0], &[1, 2]]).unwrap();
        let refined = star_subdivision(&make_fan(&[base.clone()]).unwrap(), &lv(&[1, 1])).unwrap();
        let rep = discrepancies(&base, &refined).unwrap();
        assert_eq!(rep.m_sigma, Covector::new(vec![q(1, 1), q(0, 1)]));
        assert_eq!(rep.entries, vec![(lv(&[1, 1]), q(0, 1))]);

        let base4 = cone_from_i64(&[&[1, 0], &[-1, 4]]).unwrap();
        let refined = star_subdivision(&make_fan(&[base4.clone()]).unwrap(), &lv(&[0, 1])).unwrap();
        let rep = discrepancies(&base4, &refined).unwrap();
        assert_eq!(rep.entries, vec![(lv(&[0, 1]), q(-1, 2))]);
        assert!(rep.is_log_terminal_witness() && !rep.is_crepant());

        let unchanged = make_fan(&[base.clone()]).unwrap();
        assert!(discrepancies(&base, &unchanged).unwrap().entries.is_empty());

        // missing half of the cone
        let half = make_fan(&[cone_from_i64(&[&[1, 0], &[1, 1]]).unwrap()]).unwrap();
        assert!(matches!(discrepancies(&base, &half), Err(Error::SupportMismatch(_))));
    }

    mod props {
        use super::*;
        use crate::cone::make_cone;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn linear_shift_keeps_convexity(vals in proptest::collection::vec(-4i64..5, 3), m in proptest::collection::vec(-3i64..4, 2)) {
                let f = surface_fan();
                let rays = [[1i64, 0], [1, 1], [4, 5]];
                let psi = with_values(&f, &[(&rays[0], vals[0]), (&rays[1], vals[1]), (&rays[2], vals[2])]);
                let shifted = psi.add_linear(&LatticeVector::from_i64s(&m)).unwrap();
                prop_assert_eq!(is_strictly_upper_convex(&psi).unwrap(), is_strictly_upper_convex(&shifted).unwrap());
            }

            #[test]
            fn discrepancies_exceed_minus_one(gens in proptest::collection::vec(proptest::collection::vec(-5i64..=5, 3), 3), pick in 0usize..64) {
                // star-subdivide a random simplicial cone at one of its
                // parallelepiped points
                let vs: Vec<LatticeVector> = gens.iter().map(|g| LatticeVector::from_i64s(g)).collect();
                let Ok(c) = make_cone(&vs) else { return Ok(()) };
                prop_assume!(c.is_full_dimensional() && c.is_simplicial() && !c.is_basic());
                let pts: Vec<LatticeVector> = lattice::parallelepiped_points(c.rays()).unwrap().into_iter().filter(|p| !p.is_zero()).collect();
                let p = lattice::primitive(&pts[pick % pts.len()]).unwrap();
                let refined = star_subdivision(&make_fan(&[c.clone()]).unwrap(), &p).unwrap();
                let rep = discrepancies(&c, &refined).unwrap();
                prop_assert!(rep.is_log_terminal_witness());
                prop_assert_eq!(rep.entries.len(), 1);
            }
        }
    }
}
