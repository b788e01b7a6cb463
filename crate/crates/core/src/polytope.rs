//! Lattice polytopes, handled through the cone over them at height one.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cone::{make_cone, Cone};
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;

/// `conv(vertices)`. Vertices are the extreme points only; polygons in the
/// plane list them counter-clockwise from the lexicographically smallest,
/// everything else lists them sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePolytope {
    ambient: usize,
    dim: usize,
    vertices: Vec<LatticeVector>,
}

pub(crate) fn cross(o: &LatticeVector, a: &LatticeVector, b: &LatticeVector) -> BigInt {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

impl LatticePolytope {
    pub fn new(points: &[LatticeVector]) -> Result<LatticePolytope> {
        let Some(first) = points.first() else {
            return Err(Error::Precondition("a polytope needs at least one point".into()));
        };
        let ambient = first.rank();
        if let Some(bad) = points.iter().find(|p| p.rank() != ambient) {
            return Err(Error::RankMismatch { expected: ambient, found: bad.rank() });
        }
        let lifted: Vec<LatticeVector> = points.iter().map(|p| p.extended(BigInt::one())).collect();
        let cone = make_cone(&lifted)?;
        let mut vertices: Vec<LatticeVector> = cone.rays().iter().map(LatticeVector::truncated).collect();
        let dim = cone.dim() - 1;
        if ambient == 2 && dim == 2 {
            let p0 = vertices.iter().min().expect("nonempty").clone();
            vertices.retain(|v| *v != p0);
            vertices.sort_by(|a, b| match cross(&p0, a, b).sign() {
                num_bigint::Sign::Plus => Ordering::Less,
                num_bigint::Sign::Minus => Ordering::Greater,
                num_bigint::Sign::NoSign => Ordering::Equal,
            });
            vertices.insert(0, p0);
        }
        Ok(LatticePolytope { ambient, dim, vertices })
    }

    pub fn from_i64(points: &[&[i64]]) -> Result<LatticePolytope> {
        LatticePolytope::new(&points.iter().map(|p| LatticeVector::from_i64s(p)).collect::<Vec<_>>())
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    /// `pos{(v, 1) : v vertex}`.
    pub fn cone_over(&self) -> Cone {
        let lifted: Vec<LatticeVector> = self.vertices.iter().map(|p| p.extended(BigInt::one())).collect();
        make_cone(&lifted).expect("a cone over a polytope is pointed")
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        self.cone_over().contains(&x.extended(BigInt::one()))
    }

    fn bounding_box(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let lo = (0..self.ambient).map(|i| self.vertices.iter().map(|v| v[i].clone()).min().unwrap()).collect();
        let hi = (0..self.ambient).map(|i| self.vertices.iter().map(|v| v[i].clone()).max().unwrap()).collect();
        (lo, hi)
    }

    fn points_where(&self, keep: impl Fn(&Cone, &LatticeVector) -> bool) -> Vec<LatticeVector> {
        let cone = self.cone_over();
        let (lo, hi) = self.bounding_box();
        let mut x = lo.clone();
        let mut out = Vec::new();
        loop {
            let p = LatticeVector::new(x.clone());
            if keep(&cone, &p.extended(BigInt::one())) {
                out.push(p);
            }
            let mut i = 0;
            while i < self.ambient {
                x[i] += 1;
                if x[i] <= hi[i] {
                    break;
                }
                x[i] = lo[i].clone();
                i += 1;
            }
            if i == self.ambient {
                out.sort();
                return out;
            }
        }
    }

    /// All lattice points, sorted.
    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        self.points_where(|c, p| c.contains(p))
    }

    /// Lattice points in the relative interior.
    pub fn interior_points(&self) -> Vec<LatticeVector> {
        if self.dim == 0 {
            return self.vertices.clone();
        }
        self.points_where(|c, p| c.contains_in_relative_interior(p))
    }

    pub fn boundary_points(&self) -> Vec<LatticeVector> {
        let inner = self.interior_points();
        self.lattice_points().into_iter().filter(|p| inner.binary_search(p).is_err()).collect()
    }

    pub fn is_elementary(&self) -> bool {
        self.lattice_points().len() == self.vertices.len()
    }

    fn require_polygon(&self) -> Result<()> {
        if self.ambient != 2 || self.dim != 2 {
            return Err(Error::Precondition(format!("{self} is not a polygon in the plane")));
        }
        Ok(())
    }

    /// Twice the Euclidean area, i.e. the normalized area of a polygon.
    pub fn area2(&self) -> Result<BigInt> {
        self.require_polygon()?;
        let n = self.vertices.len();
        let o = &self.vertices[0];
        Ok((1..n - 1).map(|i| cross(o, &self.vertices[i], &self.vertices[i + 1])).sum())
    }

    /// Edges of a polygon, counter-clockwise.
    pub fn edges(&self) -> Result<Vec<(LatticeVector, LatticeVector)>> {
        self.require_polygon()?;
        let n = self.vertices.len();
        Ok((0..n).map(|i| (self.vertices[i].clone(), self.vertices[(i + 1) % n].clone())).collect())
    }

    /// Lattice points strictly inside the edges of a polygon.
    pub fn edge_interior_points(&self) -> Result<Vec<LatticeVector>> {
        let mut out = Vec::new();
        for (a, b) in self.edges()? {
            out.extend(segment_interior_points(&a, &b));
        }
        out.sort();
        Ok(out)
    }

    /// A lattice polygon with four vertices whose cone is the cone over the
    /// unit square, i.e. a parallelogram of normalized area 2 without
    /// further lattice points.
    pub fn is_unit_parallelogram(&self) -> bool {
        self.vertices.len() == 4
            && self.area2().map_or(false, |a| a == BigInt::from(2))
            && &self.vertices[0] + &self.vertices[2] == &self.vertices[1] + &self.vertices[3]
    }

    /// A lattice triangle of normalized area 1.
    pub fn is_basic_triangle(&self) -> bool {
        self.vertices.len() == 3 && self.area2().map_or(false, |a| a.is_one())
    }
}

/// Lattice points strictly between `a` and `b`, ordered from `a` to `b`.
pub fn segment_interior_points(a: &LatticeVector, b: &LatticeVector) -> Vec<LatticeVector> {
    let d = b - a;
    let g = d.content();
    if g.is_zero() {
        return Vec::new();
    }
    let step = d.div_exact(&g);
    let mut out = Vec::new();
    let mut k = BigInt::one();
    while k < g {
        out.push(a + &step.scale(&k));
        k += 1;
    }
    out
}

impl fmt::Display for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Whether `x` lies strictly inside the segment `[a, b]`.
pub(crate) fn strictly_between(a: &LatticeVector, b: &LatticeVector, x: &LatticeVector) -> bool {
    if !cross(a, b, x).is_zero() {
        return false;
    }
    let t = (x - a).dot(&(b - a));
    t.is_positive() && t < (b - a).dot(&(b - a))
}
