//! Minimal resolutions of 2-dimensional toric singularities.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cone::{make_cone, Cone};
use crate::error::{Error, Result};
use crate::fan::{make_fan, Fan};
use crate::hilbert::hilbert_basis;
use crate::lattice::LatticeVector;

/// `p/q = a₁ − 1/(a₂ − 1/(… − 1/a_s))` with every `aᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFExpansion {
    pub p: BigInt,
    pub q: BigInt,
    pub terms: Vec<BigInt>,
}

impl CFExpansion {
    /// Evaluates the terms back to a rational number.
    pub fn value(&self) -> BigRational {
        let mut it = self.terms.iter().rev();
        let mut acc = BigRational::from_integer(it.next().expect("nonempty").clone());
        for a in it {
            acc = BigRational::from_integer(a.clone()) - acc.recip();
        }
        acc
    }
}

pub fn cf_expansion(p: &BigInt, q: &BigInt) -> Result<CFExpansion> {
    if !(q.is_positive() && q < p) || !p.gcd(q).is_one() {
        return Err(Error::InvalidFraction { p: p.to_string(), q: q.to_string() });
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut terms = Vec::new();
    while !b.is_zero() {
        let t = a.div_ceil(&b);
        let next = &t * &b - &a;
        terms.push(t);
        a = b;
        b = next;
    }
    Ok(CFExpansion { p: p.clone(), q: q.clone(), terms })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalCurve {
    pub ray: LatticeVector,
    pub self_intersection: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalResolution {
    pub fan: Fan,
    /// Ordered from the first generator of the cone to the second.
    pub exceptional: Vec<ExceptionalCurve>,
}

fn det2(a: &LatticeVector, b: &LatticeVector) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Subdivides `c` at the members of its Hilbert basis, which are the lattice
/// points on the compact boundary of `conv(σ ∩ N ∖ {0})`.
pub fn minimal_resolution(c: &Cone) -> Result<MinimalResolution> {
    if c.lattice_rank() != 2 {
        return Err(Error::RankMismatch { expected: 2, found: c.lattice_rank() });
    }
    if !c.is_full_dimensional() {
        return Err(Error::Precondition(format!("{c} is not full-dimensional")));
    }
    let first = c.rays()[0].clone();
    let orient = det2(&first, &c.rays()[1]).signum();
    let mut chain = hilbert_basis(c)?.members;
    chain.sort_by(|a, b| (&orient * det2(b, a)).cmp(&BigInt::zero()));
    if chain[0] != first {
        return Err(Error::Invariant(format!("Hilbert basis of {c} does not start at {first}")));
    }
    let mut exceptional = Vec::new();
    for w in chain.windows(3) {
        let sum = &w[0] + &w[2];
        let b = sum.content() / w[1].content();
        if w[1].scale(&b) != sum {
            return Err(Error::Invariant(format!("{} + {} is not a multiple of {}", w[0], w[2], w[1])));
        }
        exceptional.push(ExceptionalCurve { ray: w[1].clone(), self_intersection: -b });
    }
    let cones: Vec<Cone> = chain.windows(2).map(|w| make_cone(&w.to_vec())).collect::<Result<_>>()?;
    let fan = make_fan(&cones)?;
    if !fan.is_basic() {
        return Err(Error::Invariant(format!("minimal resolution of {c} is not basic")));
    }
    Ok(MinimalResolution { fan, exceptional })
}
