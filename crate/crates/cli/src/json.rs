//! Exact integers and rationals as JSON numbers.
//!
//! `serde_json` is built with `arbitrary_precision`, so a number keeps its
//! digits and is parsed into a [`BigInt`] without passing through `f64`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

use toresolve_core::{Covector, LatticeVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Number::from_str(&self.0.to_string()).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = Number::deserialize(d)?;
        let text = n.to_string();
        BigInt::from_str(&text).map(Int).map_err(|_| D::Error::custom(format!("expected an integer, found {text}")))
    }
}

impl From<&BigInt> for Int {
    fn from(x: &BigInt) -> Self {
        Int(x.clone())
    }
}

impl From<usize> for Int {
    fn from(x: usize) -> Self {
        Int(BigInt::from(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rational {
    pub num: Int,
    pub den: Int,
}

impl From<&BigRational> for Rational {
    fn from(x: &BigRational) -> Self {
        Rational { num: Int(x.numer().clone()), den: Int(x.denom().clone()) }
    }
}

impl Rational {
    pub fn to_big(&self) -> Option<BigRational> {
        let zero = BigInt::from(0);
        (self.den.0 != zero).then(|| BigRational::new(self.num.0.clone(), self.den.0.clone()))
    }
}

pub fn vector(v: &LatticeVector) -> Vec<Int> {
    v.coords().iter().map(Int::from).collect()
}

pub fn vectors<'a>(vs: impl IntoIterator<Item = &'a LatticeVector>) -> Vec<Vec<Int>> {
    vs.into_iter().map(vector).collect()
}

pub fn covector(m: &Covector) -> Vec<Rational> {
    m.coords().iter().map(Rational::from).collect()
}
