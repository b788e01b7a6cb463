//! Exact integer-lattice linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`BigInt`]) and
//! rationals ([`BigRational`]); no floating point is used anywhere. The
//! Hermite and Smith normal forms are computed with explicit unimodular
//! transforms so callers can change lattice bases and read off indices of
//! sublattices.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;

/// An integer point of a lattice `Z^r` (or of its dual, when used as an
/// integral functional).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    /// The `i`-th standard basis vector of `Z^rank`.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Non-negative gcd of the coordinates (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    /// Exact division of every coordinate; panics in debug builds when the
    /// division is not exact.
    pub fn div_exact(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(
            self.0
                .iter()
                .map(|c| {
                    debug_assert!((c % k).is_zero());
                    c / k
                })
                .collect(),
        )
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    /// Appends a coordinate, e.g. to homogenize a polytope point.
    pub fn extended(&self, last: BigInt) -> LatticeVector {
        let mut c = self.0.clone();
        c.push(last);
        LatticeVector(c)
    }

    /// Drops the last coordinate.
    pub fn truncated(&self) -> LatticeVector {
        LatticeVector(self.0[..self.0.len() - 1].to_vec())
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(c: [i64; N]) -> Self {
        LatticeVector::from_i64s(&c)
    }
}

impl Index<usize> for LatticeVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A rational functional `m ∈ M ⊗ Q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Covector(Vec<BigRational>);

impl Covector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Covector(coords)
    }

    pub fn from_integral(v: &LatticeVector) -> Self {
        Covector(v.to_rational())
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn pair(&self, n: &LatticeVector) -> BigRational {
        debug_assert_eq!(self.rank(), n.rank());
        self.0
            .iter()
            .zip(n.coords())
            .map(|(m, x)| m * x)
            .fold(BigRational::zero(), |acc, t| acc + t)
    }

    pub fn pair_rational(&self, x: &[BigRational]) -> BigRational {
        self.0
            .iter()
            .zip(x)
            .map(|(m, x)| m * x)
            .fold(BigRational::zero(), |acc, t| acc + t)
    }

    /// Least `κ ≥ 1` with `κ·m` integral.
    pub fn denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    /// `denominator() · m` as an integral vector.
    pub fn clear_denominator(&self) -> LatticeVector {
        let d = self.denominator();
        LatticeVector(
            self.0
                .iter()
                .map(|c| (c * BigRational::from_integer(d.clone())).to_integer())
                .collect(),
        )
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, k: &BigRational) -> Covector {
        Covector(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A dense integer matrix stored row by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_vectors(rank: usize, vs: &[LatticeVector]) -> Self {
        Self::from_rows(rank, vs.iter().map(|v| v.coords().to_vec()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector(self.data[i].clone())
    }

    pub fn column(&self, j: usize) -> LatticeVector {
        LatticeVector(self.data.iter().map(|r| r[j].clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<LatticeVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "incompatible matrix product");
        let mut p = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    p.data[i][j] += &self.data[i][k] * &other.data[k][j];
                }
            }
        }
        p
    }

    pub fn mul_vector(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.cols, v.rank());
        LatticeVector(self.data.iter().map(|r| r.iter().zip(v.coords()).map(|(a, b)| a * b).sum()).collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Inverse of a unimodular matrix, or `None` if the matrix is singular or
    /// its inverse is not integral.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let inv = linalg::inverse(&self.to_rational())?;
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !inv[i][j].is_integer() {
                    return None;
                }
                out.data[i][j] = inv[i][j].to_integer();
            }
        }
        Some(out)
    }

    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        self.data
            .iter()
            .map(|r| r.iter().map(|c| BigRational::from_integer(c.clone())).collect())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// row[target] += k · row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        let src = self.data[source].clone();
        for (t, s) in self.data[target].iter_mut().zip(&src) {
            *t += k * s;
        }
    }

    /// col[target] += k · col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in &mut self.data {
            let s = r[source].clone();
            r[target] += k * s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in &mut self.data[i] {
            *c = -&*c;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", LatticeVector(r.clone()))?;
        }
        write!(f, "]")
    }
}

/// Divides `v` by the gcd of its coordinates.
pub fn primitive(v: &LatticeVector) -> Result<LatticeVector> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.div_exact(&v.content()))
}

/// Row-style Hermite normal form: returns `(H, U)` with `H = U·A`, `U`
/// unimodular, `H` in row echelon form with positive pivots and the entries
/// above each pivot reduced into `[0, pivot)`. Zero rows sit at the bottom.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut r = 0;
    for col in 0..a.cols {
        if r == a.rows {
            break;
        }
        loop {
            let pivot = (r..a.rows)
                .filter(|&i| !h.data[i][col].is_zero())
                .min_by(|&i, &j| h.data[i][col].abs().cmp(&h.data[j][col].abs()));
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..a.rows {
                if h.data[i][col].is_zero() {
                    continue;
                }
                let q = -h.data[i][col].div_floor(&h.data[r][col]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h.data[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.data[r][col].is_zero() {
            continue;
        }
        if h.data[r][col].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h.data[i][col].div_floor(&h.data[r][col]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form `D = P·A·Q` with unimodular `P`, `Q`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// `Q⁻¹`, tracked alongside `Q`.
    pub right_inverse: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut p = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);
    let mut qi = IntMatrix::identity(n);
    let mut diagonal = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d.data[i][j].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| d.data[i][j].abs() < d.data[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return SmithForm { diagonal, left: p, right: q, right_inverse: qi };
            };
            d.swap_rows(t, bi);
            p.swap_rows(t, bi);
            d.swap_cols(t, bj);
            q.swap_cols(t, bj);
            qi.swap_rows(t, bj);

            let mut clean = true;
            for i in t + 1..m {
                let k = -d.data[i][t].div_floor(&d.data[t][t]);
                d.add_row_multiple(i, t, &k);
                p.add_row_multiple(i, t, &k);
                if !d.data[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let k = -d.data[t][j].div_floor(&d.data[t][t]);
                d.add_col_multiple(j, t, &k);
                q.add_col_multiple(j, t, &k);
                qi.add_row_multiple(t, j, &-k);
                if !d.data[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !(&d.data[i][j] % &d.data[t][t]).is_zero()));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    p.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.data[t][t].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
        diagonal.push(d.data[t][t].clone());
    }
    SmithForm { diagonal, left: p, right: q, right_inverse: qi }
}

/// A basis of `{x ∈ Z^cols : A·x = 0}`, saturated by construction.
pub fn integer_kernel(cols: usize, rows: &[LatticeVector]) -> Vec<LatticeVector> {
    if rows.is_empty() {
        return (0..cols).map(|i| LatticeVector::unit(cols, i)).collect();
    }
    let at = IntMatrix::from_vectors(cols, rows).transpose();
    let (h, u) = hermite_normal_form(&at);
    (0..h.rows)
        .filter(|&i| h.data[i].iter().all(Zero::is_zero))
        .map(|i| u.row(i))
        .collect()
}

/// A basis of the saturated lattice `span(vs) ∩ Z^rank`.
pub fn saturated_basis(rank: usize, vs: &[LatticeVector]) -> Vec<LatticeVector> {
    let nonzero: Vec<_> = vs.iter().filter(|v| !v.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Vec::new();
    }
    let eqs = integer_kernel(rank, &nonzero);
    integer_kernel(rank, &eqs)
}

/// Index of the subgroup generated by `vs` inside the lattice induced on
/// their linear span.
pub fn lattice_determinant(vs: &[LatticeVector]) -> Result<BigInt> {
    let Some(first) = vs.first() else {
        return Ok(BigInt::one());
    };
    let rank = first.rank();
    if let Some(bad) = vs.iter().find(|v| v.rank() != rank) {
        return Err(Error::RankMismatch { expected: rank, found: bad.rank() });
    }
    if linalg::rank_int(vs) < vs.len() {
        let shown: Vec<String> = vs.iter().map(ToString::to_string).collect();
        return Err(Error::LinearlyDependent(shown.join(", ")));
    }
    let snf = smith_normal_form(&IntMatrix::from_vectors(rank, vs));
    Ok(snf.diagonal.iter().product())
}

/// Lattice points of the half-open parallelepiped spanned by the linearly
/// independent vectors `vs`, taken in the lattice induced on their span.
/// The zero vector is included; the count equals `lattice_determinant(vs)`.
pub fn parallelepiped_points(vs: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    let Some(first) = vs.first() else {
        return Ok(Vec::new());
    };
    let rank = first.rank();
    let k = vs.len();
    if linalg::rank_int(vs) < k {
        let shown: Vec<String> = vs.iter().map(ToString::to_string).collect();
        return Err(Error::LinearlyDependent(shown.join(", ")));
    }
    let snf = smith_normal_form(&IntMatrix::from_vectors(rank, vs));
    // V = P⁻¹ D Q⁻¹: the first k rows of Q⁻¹ form a basis b of the saturated
    // lattice and the rows of V generate ⊕ dᵢ Z bᵢ. A coset representative
    // y = Σ cᵢ bᵢ has V-coordinates λ = (c/d)·P.
    let basis: Vec<LatticeVector> = (0..k).map(|i| snf.right_inverse.row(i)).collect();
    let d = &snf.diagonal;
    let mut out = Vec::new();
    let mut c = vec![BigInt::zero(); k];
    loop {
        let mut y = LatticeVector::zero(rank);
        for (ci, bi) in c.iter().zip(&basis) {
            y = &y + &bi.scale(ci);
        }
        let mut x = y;
        for j in 0..k {
            let lambda = (0..k).fold(BigRational::zero(), |acc, i| {
                acc + BigRational::new(c[i].clone(), d[i].clone()) * snf.left.get(i, j)
            });
            let fl = lambda.floor().to_integer();
            if !fl.is_zero() {
                x = &x - &vs[j].scale(&fl);
            }
        }
        out.push(x);
        // odometer over 0 ≤ cᵢ < dᵢ
        let mut i = 0;
        loop {
            if i == k {
                return Ok(out);
            }
            c[i] += 1;
            if c[i] < d[i] {
                break;
            }
            c[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Smith data of the integer system `A·x = b` (rows of `A` given as
/// vectors): the transformed right-hand side `P·b` next to the diagonal.
fn smith_system(cols: usize, rows: &[LatticeVector], b: &[BigInt]) -> (SmithForm, Vec<BigInt>) {
    let snf = smith_normal_form(&IntMatrix::from_vectors(cols, rows));
    let pb = snf.left.mul_vector(&LatticeVector::new(b.to_vec())).into_coords();
    (snf, pb)
}

/// An integral solution of `A·x = b`, if one exists.
pub fn solve_integral(cols: usize, rows: &[LatticeVector], b: &[BigInt]) -> Option<LatticeVector> {
    if rows.is_empty() {
        return Some(LatticeVector::zero(cols));
    }
    let (snf, c) = smith_system(cols, rows, b);
    let r = snf.diagonal.len();
    if c[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..r {
        if !(&c[i] % &snf.diagonal[i]).is_zero() {
            return None;
        }
        y[i] = &c[i] / &snf.diagonal[i];
    }
    Some(snf.right.mul_vector(&LatticeVector::new(y)))
}

/// Least `k ≥ 1` such that `A·x = k·b` has an integral solution, or `None`
/// when `A·x = b` has no rational solution.
pub fn integral_scaling_index(cols: usize, rows: &[LatticeVector], b: &[BigInt]) -> Option<BigInt> {
    if rows.is_empty() {
        return Some(BigInt::one());
    }
    let (snf, c) = smith_system(cols, rows, b);
    let r = snf.diagonal.len();
    if c[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(snf.diagonal.iter().zip(&c).fold(BigInt::one(), |k, (d, ci)| k.lcm(&(d / d.gcd(ci)))))
}

/// Completes a primitive integral row vector to a unimodular matrix whose
/// last row is that vector.
pub fn complete_to_unimodular(m: &LatticeVector) -> Result<IntMatrix> {
    if !m.is_primitive() {
        return Err(Error::NotPrimitive(m.to_string()));
    }
    let r = m.rank();
    // Column HNF of the 1×r matrix m: m·W = (1, 0, …, 0) with W unimodular.
    let (h, u) = hermite_normal_form(&IntMatrix::from_vectors(r, &[m.clone()]).transpose());
    debug_assert!(h.get(0, 0).is_one());
    // u·mᵀ = e₁ ⇒ m·uᵀ = e₁ᵀ ⇒ the first row of (uᵀ)⁻¹ is m.
    let w = u.transpose();
    let winv = w.unimodular_inverse().ok_or_else(|| Error::Invariant("non-unimodular transform".into()))?;
    let mut rows: Vec<Vec<BigInt>> = (1..r).map(|i| winv.data[i].clone()).collect();
    rows.push(winv.data[0].clone());
    let out = IntMatrix::from_rows(r, rows);
    debug_assert!(out.determinant().abs().is_one());
    Ok(out)
}
