//! Polygonal subdivisions of a height-one lattice polygon `P` and the
//! crepant blow-ups acting on them. A cell `Q` stands for the cone over
//! `Q × {1}`, so every vertex is a ray on the hyperplane `⟨m_σ, ·⟩ = 1`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cone::facets_of;
use crate::divisors::{is_strictly_upper_convex, SupportFunction};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::hilbert::hilbert_basis;
use crate::lattice::LatticeVector;
use crate::lp;
use crate::polytope::{cross, LatticePolytope};

type Heights = BTreeMap<LatticeVector, BigRational>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellCensus {
    pub interior: usize,
    pub edge_interior: usize,
    pub basic: bool,
    pub unit_parallelogram: bool,
}

/// Cells are stored sorted. Equality ignores the lift.
#[derive(Clone, Debug)]
pub struct PolygonComplex {
    polygon: LatticePolytope,
    cells: Vec<LatticePolytope>,
    /// Heights on the vertices whose upper hull projects exactly onto the
    /// cells, when known.
    lift: Option<Heights>,
}

impl PartialEq for PolygonComplex {
    fn eq(&self, other: &Self) -> bool {
        self.polygon == other.polygon && self.cells == other.cells
    }
}

impl Eq for PolygonComplex {}

fn q(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Whether `p` lies in the closed counter-clockwise convex polygon.
fn polygon_contains(cell: &LatticePolytope, p: &LatticeVector) -> bool {
    let v = cell.vertices();
    let n = v.len();
    (0..n).all(|i| !cross(&v[i], &v[(i + 1) % n], p).is_negative())
}

/// Interior and boundary lattice points of a polygon, each sorted.
fn split_points(cell: &LatticePolytope) -> (Vec<LatticeVector>, Vec<LatticeVector>) {
    let v = cell.vertices();
    let n = v.len();
    let lo: Vec<BigInt> = (0..2).map(|i| v.iter().map(|p| p[i].clone()).min().unwrap()).collect();
    let hi: Vec<BigInt> = (0..2).map(|i| v.iter().map(|p| p[i].clone()).max().unwrap()).collect();
    let (mut inner, mut outer) = (Vec::new(), Vec::new());
    let mut x = lo[0].clone();
    while x <= hi[0] {
        let mut y = lo[1].clone();
        while y <= hi[1] {
            let p = LatticeVector::new(vec![x.clone(), y.clone()]);
            let signs: Vec<BigInt> = (0..n).map(|i| cross(&v[i], &v[(i + 1) % n], &p)).collect();
            if signs.iter().all(Signed::is_positive) {
                inner.push(p);
            } else if signs.iter().all(|s| !s.is_negative()) {
                outer.push(p);
            }
            y += 1;
        }
        x += 1;
    }
    (inner, outer)
}

fn census_of(cell: &LatticePolytope) -> CellCensus {
    let (inner, outer) = split_points(cell);
    CellCensus {
        interior: inner.len(),
        edge_interior: outer.len() - cell.vertices().len(),
        basic: cell.is_basic_triangle(),
        unit_parallelogram: cell.is_unit_parallelogram(),
    }
}

fn edge_key(a: &LatticeVector, b: &LatticeVector) -> (LatticeVector, LatticeVector) {
    if a < b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

fn validate(polygon: &LatticePolytope, cells: &[LatticePolytope]) -> Result<()> {
    let bad = |why: &str| Err(Error::Invariant(format!("subdivision of {polygon}: {why}")));
    let mut area = BigInt::zero();
    let mut walls: BTreeMap<(LatticeVector, LatticeVector), usize> = BTreeMap::new();
    for c in cells {
        if c.dim() != 2 || c.ambient_rank() != 2 {
            return bad(&format!("{c} is not a polygon"));
        }
        if !c.vertices().iter().all(|v| polygon_contains(polygon, v)) {
            return bad(&format!("{c} leaves the polygon"));
        }
        area += c.area2()?;
        for (a, b) in c.edges()? {
            *walls.entry(edge_key(&a, &b)).or_default() += 1;
        }
    }
    if area != polygon.area2()? {
        return bad("areas do not add up");
    }
    let pv = polygon.vertices();
    let on_boundary = |a: &LatticeVector, b: &LatticeVector| {
        (0..pv.len()).any(|i| {
            let (p, q) = (&pv[i], &pv[(i + 1) % pv.len()]);
            cross(p, q, a).is_zero() && cross(p, q, b).is_zero()
        })
    };
    for ((a, b), k) in walls {
        let ok = if on_boundary(&a, &b) { k == 1 } else { k == 2 };
        if !ok {
            return bad(&format!("edge [{a}, {b}] is met {k} times"));
        }
    }
    Ok(())
}

fn barycentric(a: &LatticeVector, b: &LatticeVector, c: &LatticeVector, p: &LatticeVector) -> [BigRational; 3] {
    let d = q(&cross(a, b, c));
    let s = q(&cross(a, p, c)) / &d;
    let t = q(&cross(a, b, p)) / &d;
    [BigRational::one() - &s - &t, s, t]
}

/// Value at `p` of the affine function through the lifted first three
/// vertices of `cell`.
fn plane_value(cell: &LatticePolytope, h: &Heights, p: &LatticeVector) -> BigRational {
    let v = cell.vertices();
    let w = barycentric(&v[0], &v[1], &v[2], p);
    &w[0] * &h[&v[0]] + &w[1] * &h[&v[1]] + &w[2] * &h[&v[2]]
}

fn vertex_set(cells: &[LatticePolytope]) -> BTreeSet<LatticeVector> {
    cells.iter().flat_map(|c| c.vertices().iter().cloned()).collect()
}

/// The heights are affine on every cell and strictly below each cell's
/// plane at every vertex off that cell.
fn lift_certifies(cells: &[LatticePolytope], h: &Heights) -> bool {
    let verts = vertex_set(cells);
    if !verts.iter().all(|v| h.contains_key(v)) {
        return false;
    }
    cells.iter().all(|c| {
        let own: BTreeSet<&LatticeVector> = c.vertices().iter().collect();
        c.vertices()[3..].iter().all(|v| plane_value(c, h, v) == h[v])
            && verts.iter().filter(|v| !own.contains(v)).all(|v| plane_value(c, h, v) > h[v])
    })
}

/// `old + ε·g` for the largest `ε = 2^{−k}` that certifies `cells`, where
/// `old` is extended affinely from `old_cells` to the new vertices.
fn refine_lift(old_cells: &[LatticePolytope], old: &Heights, cells: &[LatticePolytope], g: &Heights) -> Option<Heights> {
    let mut base = Heights::new();
    for v in vertex_set(cells) {
        let value = match old.get(&v) {
            Some(x) => x.clone(),
            None => {
                let host = old_cells.iter().find(|c| polygon_contains(c, &v))?;
                plane_value(host, old, &v)
            }
        };
        base.insert(v, value);
    }
    let mut eps = BigRational::one();
    for _ in 0..64 {
        let h: Heights = base
            .iter()
            .map(|(v, x)| (v.clone(), g.get(v).map_or_else(|| x.clone(), |gv| x + &eps * gv)))
            .collect();
        if lift_certifies(cells, &h) {
            return Some(h);
        }
        eps /= BigRational::from_integer(2.into());
    }
    None
}

/// Upper hull of the cell's vertices at height 0 and `ones` at height 1,
/// projected back to the plane.
fn zero_one_subdivision(cell: &LatticePolytope, ones: &[LatticeVector]) -> Result<Vec<LatticePolytope>> {
    if ones.is_empty() {
        return Ok(vec![cell.clone()]);
    }
    let top = LatticePolytope::new(ones)?;
    let lift = |v: &LatticeVector, h: i64| LatticeVector::new(vec![v[0].clone(), v[1].clone(), h.into(), BigInt::one()]);
    let mut gens: Vec<LatticeVector> = cell.vertices().iter().map(|v| lift(v, 0)).collect();
    gens.extend(top.vertices().iter().map(|v| lift(v, 1)));
    let (facets, equations) = facets_of(4, &gens);
    if !equations.is_empty() {
        return Err(Error::Invariant(format!("flat lift over {cell}")));
    }
    let mut out = Vec::new();
    for n in facets.iter().filter(|n| n[2].is_negative()) {
        let tight: Vec<LatticeVector> = gens.iter().filter(|g| n.dot(g).is_zero()).map(|g| g.truncated().truncated()).collect();
        out.push(LatticePolytope::new(&tight)?);
    }
    out.sort();
    let area: BigInt = out.iter().map(|c| c.area2()).sum::<Result<BigInt>>()?;
    if area != cell.area2()? {
        return Err(Error::Invariant(format!("upper hull over {cell} does not cover it")));
    }
    Ok(out)
}

/// Record of one fixed-point blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupRecord {
    pub cell: LatticePolytope,
    /// `conv` of the interior lattice points of `cell`.
    pub interior_hull: LatticePolytope,
    /// The new cell on which the order function is 1, if 2-dimensional.
    pub central_cell: Option<LatticePolytope>,
    /// `central_cell` equals `interior_hull` (or both are lower-dimensional).
    pub central_matches: bool,
    /// Every new cell is a linearity domain of the order function, i.e.
    /// some `m ∈ Hilb(τ_Q∨)` attains the minimum on the whole cell.
    pub order_domains_exact: bool,
    pub pieces: Vec<LatticePolytope>,
}

/// One simultaneous round of a phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    /// Blown-up cells (fixed points) or singular edges (curves).
    pub centers: Vec<LatticePolytope>,
    pub new_vertices: Vec<LatticeVector>,
    pub blowups: Vec<BlowupRecord>,
    pub complex: PolygonComplex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseRun {
    pub complex: PolygonComplex,
    pub rounds: Vec<Round>,
}

impl PolygonComplex {
    /// The trivial subdivision `{P}`, lifted by zero.
    pub fn new(polygon: LatticePolytope) -> Result<PolygonComplex> {
        if polygon.ambient_rank() != 2 || polygon.dim() != 2 {
            return Err(Error::Precondition(format!("{polygon} is not a polygon in the plane")));
        }
        let lift = polygon.vertices().iter().map(|v| (v.clone(), BigRational::zero())).collect();
        Ok(PolygonComplex { cells: vec![polygon.clone()], polygon, lift: Some(lift) })
    }

    /// A subdivision given by its cells; checked to be edge-to-edge and to
    /// cover `polygon`.
    pub fn from_cells(polygon: LatticePolytope, mut cells: Vec<LatticePolytope>) -> Result<PolygonComplex> {
        cells.sort();
        validate(&polygon, &cells)?;
        Ok(PolygonComplex { polygon, cells, lift: None })
    }

    pub fn polygon(&self) -> &LatticePolytope {
        &self.polygon
    }

    pub fn cells(&self) -> &[LatticePolytope] {
        &self.cells
    }

    /// Heights certifying that the subdivision is regular, when tracked.
    pub fn lift(&self) -> Option<&BTreeMap<LatticeVector, BigRational>> {
        self.lift.as_ref()
    }

    pub fn vertices(&self) -> Vec<LatticeVector> {
        vertex_set(&self.cells).into_iter().collect()
    }

    pub fn census(&self) -> Vec<CellCensus> {
        self.cells.iter().map(census_of).collect()
    }

    pub fn interior_point_count(&self) -> usize {
        self.cells.iter().map(|c| split_points(c).0.len()).sum()
    }

    /// Lattice points in the relative interior of some cell edge.
    pub fn edge_interior_points(&self) -> Vec<LatticeVector> {
        let mut set = BTreeSet::new();
        for c in &self.cells {
            let (_, outer) = split_points(c);
            set.extend(outer.into_iter().filter(|p| !c.vertices().contains(p)));
        }
        set.into_iter().collect()
    }

    /// The fan of cones over the cells in `Z³`.
    pub fn fan(&self) -> Fan {
        Fan::from_trusted(3, self.cells.iter().map(LatticePolytope::cone_over).collect())
    }

    fn replace(&self, replacements: Vec<(usize, Vec<LatticePolytope>)>) -> Result<(PolygonComplex, Vec<LatticeVector>)> {
        let replaced: BTreeSet<usize> = replacements.iter().map(|(i, _)| *i).collect();
        let mut cells: Vec<LatticePolytope> =
            self.cells.iter().enumerate().filter(|(i, _)| !replaced.contains(i)).map(|(_, c)| c.clone()).collect();
        for (_, pieces) in replacements {
            cells.extend(pieces);
        }
        cells.sort();
        validate(&self.polygon, &cells)?;
        let old = vertex_set(&self.cells);
        let fresh: Vec<LatticeVector> = vertex_set(&cells).into_iter().filter(|v| !old.contains(v)).collect();
        let g: Heights = fresh.iter().map(|v| (v.clone(), BigRational::one())).collect();
        let lift = self.lift.as_ref().and_then(|l| refine_lift(&self.cells, l, &cells, &g));
        if self.lift.is_some() && lift.is_none() {
            return Err(Error::Invariant(format!("no concave lift for the refinement of {}", self.polygon)));
        }
        Ok((PolygonComplex { polygon: self.polygon.clone(), cells, lift }, fresh))
    }

    /// Cells with interior lattice points.
    pub fn non_cdv_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| !split_points(&self.cells[i]).0.is_empty()).collect()
    }
}

/// The order function `u(x) = min{⟨m, x⟩ : m ∈ Hilb(τ_Q∨) ∖ {0}}` on the
/// lattice points of the cell, and the Hilbert basis used.
fn order_function(cell: &LatticePolytope) -> Result<(BTreeMap<LatticeVector, BigInt>, Vec<LatticeVector>)> {
    let dual = cell.cone_over().dual().to_cone()?;
    let basis = hilbert_basis(&dual)?.members;
    let (inner, outer) = split_points(cell);
    let mut u = BTreeMap::new();
    for p in inner.into_iter().chain(outer) {
        let x = p.extended(BigInt::one());
        let v = basis.iter().map(|m| m.dot(&x)).min().expect("nonempty Hilbert basis");
        u.insert(p, v);
    }
    Ok((u, basis))
}

fn blowup_pieces(cell: &LatticePolytope) -> Result<BlowupRecord> {
    let (inner, _) = split_points(cell);
    if inner.is_empty() {
        return Err(Error::Precondition(format!("cell {cell} is already cDV")));
    }
    let (u, basis) = order_function(cell)?;
    for (p, v) in &u {
        let expected = if inner.binary_search(p).is_ok() { 1 } else { 0 };
        if *v != BigInt::from(expected) {
            return Err(Error::Invariant(format!("order function of {cell} is {v} at {p}")));
        }
    }
    let pieces = zero_one_subdivision(cell, &inner)?;
    let ones: BTreeSet<&LatticeVector> = inner.iter().collect();
    let order_domains_exact = pieces.iter().all(|piece| {
        basis.iter().any(|m| {
            piece.vertices().iter().all(|v| m.dot(&v.extended(BigInt::one())) == u[v])
        })
    });
    let interior_hull = LatticePolytope::new(&inner)?;
    let central_cell = pieces.iter().find(|p| p.vertices().iter().all(|v| ones.contains(v))).cloned();
    let central_matches = match &central_cell {
        Some(c) => *c == interior_hull,
        None => interior_hull.dim() < 2,
    };
    Ok(BlowupRecord { cell: cell.clone(), interior_hull, central_cell, central_matches, order_domains_exact, pieces })
}

/// Blows up the fixed point of the cone over the cell `index`: the cell is
/// replaced by the linearity domains of its order function.
pub fn blowup_fixed_point(pc: &PolygonComplex, index: usize) -> Result<(PolygonComplex, BlowupRecord)> {
    let cell = pc.cells.get(index).ok_or_else(|| Error::Precondition(format!("no cell {index}")))?;
    let record = blowup_pieces(cell)?;
    let (next, _) = pc.replace(vec![(index, record.pieces.clone())])?;
    Ok((next, record))
}

/// Fixed-point phase: rounds of simultaneous fixed-point blow-ups until no cell
/// has interior lattice points.
pub fn crepant_fixed_point_phase(pc: &PolygonComplex) -> Result<PhaseRun> {
    let mut current = pc.clone();
    let mut rounds = Vec::new();
    loop {
        let eligible = current.non_cdv_cells();
        if eligible.is_empty() {
            return Ok(PhaseRun { complex: current, rounds });
        }
        let before = current.interior_point_count();
        let blowups: Vec<BlowupRecord> = eligible.iter().map(|&i| blowup_pieces(&current.cells[i])).collect::<Result<_>>()?;
        let replacements = eligible.iter().zip(&blowups).map(|(&i, b)| (i, b.pieces.clone())).collect();
        let (next, new_vertices) = current.replace(replacements)?;
        if next.interior_point_count() >= before {
            return Err(Error::Invariant("interior points did not decrease".into()));
        }
        let centers = blowups.iter().map(|b| b.cell.clone()).collect();
        rounds.push(Round { centers, new_vertices, blowups, complex: next.clone() });
        current = next;
    }
}

/// The fixed-point phase as a linear sequence of single blow-ups, the next cell
/// picked by `choose` among the indices of the eligible cells.
pub fn crepant_fixed_point_phase_by(pc: &PolygonComplex, mut choose: impl FnMut(&[usize]) -> usize) -> Result<PolygonComplex> {
    let mut current = pc.clone();
    loop {
        let eligible = current.non_cdv_cells();
        if eligible.is_empty() {
            return Ok(current);
        }
        let pick = choose(&eligible);
        if !eligible.contains(&pick) {
            return Err(Error::Precondition(format!("cell {pick} is not eligible")));
        }
        current = blowup_fixed_point(&current, pick)?.0;
    }
}

/// Curve phase: blow-ups of the singular curves. Each round lifts the
/// edge-interior lattice points of every cell to height 1 over the cell's
/// vertices at height 0, which is the order function of the ideal of the
/// 1-dimensional singular locus; rounds repeat until no edge carries
/// interior lattice points.
pub fn blowup_curve_phase(pc: &PolygonComplex) -> Result<PhaseRun> {
    if !pc.non_cdv_cells().is_empty() {
        return Err(Error::Precondition("run the fixed-point phase first: some cell has interior lattice points".into()));
    }
    let mut current = pc.clone();
    let mut rounds = Vec::new();
    loop {
        let before = current.edge_interior_points();
        if before.is_empty() {
            break;
        }
        let mut replacements = Vec::new();
        let mut centers = BTreeSet::new();
        for (i, c) in current.cells.iter().enumerate() {
            let (_, outer) = split_points(c);
            let ones: Vec<LatticeVector> = outer.into_iter().filter(|p| !c.vertices().contains(p)).collect();
            if ones.is_empty() {
                continue;
            }
            for (a, b) in c.edges()? {
                if ones.iter().any(|p| crate::polytope::strictly_between(&a, &b, p)) {
                    let (a, b) = edge_key(&a, &b);
                    centers.insert(LatticePolytope::new(&[a, b])?);
                }
            }
            replacements.push((i, zero_one_subdivision(c, &ones)?));
        }
        let (next, new_vertices) = current.replace(replacements)?;
        if next.edge_interior_points().len() >= before.len() {
            return Err(Error::Invariant("edge-interior points did not decrease".into()));
        }
        rounds.push(Round { centers: centers.into_iter().collect(), new_vertices, blowups: Vec::new(), complex: next.clone() });
        current = next;
    }
    if let Some(c) = current.cells.iter().find(|c| !c.is_basic_triangle() && !c.is_unit_parallelogram()) {
        return Err(Error::Invariant(format!("empty cell {c} is neither basic nor a unit parallelogram")));
    }
    Ok(PhaseRun { complex: current, rounds })
}

/// A full crepant resolution over `P` with the box diagonals it uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub complex: PolygonComplex,
    pub diagonals: Vec<(LatticeVector, LatticeVector)>,
    /// The fan over the triangulation in `Z³`.
    pub fan: Fan,
    /// Integral support function on `fan` that is strictly upper convex,
    /// or `None` if the triangulation is not regular.
    pub certificate: Option<SupportFunction>,
}

/// Unit parallelograms of `pc`, in cell order.
pub fn parallelograms(pc: &PolygonComplex) -> Result<Vec<LatticePolytope>> {
    let mut out = Vec::new();
    for c in &pc.cells {
        if c.is_unit_parallelogram() {
            out.push(c.clone());
        } else if !c.is_basic_triangle() {
            return Err(Error::Precondition(format!("cell {c} is neither basic nor a unit parallelogram")));
        }
    }
    Ok(out)
}

fn fold_row(
    index: &BTreeMap<LatticeVector, usize>,
    plus: [&LatticeVector; 2],
    minus: [&LatticeVector; 2],
) -> Vec<BigRational> {
    let mut row = vec![BigRational::zero(); index.len()];
    for v in plus {
        row[index[v]] += BigRational::one();
    }
    for v in minus {
        row[index[v]] -= BigRational::one();
    }
    row
}

/// Heights making `cells` the upper hull, from scratch: every cell plane is
/// affine on the cell and folds down by at least 1 across interior edges.
fn lift_by_lp(cells: &[LatticePolytope]) -> Option<Heights> {
    let verts: Vec<LatticeVector> = vertex_set(cells).into_iter().collect();
    let index: BTreeMap<LatticeVector, usize> = verts.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let n = verts.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let plane_row = |c: &LatticePolytope, p: &LatticeVector| {
        let v = c.vertices();
        let w = barycentric(&v[0], &v[1], &v[2], p);
        let mut row = vec![BigRational::zero(); n];
        for (k, x) in w.into_iter().enumerate() {
            row[index[&v[k]]] += x;
        }
        row[index[p]] -= BigRational::one();
        row
    };
    let mut by_edge: BTreeMap<(LatticeVector, LatticeVector), Vec<usize>> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        for v in &c.vertices()[3..] {
            let row = plane_row(c, v);
            rows.push(row.iter().map(|x| -x).collect());
            rows.push(row);
            rhs.push(BigRational::zero());
            rhs.push(BigRational::zero());
        }
        for (a, b) in c.edges().ok()? {
            by_edge.entry(edge_key(&a, &b)).or_default().push(i);
        }
    }
    for ((a, b), owners) in by_edge {
        if let [i, j] = owners[..] {
            for (own, other) in [(i, j), (j, i)] {
                let apex = cells[other].vertices().iter().find(|v| !cross(&a, &b, v).is_zero())?;
                rows.push(plane_row(&cells[own], apex));
                rhs.push(BigRational::one());
            }
        }
    }
    let x = lp::feasible(&rows, &rhs, n)?;
    Some(verts.into_iter().zip(x).collect())
}

fn integral_support(cells: &[LatticePolytope], fan: Fan, h: &Heights) -> Result<Option<SupportFunction>> {
    let lcm = h.values().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let values: BTreeMap<LatticeVector, BigInt> = h
        .iter()
        .map(|(v, x)| (v.extended(BigInt::one()), (x * BigRational::from_integer(lcm.clone())).to_integer()))
        .collect();
    let scaled: Heights = values.iter().map(|(v, x)| (v.truncated(), q(x))).collect();
    if !lift_certifies(cells, &scaled) {
        return Ok(None);
    }
    let psi = SupportFunction::new(fan, values)?;
    Ok(is_strictly_upper_convex(&psi)?.then_some(psi))
}

/// The completion picking, for the `i`-th unit parallelogram `v₀v₁v₂v₃`
/// (counter-clockwise from its smallest vertex), the diagonal `v₁v₃` when
/// `choice[i]` and `v₀v₂` otherwise.
pub fn completion(pc: &PolygonComplex, choice: &[bool]) -> Result<Completion> {
    let boxes = parallelograms(pc)?;
    if boxes.len() != choice.len() {
        return Err(Error::Precondition(format!("{} diagonal choices for {} parallelograms", choice.len(), boxes.len())));
    }
    let mut cells: Vec<LatticePolytope> = pc.cells.iter().filter(|c| c.is_basic_triangle()).cloned().collect();
    let mut diagonals = Vec::new();
    let mut folds = Vec::new();
    for (b, &flip) in boxes.iter().zip(choice) {
        let v = b.vertices();
        let (a, c, x, y) = if flip { (&v[1], &v[3], &v[0], &v[2]) } else { (&v[0], &v[2], &v[1], &v[3]) };
        cells.push(LatticePolytope::new(&[a.clone(), c.clone(), x.clone()])?);
        cells.push(LatticePolytope::new(&[a.clone(), c.clone(), y.clone()])?);
        diagonals.push(edge_key(a, c));
        folds.push(([a.clone(), c.clone()], [x.clone(), y.clone()]));
    }
    cells.sort();
    validate(&pc.polygon, &cells)?;
    let from_lift = pc.lift.as_ref().filter(|l| lift_certifies(&pc.cells, l)).and_then(|l| {
        let verts: Vec<LatticeVector> = folds.iter().flat_map(|(p, m)| p.iter().chain(m).cloned()).collect::<BTreeSet<_>>().into_iter().collect();
        let index: BTreeMap<LatticeVector, usize> = verts.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let rows: Vec<Vec<BigRational>> = folds.iter().map(|(p, m)| fold_row(&index, [&p[0], &p[1]], [&m[0], &m[1]])).collect();
        let g = lp::feasible(&rows, &vec![BigRational::one(); rows.len()], verts.len())?;
        let g: Heights = verts.into_iter().zip(g).collect();
        refine_lift(&pc.cells, l, &cells, &g)
    });
    let lift = from_lift.or_else(|| lift_by_lp(&cells));
    let complex = PolygonComplex { polygon: pc.polygon.clone(), cells, lift: lift.clone() };
    let fan = complex.fan();
    let certificate = match &lift {
        Some(h) => integral_support(&complex.cells, fan.clone(), h)?,
        None => None,
    };
    Ok(Completion { complex, diagonals, fan, certificate })
}

/// All `2^k` completions, the `i`-th taking its diagonal choices
/// from the bits of `i`.
pub fn completions(pc: &PolygonComplex) -> Result<Vec<Completion>> {
    let k = parallelograms(pc)?.len();
    if k >= usize::BITS as usize - 1 {
        return Err(Error::OutOfScope(format!("2^{k} completions")));
    }
    (0..1usize << k).map(|i| completion(pc, &(0..k).map(|j| i >> j & 1 == 1).collect::<Vec<_>>())).collect()
}
