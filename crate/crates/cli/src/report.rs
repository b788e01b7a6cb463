//! JSON reports. Every list comes out in the order the core library fixes
//! (sorted rays, sorted cells), so reports are byte-stable across runs.

use std::collections::BTreeMap;

use serde::Serialize;

use toresolve_core::hilbert::Relation;
use toresolve_core::resolve3d::{BlowupRecord, CellCensus, Completion, Piece, TraceStep};
use toresolve_core::{
    DiscrepancyReport, Fan, HilbertBasis, LatticeChange, LatticePolytope, LatticeVector, MinimalResolution,
    SingularityReport,
};

use crate::json::{covector, vector, vectors, Int, Rational};

pub type Vector = Vec<Int>;

#[derive(Debug, Serialize)]
pub struct Classification {
    pub rays: Vec<Vector>,
    pub dimension: usize,
    pub smooth: bool,
    pub q_factorial: bool,
    pub q_gorenstein: bool,
    pub gorenstein_index: Option<Int>,
    pub m_sigma: Option<Vec<Rational>>,
    pub gorenstein: bool,
    pub terminal: bool,
    pub canonical: bool,
    pub log_terminal: bool,
    pub lci: Option<bool>,
    pub rational: bool,
    pub embedding_dimension: Option<usize>,
}

impl Classification {
    pub fn new(rays: &[LatticeVector], dimension: usize, r: &SingularityReport) -> Self {
        Classification {
            rays: vectors(rays),
            dimension,
            smooth: r.smooth,
            q_factorial: r.q_factorial,
            q_gorenstein: r.q_gorenstein.is_some(),
            gorenstein_index: r.q_gorenstein.as_ref().map(|g| Int::from(&g.index)),
            m_sigma: r.q_gorenstein.as_ref().map(|g| covector(&g.m_sigma)),
            gorenstein: r.gorenstein,
            terminal: r.terminal,
            canonical: r.canonical,
            log_terminal: r.log_terminal,
            lci: r.lci,
            rational: r.rational,
            embedding_dimension: r.embedding_dim,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RelationOut {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
}

#[derive(Debug, Serialize)]
pub struct HilbertReport {
    pub rays: Vec<Vector>,
    pub hilbert_basis: Vec<Vector>,
    /// Only for full-dimensional cones, whose duals are pointed.
    pub dual_hilbert_basis: Option<Vec<Vector>>,
    pub embedding_dimension: Option<usize>,
    /// Exponent vectors over `dual_hilbert_basis`; present with a degree bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<RelationOut>>,
}

impl HilbertReport {
    pub fn new(rays: &[LatticeVector], basis: &HilbertBasis, dual: Option<&HilbertBasis>, relations: Option<&[Relation]>) -> Self {
        HilbertReport {
            rays: vectors(rays),
            hilbert_basis: vectors(&basis.members),
            dual_hilbert_basis: dual.map(|d| vectors(&d.members)),
            embedding_dimension: dual.map(|d| d.len()),
            relations: relations.map(|rs| rs.iter().map(|r| RelationOut { lhs: r.lhs.clone(), rhs: r.rhs.clone() }).collect()),
        }
    }
}

/// Rays sorted, cones as sorted indices into `rays`.
#[derive(Debug, PartialEq, Eq, Serialize)]
pub struct FanOut {
    pub rays: Vec<Vector>,
    pub cones: Vec<Vec<usize>>,
}

impl FanOut {
    pub fn from_cones(cones: &[Vec<LatticeVector>]) -> Self {
        let mut all: Vec<LatticeVector> = cones.iter().flatten().cloned().collect();
        all.sort();
        all.dedup();
        let index: BTreeMap<&LatticeVector, usize> = all.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut out: Vec<Vec<usize>> = cones
            .iter()
            .map(|c| {
                let mut ix: Vec<usize> = c.iter().map(|v| index[v]).collect();
                ix.sort();
                ix
            })
            .collect();
        out.sort();
        FanOut { rays: vectors(&all), cones: out }
    }

    pub fn new(f: &Fan) -> Self {
        let cones: Vec<Vec<LatticeVector>> = f.maximal_cones().iter().map(|c| c.rays().to_vec()).collect();
        FanOut::from_cones(&cones)
    }
}

#[derive(Debug, Serialize)]
pub struct Expansion {
    pub p: Int,
    pub q: Int,
    pub terms: Vec<Int>,
}

#[derive(Debug, Serialize)]
pub struct CurveOut {
    pub ray: Vector,
    pub self_intersection: Int,
}

#[derive(Debug, Serialize)]
pub struct Resolution2d {
    pub rays: Vec<Vector>,
    /// `p/q` with `σ ≅ pos{(0,1), (p,−q)}`; absent for smooth cones.
    pub expansion: Option<Expansion>,
    pub fan: FanOut,
    pub exceptional: Vec<CurveOut>,
}

impl Resolution2d {
    pub fn new(rays: &[LatticeVector], r: &MinimalResolution, expansion: Option<Expansion>) -> Self {
        Resolution2d {
            rays: vectors(rays),
            expansion,
            fan: FanOut::new(&r.fan),
            exceptional: r
                .exceptional
                .iter()
                .map(|e| CurveOut { ray: vector(&e.ray), self_intersection: Int::from(&e.self_intersection) })
                .collect(),
        }
    }
}

fn polygon(p: &LatticePolytope) -> Vec<Vector> {
    vectors(p.vertices())
}

#[derive(Debug, Serialize)]
pub struct CensusOut {
    pub interior: usize,
    pub edge_interior: usize,
    pub basic: bool,
    pub unit_parallelogram: bool,
}

impl From<&CellCensus> for CensusOut {
    fn from(c: &CellCensus) -> Self {
        CensusOut { interior: c.interior, edge_interior: c.edge_interior, basic: c.basic, unit_parallelogram: c.unit_parallelogram }
    }
}

#[derive(Debug, Serialize)]
pub struct DiscrepancyEntry {
    pub ray: Vector,
    pub discrepancy: Rational,
}

#[derive(Debug, Serialize)]
pub struct DiscrepancyOut {
    pub base_cone: Vec<Vector>,
    pub m_sigma: Vec<Rational>,
    pub entries: Vec<DiscrepancyEntry>,
}

impl From<&DiscrepancyReport> for DiscrepancyOut {
    fn from(d: &DiscrepancyReport) -> Self {
        DiscrepancyOut {
            base_cone: vectors(d.base_cone.rays()),
            m_sigma: covector(&d.m_sigma),
            entries: d.entries.iter().map(|(v, a)| DiscrepancyEntry { ray: vector(v), discrepancy: Rational::from(a) }).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BlowupOut {
    pub cell: Vec<Vector>,
    pub interior_hull: Vec<Vector>,
    pub central_cell: Option<Vec<Vector>>,
    pub central_matches: bool,
    pub order_domains_exact: bool,
    pub pieces: Vec<Vec<Vector>>,
}

impl From<&BlowupRecord> for BlowupOut {
    fn from(b: &BlowupRecord) -> Self {
        BlowupOut {
            cell: polygon(&b.cell),
            interior_hull: polygon(&b.interior_hull),
            central_cell: b.central_cell.as_ref().map(polygon),
            central_matches: b.central_matches,
            order_domains_exact: b.order_domains_exact,
            pieces: b.pieces.iter().map(polygon).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StepOut {
    pub phase: &'static str,
    pub piece: Option<usize>,
    pub centers: Vec<Vec<Vector>>,
    pub new_rays: Vec<Vector>,
    pub discrepancy: Option<DiscrepancyOut>,
    pub census: Vec<CensusOut>,
    pub blowups: Vec<BlowupOut>,
}

impl From<&TraceStep> for StepOut {
    fn from(s: &TraceStep) -> Self {
        StepOut {
            phase: s.phase.name(),
            piece: s.piece,
            centers: s.centers.iter().map(polygon).collect(),
            new_rays: vectors(&s.new_rays),
            discrepancy: s.discrepancy.as_ref().map(DiscrepancyOut::from),
            census: s.census.iter().map(CensusOut::from).collect(),
            blowups: s.blowups.iter().map(BlowupOut::from).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CoverOut {
    pub basis: Vec<Vector>,
    pub index: Int,
}

impl From<&LatticeChange> for CoverOut {
    fn from(c: &LatticeChange) -> Self {
        CoverOut { basis: vectors(&c.basis.row_vectors()), index: Int::from(&c.index) }
    }
}

#[derive(Debug, Serialize)]
pub struct PieceOut {
    pub cone: Vec<Vector>,
    pub cover: Option<CoverOut>,
    pub polygon: Vec<Vector>,
    pub map: Vec<Vector>,
    /// Cells of the chosen completion, in polygon coordinates.
    pub cells: Vec<Vec<Vector>>,
    pub certified: bool,
}

impl From<&Piece> for PieceOut {
    fn from(p: &Piece) -> Self {
        PieceOut {
            cone: vectors(p.cone.rays()),
            cover: p.cover.as_ref().map(CoverOut::from),
            polygon: polygon(&p.polygon),
            map: vectors(&p.map.row_vectors()),
            cells: p.complex.cells().iter().map(polygon).collect(),
            certified: p.certificate.is_some(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CompletionOut {
    pub piece: usize,
    pub index: usize,
    /// Chosen box diagonals, as pairs of ambient rays.
    pub diagonals: Vec<[Vector; 2]>,
    pub certified: bool,
    /// Ambient lattice; for covered pieces, the image of the fan in `N₀`.
    pub fan: FanOut,
}

impl CompletionOut {
    pub fn new(piece_index: usize, index: usize, piece: &Piece, c: &Completion) -> toresolve_core::Result<Self> {
        let up = |p: &LatticeVector| piece.to_ambient(p);
        let diagonals =
            c.diagonals.iter().map(|(a, b)| Ok([vector(&up(a)?), vector(&up(b)?)])).collect::<toresolve_core::Result<_>>()?;
        let cones: Vec<Vec<LatticeVector>> = c
            .fan
            .maximal_cones()
            .iter()
            .map(|k| k.rays().iter().map(|v| up(&v.truncated())).collect())
            .collect::<toresolve_core::Result<_>>()?;
        Ok(CompletionOut { piece: piece_index, index, diagonals, certified: c.certificate.is_some(), fan: FanOut::from_cones(&cones) })
    }
}

#[derive(Debug, Serialize)]
pub struct Resolution3d {
    pub rays: Vec<Vector>,
    pub canonical: FanOut,
    pub pieces: Vec<PieceOut>,
    pub fan: FanOut,
    pub trace: Vec<StepOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completions: Option<Vec<CompletionOut>>,
}
