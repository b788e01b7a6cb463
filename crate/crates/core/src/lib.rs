//! Exact lattice and cone algorithms for toric singularities: Hilbert bases,
//! singularity classification, and resolutions of 2- and 3-dimensional
//! affine toric varieties.

pub mod classify;
pub mod cone;
pub mod divisors;
pub mod error;
pub mod fan;
pub mod hilbert;
pub mod lattice;
pub mod linalg;
mod lp;
pub mod polytope;
pub mod resolve2d;
pub mod resolve3d;

pub use classify::{classify, gorenstein_data, index_one_cover, is_elementary, is_nakajima, lri_general_section, nakajima_witness, GorensteinData, LatticeChange, NakajimaWitness, SingularityReport};
pub use cone::{make_cone, Cone, DualCone};
pub use divisors::{canonical_support, discrepancies, is_cartier, is_strictly_upper_convex, qcartier_index, DiscrepancyReport, SupportFunction};
pub use error::{Error, Result};
pub use fan::{make_fan, star_subdivision, Fan};
pub use hilbert::{embedding_dimension, hilbert_basis, toric_relations, HilbertBasis};
pub use lattice::{Covector, IntMatrix, LatticeVector};
pub use polytope::LatticePolytope;
pub use resolve3d::{canonical_modification, polygon_form, resolve, resolve_with, PolygonComplex, Resolution, ResolutionTrace};
pub use resolve2d::{cf_expansion, minimal_resolution, CFExpansion, ExceptionalCurve, MinimalResolution};
