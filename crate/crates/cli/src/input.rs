//! The job input document: `{"lattice_rank": r, "cones": [{"generators": [[...], ...]}, ...]}`.

use serde::{Deserialize, Serialize};

use toresolve_core::{make_cone, Cone, LatticeVector};

use crate::json::Int;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeInput {
    pub generators: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    pub lattice_rank: usize,
    pub cones: Vec<ConeInput>,
}

impl ConeInput {
    pub fn vectors(&self) -> Vec<LatticeVector> {
        self.generators.iter().map(|g| LatticeVector::new(g.iter().map(|x| x.0.clone()).collect())).collect()
    }

    /// `pos{...}` of the generators as written.
    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.vectors().iter().map(|v| v.to_string()).collect();
        format!("pos{{{}}}", gens.join(", "))
    }

    pub fn to_cone(&self) -> toresolve_core::Result<Cone> {
        make_cone(&self.vectors())
    }
}

/// Parses and checks that every generator has `lattice_rank` coordinates.
pub fn parse(text: &str) -> Result<InputDoc, String> {
    let doc: InputDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if doc.lattice_rank == 0 {
        return Err("lattice_rank must be positive".into());
    }
    for (i, c) in doc.cones.iter().enumerate() {
        if let Some(g) = c.generators.iter().find(|g| g.len() != doc.lattice_rank) {
            return Err(format!("cone #{i}: generator with {} coordinates in a lattice of rank {}", g.len(), doc.lattice_rank));
        }
    }
    Ok(doc)
}

/// Compact JSON with fields in declaration order and a final newline.
pub fn to_canonical(doc: &InputDoc) -> String {
    let mut s = serde_json::to_string(doc).expect("input documents serialize");
    s.push('\n');
    s
}
