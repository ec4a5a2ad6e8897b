use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::links::Fibered;
use crate::pgs::{mori_fiber_structures, polytope_reduction};
use crate::polytope::{primitive_points, Polytope, PolytopeClass};
use crate::zlattice::LatticeVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MmpStep {
    pub removed: LatticeVector,
    pub result: Polytope,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MmpResult {
    pub start: Polytope,
    pub steps: Vec<MmpStep>,
    pub mfp: Polytope,
    /// The chosen Mori fiber structure on the primitive points of `mfp`.
    pub fibered: Fibered,
}

/// Reduces `p` until its primitive points carry a Mori fiber structure,
/// removing the lexicographically smallest vertex whose reduction is valid
/// and stays in `class`. The fiber chosen at the end is the
/// lexicographically smallest Mori fiber.
pub fn mmp_reduce(p: &Polytope, class: PolytopeClass) -> Result<MmpResult> {
    if !p.satisfies(class) {
        return Err(Error::NotInClass(class.to_string()));
    }
    let mut cur = p.clone();
    let mut steps = Vec::new();
    loop {
        let a = primitive_points(&cur)?;
        if let Some(f) = mori_fiber_structures(&a).into_iter().map(|f| f.fiber).min() {
            return Ok(MmpResult { start: p.clone(), steps, mfp: cur, fibered: Fibered::new(a, f) });
        }
        let mut verts = cur.vertices().to_vec();
        verts.sort();
        let next = verts.iter().find_map(|v| {
            polytope_reduction(&cur, v)
                .ok()
                .filter(|q| q.satisfies(class))
                .map(|q| (v.clone(), q))
        });
        match next {
            Some((removed, result)) => {
                cur = result.clone();
                steps.push(MmpStep { removed, result });
            }
            None => {
                return Err(Error::OpenProblem(format!(
                    "minimal polytope with {} vertices has no Mori fiber structure",
                    cur.vertices().len()
                )))
            }
        }
    }
}
