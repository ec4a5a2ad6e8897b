//! Exhaustive enumeration of Fano polygons with vertices in a box.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::links::enumerate::box_points;
use crate::pgs::mori_fiber_structures;
use crate::polytope::{cross2, normal_form, primitive_points, Polytope, PolytopeClass};
use crate::zlattice::LatticeVector;

fn det(a: &LatticeVector, b: &LatticeVector) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn angular_key(v: &LatticeVector) -> (bool, LatticeVector) {
    (v[1] < 0 || (v[1] == 0 && v[0] < 0), v.clone())
}

/// Whether the fan triangle `(0, a, b)` with `det(a, b) > 0` is allowed.
fn cone_ok(a: &LatticeVector, b: &LatticeVector, class: PolytopeClass) -> bool {
    let d = det(a, b);
    if d <= 0 {
        return false;
    }
    let edge = b.sub(a);
    let g = edge[0].gcd(&edge[1]);
    match class {
        PolytopeClass::Terminal => d == 1,
        // the triangle has (d - g) / 2 interior points
        PolytopeClass::Canonical | PolytopeClass::Reflexive => d == g,
        PolytopeClass::Any | PolytopeClass::Fano => true,
    }
}

struct Dfs<'a> {
    pts: &'a [LatticeVector],
    class: PolytopeClass,
    chain: Vec<usize>,
    out: Vec<Polytope>,
}

impl Dfs<'_> {
    fn turn_ok(&self, a: usize, b: usize, c: usize) -> bool {
        cross2(&self.pts[a], &self.pts[b], &self.pts[c]) > 0
    }

    fn extend(&mut self) {
        let n = self.chain.len();
        let last = self.chain[n - 1];
        let first = self.chain[0];
        if n >= 3
            && cone_ok(&self.pts[last], &self.pts[first], self.class)
            && self.turn_ok(self.chain[n - 2], last, first)
            && self.turn_ok(last, first, self.chain[1])
        {
            let verts: Vec<LatticeVector> = self.chain.iter().map(|&i| self.pts[i].clone()).collect();
            let p = Polytope::hull(&verts).expect("convex polygon around the origin");
            debug_assert_eq!(p.vertices().len(), n);
            self.out.push(p);
        }
        for next in last + 1..self.pts.len() {
            if !cone_ok(&self.pts[last], &self.pts[next], self.class) {
                continue;
            }
            if n >= 2 && !self.turn_ok(self.chain[n - 2], last, next) {
                continue;
            }
            self.chain.push(next);
            self.extend();
            self.chain.pop();
        }
    }
}

/// Every Fano polygon with vertices in `[-bound, bound]^2` satisfying `class`.
///
/// Vertices are chosen in angular order around the origin; each fan triangle
/// is checked against the class as soon as it closes.
pub fn fano_polygons(bound: i64, class: PolytopeClass) -> Vec<Polytope> {
    let mut pts = box_points(2, bound);
    pts.sort_by(|a, b| {
        let (ha, hb) = (angular_key(a).0, angular_key(b).0);
        ha.cmp(&hb).then_with(|| 0.cmp(&det(a, b)))
    });
    let mut dfs = Dfs { pts: &pts, class, chain: Vec::new(), out: Vec::new() };
    for start in 0..pts.len() {
        dfs.chain.push(start);
        dfs.extend();
        dfs.chain.pop();
    }
    let mut out: Vec<Polytope> = dfs.out.into_iter().filter(|p| p.satisfies(class)).collect();
    out.sort();
    out
}

pub fn has_mori_fiber_structure(p: &Polytope) -> bool {
    primitive_points(p).is_ok_and(|a| !mori_fiber_structures(&a).is_empty())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusClass {
    pub normal_form: Polytope,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub bound: i64,
    pub class: PolytopeClass,
    pub mfp_only: bool,
    /// Concrete polygons found, before identification.
    pub polygons: usize,
    pub classes: Vec<CensusClass>,
}

/// Polygons in the box up to `GL(2, Z)`, with the number of concrete
/// polygons in each orbit.
pub fn enumerate_fano(bound: i64, class: PolytopeClass, mfp_only: bool) -> Census {
    let polys: Vec<Polytope> = fano_polygons(bound, class)
        .into_iter()
        .filter(|p| !mfp_only || has_mori_fiber_structure(p))
        .collect();
    let mut classes: BTreeMap<Polytope, usize> = BTreeMap::new();
    for p in &polys {
        *classes.entry(normal_form(p)).or_default() += 1;
    }
    Census {
        bound,
        class,
        mfp_only,
        polygons: polys.len(),
        classes: classes.into_iter().map(|(normal_form, count)| CensusClass { normal_form, count }).collect(),
    }
}
