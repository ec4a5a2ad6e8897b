//! Standard forms, the `GL(2, Z)` generators, and the 3D obstruction vectors.

use crate::pgs::PrimGenSet;
use crate::polytope::{primitive_points, Polytope};
use crate::zlattice::{lv, LatticeVector, UnimodularMap};

/// `conv(e1, e2, -e1-e2)`.
pub fn nabla_minus_inf() -> Polytope {
    Polytope::hull(&[lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])]).unwrap()
}

/// `conv(e1, e2, -e1, -m e1 - e2)`.
pub fn nabla(m: i64) -> Polytope {
    Polytope::hull(&[lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, 0]), lv(&[-m, -1])]).unwrap()
}

/// The reflexive hexagon `conv(±e1, ±e2, ±(e1+e2))`.
pub fn hexagon() -> Polytope {
    Polytope::hull(&[lv(&[1, 0]), lv(&[-1, 0]), lv(&[0, 1]), lv(&[0, -1]), lv(&[1, 1]), lv(&[-1, -1])])
        .unwrap()
}

pub fn pgs_of(p: &Polytope) -> PrimGenSet {
    primitive_points(p).expect("fixture polytopes are Fano")
}

pub fn plus_minus_e1() -> Vec<LatticeVector> {
    vec![lv(&[-1, 0]), lv(&[1, 0])]
}

pub fn plus_minus_e2() -> Vec<LatticeVector> {
    vec![lv(&[0, -1]), lv(&[0, 1])]
}

/// `[[0, -1], [1, 0]]`
pub fn gen_s() -> UnimodularMap {
    UnimodularMap::new(vec![vec![0, -1], vec![1, 0]]).unwrap()
}

/// `[[1, 1], [0, 1]]`
pub fn gen_t() -> UnimodularMap {
    UnimodularMap::new(vec![vec![1, 1], vec![0, 1]]).unwrap()
}

/// `[[-1, 0], [0, 1]]`
pub fn gen_u() -> UnimodularMap {
    UnimodularMap::new(vec![vec![-1, 0], vec![0, 1]]).unwrap()
}

/// The seven vectors `v1..v7` of the 3D obstruction to polytope-only links.
pub fn obstruction_vectors() -> [LatticeVector; 7] {
    [
        lv(&[1, 0, 0]),
        lv(&[0, 1, 0]),
        lv(&[-1, -1, 0]),
        lv(&[-1, 0, 0]),
        lv(&[0, 0, 1]),
        lv(&[-1, 0, -1]),
        lv(&[-2, 0, -1]),
    ]
}

/// `{v_i : i in indices}` for 1-based indices.
pub fn obstruction_set(indices: &[usize]) -> Vec<LatticeVector> {
    let v = obstruction_vectors();
    let mut out: Vec<LatticeVector> = indices.iter().map(|&i| v[i - 1].clone()).collect();
    out.sort();
    out
}
