//! Exact convex hulls in dimensions 1, 2 and 3.

use std::collections::BTreeSet;

use super::{Facet, Polytope};
use crate::error::{Error, Result};
use crate::zlattice::{primitivize, rank, LatticeVector};

/// Affine dimension of a finite point set (`None` for the empty set).
pub fn affine_dim(points: &[LatticeVector]) -> Result<Option<usize>> {
    let Some(base) = points.first() else { return Ok(None) };
    let diffs: Vec<LatticeVector> = points.iter().map(|p| p.sub(base)).collect();
    Ok(Some(rank(&diffs)?))
}

pub(super) fn hull(points: &[LatticeVector]) -> Result<Polytope> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidInput("empty point set".into()));
    };
    let d = first.dim();
    if let Some(bad) = points.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: bad.dim() });
    }
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let pts: Vec<LatticeVector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let adim = affine_dim(&pts)?.unwrap_or(0);
    if adim < d {
        return Err(Error::DegenerateHull { affine_dim: adim, ambient: d });
    }
    let (vertices, facets) = match d {
        1 => hull_1d(&pts),
        2 => hull_2d(&pts)?,
        _ => hull_3d(&pts)?,
    };
    Ok(Polytope { dim: d, vertices, facets })
}

fn hull_1d(pts: &[LatticeVector]) -> (Vec<LatticeVector>, Vec<Facet>) {
    let lo = pts.first().unwrap().clone();
    let hi = pts.last().unwrap().clone();
    let facets = vec![
        Facet { normal: LatticeVector::from_slice(&[-1]), level: hi[0] },
        Facet { normal: LatticeVector::from_slice(&[1]), level: -lo[0] },
    ];
    (vec![lo, hi], facets)
}

pub(crate) fn cross2(o: &LatticeVector, a: &LatticeVector, b: &LatticeVector) -> i128 {
    let (ax, ay) = (i128::from(a[0] - o[0]), i128::from(a[1] - o[1]));
    let (bx, by) = (i128::from(b[0] - o[0]), i128::from(b[1] - o[1]));
    ax * by - ay * bx
}

/// Andrew's monotone chain; `pts` is sorted and deduplicated. The result runs
/// counterclockwise from the lexicographic minimum.
fn hull_2d(pts: &[LatticeVector]) -> Result<(Vec<LatticeVector>, Vec<Facet>)> {
    let mut lower: Vec<LatticeVector> = Vec::new();
    for p in pts {
        while lower.len() >= 2 && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<LatticeVector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let verts = lower;

    let n = verts.len();
    let mut facets = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (&verts[i], &verts[(i + 1) % n]);
        // interior lies to the left of a counterclockwise edge
        let inward = LatticeVector::from_slice(&[a[1] - b[1], b[0] - a[0]]);
        let (normal, _) = primitivize(&inward)?;
        let level = -normal.dot(a);
        facets.push(Facet { normal, level });
    }
    facets.sort();
    Ok((verts, facets))
}

fn cross3(a: &LatticeVector, b: &LatticeVector) -> LatticeVector {
    LatticeVector::from_slice(&[
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

/// Supporting-plane enumeration: every plane through three affinely
/// independent points with all points on one side is a facet plane.
fn hull_3d(pts: &[LatticeVector]) -> Result<(Vec<LatticeVector>, Vec<Facet>)> {
    let n = pts.len();
    let mut facets: BTreeSet<Facet> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let e1 = pts[j].sub(&pts[i]);
            for k in j + 1..n {
                let normal = cross3(&e1, &pts[k].sub(&pts[i]));
                if normal.is_zero() {
                    continue;
                }
                let (normal, _) = primitivize(&normal)?;
                let offset = normal.dot(&pts[i]);
                let (mut pos, mut neg) = (false, false);
                for p in pts {
                    let s = normal.dot(p) - offset;
                    pos |= s > 0;
                    neg |= s < 0;
                    if pos && neg {
                        break;
                    }
                }
                if pos && neg {
                    continue;
                }
                let normal = if neg { -&normal } else { normal };
                let level = -normal.dot(&pts[i]);
                facets.insert(Facet { normal, level });
            }
        }
    }
    let facets: Vec<Facet> = facets.into_iter().collect();
    let mut vertices = Vec::new();
    for p in pts {
        let tight: Vec<LatticeVector> = facets
            .iter()
            .filter(|f| f.normal.dot(p) == -f.level)
            .map(|f| f.normal.clone())
            .collect();
        if tight.len() >= 3 && rank(&tight)? == 3 {
            vertices.push(p.clone());
        }
    }
    Ok((vertices, facets))
}
