//! Polar and Mavlyutov duals.

use std::cmp::Ordering;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{affine_dim, Polytope};
use crate::error::{Error, Result};
use crate::zlattice::{primitivize, LatticeVector};

pub type Rational = Ratio<i64>;

/// A rational half-space `normal · u >= -level` with a primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalFacet {
    pub normal: LatticeVector,
    pub level: Rational,
}

/// A polytope with exact rational vertices, containing the origin in its interior.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPolytope {
    pub dim: usize,
    pub vertices: Vec<Vec<Rational>>,
    pub facets: Vec<RationalFacet>,
}

fn angular_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    let half = |u: &[Rational]| {
        let zero = Rational::from_integer(0);
        u[1] < zero || (u[1] == zero && u[0] < zero)
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a[0] * b[1] - a[1] * b[0];
        Rational::from_integer(0).cmp(&cross)
    })
}

/// Canonical order: counterclockwise from the lexicographic minimum in the
/// plane (the origin is interior, so angles are well defined), lexicographic
/// otherwise.
fn canonical_order(dim: usize, mut vs: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    if dim == 2 {
        vs.sort_by(|a, b| angular_cmp(a, b));
        let start = (0..vs.len()).min_by(|&i, &j| vs[i].cmp(&vs[j])).unwrap_or(0);
        vs.rotate_left(start);
    } else {
        vs.sort();
    }
    vs
}

impl RationalPolytope {
    pub fn from_lattice(p: &Polytope) -> RationalPolytope {
        let vertices = p
            .vertices()
            .iter()
            .map(|v| v.coords().iter().map(|&c| Rational::from_integer(c)).collect())
            .collect();
        let facets = p
            .facets()
            .iter()
            .map(|f| RationalFacet { normal: f.normal.clone(), level: Rational::from_integer(f.level) })
            .collect();
        RationalPolytope { dim: p.dim(), vertices, facets }
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().flatten().all(|c| c.is_integer())
    }

    pub fn to_lattice(&self) -> Option<Polytope> {
        if !self.is_lattice() {
            return None;
        }
        let pts: Vec<LatticeVector> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|c| c.to_integer()).collect::<Vec<_>>().into())
            .collect();
        Polytope::hull(&pts).ok()
    }

    pub fn contains(&self, u: &LatticeVector) -> bool {
        self.facets
            .iter()
            .all(|f| Rational::from_integer(f.normal.dot(u)) + f.level >= Rational::from_integer(0))
    }

    /// Polar dual of a rational polytope with the origin in its interior.
    pub fn polar(&self) -> Result<RationalPolytope> {
        let zero = Rational::from_integer(0);
        if self.facets.iter().any(|f| f.level <= zero) {
            return Err(Error::OriginNotInterior);
        }
        let vertices = self
            .facets
            .iter()
            .map(|f| f.normal.coords().iter().map(|&c| Rational::from_integer(c) / f.level).collect())
            .collect();
        let mut facets = self
            .vertices
            .iter()
            .map(|u| {
                // u = t * w with w primitive integral and t > 0 rational
                let den = u.iter().fold(1i64, |l, c| l.lcm(c.denom()));
                let scaled: LatticeVector =
                    u.iter().map(|c| (c * den).to_integer()).collect::<Vec<_>>().into();
                let (w, k) = primitivize(&scaled)?;
                let t = Rational::new(k, den);
                Ok(RationalFacet { normal: w, level: t.recip() })
            })
            .collect::<Result<Vec<_>>>()?;
        facets.sort();
        Ok(RationalPolytope { dim: self.dim, vertices: canonical_order(self.dim, vertices), facets })
    }

    /// Lattice points inside, sorted lexicographically.
    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        let d = self.dim;
        let lo: Vec<i64> = (0..d)
            .map(|i| self.vertices.iter().map(|v| v[i].floor().to_integer()).min().unwrap())
            .collect();
        let hi: Vec<i64> = (0..d)
            .map(|i| self.vertices.iter().map(|v| v[i].ceil().to_integer()).max().unwrap())
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let p = LatticeVector::from_slice(&cur);
            if self.contains(&p) {
                out.push(p);
            }
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    cur[i + 1..d].copy_from_slice(&lo[i + 1..d]);
                    break;
                }
            }
        }
    }
}

/// `P* = { u : <u, v> >= -1 for all v in P }`.
pub fn polar_dual(p: &Polytope) -> Result<RationalPolytope> {
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    RationalPolytope::from_lattice(p).polar()
}

/// The hull of the lattice points of `P*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MavlyutovDual {
    Full(Polytope),
    /// Not full-dimensional; carries the affine dimension and all lattice points.
    LowerDim { dim: usize, points: Vec<LatticeVector> },
}

impl MavlyutovDual {
    pub fn dim(&self) -> usize {
        match self {
            MavlyutovDual::Full(p) => p.dim(),
            MavlyutovDual::LowerDim { dim, .. } => *dim,
        }
    }
}

pub fn mavlyutov_dual(p: &Polytope) -> Result<MavlyutovDual> {
    let dual = polar_dual(p)?;
    let pts = dual.lattice_points();
    let adim = affine_dim(&pts)?.unwrap_or(0);
    if adim < p.dim() {
        return Ok(MavlyutovDual::LowerDim { dim: adim, points: pts });
    }
    Ok(MavlyutovDual::Full(Polytope::hull(&pts)?))
}
