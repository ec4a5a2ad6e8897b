//! Lattice polytopes: hulls, lattice points, duals, classification predicates
//! and a unimodular normal form.

mod dual;
mod hull;
mod normal_form;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use dual::{mavlyutov_dual, polar_dual, MavlyutovDual, Rational, RationalPolytope};
pub use hull::affine_dim;
pub(crate) use hull::cross2;
pub use normal_form::normal_form;

use crate::error::{Error, Result};
use crate::pgs::PrimGenSet;
use crate::zlattice::{LatticeVector, UnimodularMap};

/// The half-space `normal · x >= -level`; the facet lies on equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: LatticeVector,
    pub level: i64,
}

impl Facet {
    /// Signed slack of `p`; zero on the facet, positive inside.
    pub fn slack(&self, p: &LatticeVector) -> i64 {
        self.normal.dot(p) + self.level
    }
}

/// A full-dimensional lattice polytope in canonical vertex order.
///
/// In the plane vertices run counterclockwise from the lexicographic minimum;
/// otherwise they are sorted lexicographically. Facets are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<LatticeVector>,
    facets: Vec<Facet>,
}

impl Polytope {
    /// Convex hull of any finite generating set.
    pub fn hull(points: &[LatticeVector]) -> Result<Polytope> {
        hull::hull(points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn is_vertex(&self, p: &LatticeVector) -> bool {
        self.vertices.contains(p)
    }

    pub fn contains(&self, p: &LatticeVector) -> bool {
        self.facets.iter().all(|f| f.slack(p) >= 0)
    }

    pub fn strictly_contains(&self, p: &LatticeVector) -> bool {
        self.facets.iter().all(|f| f.slack(p) > 0)
    }

    pub fn origin_interior(&self) -> bool {
        self.facets.iter().all(|f| f.level > 0)
    }

    /// Fano: origin strictly inside and every vertex primitive.
    pub fn is_fano(&self) -> bool {
        self.origin_interior() && self.vertices.iter().all(|v| v.is_primitive())
    }

    pub fn bounding_box(&self) -> (LatticeVector, LatticeVector) {
        let d = self.dim;
        let lo = (0..d).map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap()).collect::<Vec<_>>();
        let hi = (0..d).map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap()).collect::<Vec<_>>();
        (lo.into(), hi.into())
    }

    /// All lattice points, sorted lexicographically.
    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        self.scan_box(|p| self.contains(p))
    }

    pub fn interior_lattice_points(&self) -> Vec<LatticeVector> {
        self.scan_box(|p| self.strictly_contains(p))
    }

    fn scan_box(&self, keep: impl Fn(&LatticeVector) -> bool) -> Vec<LatticeVector> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        let mut cur = lo.to_vec();
        loop {
            let p = LatticeVector::from_slice(&cur);
            if keep(&p) {
                out.push(p);
            }
            // odometer increment, last coordinate fastest
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    for (j, c) in cur.iter_mut().enumerate().skip(i + 1) {
                        *c = lo[j];
                    }
                    break;
                }
            }
        }
    }

    /// Image under a unimodular map, re-canonicalized.
    pub fn transform(&self, g: &UnimodularMap) -> Polytope {
        let image: Vec<LatticeVector> = self.vertices.iter().map(|v| g.apply(v)).collect();
        Polytope::hull(&image).expect("unimodular image stays full-dimensional")
    }

    pub fn classify(&self) -> ClassFlags {
        classify(self)
    }

    pub fn satisfies(&self, class: PolytopeClass) -> bool {
        match class {
            PolytopeClass::Any => true,
            PolytopeClass::Fano => self.is_fano(),
            PolytopeClass::Canonical => self.origin_interior() && is_canonical(self),
            PolytopeClass::Terminal => self.origin_interior() && is_terminal(self),
            PolytopeClass::Reflexive => self.origin_interior() && self.facets.iter().all(|f| f.level == 1),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    points: Vec<LatticeVector>,
}

impl Serialize for Polytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeJson { dim: self.dim, points: self.vertices.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolytopeJson::deserialize(d)?;
        if raw.points.iter().any(|p| p.dim() != raw.dim) {
            return Err(serde::de::Error::custom("point dimension does not match \"dim\""));
        }
        Polytope::hull(&raw.points).map_err(serde::de::Error::custom)
    }
}

/// Class constraints used throughout the connectivity engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolytopeClass {
    Any,
    Fano,
    Canonical,
    Terminal,
    Reflexive,
}

impl std::str::FromStr for PolytopeClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "any" | "none" => PolytopeClass::Any,
            "fano" => PolytopeClass::Fano,
            "canonical" => PolytopeClass::Canonical,
            "terminal" => PolytopeClass::Terminal,
            "reflexive" => PolytopeClass::Reflexive,
            other => return Err(Error::InvalidInput(format!("unknown class {other:?}"))),
        })
    }
}

impl std::fmt::Display for PolytopeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PolytopeClass::Any => "any",
            PolytopeClass::Fano => "fano",
            PolytopeClass::Canonical => "canonical",
            PolytopeClass::Terminal => "terminal",
            PolytopeClass::Reflexive => "reflexive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassFlags {
    pub fano: bool,
    pub canonical: bool,
    pub terminal: bool,
    pub reflexive: bool,
    pub pseudoreflexive: bool,
    pub almost_pseudoreflexive: bool,
}

impl ClassFlags {
    /// terminal ⇒ canonical ⇐ almost pseudoreflexive ⇐ pseudoreflexive ⇐ reflexive.
    pub fn implication_chain_holds(&self) -> bool {
        (!self.terminal || self.canonical)
            && (!self.reflexive || self.pseudoreflexive)
            && (!self.pseudoreflexive || self.almost_pseudoreflexive)
            && (!self.almost_pseudoreflexive || self.canonical)
            && (!self.canonical || self.fano)
    }
}

fn is_canonical(p: &Polytope) -> bool {
    let interior = p.interior_lattice_points();
    interior.len() == 1 && interior[0].is_zero()
}

fn is_terminal(p: &Polytope) -> bool {
    let pts = p.lattice_points();
    pts.len() == p.vertices().len() + 1 && pts.iter().all(|q| q.is_zero() || p.is_vertex(q))
}

/// Evaluates the five class predicates plus the Fano flag.
///
/// A polytope without the origin in its interior gets all flags false.
pub fn classify(p: &Polytope) -> ClassFlags {
    if !p.origin_interior() {
        return ClassFlags::default();
    }
    let canonical = is_canonical(p);
    let terminal = canonical && is_terminal(p);
    let reflexive = p.facets().iter().all(|f| f.level == 1);

    let mav = mavlyutov_dual(p).expect("origin is interior");
    let (almost, pseudo) = match mav {
        MavlyutovDual::Full(q) if q.origin_interior() => {
            let back = mavlyutov_dual(&q).expect("origin is interior");
            (true, matches!(back, MavlyutovDual::Full(ref r) if r == p))
        }
        _ => (false, false),
    };
    ClassFlags {
        fano: p.is_fano(),
        canonical,
        terminal,
        reflexive,
        pseudoreflexive: pseudo,
        almost_pseudoreflexive: almost,
    }
}

/// All primitive lattice points of a Fano polytope (origin excluded).
pub fn primitive_points(p: &Polytope) -> Result<PrimGenSet> {
    if !p.is_fano() {
        return Err(Error::NotFano);
    }
    let pts: Vec<LatticeVector> = p.lattice_points().into_iter().filter(|q| q.is_primitive()).collect();
    PrimGenSet::new(p.dim(), pts)
}
