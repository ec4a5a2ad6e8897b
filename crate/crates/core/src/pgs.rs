//! Primitive generating sets, reductions and fiber structures.
//!
//! A primitive generating set (PGS) is a finite set of primitive vectors whose
//! nonnegative span is the whole space. Sets are kept sorted so equality is
//! plain `Vec` equality.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{primitive_points, Polytope};
use crate::zlattice::{
    coords_in_basis, quotient_projection, rank, saturate_span, LatticeVector,
    QuotientProjection, UnimodularMap,
};

/// A primitive generating set, stored sorted.
///
/// JSON: `{"as": "pgs", "dim": d, "points": [[...], ...]}`. Reading validates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PgsJson", into = "PgsJson")]
pub struct PrimGenSet {
    dim: usize,
    points: Vec<LatticeVector>,
}

#[derive(Serialize, Deserialize)]
enum PgsTag {
    #[serde(rename = "pgs")]
    Pgs,
}

#[derive(Serialize, Deserialize)]
struct PgsJson {
    #[serde(rename = "as")]
    tag: PgsTag,
    dim: usize,
    points: Vec<LatticeVector>,
}

impl TryFrom<PgsJson> for PrimGenSet {
    type Error = Error;
    fn try_from(raw: PgsJson) -> Result<PrimGenSet> {
        PrimGenSet::new(raw.dim, raw.points)
    }
}

impl From<PrimGenSet> for PgsJson {
    fn from(a: PrimGenSet) -> PgsJson {
        PgsJson { tag: PgsTag::Pgs, dim: a.dim, points: a.points }
    }
}

/// Outcome of [`is_pgs`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "point", rename_all = "snake_case")]
pub enum PgsCheck {
    Valid,
    NonPrimitive(LatticeVector),
    Duplicate(LatticeVector),
    WrongDimension(LatticeVector),
    /// The points do not positively span the space.
    ConeNotFull,
}

impl PgsCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, PgsCheck::Valid)
    }

    pub fn reason(&self) -> String {
        match self {
            PgsCheck::Valid => "valid".into(),
            PgsCheck::NonPrimitive(v) => format!("non-primitive member {v:?}"),
            PgsCheck::Duplicate(v) => format!("duplicate member {v:?}"),
            PgsCheck::WrongDimension(v) => format!("member {v:?} has the wrong dimension"),
            PgsCheck::ConeNotFull => "cone not full".into(),
        }
    }
}

/// Normal of the hyperplane spanned by `d - 1` vectors in `Z^d` (`d <= 3`).
fn hyperplane_normal(d: usize, vs: &[&LatticeVector]) -> LatticeVector {
    match d {
        1 => LatticeVector::from_slice(&[1]),
        2 => LatticeVector::from_slice(&[-vs[0][1], vs[0][0]]),
        3 => {
            let (a, b) = (vs[0], vs[1]);
            LatticeVector::from_slice(&[
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ])
        }
        _ => unreachable!("dimension checked by caller"),
    }
}

fn for_each_subset<F: FnMut(&[usize]) -> bool>(n: usize, k: usize, f: &mut F) -> bool {
    fn rec<F: FnMut(&[usize]) -> bool>(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut F) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if !rec(i + 1, n, k, cur, f) {
                return false;
            }
            cur.pop();
        }
        true
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f)
}

/// True iff the vectors positively span `R^d`.
///
/// A nonzero functional nonnegative on every point exists iff one exists on
/// an extreme ray of the dual cone, and those rays are normals of hyperplanes
/// spanned by `d - 1` independent points.
pub fn positively_spans(d: usize, points: &[LatticeVector]) -> bool {
    if d == 0 {
        return true;
    }
    assert!(d <= 3, "positive spanning test supports d <= 3");
    if rank(points).expect("small entries") < d {
        return false;
    }
    let mut spans = true;
    for_each_subset(points.len(), d - 1, &mut |idx| {
        let vs: Vec<&LatticeVector> = idx.iter().map(|&i| &points[i]).collect();
        let u = hyperplane_normal(d, &vs);
        if u.is_zero() {
            return true;
        }
        let (mut pos, mut neg) = (false, false);
        for p in points {
            let s = u.dot(p);
            pos |= s > 0;
            neg |= s < 0;
        }
        if !(pos && neg) {
            spans = false;
        }
        spans
    });
    spans
}

/// Checks the PGS conditions for `points` in `Z^dim`.
pub fn is_pgs(dim: usize, points: &[LatticeVector]) -> PgsCheck {
    let mut seen = BTreeSet::new();
    for p in points {
        if p.dim() != dim {
            return PgsCheck::WrongDimension(p.clone());
        }
        if !p.is_primitive() {
            return PgsCheck::NonPrimitive(p.clone());
        }
        if !seen.insert(p) {
            return PgsCheck::Duplicate(p.clone());
        }
    }
    if positively_spans(dim, points) {
        PgsCheck::Valid
    } else {
        PgsCheck::ConeNotFull
    }
}

impl PrimGenSet {
    pub fn new(dim: usize, mut points: Vec<LatticeVector>) -> Result<PrimGenSet> {
        let check = is_pgs(dim, &points);
        if !check.is_valid() {
            return Err(Error::NotPgs(check.reason()));
        }
        points.sort();
        Ok(PrimGenSet { dim, points })
    }

    /// The empty PGS of the zero lattice.
    pub fn empty() -> PrimGenSet {
        PrimGenSet { dim: 0, points: vec![] }
    }

    pub(crate) fn new_unchecked(dim: usize, mut points: Vec<LatticeVector>) -> PrimGenSet {
        points.sort();
        points.dedup();
        PrimGenSet { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[LatticeVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.points.binary_search(v).is_ok()
    }

    pub fn without(&self, v: &LatticeVector) -> Vec<LatticeVector> {
        self.points.iter().filter(|p| *p != v).cloned().collect()
    }

    pub fn transform(&self, g: &UnimodularMap) -> PrimGenSet {
        PrimGenSet::new_unchecked(self.dim, self.points.iter().map(|p| g.apply(p)).collect())
    }

    pub fn hull(&self) -> Result<Polytope> {
        Polytope::hull(&self.points)
    }

    /// True iff the set is exactly the primitive points of its own hull.
    pub fn is_hull_saturated(&self) -> bool {
        match self.hull() {
            Ok(p) => primitive_points(&p).is_ok_and(|a| a == *self),
            Err(_) => false,
        }
    }
}

/// The point set re-expressed in coordinates of the saturated lattice it spans.
#[derive(Debug, Clone)]
pub struct SpanCoords {
    pub basis: Vec<LatticeVector>,
    pub coords: Vec<LatticeVector>,
}

pub fn span_coords(points: &[LatticeVector]) -> Result<SpanCoords> {
    let basis = saturate_span(points)?;
    let coords = points
        .iter()
        .map(|p| coords_in_basis(&basis, p).ok_or(Error::NotSaturated))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpanCoords { basis, coords })
}

/// PGS check of a set inside its own linear span.
pub fn is_pgs_of_span(points: &[LatticeVector]) -> PgsCheck {
    if points.is_empty() {
        return PgsCheck::ConeNotFull;
    }
    match span_coords(points) {
        Ok(sc) => is_pgs(sc.basis.len(), &sc.coords),
        Err(_) => PgsCheck::ConeNotFull,
    }
}

/// All reductions `A ⊃· A \ {v}`, in the order of the removed point.
pub fn reductions(a: &PrimGenSet) -> Vec<(LatticeVector, PrimGenSet)> {
    a.points
        .iter()
        .filter_map(|v| {
            let rest = a.without(v);
            is_pgs(a.dim, &rest)
                .is_valid()
                .then(|| (v.clone(), PrimGenSet::new_unchecked(a.dim, rest)))
        })
        .collect()
}

/// `A ⊃· A'` as sets in a common lattice.
pub fn is_reduction(big: &[LatticeVector], small: &[LatticeVector], dim: usize) -> bool {
    big.len() == small.len() + 1
        && small.iter().all(|p| big.contains(p))
        && is_pgs(dim, big).is_valid()
        && is_pgs(dim, small).is_valid()
}

/// Why a polytope-version reduction was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionRejection {
    NotFano,
    NotAVertex,
    /// The remaining primitive points do not form a PGS.
    NotPgs(String),
    /// The removed vertex still lies in the hull of the remaining points.
    VertexInHull,
}

/// `∇ ⊃· ∇'`: drop vertex `v`, re-hull the remaining primitive points.
pub fn polytope_reduction(p: &Polytope, v: &LatticeVector) -> std::result::Result<Polytope, ReductionRejection> {
    let a = primitive_points(p).map_err(|_| ReductionRejection::NotFano)?;
    if !p.is_vertex(v) {
        return Err(ReductionRejection::NotAVertex);
    }
    let rest = a.without(v);
    let check = is_pgs(p.dim(), &rest);
    if !check.is_valid() {
        return Err(ReductionRejection::NotPgs(check.reason()));
    }
    let q = Polytope::hull(&rest).map_err(|e| ReductionRejection::NotPgs(e.to_string()))?;
    if q.contains(v) {
        return Err(ReductionRejection::VertexInHull);
    }
    debug_assert_eq!(primitive_points(&q).unwrap().points(), &rest[..]);
    Ok(q)
}

/// A fiber structure `A_f ⊂ A` with its quotient data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiberStructure {
    pub parent: PrimGenSet,
    /// `A_f = A ∩ L`, in ambient coordinates.
    pub fiber: Vec<LatticeVector>,
    /// Basis of `N_f = N ∩ L` (row HNF).
    pub span_basis: Vec<LatticeVector>,
    pub projection: QuotientProjection,
    /// The base `{π̄(v) : v ∈ A \ A_f}` in coordinates of `N_b`.
    pub base: PrimGenSet,
    pub irreducible: bool,
    pub mori: bool,
}

impl FiberStructure {
    pub fn fiber_dim(&self) -> usize {
        self.span_basis.len()
    }

    pub fn is_whole(&self) -> bool {
        self.fiber.len() == self.parent.len()
    }
}

/// Builds the fiber structure with fiber `fiber` on `parent`, or explains why
/// `fiber ⊂ parent` is not one.
pub fn fiber_structure(parent: &PrimGenSet, fiber: &[LatticeVector]) -> std::result::Result<FiberStructure, String> {
    if fiber.is_empty() {
        return Err("empty fiber".into());
    }
    if let Some(p) = fiber.iter().find(|p| !parent.contains(p)) {
        return Err(format!("fiber point {p:?} not in the set"));
    }
    let d = parent.dim();
    let span_basis = saturate_span(fiber).map_err(|e| e.to_string())?;
    let mut fiber: Vec<LatticeVector> = fiber.to_vec();
    fiber.sort();
    fiber.dedup();
    let in_span: Vec<LatticeVector> = parent
        .points()
        .iter()
        .filter(|p| coords_in_basis(&span_basis, p).is_some())
        .cloned()
        .collect();
    if in_span != fiber {
        return Err("fiber is not the full intersection with its span".into());
    }
    let check = is_pgs_of_span(&fiber);
    if !check.is_valid() {
        return Err(format!("fiber is not a PGS of its span: {}", check.reason()));
    }
    let projection = quotient_projection(&span_basis, d).map_err(|e| e.to_string())?;
    let base_points = parent
        .points()
        .iter()
        .filter(|p| !fiber.contains(p))
        .map(|p| projection.pibar(p))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let base = PrimGenSet::new_unchecked(projection.target_dim(), base_points);
    let base_check = is_pgs(base.dim(), base.points());
    if !base_check.is_valid() {
        return Err(format!("base is not a PGS: {}", base_check.reason()));
    }
    let irreducible = parent.len() == fiber.len() + base.len();
    let mori = irreducible && fiber.len() == span_basis.len() + 1;
    Ok(FiberStructure { parent: parent.clone(), fiber, span_basis, projection, base, irreducible, mori })
}

/// All fiber structures on `A`, one per subspace `L`, sorted by
/// `(dim L, fiber)`. The whole set over the zero lattice is included.
pub fn fiber_structures(a: &PrimGenSet) -> Vec<FiberStructure> {
    let d = a.dim();
    let pts = a.points();
    let mut spans: BTreeSet<Vec<LatticeVector>> = BTreeSet::new();
    for k in 1..d {
        for_each_subset(pts.len(), k, &mut |idx| {
            let vs: Vec<LatticeVector> = idx.iter().map(|&i| pts[i].clone()).collect();
            if rank(&vs).expect("small entries") == k {
                spans.insert(saturate_span(&vs).expect("nonzero span"));
            }
            true
        });
    }
    let mut out: Vec<FiberStructure> = spans
        .into_iter()
        .filter_map(|basis| {
            let fiber: Vec<LatticeVector> =
                pts.iter().filter(|p| coords_in_basis(&basis, p).is_some()).cloned().collect();
            fiber_structure(a, &fiber).ok()
        })
        .collect();
    if let Ok(whole) = fiber_structure(a, pts) {
        out.push(whole);
    }
    out.sort_by(|x, y| (x.fiber_dim(), &x.fiber).cmp(&(y.fiber_dim(), &y.fiber)));
    out
}

pub fn mori_fiber_structures(a: &PrimGenSet) -> Vec<FiberStructure> {
    fiber_structures(a).into_iter().filter(|f| f.mori).collect()
}

/// Mori fiber structures of a Fano polytope; each fiber hull is a terminal
/// simplex inside its span.
pub fn polytope_mori_fiber_structures(p: &Polytope) -> Result<Vec<FiberStructure>> {
    let a = primitive_points(p)?;
    let out = mori_fiber_structures(&a);
    debug_assert!(out.iter().all(|f| fiber_is_terminal_simplex(&f.fiber)));
    Ok(out)
}

/// The fiber's hull, inside its span, is a simplex whose lattice points are
/// its vertices and the origin.
pub fn fiber_is_terminal_simplex(fiber: &[LatticeVector]) -> bool {
    let Ok(sc) = span_coords(fiber) else { return false };
    let k = sc.basis.len();
    if fiber.len() != k + 1 {
        return false;
    }
    let Ok(h) = Polytope::hull(&sc.coords) else { return false };
    h.vertices().len() == k + 1 && h.lattice_points().len() == k + 2
}

/// True iff `fiber` equals the primitive points of its hull taken inside its span.
pub fn fiber_is_hull_saturated(fiber: &[LatticeVector]) -> bool {
    let Ok(sc) = span_coords(fiber) else { return false };
    let k = sc.basis.len();
    match PrimGenSet::new(k, sc.coords.clone()) {
        Ok(a) if k >= 1 => a.is_hull_saturated(),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::zlattice::lv;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn is_pgs_examples() {
        assert_eq!(is_pgs(2, &[lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])]), PgsCheck::Valid);
        assert_eq!(is_pgs(2, &[lv(&[1, 0]), lv(&[0, 1])]), PgsCheck::ConeNotFull);
        assert_eq!(
            is_pgs(2, &[lv(&[2, 0]), lv(&[0, 1]), lv(&[-1, -1])]),
            PgsCheck::NonPrimitive(lv(&[2, 0]))
        );
        assert_eq!(is_pgs(0, &[]), PgsCheck::Valid);
        assert_eq!(is_pgs(1, &[lv(&[1]), lv(&[-1])]), PgsCheck::Valid);
        assert_eq!(is_pgs(1, &[lv(&[1])]), PgsCheck::ConeNotFull);
    }

    #[test]
    fn reduction_examples() {
        let r = reductions(&pgs_of(&nabla(1)));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0, lv(&[-1, 0]));
        assert_eq!(r[0].1, pgs_of(&nabla_minus_inf()));
        assert!(reductions(&pgs_of(&nabla_minus_inf())).is_empty());

        let a = PrimGenSet::new(3, obstruction_set(&[1, 2, 3, 5, 6, 7])).unwrap();
        let r = reductions(&a);
        let (_, after) = r.iter().find(|(v, _)| *v == obstruction_vectors()[6]).unwrap();
        let n12356 = Polytope::hull(&obstruction_set(&[1, 2, 3, 5, 6])).unwrap();
        assert_eq!(*after, pgs_of(&n12356));
    }

    #[test]
    fn polytope_reduction_examples() {
        assert_eq!(polytope_reduction(&nabla(1), &lv(&[-1, 0])).unwrap(), nabla_minus_inf());
        assert!(matches!(
            polytope_reduction(&nabla(0), &lv(&[0, -1])),
            Err(ReductionRejection::NotPgs(_))
        ));
        let pent = polytope_reduction(&hexagon(), &lv(&[1, 1])).unwrap();
        assert_eq!(pent.vertices().len(), 5);
        assert_eq!(polytope_reduction(&nabla(1), &lv(&[0, 0])), Err(ReductionRejection::NotAVertex));
    }

    #[test]
    fn fiber_structure_examples() {
        let fs = fiber_structures(&pgs_of(&nabla(1)));
        let e1 = fs.iter().find(|f| f.fiber == plus_minus_e1()).unwrap();
        assert_eq!(e1.base.points(), &[lv(&[-1]), lv(&[1])]);
        assert!(e1.irreducible && e1.mori);

        let a = PrimGenSet::new(3, obstruction_set(&[1, 2, 3, 4, 5, 7])).unwrap();
        let f = fiber_structure(&a, &obstruction_set(&[1, 4])).unwrap();
        assert_eq!(f.base.points(), &[lv(&[-1, 0]), lv(&[0, -1]), lv(&[0, 1]), lv(&[1, 0])]);
        assert!(f.irreducible && f.mori);

        let a = PrimGenSet::new(3, obstruction_set(&[1, 2, 3, 5, 6, 7])).unwrap();
        let f = fiber_structure(&a, &obstruction_set(&[1, 2, 3])).unwrap();
        assert_eq!(f.base.points(), &[lv(&[-1]), lv(&[1])]);
        assert!(!f.irreducible && !f.mori);
    }

    #[test]
    fn mori_fiber_structure_counts() {
        let m2 = mori_fiber_structures(&pgs_of(&nabla(2)));
        assert_eq!(m2.len(), 1);
        assert_eq!(m2[0].fiber, plus_minus_e1());
        let m0 = mori_fiber_structures(&pgs_of(&nabla(0)));
        assert_eq!(m0.iter().map(|f| f.fiber.clone()).collect::<Vec<_>>(), vec![plus_minus_e1(), plus_minus_e2()]);
        let mi = mori_fiber_structures(&pgs_of(&nabla_minus_inf()));
        assert_eq!(mi.len(), 1);
        assert!(mi[0].is_whole() && mi[0].base == PrimGenSet::empty());
        for p in [nabla(0), nabla(1), nabla(2), nabla_minus_inf()] {
            for f in polytope_mori_fiber_structures(&p).unwrap() {
                assert!(fiber_is_terminal_simplex(&f.fiber));
            }
        }
    }

    #[test]
    fn fiber_structures_are_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [nabla(0), nabla(1), nabla(2), hexagon()] {
            let a = pgs_of(&p);
            let mut base: Vec<Vec<LatticeVector>> = fiber_structures(&a).into_iter().map(|f| f.fiber).collect();
            for _ in 0..20 {
                let g = UnimodularMap::random(2, &mut rng, 8);
                let mut moved: Vec<Vec<LatticeVector>> = fiber_structures(&a.transform(&g))
                    .into_iter()
                    .map(|f| {
                        let mut pts: Vec<LatticeVector> = f.fiber.iter().map(|p| g.inverse().apply(p)).collect();
                        pts.sort();
                        pts
                    })
                    .collect();
                moved.sort();
                base.sort();
                assert_eq!(moved, base);
            }
        }
    }
}
