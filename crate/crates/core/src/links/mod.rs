//! Elementary links between Mori fiber structures.

pub(crate) mod enumerate;
mod families;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use enumerate::enumerate_links;
pub use families::{conjugate, ell, ell_inf, ell_m, Sign};

use crate::error::Result;
use crate::pgs::{
    fiber_is_hull_saturated, fiber_structure, is_pgs, is_pgs_of_span, span_coords, FiberStructure, PrimGenSet,
};
use crate::polytope::{Polytope, PolytopeClass};
use crate::zlattice::{coords_in_basis, hnf_with_transform, mat_mul, mat_vec, primitivize, saturate_span, LatticeVector, UnimodularMap};

/// A primitive generating set together with a chosen fiber `A_f ⊂ A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fibered {
    pub set: PrimGenSet,
    pub fiber: Vec<LatticeVector>,
}

impl Fibered {
    pub fn new(set: PrimGenSet, mut fiber: Vec<LatticeVector>) -> Fibered {
        fiber.sort();
        fiber.dedup();
        Fibered { set, fiber }
    }

    /// The whole set as its own fiber.
    pub fn whole(set: PrimGenSet) -> Fibered {
        let fiber = set.points().to_vec();
        Fibered { set, fiber }
    }

    pub fn of_polytope(p: &Polytope, fiber: Vec<LatticeVector>) -> Result<Fibered> {
        Ok(Fibered::new(crate::polytope::primitive_points(p)?, fiber))
    }

    pub fn structure(&self) -> std::result::Result<FiberStructure, String> {
        fiber_structure(&self.set, &self.fiber)
    }

    pub fn is_mori(&self) -> bool {
        self.structure().is_ok_and(|f| f.mori)
    }

    pub fn is_whole(&self) -> bool {
        self.fiber.len() == self.set.len()
    }

    pub fn hull(&self) -> Result<Polytope> {
        self.set.hull()
    }

    pub fn transform(&self, g: &UnimodularMap) -> Fibered {
        Fibered::new(self.set.transform(g), self.fiber.iter().map(|p| g.apply(p)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinkKind {
    #[serde(rename = "I_d")]
    ID,
    #[serde(rename = "I_m")]
    IM,
    #[serde(rename = "II_irr")]
    IIIrr,
    #[serde(rename = "II_ni")]
    IINi,
    #[serde(rename = "III_d")]
    IIID,
    #[serde(rename = "III_m")]
    IIIM,
    #[serde(rename = "IV_m")]
    IVM,
    #[serde(rename = "IV_s")]
    IVS,
}

impl LinkKind {
    pub const ALL: [LinkKind; 8] = [
        LinkKind::ID,
        LinkKind::IM,
        LinkKind::IIIrr,
        LinkKind::IINi,
        LinkKind::IIID,
        LinkKind::IIIM,
        LinkKind::IVM,
        LinkKind::IVS,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            LinkKind::ID => "I_d",
            LinkKind::IM => "I_m",
            LinkKind::IIIrr => "II_irr",
            LinkKind::IINi => "II_ni",
            LinkKind::IIID => "III_d",
            LinkKind::IIIM => "III_m",
            LinkKind::IVM => "IV_m",
            LinkKind::IVS => "IV_s",
        }
    }

    pub fn inverse(self) -> LinkKind {
        match self {
            LinkKind::ID => LinkKind::IIID,
            LinkKind::IIID => LinkKind::ID,
            LinkKind::IM => LinkKind::IIIM,
            LinkKind::IIIM => LinkKind::IM,
            other => other,
        }
    }

    pub fn has_middle(self) -> bool {
        !matches!(self, LinkKind::ID | LinkKind::IIID | LinkKind::IVS)
    }
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Set-level links only relate primitive generating sets; polytope-level links
/// additionally require every set to be the primitive points of its hull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkMode {
    Set,
    Polytope,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementaryLink {
    pub kind: LinkKind,
    pub mode: LinkMode,
    pub left: Fibered,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub middle: Option<Fibered>,
    pub right: Fibered,
}

impl ElementaryLink {
    pub fn inverse(&self) -> ElementaryLink {
        ElementaryLink {
            kind: self.kind.inverse(),
            mode: self.mode,
            left: self.right.clone(),
            middle: self.middle.clone(),
            right: self.left.clone(),
        }
    }

    /// Left, middle and right, in that order.
    pub fn constituents(&self) -> impl Iterator<Item = &Fibered> {
        std::iter::once(&self.left).chain(self.middle.as_ref()).chain(std::iter::once(&self.right))
    }

    pub fn dim(&self) -> usize {
        self.left.set.dim()
    }

    /// True iff the hull of every constituent set satisfies `class`.
    pub fn within_class(&self, class: PolytopeClass) -> bool {
        class == PolytopeClass::Any
            || self.constituents().all(|c| c.hull().is_ok_and(|p| p.satisfies(class)))
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("links serialize")
    }
}

/// A sequence of links whose consecutive endpoints coincide.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkSequence {
    pub steps: Vec<ElementaryLink>,
    pub class_constraint: PolytopeClass,
}

impl LinkSequence {
    pub fn new(steps: Vec<ElementaryLink>, class_constraint: PolytopeClass) -> LinkSequence {
        LinkSequence { steps, class_constraint }
    }

    pub fn inverse(&self) -> LinkSequence {
        LinkSequence {
            steps: self.steps.iter().rev().map(ElementaryLink::inverse).collect(),
            class_constraint: self.class_constraint,
        }
    }

    /// Index of the first step whose left end differs from the previous right end.
    pub fn broken_joint(&self) -> Option<usize> {
        self.steps.windows(2).position(|w| w[0].right != w[1].left).map(|i| i + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub kind: LinkKind,
    pub valid: bool,
    pub conditions: Vec<Condition>,
}

impl LinkReport {
    pub fn failures(&self) -> Vec<&str> {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

#[derive(Default)]
struct Checker {
    conditions: Vec<Condition>,
}

impl Checker {
    fn check(&mut self, name: &str, passed: bool) -> bool {
        self.conditions.push(Condition { name: name.to_string(), passed });
        passed
    }

    fn structure(&mut self, name: &str, x: &Fibered) -> Option<FiberStructure> {
        let fs = x.structure().ok();
        self.check(name, fs.is_some());
        fs
    }

    fn mori(&mut self, name: &str, x: &Fibered) -> Option<FiberStructure> {
        let fs = x.structure().ok().filter(|f| f.mori);
        self.check(name, fs.is_some());
        fs
    }
}

/// `big ⊃· small` as primitive generating sets of the same lattice.
fn is_set_reduction(big: &PrimGenSet, small: &PrimGenSet) -> bool {
    big.dim() == small.dim()
        && big.len() == small.len() + 1
        && small.points().iter().all(|p| big.contains(p))
        && is_pgs(big.dim(), big.points()).is_valid()
        && is_pgs(small.dim(), small.points()).is_valid()
}

/// `big ⊃· small` for fibers: both are primitive generating sets of one common subspace.
fn is_fiber_reduction(big: &[LatticeVector], small: &[LatticeVector]) -> bool {
    big.len() == small.len() + 1
        && small.iter().all(|p| big.contains(p))
        && saturate_span(big).ok() == saturate_span(small).ok()
        && is_pgs_of_span(big).is_valid()
        && is_pgs_of_span(small).is_valid()
}

/// `small ⊂m big`: inside the span of `big`, `small` is the fiber of a Mori
/// fiber structure on `big`.
pub(crate) fn is_mori_tower(small: &[LatticeVector], big: &[LatticeVector]) -> bool {
    if small.len() >= big.len() || !small.iter().all(|p| big.contains(p)) {
        return false;
    }
    let Ok(sc) = span_coords(big) else { return false };
    let Ok(b) = PrimGenSet::new(sc.basis.len(), sc.coords.clone()) else { return false };
    let Some(small_c) = small.iter().map(|p| coords_in_basis(&sc.basis, p)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    fiber_structure(&b, &small_c).is_ok_and(|f| f.mori)
}

/// The base of `outer` maps to the base of `mid` through the fiber structure on
/// `Ā` cut out by the images of `A_f'' \ A_f`.
fn base_tower(outer: &FiberStructure, mid: &FiberStructure) -> bool {
    let extra: Vec<&LatticeVector> = mid.fiber.iter().filter(|p| !outer.fiber.contains(p)).collect();
    let Ok(f) = extra.iter().map(|p| outer.projection.pibar(p)).collect::<Result<Vec<_>>>() else {
        return false;
    };
    let Ok(tower) = fiber_structure(&outer.base, &f) else { return false };
    if mid.base.dim() == 0 {
        return tower.base.dim() == 0;
    }
    let d = outer.parent.dim();
    let Ok(c) = mat_mul(&tower.projection.matrix, &outer.projection.matrix) else { return false };
    let Ok((h, w)) = hnf_with_transform(&c, d) else { return false };
    if h != mid.projection.matrix {
        return false;
    }
    let mapped: Option<Vec<LatticeVector>> = tower
        .base
        .points()
        .iter()
        .map(|a| mat_vec(&w, a).ok().and_then(|v| primitivize(&v).ok()).map(|(p, _)| p))
        .collect();
    let Some(mut mapped) = mapped else { return false };
    mapped.sort();
    mapped.dedup();
    mapped == mid.base.points()
}

fn check_i_d(c: &mut Checker, l: &Fibered, r: &Fibered) {
    let lf = c.mori("left is a Mori fiber structure", l);
    let rf = c.mori("right is a Mori fiber structure", r);
    c.check("A ⊃· A'", is_set_reduction(&l.set, &r.set));
    c.check("A_f = A_f'", l.fiber == r.fiber);
    if let (Some(lf), Some(rf)) = (lf, rf) {
        c.check(
            "base Ā ⊃· Ā'",
            lf.projection == rf.projection && is_set_reduction(&lf.base, &rf.base),
        );
    }
}

fn check_i_m(c: &mut Checker, l: &Fibered, m: &Fibered, r: &Fibered) {
    let lf = c.mori("left is a Mori fiber structure", l);
    let rf = c.mori("right is a Mori fiber structure", r);
    let mf = c.structure("middle is a fiber structure", m);
    c.check("A = A''", l.set == m.set);
    c.check("A_f ⊂m A_f''", is_mori_tower(&l.fiber, &m.fiber));
    c.check("A'' ⊃· A'", is_set_reduction(&m.set, &r.set));
    c.check("A_f'' ⊃· A_f'", is_fiber_reduction(&m.fiber, &r.fiber));
    if let (Some(lf), Some(mf), Some(rf)) = (lf, mf, rf) {
        c.check("base Ā ⇢ Ā''", base_tower(&lf, &mf));
        c.check("base Ā'' = Ā'", mf.projection == rf.projection && mf.base == rf.base);
    }
}

fn check_ii(c: &mut Checker, l: &Fibered, m: &Fibered, r: &Fibered, irreducible: bool) {
    let lf = c.mori("left is a Mori fiber structure", l);
    let rf = c.mori("right is a Mori fiber structure", r);
    let mf = c.structure("middle is a fiber structure", m);
    c.check("A ⊂· A''", is_set_reduction(&m.set, &l.set));
    c.check("A'' ⊃· A'", is_set_reduction(&m.set, &r.set));
    if irreducible {
        c.check("A_f ⊂· A_f''", is_fiber_reduction(&m.fiber, &l.fiber));
        c.check("A_f'' ⊃· A_f'", is_fiber_reduction(&m.fiber, &r.fiber));
    } else {
        c.check("A_f = A_f'' = A_f'", l.fiber == m.fiber && m.fiber == r.fiber);
    }
    if let (Some(lf), Some(mf), Some(rf)) = (lf, mf, rf) {
        c.check(
            "base Ā = Ā'' = Ā'",
            lf.projection == mf.projection
                && mf.projection == rf.projection
                && lf.base == mf.base
                && mf.base == rf.base,
        );
    }
}

fn check_iv_m(c: &mut Checker, l: &Fibered, m: &Fibered, r: &Fibered) {
    let lf = c.mori("left is a Mori fiber structure", l);
    let rf = c.mori("right is a Mori fiber structure", r);
    let mf = c.structure("middle is a fiber structure", m);
    c.check("A = A'' = A'", l.set == m.set && m.set == r.set);
    c.check("A_f ≠ A_f'", l.fiber != r.fiber);
    c.check("A_f ⊂m A_f''", is_mori_tower(&l.fiber, &m.fiber));
    c.check("A_f' ⊂m A_f''", is_mori_tower(&r.fiber, &m.fiber));
    if let (Some(lf), Some(mf), Some(rf)) = (lf, mf, rf) {
        c.check("base Ā ⇢ Ā''", base_tower(&lf, &mf));
        c.check("base Ā' ⇢ Ā''", base_tower(&rf, &mf));
    }
}

/// Checks `link` against the diagram of its declared kind, condition by condition.
pub fn validate_link(link: &ElementaryLink) -> LinkReport {
    let mut c = Checker::default();
    let dims_ok = link.constituents().all(|x| x.set.dim() == link.dim());
    c.check("constituents share one lattice", dims_ok);
    c.check("middle present iff the kind has one", link.middle.is_some() == link.kind.has_middle());
    if dims_ok && link.middle.is_some() == link.kind.has_middle() {
        let (l, r) = (&link.left, &link.right);
        match (link.kind, link.middle.as_ref()) {
            (LinkKind::ID, None) => check_i_d(&mut c, l, r),
            (LinkKind::IIID, None) => check_i_d(&mut c, r, l),
            (LinkKind::IM, Some(m)) => check_i_m(&mut c, l, m, r),
            (LinkKind::IIIM, Some(m)) => check_i_m(&mut c, r, m, l),
            (LinkKind::IIIrr, Some(m)) => check_ii(&mut c, l, m, r, true),
            (LinkKind::IINi, Some(m)) => check_ii(&mut c, l, m, r, false),
            (LinkKind::IVM, Some(m)) => check_iv_m(&mut c, l, m, r),
            (LinkKind::IVS, None) => {
                c.mori("left is a Mori fiber structure", l);
                c.check("A = A'", l.set == r.set);
                c.check("A_f = A_f'", l.fiber == r.fiber);
            }
            _ => unreachable!("middle presence checked above"),
        }
        if link.mode == LinkMode::Polytope {
            let saturated = link
                .constituents()
                .all(|x| x.set.is_hull_saturated() && (x.set.dim() == 0 || fiber_is_hull_saturated(&x.fiber)));
            c.check("every set is the primitive points of its hull", saturated);
        }
    }
    let valid = c.conditions.iter().all(|x| x.passed);
    LinkReport { kind: link.kind, valid, conditions: c.conditions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::zlattice::lv;

    fn assert_valid(link: &ElementaryLink) {
        let r = validate_link(link);
        assert!(r.valid, "{} failed: {:?}", link.kind, r.failures());
    }

    #[test]
    fn families_validate() {
        for m in 0..=3 {
            for s in [Sign::Plus, Sign::Minus] {
                let l = ell_m(m, s);
                assert_eq!(l.kind, LinkKind::IINi);
                assert_valid(&l);
            }
        }
        assert_eq!(ell_inf(Sign::Plus).kind, LinkKind::IIIM);
        assert_eq!(ell_inf(Sign::Minus).kind, LinkKind::IM);
        assert_valid(&ell_inf(Sign::Plus));
        assert_valid(&ell_inf(Sign::Minus));
        assert_eq!(ell(Sign::Plus).kind, LinkKind::IVM);
        assert_valid(&ell(Sign::Plus));
        assert_valid(&ell(Sign::Minus));
    }

    #[test]
    fn family_endpoints() {
        let l = ell_inf(Sign::Plus);
        assert_eq!(l.left, Fibered::whole(pgs_of(&nabla_minus_inf())));
        assert_eq!(l.right, Fibered::new(pgs_of(&nabla(1)), plus_minus_e1()));
        let l = ell(Sign::Plus);
        assert_eq!(l.left.fiber, plus_minus_e1());
        assert_eq!(l.right.fiber, plus_minus_e2());
        assert_eq!(ell(Sign::Minus), ell(Sign::Plus).inverse());
        let mid = ell_m(0, Sign::Plus).middle.unwrap().hull().unwrap();
        let expected = Polytope::hull(&[lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, 0]), lv(&[0, -1]), lv(&[-1, -1])]).unwrap();
        assert_eq!(mid, expected);
    }

    #[test]
    fn family_classes() {
        for s in [Sign::Plus, Sign::Minus] {
            assert!(ell_m(0, s).within_class(PolytopeClass::Terminal));
            assert!(ell_m(1, s).within_class(PolytopeClass::Canonical));
        }
        let mid = ell_m(2, Sign::Plus).middle.unwrap().hull().unwrap();
        assert!(!mid.satisfies(PolytopeClass::Canonical));
    }

    #[test]
    fn degenerate_i_d_is_rejected() {
        let left = Fibered::new(pgs_of(&nabla(0)), plus_minus_e1());
        let right = Fibered::new(
            PrimGenSet::new_unchecked(2, vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, 0])]),
            plus_minus_e1(),
        );
        let link = ElementaryLink { kind: LinkKind::ID, mode: LinkMode::Set, left, middle: None, right };
        let r = validate_link(&link);
        assert!(!r.valid);
        assert!(r.failures().contains(&"A ⊃· A'"));
    }

    #[test]
    fn wrong_kind_label_is_rejected() {
        let mut l = ell_m(1, Sign::Plus);
        l.kind = LinkKind::IIIrr;
        assert!(!validate_link(&l).valid);
    }

    #[test]
    fn i_d_and_inverse() {
        let e1 = vec![lv(&[-1, 0, 0]), lv(&[1, 0, 0])];
        let base_lifts = [lv(&[0, 1, 0]), lv(&[0, 0, 1]), lv(&[0, -1, 0]), lv(&[0, -1, -1])];
        let mut pts = e1.clone();
        pts.extend(base_lifts.iter().cloned());
        let a = PrimGenSet::new(3, pts).unwrap();
        let a_red = PrimGenSet::new(3, a.without(&lv(&[0, -1, 0]))).unwrap();
        let link = ElementaryLink {
            kind: LinkKind::ID,
            mode: LinkMode::Set,
            left: Fibered::new(a, e1.clone()),
            middle: None,
            right: Fibered::new(a_red, e1),
        };
        assert_valid(&link);
        let inv = link.inverse();
        assert_eq!(inv.kind, LinkKind::IIID);
        assert_valid(&inv);
        assert_eq!(inv.inverse(), link);
        let mut mislabeled = link.clone();
        mislabeled.kind = LinkKind::IIID;
        assert!(!validate_link(&mislabeled).valid);
    }
}
