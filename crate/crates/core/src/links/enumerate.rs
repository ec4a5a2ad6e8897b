//! Candidate generation for links leaving a given Mori fiber structure.

use std::collections::BTreeSet;

use super::{is_mori_tower, validate_link, ElementaryLink, Fibered, LinkKind, LinkMode};
use crate::pgs::{fiber_structures, PrimGenSet};
use crate::polytope::PolytopeClass;
use crate::zlattice::LatticeVector;

/// Primitive vectors with every coordinate in `[-bound, bound]`.
pub(crate) fn box_points(dim: usize, bound: i64) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    let mut cur = vec![-bound; dim];
    loop {
        let v = LatticeVector::from_slice(&cur);
        if v.is_primitive() {
            out.push(v);
        }
        let mut i = 0;
        while i < dim && cur[i] == bound {
            cur[i] = -bound;
            i += 1;
        }
        if i == dim {
            return out;
        }
        cur[i] += 1;
    }
}

fn with(set: &PrimGenSet, w: &LatticeVector) -> PrimGenSet {
    let mut pts = set.points().to_vec();
    pts.push(w.clone());
    PrimGenSet::new_unchecked(set.dim(), pts)
}

fn without(set: &PrimGenSet, v: &LatticeVector) -> PrimGenSet {
    PrimGenSet::new_unchecked(set.dim(), set.without(v))
}

fn minus(fiber: &[LatticeVector], v: &LatticeVector) -> Vec<LatticeVector> {
    fiber.iter().filter(|p| *p != v).cloned().collect()
}

fn plus(fiber: &[LatticeVector], w: &LatticeVector) -> Vec<LatticeVector> {
    let mut f = fiber.to_vec();
    f.push(w.clone());
    f.sort();
    f
}

struct Search {
    mode: LinkMode,
    class: PolytopeClass,
    out: BTreeSet<(LinkKind, String, ElementaryLink)>,
}

impl Search {
    /// Cheap membership filter for a constituent set before full validation.
    fn admissible(&self, set: &PrimGenSet) -> bool {
        if self.mode == LinkMode::Polytope && !set.is_hull_saturated() {
            return false;
        }
        self.class == PolytopeClass::Any || set.hull().is_ok_and(|p| p.satisfies(self.class))
    }

    fn offer(&mut self, kind: LinkKind, left: &Fibered, middle: Option<Fibered>, right: Fibered) {
        if right == *left {
            return;
        }
        let link = ElementaryLink { kind, mode: self.mode, left: left.clone(), middle, right };
        if validate_link(&link).valid && link.within_class(self.class) {
            self.out.insert((kind, link.canonical_json(), link));
        }
    }
}

/// All links of kinds I to IV_m leaving `from`, with added points drawn from
/// the box `[-bound, bound]^d`. The trivial IV_s link is omitted.
///
/// In polytope mode every constituent must be the primitive points of its
/// hull; with a class constraint every hull must satisfy it. The result is
/// sorted by kind tag, then by canonical JSON.
pub fn enumerate_links(from: &Fibered, class: PolytopeClass, bound: i64, mode: LinkMode) -> Vec<ElementaryLink> {
    let a = &from.set;
    let af = &from.fiber;
    let mut s = Search { mode, class, out: BTreeSet::new() };
    if !from.is_mori() {
        return vec![];
    }
    let adds: Vec<LatticeVector> = box_points(a.dim(), bound).into_iter().filter(|w| !a.contains(w)).collect();
    let grown: Vec<(LatticeVector, PrimGenSet)> = adds
        .iter()
        .map(|w| (w.clone(), with(a, w)))
        .filter(|(_, g)| s.admissible(g))
        .collect();
    let structures = fiber_structures(a);

    // I_d: drop a point off the fiber.
    for v in a.points().iter().filter(|v| !af.contains(v)) {
        let r = without(a, v);
        if s.admissible(&r) {
            s.offer(LinkKind::ID, from, None, Fibered::new(r, af.clone()));
        }
    }
    // III_d: add a point off the fiber.
    for (_, g) in &grown {
        s.offer(LinkKind::IIID, from, None, Fibered::new(g.clone(), af.clone()));
    }
    // I_m and IV_m go through a larger fiber on the same set.
    for mid in structures.iter().filter(|f| is_mori_tower(af, &f.fiber)) {
        let m = Fibered::new(a.clone(), mid.fiber.clone());
        for v in &mid.fiber {
            let r = without(a, v);
            if s.admissible(&r) {
                s.offer(LinkKind::IM, from, Some(m.clone()), Fibered::new(r, minus(&mid.fiber, v)));
            }
        }
        for other in structures.iter().filter(|g| g.mori && g.fiber != *af) {
            if is_mori_tower(&other.fiber, &mid.fiber) {
                s.offer(LinkKind::IVM, from, Some(m.clone()), Fibered::new(a.clone(), other.fiber.clone()));
            }
        }
    }
    for (w, g) in &grown {
        // III_m: grow the fiber by w, then pass to a smaller Mori fiber inside it.
        let big_fiber = plus(af, w);
        let m = Fibered::new(g.clone(), big_fiber.clone());
        if m.structure().is_ok() {
            for other in fiber_structures(g).iter().filter(|f| f.mori && is_mori_tower(&f.fiber, &big_fiber)) {
                s.offer(LinkKind::IIIM, from, Some(m.clone()), Fibered::new(g.clone(), other.fiber.clone()));
            }
        }
        // II_ni and II_irr: grow by w, then drop some u != w.
        for u in a.points() {
            let r = without(g, u);
            if !s.admissible(&r) {
                continue;
            }
            if !af.contains(u) {
                s.offer(
                    LinkKind::IINi,
                    from,
                    Some(Fibered::new(g.clone(), af.clone())),
                    Fibered::new(r.clone(), af.clone()),
                );
            }
            if big_fiber.contains(u) {
                s.offer(LinkKind::IIIrr, from, Some(m.clone()), Fibered::new(r, minus(&big_fiber, u)));
            }
        }
    }
    s.out.into_iter().map(|(_, _, l)| l).collect()
}
