//! Two link sequences between the same pair of 3D Mori fiber polytopes.
//!
//! The detour passes through sets that are not the primitive points of their
//! hulls; the route through Fano polytopes does not.

use super::certificate::{certificate_from_links, ConnectCertificate};
use crate::fixtures::obstruction_set;
use crate::links::{ElementaryLink, Fibered, LinkKind, LinkMode, LinkSequence};
use crate::pgs::PrimGenSet;
use crate::polytope::PolytopeClass;

/// `A_{i...}` with fiber `A_{j...}`, indices 1-based into the obstruction vectors.
pub fn obstruction_fibered(set: &[usize], fiber: &[usize]) -> Fibered {
    let a = PrimGenSet::new(3, obstruction_set(set)).expect("obstruction sets are primitive generating sets");
    Fibered::new(a, obstruction_set(fiber))
}

fn link(kind: LinkKind, mode: LinkMode, parts: [(&[usize], &[usize]); 3]) -> ElementaryLink {
    let [l, m, r] = parts.map(|(s, f)| obstruction_fibered(s, f));
    ElementaryLink { kind, mode, left: l, middle: Some(m), right: r }
}

/// `(A_123457, A_14)` to `(A_12356, A_123)` through `A_12357` and `A_123567`.
pub fn detour_sequence() -> LinkSequence {
    let steps = vec![
        link(
            LinkKind::IM,
            LinkMode::Set,
            [(&[1, 2, 3, 4, 5, 7], &[1, 4]), (&[1, 2, 3, 4, 5, 7], &[1, 2, 3, 4]), (&[1, 2, 3, 5, 7], &[1, 2, 3])],
        ),
        link(
            LinkKind::IINi,
            LinkMode::Set,
            [(&[1, 2, 3, 5, 7], &[1, 2, 3]), (&[1, 2, 3, 5, 6, 7], &[1, 2, 3]), (&[1, 2, 3, 5, 6], &[1, 2, 3])],
        ),
    ];
    LinkSequence::new(steps, PolytopeClass::Any)
}

/// The same endpoints through `∇_1234567` and `∇_123456`, all Fano polytopes.
pub fn fano_route_sequence() -> LinkSequence {
    let steps = vec![
        link(
            LinkKind::IINi,
            LinkMode::Polytope,
            [(&[1, 2, 3, 4, 5, 7], &[1, 4]), (&[1, 2, 3, 4, 5, 6, 7], &[1, 4]), (&[1, 2, 3, 4, 5, 6], &[1, 4])],
        ),
        link(
            LinkKind::IM,
            LinkMode::Polytope,
            [(&[1, 2, 3, 4, 5, 6], &[1, 4]), (&[1, 2, 3, 4, 5, 6], &[1, 2, 3, 4]), (&[1, 2, 3, 5, 6], &[1, 2, 3])],
        ),
    ];
    LinkSequence::new(steps, PolytopeClass::Fano)
}

/// Types of the Sarkisov links the two sequences are usually labelled with.
pub const DETOUR_SARKISOV_LABELS: [LinkKind; 2] = [LinkKind::ID, LinkKind::IINi];
pub const FANO_ROUTE_SARKISOV_LABELS: [LinkKind; 2] = [LinkKind::IINi, LinkKind::ID];

/// `seq` with its step kinds replaced by `labels`.
pub fn relabel(seq: &LinkSequence, labels: &[LinkKind]) -> LinkSequence {
    let steps = seq.steps.iter().zip(labels).map(|(l, &kind)| ElementaryLink { kind, ..l.clone() }).collect();
    LinkSequence::new(steps, seq.class_constraint)
}

pub fn fano_route_certificate() -> ConnectCertificate {
    certificate_from_links(&fano_route_sequence().steps, PolytopeClass::Fano).expect("fixture sets have hulls")
}
