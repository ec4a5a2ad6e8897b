//! The named 2D link families between the standard Mori fiber polygons.

use serde::{Deserialize, Serialize};

use super::{ElementaryLink, Fibered, LinkKind, LinkMode};
use crate::fixtures::{nabla, nabla_minus_inf, pgs_of, plus_minus_e1, plus_minus_e2};
use crate::polytope::Polytope;
use crate::zlattice::UnimodularMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

fn oriented(link: ElementaryLink, sign: Sign) -> ElementaryLink {
    match sign {
        Sign::Plus => link,
        Sign::Minus => link.inverse(),
    }
}

fn over_e1(p: &Polytope) -> Fibered {
    Fibered::new(pgs_of(p), plus_minus_e1())
}

/// `ℓ_m^+`: the II_ni link from `∇_m` to `∇_{m+1}` over `conv(±e1)`.
pub fn ell_m(m: i64, sign: Sign) -> ElementaryLink {
    assert!(m >= 0, "ℓ_m needs m >= 0");
    let (a, b) = (nabla(m), nabla(m + 1));
    let mut pts = a.vertices().to_vec();
    pts.extend(b.vertices().iter().cloned());
    let middle = Polytope::hull(&pts).expect("union hull is full-dimensional");
    oriented(
        ElementaryLink {
            kind: LinkKind::IINi,
            mode: LinkMode::Polytope,
            left: over_e1(&a),
            middle: Some(over_e1(&middle)),
            right: over_e1(&b),
        },
        sign,
    )
}

/// `ℓ_{-∞}^+`: the III_m link from `∇_{-∞}` over a point to `∇_1` over `conv(±e1)`.
pub fn ell_inf(sign: Sign) -> ElementaryLink {
    let n1 = pgs_of(&nabla(1));
    oriented(
        ElementaryLink {
            kind: LinkKind::IIIM,
            mode: LinkMode::Polytope,
            left: Fibered::whole(pgs_of(&nabla_minus_inf())),
            middle: Some(Fibered::whole(n1.clone())),
            right: Fibered::new(n1, plus_minus_e1()),
        },
        sign,
    )
}

/// `ℓ^+`: the IV_m link on `∇_0` switching the ruling `conv(±e1)` to `conv(±e2)`.
pub fn ell(sign: Sign) -> ElementaryLink {
    let n0 = pgs_of(&nabla(0));
    oriented(
        ElementaryLink {
            kind: LinkKind::IVM,
            mode: LinkMode::Polytope,
            left: Fibered::new(n0.clone(), plus_minus_e1()),
            middle: Some(Fibered::whole(n0.clone())),
            right: Fibered::new(n0, plus_minus_e2()),
        },
        sign,
    )
}

/// The image of every constituent under `g`.
pub fn conjugate(g: &UnimodularMap, link: &ElementaryLink) -> ElementaryLink {
    ElementaryLink {
        kind: link.kind,
        mode: link.mode,
        left: link.left.transform(g),
        middle: link.middle.as_ref().map(|m| m.transform(g)),
        right: link.right.transform(g),
    }
}
