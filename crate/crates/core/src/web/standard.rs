//! Standard forms of 2D Mori fiber polygons, `GL(2, Z)` words, and routes from
//! any Mori fiber polygon to its standard form.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures::{gen_s, gen_t, gen_u, nabla, nabla_minus_inf, pgs_of, plus_minus_e1};
use crate::links::{conjugate, ell, ell_inf, ell_m, ElementaryLink, Fibered, Sign};
use crate::polytope::{cross2, PolytopeClass};
use crate::zlattice::{LatticeVector, UnimodularMap};

/// `∇_{-∞}` over a point, or `∇_m` over `conv(±e1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardForm {
    MinusInf,
    Nabla(i64),
}

impl StandardForm {
    pub fn fibered(self) -> Fibered {
        match self {
            StandardForm::MinusInf => Fibered::whole(pgs_of(&nabla_minus_inf())),
            StandardForm::Nabla(m) => Fibered::new(pgs_of(&nabla(m)), plus_minus_e1()),
        }
    }

    /// The smallest class the standard form belongs to among terminal and canonical.
    pub fn class(self) -> PolytopeClass {
        match self {
            StandardForm::MinusInf | StandardForm::Nabla(0) | StandardForm::Nabla(1) => PolytopeClass::Terminal,
            StandardForm::Nabla(2) => PolytopeClass::Canonical,
            StandardForm::Nabla(_) => PolytopeClass::Fano,
        }
    }
}

impl fmt::Display for StandardForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardForm::MinusInf => f.write_str("∇_-∞"),
            StandardForm::Nabla(m) => write!(f, "∇_{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    S,
    T,
    U,
}

impl Gen {
    pub fn map(self) -> UnimodularMap {
        match self {
            Gen::S => gen_s(),
            Gen::T => gen_t(),
            Gen::U => gen_u(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub fn map(self) -> UnimodularMap {
        let g = self.gen.map();
        if self.inverse {
            g.inverse()
        } else {
            g
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.gen, if self.inverse { "^-1" } else { "" })
    }
}

fn letters(gen: Gen, power: i64) -> impl Iterator<Item = Letter> {
    let inverse = power < 0;
    (0..power.unsigned_abs()).map(move |_| Letter { gen, inverse })
}

pub fn word_product(word: &[Letter]) -> UnimodularMap {
    word.iter().fold(UnimodularMap::identity(2), |acc, l| acc.compose(&l.map()))
}

/// Writes `h` as a word in `S`, `T`, `U` and `T^{-1}` by the Euclidean
/// algorithm on its first column. The word is not minimized.
pub fn factor(h: &UnimodularMap) -> Vec<Letter> {
    assert_eq!(h.dim(), 2, "factorization is for GL(2, Z)");
    let mut m = h.matrix().clone();
    // `word` collects the inverses of the left multipliers, in order.
    let mut word: Vec<Letter> = Vec::new();
    while m[1][0] != 0 {
        let q = m[0][0] / m[1][0];
        // T^{-q}: row0 -= q row1
        m[0] = vec![m[0][0] - q * m[1][0], m[0][1] - q * m[1][1]];
        word.extend(letters(Gen::T, q));
        // S^{-1}: (row0, row1) -> (row1, -row0)
        let r0 = m[0].clone();
        m[0] = m[1].clone();
        m[1] = vec![-r0[0], -r0[1]];
        word.push(Letter { gen: Gen::S, inverse: false });
    }
    if m[0][0] == -1 {
        m[0] = vec![-m[0][0], -m[0][1]];
        word.push(Letter { gen: Gen::U, inverse: false });
    }
    if m[1][1] == -1 {
        // diag(1, -1) = S S U is an involution
        m[1] = vec![-m[1][0], -m[1][1]];
        word.extend(letters(Gen::S, 2));
        word.push(Letter { gen: Gen::U, inverse: false });
    }
    word.extend(letters(Gen::T, m[0][1]));
    debug_assert_eq!(word_product(&word), *h);
    word
}

/// Finds `g` and the standard form `X` with `g · mfp = X` (sets and fibers).
///
/// Among all such `g` the one whose inverse has the shortest word wins, ties
/// broken by comparing words letter by letter with `S < T < U`.
pub fn to_standard_form(mfp: &Fibered) -> Result<(UnimodularMap, StandardForm)> {
    if mfp.set.dim() != 2 {
        return Err(Error::UnsupportedDimension(mfp.set.dim()));
    }
    if !mfp.is_mori() {
        return Err(Error::NotMori("input is not a Mori fiber structure".into()));
    }
    let p = mfp.hull()?;
    let verts = p.vertices();
    let origin = LatticeVector::zero(2);
    let mut best: Option<(Vec<Letter>, UnimodularMap, StandardForm)> = None;
    for form in forms_up_to(mfp.set.len() as i64) {
        let target = form.fibered();
        if target.set.len() != mfp.set.len() || target.fiber.len() != mfp.fiber.len() {
            continue;
        }
        for a in verts {
            for b in verts {
                if cross2(&origin, a, b).abs() != 1 {
                    continue;
                }
                let cols = vec![vec![a[0], b[0]], vec![a[1], b[1]]];
                let g = UnimodularMap::new(cols)?.inverse();
                if mfp.transform(&g) != target {
                    continue;
                }
                let word = factor(&g.inverse());
                let better = best.as_ref().is_none_or(|(w, _, _)| (word.len(), &word) < (w.len(), w));
                if better {
                    best = Some((word, g, form));
                }
            }
        }
        if best.is_some() {
            break;
        }
    }
    best.map(|(_, g, f)| (g, f))
        .ok_or_else(|| Error::InvalidInput("Mori fiber polygon is not equivalent to a standard form".into()))
}

fn forms_up_to(max_m: i64) -> impl Iterator<Item = StandardForm> {
    std::iter::once(StandardForm::MinusInf).chain((0..=max_m).map(StandardForm::Nabla))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrozenSequence {
    pub form: StandardForm,
    pub gen: Gen,
    pub class: PolytopeClass,
    pub steps: Vec<ElementaryLink>,
}

static FROZEN: OnceLock<HashMap<(StandardForm, Gen), Vec<ElementaryLink>>> = OnceLock::new();

/// Base sequences found by breadth-first search and stored in the repository.
pub fn frozen_sequences() -> &'static HashMap<(StandardForm, Gen), Vec<ElementaryLink>> {
    FROZEN.get_or_init(|| {
        let raw: Vec<FrozenSequence> = serde_json::from_str(include_str!("../../fixtures/base_sequences.json"))
            .expect("base sequence fixture parses");
        raw.into_iter().map(|f| ((f.form, f.gen), f.steps)).collect()
    })
}

/// The pairs whose base sequences come from the search fixture.
pub const SEARCHED_CASES: [(StandardForm, Gen); 7] = [
    (StandardForm::MinusInf, Gen::T),
    (StandardForm::MinusInf, Gen::U),
    (StandardForm::Nabla(0), Gen::T),
    (StandardForm::Nabla(1), Gen::T),
    (StandardForm::Nabla(1), Gen::U),
    (StandardForm::Nabla(2), Gen::T),
    (StandardForm::Nabla(2), Gen::U),
];

/// The four-link route from `∇_{-∞}` to `S∇_{-∞}` through `∇_1` and `∇_0`.
pub fn cremona_sequence() -> Vec<ElementaryLink> {
    let u = gen_u();
    vec![
        ell_inf(Sign::Plus),
        ell_m(0, Sign::Minus),
        conjugate(&u, &ell_m(0, Sign::Plus)),
        conjugate(&u, &ell_inf(Sign::Minus)),
    ]
}

/// `∇_m` down to `∇_0`, switch the ruling, then the `S`-image of the way back up.
pub fn s_nabla_sequence(m: i64) -> Vec<ElementaryLink> {
    let s = gen_s();
    let mut out: Vec<ElementaryLink> = (0..m).rev().map(|j| ell_m(j, Sign::Minus)).collect();
    out.push(ell(Sign::Plus));
    out.extend((0..m).map(|j| conjugate(&s, &ell_m(j, Sign::Plus))));
    out
}

/// A link sequence from `X` to `gen · X`, fibers included.
pub fn base_sequence(form: StandardForm, gen: Gen) -> Result<Vec<ElementaryLink>> {
    match (form, gen) {
        (StandardForm::MinusInf, Gen::S) => Ok(cremona_sequence()),
        (StandardForm::Nabla(m), Gen::S) => Ok(s_nabla_sequence(m)),
        (StandardForm::Nabla(0), Gen::U) => Ok(vec![]),
        key => frozen_sequences()
            .get(&key)
            .cloned()
            .ok_or_else(|| Error::MissingBaseSequence(format!("{} under {:?}", form, gen))),
    }
}

fn reverse(seq: &[ElementaryLink]) -> Vec<ElementaryLink> {
    seq.iter().rev().map(ElementaryLink::inverse).collect()
}

/// A link sequence from `X` to `letter · X`.
pub fn letter_sequence(form: StandardForm, letter: Letter) -> Result<Vec<ElementaryLink>> {
    let base = base_sequence(form, letter.gen)?;
    if !letter.inverse {
        return Ok(base);
    }
    let g = letter.map();
    Ok(reverse(&base).iter().map(|l| conjugate(&g, l)).collect())
}

/// A link sequence from the standard form `X` to `h · X` for `h` the product of `word`.
pub fn word_route(form: StandardForm, word: &[Letter]) -> Result<Vec<ElementaryLink>> {
    let mut prefix = UnimodularMap::identity(2);
    let mut out = Vec::new();
    for &letter in word {
        out.extend(letter_sequence(form, letter)?.iter().map(|l| conjugate(&prefix, l)));
        prefix = prefix.compose(&letter.map());
    }
    Ok(out)
}

/// A route from `mfp` to its standard form.
pub fn standard_route(mfp: &Fibered) -> Result<(StandardForm, Vec<ElementaryLink>)> {
    let (g, form) = to_standard_form(mfp)?;
    let word = factor(&g.inverse());
    Ok((form, reverse(&word_route(form, &word)?)))
}

/// The fixed ladder `∇_{-∞} -- ∇_1 -- ∇_0` with `∇_2` hanging off `∇_1`.
pub fn ladder(from: StandardForm, to: StandardForm) -> Result<Vec<ElementaryLink>> {
    fn up(x: StandardForm) -> Result<Vec<ElementaryLink>> {
        match x {
            StandardForm::MinusInf => Ok(vec![ell_inf(Sign::Plus)]),
            StandardForm::Nabla(0) => Ok(vec![ell_m(0, Sign::Plus)]),
            StandardForm::Nabla(1) => Ok(vec![]),
            StandardForm::Nabla(2) => Ok(vec![ell_m(1, Sign::Minus)]),
            other => Err(Error::NotInClass(format!("{other} is not canonical"))),
        }
    }
    if from == to {
        return Ok(vec![]);
    }
    let mut out = up(from)?;
    out.extend(reverse(&up(to)?));
    Ok(out)
}
