//! Connection certificates: inclusion chains of polytopes backed by link sequences.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::bfs::bfs_links;
use super::mmp::{mmp_reduce, MmpResult};
use super::standard::{ladder, standard_route, StandardForm};
use crate::error::{Error, Result};
use crate::links::{validate_link, ElementaryLink, Fibered, LinkSequence};
use crate::pgs::{polytope_reduction, PrimGenSet};
use crate::polytope::{Polytope, PolytopeClass};
use crate::zlattice::LatticeVector;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Panel {
    pub polytope: Polytope,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<Vec<LatticeVector>>,
    /// Set on link endpoints, where the fiber is a Mori fiber structure.
    #[serde(default)]
    pub mori: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    /// The next polytope is a reduction of this one.
    Contains,
    /// This polytope is a reduction of the next one.
    ContainedIn,
    Equal,
}

impl RelationKind {
    pub fn symbol(self) -> &'static str {
        match self {
            RelationKind::Contains => "⊃·",
            RelationKind::ContainedIn => "⊂·",
            RelationKind::Equal => "=",
        }
    }

    fn flip(self) -> RelationKind {
        match self {
            RelationKind::Contains => RelationKind::ContainedIn,
            RelationKind::ContainedIn => RelationKind::Contains,
            RelationKind::Equal => RelationKind::Equal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relation {
    pub kind: RelationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<LatticeVector>,
    /// Index of the link step this relation belongs to, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectCertificate {
    pub class: PolytopeClass,
    pub chain: Vec<Panel>,
    pub relations: Vec<Relation>,
    pub sequence: LinkSequence,
}

impl ConnectCertificate {
    pub fn start(&self) -> &Polytope {
        &self.chain[0].polytope
    }

    pub fn end(&self) -> &Polytope {
        &self.chain[self.chain.len() - 1].polytope
    }
}

/// A piece of a chain; pieces are glued at a shared end panel.
#[derive(Debug, Clone, Default)]
pub(crate) struct Segment {
    panels: Vec<Panel>,
    relations: Vec<Relation>,
    links: Vec<ElementaryLink>,
}

fn set_relation(a: &PrimGenSet, b: &PrimGenSet) -> (RelationKind, Option<LatticeVector>) {
    if a == b {
        (RelationKind::Equal, None)
    } else if b.len() > a.len() {
        (RelationKind::ContainedIn, b.points().iter().find(|p| !a.contains(p)).cloned())
    } else {
        (RelationKind::Contains, a.points().iter().find(|p| !b.contains(p)).cloned())
    }
}

fn panel(x: &Fibered, mori: bool) -> Result<Panel> {
    Ok(Panel { polytope: x.hull()?, fiber: Some(x.fiber.clone()), mori })
}

impl Segment {
    pub(crate) fn single(p: &Polytope) -> Segment {
        Segment { panels: vec![Panel { polytope: p.clone(), fiber: None, mori: false }], ..Segment::default() }
    }

    pub(crate) fn from_mmp(r: &MmpResult) -> Segment {
        let mut s = Segment::single(&r.start);
        for step in &r.steps {
            s.panels.push(Panel { polytope: step.result.clone(), fiber: None, mori: false });
            s.relations.push(Relation { kind: RelationKind::Contains, witness: Some(step.removed.clone()), step: None });
        }
        s
    }

    pub(crate) fn from_links(links: &[ElementaryLink]) -> Result<Segment> {
        let Some(first) = links.first() else { return Ok(Segment::default()) };
        let mut s = Segment { panels: vec![panel(&first.left, true)?], relations: vec![], links: links.to_vec() };
        for (i, link) in links.iter().enumerate() {
            let mut prev = &link.left;
            for (x, mori) in link.middle.iter().map(|m| (m, false)).chain(std::iter::once((&link.right, true))) {
                let (kind, witness) = set_relation(&prev.set, &x.set);
                s.relations.push(Relation { kind, witness, step: Some(i) });
                s.panels.push(panel(x, mori)?);
                prev = x;
            }
        }
        Ok(s)
    }

    pub(crate) fn reversed(&self) -> Segment {
        let n = self.links.len();
        Segment {
            panels: self.panels.iter().rev().cloned().collect(),
            relations: self
                .relations
                .iter()
                .rev()
                .map(|r| Relation { kind: r.kind.flip(), witness: r.witness.clone(), step: r.step.map(|i| n - 1 - i) })
                .collect(),
            links: self.links.iter().rev().map(ElementaryLink::inverse).collect(),
        }
    }

    pub(crate) fn append(mut self, other: &Segment) -> Segment {
        if other.panels.is_empty() {
            return self;
        }
        if self.panels.is_empty() {
            return other.clone();
        }
        let offset = self.links.len();
        let joint = self.panels.last_mut().expect("nonempty");
        let incoming = &other.panels[0];
        debug_assert_eq!(joint.polytope, incoming.polytope, "segments must share their joint panel");
        if joint.fiber.is_none() {
            joint.fiber = incoming.fiber.clone();
        }
        joint.mori |= incoming.mori;
        self.panels.extend(other.panels[1..].iter().cloned());
        self.relations.extend(other.relations.iter().map(|r| Relation { step: r.step.map(|i| i + offset), ..r.clone() }));
        self.links.extend(other.links.iter().cloned());
        self
    }

    pub(crate) fn into_certificate(self, class: PolytopeClass) -> ConnectCertificate {
        ConnectCertificate {
            class,
            chain: self.panels,
            relations: self.relations,
            sequence: LinkSequence::new(self.links, class),
        }
    }
}

/// A certificate consisting of a link sequence only.
pub fn certificate_from_links(links: &[ElementaryLink], class: PolytopeClass) -> Result<ConnectCertificate> {
    if links.is_empty() {
        return Err(Error::InvalidInput("empty link sequence".into()));
    }
    Ok(Segment::from_links(links)?.into_certificate(class))
}

struct Prepared {
    form: StandardForm,
    /// From the input polytope down to its standard form.
    segment: Segment,
}

/// Builds certificates for many pairs, memoizing the route of every polytope
/// to its standard form. Safe to share across threads.
pub struct Connector {
    class: PolytopeClass,
    prepared: RwLock<HashMap<Polytope, Arc<Prepared>>>,
}

impl Connector {
    pub fn new(class: PolytopeClass) -> Connector {
        Connector { class, prepared: RwLock::new(HashMap::new()) }
    }

    fn prepare(&self, p: &Polytope) -> Result<Arc<Prepared>> {
        if let Some(hit) = self.prepared.read().expect("cache lock").get(p) {
            return Ok(hit.clone());
        }
        if p.dim() != 2 {
            return Err(Error::UnsupportedDimension(p.dim()));
        }
        let mmp = mmp_reduce(p, self.class)?;
        let (form, route) = standard_route(&mmp.fibered)?;
        let segment = Segment::from_mmp(&mmp).append(&Segment::from_links(&route)?);
        let prepared = Arc::new(Prepared { form, segment });
        self.prepared.write().expect("cache lock").insert(p.clone(), prepared.clone());
        Ok(prepared)
    }

    /// Connects `p` to `q`: reduce both to Mori fiber polygons, route each to
    /// its standard form, and join the standard forms along the fixed ladder.
    pub fn connect(&self, p: &Polytope, q: &Polytope) -> Result<ConnectCertificate> {
        for x in [p, q] {
            if !x.satisfies(self.class) {
                return Err(Error::NotInClass(self.class.to_string()));
            }
        }
        if p == q {
            return Ok(Segment::single(p).into_certificate(self.class));
        }
        let (a, b) = (self.prepare(p)?, self.prepare(q)?);
        let middle = Segment::from_links(&ladder(a.form, b.form)?)?;
        Ok(a.segment.clone().append(&middle).append(&b.segment.reversed()).into_certificate(self.class))
    }
}

pub fn connect(p: &Polytope, q: &Polytope, class: PolytopeClass) -> Result<ConnectCertificate> {
    Connector::new(class).connect(p, q)
}

/// Shortest-link certificate by breadth-first search inside the box, or
/// `None` if the search space is exhausted first.
pub fn bfs_connect(
    p: &Polytope,
    q: &Polytope,
    class: PolytopeClass,
    bound: i64,
    max_states: usize,
) -> Result<Option<ConnectCertificate>> {
    if p == q {
        if !p.satisfies(class) {
            return Err(Error::NotInClass(class.to_string()));
        }
        return Ok(Some(Segment::single(p).into_certificate(class)));
    }
    let (a, b) = (mmp_reduce(p, class)?, mmp_reduce(q, class)?);
    let target = b.fibered.set.clone();
    let Some(links) = bfs_links(&a.fibered, |x| x.set == target && x.is_mori(), class, bound, max_states) else {
        return Ok(None);
    };
    let seg = Segment::from_mmp(&a).append(&Segment::from_links(&links)?).append(&Segment::from_mmp(&b).reversed());
    Ok(Some(seg.into_certificate(class)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub location: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub failures: Vec<Failure>,
}

type RelationKey = (Polytope, Polytope, RelationKind, Option<LatticeVector>);

/// Re-checks certificates. Results of the pure sub-checks are memoized, so a
/// shared verifier is cheap on certificates with common pieces.
#[derive(Default)]
pub struct Verifier {
    links: RwLock<HashMap<(ElementaryLink, PolytopeClass), Option<String>>>,
    relations: RwLock<HashMap<RelationKey, bool>>,
    classes: RwLock<HashMap<(Polytope, PolytopeClass), bool>>,
}

fn memo<K: std::hash::Hash + Eq + Clone, V: Clone>(cache: &RwLock<HashMap<K, V>>, key: &K, f: impl FnOnce() -> V) -> V {
    if let Some(v) = cache.read().expect("cache lock").get(key) {
        return v.clone();
    }
    let v = f();
    cache.write().expect("cache lock").insert(key.clone(), v.clone());
    v
}

fn relation_holds(a: &Polytope, b: &Polytope, kind: RelationKind, witness: Option<&LatticeVector>) -> bool {
    match (kind, witness) {
        (RelationKind::Equal, None) => a == b,
        (RelationKind::Contains, Some(v)) => polytope_reduction(a, v).is_ok_and(|r| r == *b),
        (RelationKind::ContainedIn, Some(v)) => polytope_reduction(b, v).is_ok_and(|r| r == *a),
        _ => false,
    }
}

impl Verifier {
    pub fn new() -> Verifier {
        Verifier::default()
    }

    fn link_problem(&self, link: &ElementaryLink, class: PolytopeClass) -> Option<String> {
        memo(&self.links, &(link.clone(), class), || {
            let report = validate_link(link);
            if !report.valid {
                Some(format!("{} link fails: {}", link.kind, report.failures().join("; ")))
            } else if !link.within_class(class) {
                Some(format!("link leaves class {class}"))
            } else {
                None
            }
        })
    }

    pub fn verify(&self, c: &ConnectCertificate) -> VerifyReport {
        let mut failures = Vec::new();
        let mut fail = |location: String, reason: &str| failures.push(Failure { location, reason: reason.to_string() });
        if c.chain.is_empty() {
            fail("chain".into(), "empty chain");
            return VerifyReport { ok: false, failures };
        }
        if c.relations.len() + 1 != c.chain.len() {
            fail("relations".into(), "need exactly one relation between consecutive panels");
            return VerifyReport { ok: false, failures };
        }
        for (i, p) in c.chain.iter().enumerate() {
            let inside = memo(&self.classes, &(p.polytope.clone(), c.class), || p.polytope.satisfies(c.class));
            if !inside {
                fail(format!("panel {i}"), "polytope outside the class");
            }
        }
        for (i, r) in c.relations.iter().enumerate() {
            let (a, b) = (&c.chain[i].polytope, &c.chain[i + 1].polytope);
            let key = (a.clone(), b.clone(), r.kind, r.witness.clone());
            if !memo(&self.relations, &key, || relation_holds(a, b, r.kind, r.witness.as_ref())) {
                fail(format!("relation {i}"), &format!("{} does not hold", r.kind.symbol()));
            }
        }
        let steps = &c.sequence.steps;
        if c.sequence.class_constraint != c.class {
            fail("sequence".into(), "class constraint differs from the certificate");
        }
        if let Some(j) = c.sequence.broken_joint() {
            fail(format!("step {j}"), "left end differs from the previous right end");
        }
        for (j, link) in steps.iter().enumerate() {
            if let Some(problem) = self.link_problem(link, c.class) {
                fail(format!("step {j}"), &problem);
            }
        }
        // The relations tagged with link steps must be exactly the flattened sequence.
        let first = c.relations.iter().position(|r| r.step.is_some());
        let last = c.relations.iter().rposition(|r| r.step.is_some());
        match (first, last, steps.is_empty()) {
            (None, None, true) => {}
            (Some(s), Some(e), false) => match Segment::from_links(steps) {
                Ok(seg) => {
                    if c.relations[s..=e] != seg.relations[..] || c.chain[s..=e + 1] != seg.panels[..] {
                        fail(format!("relation {s}"), "chain does not match the link sequence");
                    }
                }
                Err(_) => fail("sequence".into(), "link constituents have no hull"),
            },
            _ => fail("sequence".into(), "link steps and tagged relations disagree"),
        }
        let (head, tail) = match first {
            Some(s) => (s, last.expect("both ends exist") + 1),
            None => {
                let split = c.relations.iter().position(|r| r.kind != RelationKind::Contains).unwrap_or(c.relations.len());
                (split, split)
            }
        };
        if c.relations[..head].iter().any(|r| r.kind != RelationKind::Contains || r.step.is_some()) {
            fail("prefix".into(), "expected reductions before the first link");
        }
        if c.relations[tail..].iter().any(|r| r.kind != RelationKind::ContainedIn || r.step.is_some()) {
            fail("suffix".into(), "expected inverse reductions after the last link");
        }
        VerifyReport { ok: failures.is_empty(), failures }
    }
}

pub fn verify_certificate(c: &ConnectCertificate) -> VerifyReport {
    Verifier::new().verify(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PurityIssue {
    pub step: usize,
    pub role: String,
    pub set: PrimGenSet,
}

/// Every distinct constituent set that differs from the primitive points of
/// its own hull, in order of first appearance.
pub fn fano_purity_report(seq: &LinkSequence) -> Vec<PurityIssue> {
    let mut out: Vec<PurityIssue> = Vec::new();
    for (i, link) in seq.steps.iter().enumerate() {
        let roles = [("left", Some(&link.left)), ("middle", link.middle.as_ref()), ("right", Some(&link.right))];
        for (role, x) in roles {
            let Some(x) = x else { continue };
            if !x.set.is_hull_saturated() && !out.iter().any(|o| o.set == x.set) {
                out.push(PurityIssue { step: i, role: role.into(), set: x.set.clone() });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::links::{ell_m, Sign};

    #[test]
    fn connect_nabla0_nabla2() {
        let c = connect(&nabla(0), &nabla(2), PolytopeClass::Canonical).unwrap();
        assert_eq!(c.sequence.steps, vec![ell_m(0, Sign::Plus), ell_m(1, Sign::Plus)]);
        assert!(c.chain.iter().all(|p| p.polytope.satisfies(PolytopeClass::Reflexive)));
        assert!(verify_certificate(&c).ok);
        assert_eq!(c.start(), &nabla(0));
        assert_eq!(c.end(), &nabla(2));
    }

    #[test]
    fn connect_same_polytope() {
        let c = connect(&hexagon(), &hexagon(), PolytopeClass::Canonical).unwrap();
        assert_eq!(c.chain.len(), 1);
        assert!(c.sequence.steps.is_empty());
        assert!(verify_certificate(&c).ok);
    }

    #[test]
    fn tampering_is_localized() {
        let mut c = connect(&nabla(0), &nabla(2), PolytopeClass::Canonical).unwrap();
        let mut moved = c.chain[2].polytope.vertices().to_vec();
        moved.push(crate::zlattice::lv(&[1, -1]));
        c.chain[2].polytope = Polytope::hull(&moved).unwrap();
        let r = verify_certificate(&c);
        assert!(!r.ok);
        assert!(r.failures.iter().any(|f| f.location == "relation 1" || f.location == "relation 2"));
    }

    #[test]
    fn purity_of_2d_families() {
        let seq = LinkSequence::new(vec![ell_m(0, Sign::Plus), ell_m(1, Sign::Plus)], PolytopeClass::Canonical);
        assert!(fano_purity_report(&seq).is_empty());
    }

    #[test]
    fn bfs_examples() {
        let c = bfs_connect(&nabla(0), &nabla(1), PolytopeClass::Terminal, 2, 10_000).unwrap().unwrap();
        assert_eq!(c.sequence.steps, vec![ell_m(0, Sign::Plus)]);
        assert!(verify_certificate(&c).ok);
        let c = bfs_connect(&nabla(0), &nabla(0), PolytopeClass::Any, 2, 10).unwrap().unwrap();
        assert!(c.sequence.steps.is_empty());
    }

    #[test]
    fn certificate_json_roundtrip() {
        let c = connect(&nabla(0), &nabla(2), PolytopeClass::Canonical).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: ConnectCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
