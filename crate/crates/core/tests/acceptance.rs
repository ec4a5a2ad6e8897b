//! Acceptance suite. Prints one line per criterion and exits non-zero when a
//! check fails that is not listed in `UNATTAINABLE`.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use polyweb::fixtures::*;
use polyweb::links::{conjugate, ell_inf, ell_m, validate_link, ElementaryLink, Sign};
use polyweb::pgs::{fiber_structures, is_pgs, mori_fiber_structures, reductions, PrimGenSet};
use polyweb::polytope::{
    classify, mavlyutov_dual, normal_form, primitive_points, MavlyutovDual, Polytope, PolytopeClass,
};
use polyweb::web::obstruction::{
    detour_sequence, fano_route_sequence, relabel, DETOUR_SARKISOV_LABELS, FANO_ROUTE_SARKISOV_LABELS,
};
use polyweb::web::{connect, enumerate_fano, fano_polygons, fano_purity_report, Connector, Verifier};
use polyweb::zlattice::{lv, LatticeVector, UnimodularMap};

/// Checks that cannot pass as stated; see the README.
const UNATTAINABLE: &[&str] = &["3.count", "4a"];

struct Outcome {
    checks: Vec<(&'static str, bool, String)>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { checks: Vec::new() }
    }

    fn check(&mut self, id: &'static str, ok: bool, detail: impl Into<String>) {
        self.checks.push((id, ok, detail.into()));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    fn unexpected(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.1 && !UNATTAINABLE.contains(&c.0)).map(|c| c.0).collect()
    }
}

fn verts(p: &Polytope) -> BTreeSet<LatticeVector> {
    p.vertices().iter().cloned().collect()
}

fn pts(raw: &[[i64; 2]]) -> BTreeSet<LatticeVector> {
    raw.iter().map(|c| lv(c)).collect()
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let nf = |ps: Vec<Polytope>| ps.iter().map(normal_form).collect::<BTreeSet<_>>();
    let terminal: BTreeSet<Polytope> =
        enumerate_fano(3, PolytopeClass::Terminal, true).classes.into_iter().map(|c| c.normal_form).collect();
    let canonical: BTreeSet<Polytope> =
        enumerate_fano(3, PolytopeClass::Canonical, true).classes.into_iter().map(|c| c.normal_form).collect();
    o.check("1.terminal", terminal.len() == 3, format!("{} terminal classes", terminal.len()));
    o.check("1.canonical", canonical.len() == 4, format!("{} canonical classes", canonical.len()));
    o.check(
        "1.forms",
        terminal == nf(vec![nabla_minus_inf(), nabla(0), nabla(1)])
            && canonical == nf(vec![nabla_minus_inf(), nabla(0), nabla(1), nabla(2)]),
        "normal forms match the standard forms",
    );
    o
}

fn all_pairs(polys: &[Polytope], class: PolytopeClass) -> (usize, Vec<String>) {
    let connector = Connector::new(class);
    let verifier = Verifier::new();
    let pairs: Vec<(usize, usize)> = (0..polys.len()).flat_map(|i| (0..polys.len()).map(move |j| (i, j))).collect();
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (p, q) = (&polys[i], &polys[j]);
            let cert = match connector.connect(p, q) {
                Ok(c) => c,
                Err(e) => return Some(format!("pair ({i}, {j}): {e}")),
            };
            if cert.start() != p || cert.end() != q {
                return Some(format!("pair ({i}, {j}): wrong endpoints"));
            }
            let report = verifier.verify(&cert);
            (!report.ok).then(|| format!("pair ({i}, {j}): {:?}", report.failures))
        })
        .collect();
    (pairs.len(), failures)
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    for (id, enum_class, class) in [
        ("2.reflexive", PolytopeClass::Reflexive, PolytopeClass::Canonical),
        ("2.terminal", PolytopeClass::Terminal, PolytopeClass::Terminal),
    ] {
        let polys = fano_polygons(2, enum_class);
        let (n, failures) = all_pairs(&polys, class);
        let detail = match failures.first() {
            None => format!("{} {enum_class} polygons, {n} pairs certified", polys.len()),
            Some(f) => format!("{} of {n} {enum_class} pairs failed, first: {f}", failures.len()),
        };
        o.check(id, failures.is_empty(), detail);
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let s = gen_s();
    let target = nabla_minus_inf().transform(&s);
    let cert = match connect(&nabla_minus_inf(), &target, PolytopeClass::Terminal) {
        Ok(c) => c,
        Err(e) => {
            o.check("3.connect", false, e.to_string());
            return o;
        }
    };
    let figure = [
        pts(&[[1, 0], [0, 1], [-1, -1]]),
        pts(&[[1, 0], [0, 1], [-1, 0], [-1, -1]]),
        pts(&[[1, 0], [0, 1], [-1, 0], [-1, -1]]),
        pts(&[[1, 0], [0, 1], [-1, 0], [-1, -1], [0, -1]]),
        pts(&[[1, 0], [0, 1], [-1, 0], [0, -1]]),
        pts(&[[1, 0], [0, 1], [-1, 0], [0, -1], [1, -1]]),
        pts(&[[1, 0], [0, 1], [-1, 0], [1, -1]]),
        pts(&[[1, 0], [0, 1], [-1, 0], [1, -1]]),
        pts(&[[0, 1], [-1, 0], [1, -1]]),
    ];
    let chain: Vec<BTreeSet<LatticeVector>> = cert.chain.iter().map(|p| verts(&p.polytope)).collect();
    o.check("3.count", chain.len() == 8, format!("chain has {} polytopes, 8 required", chain.len()));
    o.check("3.panels", chain == figure, "panels match the nine expected vertex sets");
    let u = gen_u();
    let word: Vec<ElementaryLink> = vec![
        ell_inf(Sign::Plus),
        ell_m(0, Sign::Minus),
        conjugate(&u, &ell_m(0, Sign::Plus)),
        conjugate(&u, &ell_inf(Sign::Minus)),
    ];
    o.check("3.word", cert.sequence.steps == word, "link word (Uℓ₋∞⁻U⁻¹)(Uℓ₀⁺U⁻¹)ℓ₀⁻ℓ₋∞⁺");
    let mfp: Vec<usize> = cert.chain.iter().enumerate().filter(|(_, p)| p.mori).map(|(i, _)| i + 1).collect();
    o.check("3.mfp", mfp == [1, 3, 5, 7, 9], format!("Mfp markers on panels {mfp:?}"));
    o.check("3.verify", Verifier::new().verify(&cert).ok, "certificate verifies");
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let labelled = [
        relabel(&detour_sequence(), &DETOUR_SARKISOV_LABELS),
        relabel(&fano_route_sequence(), &FANO_ROUTE_SARKISOV_LABELS),
    ];
    let rejected: Vec<String> = labelled
        .iter()
        .flat_map(|seq| seq.steps.iter())
        .filter(|l| !validate_link(l).valid)
        .map(|l| l.kind.to_string())
        .collect();
    o.check(
        "4a",
        rejected.is_empty(),
        format!("with Sarkisov labels I_d/II_ni and II_ni/I_d, rejected steps: {rejected:?}"),
    );
    let structural = [detour_sequence(), fano_route_sequence()]
        .iter()
        .all(|seq| seq.broken_joint().is_none() && seq.steps.iter().all(|l| validate_link(l).valid));
    o.check("4a.structural", structural, "both diagrams validate as I_m/II_ni and II_ni/I_m");

    let flagged: BTreeSet<PrimGenSet> = fano_purity_report(&detour_sequence()).into_iter().map(|i| i.set).collect();
    let expected: BTreeSet<PrimGenSet> = [&[1, 2, 3, 5, 7][..], &[1, 2, 3, 5, 6, 7]]
        .iter()
        .map(|ix| PrimGenSet::new(3, obstruction_set(ix)).unwrap())
        .collect();
    o.check(
        "4b",
        flagged == expected && fano_purity_report(&fano_route_sequence()).is_empty(),
        "purity flags exactly A_12357 and A_123567",
    );
    let v = obstruction_vectors();
    let hull = Polytope::hull(&obstruction_set(&[1, 2, 3, 5, 7])).unwrap();
    o.check("4c", hull.contains(&v[3]) && !hull.contains(&v[5]), "v4 in hull(A_12357), v6 not");
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let polys = |l: &ElementaryLink| l.constituents().map(|f| f.hull().unwrap()).collect::<Vec<_>>();
    let all_in = |m: i64, class: PolytopeClass| {
        [Sign::Plus, Sign::Minus].iter().all(|&s| polys(&ell_m(m, s)).iter().all(|p| p.satisfies(class)))
    };
    o.check("5.l0", all_in(0, PolytopeClass::Terminal), "ℓ₀± terminal");
    o.check("5.l1", all_in(1, PolytopeClass::Canonical), "ℓ₁± canonical");
    let middle = ell_m(2, Sign::Plus).middle.unwrap().hull().unwrap();
    o.check("5.l2", !middle.satisfies(PolytopeClass::Canonical), "middle of ℓ₂⁺ not canonical");
    o
}

fn obstruction_polytopes() -> Vec<Polytope> {
    [&[1, 2, 3, 4, 5, 7][..], &[1, 2, 3, 4, 5, 6, 7], &[1, 2, 3, 4, 5, 6], &[1, 2, 3, 5, 6], &[1, 2, 3, 5, 7], &[
        1, 2, 3, 5, 6, 7,
    ]]
    .iter()
    .map(|ix| Polytope::hull(&obstruction_set(ix)).unwrap())
    .collect()
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();

    let reflexive = fano_polygons(3, PolytopeClass::Reflexive);
    let involution = reflexive.par_iter().all(|p| match mavlyutov_dual(p) {
        Ok(MavlyutovDual::Full(q)) => {
            q.satisfies(PolytopeClass::Reflexive) && matches!(mavlyutov_dual(&q), Ok(MavlyutovDual::Full(r)) if r == *p)
        }
        _ => false,
    });
    o.check("6.duality", involution, format!("duality is an involution on {} reflexive polygons", reflexive.len()));

    let mut everything = fano_polygons(2, PolytopeClass::Fano);
    everything.extend(obstruction_polytopes());
    let chain = everything.par_iter().all(|p| classify(p).implication_chain_holds());
    o.check("6.chain", chain, format!("implication chain on {} polytopes", everything.len()));

    let mut fixtures = vec![nabla_minus_inf(), nabla(0), nabla(1), nabla(2), hexagon()];
    fixtures.extend(obstruction_polytopes());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut orbit_ok = true;
    for p in &fixtures {
        let nf = normal_form(p);
        for _ in 0..20 {
            let g = UnimodularMap::random(p.dim(), &mut rng, 10);
            orbit_ok &= normal_form(&p.transform(&g)) == nf;
        }
    }
    o.check("6.orbit", orbit_ok, format!("normal form invariant under 20 maps on {} fixtures", fixtures.len()));

    let counts = reductions(&pgs_of(&nabla(1))).len() == 1
        && reductions(&pgs_of(&nabla_minus_inf())).is_empty()
        && mori_fiber_structures(&pgs_of(&nabla(2))).len() == 1
        && mori_fiber_structures(&pgs_of(&nabla(0))).len() == 2
        && mori_fiber_structures(&pgs_of(&nabla_minus_inf())).len() == 1
        && mori_fiber_structures(&pgs_of(&nabla(1))).len() == 1;
    o.check("6.counts", counts, "reduction and fiber structure counts");

    let bases_ok = everything.par_iter().all(|p| {
        let a = primitive_points(p).unwrap();
        fiber_structures(&a).iter().all(|f| is_pgs(f.base.dim(), f.base.points()).is_valid())
    });
    o.check("6.base", bases_ok, "every base of a fiber structure is a PGS");
    o
}

/// Hulls of all vertex subsets of size 3 to 6, deduplicated by normal form.
/// Reflexive polygons have at most six vertices.
fn reflexive_classes_brute_force(bound: i64) -> usize {
    let mut pool: Vec<LatticeVector> = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            if num_integer::gcd(x, y) == 1 {
                pool.push(lv(&[x, y]));
            }
        }
    }
    fn rec(pool: &[LatticeVector], start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() >= 3 {
            out.push(cur.clone());
        }
        if cur.len() == 6 {
            return;
        }
        for i in start..pool.len() {
            cur.push(i);
            rec(pool, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut subsets = Vec::new();
    rec(&pool, 0, &mut Vec::new(), &mut subsets);
    let classes: BTreeSet<Polytope> = subsets
        .par_iter()
        .filter_map(|s| {
            let v: Vec<LatticeVector> = s.iter().map(|&i| pool[i].clone()).collect();
            let p = Polytope::hull(&v).ok()?;
            (p.vertices().len() == v.len() && p.satisfies(PolytopeClass::Reflexive)).then(|| normal_form(&p))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    classes.len()
}

const REFLEXIVE_CLASSES_BOX_3: usize = 16;

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let census = enumerate_fano(3, PolytopeClass::Reflexive, false).classes.len();
    let oracle = reflexive_classes_brute_force(3);
    o.check("7.oracle", oracle == REFLEXIVE_CLASSES_BOX_3, format!("brute force finds {oracle} classes"));
    o.check("7.census", census == REFLEXIVE_CLASSES_BOX_3, format!("enumeration finds {census} classes"));
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("standard-form classification", criterion_1),
        ("all pairs certified in box 2", criterion_2),
        ("Cremona chain", criterion_3),
        ("3D obstruction fixtures", criterion_4),
        ("link family classes", criterion_5),
        ("property suites", criterion_6),
        ("reflexive class count", criterion_7),
    ];
    let mut unexpected = Vec::new();
    for (n, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let verdict = if out.passed() { "PASS" } else { "FAIL" };
        let failed: Vec<String> =
            out.checks.iter().filter(|c| !c.1).map(|c| format!("{}: {}", c.0, c.2)).collect();
        let summary = if failed.is_empty() {
            out.checks.iter().map(|c| c.2.as_str()).collect::<Vec<_>>().join("; ")
        } else {
            failed.join("; ")
        };
        println!("criterion {}: {verdict} [{name}, {:.1}s] {summary}", n + 1, t.elapsed().as_secs_f64());
        unexpected.extend(out.unexpected());
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
