use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polyweb::fixtures::*;
use polyweb::links::{conjugate, ell, ell_inf, ell_m, enumerate_links, validate_link, Fibered, LinkMode, Sign};
use polyweb::pgs::{fiber_structures, is_pgs, polytope_reduction, reductions, PrimGenSet};
use polyweb::polytope::{classify, normal_form, primitive_points, Polytope, PolytopeClass};
use polyweb::web::{bfs_connect, connect, fano_polygons, has_mori_fiber_structure, mmp_reduce, verify_certificate};
use polyweb::zlattice::{
    coords_in_basis, primitivize, quotient_projection, saturate_span, smith, LatticeVector, UnimodularMap,
};

fn vector(dim: usize, bound: i64) -> impl Strategy<Value = LatticeVector> {
    prop::collection::vec(-bound..=bound, dim)
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(|c| LatticeVector::from_slice(&c))
}

fn unimodular(dim: usize) -> impl Strategy<Value = UnimodularMap> {
    any::<u64>().prop_map(move |seed| UnimodularMap::random(dim, &mut ChaCha8Rng::seed_from_u64(seed), 8))
}

/// Fano polytopes spanned by random primitive points in a small box.
fn fano(dim: usize) -> impl Strategy<Value = Polytope> {
    prop::collection::vec(vector(dim, 2), dim + 1..dim + 6).prop_filter_map("not Fano", move |pts| {
        let prim: Vec<LatticeVector> = pts.into_iter().filter(|v| v.is_primitive()).collect();
        Polytope::hull(&prim).ok().filter(|p| p.is_fano())
    })
}

fn whole_or_line_fibers(p: &Polytope) -> Vec<Fibered> {
    let a = primitive_points(p).unwrap();
    polyweb::pgs::mori_fiber_structures(&a).into_iter().map(|f| Fibered::new(a.clone(), f.fiber)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn primitivize_ignores_positive_multiples(v in vector(3, 30), k in 1i64..20) {
        prop_assert_eq!(primitivize(&v.scale(k)).unwrap().0, primitivize(&v).unwrap().0);
    }

    #[test]
    fn primitivize_content_is_invariant(v in vector(3, 30), g in unimodular(3)) {
        prop_assert_eq!(primitivize(&g.apply(&v)).unwrap().1, primitivize(&v).unwrap().1);
    }

    #[test]
    fn quotient_projection_kills_the_fiber(vs in prop::collection::vec(vector(3, 6), 1..3)) {
        let basis = saturate_span(&vs).unwrap();
        let q = quotient_projection(&basis, 3).unwrap();
        prop_assert_eq!(q.target_dim(), 3 - basis.len());
        for b in &basis {
            prop_assert!(q.apply(b).unwrap().is_zero());
        }
        if q.target_dim() > 0 {
            let s = smith(&q.matrix, 3).unwrap();
            prop_assert!(s.diag.iter().take(q.target_dim()).all(|&d| d == 1));
        }
    }

    #[test]
    fn facets_are_consistent(p in prop_oneof![fano(2), fano(3)]) {
        for x in p.lattice_points() {
            prop_assert!(p.facets().iter().all(|f| f.slack(&x) >= 0));
        }
        for v in p.vertices() {
            prop_assert!(p.facets().iter().filter(|f| f.slack(v) == 0).count() >= p.dim());
        }
    }

    #[test]
    fn normal_form_is_constant_on_orbits(p in fano(2), g in unimodular(2)) {
        prop_assert_eq!(normal_form(&p.transform(&g)), normal_form(&p));
        prop_assert_eq!(classify(&p.transform(&g)), classify(&p));
    }

    #[test]
    fn implication_chain(p in prop_oneof![fano(2), fano(3)]) {
        prop_assert!(classify(&p).implication_chain_holds());
    }

    #[test]
    fn fiber_structure_invariants(p in prop_oneof![fano(2), fano(3)]) {
        let a = primitive_points(&p).unwrap();
        for f in fiber_structures(&a) {
            prop_assert!(is_pgs(f.base.dim(), f.base.points()).is_valid());
            prop_assert!(a.len() >= f.fiber.len() + f.base.len());
            prop_assert_eq!(a.len() == f.fiber.len() + f.base.len(), f.irreducible);
            for x in a.points() {
                prop_assert_eq!(coords_in_basis(&f.span_basis, x).is_some(), f.fiber.contains(x));
            }
        }
    }

    #[test]
    fn fiber_structures_are_equivariant(p in fano(2), g in unimodular(2)) {
        let a = primitive_points(&p).unwrap();
        let mut here: Vec<Vec<LatticeVector>> = fiber_structures(&a)
            .into_iter()
            .map(|f| { let mut v: Vec<_> = f.fiber.iter().map(|x| g.apply(x)).collect(); v.sort(); v })
            .collect();
        let mut there: Vec<Vec<LatticeVector>> = fiber_structures(&a.transform(&g)).into_iter().map(|f| f.fiber).collect();
        here.sort();
        there.sort();
        prop_assert_eq!(here, there);
    }

    #[test]
    fn reductions_terminate(p in prop_oneof![fano(2), fano(3)]) {
        let mut a = primitive_points(&p).unwrap();
        let limit = a.len() - (a.dim() + 1);
        let mut steps = 0;
        while let Some((_, next)) = reductions(&a).into_iter().next() {
            prop_assert!(is_pgs(next.dim(), next.points()).is_valid());
            a = next;
            steps += 1;
        }
        prop_assert!(steps <= limit);
    }

    #[test]
    fn validation_is_equivariant(m in 0i64..4, plus in any::<bool>(), g in unimodular(2)) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        for l in [ell_m(m, sign), ell_inf(sign), ell(sign)] {
            prop_assert_eq!(validate_link(&conjugate(&g, &l)).valid, validate_link(&l).valid);
        }
    }

    #[test]
    fn mmp_drops_one_point_per_step(p in fano(2)) {
        if let Ok(r) = mmp_reduce(&p, PolytopeClass::Fano) {
            let mut prev = primitive_points(&p).unwrap().len();
            for s in &r.steps {
                let n = primitive_points(&s.result).unwrap().len();
                prop_assert_eq!(n + 1, prev);
                prev = n;
            }
            prop_assert!(r.fibered.is_mori());
        }
    }
}

#[test]
fn canonical_iff_reflexive_in_the_plane() {
    for p in fano_polygons(3, PolytopeClass::Fano) {
        let f = classify(&p);
        assert_eq!(f.canonical, f.reflexive, "{:?}", p.vertices());
    }
}

#[test]
fn minimal_polygons_carry_mori_fiber_structures() {
    for p in fano_polygons(3, PolytopeClass::Fano) {
        let minimal = p.vertices().iter().all(|v| polytope_reduction(&p, v).is_err());
        if minimal {
            assert!(has_mori_fiber_structure(&p), "{:?}", p.vertices());
        }
    }
}

#[test]
fn families_validate_and_invert() {
    for sign in [Sign::Plus, Sign::Minus] {
        let mut links = vec![ell_inf(sign), ell(sign)];
        links.extend((0..=3).map(|m| ell_m(m, sign)));
        for l in links {
            assert!(validate_link(&l).valid, "{}", l.kind);
            assert!(validate_link(&l.inverse()).valid);
            assert_eq!(l.inverse().inverse(), l);
        }
    }
}

#[test]
fn enumerated_links_validate() {
    for p in [nabla_minus_inf(), nabla(0), nabla(1), hexagon()] {
        for from in whole_or_line_fibers(&p) {
            for l in enumerate_links(&from, PolytopeClass::Canonical, 3, LinkMode::Polytope) {
                assert!(validate_link(&l).valid);
                assert_eq!(l.left, from);
            }
        }
    }
}

#[test]
fn certificates_stay_in_class_and_agree_with_bfs() {
    let polys = fano_polygons(2, PolytopeClass::Terminal);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    use rand::Rng;
    for _ in 0..12 {
        let p = &polys[rng.gen_range(0..polys.len())];
        let q = &polys[rng.gen_range(0..polys.len())];
        let c = connect(p, q, PolytopeClass::Terminal).unwrap();
        assert!(verify_certificate(&c).ok);
        assert!(c.chain.iter().all(|x| classify(&x.polytope).terminal));
        assert_eq!((c.start(), c.end()), (p, q));
        if let Some(b) = bfs_connect(p, q, PolytopeClass::Terminal, 2, 5_000).unwrap() {
            assert!(verify_certificate(&b).ok);
            assert_eq!((b.start(), b.end()), (p, q));
        }
    }
}

#[test]
fn empty_pgs_is_valid() {
    assert!(is_pgs(0, &[]).is_valid());
    assert_eq!(PrimGenSet::new(0, vec![]).unwrap(), PrimGenSet::empty());
}
