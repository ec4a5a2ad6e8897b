use serde::de::DeserializeOwned;
use serde::Serialize;

use polyweb::fixtures::*;
use polyweb::links::{ell_m, LinkSequence, Sign};
use polyweb::pgs::{fiber_structures, PrimGenSet};
use polyweb::polytope::{classify, mavlyutov_dual, polar_dual, Polytope, PolytopeClass};
use polyweb::web::{connect, enumerate_fano, mmp_reduce, s_nabla_sequence};

fn roundtrip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(x: &T) {
    let text = serde_json::to_string(x).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, x);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn domain_types_roundtrip() {
    for p in [nabla_minus_inf(), nabla(0), nabla(2), hexagon()] {
        roundtrip(&p);
        roundtrip(&pgs_of(&p));
        roundtrip(&classify(&p));
        roundtrip(&polar_dual(&p).unwrap());
        roundtrip(&mavlyutov_dual(&p).unwrap());
        for f in fiber_structures(&pgs_of(&p)) {
            roundtrip(&f);
        }
    }
    roundtrip(&ell_m(1, Sign::Minus));
    roundtrip(&LinkSequence::new(s_nabla_sequence(2), PolytopeClass::Canonical));
    roundtrip(&connect(&nabla(0), &nabla(2), PolytopeClass::Canonical).unwrap());
    roundtrip(&mmp_reduce(&hexagon(), PolytopeClass::Canonical).unwrap());
    roundtrip(&enumerate_fano(2, PolytopeClass::Terminal, true));
}

#[test]
fn polytope_json_takes_the_hull() {
    let p: Polytope = serde_json::from_str(r#"{"dim":2,"points":[[0,1],[1,0],[0,0],[-1,-1],[0,1]]}"#).unwrap();
    assert_eq!(p, nabla_minus_inf());
    assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"dim":2,"points":[[-1,-1],[1,0],[0,1]]}"#);
    assert!(serde_json::from_str::<Polytope>(r#"{"dim":3,"points":[[1,0],[0,1],[-1,-1]]}"#).is_err());
    assert!(serde_json::from_str::<Polytope>(r#"{"dim":2,"points":[[1,0],[2,0]]}"#).is_err());
}

#[test]
fn pgs_json_is_tagged_and_validated() {
    let a = pgs_of(&nabla(1));
    let text = serde_json::to_string(&a).unwrap();
    assert!(text.starts_with(r#"{"as":"pgs","dim":2,"#), "{text}");
    assert!(serde_json::from_str::<PrimGenSet>(r#"{"as":"pgs","dim":2,"points":[[1,0],[0,1]]}"#).is_err());
    assert!(serde_json::from_str::<PrimGenSet>(r#"{"as":"pgs","dim":2,"points":[[2,0],[0,1],[-1,-1]]}"#).is_err());
    assert!(serde_json::from_str::<PrimGenSet>(r#"{"dim":2,"points":[[1,0],[0,1],[-1,-1]]}"#).is_err());
    let b: PrimGenSet = serde_json::from_str(r#"{"as":"pgs","dim":2,"points":[[0,1],[-1,-1],[1,0]]}"#).unwrap();
    assert_eq!(b, pgs_of(&nabla_minus_inf()));
}
