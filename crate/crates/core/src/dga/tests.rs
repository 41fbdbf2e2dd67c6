use std::sync::Arc;

use super::*;
use crate::scalar::{rational, Rational};

fn string_algebra(truncation: u32) -> Arc<Algebra> {
    Algebra::builder(truncation)
        .generator(Generator::new("H", 3))
        .generator(Generator::new("p1", 4))
        .generator(Generator::new("p2", 8))
        .generator(Generator::invertible("b", -2))
        .generator(Generator::new("u", 0))
        .generator(Generator::new("a", 1))
        .generator(Generator::new("c", 1))
        .differential("H", "p1")
        .build()
        .unwrap()
}

fn el(alg: &Arc<Algebra>, s: &str) -> DgaElement<Rational> {
    parse_element(alg, s).unwrap()
}

#[test]
fn odd_square_and_koszul_rule() {
    let alg = string_algebra(12);
    let h = el(&alg, "H");
    assert!((&h * &h).is_zero());
    let a = el(&alg, "a");
    let c = el(&alg, "c");
    assert!((&(&a * &c) + &(&c * &a)).is_zero());
    assert_eq!((&c * &a).to_string(), "-a·c");
}

#[test]
fn truncation_drops_high_degrees() {
    let alg = string_algebra(4);
    let x = &el(&alg, "1 + p1") * &el(&alg, "1 - p1");
    assert_eq!(x, el(&alg, "1"));
}

#[test]
fn differential_examples() {
    let alg = string_algebra(12);
    assert_eq!(el(&alg, "H").differential(), el(&alg, "p1"));
    assert!(el(&alg, "p1").differential().is_zero());
    assert_eq!(el(&alg, "H·p1").differential(), el(&alg, "p1^2"));
    let small = string_algebra(7);
    assert!(el(&small, "H·p1").differential().is_zero());
}

#[test]
fn exp_examples() {
    let alg = Algebra::builder(8)
        .generator(Generator::new("p1", 4))
        .generator(Generator::invertible("b", -2))
        .generator(Generator::new("E2", 0))
        .build()
        .unwrap();
    assert_eq!(DgaElement::<Rational>::zero(&alg).exp_nilpotent().unwrap(), el(&alg, "1"));
    let a = el(&alg, "p1·b^2·E2");
    let e = a.exp_nilpotent().unwrap();
    assert_eq!(e, el(&alg, "1 + p1·b^2·E2 + (1/2)·p1^2·b^4·E2^2"));
    assert_eq!(e.log_unital().unwrap(), a);
    assert_eq!(el(&alg, "1 + E2").exp_nilpotent(), Err(DgaError::NotNilpotent));
    assert_eq!(el(&alg, "2 + p1").log_unital(), Err(DgaError::NotUnital));
}

#[test]
fn divide_exact_examples() {
    let alg = string_algebra(8);
    let p1 = el(&alg, "p1");
    let z = el(&alg, "p1·u").neg_elem();
    let num = &el(&alg, "1") - &z.exp_nilpotent().unwrap();
    assert_eq!(num.divide_exact(&p1).unwrap(), el(&alg, "u - (1/2)·p1·u^2"));
    assert_eq!(p1.divide_exact(&p1).unwrap(), el(&alg, "1"));
    assert!(matches!(el(&alg, "H").divide_exact(&p1), Err(DgaError::NotDivisible(_))));
    assert!(matches!(p1.divide_exact(&el(&alg, "p1 + p2")), Err(DgaError::InvalidDivisor(_))));
    assert_eq!(el(&alg, "b^2·p1").divide_exact(&el(&alg, "b^3")).unwrap(), el(&alg, "b^-1·p1"));
}

#[test]
fn impose_relation_examples() {
    let alg = string_algebra(16);
    let p1 = el(&alg, "p1");
    let e = el(&alg, "p1·b^2·u").exp_nilpotent().unwrap();
    assert_eq!(e.impose_relation(&p1).unwrap(), el(&alg, "1"));
    assert_eq!(el(&alg, "1 + p2").impose_relation(&p1).unwrap(), el(&alg, "1 + p2"));
    assert_eq!(el(&alg, "p1·p2 + p2^2").impose_relation(&p1).unwrap(), el(&alg, "p2^2"));
    assert!(matches!(p1.impose_relation(&el(&alg, "H")), Err(DgaError::InvalidRelation(_))));
}

#[test]
fn builder_validation() {
    let bad_degree = Algebra::builder(8)
        .generator(Generator::new("H", 3))
        .generator(Generator::new("p1", 4))
        .generator(Generator::new("x", 2))
        .differential("H", "x")
        .build();
    assert!(matches!(bad_degree, Err(DgaError::DegreeMismatch { .. })));
    let dup = Algebra::builder(8)
        .generator(Generator::new("x", 2))
        .generator(Generator::new("x", 2))
        .build();
    assert_eq!(dup.unwrap_err(), DgaError::DuplicateGenerator("x".into()));
    // d(y) = x with d(x) = z would give d^2 y = z != 0
    let not_square_zero = Algebra::builder(8)
        .generator(Generator::new("y", 1))
        .generator(Generator::new("x", 2))
        .generator(Generator::new("z", 3))
        .differential("y", "x")
        .differential("x", "z")
        .build();
    assert_eq!(not_square_zero.unwrap_err(), DgaError::DSquaredNonzero("y".into()));
}

#[test]
fn inverse_of_unit_plus_nilpotent() {
    let alg = string_algebra(12);
    let x = el(&alg, "2·b + p1");
    let inv = x.try_inverse().unwrap();
    assert_eq!(&x * &inv, el(&alg, "1"));
    assert_eq!(el(&alg, "p1").try_inverse(), Err(DgaError::NotInvertible));
}

#[test]
fn substitution_and_transfer() {
    let alg = string_algebra(12);
    let x = el(&alg, "u^2·p1 + b");
    let img = x.substitute_named(&alg, &[("u", el(&alg, "1 + u"))]).unwrap();
    assert_eq!(img, el(&alg, "p1 + 2·u·p1 + u^2·p1 + b"));
    let big = Algebra::builder(12)
        .generators(alg.generators().iter().cloned())
        .generator(Generator::new("w", 2))
        .differential("H", "p1")
        .build()
        .unwrap();
    let moved = x.transfer(&big).unwrap();
    assert_eq!(moved.to_string(), "b + p1·u^2");
    assert_eq!(moved, el(&big, "u^2·p1 + b"));
    let v = x.evaluate_generators(&[("u", rational(3, 1))]).unwrap();
    assert_eq!(v, el(&alg, "9·p1 + b"));
}

#[test]
fn text_round_trip() {
    let alg = string_algebra(12);
    let x = el(&alg, "1 + (1/2)·p1^2·b^4 - 3*H·a - (2/3)·b^-2");
    let text = x.to_string();
    assert_eq!(parse_element(&alg, &text).unwrap(), x);
    assert!(parse_element(&alg, "1 + q").is_err());
    assert!(parse_element(&alg, "H^2").is_err());
    assert!(parse_element(&alg, "p1^-1").is_err());
}

#[test]
fn algebra_mismatch_is_an_error() {
    let a = string_algebra(12);
    let b = string_algebra(8);
    assert_eq!(el(&a, "p1").checked_add(&el(&b, "p1")), Err(DgaError::AlgebraMismatch));
}
