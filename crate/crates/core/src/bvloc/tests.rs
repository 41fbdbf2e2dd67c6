use super::*;
use crate::scalar::rational;

#[test]
fn calibration_reproduces_frozen_constant() {
    for grid in [8, 64, 512] {
        let c = calibrate(grid).unwrap();
        assert!((c - FIXED_POINT_CONSTANT).abs() < 1e-12, "grid {grid}: {c}");
    }
}

#[test]
fn closedness_examples() {
    for s in [rational(1, 2), rational(1, 1), rational(3, 1)] {
        let inv = s.recip();
        let p = EquivariantSurfaceProblem::new("z", &format!("-({inv})"), s.clone(), 32).unwrap();
        assert_eq!(q_closedness_residual(&p).unwrap(), 0.0);
        let p = EquivariantSurfaceProblem::new("z^2", &format!("-2·({inv})·z"), s.clone(), 32).unwrap();
        assert!(q_closedness_residual(&p).unwrap() < 1e-12);
        let broken = EquivariantSurfaceProblem::new("z", "1", s.clone(), 32).unwrap();
        let r = q_closedness_residual(&broken).unwrap();
        let expected = (1.0 + crate::scalar::rational_to_f64(&s)).abs();
        assert!((r - expected).abs() < 1e-12);
    }
}

#[test]
fn broken_input_is_refused() {
    let p = EquivariantSurfaceProblem::new("z", "1", rational(2, 1), 32).unwrap();
    assert!(matches!(bv_localize(&p), Err(BvlocError::NotClosed { .. })));
}

#[test]
fn zero_form_localizes_to_zero() {
    let p = EquivariantSurfaceProblem::new("0", "0", rational(1, 1), 16).unwrap();
    let r = bv_localize(&p).unwrap();
    assert_eq!((r.lhs, r.rhs, r.residual), (0.0, 0.0, 0.0));
}

#[test]
fn zero_speed_is_degenerate() {
    let p = EquivariantSurfaceProblem::new("z", "0", rational(0, 1), 16).unwrap();
    assert_eq!(bv_localize(&p), Err(BvlocError::FixedPointDegenerate));
    assert_eq!(EquivariantSurfaceProblem::closed("z", rational(0, 1), 16), Err(BvlocError::FixedPointDegenerate));
}

#[test]
fn exponential_family_is_exact() {
    for s in [rational(1, 2), rational(1, 1), rational(2, 1), rational(5, 1)] {
        let base = EquivariantSurfaceProblem::closed("z - 3·z^3 + (1/2)·z^4", s.clone(), 128).unwrap();
        assert!(bv_localize(&base).unwrap().residual < 1e-10);
        for t in [rational(1, 2), rational(1, 1), rational(2, 1)] {
            let r = bv_localize(&base.exponential(t.clone())).unwrap();
            assert!(r.residual < 1e-9, "s={s} t={t}: {r:?}");
        }
    }
}

#[test]
fn doubling_speed_halves_contributions() {
    let a = bv_localize(&EquivariantSurfaceProblem::closed("z^2 + z", rational(1, 1), 64).unwrap()).unwrap();
    let b = bv_localize(&EquivariantSurfaceProblem::closed("z^2 + z", rational(2, 1), 64).unwrap()).unwrap();
    assert!((a.rhs - 2.0 * b.rhs).abs() < 1e-12);
    assert!((a.lhs - 2.0 * b.lhs).abs() < 1e-12);
}

#[test]
fn refinement_shrinks_the_exponential_residual() {
    let base = EquivariantSurfaceProblem::closed("3·z^3", rational(1, 1), 2).unwrap();
    let residuals: Vec<f64> = [4, 8, 16, 32]
        .iter()
        .map(|&grid| {
            let mut p = base.exponential(rational(2, 1));
            p.grid = grid;
            bv_localize(&p).unwrap().residual
        })
        .collect();
    assert!(residuals.windows(2).all(|w| w[1] < w[0] * 0.1), "{residuals:?}");
    assert!(residuals[3] < 1e-9, "{residuals:?}");
}

#[test]
fn problem_json_roundtrip() {
    let text = r#"{"alpha0": "z^2", "g": "-4·z", "s": "1/2", "grid": 64, "t": 2}"#;
    let p = EquivariantSurfaceProblem::from_json(text).unwrap();
    assert_eq!(p.s, rational(1, 2));
    assert_eq!(p.t, Some(rational(2, 1)));
    assert_eq!(EquivariantSurfaceProblem::from_json(&p.to_json()).unwrap(), p);
    assert!(EquivariantSurfaceProblem::from_json(r#"{"alpha0": "w", "g": "0", "s": 1, "grid": 4}"#).is_err());
}

#[test]
fn polynomial_derivative() {
    let p = ZPolynomial::parse("1 + 2·z - (1/3)·z^3").unwrap();
    assert_eq!(p.derivative(), ZPolynomial::parse("2 - z^2").unwrap());
    assert!((p.evaluate(0.5) - (1.0 + 1.0 - 0.125 / 3.0)).abs() < 1e-15);
    assert!(ZPolynomial::parse("5").unwrap().derivative().is_zero());
}
