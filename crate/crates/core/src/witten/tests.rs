use num_complex::Complex;

use super::*;
use crate::dga::{parse_element, DgaElement};
use crate::geom::{ChernRootModel, ManifoldDescriptor, Partition};
use crate::pfaff::{a_hat_limit, partial_power_sums, regularized_product};
use crate::qmod::{eisenstein_q, LatticeOrdering, QSeries};
use crate::scalar::{rational, GaussianPi, PiScalar, Rational, Scalar};

fn descriptor(dim: u32, numbers: &[(&[u32], i64)]) -> ManifoldDescriptor {
    ManifoldDescriptor::new(
        dim,
        numbers.iter().map(|(p, c)| (Partition::new(p.to_vec()).unwrap(), rational(*c, 1))),
    )
    .unwrap()
}

fn same_coefficients(a: &QSeries, b: &QSeries, order: i64) -> bool {
    (0..order).all(|n| a.coeff(n) == b.coeff(n))
}

#[test]
fn point_has_genus_one() {
    let g = witten_genus(&descriptor(0, &[]), 6).unwrap();
    assert_eq!(g.weight(), 0);
    assert_eq!(g.coeff(0), rational(1, 1));
    assert!((1..6).all(|n| g.coeff(n) == rational(0, 1)));
}

#[test]
fn dim_four_genus_is_multiple_of_e2() {
    for n in [24, -48, 3] {
        let g = witten_genus(&descriptor(4, &[(&[1], n)]), 10).unwrap();
        let expected = eisenstein_q(1, 10).unwrap().scale(&rational(-n, 24));
        assert_eq!(g.weight(), 2);
        assert!(same_coefficients(&g, &expected, 10), "p1 = {n}");
    }
}

#[test]
fn dim_eight_string_case_is_modular() {
    let g = witten_genus(&descriptor(8, &[(&[1, 1], 0), (&[2], 1440)]), 10).unwrap();
    let expected = eisenstein_q(2, 10).unwrap().scale(&rational(-1, 1));
    assert!(same_coefficients(&g, &expected, 10));
    let report = string_modularity_check(&descriptor(8, &[(&[1, 1], 0), (&[2], 7)]), 10).unwrap();
    assert_eq!(report.verdict, Verdict::Modular);
    assert_eq!(report.e2_coefficient, "0");
    let report = string_modularity_check(&descriptor(8, &[(&[1, 1], 5), (&[2], 7)]), 10).unwrap();
    assert_eq!(report.verdict, Verdict::QuasiModular);
}

#[test]
fn genus_terms_carry_half_dimension_weight() {
    let d = descriptor(12, &[(&[1, 1, 1], 3), (&[2, 1], -2), (&[3], 5)]);
    let sym = witten_genus_symbolic(&d).unwrap();
    let alg = sym.algebra().clone();
    for (m, _) in sym.terms() {
        assert_eq!(alg.weight_of(m), 6);
    }
    assert_eq!(witten_genus(&d, 8).unwrap().weight(), 6);
}

#[test]
fn genus_is_multiplicative() {
    let x = descriptor(4, &[(&[1], 5)]);
    let y = descriptor(4, &[(&[1], -3)]);
    let prod = x.product(&y).unwrap();
    let gx = witten_genus(&x, 10).unwrap();
    let gy = witten_genus(&y, 10).unwrap();
    let gxy = witten_genus(&prod, 10).unwrap();
    assert!(same_coefficients(&gxy, &gx.mul_series(&gy), 10));
}

#[test]
fn rank_one_class_in_dim_four() {
    let model = ChernRootModel::new(1, 4).unwrap();
    let cls = witten_class(&model, 8).unwrap();
    let m = model.algebra().monomial(&[("b", 2), ("x1", 2)]).unwrap();
    let expected = eisenstein_q(1, 8).unwrap().scale(&rational(-1, 24));
    assert!(same_coefficients(&cls.coefficient_of(&m), &expected, 8));
    assert_eq!(cls.len(), 2);
}

#[test]
fn rank_one_anomaly_in_dim_four() {
    let model = ChernRootModel::new(1, 4).unwrap();
    let sym = anomaly_symbolic(&model).unwrap();
    assert_eq!(sym.delta, parse_element(&sym.algebra, "(1/2)·p1·b^2·u").unwrap());
    assert_eq!(sym.primitive.differential(), sym.delta);
}

#[test]
fn anomaly_is_exact_for_small_models() {
    for (r, dim) in [(0, 8), (1, 4), (1, 8), (2, 8), (2, 12), (3, 12)] {
        let model = ChernRootModel::new(r, dim).unwrap();
        let check = verify_anomaly(&model, 6).unwrap();
        assert!(check.symbolic_holds, "r={r} dim={dim}");
        assert!(check.series_holds, "r={r} dim={dim}");
        assert!(check.vanishes_mod_p1, "r={r} dim={dim}");
    }
}

#[test]
fn anomaly_vanishes_without_u() {
    let model = ChernRootModel::new(2, 8).unwrap();
    let sym = anomaly_symbolic(&model).unwrap();
    let zero = DgaElement::zero(&sym.algebra);
    let killed = sym.delta.substitute_named(&sym.algebra, &[("u", zero)]).unwrap();
    assert!(killed.is_zero());
    assert!(!sym.delta.is_zero());
}

#[test]
fn regularized_product_inverts_to_class_with_lattice_sums() {
    let tau = GaussianPi::from_gaussian(&Complex::new(rational(1, 4), rational(3, 2)));
    for (r, dim) in [(1, 4), (2, 8), (1, 12)] {
        let model = ChernRootModel::new(r, dim).unwrap();
        let ord = LatticeOrdering::SymmetricShells { max_norm: 2 };
        let prod = regularized_product(&model, &ord, &tau).unwrap();
        let sums = partial_power_sums(&ord, &tau, dim / 4).unwrap();
        let cls = witten_class_with_values(&model, &sums).unwrap();
        assert_eq!(prod.try_inverse().unwrap(), cls, "r={r} dim={dim}");
    }
}

#[test]
fn constant_term_is_a_hat() {
    for (r, dim) in [(1, 8), (2, 8), (3, 12)] {
        let model = ChernRootModel::new(r, dim).unwrap();
        let cls = witten_class(&model, 4).unwrap();
        let q0: DgaElement<Rational> = cls.map_scalars(|s| s.coeff(0));
        let q0 = q0.substitute_named(model.algebra(), &[("b", DgaElement::one(model.algebra()))]).unwrap();
        let limit = a_hat_limit::<GaussianPi>(&model).unwrap();
        assert_eq!(q0.map_scalars(GaussianPi::from_rational), limit, "r={r} dim={dim}");
    }
}

#[test]
fn rejects_bad_order() {
    let model = ChernRootModel::new(1, 4).unwrap();
    assert_eq!(witten_class(&model, 0).unwrap_err(), WittenError::InvalidOrder);
}
