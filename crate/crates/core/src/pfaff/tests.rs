use std::sync::Arc;

use num_complex::{Complex, Complex64};

use super::*;
use crate::dga::{parse_element, Algebra, DgaElement, DgaMatrix, Generator};
use crate::geom::ChernRootModel;
use crate::qmod::LatticeOrdering;
use crate::scalar::{rational, GaussianPi, PiScalar, Rational, Scalar};

fn gaussian_tau(re: (i64, i64), im: (i64, i64)) -> GaussianPi {
    GaussianPi::from_gaussian(&Complex::new(rational(re.0, re.1), rational(im.0, im.1)))
}

fn symbols() -> Arc<Algebra> {
    Algebra::builder(8)
        .generators(["a", "c", "e", "f"].map(|n| Generator::new(n, 0)))
        .build()
        .unwrap()
}

fn el(alg: &Arc<Algebra>, s: &str) -> DgaElement<Rational> {
    parse_element(alg, s).unwrap()
}

#[test]
fn small_pfaffians() {
    let alg = symbols();
    let a = el(&alg, "a");
    let m = DgaMatrix::from_rows(&alg, vec![vec![DgaElement::zero(&alg), a.clone()], vec![a.neg_elem(), DgaElement::zero(&alg)]]).unwrap();
    let two = SkewMatrix::new(m.clone()).unwrap();
    assert_eq!(pfaffian(&two), a);
    let c = el(&alg, "c");
    let mc = DgaMatrix::from_rows(&alg, vec![vec![DgaElement::zero(&alg), c.clone()], vec![c.neg_elem(), DgaElement::zero(&alg)]]).unwrap();
    let diag = SkewMatrix::new(m.block_diagonal(&mc).unwrap()).unwrap();
    assert_eq!(pfaffian(&diag), &a * &c);
}

#[test]
fn off_diagonal_block_formula() {
    let alg = symbols();
    let rows: Vec<Vec<DgaElement<Rational>>> = [[2, -1, 3], [0, 5, 1], [4, 1, -2]]
        .iter()
        .map(|r| r.iter().map(|&x| DgaElement::constant(&alg, rational(x, 1))).collect())
        .collect();
    let a = DgaMatrix::from_rows(&alg, rows).unwrap();
    let m = SkewMatrix::from_off_diagonal(&a).unwrap();
    assert_eq!(pfaffian(&m), a.det().unwrap().neg_elem());
}

#[test]
fn rejects_bad_input() {
    let alg = symbols();
    let odd = DgaMatrix::<Rational>::zeros(&alg, 3);
    assert_eq!(SkewMatrix::new(odd), Err(PfaffError::OddSize(3)));
    let mut not_skew = DgaMatrix::<Rational>::zeros(&alg, 2);
    not_skew.set(0, 1, el(&alg, "a"));
    assert_eq!(SkewMatrix::new(not_skew), Err(PfaffError::NotSkew));
}

#[test]
fn elimination_matches_expansion_on_symbolic_entries() {
    // size 10 goes through elimination; the direct-sum structure gives the answer
    let alg = symbols();
    let pieces = ["1 + a", "2 + c", "3", "1 + e + f", "5 + a·c"];
    let mut m = DgaMatrix::zeros(&alg, 0);
    let mut expected = DgaElement::one(&alg);
    for p in pieces {
        let x = el(&alg, p);
        let block = DgaMatrix::from_rows(&alg, vec![vec![DgaElement::zero(&alg), x.clone()], vec![x.neg_elem(), DgaElement::zero(&alg)]]).unwrap();
        m = m.block_diagonal(&block).unwrap();
        expected = &expected * &x;
    }
    let pf = pfaffian(&SkewMatrix::new(m.clone()).unwrap());
    assert_eq!(pf, expected);
    assert_eq!(&pf * &pf, m.det().unwrap());
}

#[test]
fn block_routes_agree_exactly() {
    let tau = gaussian_tau((0, 1), (2, 1));
    for r in 0..=3 {
        let model = ChernRootModel::new(r, 12).unwrap();
        let expansion = BlockExpansion::<GaussianPi>::new(&model).unwrap();
        for (n, m) in [(1, 0), (0, -1), (2, -3), (-1, -1)] {
            let idx = BlockIndex::new(n, m).unwrap();
            let pf = block_norm_pfaffian(idx, &model, &tau).unwrap();
            assert_eq!(pf, block_norm_determinant(idx, &model, &tau).unwrap(), "r={r} ({n},{m})");
            assert_eq!(pf, expansion.at(idx, &tau).unwrap(), "r={r} ({n},{m})");
        }
    }
    assert!(BlockIndex::new(-1, 0).is_err());
    assert!(BlockIndex::new(0, 1).is_err());
}

#[test]
fn zero_curvature_block_is_one() {
    let model = ChernRootModel::new(0, 8).unwrap();
    let tau = gaussian_tau((0, 1), (2, 1));
    let v = block_norm_pfaffian(BlockIndex::new(1, 0).unwrap(), &model, &tau).unwrap();
    assert_eq!(v, DgaElement::one(model.algebra()));
}

#[test]
fn block_matches_trace_log_oracle() {
    // log det(I + bR/lambda) = sum_k (-1)^{k+1} tr((bR/lambda)^k) / k, odd powers trace to 0
    let model = ChernRootModel::new(1, 12).unwrap();
    let tau = gaussian_tau((1, 3), (2, 1));
    let idx = BlockIndex::new(2, -1).unwrap();
    let inv = idx.eigenvalue(&tau).try_inverse().unwrap();
    let x = model.curvature::<GaussianPi>().scale(&model.bott::<GaussianPi>().scale(&inv));
    let mut log = DgaElement::zero(model.algebra());
    for k in 1..=6u32 {
        let c = GaussianPi::from_rational(&rational(if k % 2 == 1 { 1 } else { -1 }, k as i64));
        log = &log + &x.pow(k).trace().scale(&c);
    }
    let v = block_norm_pfaffian(idx, &model, &tau).unwrap();
    assert_eq!(v, log.exp_nilpotent().unwrap());
    // closed form per root: 1 - b^2 x^2 / omega^2
    let omega_sq_inv = idx.omega(&tau).mul_ref(&idx.omega(&tau)).try_inverse().unwrap();
    let closed = &DgaElement::one(model.algebra()) - &parse_element(model.algebra(), "b^2·x1^2").unwrap().map_scalars(GaussianPi::from_rational).scale(&omega_sq_inv);
    assert_eq!(v, closed);
}

#[test]
fn product_is_exponential_of_partial_sums() {
    let tau = gaussian_tau((0, 1), (2, 1));
    for r in 1..=2 {
        for bound in 1..=3 {
            let model = ChernRootModel::new(r, 8).unwrap();
            for ord in [
                LatticeOrdering::SymmetricShells { max_norm: bound },
                LatticeOrdering::PaperZ2Plus { shell_bound: bound },
                LatticeOrdering::RowMajor { m_range: bound, n_range: bound + 1 },
            ] {
                let prod = regularized_product(&model, &ord, &tau).unwrap();
                assert_eq!(prod, lattice_exponential(&model, &ord, &tau).unwrap(), "r={r} {ord:?}");
            }
        }
    }
}

#[test]
fn same_index_set_same_product() {
    let tau = gaussian_tau((1, 5), (3, 2));
    let model = ChernRootModel::new(2, 8).unwrap();
    let a = regularized_product(&model, &LatticeOrdering::SymmetricShells { max_norm: 3 }, &tau).unwrap();
    let b = regularized_product(&model, &LatticeOrdering::PaperZ2Plus { shell_bound: 3 }, &tau).unwrap();
    let c = regularized_product(&model, &LatticeOrdering::RowMajor { m_range: 3, n_range: 3 }, &tau).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    let mut sa = block_indices(&LatticeOrdering::SymmetricShells { max_norm: 3 });
    let mut sb = block_indices(&LatticeOrdering::PaperZ2Plus { shell_bound: 3 });
    sa.sort();
    sb.sort();
    assert_eq!(sa, sb);
    assert_eq!(sa.len(), 24);
}

#[test]
fn literal_product_matches_fast_product() {
    let tau = gaussian_tau((0, 1), (2, 1));
    let model = ChernRootModel::new(2, 8).unwrap();
    let ord = LatticeOrdering::SymmetricShells { max_norm: 2 };
    let mut literal = DgaElement::one(model.algebra());
    for idx in block_indices(&ord) {
        literal = &literal * &block_norm_pfaffian(idx, &model, &tau).unwrap();
    }
    assert_eq!(literal, regularized_product(&model, &ord, &tau).unwrap());
}

#[test]
fn empty_index_set_gives_one() {
    let model = ChernRootModel::new(1, 4).unwrap();
    let tau = gaussian_tau((0, 1), (1, 1));
    let ord = LatticeOrdering::RowMajor { m_range: 0, n_range: 0 };
    assert!(block_indices(&ord).is_empty());
    assert_eq!(regularized_product(&model, &ord, &tau).unwrap(), DgaElement::one(model.algebra()));
}

#[test]
fn lower_half_plane_is_rejected() {
    let model = ChernRootModel::new(1, 4).unwrap();
    let ord = LatticeOrdering::SymmetricShells { max_norm: 1 };
    assert!(regularized_product(&model, &ord, &Complex64::new(0.0, -1.0)).is_err());
}

/// Taylor coefficients of `(z/2)/sinh(z/2)` in `z^2`, from the series of
/// `sinh(z/2)/(z/2) = sum (z/2)^{2j} / (2j+1)!` inverted term by term.
fn a_hat_taylor(terms: usize) -> Vec<Rational> {
    let mut s = Vec::new();
    let mut fact = Rational::from_integer(1.into());
    for j in 0..terms {
        if j > 0 {
            fact *= rational(((2 * j) * (2 * j + 1)) as i64, 1);
        }
        s.push(Rational::from_integer(1.into()) / (&fact * rational(4i64.pow(j as u32), 1)));
    }
    let mut inv = vec![Rational::from_integer(1.into())];
    for n in 1..terms {
        let mut acc = Rational::from_integer(0.into());
        for k in 1..=n {
            acc -= &s[k] * &inv[n - k];
        }
        inv.push(acc);
    }
    inv
}

#[test]
fn a_hat_limit_matches_taylor_oracle() {
    let coeffs = a_hat_taylor(4);
    assert_eq!(coeffs[1], rational(-1, 24));
    assert_eq!(coeffs[2], rational(7, 5760));
    let model = ChernRootModel::new(1, 12).unwrap();
    let limit = a_hat_limit::<GaussianPi>(&model).unwrap();
    for (j, c) in coeffs.iter().enumerate() {
        let got = limit.coefficient(&[("x1", 2 * j as i32)]).unwrap();
        assert_eq!(got, GaussianPi::from_rational(c), "x^{}", 2 * j);
    }
    // two roots: the class is multiplicative
    let m2 = ChernRootModel::new(2, 8).unwrap();
    let l2 = a_hat_limit::<GaussianPi>(&m2).unwrap();
    let got = l2.coefficient(&[("x1", 2), ("x2", 2)]).unwrap();
    assert_eq!(got, GaussianPi::from_rational(&(&coeffs[1] * &coeffs[1])));
}

#[test]
fn a_hat_mode_factor_matches_product() {
    let model = ChernRootModel::new(2, 8).unwrap();
    let mut literal = DgaElement::one(model.algebra());
    for n in 1..=5 {
        literal = &literal * &a_hat_mode_factor::<GaussianPi>(&model, n).unwrap();
    }
    assert_eq!(literal, a_hat_product::<GaussianPi>(&model, 5).unwrap());
}

#[test]
fn a_hat_product_converges() {
    let model = ChernRootModel::new(1, 8).unwrap();
    let prod = a_hat_product::<Complex64>(&model, 100_000).unwrap();
    let c = prod.coefficient(&[("x1", 2)]).unwrap();
    assert!((c.re + 1.0 / 24.0).abs() < 1e-5, "{c}");
    let c4 = prod.coefficient(&[("x1", 4)]).unwrap();
    assert!((c4.re - 7.0 / 5760.0).abs() < 1e-5, "{c4}");
}

#[test]
fn zeta_values() {
    let z2 = zeta_even::<Complex64>(1);
    assert!((z2.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
    let z4 = zeta_even::<GaussianPi>(2);
    assert_eq!(z4, GaussianPi::from_rational(&rational(1, 90)).mul_ref(&crate::scalar::pow(&GaussianPi::pi(), 4)));
}

#[test]
fn ordering_shift_at_i() {
    let report = measure_ordering_shift(Complex64::new(0.0, 1.0), 60).unwrap();
    assert!((report.holomorphic_e2[0] - std::f64::consts::PI).abs() < 1e-6);
    // squares sum to zero at tau = i by the rotation symmetry
    let square = &report.rows[0];
    assert!(square.e2_from_product[0].abs() < 1e-9, "{:?}", square);
    assert!((square.shift[0] - square.predicted_shift[0]).abs() < 1e-9);
    // a rectangle of aspect 1/64 misses only a sliver of each row
    let long = &report.rows[3];
    assert!((long.shift[0] - long.predicted_shift[0]).abs() < 1e-3, "{:?}", long);
    assert!(long.shift[0].abs() < 0.07);
}
