//! One line per acceptance criterion, each at its stated tolerance and
//! time budget. Runs as a plain binary so the lines reach the terminal.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use witten_core::bvloc::{bv_localize, calibrate, calibration_problem, EquivariantSurfaceProblem, FIXED_POINT_CONSTANT};
use witten_core::dga::{Algebra, DgaElement, DgaMatrix};
use witten_core::geom::{ChernRootModel, ManifoldDescriptor, Partition};
use witten_core::pfaff::{a_hat_limit, a_hat_product, lattice_exponential, partial_power_sums, pfaffian, regularized_product, SkewMatrix};
use witten_core::qmod::{eisenstein_lattice, eisenstein_q, transform_residual, two_zeta_even, GammaElement, LatticeOrdering, OrderingKind};
use witten_core::scalar::rational;
use witten_core::witten::{string_modularity_check, verify_anomaly, witten_class, witten_genus, Verdict};
use witten_core::{GaussianPi, PiScalar, Rational, Scalar};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64())
}

fn gaussian_tau(re: (i64, i64), im: (i64, i64)) -> GaussianPi {
    GaussianPi::from_gaussian(&num_complex::Complex::new(rational(re.0, re.1), rational(im.0, im.1)))
}

fn eisenstein_consistency() -> Outcome {
    let mut worst_err: f64 = 0.0;
    let mut worst_time: f64 = 0.0;
    for k in 2..=4u32 {
        for tau in [Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0)] {
            let ((lattice, series), secs) = timed(|| {
                let ordering = OrderingKind::default_for(k).with_bound(2000);
                let lattice = eisenstein_lattice(k, tau, &ordering).unwrap() / two_zeta_even(k);
                let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
                (lattice, eisenstein_q(k, 30).unwrap().evaluate(q))
            });
            worst_err = worst_err.max((lattice - series).norm());
            worst_time = worst_time.max(secs);
        }
    }
    outcome(
        worst_err < 1e-6 && worst_time < 10.0,
        format!("max |lattice/2zeta - series| = {worst_err:.2e} (< 1e-6), slowest case {worst_time:.2}s (< 10s)"),
    )
}

fn e2_anomaly() -> Outcome {
    let mut worst: f64 = 0.0;
    for gamma in [GammaElement::T, GammaElement::S] {
        for tau in [Complex64::new(0.0, 1.0), Complex64::new(1.0 / 3.0, 2.0)] {
            worst = worst.max(transform_residual(1, gamma, tau, 4000).unwrap().norm());
        }
    }
    let rows = eisenstein_lattice(1, Complex64::new(0.0, 1.0), &LatticeOrdering::RowMajor { m_range: 4000, n_range: 4000 }).unwrap();
    let pi_err = (rows - PI).norm();
    outcome(
        worst < 1e-4 && pi_err < 1e-4,
        format!("max transform residual {worst:.2e} (< 1e-4) at bound 4000, |E2_lat(i) - pi| = {pi_err:.2e} (< 1e-4)"),
    )
}

fn random_rational(rng: &mut StdRng) -> Rational {
    rational(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

fn pfaffian_laws() -> Outcome {
    let alg: Arc<Algebra> = Algebra::builder(0).build().unwrap();
    let mut rng = StdRng::seed_from_u64(20240611);
    let ((square_ok, block_ok), secs) = timed(|| {
        let (mut square_ok, mut block_ok) = (0, 0);
        for i in 0..100 {
            let d = 1 + i % 4;
            let n = 2 * d;
            let mut upper = vec![vec![Rational::from_integer(0.into()); n]; n];
            for (r, row) in upper.iter_mut().enumerate() {
                for x in row.iter_mut().skip(r + 1) {
                    *x = random_rational(&mut rng);
                }
            }
            let m = DgaMatrix::from_fn(&alg, n, |r, c| {
                let v = match r.cmp(&c) {
                    std::cmp::Ordering::Less => upper[r][c].clone(),
                    std::cmp::Ordering::Greater => -upper[c][r].clone(),
                    std::cmp::Ordering::Equal => Rational::from_integer(0.into()),
                };
                DgaElement::constant(&alg, v)
            });
            let skew = SkewMatrix::new(m).unwrap();
            let pf = pfaffian(&skew);
            if &pf * &pf == skew.matrix().det().unwrap() {
                square_ok += 1;
            }
            let a_entries: Vec<Rational> = (0..d * d).map(|_| random_rational(&mut rng)).collect();
            let a = DgaMatrix::from_fn(&alg, d, |r, c| DgaElement::constant(&alg, a_entries[r * d + c].clone()));
            let block = SkewMatrix::from_off_diagonal(&a).unwrap();
            let sign = if (d * (d - 1) / 2) % 2 == 1 { rational(-1, 1) } else { rational(1, 1) };
            if pfaffian(&block) == a.det().unwrap().scale(&sign) {
                block_ok += 1;
            }
        }
        (square_ok, block_ok)
    });
    outcome(
        square_ok == 100 && block_ok == 100 && secs < 5.0,
        format!("Pf^2 = det on {square_ok}/100, block formula on {block_ok}/100, sizes 2-8, {secs:.2}s (< 5s)"),
    )
}

fn product_truncation_identity() -> Outcome {
    let tau = gaussian_tau((1, 5), (3, 2));
    let mut exact_ok = 0;
    let mut exact_total = 0;
    for r in 0..=2 {
        for bound in 1..=3 {
            let model = ChernRootModel::new(r, 8).unwrap();
            for ord in [
                LatticeOrdering::SymmetricShells { max_norm: bound },
                LatticeOrdering::PaperZ2Plus { shell_bound: bound },
            ] {
                exact_total += 1;
                if regularized_product(&model, &ord, &tau).unwrap() == lattice_exponential(&model, &ord, &tau).unwrap() {
                    exact_ok += 1;
                }
            }
        }
    }
    let model = ChernRootModel::new(1, 4).unwrap();
    let ord = LatticeOrdering::SymmetricShells { max_norm: 2000 };
    let tau = Complex64::new(0.0, 2.0);
    let ((coef, partial), secs) = timed(|| {
        let prod = regularized_product(&model, &ord, &tau).unwrap();
        let coef = prod.coefficient(&[("b", 2), ("x1", 2)]).unwrap();
        (coef, partial_power_sums(&ord, &tau, 1).unwrap()[0])
    });
    let err = (coef + partial * 0.5).norm();
    outcome(
        exact_ok == exact_total && err < 1e-4,
        format!(
            "exact equality {exact_ok}/{exact_total} (r <= 2, shells <= 3); b^2 coefficient vs -P2/2 at bound 2000: {err:.2e} (< 1e-4), {secs:.2}s"
        ),
    )
}

fn anomaly_cocycle() -> Outcome {
    let (result, secs) = timed(|| {
        let (mut ok, mut total) = (0, 0);
        let mut failures = Vec::new();
        for r in 0..=3 {
            for dim in (0..=12).step_by(2) {
                let model = ChernRootModel::new(r, dim).unwrap();
                for q in 1..=6 {
                    total += 1;
                    let check = verify_anomaly(&model, q).unwrap();
                    if check.holds() {
                        ok += 1;
                    } else {
                        failures.push(format!("r={r} dim={dim} q={q}"));
                    }
                }
            }
        }
        (ok, total, failures)
    });
    let (ok, total, failures) = result;
    outcome(
        ok == total && secs < 30.0,
        format!("dA = delta(Wit) and delta(Wit) = 0 mod p1 on {ok}/{total} (r <= 3, dim <= 12, q <= 6), {secs:.2}s (< 30s) {}", failures.join(" ")),
    )
}

fn descriptor(dim: u32, numbers: &[(&[u32], i64)]) -> ManifoldDescriptor {
    ManifoldDescriptor::new(dim, numbers.iter().map(|(p, c)| (Partition::new(p.to_vec()).unwrap(), rational(*c, 1)))).unwrap()
}

fn genus_modularity() -> Outcome {
    let cases = [
        descriptor(4, &[(&[1], 0)]),
        descriptor(4, &[(&[1], 24)]),
        descriptor(4, &[(&[1], -7)]),
        descriptor(8, &[(&[1, 1], 0), (&[2], 5)]),
        descriptor(8, &[(&[1, 1], 3), (&[2], 5)]),
        descriptor(8, &[(&[1, 1], 0), (&[2], 0)]),
        descriptor(8, &[(&[1, 1], -2), (&[2], 0)]),
        descriptor(8, &[(&[1, 1], 0), (&[2], 1440)]),
        descriptor(12, &[(&[1, 1, 1], 0), (&[2, 1], 0), (&[3], 7)]),
        descriptor(12, &[(&[1, 1, 1], 1), (&[2, 1], 0), (&[3], 7)]),
    ];
    let mut weight_ok = 0;
    let mut verdict_ok = 0;
    for d in &cases {
        let report = string_modularity_check(d, 12).unwrap();
        if report.weight == (d.dim() / 2) as i32 {
            weight_ok += 1;
        }
        let modular = report.verdict == Verdict::Modular;
        if modular == d.p1_numbers_vanish() {
            verdict_ok += 1;
        }
    }
    let zero = witten_genus(&cases[0], 12).unwrap();
    let zero_ok = zero.terms().next().is_none();
    let n = cases.len();
    outcome(
        weight_ok == n && verdict_ok == n && zero_ok,
        format!("weight dim/2 on {weight_ok}/{n}, E2-free iff p1 numbers vanish on {verdict_ok}/{n}, dim-4 p1=0 genus is 0: {zero_ok}"),
    )
}

/// Taylor coefficients of `(z/2)/sinh(z/2)` in powers of `z^2`.
fn a_hat_taylor(terms: usize) -> Vec<Rational> {
    let one = || Rational::from_integer(1.into());
    let mut s = Vec::new();
    let mut fact = one();
    for j in 0..terms {
        if j > 0 {
            fact *= rational(((2 * j) * (2 * j + 1)) as i64, 1);
        }
        s.push(one() / (&fact * rational(4i64.pow(j as u32), 1)));
    }
    let mut inv = vec![one()];
    for n in 1..terms {
        let mut acc = Rational::from_integer(0.into());
        for k in 1..=n {
            acc -= &s[k] * &inv[n - k];
        }
        inv.push(acc);
    }
    inv
}

fn a_hat_cross_check() -> Outcome {
    let model = ChernRootModel::new(1, 8).unwrap();
    let cls = witten_class(&model, 2).unwrap();
    let q0 = cls.map_scalars(|s| s.coeff(0));
    let q0 = q0.substitute_named(model.algebra(), &[("b", DgaElement::one(model.algebra()))]).unwrap();
    let target = q0.coefficient(&[("x1", 2)]).unwrap();
    let (product, secs) = timed(|| a_hat_product::<Complex64>(&model, 100_000).unwrap());
    let numeric = product.coefficient(&[("x1", 2)]).unwrap();
    let numeric_err = (numeric - witten_core::scalar::rational_to_f64(&target)).norm();

    let taylor = a_hat_taylor(3);
    let mut exact_ok = true;
    for r in 1..=2usize {
        let model = ChernRootModel::new(r, 8).unwrap();
        let limit = a_hat_limit::<GaussianPi>(&model).unwrap();
        // oracle: product over roots of the one-variable series
        let mut oracle: BTreeMap<Vec<i32>, Rational> = BTreeMap::from([(vec![0; r], Rational::from_integer(1.into()))]);
        for root in 0..r {
            let mut next = BTreeMap::new();
            for (exps, c) in &oracle {
                for (j, t) in taylor.iter().enumerate() {
                    let mut e = exps.clone();
                    e[root] += 2 * j as i32;
                    if e.iter().sum::<i32>() * 2 <= 8 {
                        *next.entry(e).or_insert_with(|| Rational::from_integer(0.into())) += c * t;
                    }
                }
            }
            oracle = next;
        }
        for (exps, c) in &oracle {
            let names: Vec<String> = (1..=r).map(ChernRootModel::root_name).collect();
            let factors: Vec<(&str, i32)> = names.iter().map(|s| s.as_str()).zip(exps.iter().copied()).collect();
            if limit.coefficient(&factors).unwrap() != GaussianPi::from_rational(c) {
                exact_ok = false;
            }
        }
        let cls = witten_class(&model, 2).unwrap().map_scalars(|s| s.coeff(0));
        let cls = cls.substitute_named(model.algebra(), &[("b", DgaElement::one(model.algebra()))]).unwrap();
        if cls.map_scalars(GaussianPi::from_rational) != limit {
            exact_ok = false;
        }
    }
    outcome(
        numeric_err < 1e-3 && exact_ok,
        format!("degree-4 coefficient: product at 1e5 modes vs q^0 class {numeric_err:.2e} (< 1e-3, {secs:.2}s); exact limit = Taylor oracle = q^0 class up to degree 8: {exact_ok}"),
    )
}

fn localization() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_time: f64 = 0.0;
    let mut cases = 0;
    let constant_err = (calibrate(512).unwrap() - FIXED_POINT_CONSTANT).abs();
    let (cal, secs) = timed(|| bv_localize(&calibration_problem(512)).unwrap());
    worst = worst.max(cal.residual);
    worst_time = worst_time.max(secs);
    cases += 1;
    for s in [rational(1, 2), rational(1, 1), rational(2, 1), rational(5, 1)] {
        let base = EquivariantSurfaceProblem::closed("z", s, 512).unwrap();
        for t in [rational(1, 2), rational(1, 1), rational(2, 1)] {
            let (r, secs) = timed(|| bv_localize(&base.exponential(t)).unwrap());
            worst = worst.max(r.residual);
            worst_time = worst_time.max(secs);
            cases += 1;
        }
    }
    outcome(
        worst < 1e-6 && worst_time < 10.0 && constant_err < 1e-12,
        format!("max residual {worst:.2e} (< 1e-6) over {cases} cases at grid 512, slowest {worst_time:.3}s (< 10s), calibration drift {constant_err:.1e}"),
    )
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("descriptor.json");
    std::fs::write(&path, r#"{"dim": 8, "pontryagin_numbers": {"1,1": "3", "2": "5"}}"#).unwrap();
    let path = path.to_str().unwrap().to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec!["genus", &path],
        vec!["genus", &path, "--format", "structured"],
        vec!["pfaffian-product", "--rank", "2", "--dim", "8"],
        vec!["pfaffian-product", "--rank", "1", "--dim", "8", "--format", "structured"],
    ];
    let mut identical = 0;
    for args in &runs {
        let out = |a: &[&str]| Command::new(env!("CARGO_BIN_EXE_witten")).args(a).output().unwrap();
        let (x, y) = (out(args), out(args));
        if x.status.success() && x.stdout == y.stdout && !x.stdout.is_empty() {
            identical += 1;
        }
    }
    outcome(identical == runs.len(), format!("byte-identical repeated reports {identical}/{}", runs.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("Eisenstein consistency", eisenstein_consistency),
        ("E2 anomaly", e2_anomaly),
        ("Pfaffian laws", pfaffian_laws),
        ("product as truncation identity", product_truncation_identity),
        ("anomaly cocycle", anomaly_cocycle),
        ("genus weight and modularity", genus_modularity),
        ("A-hat cross-check", a_hat_cross_check),
        ("localization", localization),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (o, secs) = timed(f);
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} {}: {} [{:.2}s] {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            secs,
            o.detail
        );
    }
    println!("acceptance: {}/9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
