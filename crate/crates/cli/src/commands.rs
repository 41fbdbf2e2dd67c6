use std::collections::BTreeMap;
use std::fs;

use num_complex::Complex64;
use serde_json::Value;
use thiserror::Error;
use witten_core::bvloc::{bv_localize_with, EquivariantSurfaceProblem, CLOSEDNESS_TOLERANCE, FIXED_POINT_CONSTANT};
use witten_core::dga::{DgaElement, Monomial};
use witten_core::geom::{ChernRootModel, ManifoldDescriptor};
use witten_core::pfaff::{block_indices, lattice_exponential, partial_power_sums, regularized_product};
use witten_core::qmod::{
    eisenstein_lattice, eisenstein_q, parse_rational, quasi_modular_decompose, transform_residual, two_zeta_even, GammaElement,
    OrderingKind, QSeries, QmodError, SeriesRecord,
};
use witten_core::witten::{anomaly_symbolic, string_modularity_check, verify_anomaly, witten_class, witten_class_with_values};
use witten_core::{GaussianPi, PiScalar, Rational};

use crate::report::{complex, sci, Report};
use crate::{Cli, Command, ScalarMode};

pub enum Status {
    Ok,
    InputError(String),
    VerificationFailed(String),
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

/// Validated global settings.
struct Config {
    q_order: i64,
    shell_bound: u64,
    tau_exact: (Rational, Rational),
    tau: Complex64,
    ordering: Option<OrderingKind>,
    scalar_mode: ScalarMode,
    tolerance: f64,
}

/// Exact value of a decimal literal such as `-0.25` or `2`.
fn decimal(text: &str) -> Result<Rational, Failure> {
    let t = text.trim();
    let (neg, digits) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Failure::Input(format!("not a decimal number: {text:?}")));
    }
    let whole: Rational = parse_rational(&format!("{}{}", if int.is_empty() { "0" } else { int }, frac)).map_err(input)?;
    let scale = Rational::from_integer(num_bigint_pow10(frac.len()));
    let value = whole / scale;
    Ok(if neg { -value } else { value })
}

fn num_bigint_pow10(n: usize) -> num_bigint::BigInt {
    num_traits::pow(num_bigint::BigInt::from(10), n)
}

fn to_f64(q: &Rational) -> f64 {
    witten_core::scalar::rational_to_f64(q)
}

impl Config {
    fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let g = &cli.global;
        if g.q_order < 1 {
            return Err(Failure::Input("--q-order must be at least 1".into()));
        }
        if g.shell_bound < 1 {
            return Err(Failure::Input("--shell-bound must be at least 1".into()));
        }
        if g.tolerance.is_nan() || g.tolerance <= 0.0 {
            return Err(Failure::Input("--tolerance must be positive".into()));
        }
        let re = decimal(&g.tau[0])?;
        let im = decimal(&g.tau[1])?;
        if to_f64(&im) <= 0.0 {
            return Err(Failure::Input("tau must lie in the upper half plane".into()));
        }
        let ordering = match &g.ordering {
            Some(name) => Some(OrderingKind::parse(name).ok_or_else(|| Failure::Input(format!("unknown ordering {name:?}")))?),
            None => None,
        };
        Ok(Self {
            q_order: g.q_order,
            shell_bound: g.shell_bound,
            tau: Complex64::new(to_f64(&re), to_f64(&im)),
            tau_exact: (re, im),
            ordering,
            scalar_mode: g.scalar_mode,
            tolerance: g.tolerance,
        })
    }

    fn tau_exact<S: PiScalar>(&self) -> S {
        S::from_gaussian(&num_complex::Complex::new(self.tau_exact.0.clone(), self.tau_exact.1.clone()))
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Eisenstein { .. } => "eisenstein",
        Command::WittenClass { .. } => "witten-class",
        Command::Genus { .. } => "genus",
        Command::Decompose { .. } => "decompose",
        Command::PfaffianProduct { .. } => "pfaffian-product",
        Command::Anomaly { .. } => "anomaly",
        Command::Localize { .. } => "localize",
    }
}

fn subcommand_args(c: &Command) -> Vec<(&'static str, Value)> {
    match c {
        Command::Eisenstein { k, check } => vec![("k", Value::from(*k)), ("check", Value::from(*check))],
        Command::WittenClass { rank, dim } | Command::PfaffianProduct { rank, dim } | Command::Anomaly { rank, dim } => {
            vec![("rank", Value::from(*rank)), ("dim", Value::from(*dim))]
        }
        Command::Genus { descriptor } => vec![("input", Value::from(descriptor.as_str()))],
        Command::Decompose { series, coeffs, weight } => vec![
            ("input", series.as_deref().map(Value::from).unwrap_or(Value::Null)),
            ("coeffs", coeffs.as_deref().map(Value::from).unwrap_or(Value::Null)),
            ("weight", weight.map(Value::from).unwrap_or(Value::Null)),
        ],
        Command::Localize { problem, t } => vec![("input", Value::from(problem.as_str())), ("t", Value::from(t.join(",")))],
    }
}

fn header(report: &mut Report, cli: &Cli) {
    let g = &cli.global;
    let mut fields: Vec<(&str, Value)> = vec![
        ("subcommand", Value::from(subcommand_name(&cli.command))),
        ("q_order", Value::from(g.q_order)),
        ("shell_bound", Value::from(g.shell_bound)),
        ("tau", Value::from(format!("{}+{}i", g.tau[0], g.tau[1]))),
        ("ordering", Value::from(g.ordering.clone().unwrap_or_else(|| "default".into()))),
        ("scalar_mode", Value::from(format!("{:?}", g.scalar_mode).to_lowercase())),
        ("tolerance", Value::from(format!("{:e}", g.tolerance))),
        ("format", Value::from(format!("{:?}", g.format).to_lowercase())),
    ];
    fields.extend(subcommand_args(&cli.command));
    let text = fields
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(" ");
    report.record("config", fields, Some(format!("# witten {}\n# config: {text}", subcommand_name(&cli.command))));
}

pub fn run(cli: &Cli) -> (String, Status) {
    let mut report = Report::new(cli.global.format);
    header(&mut report, cli);
    let result = Config::from_cli(cli).and_then(|cfg| dispatch(&cli.command, &cfg, &mut report));
    let status = match result {
        Ok(()) => Status::Ok,
        Err(Failure::Input(m)) => Status::InputError(m),
        Err(Failure::Verification(m)) => Status::VerificationFailed(m),
    };
    (report.render(), status)
}

fn dispatch(command: &Command, cfg: &Config, report: &mut Report) -> Result<(), Failure> {
    match command {
        Command::Eisenstein { k, check } => eisenstein(*k, *check, cfg, report),
        Command::WittenClass { rank, dim } => class(*rank, *dim, cfg, report),
        Command::Genus { descriptor } => genus(descriptor, cfg, report),
        Command::Decompose { series, coeffs, weight } => decompose(series.as_deref(), coeffs.as_deref(), *weight, report),
        Command::PfaffianProduct { rank, dim } => pfaffian_product(*rank, *dim, cfg, report),
        Command::Anomaly { rank, dim } => anomaly(*rank, *dim, cfg, report),
        Command::Localize { problem, t } => localize(problem, t, cfg, report),
    }
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))
}

fn model(rank: usize, dim: u32) -> Result<ChernRootModel, Failure> {
    ChernRootModel::new(rank, dim).map_err(input)
}

fn monomial_text<S: witten_core::Scalar>(e: &DgaElement<S>, m: &Monomial) -> String {
    let t = e.render_monomial(m);
    if t.is_empty() {
        "1".into()
    } else {
        t
    }
}

fn eisenstein(k: u32, check: bool, cfg: &Config, report: &mut Report) -> Result<(), Failure> {
    if k == 0 {
        return Err(Failure::Input("--k must be positive".into()));
    }
    let series = eisenstein_q(k, cfg.q_order).map_err(input)?;
    report.record(
        "qseries",
        vec![("k", Value::from(k)), ("weight", Value::from(2 * k)), ("series", Value::from(series.to_string()))],
        Some(series.to_string()),
    );
    let kind = cfg.ordering.unwrap_or(OrderingKind::default_for(k));
    let ordering = kind.with_bound(cfg.shell_bound);
    let lattice = eisenstein_lattice(k, cfg.tau, &ordering).map_err(input)?;
    let normalized = lattice / two_zeta_even(k);
    let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * cfg.tau).exp();
    let value = series.evaluate(q);
    let diff = (normalized - value).norm();
    report.record(
        "lattice",
        vec![
            ("ordering", Value::from(kind.name())),
            ("bound", Value::from(cfg.shell_bound)),
            ("value", complex(lattice.re, lattice.im)),
            ("normalized", complex(normalized.re, normalized.im)),
            ("series_value", complex(value.re, value.im)),
            ("difference", sci(diff)),
        ],
        None,
    );
    for (name, gamma) in [("T", GammaElement::T), ("S", GammaElement::S)] {
        let r = transform_residual(k, gamma, cfg.tau, cfg.shell_bound).map_err(input)?;
        report.record(
            "transform",
            vec![("gamma", Value::from(name)), ("residual", sci(r.norm()))],
            None,
        );
    }
    if check {
        let ok = diff <= cfg.tolerance;
        report.text(format!("lattice == series: {}", if ok { "OK" } else { "FAILED" }));
        if !ok {
            return Err(Failure::Verification(format!("lattice and series differ by {diff:e}")));
        }
    }
    Ok(())
}

fn class(rank: usize, dim: u32, cfg: &Config, report: &mut Report) -> Result<(), Failure> {
    let model = model(rank, dim)?;
    let cls = witten_class(&model, cfg.q_order).map_err(input)?;
    for (m, c) in cls.terms() {
        let mono = monomial_text(&cls, m);
        report.record(
            "term",
            vec![("monomial", Value::from(mono.clone())), ("coefficient", Value::from(c.to_string()))],
            Some(format!("{mono}  :  {c}")),
        );
    }
    Ok(())
}

fn genus(path: &str, cfg: &Config, report: &mut Report) -> Result<(), Failure> {
    let desc = ManifoldDescriptor::from_json(&read(path)?).map_err(input)?;
    let r = string_modularity_check(&desc, cfg.q_order).map_err(input)?;
    let expected = (desc.dim() / 2) as i32;
    report.record(
        "genus",
        vec![
            ("dim", Value::from(desc.dim())),
            ("weight", Value::from(r.weight)),
            ("series", Value::from(r.series.clone())),
            ("decomposition", Value::from(r.decomposition.clone())),
            ("e2_part", Value::from(r.e2_coefficient.clone())),
            ("verdict", Value::from(r.verdict.as_str())),
        ],
        Some(format!(
            "weight: {}\nseries: {}\ndecomposition: {}\ne2_part: {}\nverdict: {}",
            r.weight,
            r.series,
            r.decomposition,
            r.e2_coefficient,
            r.verdict.as_str()
        )),
    );
    if r.weight != expected {
        return Err(Failure::Verification(format!("genus has weight {} instead of {expected}", r.weight)));
    }
    Ok(())
}

fn decompose(path: Option<&str>, coeffs: Option<&str>, weight: Option<i32>, report: &mut Report) -> Result<(), Failure> {
    let series = match (path, coeffs) {
        (Some(p), _) => {
            let rec: SeriesRecord = serde_json::from_str(&read(p)?).map_err(input)?;
            QSeries::from_record(&rec).map_err(input)?
        }
        (None, Some(list)) => {
            let weight = weight.ok_or_else(|| Failure::Input("--weight is required with --coeffs".into()))?;
            let cs = list.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>().map_err(input)?;
            let order = cs.len() as i64;
            QSeries::new(weight, 0, cs, order)
        }
        (None, None) => return Err(Failure::Input("give a series file or --coeffs".into())),
    };
    match quasi_modular_decompose(&series) {
        Ok(poly) => {
            let verdict = if poly.has_e2() { "quasi-modular" } else { "modular" };
            report.record(
                "decomposition",
                vec![
                    ("weight", Value::from(series.weight())),
                    ("polynomial", Value::from(poly.to_string())),
                    ("e2_part", Value::from(poly.e2_part().to_string())),
                    ("verdict", Value::from(verdict)),
                ],
                Some(format!("decomposition: {poly}\ne2_part: {}\nverdict: {verdict}", poly.e2_part())),
            );
            Ok(())
        }
        Err(QmodError::NoDecomposition(m)) => {
            report.record("decomposition", vec![("verdict", Value::from("none")), ("reason", Value::from(m.clone()))], None);
            Err(Failure::Verification(m))
        }
        Err(e) => Err(input(e)),
    }
}

fn product_coefficients<S: PiScalar>(
    model: &ChernRootModel,
    ordering: &witten_core::qmod::LatticeOrdering,
    tau: &S,
) -> Result<BTreeMap<Monomial, Complex64>, Failure> {
    let p = regularized_product(model, ordering, tau).map_err(input)?;
    Ok(p.terms().map(|(m, c)| (m.clone(), c.approx())).collect())
}

fn pfaffian_product(rank: usize, dim: u32, cfg: &Config, report: &mut Report) -> Result<(), Failure> {
    let model = model(rank, dim)?;
    let kind = cfg.ordering.unwrap_or(OrderingKind::SymmetricShells);
    let mut bounds = Vec::new();
    let mut b = 1;
    while b < cfg.shell_bound {
        bounds.push(b);
        b *= 2;
    }
    bounds.push(cfg.shell_bound);
    let e2_monomial = model.algebra().monomial(&[("b", 2), ("x1", 2)]).ok();
    report.text(format!("{:>8} {:>10} {:>20}  {}", "bound", "modes", "drift", "E2 from b^2 x1^2"));
    let mut previous: Option<BTreeMap<Monomial, Complex64>> = None;
    for bound in bounds {
        let ordering = kind.with_bound(bound);
        let coeffs = match cfg.scalar_mode {
            ScalarMode::Float => product_coefficients(&model, &ordering, &cfg.tau)?,
            ScalarMode::Exact => product_coefficients(&model, &ordering, &cfg.tau_exact::<GaussianPi>())?,
        };
        let drift = previous.as_ref().map(|prev| {
            coeffs
                .keys()
                .chain(prev.keys())
                .map(|m| {
                    let a = coeffs.get(m).copied().unwrap_or_default();
                    let b = prev.get(m).copied().unwrap_or_default();
                    (a - b).norm()
                })
                .fold(0.0, f64::max)
        });
        // coefficient of b^2 x1^2 is -P_2 / 2, and P_2 / (2 zeta(2)) estimates E2
        let e2 = e2_monomial
            .as_ref()
            .map(|m| coeffs.get(m).copied().unwrap_or_default() * (-2.0 / two_zeta_even(1)));
        let modes = block_indices(&ordering).len();
        let drift_text = drift.map(|d| format!("{d:.12e}")).unwrap_or_else(|| "-".into());
        let e2_text = e2.map(|z| format!("{:.12e} {:+.12e}i", z.re, z.im)).unwrap_or_else(|| "-".into());
        report.record(
            "row",
            vec![
                ("bound", Value::from(bound)),
                ("modes", Value::from(modes)),
                ("drift", drift.map(sci).unwrap_or(Value::Null)),
                ("e2_partial", e2.map(|z| complex(z.re, z.im)).unwrap_or(Value::Null)),
            ],
            Some(format!("{bound:>8} {modes:>10} {drift_text:>20}  {e2_text}")),
        );
        previous = Some(coeffs);
    }
    // exact route identity on a small index set
    let small = kind.with_bound(cfg.shell_bound.min(2));
    let tau: GaussianPi = cfg.tau_exact();
    let prod = regularized_product(&model, &small, &tau).map_err(input)?;
    let closed = lattice_exponential(&model, &small, &tau).map_err(input)?;
    let sums = partial_power_sums(&small, &tau, dim / 4).map_err(input)?;
    let class = witten_class_with_values(&model, &sums).map_err(input)?;
    let ok = prod == closed && prod.try_inverse().map_err(input)? == class;
    report.record(
        "exact_route",
        vec![("bound", Value::from(cfg.shell_bound.min(2))), ("holds", Value::from(ok))],
        Some(format!("product == exp(partial sums), bound {}: {}", cfg.shell_bound.min(2), if ok { "OK" } else { "FAILED" })),
    );
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification("regularized product differs from the exponential of partial sums".into()))
    }
}

fn anomaly(rank: usize, dim: u32, cfg: &Config, report: &mut Report) -> Result<(), Failure> {
    let model = model(rank, dim)?;
    let sym = anomaly_symbolic(&model).map_err(input)?;
    report.record("delta", vec![("value", Value::from(sym.delta.to_string()))], Some(format!("delta(Wit) = {}", sym.delta)));
    report.record("primitive", vec![("value", Value::from(sym.primitive.to_string()))], Some(format!("A = {}", sym.primitive)));
    let check = verify_anomaly(&model, cfg.q_order).map_err(input)?;
    let ok = check.holds();
    report.record(
        "check",
        vec![
            ("symbolic", Value::from(check.symbolic_holds)),
            ("series", Value::from(check.series_holds)),
            ("vanishes_mod_p1", Value::from(check.vanishes_mod_p1)),
            ("holds", Value::from(ok)),
        ],
        Some(format!("delta(Wit) == d(A): {}", if ok { "OK" } else { "FAILED" })),
    );
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification("delta(Wit) differs from dA".into()))
    }
}

fn localize(path: &str, ts: &[String], cfg: &Config, report: &mut Report) -> Result<(), Failure> {
    let base = EquivariantSurfaceProblem::from_json(&read(path)?).map_err(input)?;
    let mut cases = vec![("base".to_string(), base.clone())];
    for t in ts {
        let value = parse_rational(t).map_err(input)?;
        cases.push((format!("exp(t alpha), t={value}"), base.exponential(value)));
    }
    report.record(
        "constant",
        vec![("fixed_point_constant", sci(FIXED_POINT_CONSTANT))],
        Some(format!("fixed-point constant: {FIXED_POINT_CONSTANT:.12e}")),
    );
    let mut worst: f64 = 0.0;
    for (name, p) in &cases {
        let r = bv_localize_with(p, CLOSEDNESS_TOLERANCE).map_err(input)?;
        worst = worst.max(r.residual);
        report.record(
            "case",
            vec![
                ("case", Value::from(name.as_str())),
                ("lhs", sci(r.lhs)),
                ("rhs", sci(r.rhs)),
                ("residual", sci(r.residual)),
                ("closedness", sci(r.closedness)),
            ],
            None,
        );
    }
    let ok = worst <= cfg.tolerance;
    report.text(format!("localization: {}", if ok { "OK" } else { "FAILED" }));
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification(format!("localization residual {worst:e} exceeds tolerance")))
    }
}
