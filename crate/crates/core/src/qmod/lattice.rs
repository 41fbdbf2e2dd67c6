//! Partial sums of `1/(m tau + n)^p` over finite pieces of `Z^2 \ {0}`.
//!
//! For `p >= 3` the limit does not depend on how the lattice is exhausted.
//! For `p = 2` it does, and the enumeration order is part of the answer:
//! [`LatticeOrdering::RowMajor`] (inner sum over `n`, outer over `m`) is the
//! order that produces the holomorphic weight-2 series.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::QmodError;

/// How a conditionally convergent lattice sum is exhausted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeOrdering {
    /// Square shells `max(|n|, |m|) = 1, 2, ..., max_norm`.
    SymmetricShells { max_norm: u64 },
    /// The half lattice `{m < 0} u {m = 0, n > 0}` within the square
    /// `max(|n|, |m|) <= shell_bound`, each point paired with its negative.
    PaperZ2Plus { shell_bound: u64 },
    /// For each `|m| <= m_range` the full row `|n| <= n_range`, rows summed
    /// afterwards. Each row is closed with an Euler-Maclaurin estimate of
    /// its omitted `n`-tail.
    RowMajor { m_range: u64, n_range: u64 },
}

/// Ordering family without a bound, as selected on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderingKind {
    SymmetricShells,
    PaperZ2Plus,
    RowMajor,
}

impl OrderingKind {
    pub fn with_bound(self, bound: u64) -> LatticeOrdering {
        match self {
            Self::SymmetricShells => LatticeOrdering::SymmetricShells { max_norm: bound },
            Self::PaperZ2Plus => LatticeOrdering::PaperZ2Plus { shell_bound: bound },
            Self::RowMajor => LatticeOrdering::RowMajor {
                m_range: bound,
                n_range: bound,
            },
        }
    }

    /// Holomorphic ordering for weight 2, shells otherwise.
    pub fn default_for(k: u32) -> Self {
        if k == 1 {
            Self::RowMajor
        } else {
            Self::SymmetricShells
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::SymmetricShells => "shells",
            Self::PaperZ2Plus => "z2plus",
            Self::RowMajor => "row-major",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "shells" | "symmetric-shells" => Some(Self::SymmetricShells),
            "z2plus" | "z2-plus" => Some(Self::PaperZ2Plus),
            "row-major" | "rowmajor" => Some(Self::RowMajor),
            _ => None,
        }
    }
}

impl LatticeOrdering {
    pub fn kind(&self) -> OrderingKind {
        match self {
            Self::SymmetricShells { .. } => OrderingKind::SymmetricShells,
            Self::PaperZ2Plus { .. } => OrderingKind::PaperZ2Plus,
            Self::RowMajor { .. } => OrderingKind::RowMajor,
        }
    }

    /// Lattice points `(n, m)` in enumeration order. `RowMajor` lists the
    /// raw points only; its tail estimate is not a lattice point.
    pub fn points(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        match *self {
            Self::SymmetricShells { max_norm } => {
                for s in 1..=max_norm as i64 {
                    out.extend(shell(s));
                }
            }
            Self::PaperZ2Plus { shell_bound } => {
                out.extend(z2_plus(shell_bound));
            }
            Self::RowMajor { m_range, n_range } => {
                let (mr, nr) = (m_range as i64, n_range as i64);
                for m in -mr..=mr {
                    for n in -nr..=nr {
                        if (n, m) != (0, 0) {
                            out.push((n, m));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Points of the square shell `max(|n|, |m|) = s`, counterclockwise.
fn shell(s: i64) -> impl Iterator<Item = (i64, i64)> {
    let right = (-s + 1..=s).map(move |m| (s, m));
    let top = (-s..s).rev().map(move |n| (n, s));
    let left = (-s..s).rev().map(move |m| (-s, m));
    let bottom = (-s + 1..=s).map(move |n| (n, -s));
    right.chain(top).chain(left).chain(bottom)
}

/// `Z^2_+ = {(n, m) : m < 0, or m = 0 and n > 0}` inside the square of
/// half-width `bound`, ordered by `m` then `n`.
pub fn z2_plus(bound: u64) -> impl Iterator<Item = (i64, i64)> {
    let b = bound as i64;
    (-b..=0).flat_map(move |m| {
        let start = if m == 0 { 1 } else { -b };
        (start..=b).map(move |n| (n, m))
    })
}

pub fn is_in_z2_plus(n: i64, m: i64) -> bool {
    m < 0 || (m == 0 && n > 0)
}

pub fn check_upper_half_plane(tau: Complex64) -> Result<(), QmodError> {
    if tau.im > 0.0 && tau.re.is_finite() && tau.im.is_finite() {
        Ok(())
    } else {
        Err(QmodError::Domain(format!("tau = {tau} is not in the upper half plane")))
    }
}

fn inv_pow(w: Complex64, p: u32) -> Complex64 {
    let inv = w.inv();
    let mut acc = inv;
    for _ in 1..p {
        acc *= inv;
    }
    acc
}

/// `w^-p + (-w)^-p`; exactly zero for odd `p`.
fn paired(w: Complex64, p: u32) -> Complex64 {
    inv_pow(w, p) + inv_pow(-w, p)
}

/// Euler-Maclaurin estimate of `sum_{j > n} (w + j)^-p`.
fn one_sided_tail(w: Complex64, n: i64, p: u32) -> Complex64 {
    let pf = p as f64;
    let x = w + n as f64;
    let xp = inv_pow(x, p);
    let integral = x * xp / (pf - 1.0);
    let d1 = pf * xp / x;
    let d3 = pf * (pf + 1.0) * (pf + 2.0) * xp / (x * x * x);
    let d5 = pf * (pf + 1.0) * (pf + 2.0) * (pf + 3.0) * (pf + 4.0) * xp / (x * x * x * x * x);
    // int - g(n)/2 - sum B_2j/(2j)! g^{(2j-1)}(n), with g' = -p x^{-p-1} etc.
    integral - xp * 0.5 + d1 / 12.0 - d3 / 720.0 + d5 / 30240.0
}

fn row_tail(w: Complex64, n: i64, p: u32) -> Complex64 {
    if p < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let plus = one_sided_tail(w, n, p);
    let minus = one_sided_tail(-w, n, p);
    if p.is_multiple_of(2) {
        plus + minus
    } else {
        plus - minus
    }
}

/// Sum of `(m tau + n)^-p` for one row `m` and `|n| <= n_range`, plus the
/// Euler-Maclaurin tail beyond.
fn row_sum(tau: Complex64, m: i64, n_range: i64, p: u32) -> Complex64 {
    let w = tau * m as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    if m != 0 {
        acc += inv_pow(w, p);
    }
    for n in 1..=n_range {
        let nf = n as f64;
        acc += inv_pow(w + nf, p) + inv_pow(w - nf, p);
    }
    acc + row_tail(w, n_range, p)
}

/// Partial lattice sum `sum (m tau + n)^-p` in the given ordering.
///
/// Work is split across threads by shell or row; partial results are
/// reduced in enumeration order so the output is bit-for-bit reproducible.
pub fn lattice_power_sum(p: u32, tau: Complex64, ordering: &LatticeOrdering) -> Result<Complex64, QmodError> {
    check_upper_half_plane(tau)?;
    let value = match *ordering {
        LatticeOrdering::SymmetricShells { max_norm } => {
            let shells: Vec<Complex64> = (1..=max_norm as i64)
                .into_par_iter()
                .map(|s| {
                    // half of each shell, every point paired with its negative
                    shell(s)
                        .filter(|&(n, m)| is_in_z2_plus(n, m))
                        .map(|(n, m)| paired(tau * m as f64 + n as f64, p))
                        .sum()
                })
                .collect();
            shells.into_iter().sum()
        }
        LatticeOrdering::PaperZ2Plus { shell_bound } => {
            let b = shell_bound as i64;
            let rows: Vec<Complex64> = (-b..=0)
                .into_par_iter()
                .map(|m| {
                    let start = if m == 0 { 1 } else { -b };
                    (start..=b)
                        .map(|n| paired(tau * m as f64 + n as f64, p))
                        .sum()
                })
                .collect();
            rows.into_iter().sum()
        }
        LatticeOrdering::RowMajor { m_range, n_range } => {
            let nr = n_range as i64;
            let rows: Vec<Complex64> = (0..=m_range as i64)
                .into_par_iter()
                .map(|m| {
                    if m == 0 {
                        row_sum(tau, 0, nr, p)
                    } else {
                        // row -m is the negative of row m term by term
                        let r = row_sum(tau, m, nr, p);
                        let r_neg = row_sum(tau, -m, nr, p);
                        r + r_neg
                    }
                })
                .collect();
            rows.into_iter().sum()
        }
    };
    Ok(value)
}

/// Partial lattice sum of the weight-`2k` Eisenstein series
/// `sum 1/(m tau + n)^{2k}` over `Z^2 \ {0}`.
pub fn eisenstein_lattice(k: u32, tau: Complex64, ordering: &LatticeOrdering) -> Result<Complex64, QmodError> {
    if k == 0 {
        return Err(QmodError::InvalidArgument("k must be positive".into()));
    }
    lattice_power_sum(2 * k, tau, ordering)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells_have_eight_s_points() {
        for s in 1..6 {
            let pts: Vec<_> = shell(s).collect();
            assert_eq!(pts.len(), 8 * s as usize);
            assert!(pts.iter().all(|&(n, m)| n.abs().max(m.abs()) == s));
            let mut dedup = pts.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), pts.len());
        }
    }

    #[test]
    fn z2_plus_is_exactly_half_the_square() {
        let b = 4;
        let pts: Vec<_> = z2_plus(b).collect();
        assert_eq!(pts.len(), ((2 * b + 1) * (2 * b + 1) - 1) as usize / 2);
        assert!(pts.iter().all(|&(n, m)| is_in_z2_plus(n, m)));
        for &(n, m) in &pts {
            assert!(!pts.contains(&(-n, -m)));
        }
    }

    #[test]
    fn odd_power_vanishes_exactly() {
        let tau = Complex64::new(0.3, 1.7);
        for ord in [
            LatticeOrdering::SymmetricShells { max_norm: 30 },
            LatticeOrdering::PaperZ2Plus { shell_bound: 30 },
        ] {
            let v = lattice_power_sum(3, tau, &ord).unwrap();
            assert_eq!(v, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn tail_estimate_matches_direct_sum() {
        // sum_{j > 50} 1/j^2 = psi'(51)
        let direct: f64 = (51..2_000_000).map(|j| 1.0 / (j as f64 * j as f64)).sum::<f64>() + 1.0 / 2_000_000.0;
        let est = one_sided_tail(Complex64::new(0.0, 0.0), 50, 2);
        assert!((est.re - direct).abs() < 1e-11, "{} vs {}", est.re, direct);
        let w = Complex64::new(0.4, 3.0);
        let direct: Complex64 = (21..400_000).map(|j| inv_pow(w + j as f64, 2)).sum::<Complex64>() + inv_pow(w + 400_000.0, 1);
        let est = one_sided_tail(w, 20, 2);
        assert!((est - direct).norm() < 1e-9, "{est} vs {direct}");
    }

    #[test]
    fn lower_half_plane_is_rejected() {
        let ord = LatticeOrdering::SymmetricShells { max_norm: 3 };
        assert!(matches!(
            eisenstein_lattice(2, Complex64::new(0.0, -1.0), &ord),
            Err(QmodError::Domain(_))
        ));
    }

    #[test]
    fn point_lists_agree_with_pairing() {
        let shells = LatticeOrdering::SymmetricShells { max_norm: 3 }.points();
        let mut rows = LatticeOrdering::RowMajor { m_range: 3, n_range: 3 }.points();
        let mut s = shells.clone();
        s.sort();
        rows.sort();
        assert_eq!(s, rows);
    }
}
