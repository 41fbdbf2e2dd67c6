use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::blocks::{BlockExpansion, BlockIndex};
use super::PfaffError;
use crate::dga::{DenseBasis, DgaElement};
use crate::geom::ChernRootModel;
use crate::qmod::{check_upper_half_plane, eisenstein_lattice, LatticeOrdering};
use crate::scalar::PiScalar;

const DENSE_LIMIT: usize = 1 << 16;

/// A unit of work: one shell or one row of the half lattice. Groups are
/// reduced in order, which fixes the floating-point result.
#[derive(Clone, Copy, Debug)]
enum Group {
    Shell(i64),
    /// Lattice rows `m` and `-m` of `(m tau + n)`, `|n| <= n_range`.
    Row { m: i64, n_range: i64 },
    /// Row `m` of the half lattice in mode coordinates.
    HalfRow { m: i64, bound: i64 },
}

fn groups(ordering: &LatticeOrdering) -> Vec<Group> {
    match *ordering {
        LatticeOrdering::SymmetricShells { max_norm } => (1..=max_norm as i64).map(Group::Shell).collect(),
        LatticeOrdering::PaperZ2Plus { shell_bound } => {
            let b = shell_bound as i64;
            (-b..=0).map(|m| Group::HalfRow { m, bound: b }).collect()
        }
        LatticeOrdering::RowMajor { m_range, n_range } => (0..=m_range as i64)
            .map(|m| Group::Row {
                m,
                n_range: n_range as i64,
            })
            .collect(),
    }
}

fn group_blocks(g: Group) -> Vec<BlockIndex> {
    let mut out = Vec::new();
    match g {
        Group::Shell(s) => {
            for n in -s..=s {
                out.push(BlockIndex::new_unchecked(n, -s));
            }
            for m in (-s + 1)..0 {
                out.push(BlockIndex::new_unchecked(-s, m));
                out.push(BlockIndex::new_unchecked(s, m));
            }
            out.push(BlockIndex::new_unchecked(s, 0));
        }
        Group::HalfRow { m, bound } => {
            let start = if m == 0 { 1 } else { -bound };
            for n in start..=bound {
                out.push(BlockIndex::new_unchecked(n, m));
            }
        }
        Group::Row { m, n_range } => {
            // the lattice point (n, m) is the mode with n tau - m' = m tau + n,
            // i.e. (m, -n); keep the representative of each +- pair in Z^2_+
            let rows: &[i64] = if m == 0 { &[0] } else { &[-m, m] };
            for &row in rows {
                for n in 1..=n_range {
                    out.push(BlockIndex::new_unchecked(row, -n));
                }
                if row > 0 {
                    out.push(BlockIndex::new_unchecked(row, 0));
                }
            }
        }
    }
    out
}

/// Modes of the half lattice covered by `ordering`, in product order.
pub fn block_indices(ordering: &LatticeOrdering) -> Vec<BlockIndex> {
    groups(ordering).into_iter().flat_map(group_blocks).collect()
}

fn check_tau<S: PiScalar>(tau: &S) -> Result<(), PfaffError> {
    check_upper_half_plane(tau.approx())?;
    Ok(())
}

/// `P_{2k} = sum (n tau - m)^{-2k}` over the symmetrized index set of
/// `ordering`, for `k = 1..=k_max`.
pub fn partial_power_sums<S: PiScalar>(ordering: &LatticeOrdering, tau: &S, k_max: u32) -> Result<Vec<S>, PfaffError> {
    check_tau(tau)?;
    let per_group: Vec<Vec<S>> = groups(ordering)
        .into_par_iter()
        .map(|g| {
            let mut acc = vec![S::zero_value(); k_max as usize];
            for idx in group_blocks(g) {
                let inv = idx.omega(tau).try_inverse().expect("tau is off the real line");
                let inv_sq = inv.mul_ref(&inv);
                let mut p = S::one_value();
                for slot in acc.iter_mut() {
                    p = p.mul_ref(&inv_sq);
                    *slot = slot.add_ref(&p);
                }
            }
            acc
        })
        .collect();
    let two = S::from_integer(2);
    let mut total = vec![S::zero_value(); k_max as usize];
    for g in per_group {
        for (t, x) in total.iter_mut().zip(g) {
            *t = t.add_ref(&x);
        }
    }
    Ok(total.into_iter().map(|x| x.mul_ref(&two)).collect())
}

/// Product of the normalized block Pfaffians over the modes of `ordering`.
pub fn regularized_product<S: PiScalar>(model: &ChernRootModel, ordering: &LatticeOrdering, tau: &S) -> Result<DgaElement<S>, PfaffError> {
    check_tau(tau)?;
    let expansion = BlockExpansion::<S>::new(model)?;
    let exp = expansion.expansion();
    let basis = DenseBasis::closure(model.algebra(), exp.monomials(), DENSE_LIMIT)?;
    let indices = exp.dense_indices(&basis);
    let partials: Vec<Vec<S>> = groups(ordering)
        .into_par_iter()
        .map(|g| {
            let mut acc = basis.one::<S>();
            for idx in group_blocks(g) {
                let factor = exp.evaluate_dense(&idx.eigenvalue(tau), &basis, &indices);
                acc = basis.mul(&acc, &factor);
            }
            acc
        })
        .collect();
    let total = partials.iter().fold(basis.one::<S>(), |acc, p| basis.mul(&acc, p));
    Ok(basis.to_element(&total))
}

/// `exp(-1/2 sum_k b^{2k} ph(k) P_{2k})`, the closed form of the product
/// over the same modes.
pub fn lattice_exponential<S: PiScalar>(model: &ChernRootModel, ordering: &LatticeOrdering, tau: &S) -> Result<DgaElement<S>, PfaffError> {
    let k_max = model.dim() / 4;
    let alg = model.algebra();
    if k_max == 0 {
        return Ok(DgaElement::one(alg));
    }
    let sums = partial_power_sums(ordering, tau, k_max)?;
    let b = model.bott::<S>();
    let half = S::from_integer(-2).try_inverse().expect("2 is invertible");
    let mut x = DgaElement::zero(alg);
    for (k, p) in (1..=k_max).zip(&sums) {
        let ph = model.pontryagin_character_component::<S>(k)?;
        x = &x + &(&ph * &b.pow(2 * k)).scale(&p.mul_ref(&half));
    }
    Ok(x.exp_nilpotent()?)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderingShiftRow {
    pub ordering: String,
    pub modes: usize,
    /// `E_2` read off the `b^2 x1^2` coefficient of the product.
    pub e2_from_product: [f64; 2],
    /// Difference to the holomorphic `E_2`.
    pub shift: [f64; 2],
    /// Limiting shift for this shape of index set,
    /// `-int_{-a}^{a} 2 ds / (1 - s^2 tau^2)` with `a` the ratio of the
    /// row count to the row length.
    pub predicted_shift: [f64; 2],
}

/// How the weight-2 part of the product depends on the index set.
#[derive(Clone, Debug, Serialize)]
pub struct OrderingShift {
    pub tau: [f64; 2],
    pub bound: u64,
    /// Holomorphic `E_2`: row-major order with each row summed completely.
    pub holomorphic_e2: [f64; 2],
    pub rows: Vec<OrderingShiftRow>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// `int_{-a}^{a} 2 / (1 - s^2 tau^2) ds` by composite Simpson quadrature:
/// the part of the row sums lying outside a rectangle of aspect `a`.
fn rectangle_correction(tau: Complex64, a: f64) -> Complex64 {
    let n = 4000;
    let h = 2.0 * a / n as f64;
    let f = |s: f64| Complex64::new(2.0, 0.0) / (Complex64::new(1.0, 0.0) - tau * tau * (s * s));
    let mut acc = f(-a) + f(a);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(-a + i as f64 * h) * w;
    }
    acc * (h / 3.0)
}

/// Measures the product's `E_2` under several index sets at `bound`
/// against the holomorphic value. Higher-weight coefficients are not
/// affected in the limit; the weight-2 shift is what is reported.
pub fn measure_ordering_shift(tau: Complex64, bound: u64) -> Result<OrderingShift, PfaffError> {
    if bound == 0 {
        return Err(PfaffError::InvalidBound);
    }
    check_upper_half_plane(tau)?;
    let model = ChernRootModel::new(1, 4)?;
    let holo = eisenstein_lattice(
        1,
        tau,
        &LatticeOrdering::RowMajor {
            m_range: 4 * bound.max(500),
            n_range: 4 * bound.max(500),
        },
    )?;
    let orderings = [
        LatticeOrdering::SymmetricShells { max_norm: bound },
        LatticeOrdering::PaperZ2Plus { shell_bound: bound },
        LatticeOrdering::RowMajor {
            m_range: bound,
            n_range: bound,
        },
        LatticeOrdering::RowMajor {
            m_range: bound,
            n_range: 64 * bound,
        },
    ];
    let coefficient = model.algebra().monomial(&[("b", 2), ("x1", 2)])?;
    let mut rows = Vec::new();
    for ord in orderings {
        let prod = regularized_product::<Complex64>(&model, &ord, &tau)?;
        let e2 = prod.coefficient_of(&coefficient) * -2.0;
        let (name, aspect) = match ord {
            LatticeOrdering::RowMajor { m_range, n_range } => {
                (format!("row-major({m_range}x{n_range})"), m_range as f64 / n_range as f64)
            }
            other => (format!("{}({bound})", other.kind().name()), 1.0),
        };
        rows.push(OrderingShiftRow {
            ordering: name,
            modes: block_indices(&ord).len(),
            e2_from_product: pair(e2),
            shift: pair(e2 - holo),
            predicted_shift: pair(-rectangle_correction(tau, aspect)),
        });
    }
    Ok(OrderingShift {
        tau: pair(tau),
        bound,
        holomorphic_e2: pair(holo),
        rows,
    })
}
