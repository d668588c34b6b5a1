//! Pseudo-polynomial solver for componentwise independent uniform profits.
//!
//! The probability that a competitor beats a threshold density is piecewise
//! linear in that threshold, with kinks only at the items' clamped interval
//! endpoints.  Between consecutive kinks the whole preferred-size table is
//! therefore a vector of polynomials of degree at most `n - 1`, built by the
//! shared Bernoulli recursion over a polynomial coefficient ring and then
//! integrated in closed form against the uniform density.  Overall cost is
//! `O(n^4 A)` in double precision.

use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::dp_core::{packing_profile, SizePmf};
use crate::error::{Error, Result};
use crate::model::{
    Instance, ItemDistribution, Method, PiecewisePolynomial, Polynomial, SolveResult, SolveStats,
};
use crate::rational::{rat_u64, to_f64, Rat};

fn uniform_bounds(inst: &Instance, item: usize) -> Result<(&Rat, &Rat)> {
    match &inst.dists[item] {
        ItemDistribution::UniformInterval { lo, hi } => Ok((lo, hi)),
        other => Err(Error::MethodMismatch {
            item,
            expected: "uniform",
            found: other.kind(),
        }),
    }
}

fn all_bounds(inst: &Instance) -> Result<Vec<(&Rat, &Rat)>> {
    (0..inst.n()).map(|i| uniform_bounds(inst, i)).collect()
}

/// Ascending distinct clamped density endpoints `max(0, lo_i/a_i)` and
/// `max(0, hi_i/a_i)`.  Every exceed probability is linear in the threshold
/// density between consecutive values.
fn density_grid(inst: &Instance, bounds: &[(&Rat, &Rat)]) -> Vec<Rat> {
    let zero = Rat::zero();
    let mut v: Vec<Rat> = Vec::with_capacity(2 * inst.n());
    for (i, (lo, hi)) in bounds.iter().enumerate() {
        let a = rat_u64(inst.a[i]);
        v.push((*lo).clone().max(zero.clone()) / &a);
        v.push((*hi).clone().max(zero.clone()) / &a);
    }
    v.sort();
    v.dedup();
    v
}

/// `P(c_j > a_j t)` for a threshold density `t`, exact.
fn exceed_at(lo: &Rat, hi: &Rat, a_j: u64, t: &Rat) -> Rat {
    let x = rat_u64(a_j) * t;
    if x <= *lo {
        Rat::one()
    } else if x >= *hi {
        Rat::zero()
    } else {
        (hi.clone() - &x) / &(hi.clone() - lo)
    }
}

/// Probability that item `j` outranks item `i`, as a function of item `i`'s
/// profit: `gamma -> P(c_j / a_j > gamma / a_i)`.
///
/// The result is the 1/ramp/0 piecewise-linear function with cuts at
/// `(a_i/a_j) lo_j` and `(a_i/a_j) hi_j`, exact over the rationals.
pub fn exceed_prob_pwl(inst: &Instance, j: usize, i: usize) -> Result<PiecewisePolynomial<Rat>> {
    assert_ne!(i, j, "an item is never compared against itself");
    uniform_bounds(inst, i)?;
    let (lo, hi) = uniform_bounds(inst, j)?;
    if lo >= hi {
        return Err(Error::Unsupported(format!(
            "item {j} has a zero-width profit interval"
        )));
    }
    let scale = rat_u64(inst.a[i]) / rat_u64(inst.a[j]);
    PiecewisePolynomial::new(
        vec![scale.clone() * lo, scale * hi],
        vec![
            Polynomial::constant(Rat::one()),
            Polynomial::linear(Rat::one(), -Rat::one()),
            Polynomial::zero(),
        ],
    )
}

/// Preferred-size polynomials of one item on one density-grid cell.
///
/// `polys()[b]` is the probability that the competitors packed ahead occupy
/// exactly `b` units, valid while the item's profit lies in
/// `(gamma_lo, gamma_hi]` and expressed in the normalized coordinate
/// `u = (gamma - gamma_lo) / (gamma_hi - gamma_lo)`.  Keeping each cell on
/// the unit interval preserves conditioning when profit intervals are
/// microscopically narrow.
#[derive(Debug, Clone)]
pub struct CellTable {
    pub gamma_lo: Rat,
    pub gamma_hi: Rat,
    polys: Vec<Polynomial<f64>>,
}

impl CellTable {
    pub fn polys(&self) -> &[Polynomial<f64>] {
        &self.polys
    }

    /// Evaluates the table at a profit value inside the cell.
    pub fn eval(&self, b: usize, gamma: &Rat) -> f64 {
        let u = (gamma.clone() - &self.gamma_lo) / &(self.gamma_hi.clone() - &self.gamma_lo);
        self.polys
            .get(b)
            .map(|p| p.eval(&to_f64(&u)))
            .unwrap_or(0.0)
    }
}

/// Per-cell preferred-size tables covering item `i`'s positive profit
/// support; empty when the item is never profitable.
pub fn h_tables(inst: &Instance, i: usize) -> Result<Vec<CellTable>> {
    inst.ensure_valid()?;
    let bounds = all_bounds(inst)?;
    let grid = density_grid(inst, &bounds);
    Ok(h_tables_impl(inst, &bounds, &grid, i))
}

fn h_tables_impl(
    inst: &Instance,
    bounds: &[(&Rat, &Rat)],
    grid: &[Rat],
    i: usize,
) -> Vec<CellTable> {
    let zero = Rat::zero();
    let (lo_i, hi_i) = bounds[i];
    if *hi_i <= zero {
        return Vec::new();
    }
    let a_i = rat_u64(inst.a[i]);
    let t_lo = lo_i.clone().max(zero) / &a_i;
    let t_hi = hi_i.clone() / &a_i;
    let others_total = inst.total_size() - inst.a[i];
    let mut cells = Vec::new();
    for pair in grid.windows(2) {
        let (v0, v1) = (&pair[0], &pair[1]);
        if *v0 < t_lo || *v1 > t_hi {
            continue;
        }
        let mut h = SizePmf::<Polynomial<f64>>::point_mass_at_zero(others_total);
        for j in 0..inst.n() {
            if j == i {
                continue;
            }
            let q0 = exceed_at(bounds[j].0, bounds[j].1, inst.a[j], v0);
            let q1 = exceed_at(bounds[j].0, bounds[j].1, inst.a[j], v1);
            let slope = q1 - &q0;
            h.push_item(&Polynomial::linear(to_f64(&q0), to_f64(&slope)), inst.a[j]);
        }
        cells.push(CellTable {
            gamma_lo: v0.clone() * &a_i,
            gamma_hi: v1.clone() * &a_i,
            polys: h.probs().to_vec(),
        });
    }
    cells
}

struct UniformMasses {
    g: Vec<Vec<f64>>,
    tables: u64,
    table_cells: u64,
}

fn masses_impl(inst: &Instance) -> Result<UniformMasses> {
    let bounds = all_bounds(inst)?;
    let grid = density_grid(inst, &bounds);
    let total = inst.total_size() as usize;
    // Rows are independent; within a row, cells accumulate in ascending
    // order so the float sums are reproducible regardless of thread count.
    let rows: Vec<(Vec<f64>, u64)> = (0..inst.n())
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0f64; total + 1];
            let cells = h_tables_impl(inst, &bounds, &grid, i);
            let (lo_i, hi_i) = bounds[i];
            let width = hi_i.clone() - lo_i;
            for cell in &cells {
                let mass = to_f64(&((cell.gamma_hi.clone() - &cell.gamma_lo) / &width));
                for (slot, poly) in row.iter_mut().zip(cell.polys()) {
                    *slot += mass * poly.integral_unit();
                }
            }
            (row, cells.len() as u64)
        })
        .collect();
    let mut g = Vec::with_capacity(inst.n());
    let mut tables = 0u64;
    let mut table_cells = 0u64;
    for (i, (row, built)) in rows.into_iter().enumerate() {
        g.push(row);
        tables += built;
        table_cells += built * (inst.total_size() - inst.a[i] + 1);
    }
    Ok(UniformMasses {
        g,
        tables,
        table_cells,
    })
}

/// Preferred-size masses `g[i][b]`: the probability that item `i` is
/// profitable and the items packed ahead of it occupy exactly `b` units.
pub fn masses(inst: &Instance) -> Result<Vec<Vec<f64>>> {
    inst.ensure_valid()?;
    Ok(masses_impl(inst)?.g)
}

/// Solve for all-uniform marginals.
pub fn solve(inst: &Instance) -> Result<SolveResult<f64>> {
    let started = Instant::now();
    inst.ensure_valid()?;
    let masses = masses_impl(inst)?;
    let profile = packing_profile(inst, &masses.g)?;
    let (b_star, value) = profile
        .fhat
        .maximize(&to_f64(&inst.b_lo), &to_f64(&inst.b_hi))?;
    let stats = SolveStats {
        wall: started.elapsed(),
        scenarios: 0,
        tables: masses.tables,
        table_cells: masses.table_cells,
        profile_breakpoints: profile.fhat.breakpoints().len() as u64,
    };
    Ok(SolveResult {
        method: Method::DpUniform,
        b_star,
        value,
        profile: profile.fhat,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn uni(lo: Rat, hi: Rat) -> ItemDistribution {
        ItemDistribution::UniformInterval { lo, hi }
    }

    #[test]
    fn single_item_always_profitable_has_half_slope() {
        let inst = Instance {
            a: vec![2],
            d: vec![rat_int(1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(2),
            dists: vec![uni(rat_int(1), rat_int(2))],
        };
        let cells = h_tables(&inst, 0).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].gamma_lo, rat_int(1));
        assert_eq!(cells[0].gamma_hi, rat_int(2));
        assert_eq!(cells[0].polys(), &[Polynomial::constant(1.0)]);

        let result = solve(&inst).unwrap();
        assert!((result.profile.eval(&1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((result.profile.eval(&2.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(result.b_star, 2.0);
        assert!((result.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exceed_pwl_hand_values() {
        let inst = Instance {
            a: vec![2, 1],
            d: vec![rat_int(1), rat_int(1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(3),
            dists: vec![uni(rat_int(1), rat_int(2)), uni(rat_int(0), rat_int(2))],
        };
        let pwl = exceed_prob_pwl(&inst, 1, 0).unwrap();
        assert_eq!(pwl.cuts(), &[rat_int(0), rat_int(4)]);
        assert_eq!(pwl.eval(&rat_int(-1)), rat_int(1));
        assert_eq!(pwl.eval(&rat_int(0)), rat_int(1));
        assert_eq!(pwl.eval(&rat_int(1)), rat(3, 4));
        assert_eq!(pwl.eval(&rat_int(2)), rat(1, 2), "midpoint of the ramp");
        assert_eq!(pwl.eval(&rat_int(4)), rat_int(0));
        assert_eq!(pwl.eval(&rat_int(5)), rat_int(0));
    }

    #[test]
    fn exceed_pwl_half_at_common_density_threshold() {
        // c_j ~ U[a_j/(2s), 3a_j/(2s)] with s = 4: the threshold density
        // 1/s is the midpoint of the density interval, so the probability
        // of outranking it is exactly one half.
        let inst = Instance {
            a: vec![3, 2],
            d: vec![rat_int(1), rat_int(1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(5),
            dists: vec![uni(rat_int(1), rat_int(2)), uni(rat(1, 4), rat(3, 4))],
        };
        let pwl = exceed_prob_pwl(&inst, 1, 0).unwrap();
        assert_eq!(pwl.eval(&rat(3, 4)), rat(1, 2));
    }

    #[test]
    fn exceed_pwl_rejects_zero_width_interval() {
        let inst = Instance {
            a: vec![1, 1],
            d: vec![rat_int(1), rat_int(1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(2),
            dists: vec![uni(rat_int(0), rat_int(1)), uni(rat_int(1), rat_int(1))],
        };
        assert!(matches!(
            exceed_prob_pwl(&inst, 1, 0),
            Err(Error::Unsupported(_))
        ));
    }

    fn three_item_instance() -> Instance {
        Instance {
            a: vec![1, 2, 3],
            d: vec![rat_int(2), rat_int(-1), rat_int(1)],
            delta: rat(1, 4),
            b_lo: rat_int(0),
            b_hi: rat_int(6),
            dists: vec![
                uni(rat_int(-1), rat_int(2)),
                uni(rat_int(0), rat_int(3)),
                uni(rat_int(1), rat_int(2)),
            ],
        }
    }

    #[test]
    fn cell_tables_conserve_mass_and_bound_degree() {
        let inst = three_item_instance();
        let total = inst.total_size();
        for i in 0..inst.n() {
            let cells = h_tables(&inst, i).unwrap();
            assert!(!cells.is_empty());
            for pair in cells.windows(2) {
                assert_eq!(pair[0].gamma_hi, pair[1].gamma_lo, "cells must tile");
            }
            for cell in &cells {
                assert_eq!(cell.polys().len() as u64, total - inst.a[i] + 1);
                let mut sum = Polynomial::<f64>::zero();
                for p in cell.polys() {
                    assert!(p.degree() <= inst.n() - 1, "degree bound violated");
                    sum = sum + p;
                }
                for (k, c) in sum.coeffs().iter().enumerate() {
                    let target = if k == 0 { 1.0 } else { 0.0 };
                    assert!(
                        (c - target).abs() < 1e-9,
                        "mass polynomial coefficient {k} is {c}"
                    );
                }
            }
        }
    }

    #[test]
    fn row_sums_match_positive_probability_and_capacity_is_conserved() {
        let inst = three_item_instance();
        let g = masses(&inst).unwrap();
        let total = inst.total_size() as usize;
        let mut positive = Vec::new();
        for (i, dist) in inst.dists.iter().enumerate() {
            let ItemDistribution::UniformInterval { lo, hi } = dist else {
                unreachable!()
            };
            let p = (to_f64(hi) / to_f64(&(hi.clone() - lo))).clamp(0.0, 1.0);
            positive.push(p);
            let row: f64 = g[i].iter().sum();
            assert!((row - p).abs() < 1e-9, "row {i}: {row} vs {p}");
        }

        let profile = packing_profile(&inst, &g).unwrap();
        let mut pmf = SizePmf::<f64>::point_mass_at_zero(total as u64);
        for (i, &p) in positive.iter().enumerate() {
            pmf.push_item(&p, inst.a[i]);
        }
        let mut tail = 1.0;
        for t in 1..=total {
            tail -= pmf.probs()[t - 1];
            let packed: f64 = (0..inst.n())
                .map(|i| inst.a[i] as f64 * profile.xprime[i][t - 1])
                .sum();
            assert!(
                (packed - tail).abs() < 1e-8,
                "capacity conservation fails at t = {t}: {packed} vs {tail}"
            );
        }
    }

    #[test]
    fn matches_exact_permutation_expectation() {
        let inst = Instance {
            a: vec![1, 2, 2],
            d: vec![rat_int(2), rat_int(-1), rat_int(1)],
            delta: rat(1, 4),
            b_lo: rat_int(0),
            b_hi: rat_int(5),
            dists: vec![
                uni(rat_int(0), rat_int(2)),
                uni(rat_int(1), rat_int(3)),
                uni(rat_int(1), rat_int(2)),
            ],
        };
        let result = solve(&inst).unwrap();
        let exact = crate::oracles::permutation_expectation(&inst).unwrap();
        for b in 0..=5u64 {
            let ours = result.profile.eval(&(b as f64)).unwrap();
            let truth = to_f64(&exact.eval(&rat_u64(b)).unwrap());
            assert!(
                (ours - truth).abs() < 1e-9,
                "b = {b}: dp {ours} vs permutation {truth}"
            );
        }
    }

    #[test]
    fn narrow_intervals_recover_the_certain_solver() {
        let centers = [rat(7, 4), rat(5, 2), rat(1, 3)];
        let h = rat(1, 1_000_000);
        let inst = Instance {
            a: vec![2, 3, 1],
            d: vec![rat_int(3), rat_int(-2), rat_int(1)],
            delta: rat(1, 5),
            b_lo: rat_int(0),
            b_hi: rat_int(6),
            dists: centers
                .iter()
                .map(|c| uni(c.clone() - &h, c.clone() + &h))
                .collect(),
        };
        let dp = solve(&inst).unwrap();
        let certain = crate::certain::solve(&inst, &centers).unwrap();
        for b in 0..=6u64 {
            let ours = dp.profile.eval(&(b as f64)).unwrap();
            let truth = to_f64(&certain.profile.eval(&rat_u64(b)).unwrap());
            assert!(
                (ours - truth).abs() < 1e-4,
                "b = {b}: narrow-interval {ours} vs certain {truth}"
            );
        }
    }
}
