//! Additive approximation scheme for arbitrary independent profit
//! distributions given through CDF and quantile oracles.
//!
//! Each profit is replaced by the discrete distribution that puts mass `1/m`
//! on the quantiles at `(k - 1/2)/m`, which matches the true CDF within
//! `1/(2m)` everywhere.  The preferred-size tables of the discretized
//! instance are piecewise constant between the competitors' scaled support
//! points, so the assembly reduces to finitely many Bernoulli convolutions
//! weighted by true-CDF differences.  Choosing `m = ceil((n-1) A D / eps)`
//! makes the final objective error at most `eps`; the whole run costs
//! `O(m n^3 A)`.

use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;

use crate::dp_core::{packing_profile, SizePmf};
use crate::error::{Error, Result};
use crate::model::{Instance, ItemDistribution, Method, SolveResult, SolveStats};
use crate::rational::to_f64;

/// Default ceiling on the predicted working set, 2 GiB.
pub const DEFAULT_MEMORY_CAP: u64 = 2 << 30;

/// CDF of the discretized profit: the true CDF rounded to the nearest
/// multiple of `1/m`, ties upward.
///
/// Equivalently, the fraction of the `m` discretization atoms that lie at
/// or below `t`.
pub fn tilde_cdf(dist: &ItemDistribution, m: u64, t: f64) -> f64 {
    assert!(m >= 1, "granularity must be at least 1");
    ((m as f64 * dist.cdf(t) + 0.5).floor() / m as f64).clamp(0.0, 1.0)
}

/// Granularity `m = ceil((n - 1) A D / eps)`, clamped to at least 1.
pub fn granularity(inst: &Instance, eps: f64) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(Error::Unsupported(format!(
            "epsilon must be positive, got {eps}"
        )));
    }
    let scale = (inst.n() as f64 - 1.0) * inst.total_size() as f64 * to_f64(&inst.weight_abs_sum());
    Ok(((scale / eps).ceil() as u64).max(1))
}

fn predicted_bytes(inst: &Instance, m: u64) -> u64 {
    let n = inst.n() as u64;
    let quantiles = n.saturating_mul(m);
    let thresholds = n.saturating_mul(n.saturating_sub(1)).saturating_mul(m);
    let tables = n.saturating_mul(inst.total_size() + 1);
    quantiles
        .saturating_add(thresholds.saturating_mul(2))
        .saturating_add(tables)
        .saturating_mul(std::mem::size_of::<f64>() as u64)
}

/// Quantile discretization of an instance at granularity `m`.
///
/// `tilde_c[i][k-1]` is the `(k - 1/2)/m` quantile of item `i`'s profit,
/// for `k = 1 ..= m`; `j_set(i)` lists the positive thresholds at which
/// some competitor's discretized density crosses item `i`'s, i.e. the only
/// points where the preferred-size table of the discretized instance can
/// change.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub eps: f64,
    pub m: u64,
    pub tilde_c: Vec<Vec<f64>>,
    /// `thresholds[i][r]`: ascending `(a_i / a_j) tilde_c[j]` for the r-th
    /// competitor `j` of item `i` (competitors in index order).
    thresholds: Vec<Vec<Vec<f64>>>,
    j_sets: Vec<Vec<f64>>,
}

impl Discretization {
    pub fn new(inst: &Instance, eps: f64) -> Result<Self> {
        let m = granularity(inst, eps)?;
        let tilde_c: Vec<Vec<f64>> = inst
            .dists
            .iter()
            .map(|dist| {
                (1..=m)
                    .map(|k| dist.quantile((k as f64 - 0.5) / m as f64))
                    .collect()
            })
            .collect();
        let mut thresholds = Vec::with_capacity(inst.n());
        let mut j_sets = Vec::with_capacity(inst.n());
        for i in 0..inst.n() {
            let per_competitor: Vec<Vec<f64>> = (0..inst.n())
                .filter(|&j| j != i)
                .map(|j| {
                    let ratio = inst.a[i] as f64 / inst.a[j] as f64;
                    tilde_c[j].iter().map(|c| ratio * c).collect()
                })
                .collect();
            let mut j_set: Vec<f64> = per_competitor
                .iter()
                .flatten()
                .copied()
                .filter(|t| *t > 0.0)
                .collect();
            j_set.sort_by(|a, b| a.partial_cmp(b).expect("finite thresholds"));
            j_set.dedup();
            thresholds.push(per_competitor);
            j_sets.push(j_set);
        }
        Ok(Self {
            eps,
            m,
            tilde_c,
            thresholds,
            j_sets,
        })
    }

    /// Positive discontinuity candidates of item `i`'s preferred-size
    /// table, ascending and distinct.
    pub fn j_set(&self, i: usize) -> &[f64] {
        &self.j_sets[i]
    }

    /// Fraction of competitor `r`'s atoms whose scaled value exceeds
    /// `gamma`.
    ///
    /// Counting the stored threshold objects keeps the comparison
    /// bit-exact against the entries of `j_set`, where evaluating the
    /// rounded CDF at an atom could fall on either side of the tie.
    fn exceed(&self, i: usize, r: usize, gamma: f64) -> f64 {
        let thr = &self.thresholds[i][r];
        let at_most = thr.partition_point(|t| *t <= gamma);
        (thr.len() - at_most) as f64 / self.m as f64
    }
}

struct ApproxMasses {
    g: Vec<Vec<f64>>,
    tables: u64,
    table_cells: u64,
}

fn masses_impl(inst: &Instance, disc: &Discretization) -> ApproxMasses {
    let total = inst.total_size() as usize;
    // Rows are independent; within a row the cells accumulate in ascending
    // gamma order, so sums are reproducible regardless of thread count.
    let rows: Vec<(Vec<f64>, u64)> = (0..inst.n())
        .into_par_iter()
        .map(|i| {
            let dist = &inst.dists[i];
            let others_total = inst.total_size() - inst.a[i];
            let sizes: Vec<u64> = (0..inst.n())
                .filter(|&j| j != i)
                .map(|j| inst.a[j])
                .collect();
            let mut row = vec![0.0f64; total + 1];
            let mut built = 0u64;
            let mut gammas = vec![0.0f64];
            gammas.extend_from_slice(disc.j_set(i));
            for (k, &gamma) in gammas.iter().enumerate() {
                let cdf_hi = match gammas.get(k + 1) {
                    Some(next) => dist.cdf(*next),
                    None => 1.0,
                };
                let weight = cdf_hi - dist.cdf(gamma);
                if weight <= 0.0 {
                    continue;
                }
                let mut h = SizePmf::<f64>::point_mass_at_zero(others_total);
                for (r, &size) in sizes.iter().enumerate() {
                    h.push_item(&disc.exceed(i, r, gamma), size);
                }
                built += 1;
                for (slot, hb) in row.iter_mut().zip(h.probs()) {
                    *slot += weight * hb;
                }
            }
            (row, built)
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
    ApproxMasses {
        g,
        tables,
        table_cells,
    }
}

/// Approximate preferred-size masses `g[i][b]` at granularity
/// `m = ceil((n - 1) A D / eps)`.
pub fn masses(inst: &Instance, eps: f64) -> Result<Vec<Vec<f64>>> {
    inst.ensure_valid()?;
    let disc = Discretization::new(inst, eps)?;
    Ok(masses_impl(inst, &disc).g)
}

/// Solve with additive objective error at most `eps`, under the default
/// memory cap.
pub fn solve(inst: &Instance, eps: f64) -> Result<SolveResult<f64>> {
    solve_with(inst, eps, DEFAULT_MEMORY_CAP)
}

/// Solve with additive objective error at most `eps`, refusing to start if
/// the predicted working set exceeds `memory_cap` bytes.
pub fn solve_with(inst: &Instance, eps: f64, memory_cap: u64) -> Result<SolveResult<f64>> {
    let started = Instant::now();
    inst.ensure_valid()?;
    if inst.weight_abs_sum().is_zero() {
        // The follower's packing carries no weight: the objective is
        // exactly -delta * b, no discretization needed.
        let g = vec![vec![0.0f64; inst.total_size() as usize + 1]; inst.n()];
        let profile = packing_profile(inst, &g)?;
        let (b_star, value) = profile
            .fhat
            .maximize(&to_f64(&inst.b_lo), &to_f64(&inst.b_hi))?;
        return Ok(SolveResult {
            method: Method::Approx,
            b_star,
            value,
            profile: profile.fhat,
            stats: SolveStats {
                wall: started.elapsed(),
                profile_breakpoints: inst.total_size() + 1,
                ..SolveStats::default()
            },
        });
    }
    let m = granularity(inst, eps)?;
    let predicted = predicted_bytes(inst, m);
    if predicted > memory_cap {
        return Err(Error::MemoryCap {
            predicted_bytes: predicted,
            cap_bytes: memory_cap,
        });
    }
    let disc = Discretization::new(inst, eps)?;
    let masses = masses_impl(inst, &disc);
    let profile = packing_profile(inst, &masses.g)?;
    let (b_star, value) = profile
        .fhat
        .maximize(&to_f64(&inst.b_lo), &to_f64(&inst.b_hi))?;
    let stats = SolveStats {
        wall: started.elapsed(),
        scenarios: disc.m,
        tables: masses.tables,
        table_cells: masses.table_cells,
        profile_breakpoints: profile.fhat.breakpoints().len() as u64,
    };
    Ok(SolveResult {
        method: Method::Approx,
        b_star,
        value,
        profile: profile.fhat,
        stats,
    })
}
