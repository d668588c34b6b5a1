//! Exact pseudo-polynomial solver for componentwise independent finitely
//! supported profits.
//!
//! For each item `i` and each positive realization `c_i^k`, the competing
//! items precede `i` independently, each with an exactly computable
//! probability.  Convolving those Bernoulli sizes gives the preferred-size
//! distribution, from which the expected packing increments and the
//! expected leader objective follow.  Everything on this path is exact
//! rational arithmetic; the overall cost is `O(m^2 n^2 + m n^2 A)`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{Signed, Zero};

use crate::certain::cmp_density;
use crate::dp_core::{packing_profile, SizePmf};
use crate::error::{Error, Result};
use crate::model::{Instance, ItemDistribution, Method, SolveResult, SolveStats};
use crate::rational::Rat;

fn pmfs(inst: &Instance) -> Result<Vec<(&[Rat], &[Rat])>> {
    inst.dists
        .iter()
        .enumerate()
        .map(|(i, dist)| match dist {
            ItemDistribution::FinitePmf { values, probs } => {
                Ok((values.as_slice(), probs.as_slice()))
            }
            other => Err(Error::MethodMismatch {
                item: i,
                expected: "pmf",
                found: other.kind(),
            }),
        })
        .collect()
}

/// Strict exceed probabilities `P(c_j/a_j > c_i^k/a_i)`, indexed
/// `[i][k][j]`, with the `j == i` slot fixed at zero.
///
/// Each entry is the probability mass of item `j`'s realizations with
/// strictly larger profit density than realization `k` of item `i`;
/// comparisons are exact cross multiplications.
pub fn exceed_probs(inst: &Instance) -> Result<Vec<Vec<Vec<Rat>>>> {
    inst.ensure_valid()?;
    let pmfs = pmfs(inst)?;
    Ok((0..inst.n())
        .map(|i| {
            pmfs[i]
                .0
                .iter()
                .map(|cik| {
                    (0..inst.n())
                        .map(|j| {
                            if j == i {
                                Rat::zero()
                            } else {
                                mass_where(&pmfs[j], inst.a[j], cik, inst.a[i], std::cmp::Ordering::Greater)
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect())
}

fn mass_where(
    pmf: &(&[Rat], &[Rat]),
    aj: u64,
    cik: &Rat,
    ai: u64,
    target: std::cmp::Ordering,
) -> Rat {
    pmf.0
        .iter()
        .zip(pmf.1)
        .filter(|(cjl, _)| cmp_density(cjl, aj, cik, ai) == target)
        .map(|(_, p)| p.clone())
        .sum()
}

struct Masses {
    g: Vec<Vec<Rat>>,
    tables_built: u64,
    realizations: u64,
}

/// Inclusion probability of item `j` ahead of item `i` at threshold
/// density `c_i^k / a_i`: strictly denser realizations always precede;
/// equal-density mass precedes exactly when `j < i` (the documented
/// lower-index tie rule, matching the follower ordering).
fn effective_exceed(
    pmf: &(&[Rat], &[Rat]),
    j: usize,
    aj: u64,
    i: usize,
    cik: &Rat,
    ai: u64,
) -> Rat {
    let mut p = mass_where(pmf, aj, cik, ai, std::cmp::Ordering::Greater);
    if j < i {
        p += mass_where(pmf, aj, cik, ai, std::cmp::Ordering::Equal);
    }
    p
}

fn masses_impl(inst: &Instance) -> Result<Masses> {
    let pmfs = pmfs(inst)?;
    let n = inst.n();
    let total = inst.total_size();
    let mut g = vec![vec![Rat::zero(); total as usize + 1]; n];
    let mut memo: BTreeMap<Vec<(u64, Rat)>, Vec<Rat>> = BTreeMap::new();
    let mut tables_built = 0u64;
    let mut realizations = 0u64;

    for i in 0..n {
        let (values, probs) = pmfs[i];
        for (cik, pik) in values.iter().zip(probs) {
            realizations += 1;
            if !cik.is_positive() {
                continue;
            }
            // The table depends only on the multiset of (size, inclusion
            // probability) pairs, so realizations whose threshold falls in
            // the same gap of every competitor's support share one build.
            let mut key: Vec<(u64, Rat)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    (
                        inst.a[j],
                        effective_exceed(&pmfs[j], j, inst.a[j], i, cik, inst.a[i]),
                    )
                })
                .collect();
            key.sort();
            let h = memo.entry(key).or_insert_with_key(|key| {
                tables_built += 1;
                let mut h = SizePmf::point_mass_at_zero(total);
                for (size, include) in key {
                    h.push_item(include, *size);
                }
                h.probs().to_vec()
            });
            for (slot, hb) in g[i].iter_mut().zip(h.iter()) {
                if !hb.is_zero() {
                    *slot += pik.clone() * hb;
                }
            }
        }
    }
    Ok(Masses {
        g,
        tables_built,
        realizations,
    })
}

/// Preferred-size masses `g[i][b]`: the probability that item `i` is
/// profitable and the items packed ahead of it occupy exactly `b` units.
pub fn masses(inst: &Instance) -> Result<Vec<Vec<Rat>>> {
    inst.ensure_valid()?;
    Ok(masses_impl(inst)?.g)
}

/// Exact solve for all-finite marginals.
pub fn solve(inst: &Instance) -> Result<SolveResult<Rat>> {
    let started = Instant::now();
    inst.ensure_valid()?;
    let masses = masses_impl(inst)?;
    let profile = packing_profile(inst, &masses.g)?;
    let (b_star, value) = profile.fhat.maximize(&inst.b_lo, &inst.b_hi)?;
    let total = inst.total_size();
    let stats = SolveStats {
        wall: started.elapsed(),
        scenarios: masses.realizations,
        tables: masses.tables_built,
        table_cells: masses.tables_built * (total + 1),
        profile_breakpoints: profile.fhat.breakpoints().len() as u64,
    };
    Ok(SolveResult {
        method: Method::DpFinite,
        b_star,
        value,
        profile: profile.fhat,
        stats,
    })
}
