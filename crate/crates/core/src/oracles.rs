//! Independent verification oracles.
//!
//! Everything in this module recomputes expected leader objectives by a
//! route deliberately different from the production solvers: brute-force
//! product expansion, subset counting, permutation-volume summation, and a
//! plain Monte Carlo estimator.  The implementations favour obviousness
//! over speed and are used by the test suites to cross-check the solvers.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certain::FollowerOrdering;
use crate::error::{Error, Result};
use crate::model::{Instance, ItemDistribution, PiecewiseLinear, Polynomial};
use crate::rational::{rat_u64, to_f64, Rat};

/// Default cap on the number of joint scenarios a product expansion may
/// produce.
pub const PRODUCT_GUARD: u64 = 1_000_000;

/// Cap on the item count for the exact permutation oracle over uniform
/// marginals; the cost grows as `n!`.
pub const UNIFORM_PERM_GUARD: u64 = 6;

/// Expands independent per-item pmfs into the explicit joint distribution.
///
/// Scenarios are emitted in odometer order (last item cycling fastest), so
/// the output is deterministic.  Fails if any marginal is not finitely
/// supported or if the scenario count would exceed `limit`.
pub fn product_expand(inst: &Instance, limit: u64) -> Result<Vec<(Vec<Rat>, Rat)>> {
    inst.ensure_valid()?;
    let mut sizes = Vec::with_capacity(inst.n());
    for (i, dist) in inst.dists.iter().enumerate() {
        match dist {
            ItemDistribution::FinitePmf { values, .. } => sizes.push(values.len()),
            other => {
                return Err(Error::MethodMismatch {
                    item: i,
                    expected: "pmf",
                    found: other.kind(),
                })
            }
        }
    }
    let mut count: u64 = 1;
    for &m in &sizes {
        count = count.saturating_mul(m as u64);
    }
    if count > limit {
        return Err(Error::GuardExceeded {
            what: "product expansion scenarios",
            limit,
            actual: count,
        });
    }

    let n = inst.n();
    let mut idx = vec![0usize; n];
    let mut out = Vec::with_capacity(count as usize);
    loop {
        let mut c = Vec::with_capacity(n);
        let mut p = Rat::one();
        for (i, dist) in inst.dists.iter().enumerate() {
            let ItemDistribution::FinitePmf { values, probs } = dist else {
                unreachable!("checked above");
            };
            c.push(values[idx[i]].clone());
            p *= &probs[idx[i]];
        }
        out.push((c, p));
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < sizes[i] {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Counts subsets `S` of `sizes` with `sum(S) <= cap`.
///
/// The empty set counts.  Subset-sum dynamic programming over sums up to
/// `cap`, with `u128` counters so instances up to 127 items cannot
/// overflow.
pub fn count_knapsack(sizes: &[u64], cap: u64) -> u128 {
    let cap = cap as usize;
    let mut ways = vec![0u128; cap + 1];
    ways[0] = 1;
    for &s in sizes {
        let s = s as usize;
        if s > cap {
            continue;
        }
        for t in (s..=cap).rev() {
            ways[t] += ways[t - s];
        }
    }
    ways.iter().sum()
}

/// One bucket of the permutation decomposition: the follower packs exactly
/// the items in `order`, in that order, with total probability `prob`.
#[derive(Debug, Clone)]
pub struct PermutationTerm {
    pub order: Vec<usize>,
    pub prob: Rat,
    pub objective: PiecewiseLinear<Rat>,
}

fn ordering_for_prefix(a: &[u64], packed: &[usize]) -> FollowerOrdering {
    let mut perm = packed.to_vec();
    let mut seen = vec![false; a.len()];
    for &i in packed {
        seen[i] = true;
    }
    perm.extend((0..a.len()).filter(|&i| !seen[i]));
    let mut prefix_sums = Vec::with_capacity(packed.len() + 1);
    prefix_sums.push(0u64);
    for &i in packed {
        prefix_sums.push(prefix_sums.last().expect("nonempty") + a[i]);
    }
    FollowerOrdering {
        perm,
        n_pos: packed.len(),
        prefix_sums,
    }
}

/// Decomposes the expectation over the follower's realized packing order.
///
/// The packing vector, and hence the leader objective, depends on the
/// profit draw only through the ordered list of positive-profit items.
/// Grouping scenarios by that list gives `E[f] = sum_pi p_pi f_pi` with few
/// distinct terms.  Supported marginals: all finitely supported (exact
/// product expansion, at most [`PRODUCT_GUARD`] scenarios), or all uniform
/// on nonnegative intervals with at most [`UNIFORM_PERM_GUARD`] items
/// (exact order-statistic volumes by iterated polynomial integration).
pub fn permutation_terms(inst: &Instance) -> Result<Vec<PermutationTerm>> {
    inst.ensure_valid()?;
    if inst.dists.iter().all(|d| d.kind() == "pmf") {
        return permutation_terms_finite(inst);
    }
    if inst.dists.iter().all(|d| d.kind() == "uniform") {
        return permutation_terms_uniform(inst);
    }
    Err(Error::Unsupported(
        "permutation oracle needs all-pmf or all-uniform marginals".into(),
    ))
}

/// Expected leader objective `sum_pi p_pi f_pi` from [`permutation_terms`].
pub fn permutation_expectation(inst: &Instance) -> Result<PiecewiseLinear<Rat>> {
    let terms = permutation_terms(inst)?;
    let weighted: Vec<(Rat, &PiecewiseLinear<Rat>)> = terms
        .iter()
        .map(|t| (t.prob.clone(), &t.objective))
        .collect();
    PiecewiseLinear::weighted_sum(&weighted)
}

fn permutation_terms_finite(inst: &Instance) -> Result<Vec<PermutationTerm>> {
    let scenarios = product_expand(inst, PRODUCT_GUARD)?;
    let mut buckets: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
    for (c, p) in scenarios {
        let ordering = FollowerOrdering::build(&inst.a, &c);
        let key = ordering.perm[..ordering.n_pos].to_vec();
        *buckets.entry(key).or_insert_with(Rat::zero) += &p;
    }
    buckets
        .into_iter()
        .map(|(order, prob)| {
            let ordering = ordering_for_prefix(&inst.a, &order);
            let objective = crate::certain::objective_from_ordering(inst, &ordering)?;
            Ok(PermutationTerm {
                order,
                prob,
                objective,
            })
        })
        .collect()
}

/// Piecewise polynomial on a fixed grid of cut points, in the local
/// coordinate `t - cut[j]` on each cell, zero below the grid and constant
/// `tail` above it.
struct GridFn {
    polys: Vec<Polynomial<Rat>>,
    tail: Rat,
}

struct DensityGrid {
    cuts: Vec<Rat>,
    widths: Vec<Rat>,
}

impl DensityGrid {
    fn new(endpoints: &[(Rat, Rat)]) -> Self {
        let mut cuts: Vec<Rat> = endpoints
            .iter()
            .flat_map(|(lo, hi)| [lo.clone(), hi.clone()])
            .collect();
        cuts.sort();
        cuts.dedup();
        let widths = cuts.windows(2).map(|w| w[1].clone() - &w[0]).collect();
        Self { cuts, widths }
    }

    fn cdf_fn(&self, lo: &Rat, hi: &Rat) -> GridFn {
        let inv_w = Rat::one() / (hi.clone() - lo);
        let polys = self
            .cuts
            .windows(2)
            .map(|cell| {
                if cell[1] <= *lo {
                    Polynomial::zero()
                } else if cell[0] >= *hi {
                    Polynomial::constant(Rat::one())
                } else {
                    Polynomial::new(vec![(cell[0].clone() - lo) * &inv_w, inv_w.clone()])
                }
            })
            .collect();
        GridFn {
            polys,
            tail: Rat::one(),
        }
    }

    /// `out(t) = integral_{-inf}^{t} density_[lo,hi](s) inner(s) ds`.
    fn integrate_against(&self, lo: &Rat, hi: &Rat, inner: &GridFn) -> GridFn {
        let dens = Rat::one() / (hi.clone() - lo);
        let mut acc = Rat::zero();
        let mut polys = Vec::with_capacity(inner.polys.len());
        for (j, cell) in self.cuts.windows(2).enumerate() {
            let piece = if cell[0] >= *lo && cell[1] <= *hi {
                Polynomial::constant(acc.clone()) + inner.polys[j].antiderivative().scale(&dens)
            } else {
                Polynomial::constant(acc.clone())
            };
            acc = piece.eval(&self.widths[j]);
            polys.push(piece);
        }
        GridFn { polys, tail: acc }
    }
}

fn permutation_terms_uniform(inst: &Instance) -> Result<Vec<PermutationTerm>> {
    let n = inst.n();
    if n as u64 > UNIFORM_PERM_GUARD {
        return Err(Error::GuardExceeded {
            what: "permutation oracle items",
            limit: UNIFORM_PERM_GUARD,
            actual: n as u64,
        });
    }
    let mut bounds = Vec::with_capacity(n);
    for (i, dist) in inst.dists.iter().enumerate() {
        let ItemDistribution::UniformInterval { lo, hi } = dist else {
            return Err(Error::MethodMismatch {
                item: i,
                expected: "uniform",
                found: dist.kind(),
            });
        };
        if lo.is_negative() {
            return Err(Error::Unsupported(
                "permutation oracle needs nonnegative uniform supports".into(),
            ));
        }
        let ai = rat_u64(inst.a[i]);
        bounds.push((lo.clone() / &ai, hi.clone() / &ai));
    }
    let grid = DensityGrid::new(&bounds);

    let mut terms = Vec::new();
    for order in permutations(n) {
        let last = order[n - 1];
        let mut chain = grid.cdf_fn(&bounds[last].0, &bounds[last].1);
        for &i in order[..n - 1].iter().rev() {
            chain = grid.integrate_against(&bounds[i].0, &bounds[i].1, &chain);
        }
        let prob = chain.tail;
        if prob.is_zero() {
            continue;
        }
        let ordering = ordering_for_prefix(&inst.a, &order);
        let objective = crate::certain::objective_from_ordering(inst, &ordering)?;
        terms.push(PermutationTerm {
            order,
            prob,
            objective,
        });
    }
    Ok(terms)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                extend(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Monte Carlo estimate of the expected leader objective at one capacity.
#[derive(Debug, Clone)]
pub struct McEstimate {
    pub b: Rat,
    pub mean: f64,
    pub std_err: f64,
}

const MC_BLOCK: u64 = 4096;

/// Monte Carlo estimates of `E[f(b)]` at each requested capacity.
///
/// Draws are generated in fixed-size blocks, one counter stream per block,
/// and block results are merged in block order; the estimate therefore
/// depends only on `(instance, bs, n_samples, seed)`, not on thread count.
/// This is a statistical estimator in `f64`; density ties are broken toward
/// the smaller index but floating-point rounding may resolve exact rational
/// ties differently than the exact solvers, so use tie-free instances for
/// tight cross-checks.
pub fn monte_carlo_objective(
    inst: &Instance,
    bs: &[Rat],
    n_samples: u64,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    inst.ensure_valid()?;
    if n_samples < 2 {
        return Err(Error::Sampler(
            "Monte Carlo needs at least two samples".into(),
        ));
    }
    let n = inst.n();
    let a_f: Vec<f64> = inst.a.iter().map(|&a| a as f64).collect();
    let d_f: Vec<f64> = inst.d.iter().map(to_f64).collect();
    let delta_f = to_f64(&inst.delta);
    let bs_f: Vec<f64> = bs.iter().map(to_f64).collect();

    let n_blocks = n_samples.div_ceil(MC_BLOCK);
    let block_sums: Vec<(Vec<f64>, Vec<f64>)> = (0..n_blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let draws = (n_samples - block * MC_BLOCK).min(MC_BLOCK);
            let mut sums = vec![0.0; bs_f.len()];
            let mut sumsqs = vec![0.0; bs_f.len()];
            let mut c = vec![0.0f64; n];
            let mut perm: Vec<usize> = Vec::with_capacity(n);
            for _ in 0..draws {
                for (ci, dist) in c.iter_mut().zip(&inst.dists) {
                    *ci = dist.sample_f64(&mut rng);
                }
                perm.clear();
                perm.extend(0..n);
                perm.sort_by(|&i, &j| {
                    (c[j] * a_f[i])
                        .partial_cmp(&(c[i] * a_f[j]))
                        .expect("finite densities")
                        .then(i.cmp(&j))
                });
                let n_pos = perm.iter().take_while(|&&i| c[i] > 0.0).count();
                let mut pa = Vec::with_capacity(n_pos + 1);
                let mut pd = Vec::with_capacity(n_pos + 1);
                pa.push(0.0);
                pd.push(0.0);
                for &i in perm.iter().take(n_pos) {
                    pa.push(pa.last().expect("nonempty") + a_f[i]);
                    pd.push(pd.last().expect("nonempty") + d_f[i]);
                }
                for (slot, &b) in bs_f.iter().enumerate() {
                    let k = pa.partition_point(|&s| s <= b) - 1;
                    let mut val = pd[k];
                    if k < n_pos {
                        let i = perm[k];
                        val += (b - pa[k]) / a_f[i] * d_f[i];
                    }
                    val -= delta_f * b;
                    sums[slot] += val;
                    sumsqs[slot] += val * val;
                }
            }
            (sums, sumsqs)
        })
        .collect();

    let mut sums = vec![0.0; bs_f.len()];
    let mut sumsqs = vec![0.0; bs_f.len()];
    for (s, q) in &block_sums {
        for i in 0..bs_f.len() {
            sums[i] += s[i];
            sumsqs[i] += q[i];
        }
    }
    let nf = n_samples as f64;
    Ok(bs
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mean = sums[i] / nf;
            let var = ((sumsqs[i] - sums[i] * sums[i] / nf) / (nf - 1.0)).max(0.0);
            McEstimate {
                b: b.clone(),
                mean,
                std_err: (var / nf).sqrt(),
            }
        })
        .collect())
}

/// Mean of a [`FollowerOrdering`]-free exact profile over a support, for
/// spot checks: evaluates `sum_c p_c f^c(b)` directly without building the
/// breakpoint union.
pub fn pointwise_expectation(
    inst: &Instance,
    support: &[(Vec<Rat>, Rat)],
    b: &Rat,
) -> Result<Rat> {
    inst.ensure_valid()?;
    let mut total = Rat::zero();
    for (c, p) in support {
        let f = crate::certain::leader_objective(inst, c)?;
        total += f.eval(b)? * p;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_support::FiniteSupport;
    use crate::rational::{rat, rat_int};

    fn pmf(pairs: &[(i64, (i64, i64))]) -> ItemDistribution {
        ItemDistribution::FinitePmf {
            values: pairs.iter().map(|&(v, _)| rat_int(v)).collect(),
            probs: pairs.iter().map(|&(_, (n, d))| rat(n, d)).collect(),
        }
    }

    fn finite_instance() -> Instance {
        Instance {
            a: vec![1, 2],
            d: vec![rat_int(2), rat_int(-1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(3),
            dists: vec![pmf(&[(0, (1, 2)), (2, (1, 2))]), pmf(&[(1, (1, 1))])],
        }
    }

    #[test]
    fn product_expansion_enumerates_and_guards() {
        let inst = finite_instance();
        let scenarios = product_expand(&inst, PRODUCT_GUARD).unwrap();
        assert_eq!(scenarios.len(), 2);
        let mass: Rat = scenarios.iter().map(|(_, p)| p.clone()).sum();
        assert!(mass.is_one());
        assert_eq!(scenarios[0].0, vec![rat_int(0), rat_int(1)]);
        assert_eq!(scenarios[1].0, vec![rat_int(2), rat_int(1)]);

        assert!(matches!(
            product_expand(&inst, 1),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn subset_counting_matches_enumeration() {
        assert_eq!(count_knapsack(&[1, 2, 3], 3), 5);
        assert_eq!(count_knapsack(&[1, 2, 3], 6), 8);
        assert_eq!(count_knapsack(&[1, 2, 3], 0), 1);
        assert_eq!(count_knapsack(&[5, 5], 4), 1);
        // 2^20 subsets of twenty unit sizes fit under the cap.
        assert_eq!(count_knapsack(&vec![1; 20], 20), 1 << 20);
    }

    #[test]
    fn finite_permutation_terms_sum_to_one() {
        let inst = finite_instance();
        let terms = permutation_terms(&inst).unwrap();
        assert_eq!(terms.len(), 2);
        let mass: Rat = terms.iter().map(|t| t.prob.clone()).sum();
        assert!(mass.is_one());
        let orders: Vec<&[usize]> = terms.iter().map(|t| t.order.as_slice()).collect();
        assert!(orders.contains(&&[1][..]));
        assert!(orders.contains(&&[0, 1][..]));

        let f = permutation_expectation(&inst).unwrap();
        assert_eq!(f.eval(&rat_int(0)).unwrap(), rat_int(0));
        assert_eq!(f.eval(&rat_int(1)).unwrap(), rat(3, 4));
        assert_eq!(f.eval(&rat_int(2)).unwrap(), rat(1, 4));
        assert_eq!(f.eval(&rat_int(3)).unwrap(), rat_int(0));
    }

    #[test]
    fn finite_permutation_matches_support_solver() {
        let inst = Instance {
            a: vec![2, 3, 1],
            d: vec![rat_int(3), rat_int(-2), rat_int(1)],
            delta: rat(1, 5),
            b_lo: rat_int(0),
            b_hi: rat_int(6),
            dists: vec![
                pmf(&[(0, (1, 3)), (4, (2, 3))]),
                pmf(&[(1, (1, 2)), (6, (1, 2))]),
                pmf(&[(2, (1, 4)), (3, (3, 4))]),
            ],
        };
        let by_perm = permutation_expectation(&inst).unwrap();
        let support = FiniteSupport::new(product_expand(&inst, PRODUCT_GUARD).unwrap()).unwrap();
        let by_support = crate::finite_support::solve(&inst, &support).unwrap();
        for k in 0..=12 {
            let b = rat(k, 2);
            assert_eq!(
                by_perm.eval(&b).unwrap(),
                by_support.profile.eval(&b).unwrap(),
                "profiles differ at b = {k}/2"
            );
        }
    }

    #[test]
    fn uniform_permutation_volumes_by_hand() {
        // Densities: item 0 uniform on [0, 2], item 1 uniform on [1, 2].
        let inst = Instance {
            a: vec![1, 1],
            d: vec![rat_int(1), rat_int(1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(2),
            dists: vec![
                ItemDistribution::UniformInterval {
                    lo: rat_int(0),
                    hi: rat_int(2),
                },
                ItemDistribution::UniformInterval {
                    lo: rat_int(1),
                    hi: rat_int(2),
                },
            ],
        };
        let terms = permutation_terms(&inst).unwrap();
        let mass: Rat = terms.iter().map(|t| t.prob.clone()).sum();
        assert!(mass.is_one());
        for t in &terms {
            let expected = if t.order == [0, 1] { rat(1, 4) } else { rat(3, 4) };
            assert_eq!(t.prob, expected, "order {:?}", t.order);
        }
    }

    #[test]
    fn uniform_permutation_drops_impossible_orders() {
        // Item 0's density lives on [0, 1], item 1's on [2, 3].
        let inst = Instance {
            a: vec![1, 1],
            d: vec![rat_int(1), rat_int(1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(2),
            dists: vec![
                ItemDistribution::UniformInterval {
                    lo: rat_int(0),
                    hi: rat_int(1),
                },
                ItemDistribution::UniformInterval {
                    lo: rat_int(2),
                    hi: rat_int(3),
                },
            ],
        };
        let terms = permutation_terms(&inst).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].order, vec![1, 0]);
        assert!(terms[0].prob.is_one());
    }

    #[test]
    fn uniform_three_item_volumes_sum_to_one() {
        let inst = Instance {
            a: vec![1, 2, 1],
            d: vec![rat_int(1), rat_int(2), rat_int(-1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(4),
            dists: vec![
                ItemDistribution::UniformInterval {
                    lo: rat_int(0),
                    hi: rat_int(1),
                },
                ItemDistribution::UniformInterval {
                    lo: rat_int(0),
                    hi: rat_int(4),
                },
                ItemDistribution::UniformInterval {
                    lo: rat_int(1),
                    hi: rat_int(3),
                },
            ],
        };
        let terms = permutation_terms(&inst).unwrap();
        let mass: Rat = terms.iter().map(|t| t.prob.clone()).sum();
        assert!(mass.is_one(), "mass = {mass}");
        assert!(terms.len() <= 6);
        assert!(terms.iter().all(|t| t.prob.is_positive()));
    }

    #[test]
    fn monte_carlo_is_exact_on_point_masses() {
        let inst = Instance {
            a: vec![1, 2],
            d: vec![rat_int(2), rat_int(-1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(3),
            dists: vec![pmf(&[(5, (1, 1))]), pmf(&[(1, (1, 1))])],
        };
        let bs = vec![rat_int(1), rat_int(2), rat_int(3)];
        let est = monte_carlo_objective(&inst, &bs, 100, 42).unwrap();
        assert_eq!(est[0].mean, 2.0);
        assert_eq!(est[1].mean, 1.5);
        assert_eq!(est[2].mean, 1.0);
        for e in &est {
            assert_eq!(e.std_err, 0.0);
        }
    }

    #[test]
    fn monte_carlo_is_seed_deterministic_and_consistent() {
        let inst = Instance {
            a: vec![1, 1],
            d: vec![rat_int(2), rat_int(1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(2),
            dists: vec![
                ItemDistribution::UniformInterval {
                    lo: rat_int(0),
                    hi: rat_int(2),
                },
                ItemDistribution::UniformInterval {
                    lo: rat_int(1),
                    hi: rat_int(2),
                },
            ],
        };
        let bs = vec![rat_int(1)];
        let a = monte_carlo_objective(&inst, &bs, 10_000, 7).unwrap();
        let b = monte_carlo_objective(&inst, &bs, 10_000, 7).unwrap();
        assert_eq!(a[0].mean, b[0].mean);
        assert_eq!(a[0].std_err, b[0].std_err);

        // At b = 1 the follower packs whichever unit-size item is denser,
        // so f(1) = 2 with probability 1/4 and 1 otherwise.
        let exact = permutation_expectation(&inst).unwrap();
        assert_eq!(exact.eval(&rat_int(1)).unwrap(), rat(5, 4));
        let target = to_f64(&exact.eval(&rat_int(1)).unwrap());
        assert!(
            (a[0].mean - target).abs() < 5.0 * a[0].std_err + 1e-12,
            "mc {} vs exact {} (se {})",
            a[0].mean,
            target,
            a[0].std_err
        );
    }

    #[test]
    fn pointwise_expectation_matches_profile() {
        let inst = finite_instance();
        let support = product_expand(&inst, PRODUCT_GUARD).unwrap();
        assert_eq!(
            pointwise_expectation(&inst, &support, &rat(3, 2)).unwrap(),
            rat(1, 2)
        );
    }
}
