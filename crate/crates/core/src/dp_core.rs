//! Shared machinery for the dynamic programming solvers.
//!
//! Both exact solvers walk the same two stages: (1) for each item, the
//! distribution of the total size packed ahead of it, built by folding in
//! one Bernoulli inclusion per competing item; (2) assembly of expected
//! packing increments and the expected leader objective from those tables.
//! Stage 1 is generic over a coefficient ring so the identical recursion
//! runs over exact rationals, floats, and per-cell polynomials.

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::Result;
use crate::model::{Instance, PiecewiseLinear};
use crate::rational::{to_f64, Rat};
use crate::scalar::Scalar;

/// Coefficient ring for [`SizePmf`]: plain probabilities (`Rat`, `f64`) or
/// probabilities that vary polynomially over a grid cell.
pub trait Ring:
    Clone
    + Debug
    + Zero
    + One
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + Zero
        + One
        + for<'a> Add<&'a T, Output = T>
        + for<'a> Sub<&'a T, Output = T>
        + for<'a> Mul<&'a T, Output = T>
{
}

/// Distribution of the total size of a random subset of items, tabulated on
/// `0 ..= capacity`.
///
/// Mass that would land beyond `capacity` is dropped; callers size the
/// table so that never happens.
#[derive(Debug, Clone)]
pub struct SizePmf<T> {
    probs: Vec<T>,
    support_max: usize,
}

impl<T: Ring> SizePmf<T> {
    /// The empty subset: all mass at size zero.
    pub fn point_mass_at_zero(capacity: u64) -> Self {
        let mut probs = vec![T::zero(); capacity as usize + 1];
        probs[0] = T::one();
        Self {
            probs,
            support_max: 0,
        }
    }

    /// Folds in one item that joins the subset with probability `include`
    /// and contributes `size` when it does.
    ///
    /// Only the currently reachable sizes are touched, so a step costs
    /// `O(support)` rather than `O(capacity)`.
    pub fn push_item(&mut self, include: &T, size: u64) {
        let keep = T::one() - include;
        let size = size as usize;
        let reach = (self.support_max + size).min(self.probs.len() - 1);
        for b in (0..=reach).rev() {
            let stay = keep.clone() * &self.probs[b];
            self.probs[b] = if b >= size {
                include.clone() * &self.probs[b - size] + &stay
            } else {
                stay
            };
        }
        self.support_max = reach;
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Applies `f` entrywise, e.g. to collapse polynomial entries to their
    /// integral over the cell.
    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> SizePmf<U> {
        SizePmf {
            probs: self.probs.iter().map(f).collect(),
            support_max: self.support_max,
        }
    }
}

/// Expected packing increments and the induced leader objective.
#[derive(Debug, Clone)]
pub struct PackingProfile<T> {
    /// `xprime[i][b-1]` is the expected increase of item `i`'s packed
    /// fraction when the capacity steps from `b-1` to `b`, for
    /// `b = 1 ..= A`.
    pub xprime: Vec<Vec<T>>,
    /// Expected leader objective on `[0, A]`, linear between consecutive
    /// integers.
    pub fhat: PiecewiseLinear<T>,
}

/// Assembles the expected objective from per-item preferred-size masses.
///
/// `g[i][b]` is the probability that item `i` has positive profit and the
/// competitors packed ahead of it occupy exactly `b` units; entries beyond
/// `g[i].len()` are treated as zero.  Item `i`'s packed fraction grows by
/// `1/a_i` per capacity unit while the capacity interval `(b-1, b]` overlaps
/// its slot, which telescopes to the increment recursion below.
pub fn packing_profile<T: Scalar>(inst: &Instance, g: &[Vec<T>]) -> Result<PackingProfile<T>> {
    inst.ensure_valid()?;
    assert_eq!(g.len(), inst.n(), "one mass table per item");
    let total = inst.total_size() as usize;
    let at = |i: usize, b: isize| -> T {
        if b < 0 {
            T::zero()
        } else {
            g[i].get(b as usize).cloned().unwrap_or_else(T::zero)
        }
    };

    let mut xprime: Vec<Vec<T>> = Vec::with_capacity(inst.n());
    for i in 0..inst.n() {
        let inv_a = T::one() / T::from_u64(inst.a[i]);
        let mut column = Vec::with_capacity(total);
        let mut cur = T::zero();
        for b in 1..=total as isize {
            let gained = at(i, b - 1) - &at(i, b - 1 - inst.a[i] as isize);
            cur = cur + &(inv_a.clone() * &gained);
            column.push(cur.clone());
        }
        xprime.push(column);
    }

    let d: Vec<T> = inst.d.iter().map(|di| T::from_rat(di)).collect();
    let delta = T::from_rat(&inst.delta);
    let mut breakpoints = Vec::with_capacity(total + 1);
    let mut values = Vec::with_capacity(total + 1);
    breakpoints.push(T::zero());
    values.push(T::zero());
    for b in 1..=total {
        let mut step = T::zero() - &delta;
        for i in 0..inst.n() {
            step = step + &(d[i].clone() * &xprime[i][b - 1]);
        }
        breakpoints.push(T::from_u64(b as u64));
        values.push(values.last().expect("nonempty").clone() + &step);
    }
    let fhat = PiecewiseLinear::new(breakpoints, values)?;
    Ok(PackingProfile { xprime, fhat })
}

/// Brute-force preferred-size masses from an explicit joint support, for
/// cross-checking the DP solvers: for each scenario, item `i` contributes
/// its probability to `g[i][sum of sizes packed ahead of i]` whenever its
/// profit is positive.
pub fn masses_from_support(inst: &Instance, support: &[(Vec<Rat>, Rat)]) -> Vec<Vec<Rat>> {
    use num_traits::Signed;
    let total = inst.total_size() as usize;
    let mut g = vec![vec![Rat::zero(); total + 1]; inst.n()];
    for (c, p) in support {
        let ordering = crate::certain::FollowerOrdering::build(&inst.a, c);
        for (k, &i) in ordering.perm.iter().take(ordering.n_pos).enumerate() {
            debug_assert!(c[i].is_positive());
            g[i][ordering.prefix_sums[k] as usize] += p;
        }
    }
    g
}

/// `P(total size of positive-profit items >= t)` for `t = 1 ..= A`, from an
/// explicit joint support.  Equals `sum_i a_i xprime[i][t-1]`, which is the
/// capacity-conservation invariant the tests assert.
pub fn coverage_from_support(inst: &Instance, support: &[(Vec<Rat>, Rat)]) -> Vec<Rat> {
    use num_traits::Signed;
    let total = inst.total_size() as usize;
    let mut coverage = vec![Rat::zero(); total];
    for (c, p) in support {
        let packed: u64 = inst
            .a
            .iter()
            .zip(c)
            .filter(|(_, ci)| ci.is_positive())
            .map(|(&ai, _)| ai)
            .sum();
        for slot in coverage.iter_mut().take(packed as usize) {
            *slot += p;
        }
    }
    coverage
}

/// Converts an exact packing profile to floats, for tolerance comparisons.
pub fn profile_to_f64(fhat: &PiecewiseLinear<Rat>) -> Result<PiecewiseLinear<f64>> {
    PiecewiseLinear::new(
        fhat.breakpoints().iter().map(to_f64).collect(),
        fhat.values().iter().map(to_f64).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ItemDistribution, Polynomial};
    use crate::oracles::{product_expand, PRODUCT_GUARD};
    use crate::rational::{rat, rat_int};

    #[test]
    fn size_pmf_two_fair_items() {
        let mut h = SizePmf::<Rat>::point_mass_at_zero(3);
        let half = rat(1, 2);
        h.push_item(&half, 1);
        h.push_item(&half, 2);
        assert_eq!(h.probs(), &[rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4)]);
    }

    #[test]
    fn size_pmf_truncates_oversized_mass() {
        let mut h = SizePmf::<f64>::point_mass_at_zero(1);
        h.push_item(&0.25, 5);
        assert_eq!(h.probs(), &[0.75, 0.0]);
    }

    #[test]
    fn size_pmf_over_polynomials() {
        // Inclusion probability u on [0, 1]: P(size = 1) = u, P(size = 0) = 1 - u.
        let mut h = SizePmf::<Polynomial<f64>>::point_mass_at_zero(1);
        h.push_item(&Polynomial::new(vec![0.0, 1.0]), 1);
        assert_eq!(h.probs()[0].coeffs(), &[1.0, -1.0]);
        assert_eq!(h.probs()[1].coeffs(), &[0.0, 1.0]);
    }

    #[test]
    fn half_probability_single_item_packs_at_half_rate() {
        // One item of size 2 with positive profit half the time: the
        // expected fraction grows by q/2 per capacity unit.
        let inst = Instance {
            a: vec![2],
            d: vec![rat_int(1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(2),
            dists: vec![ItemDistribution::FinitePmf {
                values: vec![rat_int(0), rat_int(3)],
                probs: vec![rat(2, 3), rat(1, 3)],
            }],
        };
        let g = vec![vec![rat(1, 3)]];
        let profile = packing_profile(&inst, &g).unwrap();
        assert_eq!(profile.xprime[0], vec![rat(1, 6), rat(1, 6)]);
        assert_eq!(profile.fhat.eval(&rat_int(1)).unwrap(), rat(1, 6));
        assert_eq!(profile.fhat.eval(&rat_int(2)).unwrap(), rat(1, 3));
    }

    fn mixed_instance() -> Instance {
        Instance {
            a: vec![2, 3, 1],
            d: vec![rat_int(3), rat_int(-2), rat_int(1)],
            delta: rat(1, 5),
            b_lo: rat_int(0),
            b_hi: rat_int(6),
            dists: vec![
                ItemDistribution::FinitePmf {
                    values: vec![rat_int(0), rat_int(4)],
                    probs: vec![rat(1, 3), rat(2, 3)],
                },
                ItemDistribution::FinitePmf {
                    values: vec![rat_int(1), rat_int(6)],
                    probs: vec![rat(1, 2), rat(1, 2)],
                },
                ItemDistribution::FinitePmf {
                    values: vec![rat_int(2), rat_int(3)],
                    probs: vec![rat(1, 4), rat(3, 4)],
                },
            ],
        }
    }

    #[test]
    fn assembled_profile_matches_support_solver() {
        let inst = mixed_instance();
        let support = product_expand(&inst, PRODUCT_GUARD).unwrap();
        let g = masses_from_support(&inst, &support);
        let profile = packing_profile(&inst, &g).unwrap();

        let fs = crate::finite_support::FiniteSupport::new(support.clone()).unwrap();
        let expected = crate::finite_support::solve(&inst, &fs).unwrap();
        for k in 0..=6 {
            let b = rat_int(k);
            assert_eq!(
                profile.fhat.eval(&b).unwrap(),
                expected.profile.eval(&b).unwrap(),
                "objective differs at b = {k}"
            );
        }
    }

    #[test]
    fn capacity_conservation_holds() {
        let inst = mixed_instance();
        let support = product_expand(&inst, PRODUCT_GUARD).unwrap();
        let g = masses_from_support(&inst, &support);
        let profile = packing_profile(&inst, &g).unwrap();
        let coverage = coverage_from_support(&inst, &support);
        for (t, cov) in coverage.iter().enumerate() {
            let used: Rat = (0..inst.n())
                .map(|i| rat_int(inst.a[i] as i64) * &profile.xprime[i][t])
                .sum();
            assert_eq!(used, *cov, "capacity conservation fails at t = {}", t + 1);
        }
    }
}
