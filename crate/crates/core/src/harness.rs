//! Counting-reduction instance families with closed-form answers.
//!
//! Appending one item of size `s = sum(a*)` to a base vector `a*` and
//! drawing profits so that each original item outranks the big item with
//! probability one half turns the expected objective's slope at `b* + 1`
//! into an affine function of `#{x in {0,1}^m : a*^T x <= b*}`.  Solving the
//! built instance and inverting that affine map must therefore reproduce
//! the exact subset count, which exercises the solvers against an
//! independent combinatorial oracle.
//!
//! Two profit families realize this: a finite one where every profit is
//! `eps = 1/(2s)` or `1` with probability one half each, and a continuous
//! one with `c_i ~ U[a_i/(2s), 3a_i/(2s)]` and a near-degenerate interval
//! around `1` for the big item.  They differ in the weight their subset
//! events carry: the finite family gives the full set an extra `1/2` (the
//! big item's own profit can collapse to `eps`), so a count recovered from
//! the slope scales by `2^m` there and by `2^(m-1)` on the continuous
//! family, where all `2^m` subsets are uniform.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{Instance, ItemDistribution};
use crate::oracles::count_knapsack;
use crate::rational::{rat, rat_u64, to_f64, Rat};

/// Absolute slope tolerance on the continuous path, where the fixed unit
/// profit of the big item is approximated by a width-`2e-9` interval and
/// the solver runs in doubles.
pub const CONTINUOUS_SLOPE_TOL: f64 = 1e-4;

/// Half-width of the interval standing in for the big item's fixed unit
/// profit on the continuous variant.
pub const UNIT_PROFIT_HALF_WIDTH: (i64, i64) = (1, 1_000_000_000);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionVariant {
    Finite,
    Continuous,
}

/// A built reduction instance together with its defining parameters.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub a_star: Vec<u64>,
    pub b_star: u64,
    pub tau: Rat,
    pub variant: ReductionVariant,
    pub instance: Instance,
}

/// Builds the `m + 1`-item instance whose objective slope at `b* + 1`
/// encodes `#{x : a*^T x <= b*}`.
///
/// Items `1..=m` carry the base sizes with packing weights `(1 + tau) a_i`;
/// the extra item has size `s = sum(a*)`, weight `(tau - 1) s`, and the
/// capacity ranges over `[0, s]` at zero rent.
pub fn build_reduction(
    a_star: &[u64],
    b_star: u64,
    tau: &Rat,
    variant: ReductionVariant,
) -> Result<ReductionInstance> {
    if a_star.is_empty() || a_star.iter().any(|&a| a == 0) {
        return Err(Error::Reduction(
            "base sizes must be positive integers".into(),
        ));
    }
    let s: u64 = a_star.iter().sum();
    if b_star >= s {
        return Err(Error::Reduction(format!(
            "target {b_star} must be smaller than the total base size {s}"
        )));
    }
    if tau.abs() > Rat::one() {
        return Err(Error::Reduction(format!(
            "tau must lie in [-1, 1], got {tau}"
        )));
    }

    let mut a = a_star.to_vec();
    a.push(s);
    let mut d: Vec<Rat> = a_star
        .iter()
        .map(|&ai| (Rat::one() + tau) * rat_u64(ai))
        .collect();
    d.push((tau.clone() - Rat::one()) * rat_u64(s));

    let dists: Vec<ItemDistribution> = match variant {
        ReductionVariant::Finite => {
            let eps = Rat::one() / rat_u64(2 * s);
            let two_point = ItemDistribution::FinitePmf {
                values: vec![eps, Rat::one()],
                probs: vec![rat(1, 2), rat(1, 2)],
            };
            vec![two_point; a_star.len() + 1]
        }
        ReductionVariant::Continuous => {
            let half_width = rat(UNIT_PROFIT_HALF_WIDTH.0, UNIT_PROFIT_HALF_WIDTH.1);
            let mut dists: Vec<ItemDistribution> = a_star
                .iter()
                .map(|&ai| ItemDistribution::UniformInterval {
                    lo: rat_u64(ai) / rat_u64(2 * s),
                    hi: rat_u64(3 * ai) / rat_u64(2 * s),
                })
                .collect();
            dists.push(ItemDistribution::UniformInterval {
                lo: Rat::one() - &half_width,
                hi: Rat::one() + &half_width,
            });
            dists
        }
    };

    let instance = Instance {
        a,
        d,
        delta: Rat::zero(),
        b_lo: Rat::zero(),
        b_hi: rat_u64(s),
        dists,
    };
    instance.ensure_valid()?;
    Ok(ReductionInstance {
        a_star: a_star.to_vec(),
        b_star,
        tau: tau.clone(),
        variant,
        instance,
    })
}

/// Outcome of checking the slope identity on one reduction instance.
#[derive(Debug, Clone)]
pub struct SlopeReport {
    pub variant: ReductionVariant,
    /// Slope of the solved profile on `(b*, b* + 1]`.
    pub measured_slope: f64,
    /// `1 + tau - count / w` with the variant's subset weight `w`.
    pub closed_form_slope: f64,
    /// Count read back off the measured slope, `w (1 + tau - slope)`.
    pub recovered_count: f64,
    /// `#{x : a*^T x <= b*}` from the subset-sum counting oracle.
    pub true_count: u128,
    pub pass: bool,
}

/// Solves the reduction instance and checks its slope at `b* + 1` against
/// the closed form; exact equality is demanded on the finite path, the
/// pinned `CONTINUOUS_SLOPE_TOL` on the continuous one, and in both cases
/// the recovered count must round to the true count.
pub fn check_slope_identity(red: &ReductionInstance) -> Result<SlopeReport> {
    let true_count = count_knapsack(&red.a_star, red.b_star);
    let m = red.a_star.len();
    match red.variant {
        ReductionVariant::Finite => {
            let solved = crate::dp_finite::solve(&red.instance)?;
            let at = |b: u64| solved.profile.eval(&rat_u64(b));
            let slope = at(red.b_star + 1)? - at(red.b_star)?;
            // Subset weight 1/2^m: every proper subset of the base items
            // appears with probability 1/2^(m+1), and the slope counts each
            // twice (gain flips to loss).
            let weight = Rat::from_integer(num_bigint::BigInt::one() << m);
            let closed = Rat::one() + &red.tau - &(count_to_rat(true_count) / &weight);
            let recovered = weight * &(Rat::one() + &red.tau - &slope);
            let pass = slope == closed && recovered == count_to_rat(true_count);
            Ok(SlopeReport {
                variant: red.variant,
                measured_slope: to_f64(&slope),
                closed_form_slope: to_f64(&closed),
                recovered_count: to_f64(&recovered),
                true_count,
                pass,
            })
        }
        ReductionVariant::Continuous => {
            let solved = crate::dp_uniform::solve(&red.instance)?;
            let at = |b: u64| solved.profile.eval(&(b as f64));
            let slope = at(red.b_star + 1)? - at(red.b_star)?;
            // All 2^m subsets are uniform here, so each contributes
            // 2/2^m = 1/2^(m-1) to the slope deficit.
            let weight = (1u128 << (m - 1)) as f64;
            let tau = to_f64(&red.tau);
            let closed = 1.0 + tau - true_count as f64 / weight;
            let recovered = weight * (1.0 + tau - slope);
            let pass = (slope - closed).abs() <= CONTINUOUS_SLOPE_TOL
                && recovered.round() == true_count as f64;
            Ok(SlopeReport {
                variant: red.variant,
                measured_slope: slope,
                closed_form_slope: closed,
                recovered_count: recovered,
                true_count,
                pass,
            })
        }
    }
}

fn count_to_rat(count: u128) -> Rat {
    Rat::from_integer(num_bigint::BigInt::from(count))
}

/// Integer-step slopes of a solved finite-variant profile on `[0, b_hi]`.
pub fn finite_profile_slopes(red: &ReductionInstance) -> Result<Vec<Rat>> {
    let solved = crate::dp_finite::solve(&red.instance)?;
    let s: u64 = red.a_star.iter().sum();
    let mut slopes = Vec::with_capacity(s as usize);
    for b in 1..=s {
        let hi = solved.profile.eval(&rat_u64(b))?;
        let lo = solved.profile.eval(&rat_u64(b - 1))?;
        slopes.push(hi - lo);
    }
    Ok(slopes)
}
