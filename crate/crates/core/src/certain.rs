//! The deterministic problem: follower's greedy packing for a known profit
//! vector and the induced leader objective.
//!
//! For fixed profits `c` the follower packs items in order of decreasing
//! profit density `c_i / a_i`, so the leader's value `d^T x(b) - delta * b`
//! is piecewise linear in the capacity `b` with vertices at the prefix sums
//! of the packed sizes.  Everything here is exact rational arithmetic;
//! density comparisons use cross multiplication, never division.

use std::cmp::Ordering;
use std::time::Instant;

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::model::{Instance, Method, PiecewiseLinear, SolveResult, SolveStats};
use crate::rational::{rat_u64, Rat};

/// Follower's packing order for one profit vector.
#[derive(Debug, Clone)]
pub struct FollowerOrdering {
    /// Item indices sorted by decreasing profit density, ties broken toward
    /// the smaller index.
    pub perm: Vec<usize>,
    /// Number of leading items with strictly positive profit; only these are
    /// ever packed.
    pub n_pos: usize,
    /// `prefix_sums[k] = a_{perm[0]} + ... + a_{perm[k-1]}` for
    /// `k = 0 ..= n_pos`.
    pub prefix_sums: Vec<u64>,
}

/// Compares profit densities `c_i / a_i` and `c_j / a_j` exactly.
pub fn cmp_density(ci: &Rat, ai: u64, cj: &Rat, aj: u64) -> Ordering {
    (ci.clone() * rat_u64(aj)).cmp(&(cj.clone() * rat_u64(ai)))
}

impl FollowerOrdering {
    pub fn build(a: &[u64], c: &[Rat]) -> Self {
        assert_eq!(a.len(), c.len(), "size and profit vectors must match");
        let mut perm: Vec<usize> = (0..a.len()).collect();
        perm.sort_by(|&i, &j| {
            cmp_density(&c[i], a[i], &c[j], a[j])
                .reverse()
                .then(i.cmp(&j))
        });
        let n_pos = perm
            .iter()
            .take_while(|&&i| c[i].is_positive())
            .count();
        let mut prefix_sums = Vec::with_capacity(n_pos + 1);
        prefix_sums.push(0);
        for &i in perm.iter().take(n_pos) {
            prefix_sums.push(prefix_sums.last().expect("nonempty") + a[i]);
        }
        Self {
            perm,
            n_pos,
            prefix_sums,
        }
    }
}

/// Solves the follower's continuous knapsack for capacity `b`.
///
/// Returns the greedy-optimal packing vector `x` with at most one
/// fractional entry; items with nonpositive profit stay at zero.
pub fn follower_solve(inst: &Instance, c: &[Rat], b: &Rat) -> Result<Vec<Rat>> {
    inst.ensure_valid()?;
    let ordering = FollowerOrdering::build(&inst.a, c);
    let mut x = vec![Rat::zero(); inst.n()];
    let mut remaining = b.clone();
    for &i in ordering.perm.iter().take(ordering.n_pos) {
        if !remaining.is_positive() {
            break;
        }
        let size = rat_u64(inst.a[i]);
        if remaining >= size {
            x[i] = Rat::one();
            remaining -= size;
        } else {
            x[i] = remaining / size;
            break;
        }
    }
    Ok(x)
}

/// Leader objective `f(b) = d^T x(b) - delta * b` on `[0, A]` for fixed
/// profits `c`.
///
/// Breakpoints are exactly `{0}`, the prefix sums of the packed item sizes,
/// and `A`; beyond the last packed item the function continues with slope
/// `-delta`.
pub fn leader_objective(inst: &Instance, c: &[Rat]) -> Result<PiecewiseLinear<Rat>> {
    inst.ensure_valid()?;
    let ordering = FollowerOrdering::build(&inst.a, c);
    objective_from_ordering(inst, &ordering)
}

pub(crate) fn objective_from_ordering(
    inst: &Instance,
    ordering: &FollowerOrdering,
) -> Result<PiecewiseLinear<Rat>> {
    let total = inst.total_size();
    let mut breakpoints = vec![Rat::zero()];
    let mut values = vec![Rat::zero()];
    for (k, &i) in ordering.perm.iter().take(ordering.n_pos).enumerate() {
        let at = rat_u64(ordering.prefix_sums[k + 1]);
        let v = values.last().expect("nonempty").clone() + &inst.d[i]
            - (inst.delta.clone() * rat_u64(inst.a[i]));
        breakpoints.push(at);
        values.push(v);
    }
    let packed = *ordering.prefix_sums.last().expect("nonempty");
    if packed < total {
        let tail = rat_u64(total - packed);
        let v = values.last().expect("nonempty").clone() - (inst.delta.clone() * &tail);
        breakpoints.push(rat_u64(total));
        values.push(v);
    }
    PiecewiseLinear::new(breakpoints, values)
}

/// Maximizes the deterministic leader objective over `[b_lo, b_hi]`.
pub fn solve(inst: &Instance, c: &[Rat]) -> Result<SolveResult<Rat>> {
    let started = Instant::now();
    let profile = leader_objective(inst, c)?;
    let (b_star, value) = profile.maximize(&inst.b_lo, &inst.b_hi)?;
    let stats = SolveStats {
        wall: started.elapsed(),
        scenarios: 1,
        profile_breakpoints: profile.breakpoints().len() as u64,
        ..SolveStats::default()
    };
    Ok(SolveResult {
        method: Method::Certain,
        b_star,
        value,
        profile,
        stats,
    })
}
