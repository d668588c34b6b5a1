//! Problem instances, item profit distributions, validation, and the shared
//! solver result types.

use std::fmt;
use std::time::Duration;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{from_f64, rat_u64, to_f64, Rat};

mod io;
mod normal;
pub mod poly;
pub mod pwl;

pub use io::{instance_from_json, instance_to_json, support_from_json, support_to_json};
pub use poly::{PiecewisePolynomial, Polynomial};
pub use pwl::PiecewiseLinear;

/// Marginal profit distribution of one item.
///
/// Profits of different items are always independent; the joint law of an
/// instance is the product of its item distributions.
#[derive(Debug, Clone, PartialEq)]
pub enum ItemDistribution {
    /// Finitely many rational realizations with rational probabilities.
    FinitePmf { values: Vec<Rat>, probs: Vec<Rat> },
    /// Continuous uniform distribution on `[lo, hi]`.
    UniformInterval { lo: Rat, hi: Rat },
    /// Named built-in continuous distribution exposed through CDF and
    /// quantile evaluations only.
    Oracle(BuiltinOracle),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinOracle {
    Exponential { rate: f64 },
    Normal { mean: f64, std_dev: f64 },
}

impl ItemDistribution {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::FinitePmf { .. } => "pmf",
            Self::UniformInterval { .. } => "uniform",
            Self::Oracle(_) => "builtin_oracle",
        }
    }

    /// Right-continuous CDF `P(c <= t)`.
    ///
    /// For the finitely supported and uniform variants the comparison is
    /// performed in exact arithmetic and only the final result is rounded.
    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            Self::FinitePmf { values, probs } => {
                let Some(t) = from_f64(t) else {
                    return if t > 0.0 { 1.0 } else { 0.0 };
                };
                let mut acc = Rat::zero();
                for (v, p) in values.iter().zip(probs) {
                    if *v <= t {
                        acc += p;
                    }
                }
                to_f64(&acc)
            }
            Self::UniformInterval { lo, hi } => {
                let (lo, hi) = (to_f64(lo), to_f64(hi));
                ((t - lo) / (hi - lo)).clamp(0.0, 1.0)
            }
            Self::Oracle(BuiltinOracle::Exponential { rate }) => {
                if t <= 0.0 {
                    0.0
                } else {
                    -f64::exp_m1(-rate * t)
                }
            }
            Self::Oracle(BuiltinOracle::Normal { mean, std_dev }) => {
                normal::normal_cdf((t - mean) / std_dev)
            }
        }
    }

    /// Generalized inverse CDF `Q(p) = inf { t : p <= F(t) }` for
    /// `p in (0, 1)`.
    pub fn quantile(&self, p: f64) -> f64 {
        assert!(p > 0.0 && p < 1.0, "quantile needs p in (0, 1), got {p}");
        match self {
            Self::FinitePmf { values, probs } => {
                let target = from_f64(p).expect("finite p");
                let mut order: Vec<usize> = (0..values.len()).collect();
                order.sort_by(|&i, &j| values[i].cmp(&values[j]));
                let mut acc = Rat::zero();
                for &k in &order {
                    acc += &probs[k];
                    if target <= acc {
                        return to_f64(&values[k]);
                    }
                }
                to_f64(&values[*order.last().expect("nonempty pmf")])
            }
            Self::UniformInterval { lo, hi } => {
                let (lo, hi) = (to_f64(lo), to_f64(hi));
                lo + p * (hi - lo)
            }
            Self::Oracle(BuiltinOracle::Exponential { rate }) => -f64::ln_1p(-p) / rate,
            Self::Oracle(BuiltinOracle::Normal { mean, std_dev }) => {
                mean + std_dev * normal::normal_quantile(p)
            }
        }
    }

    /// Draws one profit as a double.
    pub fn sample_f64(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Self::FinitePmf { .. } => to_f64(&self.sample_rat(rng)),
            Self::UniformInterval { lo, hi } => {
                let (lo, hi) = (to_f64(lo), to_f64(hi));
                lo + rng.random::<f64>() * (hi - lo)
            }
            Self::Oracle(_) => {
                let u = loop {
                    let u: f64 = rng.random();
                    if u > 0.0 {
                        break u;
                    }
                };
                self.quantile(u)
            }
        }
    }

    /// Draws one profit as an exact rational.
    ///
    /// Finite realizations are returned exactly; continuous draws are the
    /// exact rational value of the sampled double.
    pub fn sample_rat(&self, rng: &mut ChaCha8Rng) -> Rat {
        match self {
            Self::FinitePmf { values, probs } => {
                let u = from_f64(rng.random::<f64>()).expect("finite uniform draw");
                let mut acc = Rat::zero();
                for (v, p) in values.iter().zip(probs) {
                    acc += p;
                    if u < acc {
                        return v.clone();
                    }
                }
                values.last().expect("nonempty pmf").clone()
            }
            _ => from_f64(self.sample_f64(rng)).expect("finite sample"),
        }
    }

    /// `P(c > 0)`, the probability that the item is profitable at all.
    pub fn prob_positive_f64(&self) -> f64 {
        match self {
            Self::FinitePmf { values, probs } => {
                let mut acc = Rat::zero();
                for (v, p) in values.iter().zip(probs) {
                    if v.is_positive() {
                        acc += p;
                    }
                }
                to_f64(&acc)
            }
            Self::UniformInterval { lo, hi } => {
                let (lo, hi) = (to_f64(lo), to_f64(hi));
                ((hi - 0.0) / (hi - lo)).clamp(0.0, 1.0)
            }
            Self::Oracle(_) => 1.0 - self.cdf(0.0),
        }
    }
}

/// One stochastic bilevel continuous knapsack instance.
///
/// Item sizes `a_i` are positive integers; leader weights `d`, the capacity
/// price `delta`, and the capacity bounds are exact rationals.  `dists[i]`
/// is the profit distribution of item `i`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub a: Vec<u64>,
    pub d: Vec<Rat>,
    pub delta: Rat,
    pub b_lo: Rat,
    pub b_hi: Rat,
    pub dists: Vec<ItemDistribution>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Total size `A = sum_i a_i`, the right end of every profile domain.
    pub fn total_size(&self) -> u64 {
        self.a.iter().sum()
    }

    /// `D = sum_i |d_i|`, the scale of the leader's packing weights.
    pub fn weight_abs_sum(&self) -> Rat {
        self.d.iter().map(|d| d.abs()).sum()
    }

    /// Errors with the structural violations if the instance is malformed.
    ///
    /// Assumption-level findings (profit ties across items, zero
    /// realizations) do not fail this check; the solvers resolve them by
    /// the documented conventions.
    pub fn ensure_valid(&self) -> Result<()> {
        let structural: Vec<Violation> = validate(self)
            .into_iter()
            .filter(|v| v.is_structural())
            .collect();
        if structural.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(structural))
        }
    }
}

/// A finding reported by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoItems,
    SizeZero {
        item: usize,
    },
    FieldLength {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    CapacityBoundsOutOfOrder,
    CapacityOutOfRange {
        which: &'static str,
    },
    PmfEmpty {
        item: usize,
    },
    PmfProbNonpositive {
        item: usize,
        index: usize,
    },
    PmfProbSum {
        item: usize,
        sum: Rat,
    },
    PmfValuesNotDistinct {
        item: usize,
    },
    UniformEmptyInterval {
        item: usize,
    },
    OracleParam {
        item: usize,
        what: &'static str,
    },
    /// Warning: two realizations of different items share a profit density,
    /// so the follower's order between them is resolved by the index rule.
    ProfitTie {
        item_i: usize,
        real_i: usize,
        item_j: usize,
        real_j: usize,
    },
    /// Warning: a realization with profit exactly zero; such an item is
    /// treated as unpacked under the strict positivity convention.
    ZeroRealization {
        item: usize,
        index: usize,
    },
}

impl Violation {
    /// Structural violations make an instance unusable; the rest are
    /// assumption warnings the solvers handle by convention.
    pub fn is_structural(&self) -> bool {
        !matches!(
            self,
            Violation::ProfitTie { .. } | Violation::ZeroRealization { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoItems => write!(f, "instance has no items"),
            Self::SizeZero { item } => write!(f, "item {item}: size must be a positive integer"),
            Self::FieldLength {
                field,
                expected,
                found,
            } => write!(f, "{field}: expected {expected} entries, found {found}"),
            Self::CapacityBoundsOutOfOrder => write!(f, "capacity bounds satisfy b_lo > b_hi"),
            Self::CapacityOutOfRange { which } => {
                write!(f, "{which} lies outside [0, A]")
            }
            Self::PmfEmpty { item } => write!(f, "item {item}: pmf has no realizations"),
            Self::PmfProbNonpositive { item, index } => {
                write!(f, "item {item}: probability {index} is not positive")
            }
            Self::PmfProbSum { item, sum } => write!(
                f,
                "item {item}: probabilities sum to {} instead of 1",
                crate::rational::format_rat(sum)
            ),
            Self::PmfValuesNotDistinct { item } => {
                write!(f, "item {item}: pmf values are not pairwise distinct")
            }
            Self::UniformEmptyInterval { item } => {
                write!(f, "item {item}: uniform interval has nonpositive width")
            }
            Self::OracleParam { item, what } => {
                write!(f, "item {item}: oracle parameter {what} is invalid")
            }
            Self::ProfitTie {
                item_i,
                real_i,
                item_j,
                real_j,
            } => write!(
                f,
                "warning: realization {real_i} of item {item_i} and realization {real_j} of \
                 item {item_j} have equal profit density"
            ),
            Self::ZeroRealization { item, index } => {
                write!(f, "warning: item {item}: realization {index} has profit zero")
            }
        }
    }
}

/// Diagnoses an instance, returning every violation found.
///
/// Returns an empty list exactly when the instance satisfies all structural
/// invariants and none of the assumption warnings apply.
pub fn validate(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = inst.a.len();
    if n == 0 {
        out.push(Violation::NoItems);
    }
    for (i, &a) in inst.a.iter().enumerate() {
        if a == 0 {
            out.push(Violation::SizeZero { item: i });
        }
    }
    if inst.d.len() != n {
        out.push(Violation::FieldLength {
            field: "d",
            expected: n,
            found: inst.d.len(),
        });
    }
    if inst.dists.len() != n {
        out.push(Violation::FieldLength {
            field: "dists",
            expected: n,
            found: inst.dists.len(),
        });
    }
    if inst.b_lo > inst.b_hi {
        out.push(Violation::CapacityBoundsOutOfOrder);
    }
    let total = rat_u64(inst.total_size());
    if inst.b_lo.is_negative() || inst.b_lo > total {
        out.push(Violation::CapacityOutOfRange { which: "b_lo" });
    }
    if inst.b_hi.is_negative() || inst.b_hi > total {
        out.push(Violation::CapacityOutOfRange { which: "b_hi" });
    }

    for (i, dist) in inst.dists.iter().enumerate() {
        match dist {
            ItemDistribution::FinitePmf { values, probs } => {
                if values.is_empty() {
                    out.push(Violation::PmfEmpty { item: i });
                }
                if values.len() != probs.len() {
                    out.push(Violation::FieldLength {
                        field: "pmf probs",
                        expected: values.len(),
                        found: probs.len(),
                    });
                    continue;
                }
                for (k, p) in probs.iter().enumerate() {
                    if !p.is_positive() {
                        out.push(Violation::PmfProbNonpositive { item: i, index: k });
                    }
                }
                let sum: Rat = probs.iter().sum();
                if !sum.is_one() && !values.is_empty() {
                    out.push(Violation::PmfProbSum { item: i, sum });
                }
                let mut sorted = values.clone();
                sorted.sort();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    out.push(Violation::PmfValuesNotDistinct { item: i });
                }
                for (k, v) in values.iter().enumerate() {
                    if v.is_zero() {
                        out.push(Violation::ZeroRealization { item: i, index: k });
                    }
                }
            }
            ItemDistribution::UniformInterval { lo, hi } => {
                if lo >= hi {
                    out.push(Violation::UniformEmptyInterval { item: i });
                }
            }
            ItemDistribution::Oracle(BuiltinOracle::Exponential { rate }) => {
                if !(rate.is_finite() && *rate > 0.0) {
                    out.push(Violation::OracleParam {
                        item: i,
                        what: "rate",
                    });
                }
            }
            ItemDistribution::Oracle(BuiltinOracle::Normal { mean, std_dev }) => {
                if !mean.is_finite() {
                    out.push(Violation::OracleParam {
                        item: i,
                        what: "mean",
                    });
                }
                if !(std_dev.is_finite() && *std_dev > 0.0) {
                    out.push(Violation::OracleParam {
                        item: i,
                        what: "std_dev",
                    });
                }
            }
        }
    }

    // Profit density ties across finitely supported items: realization k of
    // item i ties realization l of item j when c_i^k * a_j == c_j^l * a_i.
    for i in 0..n {
        let ItemDistribution::FinitePmf { values: vi, .. } = &inst.dists[i] else {
            continue;
        };
        for j in i + 1..n {
            let ItemDistribution::FinitePmf { values: vj, .. } = &inst.dists[j] else {
                continue;
            };
            if i >= inst.a.len() || j >= inst.a.len() {
                continue;
            }
            let (ai, aj) = (rat_u64(inst.a[i]), rat_u64(inst.a[j]));
            for (k, cik) in vi.iter().enumerate() {
                for (l, cjl) in vj.iter().enumerate() {
                    if cik.clone() * &aj == cjl.clone() * &ai {
                        out.push(Violation::ProfitTie {
                            item_i: i,
                            real_i: k,
                            item_j: j,
                            real_j: l,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Solver identifier carried in results and selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Certain,
    FiniteSupport,
    Saa,
    DpFinite,
    DpUniform,
    Approx,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Certain => "certain",
            Self::FiniteSupport => "finite-support",
            Self::Saa => "saa",
            Self::DpFinite => "dp-finite",
            Self::DpUniform => "dp-uniform",
            Self::Approx => "approx",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "certain" => Ok(Self::Certain),
            "finite-support" => Ok(Self::FiniteSupport),
            "saa" => Ok(Self::Saa),
            "dp-finite" => Ok(Self::DpFinite),
            "dp-uniform" => Ok(Self::DpUniform),
            "approx" => Ok(Self::Approx),
            other => Err(Error::Format(format!("unknown method {other:?}"))),
        }
    }
}

/// Work counters reported by a solver run.
///
/// Wall time is informational only and deliberately excluded from the
/// serialized form so identical runs stay byte-identical.
#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    pub wall: Duration,
    pub scenarios: u64,
    pub tables: u64,
    pub table_cells: u64,
    pub profile_breakpoints: u64,
}

/// Outcome of maximizing a leader objective.
#[derive(Debug, Clone)]
pub struct SolveResult<T> {
    pub method: Method,
    /// Smallest maximizer of the profile over `[b_lo, b_hi]`.
    pub b_star: T,
    /// Profile value at `b_star`.
    pub value: T,
    /// Expected leader objective on `[0, A]`.
    pub profile: PiecewiseLinear<T>,
    pub stats: SolveStats,
}

impl<T: ToPrimitive> SolveResult<T> {
    pub fn b_star_f64(&self) -> f64 {
        self.b_star.to_f64().unwrap_or(f64::NAN)
    }

    pub fn value_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn pmf(pairs: &[(Rat, Rat)]) -> ItemDistribution {
        ItemDistribution::FinitePmf {
            values: pairs.iter().map(|(v, _)| v.clone()).collect(),
            probs: pairs.iter().map(|(_, p)| p.clone()).collect(),
        }
    }

    fn base_instance() -> Instance {
        Instance {
            a: vec![1, 2],
            d: vec![rat_int(1), rat_int(-1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(3),
            dists: vec![
                pmf(&[(rat_int(1), rat(1, 2)), (rat_int(2), rat(1, 2))]),
                pmf(&[(rat_int(3), rat_int(1))]),
            ],
        }
    }

    #[test]
    fn valid_instance_passes() {
        let inst = base_instance();
        assert!(validate(&inst).is_empty());
        assert!(inst.ensure_valid().is_ok());
        assert_eq!(inst.total_size(), 3);
        assert_eq!(inst.weight_abs_sum(), rat_int(2));
    }

    #[test]
    fn flags_probability_sum() {
        let mut inst = base_instance();
        inst.dists[0] = pmf(&[(rat_int(1), rat(9, 20)), (rat_int(2), rat(9, 20))]);
        let violations = validate(&inst);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::PmfProbSum { item: 0, sum } if *sum == rat(9, 10))));
        assert!(inst.ensure_valid().is_err());
    }

    #[test]
    fn flags_profit_tie_as_warning() {
        // c_1 = 1 at size 1 ties c_2 = 2 at size 2: densities 1/1 == 2/2.
        let mut inst = base_instance();
        inst.dists[1] = pmf(&[(rat_int(2), rat_int(1))]);
        let violations = validate(&inst);
        assert_eq!(
            violations,
            vec![Violation::ProfitTie {
                item_i: 0,
                real_i: 0,
                item_j: 1,
                real_j: 0,
            }]
        );
        assert!(!violations[0].is_structural());
        assert!(inst.ensure_valid().is_ok());
    }

    #[test]
    fn flags_zero_realization_and_bad_bounds() {
        let mut inst = base_instance();
        inst.dists[0] = pmf(&[(rat_int(0), rat(1, 2)), (rat_int(2), rat(1, 2))]);
        inst.b_hi = rat_int(4);
        let violations = validate(&inst);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::ZeroRealization { item: 0, index: 0 })));
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::CapacityOutOfRange { which: "b_hi" })));
    }

    #[test]
    fn pmf_cdf_and_quantile_are_generalized_inverses() {
        let dist = pmf(&[(rat_int(1), rat(1, 4)), (rat_int(3), rat(3, 4))]);
        assert_eq!(dist.cdf(0.5), 0.0);
        assert_eq!(dist.cdf(1.0), 0.25);
        assert_eq!(dist.cdf(2.9), 0.25);
        assert_eq!(dist.cdf(3.0), 1.0);
        assert_eq!(dist.quantile(0.25), 1.0);
        assert_eq!(dist.quantile(0.2500001), 3.0);
        assert_eq!(dist.quantile(0.999), 3.0);
    }

    #[test]
    fn uniform_cdf_quantile() {
        let dist = ItemDistribution::UniformInterval {
            lo: rat_int(-1),
            hi: rat_int(3),
        };
        assert_eq!(dist.cdf(-1.0), 0.0);
        assert_eq!(dist.cdf(1.0), 0.5);
        assert_eq!(dist.cdf(9.0), 1.0);
        assert_eq!(dist.quantile(0.5), 1.0);
        assert_eq!(dist.prob_positive_f64(), 0.75);
    }

    #[test]
    fn exponential_cdf_quantile_round_trip() {
        let dist = ItemDistribution::Oracle(BuiltinOracle::Exponential { rate: 2.0 });
        assert_eq!(dist.cdf(0.0), 0.0);
        for k in 1..100 {
            let p = k as f64 / 100.0;
            let err = (dist.cdf(dist.quantile(p)) - p).abs();
            assert!(err < 1e-14, "p = {p}");
        }
    }

    #[test]
    fn method_strings_round_trip() {
        for m in [
            Method::Certain,
            Method::FiniteSupport,
            Method::Saa,
            Method::DpFinite,
            Method::DpUniform,
            Method::Approx,
        ] {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
    }
}
