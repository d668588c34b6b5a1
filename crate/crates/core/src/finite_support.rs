//! Exact expectation over a finitely supported joint profit distribution,
//! and sample average approximation on top of it.
//!
//! With scenarios `(c, p)` the expected leader objective is the weighted sum
//! `sum_c p_c * f^c` of deterministic objectives, computed breakpoint-union
//! exactly in `O(T log T)` for `T` total breakpoints.

use std::time::Instant;

use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certain::{objective_from_ordering, FollowerOrdering};
use crate::error::{Error, Result};
use crate::model::{Instance, Method, PiecewiseLinear, SolveResult, SolveStats};
use crate::rational::{Rat};

/// One joint profit realization and its probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub c: Vec<Rat>,
    pub p: Rat,
}

/// A finitely supported joint distribution of the profit vector.
///
/// Construction merges duplicate profit vectors, so the stored scenarios are
/// pairwise distinct with positive probabilities summing to one.
#[derive(Debug, Clone)]
pub struct FiniteSupport {
    scenarios: Vec<Scenario>,
}

impl FiniteSupport {
    pub fn new(raw: Vec<(Vec<Rat>, Rat)>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Support("no scenarios".into()));
        }
        let n = raw[0].0.len();
        for (k, (c, p)) in raw.iter().enumerate() {
            if c.len() != n {
                return Err(Error::Support(format!(
                    "scenario {k} has {} profits, expected {n}",
                    c.len()
                )));
            }
            if !p.is_positive() {
                return Err(Error::Support(format!(
                    "scenario {k} has nonpositive probability"
                )));
            }
        }
        let total: Rat = raw.iter().map(|(_, p)| p.clone()).sum();
        if !total.is_one() {
            return Err(Error::Support(format!(
                "probabilities sum to {}, not 1",
                crate::rational::format_rat(&total)
            )));
        }
        let mut sorted = raw;
        sorted.sort_by(|x, y| x.0.cmp(&y.0));
        let mut scenarios: Vec<Scenario> = Vec::with_capacity(sorted.len());
        for (c, p) in sorted {
            match scenarios.last_mut() {
                Some(last) if last.c == c => last.p += &p,
                _ => scenarios.push(Scenario { c, p }),
            }
        }
        Ok(Self { scenarios })
    }

    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }
}

/// Maximizes the expected leader objective over a finite support.
pub fn solve(inst: &Instance, support: &FiniteSupport) -> Result<SolveResult<Rat>> {
    solve_as(inst, support, Method::FiniteSupport, support.len() as u64)
}

fn solve_as(
    inst: &Instance,
    support: &FiniteSupport,
    method: Method,
    scenarios_drawn: u64,
) -> Result<SolveResult<Rat>> {
    let started = Instant::now();
    inst.ensure_valid()?;
    let n = inst.n();
    for (k, s) in support.scenarios().iter().enumerate() {
        if s.c.len() != n {
            return Err(Error::Support(format!(
                "scenario {k} has {} profits but the instance has {n} items",
                s.c.len()
            )));
        }
    }

    let objectives: Vec<PiecewiseLinear<Rat>> = support
        .scenarios()
        .par_iter()
        .map(|s| {
            let ordering = FollowerOrdering::build(&inst.a, &s.c);
            objective_from_ordering(inst, &ordering)
        })
        .collect::<Result<_>>()?;
    let terms: Vec<(Rat, &PiecewiseLinear<Rat>)> = support
        .scenarios()
        .iter()
        .zip(&objectives)
        .map(|(s, f)| (s.p.clone(), f))
        .collect();
    let profile = PiecewiseLinear::weighted_sum(&terms)?;
    let (b_star, value) = profile.maximize(&inst.b_lo, &inst.b_hi)?;
    let stats = SolveStats {
        wall: started.elapsed(),
        scenarios: scenarios_drawn,
        profile_breakpoints: profile.breakpoints().len() as u64,
        ..SolveStats::default()
    };
    Ok(SolveResult {
        method,
        b_star,
        value,
        profile,
        stats,
    })
}

/// Source of i.i.d. profit vectors for sample average approximation.
pub trait Sampler {
    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<Vec<Rat>>;
}

/// Samples every item independently from its instance distribution.
pub struct ComponentSampler<'a> {
    inst: &'a Instance,
}

impl<'a> ComponentSampler<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        Self { inst }
    }
}

impl Sampler for ComponentSampler<'_> {
    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<Vec<Rat>> {
        Ok(self
            .inst
            .dists
            .iter()
            .map(|dist| dist.sample_rat(rng))
            .collect())
    }
}

/// Sample average approximation with `n_samples` draws.
///
/// The empirical distribution (uniform over the draws, duplicates merged) is
/// solved exactly.  Sampling uses a counter-based generator seeded from
/// `seed`, so a given `(instance, sampler, n_samples, seed)` quadruple
/// always produces the same result, on every platform.
pub fn solve_saa<S: Sampler>(
    inst: &Instance,
    sampler: &S,
    n_samples: usize,
    seed: u64,
) -> Result<SolveResult<Rat>> {
    if n_samples == 0 {
        return Err(Error::Sampler("sample count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = Rat::new(1.into(), (n_samples as u64).into());
    let mut raw = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        raw.push((sampler.draw(&mut rng)?, weight.clone()));
    }
    let support = FiniteSupport::new(raw)?;
    solve_as(inst, &support, Method::Saa, n_samples as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ItemDistribution;
    use crate::rational::{rat, rat_int};

    fn two_item_instance() -> Instance {
        Instance {
            a: vec![1, 2],
            d: vec![rat_int(2), rat_int(-1)],
            delta: rat_int(0),
            b_lo: rat_int(0),
            b_hi: rat_int(3),
            dists: vec![
                ItemDistribution::UniformInterval {
                    lo: rat_int(0),
                    hi: rat_int(2),
                },
                ItemDistribution::UniformInterval {
                    lo: rat_int(0),
                    hi: rat_int(3),
                },
            ],
        }
    }

    #[test]
    fn merges_duplicates_and_checks_mass() {
        let c = vec![rat_int(1), rat_int(2)];
        let support = FiniteSupport::new(vec![
            (c.clone(), rat(1, 4)),
            (vec![rat_int(0), rat_int(1)], rat(1, 2)),
            (c.clone(), rat(1, 4)),
        ])
        .unwrap();
        assert_eq!(support.len(), 2);
        assert!(support.scenarios().iter().any(|s| s.c == c && s.p == rat(1, 2)));

        assert!(FiniteSupport::new(vec![(c.clone(), rat(1, 2))]).is_err());
        assert!(FiniteSupport::new(vec![(c, rat_int(0)), (vec![], rat_int(1))]).is_err());
        assert!(FiniteSupport::new(vec![]).is_err());
    }

    #[test]
    fn singleton_support_equals_certain_solver() {
        let inst = two_item_instance();
        let c = vec![rat_int(2), rat_int(1)];
        let support = FiniteSupport::new(vec![(c.clone(), rat_int(1))]).unwrap();
        let via_support = solve(&inst, &support).unwrap();
        let via_certain = crate::certain::solve(&inst, &c).unwrap();
        assert_eq!(via_support.b_star, via_certain.b_star);
        assert_eq!(via_support.value, via_certain.value);
        for b in 0..=3 {
            let b = rat_int(b);
            assert_eq!(
                via_support.profile.eval(&b).unwrap(),
                via_certain.profile.eval(&b).unwrap()
            );
        }
    }

    #[test]
    fn two_scenario_expectation_by_hand() {
        let inst = two_item_instance();
        // Scenario 1: profits (2, 1), order item 0 then 1.
        // Scenario 2: profits (0, 3), only item 1 is packed.
        let support = FiniteSupport::new(vec![
            (vec![rat_int(2), rat_int(1)], rat(1, 2)),
            (vec![rat_int(0), rat_int(3)], rat(1, 2)),
        ])
        .unwrap();
        let result = solve(&inst, &support).unwrap();
        let f = &result.profile;
        assert_eq!(f.eval(&rat_int(0)).unwrap(), rat_int(0));
        assert_eq!(f.eval(&rat_int(1)).unwrap(), rat(3, 4));
        assert_eq!(f.eval(&rat_int(2)).unwrap(), rat(1, 4));
        assert_eq!(f.eval(&rat_int(3)).unwrap(), rat_int(0));
        assert_eq!(result.b_star, rat_int(1));
        assert_eq!(result.value, rat(3, 4));
        assert_eq!(result.method, Method::FiniteSupport);
    }

    #[test]
    fn scenario_length_mismatch_is_rejected() {
        let inst = two_item_instance();
        let support = FiniteSupport::new(vec![(vec![rat_int(1)], rat_int(1))]).unwrap();
        assert!(matches!(solve(&inst, &support), Err(Error::Support(_))));
    }

    #[test]
    fn saa_is_deterministic_in_the_seed() {
        let inst = two_item_instance();
        let sampler = ComponentSampler::new(&inst);
        let a = solve_saa(&inst, &sampler, 64, 7).unwrap();
        let b = solve_saa(&inst, &sampler, 64, 7).unwrap();
        assert_eq!(a.b_star, b.b_star);
        assert_eq!(a.value, b.value);
        assert_eq!(a.profile, b.profile);
        let c = solve_saa(&inst, &sampler, 64, 8).unwrap();
        assert!(a.profile != c.profile, "distinct seeds should differ");
        assert_eq!(a.method, Method::Saa);
        assert_eq!(a.stats.scenarios, 64);
    }

    #[test]
    fn saa_single_sample_equals_certain_on_that_sample() {
        let inst = two_item_instance();
        let sampler = ComponentSampler::new(&inst);
        let result = solve_saa(&inst, &sampler, 1, 99).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let c = sampler.draw(&mut rng).unwrap();
        let direct = crate::certain::solve(&inst, &c).unwrap();
        assert_eq!(result.value, direct.value);
        assert_eq!(result.b_star, direct.b_star);
    }
}
