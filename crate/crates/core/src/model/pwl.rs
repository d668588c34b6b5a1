//! Continuous piecewise linear functions on a closed interval.
//!
//! A function is stored as strictly increasing breakpoint abscissae together
//! with the function values at those breakpoints; between breakpoints the
//! function is the linear interpolant.  Every leader objective produced by
//! the solvers is represented this way, with rational scalars on the exact
//! paths and doubles on the floating-point paths.

use crate::error::{Error, Result};
use crate::scalar::{cmp_scalar, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

impl<T: Scalar> PiecewiseLinear<T> {
    /// Builds a function from breakpoints and matching values.
    ///
    /// Breakpoints must be strictly increasing and there must be at least
    /// two of them, so the domain has positive length.
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::LengthMismatch {
                breakpoints: breakpoints.len(),
                values: values.len(),
            });
        }
        if breakpoints.len() < 2 {
            return Err(Error::TooFewBreakpoints);
        }
        for pair in breakpoints.windows(2) {
            if cmp_scalar(&pair[0], &pair[1]) != std::cmp::Ordering::Less {
                return Err(Error::UnsortedBreakpoints);
            }
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Domain endpoints `(lo, hi)`.
    pub fn domain(&self) -> (&T, &T) {
        (
            self.breakpoints.first().expect("nonempty"),
            self.breakpoints.last().expect("nonempty"),
        )
    }

    /// Evaluates the function at `x`, which must lie within the domain.
    ///
    /// Values at breakpoints are returned as stored, without arithmetic, so
    /// exact paths stay exact there.
    pub fn eval(&self, x: &T) -> Result<T> {
        let (lo, hi) = self.domain();
        if cmp_scalar(x, lo).is_lt() || cmp_scalar(x, hi).is_gt() {
            return Err(Error::OutOfDomain {
                argument: format!("{x:?}"),
            });
        }
        // Index of the last breakpoint <= x.
        let idx = match self
            .breakpoints
            .binary_search_by(|b| cmp_scalar(b, x))
        {
            Ok(exact) => return Ok(self.values[exact].clone()),
            Err(ins) => ins - 1,
        };
        let x0 = &self.breakpoints[idx];
        let x1 = &self.breakpoints[idx + 1];
        let v0 = &self.values[idx];
        let v1 = &self.values[idx + 1];
        let width = x1.clone() - x0;
        let frac = (x.clone() - x0) / &width;
        Ok(v0.clone() + &((v1.clone() - v0) * &frac))
    }

    /// Computes the weighted sum `sum_k w_k f_k` of functions sharing one
    /// domain.
    ///
    /// Runs in `O(T log T)` for `T` total breakpoints: every interior
    /// breakpoint becomes a slope-change event, the events are sorted once,
    /// and a single left-to-right sweep accumulates the summed function.
    pub fn weighted_sum(terms: &[(T, &Self)]) -> Result<Self> {
        let (first, rest) = terms.split_first().ok_or(Error::EmptySum)?;
        let (lo, hi) = first.1.domain();
        for (_, f) in rest {
            let (flo, fhi) = f.domain();
            if cmp_scalar(lo, flo).is_ne() || cmp_scalar(hi, fhi).is_ne() {
                return Err(Error::DomainMismatch);
            }
        }

        let mut base = T::zero();
        let mut slope = T::zero();
        let mut events: Vec<(T, T)> = Vec::new();
        for (w, f) in terms {
            base = base + &(w.clone() * &f.values[0]);
            let mut prev_slope: Option<T> = None;
            for k in 0..f.breakpoints.len() - 1 {
                let dx = f.breakpoints[k + 1].clone() - &f.breakpoints[k];
                let dv = f.values[k + 1].clone() - &f.values[k];
                let seg = w.clone() * &(dv / &dx);
                match prev_slope {
                    None => slope = slope + &seg,
                    Some(p) => events.push((f.breakpoints[k].clone(), seg.clone() - &p)),
                }
                prev_slope = Some(seg);
            }
        }
        events.sort_by(|a, b| cmp_scalar(&a.0, &b.0));

        let mut breakpoints = vec![lo.clone()];
        let mut values = vec![base];
        let mut cursor = 0usize;
        while cursor < events.len() {
            let x = events[cursor].0.clone();
            let mut dslope = T::zero();
            while cursor < events.len() && cmp_scalar(&events[cursor].0, &x).is_eq() {
                dslope = dslope + &events[cursor].1;
                cursor += 1;
            }
            if dslope.is_zero() {
                continue;
            }
            let dx = x.clone() - breakpoints.last().expect("nonempty");
            let v = values.last().expect("nonempty").clone() + &(slope.clone() * &dx);
            breakpoints.push(x);
            values.push(v);
            slope = slope + &dslope;
        }
        let dx = hi.clone() - breakpoints.last().expect("nonempty");
        let v = values.last().expect("nonempty").clone() + &(slope * &dx);
        breakpoints.push(hi.clone());
        values.push(v);
        Self::new(breakpoints, values)
    }

    /// Maximizes the function over `[lo, hi]`, a subinterval of the domain.
    ///
    /// Returns `(argmax, max)`.  Only the interval endpoints and interior
    /// breakpoints can be maximizers; ties break toward the smaller
    /// abscissa.
    pub fn maximize(&self, lo: &T, hi: &T) -> Result<(T, T)> {
        if cmp_scalar(lo, hi).is_gt() {
            return Err(Error::EmptyInterval);
        }
        let (dlo, dhi) = self.domain();
        if cmp_scalar(lo, dlo).is_lt() || cmp_scalar(hi, dhi).is_gt() {
            return Err(Error::OutOfDomain {
                argument: format!("[{lo:?}, {hi:?}]"),
            });
        }
        let mut best_x = lo.clone();
        let mut best_v = self.eval(lo)?;
        for b in &self.breakpoints {
            if cmp_scalar(b, lo).is_gt() && cmp_scalar(b, hi).is_lt() {
                let v = self.eval(b)?;
                if cmp_scalar(&v, &best_v).is_gt() {
                    best_v = v;
                    best_x = b.clone();
                }
            }
        }
        if cmp_scalar(hi, lo).is_gt() {
            let v = self.eval(hi)?;
            if cmp_scalar(&v, &best_v).is_gt() {
                best_v = v;
                best_x = hi.clone();
            }
        }
        Ok((best_x, best_v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int, Rat};

    fn line(points: &[(i64, i64)]) -> PiecewiseLinear<Rat> {
        PiecewiseLinear::new(
            points.iter().map(|(x, _)| rat_int(*x)).collect(),
            points.iter().map(|(_, v)| rat_int(*v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            PiecewiseLinear::new(vec![rat_int(0)], vec![rat_int(1)]),
            Err(Error::TooFewBreakpoints)
        ));
        assert!(matches!(
            PiecewiseLinear::new(vec![rat_int(0), rat_int(0)], vec![rat_int(1), rat_int(1)]),
            Err(Error::UnsortedBreakpoints)
        ));
        assert!(matches!(
            PiecewiseLinear::new(vec![rat_int(0), rat_int(1)], vec![rat_int(1)]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn eval_interpolates() {
        let f = line(&[(0, 0), (2, 4), (4, 0)]);
        assert_eq!(f.eval(&rat_int(1)).unwrap(), rat_int(2));
        assert_eq!(f.eval(&rat_int(2)).unwrap(), rat_int(4));
        assert_eq!(f.eval(&rat(7, 2)).unwrap(), rat_int(1));
        assert!(f.eval(&rat_int(5)).is_err());
        assert!(f.eval(&rat_int(-1)).is_err());
    }

    #[test]
    fn weighted_sum_of_opposite_lines_is_zero() {
        let up = line(&[(0, 0), (2, 2)]);
        let down = line(&[(0, 0), (2, -2)]);
        let sum =
            PiecewiseLinear::weighted_sum(&[(rat(1, 2), &up), (rat(1, 2), &down)]).unwrap();
        for b in sum.values() {
            assert_eq!(*b, rat_int(0));
        }
        assert_eq!(sum.domain(), (&rat_int(0), &rat_int(2)));
    }

    #[test]
    fn weighted_sum_merges_disjoint_interior_breakpoints() {
        // Two 3-breakpoint functions on [0, 6] with interior breakpoints at
        // 2 and 4; their sum has interior breakpoints at both.
        let f = line(&[(0, 0), (2, 2), (6, 2)]);
        let g = line(&[(0, 6), (4, 2), (6, 2)]);
        let sum = PiecewiseLinear::weighted_sum(&[(rat_int(1), &f), (rat_int(2), &g)]).unwrap();
        assert_eq!(
            sum.breakpoints(),
            &[rat_int(0), rat_int(2), rat_int(4), rat_int(6)]
        );
        // Expected values computed pointwise: 1*f(x) + 2*g(x).
        for x in 0..=6 {
            let expect = f.eval(&rat_int(x)).unwrap() + &(rat_int(2) * &g.eval(&rat_int(x)).unwrap());
            assert_eq!(sum.eval(&rat_int(x)).unwrap(), expect, "x = {x}");
        }
    }

    #[test]
    fn weighted_sum_rejects_domain_mismatch() {
        let f = line(&[(0, 0), (2, 2)]);
        let g = line(&[(0, 0), (3, 3)]);
        assert!(matches!(
            PiecewiseLinear::weighted_sum(&[(rat_int(1), &f), (rat_int(1), &g)]),
            Err(Error::DomainMismatch)
        ));
    }

    #[test]
    fn maximize_prefers_smallest_abscissa_on_plateau() {
        let f = line(&[(0, 0), (2, 5), (5, 5), (6, 1)]);
        let (x, v) = f.maximize(&rat_int(0), &rat_int(6)).unwrap();
        assert_eq!(x, rat_int(2));
        assert_eq!(v, rat_int(5));
    }

    #[test]
    fn maximize_respects_interval_endpoints() {
        let f = line(&[(0, 0), (2, 5), (4, 0)]);
        let (x, v) = f.maximize(&rat(5, 2), &rat_int(4)).unwrap();
        assert_eq!(x, rat(5, 2));
        assert_eq!(v, rat(15, 4));
        assert!(f.maximize(&rat_int(3), &rat_int(2)).is_err());
        assert!(f.maximize(&rat_int(0), &rat_int(5)).is_err());
    }

    #[test]
    fn maximize_single_point_interval() {
        let f = line(&[(0, 0), (2, 4)]);
        let (x, v) = f.maximize(&rat_int(1), &rat_int(1)).unwrap();
        assert_eq!(x, rat_int(1));
        assert_eq!(v, rat_int(2));
    }
}
