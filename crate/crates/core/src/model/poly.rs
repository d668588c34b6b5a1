//! Dense polynomials and piecewise polynomial functions.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cmp_scalar, Scalar};

/// Polynomial in one variable, dense monomial basis, lowest degree first.
///
/// Trailing zero coefficients are trimmed on construction; the zero
/// polynomial stores no coefficients and reports degree 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The linear polynomial `c0 + c1 * u`.
    pub fn linear(c0: T, c1: T) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, u: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }

    pub fn scale(&self, w: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * w).collect())
    }

    /// Definite integral over the unit interval `[0, 1]`.
    pub fn integral_unit(&self) -> T {
        let mut acc = T::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            acc = acc + &(c.clone() / &T::from_u64(k as u64 + 1));
        }
        acc
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone() / &T::from_u64(k as u64 + 1));
        }
        Self::new(coeffs)
    }
}

impl<T: Scalar> Zero for Polynomial<T> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Scalar> One for Polynomial<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Scalar> Add for Polynomial<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self + &rhs
    }
}

impl<T: Scalar> Add<&Polynomial<T>> for Polynomial<T> {
    type Output = Self;
    fn add(self, rhs: &Self) -> Self {
        let mut coeffs = self.coeffs;
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), T::zero());
        }
        for (c, r) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c = c.clone() + r;
        }
        Self::new(coeffs)
    }
}

impl<T: Scalar> Sub for Polynomial<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self - &rhs
    }
}

impl<T: Scalar> Sub<&Polynomial<T>> for Polynomial<T> {
    type Output = Self;
    fn sub(self, rhs: &Self) -> Self {
        let mut coeffs = self.coeffs;
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), T::zero());
        }
        for (c, r) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c = c.clone() - r;
        }
        Self::new(coeffs)
    }
}

impl<T: Scalar> Mul for Polynomial<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self * &rhs
    }
}

impl<T: Scalar> Mul<&Polynomial<T>> for Polynomial<T> {
    type Output = Self;
    fn mul(self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + &(a.clone() * b);
            }
        }
        Self::new(coeffs)
    }
}

/// Piecewise polynomial function of a real variable.
///
/// With cut points `c_0 < ... < c_{k-1}` there are `k + 1` pieces: piece 0
/// covers `(-inf, c_0]`, piece `j` covers the left-open interval
/// `(c_{j-1}, c_j]`, and the last piece covers `(c_{k-1}, +inf)`.
///
/// Interior pieces store their polynomial in the normalized local coordinate
/// `u = (x - left) / (right - left)`, and the two unbounded pieces in
/// `u = x - cut` anchored at their single finite endpoint.  Keeping every
/// coefficient scaled to a unit interval is what keeps evaluation and
/// integration well conditioned when cuts lie microscopically close
/// together, as they do for near-degenerate profit intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolynomial<T> {
    cuts: Vec<T>,
    pieces: Vec<Polynomial<T>>,
}

impl<T: Scalar> PiecewisePolynomial<T> {
    pub fn new(cuts: Vec<T>, pieces: Vec<Polynomial<T>>) -> Result<Self> {
        if cuts.is_empty() || pieces.len() != cuts.len() + 1 {
            return Err(Error::LengthMismatch {
                breakpoints: cuts.len(),
                values: pieces.len(),
            });
        }
        for pair in cuts.windows(2) {
            if cmp_scalar(&pair[0], &pair[1]) != std::cmp::Ordering::Less {
                return Err(Error::UnsortedBreakpoints);
            }
        }
        Ok(Self { cuts, pieces })
    }

    pub fn cuts(&self) -> &[T] {
        &self.cuts
    }

    pub fn pieces(&self) -> &[Polynomial<T>] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Index of the piece whose interval contains `x`.
    pub fn piece_index(&self, x: &T) -> usize {
        self.cuts.partition_point(|c| cmp_scalar(c, x).is_lt())
    }

    pub fn eval(&self, x: &T) -> T {
        let idx = self.piece_index(x);
        let u = if idx == 0 {
            x.clone() - &self.cuts[0]
        } else if idx == self.cuts.len() {
            x.clone() - &self.cuts[idx - 1]
        } else {
            let left = &self.cuts[idx - 1];
            let width = self.cuts[idx].clone() - left;
            (x.clone() - left) / &width
        };
        self.pieces[idx].eval(&u)
    }
}
