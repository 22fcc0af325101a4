//! Values that support the affine operations needed by the completion formulas
//! and the (C,C,C) margins, so the same formulas can be evaluated on numbers
//! or turned into LP rows.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Sub};

use num_traits::{One, Zero};

use crate::Rational;

pub trait Linear: Clone + Add<Output = Self> + Sub<Output = Self> {
    fn constant(c: Rational) -> Self;
    fn scale(&self, k: &Rational) -> Self;
}

impl Linear for Rational {
    fn constant(c: Rational) -> Self {
        c
    }

    fn scale(&self, k: &Rational) -> Self {
        self * k
    }
}

/// `constant + Σ coeffs[j] · x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinExpr {
    pub constant: Rational,
    pub coeffs: Vec<Rational>,
}

impl LinExpr {
    pub fn zero(vars: usize) -> Self {
        LinExpr { constant: Rational::zero(), coeffs: vec![Rational::zero(); vars] }
    }

    pub fn var(j: usize, vars: usize) -> Self {
        let mut e = LinExpr::zero(vars);
        e.coeffs[j] = Rational::one();
        e
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).fold(self.constant.clone(), |acc, (c, v)| acc + c * v)
    }

    fn zip_with(self, rhs: LinExpr, f: impl Fn(Rational, Rational) -> Rational) -> LinExpr {
        let width = self.coeffs.len().max(rhs.coeffs.len());
        let mut a = self.coeffs;
        let mut b = rhs.coeffs;
        a.resize(width, Rational::zero());
        b.resize(width, Rational::zero());
        LinExpr {
            constant: f(self.constant, rhs.constant),
            coeffs: a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect(),
        }
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: LinExpr) -> LinExpr {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: LinExpr) -> LinExpr {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Linear for LinExpr {
    // Width grows on demand in `zip_with`.
    fn constant(c: Rational) -> Self {
        LinExpr { constant: c, coeffs: Vec::new() }
    }

    fn scale(&self, k: &Rational) -> Self {
        LinExpr {
            constant: &self.constant * k,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}
