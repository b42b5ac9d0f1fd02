//! Univariate polynomials over ℚ and the rational function field ℚ(x).
//!
//! Rational functions are kept reduced (gcd divided out, monic denominator),
//! so Gaussian elimination over ℚ(x) stays small. This is the field used to
//! compute generic derivation dimensions with a symbolic parameter.

use crate::field::Field;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use std::fmt;

/// Dense univariate polynomial over ℚ, ascending coefficients, normalized.
#[derive(Clone, PartialEq, Debug)]
pub struct UPoly {
    pub coeffs: Vec<BigRational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UPoly {
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn var() -> Self {
        UPoly {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    pub fn constant(c: BigRational) -> Self {
        UPoly::new(vec![c])
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(BigRational::from(BigInt::from(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        UPoly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    /// Euclidean division: returns (quotient, remainder).
    pub fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quo = vec![BigRational::zero(); self.coeffs.len().saturating_sub(rhs.coeffs.len()) + 1];
        let d = rhs.coeffs.len() - 1;
        let lead = rhs.coeffs.last().unwrap().clone();
        while !rem.is_zero() && rem.coeffs.len() >= rhs.coeffs.len() {
            let k = rem.coeffs.len() - 1 - d;
            let f = rem.coeffs.last().unwrap() / &lead;
            quo[k] = f.clone();
            let mut shifted = vec![BigRational::zero(); k];
            shifted.extend(rhs.coeffs.iter().map(|c| c * &f));
            rem = rem.sub(&UPoly::new(shifted));
        }
        (UPoly::new(quo), rem)
    }

    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => UPoly::zero(),
            Some(l) => {
                let inv = BigRational::one() / l;
                UPoly {
                    coeffs: self.coeffs.iter().map(|c| c * &inv).collect(),
                }
            }
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Reduced rational function num/den over ℚ, denominator monic and nonzero.
#[derive(Clone, Debug)]
pub struct RatFn {
    pub num: UPoly,
    pub den: UPoly,
}

impl RatFn {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn {
                num: UPoly::zero(),
                den: UPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        // normalize: monic denominator
        let lead = d.coeffs.last().unwrap().clone();
        let inv = BigRational::one() / lead;
        let n = n.mul(&UPoly::constant(inv.clone()));
        let d = d.mul(&UPoly::constant(inv));
        RatFn { num: n, den: d }
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFn::new(p, UPoly::one())
    }

    pub fn var() -> Self {
        Self::from_poly(UPoly::var())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    /// Evaluate at a rational point where the denominator does not vanish.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        // reduced canonical form makes this structural
        self.num == other.num && self.den == other.den
    }
}

impl Field for RatFn {
    fn zero(&self) -> Self {
        RatFn::from_poly(UPoly::zero())
    }
    fn one(&self) -> Self {
        RatFn::from_poly(UPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        RatFn::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        RatFn::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn neg(&self) -> Self {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFn::new(self.den.clone(), self.num.clone()))
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == UPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigInt;

    fn c(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn gcd_and_reduction() {
        // (x^2 - 1) / (x - 1) reduces to x + 1
        let num = UPoly::new(vec![c(-1), c(0), c(1)]);
        let den = UPoly::new(vec![c(-1), c(1)]);
        let f = RatFn::new(num, den);
        assert_eq!(f.num, UPoly::new(vec![c(1), c(1)]));
        assert_eq!(f.den, UPoly::one());
        // field axioms spot check: f * f^{-1} = 1
        let g = f.mul(&f.inv().unwrap());
        assert!(g.sub(&RatFn::from_poly(UPoly::one())).is_zero());
    }

    #[test]
    fn elimination_over_rational_functions() {
        use crate::field::Field;
        use crate::linalg::Matrix;
        // [[x, 1], [x^2, x]] has rank 1 over Q(x)
        let x = RatFn::var();
        let m = Matrix::from_rows(vec![
            vec![x.clone(), x.one()],
            vec![x.mul(&x), x.clone()],
        ]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.nullspace().len(), 1);
    }
}
