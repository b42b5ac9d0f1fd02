//! Sparse multivariate polynomials over ℚ and their fractions.
//!
//! Used to substitute printed parametric families (variables such as λ, t,
//! a, b) into defining equations and decide vanishing exactly. Fractions are
//! not gcd-reduced; degrees stay tiny for every audit we run.

use crate::field::Field;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Exponents = Vec<u16>;

/// Sparse multivariate polynomial; all values in one computation share the
/// same variable universe (`nvars` and an external name table).
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Exponents, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        MPoly { nvars, terms }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn from_i64(nvars: usize, n: i64) -> Self {
        Self::constant(nvars, BigRational::from(BigInt::from(n)))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        MPoly { nvars, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    fn insert(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute rational values for all variables.
    pub fn eval(&self, vals: &[BigRational]) -> BigRational {
        assert_eq!(vals.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term *= &vals[i];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut part = String::new();
            let is_const = e.iter().all(|&x| x == 0);
            if is_const || !c.is_one() {
                part.push_str(&format!("{c}"));
            }
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !part.is_empty() {
                    part.push('*');
                }
                part.push_str(names.get(i).copied().unwrap_or("?"));
                if k > 1 {
                    part.push_str(&format!("^{k}"));
                }
            }
            parts.push(part);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.fmt_with(&refs))
    }
}

/// Fraction of multivariate polynomials; denominator nonzero, not reduced.
#[derive(Clone, Debug)]
pub struct PolyFrac {
    pub num: MPoly,
    pub den: MPoly,
}

impl PolyFrac {
    pub fn from_poly(p: MPoly) -> Self {
        let one = MPoly::one(p.nvars);
        PolyFrac { num: p, den: one }
    }

    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        PolyFrac { num, den }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    /// Evaluate at a rational point; `None` when the denominator vanishes.
    pub fn eval(&self, vals: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(vals);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(vals) / d)
        }
    }
}

impl PartialEq for PolyFrac {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Field for PolyFrac {
    fn zero(&self) -> Self {
        PolyFrac::from_poly(MPoly::zero(self.nvars()))
    }
    fn one(&self) -> Self {
        PolyFrac::from_poly(MPoly::one(self.nvars()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        PolyFrac::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        PolyFrac::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn neg(&self) -> Self {
        PolyFrac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(PolyFrac {
                num: self.den.clone(),
                den: self.num.clone(),
            })
        }
    }
}

impl fmt::Display for PolyFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den_is_one = self.den.terms.len() == 1
            && self
                .den
                .terms
                .iter()
                .all(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one());
        if den_is_one {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
