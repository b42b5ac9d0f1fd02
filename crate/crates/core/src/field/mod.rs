//! Exact scalar arithmetic over the base fields of the library.
//!
//! Three kinds of field are supported: the rationals, odd prime fields, and
//! multi-quadratic towers `Q(sqrt(d1), ..., sqrt(dk))` grown on demand by
//! [`FieldElement::sqrt`]. All arithmetic is exact and equality is decidable;
//! every value is kept in a canonical form (reduced fractions, fixed product
//! basis for towers) so that serialization is byte-stable.

mod squarefree;

pub use squarefree::{perfect_square_root, square_free_decompose};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Default cap on the number of tower generators adjoined by `sqrt`.
pub const DEFAULT_TOWER_DEPTH_CAP: usize = 6;

/// Recursion guard for square roots of nested tower elements.
const SQRT_RECURSION_CAP: usize = 16;

/// Largest prime modulus accepted for a prime-field descriptor.
pub const MAX_PRIME: u64 = u32::MAX as u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),
    #[error("no square root: {0}")]
    NoSquareRoot(String),
    #[error("tower depth cap of {0} generators exceeded")]
    TowerDepthExceeded(usize),
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("scalar parse error: {0}")]
    Parse(String),
}

pub type FieldResult<T> = Result<T, FieldError>;

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

/// Identifies the field an element lives in.
///
/// Tower generators are square-free integers, sorted by `(|g|, g)`, with no
/// nonempty subset whose product is a rational square. This guarantees that
/// the `2^k` products of generator square roots form a basis.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum FieldDescriptor {
    Rationals,
    Prime(u64),
    Tower(Arc<Vec<BigInt>>),
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor::Rationals
    }

    /// Odd prime field descriptor; characteristic 2 and composites rejected.
    pub fn prime(p: u64) -> FieldResult<Self> {
        if p < 3 || p % 2 == 0 {
            return Err(FieldError::InvalidDescriptor(format!(
                "prime field modulus must be an odd prime >= 3, got {p}"
            )));
        }
        if p > MAX_PRIME {
            return Err(FieldError::InvalidDescriptor(format!(
                "prime modulus {p} exceeds supported bound {MAX_PRIME}"
            )));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::InvalidDescriptor(format!("{p} is not prime")));
        }
        Ok(FieldDescriptor::Prime(p))
    }

    /// Tower descriptor from raw generators. Square parts are extracted and
    /// subset independence is verified.
    pub fn tower(raw_gens: &[BigInt]) -> FieldResult<Self> {
        Self::tower_inner(raw_gens, true)
    }

    /// Like [`Self::tower`] but silently drops generators whose square roots
    /// already lie in the tower built so far. Used when unifying two fields.
    pub fn tower_closure(raw_gens: &[BigInt]) -> FieldResult<Self> {
        Self::tower_inner(raw_gens, false)
    }

    fn tower_inner(raw_gens: &[BigInt], strict: bool) -> FieldResult<Self> {
        let mut gens: Vec<BigInt> = Vec::new();
        for g in raw_gens {
            if g.is_zero() {
                return Err(FieldError::InvalidDescriptor(
                    "tower generator 0 is not allowed".into(),
                ));
            }
            let (_, f) = square_free_decompose(g)?;
            if f.is_one() {
                if strict {
                    return Err(FieldError::InvalidDescriptor(format!(
                        "generator {g} is a perfect square"
                    )));
                }
                continue;
            }
            if reduce_against_gens(&f, &gens).is_some() {
                if strict {
                    return Err(FieldError::InvalidDescriptor(format!(
                        "generator {g} is multiplicatively dependent on the others"
                    )));
                }
                continue;
            }
            insert_gen_sorted(&mut gens, f);
        }
        if gens.is_empty() {
            return Ok(FieldDescriptor::Rationals);
        }
        Ok(FieldDescriptor::Tower(Arc::new(gens)))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Prime(p) => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_i64(self, 0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_i64(self, 1)
    }

    fn gens(&self) -> &[BigInt] {
        match self {
            FieldDescriptor::Tower(g) => g,
            _ => &[],
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Prime(p) => write!(f, "GF({p})"),
            FieldDescriptor::Tower(gens) => {
                write!(f, "Q(")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "sqrt({g})")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |dd| dd <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Insert a square-free generator into a sorted generator list.
fn insert_gen_sorted(gens: &mut Vec<BigInt>, g: BigInt) {
    let key = |x: &BigInt| (x.abs(), x.clone());
    let pos = gens
        .iter()
        .position(|h| key(h) > key(&g))
        .unwrap_or(gens.len());
    gens.insert(pos, g);
}

/// If `sqrt(f)` already lies in the tower spanned by `gens`, return the
/// subset mask `S` and rational `r` with `sqrt(f) = r * prod_{i in S} sqrt(g_i)`.
fn reduce_against_gens(f: &BigInt, gens: &[BigInt]) -> Option<(usize, BigRational)> {
    for mask in 0..(1usize << gens.len()) {
        let mut prod = BigInt::one();
        for (i, g) in gens.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod *= g;
            }
        }
        // f * prod = w^2  =>  sqrt(f) = (w / prod) * prod sqrt(g_i)
        let v = f * &prod;
        if v.is_negative() {
            continue;
        }
        if let Some(w) = perfect_square_root(&v) {
            let r = BigRational::new(w, prod);
            return Some((mask, r));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// An exact scalar: rational, prime-field residue, or quadratic-tower element
/// stored as coordinates over the product basis of the tower generators
/// (coordinate index `mask` multiplies `prod_{i in mask} sqrt(g_i)`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FieldElement {
    Rat(BigRational),
    Fp { p: u64, val: u64 },
    Tower {
        gens: Arc<Vec<BigInt>>,
        coords: Vec<BigRational>,
    },
}

impl FieldElement {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            FieldElement::Rat(_) => FieldDescriptor::Rationals,
            FieldElement::Fp { p, .. } => FieldDescriptor::Prime(*p),
            FieldElement::Tower { gens, .. } => FieldDescriptor::Tower(gens.clone()),
        }
    }

    pub fn from_i64(desc: &FieldDescriptor, n: i64) -> FieldElement {
        Self::from_rat(desc, &BigRational::from(BigInt::from(n)))
            .expect("integer embeds in every field")
    }

    /// Embed a rational constant. Over `GF(p)` the denominator must be
    /// invertible mod p.
    pub fn from_rat(desc: &FieldDescriptor, r: &BigRational) -> FieldResult<FieldElement> {
        match desc {
            FieldDescriptor::Rationals => Ok(FieldElement::Rat(r.clone())),
            FieldDescriptor::Prime(p) => {
                let num = mod_p_bigint(r.numer(), *p);
                let den = mod_p_bigint(r.denom(), *p);
                if den == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                let val = mul_mod(num, inv_mod(den, *p), *p);
                Ok(FieldElement::Fp { p: *p, val })
            }
            FieldDescriptor::Tower(gens) => {
                let mut coords = vec![BigRational::zero(); 1 << gens.len()];
                coords[0] = r.clone();
                Ok(FieldElement::Tower {
                    gens: gens.clone(),
                    coords,
                })
            }
        }
    }

    pub fn rational(num: i64, den: i64) -> FieldElement {
        FieldElement::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rat(r) => r.is_zero(),
            FieldElement::Fp { val, .. } => *val == 0,
            FieldElement::Tower { coords, .. } => coords.iter().all(|c| c.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rat(r) => r.is_one(),
            FieldElement::Fp { val, .. } => *val == 1,
            FieldElement::Tower { coords, .. } => {
                coords[0].is_one() && coords[1..].iter().all(|c| c.is_zero())
            }
        }
    }

    /// True if the element lies in the prime field / rational subfield.
    pub fn is_rational(&self) -> bool {
        match self {
            FieldElement::Tower { coords, .. } => coords[1..].iter().all(|c| c.is_zero()),
            _ => true,
        }
    }

    /// Rational value of a tower/rational element, if it has one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            FieldElement::Rat(r) => Some(r.clone()),
            FieldElement::Tower { coords, .. } if self.is_rational() => Some(coords[0].clone()),
            _ => None,
        }
    }

    /// Promote an element into a larger (or equal) field.
    pub fn promote(&self, desc: &FieldDescriptor) -> FieldResult<FieldElement> {
        if &self.descriptor() == desc {
            return Ok(self.clone());
        }
        match (self, desc) {
            (FieldElement::Rat(r), _) => FieldElement::from_rat(desc, r),
            (FieldElement::Tower { gens, coords }, FieldDescriptor::Tower(new_gens)) => {
                // Express every old generator square root inside the new tower.
                let mut reps: Vec<(usize, BigRational)> = Vec::with_capacity(gens.len());
                for g in gens.iter() {
                    match reduce_against_gens(g, new_gens) {
                        Some(rep) => reps.push(rep),
                        None => {
                            return Err(FieldError::IncompatibleFields(format!(
                                "sqrt({g}) does not lie in {}",
                                FieldDescriptor::Tower(new_gens.clone())
                            )))
                        }
                    }
                }
                let desc_out = FieldDescriptor::Tower(new_gens.clone());
                let mut acc = desc_out.zero();
                for (mask, c) in coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut term = FieldElement::from_rat(&desc_out, c)?;
                    for (i, (rep_mask, rep_r)) in reps.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            let mut basis = vec![BigRational::zero(); 1 << new_gens.len()];
                            basis[*rep_mask] = rep_r.clone();
                            let b = FieldElement::Tower {
                                gens: new_gens.clone(),
                                coords: basis,
                            };
                            term = term.mul_raw(&b);
                        }
                    }
                    acc = acc.add_raw(&term);
                }
                Ok(acc)
            }
            _ => Err(FieldError::IncompatibleFields(format!(
                "cannot promote {} into {}",
                self.descriptor(),
                desc
            ))),
        }
    }

    /// Smallest common field of the two elements, with both promoted into it.
    pub fn unify(a: &FieldElement, b: &FieldElement) -> FieldResult<(FieldElement, FieldElement)> {
        let da = a.descriptor();
        let db = b.descriptor();
        if da == db {
            return Ok((a.clone(), b.clone()));
        }
        match (&da, &db) {
            (FieldDescriptor::Rationals, FieldDescriptor::Tower(_)) => {
                Ok((a.promote(&db)?, b.clone()))
            }
            (FieldDescriptor::Tower(_), FieldDescriptor::Rationals) => {
                Ok((a.clone(), b.promote(&da)?))
            }
            (FieldDescriptor::Tower(g1), FieldDescriptor::Tower(g2)) => {
                let mut all: Vec<BigInt> = g1.as_ref().clone();
                all.extend(g2.iter().cloned());
                let desc = FieldDescriptor::tower_closure(&all)?;
                Ok((a.promote(&desc)?, b.promote(&desc)?))
            }
            _ => Err(FieldError::IncompatibleFields(format!("{da} vs {db}"))),
        }
    }

    // -- raw arithmetic (same descriptor required; enforced by callers) -----

    fn zip_tower(
        a: &FieldElement,
        b: &FieldElement,
        f: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> FieldElement {
        match (a, b) {
            (
                FieldElement::Tower { gens, coords: ca },
                FieldElement::Tower { coords: cb, .. },
            ) => FieldElement::Tower {
                gens: gens.clone(),
                coords: ca.iter().zip(cb.iter()).map(|(x, y)| f(x, y)).collect(),
            },
            _ => unreachable!(),
        }
    }

    pub(crate) fn add_raw(&self, rhs: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.descriptor(), rhs.descriptor(), "descriptor mismatch");
        match (self, rhs) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => FieldElement::Rat(a + b),
            (FieldElement::Fp { p, val: a }, FieldElement::Fp { val: b, .. }) => FieldElement::Fp {
                p: *p,
                val: (a + b) % p,
            },
            _ => Self::zip_tower(self, rhs, |x, y| x + y),
        }
    }

    pub(crate) fn sub_raw(&self, rhs: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.descriptor(), rhs.descriptor(), "descriptor mismatch");
        match (self, rhs) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => FieldElement::Rat(a - b),
            (FieldElement::Fp { p, val: a }, FieldElement::Fp { val: b, .. }) => FieldElement::Fp {
                p: *p,
                val: (a + p - b) % p,
            },
            _ => Self::zip_tower(self, rhs, |x, y| x - y),
        }
    }

    pub(crate) fn neg_raw(&self) -> FieldElement {
        match self {
            FieldElement::Rat(a) => FieldElement::Rat(-a),
            FieldElement::Fp { p, val } => FieldElement::Fp {
                p: *p,
                val: (p - val) % p,
            },
            FieldElement::Tower { gens, coords } => FieldElement::Tower {
                gens: gens.clone(),
                coords: coords.iter().map(|c| -c).collect(),
            },
        }
    }

    pub(crate) fn mul_raw(&self, rhs: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.descriptor(), rhs.descriptor(), "descriptor mismatch");
        match (self, rhs) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => FieldElement::Rat(a * b),
            (FieldElement::Fp { p, val: a }, FieldElement::Fp { val: b, .. }) => FieldElement::Fp {
                p: *p,
                val: mul_mod(*a, *b, *p),
            },
            (
                FieldElement::Tower { gens, coords: ca },
                FieldElement::Tower { coords: cb, .. },
            ) => {
                let n = ca.len();
                let mut out = vec![BigRational::zero(); n];
                for (ma, xa) in ca.iter().enumerate() {
                    if xa.is_zero() {
                        continue;
                    }
                    for (mb, xb) in cb.iter().enumerate() {
                        if xb.is_zero() {
                            continue;
                        }
                        // b_S * b_T = prod_{i in S & T} g_i * b_{S xor T}
                        let common = ma & mb;
                        let mut factor = BigInt::one();
                        for (i, g) in gens.iter().enumerate() {
                            if common & (1 << i) != 0 {
                                factor *= g;
                            }
                        }
                        let term = xa * xb * BigRational::from(factor);
                        out[ma ^ mb] += term;
                    }
                }
                FieldElement::Tower {
                    gens: gens.clone(),
                    coords: out,
                }
            }
            _ => unreachable!("descriptor mismatch"),
        }
    }

    pub(crate) fn inv_raw(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        match self {
            FieldElement::Rat(a) => Some(FieldElement::Rat(a.recip())),
            FieldElement::Fp { p, val } => Some(FieldElement::Fp {
                p: *p,
                val: inv_mod(*val, *p),
            }),
            FieldElement::Tower { gens, coords } => {
                Some(tower_inv(gens, coords, gens.len()))
            }
        }
    }

    pub(crate) fn div_raw(&self, rhs: &FieldElement) -> FieldResult<FieldElement> {
        match rhs.inv_raw() {
            Some(i) => Ok(self.mul_raw(&i)),
            None => Err(FieldError::DivisionByZero),
        }
    }

    // -- public checked arithmetic (unifies descriptors first) --------------

    pub fn checked_add(&self, rhs: &FieldElement) -> FieldResult<FieldElement> {
        let (a, b) = Self::unify(self, rhs)?;
        Ok(a.add_raw(&b))
    }

    pub fn checked_sub(&self, rhs: &FieldElement) -> FieldResult<FieldElement> {
        let (a, b) = Self::unify(self, rhs)?;
        Ok(a.sub_raw(&b))
    }

    pub fn checked_mul(&self, rhs: &FieldElement) -> FieldResult<FieldElement> {
        let (a, b) = Self::unify(self, rhs)?;
        Ok(a.mul_raw(&b))
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> FieldResult<FieldElement> {
        let (a, b) = Self::unify(self, rhs)?;
        a.div_raw(&b)
    }

    /// Canonical total order used wherever a deterministic choice is needed
    /// (root ordering, parameter normalization). Rationals compare by the
    /// reduced (numerator, denominator) pair, tower elements lexicographically
    /// by coordinates, residues by value.
    pub fn cmp_canonical(&self, rhs: &FieldElement) -> Ordering {
        match (self, rhs) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => cmp_rat(a, b),
            (FieldElement::Fp { val: a, .. }, FieldElement::Fp { val: b, .. }) => a.cmp(b),
            (
                FieldElement::Tower { coords: ca, .. },
                FieldElement::Tower { coords: cb, .. },
            ) => {
                for (x, y) in ca.iter().zip(cb.iter()) {
                    let o = cmp_rat(x, y);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
            _ => panic!("cmp_canonical on elements of different fields"),
        }
    }

    /// Sign normalization used for deterministic square roots: the first
    /// nonzero coordinate of a "positive" element is positive.
    fn canonical_sign_is_positive(&self) -> bool {
        match self {
            FieldElement::Rat(r) => !r.is_negative(),
            FieldElement::Fp { p, val } => *val <= (p - 1) / 2,
            FieldElement::Tower { coords, .. } => coords
                .iter()
                .find(|c| !c.is_zero())
                .map(|c| c.is_positive())
                .unwrap_or(true),
        }
    }

    /// Exact square root with deterministic sign. Over the rationals and
    /// towers the field is extended as needed (new generators adjoined up to
    /// `cap`); over a prime field non-residues are an error, which signals
    /// that the square-root-closure hypothesis fails for that base field.
    pub fn sqrt(&self) -> FieldResult<(FieldElement, FieldDescriptor)> {
        self.sqrt_with_cap(DEFAULT_TOWER_DEPTH_CAP)
    }

    pub fn sqrt_with_cap(&self, cap: usize) -> FieldResult<(FieldElement, FieldDescriptor)> {
        match self {
            FieldElement::Fp { p, val } => {
                let r = sqrt_mod_p(*val, *p)?;
                Ok((FieldElement::Fp { p: *p, val: r }, FieldDescriptor::Prime(*p)))
            }
            _ => {
                let mut gens: Vec<BigInt> = self.descriptor().gens().to_vec();
                let root = sqrt_avoiding(self, &mut gens, &[], cap, 0)?;
                let desc = tower_desc(&gens);
                let root = if root.canonical_sign_is_positive() {
                    root
                } else {
                    root.neg_raw()
                };
                let orig = self.promote(&desc).expect("superset tower");
                assert!(
                    root.mul_raw(&root) == orig,
                    "square root failed verification"
                );
                Ok((root, desc))
            }
        }
    }
}

fn cmp_rat(a: &BigRational, b: &BigRational) -> Ordering {
    a.numer()
        .cmp(b.numer())
        .then_with(|| a.denom().cmp(b.denom()))
}

/// The scalar text format:
/// rationals as `p/q` or `p`, prime-field residues as integers mod p,
/// tower elements as `c0 + c1*sqrt(d1) + ...` over the product basis.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_scalar(self))
    }
}

// ---------------------------------------------------------------------------
// Modular helpers
// ---------------------------------------------------------------------------

fn mod_p_bigint(n: &BigInt, p: u64) -> u64 {
    use num::ToPrimitive;
    let m = n % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    m.to_u64().expect("reduced residue fits u64")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic square root mod an odd prime (the smaller of the two roots).
fn sqrt_mod_p(a: u64, p: u64) -> FieldResult<u64> {
    if a == 0 {
        return Ok(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return Err(FieldError::NoSquareRoot(format!(
            "{a} is a quadratic non-residue mod {p}"
        )));
    }
    let r = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        tonelli_shanks(a, p)
    };
    Ok(r.min(p - r))
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    // p = q * 2^s + 1 with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    // find a non-residue z
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

// ---------------------------------------------------------------------------
// Tower internals
// ---------------------------------------------------------------------------

/// Recursive inversion by conjugation over the top generator.
fn tower_inv(gens: &Arc<Vec<BigInt>>, coords: &[BigRational], depth: usize) -> FieldElement {
    if depth == 0 {
        let r = coords[0].recip();
        let mut out = vec![BigRational::zero(); coords.len()];
        out[0] = r;
        return FieldElement::Tower {
            gens: gens.clone(),
            coords: out,
        };
    }
    let top_bit = 1usize << (depth - 1);
    let has_top = coords
        .iter()
        .enumerate()
        .any(|(m, c)| m & top_bit != 0 && !c.is_zero());
    if !has_top {
        // invert within the subtower, keep coordinate layout
        let sub: Vec<BigRational> = (0..top_bit).map(|m| coords[m].clone()).collect();
        let inv = tower_inv(gens, &sub, depth - 1);
        if let FieldElement::Tower { coords: ic, .. } = inv {
            let mut out = vec![BigRational::zero(); coords.len()];
            out[..top_bit].clone_from_slice(&ic[..top_bit]);
            return FieldElement::Tower {
                gens: gens.clone(),
                coords: out,
            };
        }
        unreachable!()
    }
    // x = a + b*sqrt(g); 1/x = (a - b*sqrt(g)) / (a^2 - b^2 g)
    let g = &gens[depth - 1];
    let a: Vec<BigRational> = (0..top_bit).map(|m| coords[m].clone()).collect();
    let b: Vec<BigRational> = (0..top_bit).map(|m| coords[m | top_bit].clone()).collect();
    let a_elem = slice_to_elem(gens, &a, coords.len());
    let b_elem = slice_to_elem(gens, &b, coords.len());
    let g_elem = FieldElement::from_rat(
        &FieldDescriptor::Tower(gens.clone()),
        &BigRational::from(g.clone()),
    )
    .unwrap();
    let norm = a_elem
        .mul_raw(&a_elem)
        .sub_raw(&b_elem.mul_raw(&b_elem).mul_raw(&g_elem));
    // norm lives in the subtower; invert recursively
    let norm_coords = match &norm {
        FieldElement::Tower { coords: c, .. } => (0..top_bit).map(|m| c[m].clone()).collect::<Vec<_>>(),
        _ => unreachable!(),
    };
    let norm_inv = tower_inv(gens, &norm_coords, depth - 1);
    let conj = {
        let mut out = coords.to_vec();
        for m in 0..coords.len() {
            if m & top_bit != 0 {
                out[m] = -&out[m];
            }
        }
        FieldElement::Tower {
            gens: gens.clone(),
            coords: out,
        }
    };
    conj.mul_raw(&expand_elem(gens, &norm_inv, coords.len()))
}

fn slice_to_elem(gens: &Arc<Vec<BigInt>>, slice: &[BigRational], full: usize) -> FieldElement {
    let mut out = vec![BigRational::zero(); full];
    out[..slice.len()].clone_from_slice(slice);
    FieldElement::Tower {
        gens: gens.clone(),
        coords: out,
    }
}

fn expand_elem(gens: &Arc<Vec<BigInt>>, e: &FieldElement, full: usize) -> FieldElement {
    match e {
        FieldElement::Tower { coords, .. } => {
            let mut out = vec![BigRational::zero(); full];
            out[..coords.len()].clone_from_slice(coords);
            FieldElement::Tower {
                gens: gens.clone(),
                coords: out,
            }
        }
        _ => unreachable!(),
    }
}

fn tower_desc(gens: &[BigInt]) -> FieldDescriptor {
    if gens.is_empty() {
        FieldDescriptor::Rationals
    } else {
        FieldDescriptor::Tower(Arc::new(gens.to_vec()))
    }
}

/// Square-root search inside a growing multi-quadratic tower.
///
/// The result is kept free of the `forbidden` generators. That restriction is
/// what makes the nested-radical ansatz sound: for x = a + b*sqrt(g) we need
/// sqrt(x) = u + v*sqrt(g) with u, v in a tower not containing sqrt(g), and
/// then u^2 = (a ± sqrt(a^2 - b^2 g))/2 forces the inner norm root to avoid
/// sqrt(g) as well. When the only representations run through forbidden
/// generators the element has no multi-quadratic square root at all.
fn sqrt_avoiding(
    x: &FieldElement,
    gens: &mut Vec<BigInt>,
    forbidden: &[BigInt],
    cap: usize,
    depth: usize,
) -> FieldResult<FieldElement> {
    if depth > SQRT_RECURSION_CAP {
        return Err(FieldError::NoSquareRoot(
            "nested radical exceeds the recursion cap".into(),
        ));
    }
    let x = x.promote(&tower_desc(gens)).expect("layout promotion");
    if x.is_zero() {
        return Ok(tower_desc(gens).zero());
    }
    if let Some(r) = x.as_rational() {
        // sqrt(n/d) = sqrt(n*d)/d; extract the square part of n*d
        let m = r.numer() * r.denom();
        let (s, f) = square_free_decompose(&m)?;
        let base = BigRational::new(s, r.denom().clone());
        if f.is_one() {
            return FieldElement::from_rat(&tower_desc(gens), &base);
        }
        // existing representation through allowed generators?
        for mask in 1..(1usize << gens.len()) {
            if (0..gens.len())
                .any(|i| mask & (1 << i) != 0 && forbidden.contains(&gens[i]))
            {
                continue;
            }
            let mut prod = BigInt::one();
            for (i, g) in gens.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prod *= g;
                }
            }
            let v = &f * &prod;
            if v.is_negative() {
                continue;
            }
            if let Some(w) = perfect_square_root(&v) {
                let coef = &base * BigRational::new(w, prod);
                let mut coords = vec![BigRational::zero(); 1 << gens.len()];
                coords[mask] = coef;
                return Ok(FieldElement::Tower {
                    gens: Arc::new(gens.clone()),
                    coords,
                });
            }
        }
        if reduce_against_gens(&f, gens).is_some() {
            // representable, but only through forbidden generators
            return Err(FieldError::NoSquareRoot(
                "square root exists only through excluded generators".into(),
            ));
        }
        if gens.len() >= cap {
            return Err(FieldError::TowerDepthExceeded(cap));
        }
        insert_gen_sorted(gens, f.clone());
        let idx = gens.iter().position(|g| g == &f).unwrap();
        let mut coords = vec![BigRational::zero(); 1 << gens.len()];
        coords[1 << idx] = base;
        return Ok(FieldElement::Tower {
            gens: Arc::new(gens.clone()),
            coords,
        });
    }

    // split off the highest generator present: x = a + b*sqrt(g)
    let (top_val, a, b) = match &x {
        FieldElement::Tower { gens: gs, coords } => {
            let mut top = None;
            for (m, c) in coords.iter().enumerate() {
                if !c.is_zero() && m != 0 {
                    let high = usize::BITS as usize - 1 - m.leading_zeros() as usize;
                    top = Some(top.map_or(high, |t: usize| t.max(high)));
                }
            }
            let top = top.expect("non-rational element has a generator");
            let bit = 1usize << top;
            let mut ac = vec![BigRational::zero(); coords.len()];
            let mut bc = vec![BigRational::zero(); coords.len()];
            for (m, c) in coords.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if m & bit == 0 {
                    ac[m] = c.clone();
                } else {
                    bc[m & !bit] = c.clone();
                }
            }
            (
                gs[top].clone(),
                FieldElement::Tower {
                    gens: gs.clone(),
                    coords: ac,
                },
                FieldElement::Tower {
                    gens: gs.clone(),
                    coords: bc,
                },
            )
        }
        _ => unreachable!("non-rational element is a tower element"),
    };
    debug_assert!(!forbidden.contains(&top_val), "operand touches a forbidden generator");

    let g_rat = FieldElement::from_rat(&tower_desc(gens), &BigRational::from(top_val.clone()))
        .expect("rational embeds");
    let norm = a.mul_raw(&a).sub_raw(&b.mul_raw(&b).mul_raw(&g_rat));
    let mut forbidden2 = forbidden.to_vec();
    forbidden2.push(top_val.clone());
    let nu = sqrt_avoiding(&norm, gens, &forbidden2, cap, depth + 1)?;
    let desc = tower_desc(gens);
    let a = a.promote(&desc).expect("superset tower");
    let b = b.promote(&desc).expect("superset tower");
    let half = FieldElement::from_rat(&desc, &BigRational::new(BigInt::one(), BigInt::from(2)))
        .expect("rational embeds");
    for sign in [false, true] {
        let cand = if sign { a.sub_raw(&nu) } else { a.add_raw(&nu) }.mul_raw(&half);
        if cand.is_zero() {
            continue;
        }
        let mut trial_gens = gens.clone();
        if let Ok(u) = sqrt_avoiding(&cand, &mut trial_gens, &forbidden2, cap, depth + 1) {
            if u.is_zero() {
                continue;
            }
            *gens = trial_gens;
            let desc = tower_desc(gens);
            let u = u.promote(&desc).expect("superset tower");
            let b = b.promote(&desc).expect("superset tower");
            let two = FieldElement::from_i64(&desc, 2);
            let v = b.div_raw(&two.mul_raw(&u))?;
            let top_idx = gens.iter().position(|g| g == &top_val).expect("generator kept");
            let mut root_g_coords = vec![BigRational::zero(); 1 << gens.len()];
            root_g_coords[1 << top_idx] = BigRational::one();
            let sqrt_g = FieldElement::Tower {
                gens: Arc::new(gens.clone()),
                coords: root_g_coords,
            };
            let result = u.add_raw(&v.mul_raw(&sqrt_g));
            let x_here = x.promote(&desc).expect("superset tower");
            if result.mul_raw(&result) == x_here {
                return Ok(result);
            }
        }
    }
    Err(FieldError::NoSquareRoot(
        "element has no square root in a multi-quadratic tower".into(),
    ))
}

// ---------------------------------------------------------------------------
// Quadratics and the spec-level operations
// ---------------------------------------------------------------------------

/// Binary operation selector for [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact field arithmetic with descriptor unification.
pub fn arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> FieldResult<FieldElement> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

/// All roots of `x^2 - c*x + a`, in the field extended as needed.
/// One root when the discriminant vanishes, two otherwise; roots are sorted
/// by the canonical order and verified by back-substitution.
pub fn solve_quadratic(
    c: &FieldElement,
    a: &FieldElement,
) -> FieldResult<(Vec<FieldElement>, FieldDescriptor)> {
    let desc0 = c.descriptor();
    if desc0.characteristic() == 2 {
        return Err(FieldError::InvalidDescriptor(
            "characteristic 2 not supported".into(),
        ));
    }
    let (c, a) = FieldElement::unify(c, a)?;
    let four = FieldElement::from_i64(&c.descriptor(), 4);
    let disc = c.mul_raw(&c).sub_raw(&four.mul_raw(&a));
    let (s, desc) = disc.sqrt()?;
    let c = c.promote(&desc)?;
    let a = a.promote(&desc)?;
    let two_inv = FieldElement::from_i64(&desc, 2).inv_raw().expect("char != 2");
    let mut roots = vec![c.add_raw(&s).mul_raw(&two_inv)];
    if !s.is_zero() {
        roots.push(c.sub_raw(&s).mul_raw(&two_inv));
    }
    roots.sort_by(|x, y| x.cmp_canonical(y));
    for r in &roots {
        let residual = r.mul_raw(r).sub_raw(&c.mul_raw(r)).add_raw(&a);
        assert!(residual.is_zero(), "quadratic root failed back-substitution");
    }
    Ok((roots, desc))
}

// ---------------------------------------------------------------------------
// Scalar text format
// ---------------------------------------------------------------------------

fn format_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text form of a scalar; see the MSC document format.
pub fn format_scalar(e: &FieldElement) -> String {
    match e {
        FieldElement::Rat(r) => format_rat(r),
        FieldElement::Fp { val, .. } => format!("{val}"),
        FieldElement::Tower { gens, coords } => {
            let mut parts: Vec<String> = Vec::new();
            for (mask, c) in coords.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if mask == 0 {
                    parts.push(format_rat(c));
                } else {
                    let mut prod = BigInt::one();
                    for (i, g) in gens.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            prod *= g;
                        }
                    }
                    if c.is_one() {
                        parts.push(format!("sqrt({prod})"));
                    } else if (-c).is_one() {
                        parts.push(format!("-sqrt({prod})"));
                    } else {
                        parts.push(format!("{}*sqrt({prod})", format_rat(c)));
                    }
                }
            }
            if parts.is_empty() {
                "0".to_string()
            } else {
                let mut s = parts[0].clone();
                for part in &parts[1..] {
                    if let Some(stripped) = part.strip_prefix('-') {
                        s.push_str(" - ");
                        s.push_str(stripped);
                    } else {
                        s.push_str(" + ");
                        s.push_str(part);
                    }
                }
                s
            }
        }
    }
}

/// Parse a scalar in the text format relative to a field descriptor.
pub fn parse_scalar(desc: &FieldDescriptor, input: &str) -> FieldResult<FieldElement> {
    let s = input.trim();
    if s.is_empty() {
        return Err(FieldError::Parse("empty scalar".into()));
    }
    match desc {
        FieldDescriptor::Rationals => Ok(FieldElement::Rat(parse_rat(s)?)),
        FieldDescriptor::Prime(_) => {
            let r = parse_rat(s)?;
            FieldElement::from_rat(desc, &r)
        }
        FieldDescriptor::Tower(gens) => {
            let mut coords = vec![BigRational::zero(); 1 << gens.len()];
            for (sign, term) in split_terms(s)? {
                let (coef, mask) = parse_term(&term, gens)?;
                let signed = if sign { -coef } else { coef };
                coords[mask] += signed;
            }
            Ok(FieldElement::Tower {
                gens: gens.clone(),
                coords,
            })
        }
    }
}

fn parse_rat(s: &str) -> FieldResult<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| FieldError::Parse(format!("bad integer `{num}`")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| FieldError::Parse(format!("bad integer `{den}`")))?;
    if d.is_zero() {
        return Err(FieldError::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

/// Split a sum into (is_negative, term) pairs at top-level +/-.
fn split_terms(s: &str) -> FieldResult<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut sign = false;
    let mut seen_content = false;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
                seen_content = true;
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && seen_content && !cur.trim().is_empty() => {
                out.push((sign, cur.trim().to_string()));
                cur = String::new();
                sign = ch == '-';
                seen_content = false;
            }
            '-' if depth == 0 && cur.trim().is_empty() => {
                sign = !sign;
            }
            _ => {
                if !ch.is_whitespace() {
                    seen_content = true;
                }
                cur.push(ch);
            }
        }
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur.trim().to_string()));
    }
    if out.is_empty() {
        return Err(FieldError::Parse(format!("no terms in `{s}`")));
    }
    Ok(out)
}

/// Parse one term `c`, `sqrt(m)` or `c*sqrt(m)`; returns (coefficient, mask).
fn parse_term(term: &str, gens: &[BigInt]) -> FieldResult<(BigRational, usize)> {
    let term = term.trim();
    if let Some(idx) = term.find("sqrt(") {
        let coef_part = term[..idx].trim().trim_end_matches('*').trim();
        let rest = &term[idx + 5..];
        let close = rest
            .find(')')
            .ok_or_else(|| FieldError::Parse(format!("unclosed sqrt in `{term}`")))?;
        let arg: BigInt = rest[..close]
            .trim()
            .parse()
            .map_err(|_| FieldError::Parse(format!("bad sqrt argument in `{term}`")))?;
        let coef = if coef_part.is_empty() {
            BigRational::one()
        } else {
            parse_rat(coef_part)?
        };
        // locate the subset of generators with this product
        for mask in 1..(1usize << gens.len()) {
            let mut prod = BigInt::one();
            for (i, g) in gens.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prod *= g;
                }
            }
            if prod == arg {
                return Ok((coef, mask));
            }
        }
        Err(FieldError::Parse(format!(
            "sqrt({arg}) is not a basis element of this tower"
        )))
    } else {
        Ok((parse_rat(term)?, 0))
    }
}

// ---------------------------------------------------------------------------
// The field trait used by the generic linear algebra
// ---------------------------------------------------------------------------

/// Minimal exact-field interface. Identities are taken relative to `self`
/// because some implementations (tower elements, residues) carry their field
/// at runtime. Mixing elements of different fields is a programming error.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero(&self) -> Self;
    fn one(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self.mul(&i))
    }
}

impl Field for FieldElement {
    fn zero(&self) -> Self {
        self.descriptor().zero()
    }
    fn one(&self) -> Self {
        self.descriptor().one()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self.add_raw(rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.sub_raw(rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.mul_raw(rhs)
    }
    fn neg(&self) -> Self {
        self.neg_raw()
    }
    fn inv(&self) -> Option<Self> {
        self.inv_raw()
    }
}

// ---------------------------------------------------------------------------
// Univariate polynomials over a field element type
// ---------------------------------------------------------------------------

/// Dense univariate polynomial, ascending coefficients, normalized so the
/// leading coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial {
    pub variable: String,
    pub coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn new(variable: impl Into<String>, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial {
            variable: variable.into(),
            coeffs,
        }
    }

    pub fn zero(variable: impl Into<String>) -> Self {
        Polynomial {
            variable: variable.into(),
            coeffs: vec![],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = x.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_raw(x).add_raw(c);
        }
        acc
    }
}

/// True iff `p` is identically zero. `constraints` document the excluded
/// values whose denominators were cleared while forming `p`; they do not
/// change the decision, which is exact and sampling-free.
pub fn poly_identity_zero(p: &Polynomial, _constraints: &[Polynomial]) -> bool {
    p.is_zero()
}
