//! The canonical catalog: classification representatives A₁ … A₉, the
//! three-dimensional Lie list, the two-dimensional canonical algebra, and
//! the five ZA representatives from the rival classification.
//!
//! Constructors are generic over the scalar field so the same matrices can
//! be instantiated over ℚ, GF(p), towers, or symbolic rational functions.

use crate::field::{Field, FieldDescriptor, FieldElement};
use crate::linalg::Matrix;
use crate::msc::{col_index, Msc};

/// Classification family of a three-dimensional anti-commutative algebra.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    Trivial,
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Trivial => "trivial",
            Family::A1 => "A1",
            Family::A2 => "A2",
            Family::A3 => "A3",
            Family::A4 => "A4",
            Family::A5 => "A5",
            Family::A6 => "A6",
            Family::A7 => "A7",
            Family::A8 => "A8",
            Family::A9 => "A9",
        }
    }

    /// Families carrying a parameter λ.
    pub fn is_parametric(self) -> bool {
        matches!(self, Family::A2 | Family::A4 | Family::A6 | Family::A7)
    }

    /// The non-Lie families of the classification (A₄ is non-Lie away from
    /// λ = −1 and A₆ is the Lie family r₃).
    pub fn non_lie_families() -> [Family; 6] {
        [
            Family::A1,
            Family::A2,
            Family::A3,
            Family::A4,
            Family::A5,
            Family::A7,
        ]
    }

    pub fn all() -> [Family; 9] {
        [
            Family::A1,
            Family::A2,
            Family::A3,
            Family::A4,
            Family::A5,
            Family::A6,
            Family::A7,
            Family::A8,
            Family::A9,
        ]
    }
}

/// Lie-list aliases attached to Lie members of the catalog.
#[derive(Clone, PartialEq, Debug)]
pub enum LieAlias {
    Sl2,
    R3(FieldElement),
    R3Prime1,
    H3,
}

impl LieAlias {
    pub fn name(&self) -> String {
        match self {
            LieAlias::Sl2 => "sl2".into(),
            LieAlias::R3(l) => format!("r3({l})"),
            LieAlias::R3Prime1 => "r3'(1)".into(),
            LieAlias::H3 => "h3".into(),
        }
    }
}

fn int<K: Field>(proto: &K, n: i64) -> K {
    let one = proto.one();
    let mut acc = proto.zero();
    for _ in 0..n.unsigned_abs() {
        acc = acc.add(&one);
    }
    if n < 0 {
        acc.neg()
    } else {
        acc
    }
}

/// 3 × 9 anti-commutative MSC from the three products e₁e₂, e₁e₃, e₂e₃.
pub fn from_products<K: Field>(proto: &K, v12: [K; 3], v13: [K; 3], v23: [K; 3]) -> Matrix<K> {
    let zero = proto.zero();
    let mut m = Matrix::zero(3, 9, &zero);
    let pairs = [(0usize, 1usize, v12), (0, 2, v13), (1, 2, v23)];
    for (i, j, col) in pairs {
        for (r, v) in col.iter().enumerate() {
            m.set(r, col_index(3, i, j), v.clone());
            m.set(r, col_index(3, j, i), v.neg());
        }
    }
    m
}

fn e<K: Field>(proto: &K, k: usize) -> [K; 3] {
    let mut v = [proto.zero(), proto.zero(), proto.zero()];
    v[k] = proto.one();
    v
}

fn zero3<K: Field>(proto: &K) -> [K; 3] {
    [proto.zero(), proto.zero(), proto.zero()]
}

pub fn a1_matrix<K: Field>(proto: &K) -> Matrix<K> {
    from_products(proto, e(proto, 1), zero3(proto), e(proto, 2))
}

pub fn a2_matrix<K: Field>(lambda: &K) -> Matrix<K> {
    let p = lambda;
    from_products(
        p,
        e(p, 1),
        [p.one(), lambda.clone(), p.zero()],
        e(p, 2),
    )
}

pub fn a3_matrix<K: Field>(proto: &K) -> Matrix<K> {
    from_products(
        proto,
        e(proto, 1),
        [proto.zero(), proto.one(), proto.zero()],
        e(proto, 2),
    )
}

pub fn a4_matrix<K: Field>(lambda: &K) -> Matrix<K> {
    let p = lambda;
    from_products(
        p,
        e(p, 1),
        [p.zero(), p.zero(), lambda.clone()],
        e(p, 0),
    )
}

/// The one-parameter normal form A₅(a); the canonical A₅ is A₅(1) and
/// A₅(0) coincides with A₄(1) entry by entry.
pub fn a5_param_matrix<K: Field>(a: &K) -> Matrix<K> {
    let p = a;
    from_products(
        p,
        e(p, 1),
        e(p, 2),
        [p.one(), a.clone(), p.zero()],
    )
}

pub fn a5_matrix<K: Field>(proto: &K) -> Matrix<K> {
    a5_param_matrix(&proto.one())
}

pub fn a6_matrix<K: Field>(lambda: &K) -> Matrix<K> {
    let p = lambda;
    from_products(
        p,
        e(p, 1),
        [p.zero(), p.zero(), lambda.clone()],
        zero3(p),
    )
}

pub fn a7_matrix<K: Field>(lambda: &K) -> Matrix<K> {
    let p = lambda;
    from_products(
        p,
        e(p, 1),
        [p.one(), p.zero(), lambda.clone()],
        zero3(p),
    )
}

pub fn a8_matrix<K: Field>(proto: &K) -> Matrix<K> {
    from_products(
        proto,
        e(proto, 1),
        [proto.zero(), proto.one(), proto.one()],
        zero3(proto),
    )
}

pub fn a9_matrix<K: Field>(proto: &K) -> Matrix<K> {
    from_products(proto, zero3(proto), zero3(proto), e(proto, 0))
}

// -- the Lie list ----------------------------------------------------------

pub fn sl2_matrix<K: Field>(proto: &K) -> Matrix<K> {
    from_products(
        proto,
        e(proto, 2),
        [int(proto, -2), proto.zero(), proto.zero()],
        [proto.zero(), int(proto, 2), proto.zero()],
    )
}

pub fn r3_matrix<K: Field>(lambda: &K) -> Matrix<K> {
    a6_matrix(lambda)
}

pub fn r3_prime_1_matrix<K: Field>(proto: &K) -> Matrix<K> {
    a8_matrix(proto)
}

pub fn h3_matrix<K: Field>(proto: &K) -> Matrix<K> {
    a9_matrix(proto)
}

// -- the rival ZA list -----------------------------------------------------

pub fn za1_matrix<K: Field>(proto: &K) -> Matrix<K> {
    from_products(proto, e(proto, 2), zero3(proto), e(proto, 1))
}

pub fn za2_matrix<K: Field>(proto: &K) -> Matrix<K> {
    from_products(
        proto,
        e(proto, 2),
        [proto.zero(), proto.zero(), proto.one().neg()],
        [proto.zero(), proto.one(), proto.one()],
    )
}

pub fn za3_matrix<K: Field>(lambda: &K) -> Matrix<K> {
    let p = lambda;
    from_products(
        p,
        e(p, 2),
        [p.zero(), p.one().neg(), p.zero()],
        [p.one(), lambda.clone(), p.zero()],
    )
}

pub fn za4_matrix<K: Field>(proto: &K) -> Matrix<K> {
    from_products(
        proto,
        e(proto, 2),
        [int(proto, -1), int(proto, -2), proto.zero()],
        [int(proto, 1), int(proto, 2), int(proto, 2)],
    )
}

/// ZA₅ needs a scalar i with i² = −1.
pub fn za5_matrix<K: Field>(i: &K) -> Matrix<K> {
    let p = i;
    from_products(
        p,
        e(p, 2),
        [p.zero(), p.one().neg(), p.zero()],
        [p.one(), p.one(), i.clone()],
    )
}

// -- Msc-level constructors -------------------------------------------------

pub fn canonical_matrix<K: Field>(family: Family, param: Option<&K>, proto: &K) -> Matrix<K> {
    match family {
        Family::Trivial => Matrix::zero(3, 9, &proto.zero()),
        Family::A1 => a1_matrix(proto),
        Family::A2 => a2_matrix(param.expect("A2 takes a parameter")),
        Family::A3 => a3_matrix(proto),
        Family::A4 => a4_matrix(param.expect("A4 takes a parameter")),
        Family::A5 => a5_matrix(proto),
        Family::A6 => a6_matrix(param.expect("A6 takes a parameter")),
        Family::A7 => a7_matrix(param.expect("A7 takes a parameter")),
        Family::A8 => a8_matrix(proto),
        Family::A9 => a9_matrix(proto),
    }
}

pub fn canonical_msc(
    family: Family,
    param: Option<&FieldElement>,
    desc: &FieldDescriptor,
) -> Msc {
    let proto = desc.zero();
    let param = param.map(|p| p.promote(desc).expect("parameter embeds"));
    let mat = canonical_matrix(family, param.as_ref(), &proto);
    Msc::new(3, mat).expect("catalog matrices are well-formed")
}

pub fn lie_msc(alias: &LieAlias, desc: &FieldDescriptor) -> Msc {
    let proto = desc.zero();
    let mat = match alias {
        LieAlias::Sl2 => sl2_matrix(&proto),
        LieAlias::R3(l) => r3_matrix(&l.promote(desc).expect("parameter embeds")),
        LieAlias::R3Prime1 => r3_prime_1_matrix(&proto),
        LieAlias::H3 => h3_matrix(&proto),
    };
    Msc::new(3, mat).expect("catalog matrices are well-formed")
}

pub fn za_msc(k: usize, param: Option<&FieldElement>, desc: &FieldDescriptor) -> Msc {
    let proto = desc.zero();
    let mat = match k {
        1 => za1_matrix(&proto),
        2 => za2_matrix(&proto),
        3 => za3_matrix(&param.expect("ZA3 takes a parameter").promote(desc).unwrap()),
        4 => za4_matrix(&proto),
        5 => za5_matrix(&param.expect("ZA5 takes i with i^2 = -1").promote(desc).unwrap()),
        _ => panic!("ZA index out of range"),
    };
    Msc::new(3, mat).expect("catalog matrices are well-formed")
}

/// The canonical non-trivial two-dimensional anti-commutative algebra:
/// e₁e₂ = e₂.
pub fn two_dim_canonical(desc: &FieldDescriptor) -> Msc {
    let zero = desc.zero();
    let one = desc.one();
    let mut m = Matrix::zero(2, 4, &zero);
    m.set(1, col_index(2, 0, 1), one.clone());
    m.set(1, col_index(2, 1, 0), one.neg());
    Msc::new(2, m).expect("well-formed")
}
