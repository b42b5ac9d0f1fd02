//! The matrix-of-structure-constants (MSC) formalism.
//!
//! An n-dimensional algebra with basis e₁…eₙ is the n × n² matrix whose
//! column (i, j), stored at index (i−1)·n + j, holds the coordinates of
//! eᵢ·eⱼ. Products, basis-change actions, the anti-commutativity and Jacobi
//! predicates, and the canonical catalog all live here.

pub mod catalog;

use crate::field::{parse_scalar, Field, FieldDescriptor, FieldElement};
use crate::linalg::{LinalgError, Matrix};
use num::bigint::BigInt;
use num::traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MscError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("algebra is not anti-commutative: {0}")]
    NotAnticommutative(String),
    #[error("basis change is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type MscResult<T> = Result<T, MscError>;

/// Column index of the pair (i, j), 0-based.
pub fn col_index(dim: usize, i: usize, j: usize) -> usize {
    i * dim + j
}

/// An algebra given by its matrix of structure constants.
#[derive(Clone, PartialEq, Debug)]
pub struct Msc {
    dim: usize,
    mat: Matrix<FieldElement>,
}

impl Msc {
    pub fn new(dim: usize, mat: Matrix<FieldElement>) -> MscResult<Self> {
        if mat.rows() != dim || mat.cols() != dim * dim {
            return Err(MscError::DimensionMismatch(format!(
                "expected {}x{}, got {}x{}",
                dim,
                dim * dim,
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(Msc { dim, mat })
    }

    /// Anti-commutative algebra from the products of basis pairs i < j.
    /// `products[k]` is the column for the k-th pair in lexicographic order.
    pub fn from_pair_products(
        dim: usize,
        desc: &FieldDescriptor,
        products: &[Vec<FieldElement>],
    ) -> MscResult<Self> {
        let zero = desc.zero();
        let mut mat = Matrix::zero(dim, dim * dim, &zero);
        let mut k = 0;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let col = &products[k];
                if col.len() != dim {
                    return Err(MscError::DimensionMismatch(format!(
                        "product column ({}, {}) has length {}",
                        i + 1,
                        j + 1,
                        col.len()
                    )));
                }
                for r in 0..dim {
                    mat.set(r, col_index(dim, i, j), col[r].clone());
                    mat.set(r, col_index(dim, j, i), col[r].neg());
                }
                k += 1;
            }
        }
        Msc::new(dim, mat)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Matrix<FieldElement> {
        &self.mat
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.mat.proto().descriptor()
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// Coordinates of eᵢ·eⱼ (0-based indices).
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<FieldElement> {
        self.mat.column(col_index(self.dim, i, j))
    }

    pub fn promote(&self, desc: &FieldDescriptor) -> MscResult<Msc> {
        let mut out = self.mat.clone();
        for r in 0..out.rows() {
            for c in 0..out.cols() {
                out.set(r, c, out.at(r, c).promote(desc)?);
            }
        }
        Msc::new(self.dim, out)
    }

    /// x·y = A(x ⊗ y), bilinear in both arguments.
    pub fn product(&self, x: &[FieldElement], y: &[FieldElement]) -> MscResult<Vec<FieldElement>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(MscError::DimensionMismatch(format!(
                "vectors of length {}/{} in dimension {}",
                x.len(),
                y.len(),
                self.dim
            )));
        }
        let zero = self.mat.proto().zero();
        let mut out = vec![zero.clone(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let scale = x[i].mul(&y[j]);
                let col = col_index(self.dim, i, j);
                for (r, val) in out.iter_mut().enumerate() {
                    *val = val.add(&scale.mul(self.mat.at(r, col)));
                }
            }
        }
        Ok(out)
    }

    /// Basis-change action A ↦ g⁻¹ A (g ⊗ g): the MSC of the same algebra in
    /// the basis whose vectors have the columns of g as old coordinates.
    pub fn act(&self, g: &BasisChange) -> MscResult<Msc> {
        let gi = g.matrix().invert()?;
        let kron = g.matrix().kron(g.matrix());
        let mat = gi.mul(&self.mat)?.mul(&kron)?;
        Msc::new(self.dim, mat)
    }

    /// Isomorphism action A ↦ g A (g⁻¹ ⊗ g⁻¹); inverse of [`Msc::act`] in the
    /// sense that `act_iso(g, act(g, A)) = A`.
    pub fn act_iso(&self, g: &BasisChange) -> MscResult<Msc> {
        let gi = g.matrix().invert()?;
        let kron = gi.kron(&gi);
        let mat = g.matrix().mul(&self.mat)?.mul(&kron)?;
        Msc::new(self.dim, mat)
    }

    /// Structural anti-commutativity: zero diagonal columns and
    /// column (i, j) = −column (j, i). Equivalent to x·x = 0 in char ≠ 2.
    pub fn is_anticommutative(&self) -> bool {
        self.anticommutativity_violation().is_none()
    }

    /// First violating column pair, as a 1-based (i, j) diagnostic.
    pub fn anticommutativity_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim {
            let col = self.basis_product(i, i);
            if col.iter().any(|v| !v.is_zero()) {
                return Some((i + 1, i + 1));
            }
        }
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let a = self.basis_product(i, j);
                let b = self.basis_product(j, i);
                if (0..self.dim).any(|r| !a[r].add(&b[r]).is_zero()) {
                    return Some((i + 1, j + 1));
                }
            }
        }
        None
    }

    /// (xy)z + (yz)x + (zx)y.
    pub fn jacobiator(
        &self,
        x: &[FieldElement],
        y: &[FieldElement],
        z: &[FieldElement],
    ) -> MscResult<Vec<FieldElement>> {
        let xy = self.product(x, y)?;
        let yz = self.product(y, z)?;
        let zx = self.product(z, x)?;
        let t1 = self.product(&xy, z)?;
        let t2 = self.product(&yz, x)?;
        let t3 = self.product(&zx, y)?;
        Ok((0..self.dim)
            .map(|r| t1[r].add(&t2[r]).add(&t3[r]))
            .collect())
    }

    /// Lie test: the jacobiator vanishes on basis triples i < j < k, which
    /// suffices by multilinearity and alternation.
    pub fn is_lie(&self) -> MscResult<bool> {
        if let Some((i, j)) = self.anticommutativity_violation() {
            return Err(MscError::NotAnticommutative(format!(
                "column ({i}, {j}) violates a^2 = 0"
            )));
        }
        let desc = self.descriptor();
        let basis = |k: usize| -> Vec<FieldElement> {
            (0..self.dim)
                .map(|r| {
                    if r == k {
                        desc.one()
                    } else {
                        desc.zero()
                    }
                })
                .collect()
        };
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let jac = self.jacobiator(&basis(i), &basis(j), &basis(k))?;
                    if jac.iter().any(|v| !v.is_zero()) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn basis_vector(&self, k: usize) -> Vec<FieldElement> {
        let desc = self.descriptor();
        (0..self.dim)
            .map(|r| if r == k { desc.one() } else { desc.zero() })
            .collect()
    }
}

/// An invertible basis change; singularity is rejected at construction.
#[derive(Clone, PartialEq, Debug)]
pub struct BasisChange {
    mat: Matrix<FieldElement>,
}

impl BasisChange {
    pub fn new(mat: Matrix<FieldElement>) -> MscResult<Self> {
        if mat.rows() != mat.cols() {
            return Err(MscError::DimensionMismatch(format!(
                "basis change must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        if mat.det().is_zero() {
            return Err(MscError::Singular);
        }
        Ok(BasisChange { mat })
    }

    pub fn identity(dim: usize, desc: &FieldDescriptor) -> Self {
        BasisChange {
            mat: Matrix::identity(dim, &desc.zero()),
        }
    }

    pub fn matrix(&self) -> &Matrix<FieldElement> {
        &self.mat
    }

    pub fn inverse(&self) -> BasisChange {
        BasisChange {
            mat: self.mat.invert().expect("invertible by construction"),
        }
    }

    /// Composition such that acting by `self` then `other` equals acting by
    /// `self.then(other)` (the action is a right action).
    pub fn then(&self, other: &BasisChange) -> BasisChange {
        BasisChange {
            mat: self.mat.mul(&other.mat).expect("square"),
        }
    }

    pub fn promote(&self, desc: &FieldDescriptor) -> MscResult<BasisChange> {
        let mut out = self.mat.clone();
        for r in 0..out.rows() {
            for c in 0..out.cols() {
                out.set(r, c, out.at(r, c).promote(desc)?);
            }
        }
        Ok(BasisChange { mat: out })
    }
}

impl fmt::Display for Msc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mat)
    }
}

// ---------------------------------------------------------------------------
// The MSC document format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Debug, Clone)]
struct FieldDto {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gens: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct MscDto {
    field: FieldDto,
    dim: usize,
    rows: Vec<Vec<String>>,
}

pub fn descriptor_to_dto_value(desc: &FieldDescriptor) -> serde_json::Value {
    serde_json::to_value(descriptor_dto(desc)).expect("descriptor serializes")
}

fn descriptor_dto(desc: &FieldDescriptor) -> FieldDto {
    match desc {
        FieldDescriptor::Rationals => FieldDto {
            kind: "Q".into(),
            p: None,
            gens: None,
        },
        FieldDescriptor::Prime(p) => FieldDto {
            kind: "Fp".into(),
            p: Some(*p),
            gens: None,
        },
        FieldDescriptor::Tower(gens) => FieldDto {
            kind: "tower".into(),
            p: None,
            gens: Some(
                gens.iter()
                    .map(|g| g.to_i64().expect("tower generator fits i64"))
                    .collect(),
            ),
        },
    }
}

fn descriptor_from_dto(dto: &FieldDto) -> MscResult<FieldDescriptor> {
    match dto.kind.as_str() {
        "Q" => Ok(FieldDescriptor::Rationals),
        "Fp" => {
            let p = dto
                .p
                .ok_or_else(|| MscError::Parse("field kind Fp requires `p`".into()))?;
            Ok(FieldDescriptor::prime(p)?)
        }
        "tower" => {
            let gens = dto
                .gens
                .as_ref()
                .ok_or_else(|| MscError::Parse("field kind tower requires `gens`".into()))?;
            let gens: Vec<BigInt> = gens.iter().map(|&g| BigInt::from(g)).collect();
            Ok(FieldDescriptor::tower(&gens)?)
        }
        other => Err(MscError::Parse(format!("unknown field kind `{other}`"))),
    }
}

/// Canonical serialization: reduced fractions, fixed basis order, fixed key
/// order. Byte-stable for a given algebra.
pub fn serialize_msc(a: &Msc) -> String {
    let dto = MscDto {
        field: descriptor_dto(&a.descriptor()),
        dim: a.dim(),
        rows: (0..a.dim())
            .map(|r| {
                (0..a.dim() * a.dim())
                    .map(|c| a.matrix().at(r, c).to_string())
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("document serializes")
}

/// Parse an MSC document; diagnostics name the offending row and column pair.
pub fn parse_msc(text: &str) -> MscResult<Msc> {
    let dto: MscDto =
        serde_json::from_str(text).map_err(|e| MscError::Parse(format!("invalid JSON: {e}")))?;
    let desc = descriptor_from_dto(&dto.field)?;
    let n = dto.dim;
    if n == 0 {
        return Err(MscError::Parse("dim must be positive".into()));
    }
    if dto.rows.len() != n {
        return Err(MscError::Parse(format!(
            "expected {} rows, found {}",
            n,
            dto.rows.len()
        )));
    }
    let mut rows: Vec<Vec<FieldElement>> = Vec::with_capacity(n);
    for (r, row) in dto.rows.iter().enumerate() {
        if row.len() != n * n {
            return Err(MscError::Parse(format!(
                "row {} has {} entries, expected {}",
                r + 1,
                row.len(),
                n * n
            )));
        }
        let mut parsed = Vec::with_capacity(n * n);
        for (c, cell) in row.iter().enumerate() {
            let v = parse_scalar(&desc, cell).map_err(|e| {
                MscError::Parse(format!(
                    "row {}, column pair ({}, {}): {e}",
                    r + 1,
                    c / n + 1,
                    c % n + 1
                ))
            })?;
            parsed.push(v);
        }
        rows.push(parsed);
    }
    Msc::new(n, Matrix::from_rows(rows))
}

/// Matrices rendered as row-major text grids (for reports and witnesses).
pub fn matrix_to_strings(m: &Matrix<FieldElement>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.at(r, c).to_string()).collect())
        .collect()
}
