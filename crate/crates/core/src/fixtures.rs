//! Loaders for the checked-in claim fixtures: the printed canonical
//! matrices, the invariant table, and friends. Keeping the transcriptions in
//! JSON (rather than hard-coded) makes them diffable against the source.

use crate::field::{Field, FieldDescriptor, FieldElement};
use crate::linalg::Matrix;
use crate::msc::Msc;
use serde::Deserialize;

pub const CANONICAL_MATRICES: &str = include_str!("../fixtures/canonical_matrices.json");
pub const INVARIANT_TABLE: &str = include_str!("../fixtures/invariant_table_claims.json");

#[derive(Debug, Clone, Deserialize)]
pub struct CanonicalFixture {
    pub dim3: Vec<NamedGrid>,
    pub dim2_canonical: Grid,
    pub sl2_witness_from_text: Sl2Witness,
    pub jacobiator_values: Vec<JacobiatorValue>,
    pub printed_identities: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NamedGrid {
    pub name: String,
    #[serde(default)]
    pub parametric: bool,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Grid {
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Sl2Witness {
    pub e: Vec<String>,
    pub f: Vec<String>,
    pub h: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct JacobiatorValue {
    pub family: String,
    pub triple: Vec<usize>,
    pub value: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct InvariantTableFixture {
    pub table: Vec<TableRow>,
    pub sentences: Vec<Sentence>,
    pub lambda_samples: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct TableRow {
    pub family: String,
    pub parametric: bool,
    pub dim_ann: usize,
    pub dim_sq: usize,
    pub dim_ann_cap_sq: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Sentence {
    pub id: String,
    pub text: String,
    pub family: String,
    #[serde(default)]
    pub claimed_dim_center: Option<usize>,
    #[serde(default)]
    pub claimed_dim_ann: Option<usize>,
}

pub fn canonical_fixture() -> CanonicalFixture {
    serde_json::from_str(CANONICAL_MATRICES).expect("canonical matrices fixture is valid JSON")
}

pub fn invariant_table_fixture() -> InvariantTableFixture {
    serde_json::from_str(INVARIANT_TABLE).expect("invariant table fixture is valid JSON")
}

/// Interpret a fixture cell: an integer, ±lambda, or ±i.
pub fn cell_value(
    cell: &str,
    lambda: Option<&FieldElement>,
    i_elem: Option<&FieldElement>,
    desc: &FieldDescriptor,
) -> FieldElement {
    match cell {
        "lambda" => lambda.expect("grid needs a lambda value").clone(),
        "-lambda" => lambda.expect("grid needs a lambda value").neg(),
        "i" => i_elem.expect("grid needs i with i^2 = -1").clone(),
        "-i" => i_elem.expect("grid needs i with i^2 = -1").neg(),
        n => {
            let v: i64 = n.parse().expect("integer fixture cell");
            FieldElement::from_i64(desc, v)
        }
    }
}

/// Materialize a fixture grid as a matrix over the given field.
pub fn grid_to_matrix(
    rows: &[Vec<String>],
    lambda: Option<&FieldElement>,
    i_elem: Option<&FieldElement>,
    desc: &FieldDescriptor,
) -> Matrix<FieldElement> {
    Matrix::from_rows(
        rows.iter()
            .map(|row| {
                row.iter()
                    .map(|cell| cell_value(cell, lambda, i_elem, desc))
                    .collect()
            })
            .collect(),
    )
}

/// Materialize a 3-dimensional fixture grid as an algebra.
pub fn grid_to_msc(
    grid: &NamedGrid,
    lambda: Option<&FieldElement>,
    i_elem: Option<&FieldElement>,
    desc: &FieldDescriptor,
) -> Msc {
    let mat = grid_to_matrix(&grid.rows, lambda, i_elem, desc);
    Msc::new(3, mat).expect("fixture grids are 3x9")
}
