//! Embedded golden data for the worked examples: exact squares, adjacency
//! matrices, permutation recipes, and pointwise tables that the integration
//! tests and the command-line `reproduce` verb compare against.

use serde::Deserialize;

use crate::field::{Field, FieldError};
use crate::latin::PermutationTriple;
use crate::matrix::Mat;
use crate::transforms::CnotOp;

pub const TWO_QUBIT_SCALAR_JSON: &str = include_str!("../fixtures/two_qubit_scalar_square.json");
pub const THREE_QUBIT_JSON: &str = include_str!("../fixtures/three_qubit_worked_example.json");
pub const TWO_QUTRIT_JSON: &str = include_str!("../fixtures/two_qutrit_worked_example.json");
pub const HALL_PLANE_JSON: &str = include_str!("../fixtures/hall_plane_example.json");

/// Field parameters plus the basis the fixture data was generated with.
#[derive(Clone, Debug, Deserialize)]
pub struct FixtureField {
    pub p: u64,
    pub n: usize,
    pub poly: Vec<u64>,
    pub theta: Vec<usize>,
    pub c: Vec<u64>,
}

impl FixtureField {
    /// Builds the field and checks that the deterministic basis search still
    /// lands on the basis the golden data assumes.
    pub fn build(&self) -> Result<Field, FieldError> {
        let f = Field::build(self.p, self.n, Some(&self.poly))?;
        let desc = f.description();
        assert_eq!(desc.theta, self.theta, "basis drifted from fixture data");
        assert_eq!(desc.c, self.c, "basis scaling drifted from fixture data");
        Ok(f)
    }
}

/// A permutation triple stored as applied maps (no transpose step).
#[derive(Clone, Debug, Deserialize)]
pub struct FixturePerms {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub sym_perm: Vec<usize>,
}

impl FixturePerms {
    pub fn triple(&self) -> PermutationTriple {
        PermutationTriple {
            row_perm: self.row_perm.clone(),
            col_perm: self.col_perm.clone(),
            sym_perm: self.sym_perm.clone(),
            transpose_first: false,
        }
    }
}

/// One row of the characteristic-2 pointwise table: exponent tags of the
/// three σ^{e_j}α^{2^j} coefficients, 0 meaning the term is absent.
#[derive(Clone, Debug, Deserialize)]
pub struct PointwiseRow {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

impl PointwiseRow {
    pub fn f_phi(&self) -> Vec<Option<usize>> {
        tags_to_phi(&self.f)
    }

    pub fn g_phi(&self) -> Vec<Option<usize>> {
        tags_to_phi(&self.g)
    }
}

fn tags_to_phi(tags: &[usize]) -> Vec<Option<usize>> {
    tags.iter().map(|&e| if e == 0 { None } else { Some(e) }).collect()
}

#[derive(Clone, Debug, Deserialize)]
pub struct FixtureMinisquare {
    pub entries: Vec<Vec<usize>>,
    pub theta_exponents: Vec<usize>,
    pub scaled_theta_exponents: Vec<usize>,
}

/// Scalar map square over the four-element field.
#[derive(Clone, Debug, Deserialize)]
pub struct TwoQubitScalarFixture {
    pub field: FixtureField,
    pub lambda: usize,
    pub square: Vec<Vec<usize>>,
}

/// The three-qubit worked example: addition square, the controlled-add image
/// in both square forms, all three permutation recipes, the pointwise table
/// for every scalar map, the identity minisquare, and the orbit data.
#[derive(Clone, Debug, Deserialize)]
pub struct ThreeQubitFixture {
    pub field: FixtureField,
    pub svectors: Vec<Vec<u64>>,
    pub addition_square: Vec<Vec<usize>>,
    pub cnot: CnotOp,
    pub cnot_gamma: Vec<Vec<u64>>,
    pub cnot_nonstandard_square: Vec<Vec<usize>>,
    pub cnot_standard_square: Vec<Vec<usize>>,
    pub nonstandard_to_standard: FixturePerms,
    pub to_original: FixturePerms,
    pub standard_to_standard: FixturePerms,
    pub pointwise_cnot_rows: Vec<PointwiseRow>,
    pub identity_minisquare: FixtureMinisquare,
    pub orbit_seed: usize,
    pub orbit_length: usize,
    pub orbit_row_relabeling: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct FixtureParametric {
    pub gamma_alpha: Vec<Vec<u64>>,
    pub gamma_beta: Vec<Vec<u64>>,
    pub explicit_gamma: Vec<Vec<u64>>,
}

/// Scaling-operation data: T-map diagonal, the generator matrix of the fixed
/// curve before and after the transformation.
#[derive(Clone, Debug, Deserialize)]
pub struct FixtureScaling {
    pub k: Vec<u64>,
    pub t_diag: Vec<u64>,
    pub curve_exponent: usize,
    pub generator_labels: Vec<usize>,
    pub generator_left: Vec<Vec<u64>>,
    pub generator_right: Vec<Vec<u64>>,
    pub transformed_left: Vec<Vec<u64>>,
    pub transformed_right: Vec<Vec<u64>>,
}

/// The two-qutrit worked example: parametric square and its standardization,
/// the controlled-add image, the restoring permutations, and the scaling
/// fixed point.
#[derive(Clone, Debug, Deserialize)]
pub struct TwoQutritFixture {
    pub field: FixtureField,
    pub svectors: Vec<Vec<u64>>,
    pub parametric: FixtureParametric,
    pub parametric_nonstandard_square: Vec<Vec<usize>>,
    pub standardize_row_col_perm: Vec<usize>,
    pub cnot: CnotOp,
    pub cnot_gamma: Vec<Vec<u64>>,
    pub cnot_nonstandard_square: Vec<Vec<usize>>,
    pub to_original: FixturePerms,
    pub scaling_transform: FixtureScaling,
    pub orbit_seed: usize,
    pub orbit_length: usize,
}

/// A non-commutative plane: invertible but asymmetric adjacency, its square,
/// and its minisquare.
#[derive(Clone, Debug, Deserialize)]
pub struct HallPlaneFixture {
    pub field: FixtureField,
    pub phi: Vec<Option<usize>>,
    pub gamma: Vec<Vec<u64>>,
    pub square: Vec<Vec<usize>>,
    pub minisquare: FixtureMinisquare,
}

pub fn two_qubit_scalar() -> TwoQubitScalarFixture {
    serde_json::from_str(TWO_QUBIT_SCALAR_JSON).expect("embedded fixture parses")
}

pub fn three_qubit() -> ThreeQubitFixture {
    serde_json::from_str(THREE_QUBIT_JSON).expect("embedded fixture parses")
}

pub fn two_qutrit() -> TwoQutritFixture {
    serde_json::from_str(TWO_QUTRIT_JSON).expect("embedded fixture parses")
}

pub fn hall_plane() -> HallPlaneFixture {
    serde_json::from_str(HALL_PLANE_JSON).expect("embedded fixture parses")
}

/// Rebuilds a matrix stored row-by-row in a fixture.
pub fn mat(p: u64, rows: &[Vec<u64>]) -> Mat {
    Mat::from_rows(p, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse_and_fields_build() {
        assert_eq!(two_qubit_scalar().square.len(), 4);
        let q3 = three_qubit();
        assert_eq!(q3.field.build().unwrap().d(), 8);
        assert_eq!(q3.svectors.len(), 8);
        assert_eq!(q3.pointwise_cnot_rows.len(), 7);
        let q9 = two_qutrit();
        assert_eq!(q9.field.build().unwrap().d(), 9);
        assert_eq!(q9.cnot_nonstandard_square.len(), 9);
        let hall = hall_plane();
        assert_eq!(hall.phi, vec![None, Some(5)]);
        assert_eq!(hall.minisquare.entries, vec![vec![3, 7], vec![2, 1]]);
    }
}
