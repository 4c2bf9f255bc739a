//! Latin squares built from additive maps, orthogonality checking, the
//! permutation action on squares, and the n×n minisquare condensation.
//!
//! Conventions, used everywhere:
//! - Row/column/symbol indices are the exponent labels 0..d−1 (0 = zero element).
//! - The standard square of a map f is L_{ij} = σ^j + f(σ^i); its first row is
//!   0 1 2 … d−1 because f maps zero to zero.
//! - The nonstandard (parametric) square is L̃_{ij} = Σ_k (s^j Γ^{(α)} + s^i Γ^{(β)})_k θ_k.
//! - A permutation triple acts by content movement: after an optional
//!   transpose, entry (i,j) moves to (ρ(i), κ(j)) and its symbol v becomes ν(v).

use serde::{Deserialize, Serialize};

use crate::curves::{Curve, ParametricCurve};
use crate::field::Field;
use crate::matrix::{row_times_mat, Mat};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LatinSquare {
    pub d: usize,
    pub grid: Vec<Vec<usize>>,
    /// Free-form origin notes carried through serialization (never compared).
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub provenance: serde_json::Value,
}

/// Row, column, and symbol permutations (applied maps, 0-indexed), with an
/// optional transpose performed before the three maps.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PermutationTriple {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub sym_perm: Vec<usize>,
    #[serde(default)]
    pub transpose_first: bool,
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum LatinError {
    #[error("map is degenerate: the construction cannot yield a Latin square")]
    Degenerate,
    #[error("squares have different orders")]
    OrderMismatch,
    #[error("permutation length does not match square order")]
    SizeMismatch,
    #[error("grid is not a Latin square")]
    NotLatin,
}

impl LatinSquare {
    pub fn from_grid(grid: Vec<Vec<usize>>) -> Result<LatinSquare, LatinError> {
        let d = grid.len();
        let ok = grid.iter().all(|r| r.len() == d);
        if !ok {
            return Err(LatinError::NotLatin);
        }
        let sq = LatinSquare { d, grid, provenance: serde_json::Value::Null };
        if !sq.is_latin() {
            return Err(LatinError::NotLatin);
        }
        Ok(sq)
    }

    /// Every row and every column hits every symbol exactly once.
    pub fn is_latin(&self) -> bool {
        let d = self.d;
        let mut seen = vec![false; d];
        for i in 0..d {
            seen.iter_mut().for_each(|s| *s = false);
            for j in 0..d {
                let v = self.grid[i][j];
                if v >= d || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
            seen.iter_mut().for_each(|s| *s = false);
            for j in 0..d {
                let v = self.grid[j][i];
                if v >= d || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        true
    }

    /// Standard form: first row reads 0 1 … d−1.
    pub fn is_standard(&self) -> bool {
        (0..self.d).all(|j| self.grid[0][j] == j)
    }

    pub fn with_provenance(mut self, p: serde_json::Value) -> LatinSquare {
        self.provenance = p;
        self
    }
}

impl PermutationTriple {
    pub fn identity(d: usize) -> PermutationTriple {
        PermutationTriple {
            row_perm: (0..d).collect(),
            col_perm: (0..d).collect(),
            sym_perm: (0..d).collect(),
            transpose_first: false,
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.transpose_first
            && self.row_perm.iter().enumerate().all(|(i, &v)| i == v)
            && self.col_perm.iter().enumerate().all(|(i, &v)| i == v)
            && self.sym_perm.iter().enumerate().all(|(i, &v)| i == v)
    }
}

/// L_{ij} = σ^j + f(σ^i). Rows are indexed by the map argument, columns by the
/// added element, so row 0 is always 0 1 … d−1. Errors with [`LatinError::Degenerate`]
/// when the map is singular (columns would repeat symbols).
pub fn standard_ls(field: &Field, curve: &Curve) -> Result<LatinSquare, LatinError> {
    if !curve.is_invertible() {
        return Err(LatinError::Degenerate);
    }
    let d = field.d();
    let grid = (0..d)
        .map(|i| {
            let fi = crate::curves::curve_eval(field, curve, i);
            (0..d).map(|j| field.add(j, fi)).collect()
        })
        .collect();
    Ok(LatinSquare { d, grid, provenance: serde_json::Value::Null })
}

/// L̃_{ij} from a parametric curve: the s-vector of entry (i,j) is
/// s^j·Γ^{(α)}·C + s^i·Γ^{(β)}·C (column tracks α, row tracks β).
pub fn nonstandard_ls(field: &Field, pc: &ParametricCurve) -> Result<LatinSquare, LatinError> {
    if !pc.gamma_alpha.is_invertible() || !pc.gamma_beta.is_invertible() {
        return Err(LatinError::Degenerate);
    }
    let d = field.d();
    let p = field.p();
    let col_part: Vec<Vec<u64>> =
        (0..d).map(|j| row_times_mat(field.svector(j), &pc.gamma_alpha)).collect();
    let row_part: Vec<Vec<u64>> =
        (0..d).map(|i| row_times_mat(field.svector(i), &pc.gamma_beta)).collect();
    let grid: Vec<Vec<usize>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let v: Vec<u64> = col_part[j]
                        .iter()
                        .zip(&row_part[i])
                        .map(|(&a, &b)| (a + b) % p)
                        .collect();
                    field.label_from_theta_coords(&v)
                })
                .collect()
        })
        .collect();
    let sq = LatinSquare { d, grid, provenance: serde_json::Value::Null };
    if !sq.is_latin() {
        return Err(LatinError::NotLatin);
    }
    Ok(sq)
}

/// Applies a permutation triple by content movement: with G the grid after the
/// optional transpose, the result R satisfies R[ρ(i)][κ(j)] = ν(G[i][j]).
pub fn apply_triple(sq: &LatinSquare, t: &PermutationTriple) -> Result<LatinSquare, LatinError> {
    let d = sq.d;
    if t.row_perm.len() != d || t.col_perm.len() != d || t.sym_perm.len() != d {
        return Err(LatinError::SizeMismatch);
    }
    let mut grid = vec![vec![0usize; d]; d];
    for i in 0..d {
        for j in 0..d {
            let v = if t.transpose_first { sq.grid[j][i] } else { sq.grid[i][j] };
            grid[t.row_perm[i]][t.col_perm[j]] = t.sym_perm[v];
        }
    }
    Ok(LatinSquare { d, grid, provenance: sq.provenance.clone() })
}

/// The row/column relabeling that standardizes the nonstandard square of an
/// invertible parametric curve: both permutations move index i to the label
/// of s^i·M where M = Γ^{(α)}·C, symbols stay put, and index 0 is fixed.
pub fn standardize_triple(
    field: &Field,
    pc: &ParametricCurve,
) -> Result<PermutationTriple, LatinError> {
    let m = pc.gamma_alpha.mul(&field.c_mat());
    if !m.is_invertible() {
        return Err(LatinError::Degenerate);
    }
    let perm = label_action(field, &m);
    Ok(PermutationTriple {
        row_perm: perm.clone(),
        col_perm: perm,
        sym_perm: (0..field.d()).collect(),
        transpose_first: false,
    })
}

/// Standardizes a square produced by [`nonstandard_ls`] from `pc`: applies the
/// structural row/column permutation of [`standardize_triple`], yielding the
/// standard square of the explicit form of `pc` together with the triple used.
pub fn standardize(
    field: &Field,
    sq: &LatinSquare,
    pc: &ParametricCurve,
) -> Result<(LatinSquare, PermutationTriple), LatinError> {
    let triple = standardize_triple(field, pc)?;
    let out = apply_triple(sq, &triple)?;
    Ok((out, triple))
}

/// The permutation i ↦ label(s^i·M) induced on exponent labels by an
/// invertible matrix M acting on s-vectors.
pub fn label_action(field: &Field, m: &Mat) -> Vec<usize> {
    (0..field.d()).map(|i| point_from_label_map(field, m, i)).collect()
}

fn point_from_label_map(field: &Field, m: &Mat, i: usize) -> usize {
    let s = row_times_mat(field.svector(i), m);
    field.label_from_svector(&s)
}

/// Orthogonality by pair occupancy: the d² ordered pairs (A_{ij}, B_{ij})
/// must all be distinct.
pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<bool, LatinError> {
    if a.d != b.d {
        return Err(LatinError::OrderMismatch);
    }
    Ok(collisions(a, b).is_empty())
}

/// The symbol pairs that appear more than once, with their multiplicities —
/// empty exactly when the squares are orthogonal.
pub fn collisions(a: &LatinSquare, b: &LatinSquare) -> Vec<(usize, usize, usize)> {
    let d = a.d;
    let mut count = vec![0u32; d * d];
    for i in 0..d {
        for j in 0..d {
            count[a.grid[i][j] * d + b.grid[i][j]] += 1;
        }
    }
    let mut out = Vec::new();
    for (code, &c) in count.iter().enumerate() {
        if c > 1 {
            out.push((code / d, code % d, c as usize));
        }
    }
    out
}

/// Are these d−1 squares of order d pairwise orthogonal (a complete set)?
pub fn is_complete_mols(set: &[LatinSquare]) -> Result<bool, LatinError> {
    let Some(first) = set.first() else { return Ok(false) };
    let d = first.d;
    if set.iter().any(|s| s.d != d) {
        return Err(LatinError::OrderMismatch);
    }
    if set.len() != d - 1 {
        return Ok(false);
    }
    if set.iter().any(|s| !s.is_latin()) {
        return Ok(false);
    }
    let pairs: Vec<(usize, usize)> =
        (0..set.len()).flat_map(|i| (i + 1..set.len()).map(move |j| (i, j))).collect();
    Ok(all_pairs_orthogonal(&pairs, set))
}

#[cfg(feature = "parallel")]
fn all_pairs_orthogonal(pairs: &[(usize, usize)], set: &[LatinSquare]) -> bool {
    use rayon::prelude::*;
    pairs.par_iter().all(|&(i, j)| collisions(&set[i], &set[j]).is_empty())
}

#[cfg(not(feature = "parallel"))]
fn all_pairs_orthogonal(pairs: &[(usize, usize)], set: &[LatinSquare]) -> bool {
    pairs.iter().all(|&(i, j)| collisions(&set[i], &set[j]).is_empty())
}

/// Sequential pairwise check, always available (the benches compare this
/// against the parallel dispatch above).
pub fn is_complete_mols_sequential(set: &[LatinSquare]) -> Result<bool, LatinError> {
    let Some(first) = set.first() else { return Ok(false) };
    let d = first.d;
    if set.iter().any(|s| s.d != d) {
        return Err(LatinError::OrderMismatch);
    }
    if set.len() != d - 1 || set.iter().any(|s| !s.is_latin()) {
        return Ok(false);
    }
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            if !collisions(&set[i], &set[j]).is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The n×n condensation of a map's square: ℓ_{ij} = θ_j + f(c_i^{-1}θ_i),
/// which sits inside the big square at rows q(i), columns p(j) where
/// θ_j = σ^{p(j)} and c_i^{-1}θ_i = σ^{q(i)}.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Minisquare {
    /// entries[i][j] = ℓ_{ij} as exponent labels.
    pub entries: Vec<Vec<usize>>,
    /// p(j): exponents of the basis elements θ_j (column positions).
    pub theta_exponents: Vec<usize>,
    /// q(i): exponents of the scaled basis elements c_i^{-1}θ_i (row positions).
    pub scaled_theta_exponents: Vec<usize>,
}

pub fn minisquare(field: &Field, curve: &Curve) -> Minisquare {
    let n = field.n();
    let entries = (0..n)
        .map(|i| {
            let fi = crate::curves::curve_eval(field, curve, field.scaled_theta_label(i));
            (0..n).map(|j| field.add(field.theta_label(j), fi)).collect()
        })
        .collect();
    Minisquare {
        entries,
        theta_exponents: (0..n).map(|j| field.theta_label(j)).collect(),
        scaled_theta_exponents: (0..n).map(|i| field.scaled_theta_label(i)).collect(),
    }
}

/// Commutativity read off the minisquare alone: f is symmetric
/// (tr(αf(β)) = tr(βf(α)) for all α,β) iff
/// tr(ℓ_{ij}·c_j^{-1}θ_j) = tr(ℓ_{ji}·c_i^{-1}θ_i) for all i,j.
/// Each side equals 1 + Γ-entry, so this is exactly Γ-symmetry.
pub fn minisquare_commutative(field: &Field, ms: &Minisquare) -> bool {
    let n = ms.entries.len();
    for i in 0..n {
        for j in 0..n {
            if trace_against_scaled_theta(field, ms.entries[i][j], j)
                != trace_against_scaled_theta(field, ms.entries[j][i], i)
            {
                return false;
            }
        }
    }
    true
}

/// tr(σ^label · c_k^{-1}θ_k).
pub fn trace_against_scaled_theta(field: &Field, label: usize, k: usize) -> u64 {
    field.trace(field.mul(label, field.scaled_theta_label(k)))
}

/// The minisquare's position inside the full square:
/// ℓ_{ij} = L_{q(i), p(j)} for the standard square of the same map.
pub fn minisquare_positions(ms: &Minisquare) -> Vec<(usize, usize)> {
    let n = ms.entries.len();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push((ms.scaled_theta_exponents[i], ms.theta_exponents[j]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{scalar_curve, ParametricCurve};

    fn f8() -> Field {
        Field::build(2, 3, None).unwrap()
    }

    fn f9() -> Field {
        Field::build(3, 2, None).unwrap()
    }

    #[test]
    fn gf4_square_from_sigma_alpha() {
        let f = Field::build(2, 2, None).unwrap();
        let sq = standard_ls(&f, &scalar_curve(&f, 1)).unwrap();
        assert_eq!(
            sq.grid,
            vec![vec![0, 1, 2, 3], vec![2, 3, 0, 1], vec![3, 2, 1, 0], vec![1, 0, 3, 2]]
        );
    }

    #[test]
    fn standard_square_gf8_identity_map() {
        let f = f8();
        let id = crate::curves::identity_curve(&f);
        let sq = standard_ls(&f, &id).unwrap();
        assert_eq!(sq.grid[0], vec![0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(sq.grid[1], vec![1, 0, 6, 4, 3, 7, 2, 5]);
        assert_eq!(sq.grid[7], vec![7, 5, 3, 2, 6, 1, 4, 0]);
        assert!(sq.is_latin() && sq.is_standard());
        // The addition table is symmetric.
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(sq.grid[i][j], sq.grid[j][i]);
            }
        }
    }

    #[test]
    fn prime_field_identity_minisquare_doubles_theta() {
        // n = 1 with the identity map: the single entry is θ + θ = 2θ.
        for p in [2u64, 3, 5, 7] {
            let f = Field::build(p, 1, None).unwrap();
            let ms = minisquare(&f, &crate::curves::identity_curve(&f));
            let theta = f.theta_label(0);
            assert_eq!(ms.entries, vec![vec![f.scalar_mul(2, theta)]], "p = {p}");
            assert!(minisquare_commutative(&f, &ms));
        }
    }

    #[test]
    fn degenerate_map_is_rejected() {
        let f = f8();
        let zero = Curve::new(Mat::zero(2, 3, 3));
        assert_eq!(standard_ls(&f, &zero).unwrap_err(), LatinError::Degenerate);
        let pc = ParametricCurve::new(Mat::zero(2, 3, 3), Mat::identity(2, 3));
        assert_eq!(nonstandard_ls(&f, &pc).unwrap_err(), LatinError::Degenerate);
    }

    #[test]
    fn standardize_matches_explicit_form() {
        let f = f9();
        let pc = ParametricCurve::new(
            Mat::from_rows(3, &[vec![0, 1], vec![1, 0]]),
            Mat::from_rows(3, &[vec![1, 1], vec![1, 2]]),
        );
        let tilde = nonstandard_ls(&f, &pc).unwrap();
        assert!(!tilde.is_standard());
        let (std_sq, triple) = standardize(&f, &tilde, &pc).unwrap();
        assert!(std_sq.is_standard());
        let explicit = crate::curves::parametric_to_explicit(&f, &pc).unwrap();
        let direct = standard_ls(&f, &explicit).unwrap();
        assert_eq!(std_sq.grid, direct.grid);
        assert_eq!(triple.row_perm, triple.col_perm);
        assert!(triple.sym_perm.iter().enumerate().all(|(i, &v)| i == v));
    }

    #[test]
    fn already_standard_square_gets_identity_triple() {
        let f = f9();
        let curve = scalar_curve(&f, 3);
        let pc = ParametricCurve::from_explicit(&f, &curve);
        let sq = nonstandard_ls(&f, &pc).unwrap();
        assert!(sq.is_standard());
        let (same, triple) = standardize(&f, &sq, &pc).unwrap();
        assert_eq!(same.grid, sq.grid);
        assert!(triple.is_identity());
    }

    #[test]
    fn orthogonality_and_diagnostics() {
        let f = f8();
        let a = standard_ls(&f, &scalar_curve(&f, 1)).unwrap();
        let b = standard_ls(&f, &scalar_curve(&f, 2)).unwrap();
        assert!(are_orthogonal(&a, &b).unwrap());
        assert!(!are_orthogonal(&a, &a).unwrap());
        let c = collisions(&a, &a);
        assert_eq!(c.len(), 8); // each diagonal pair (v,v) appears 8 times
        assert!(c.iter().all(|&(x, y, m)| x == y && m == 8));
        let f9 = f9();
        let other = standard_ls(&f9, &scalar_curve(&f9, 1)).unwrap();
        assert_eq!(are_orthogonal(&a, &other).unwrap_err(), LatinError::OrderMismatch);
    }

    #[test]
    fn desarguesian_set_is_complete() {
        let f = f8();
        let set: Vec<LatinSquare> = crate::curves::desarguesian_bundle(&f)
            .iter()
            .map(|c| standard_ls(&f, c).unwrap())
            .collect();
        assert!(is_complete_mols(&set).unwrap());
        assert!(is_complete_mols_sequential(&set).unwrap());
        assert!(!is_complete_mols(&set[1..]).unwrap());
    }

    #[test]
    fn gf8_identity_minisquare() {
        // f = Id over GF(8): ℓ = [[0,6,3],[6,0,5],[3,5,0]] at positions p = q = (1,2,4).
        let f = f8();
        let id = crate::curves::identity_curve(&f);
        let ms = minisquare(&f, &id);
        assert_eq!(ms.entries, vec![vec![0, 6, 3], vec![6, 0, 5], vec![3, 5, 0]]);
        assert_eq!(ms.theta_exponents, vec![1, 2, 4]);
        assert_eq!(ms.scaled_theta_exponents, vec![1, 2, 4]);
        // Embedded in the standard square of the identity map.
        let sq = standard_ls(&f, &id).unwrap();
        for (i, &qi) in ms.scaled_theta_exponents.iter().enumerate() {
            for (j, &pj) in ms.theta_exponents.iter().enumerate() {
                assert_eq!(ms.entries[i][j], sq.grid[qi][pj]);
            }
        }
        assert!(minisquare_commutative(&f, &ms));
    }

    #[test]
    fn apply_triple_transpose_and_errors() {
        let f = f8();
        let sq = standard_ls(&f, &scalar_curve(&f, 1)).unwrap();
        let mut t = PermutationTriple::identity(8);
        t.transpose_first = true;
        let tr = apply_triple(&sq, &t).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(tr.grid[i][j], sq.grid[j][i]);
            }
        }
        let bad = PermutationTriple::identity(7);
        assert_eq!(apply_triple(&sq, &bad).unwrap_err(), LatinError::SizeMismatch);
    }
}
