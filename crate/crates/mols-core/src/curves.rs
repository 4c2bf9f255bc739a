//! Additive (Z_p-linear) maps f: GF(p^n) → GF(p^n) encoded as n×n adjacency
//! matrices over the self-dual frame.
//!
//! The encoding fixes, for the field's basis {θ_k} with tr(θ_iθ_j) = c_jδ_ij,
//!
//!   Γ_{kl} = tr( c_l^{-1} θ_l · f(c_k^{-1} θ_k) ),   i.e.  f(c_k^{-1}θ_k) = Σ_l Γ_{kl} θ_l.
//!
//! Evaluation works through s-vectors: f(α) has s-vector s(α)·Γ·C, so a point
//! of the curve is recovered as f(σ^i) = Σ_k (s^i Γ)_k θ_k. Composition,
//! inversion, and the identity all close over this encoding:
//! Γ^{(f∘g)} = Γ^{(g)} C Γ^{(f)},  Γ^{(f^{-1})} = C^{-1} Γ^{-1} C^{-1},  Γ^{(Id)} = C^{-1}.

use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::matrix::{row_times_mat, Mat};

/// An additive map in adjacency form, optionally tagged with the exponents of
/// a linearized-polynomial presentation f(α) = Σ_j σ^{phi[j]} α^{p^j}
/// (entry `None` when the coefficient of α^{p^j} is zero).
#[derive(Clone, PartialEq, Debug)]
pub struct Curve {
    pub gamma: Mat,
    pub phi: Option<Vec<Option<usize>>>,
}

/// A curve in parametric form: points (α(λ), β(λ)) with s(α(λ)) = s(λ)·Γ^{(α)}·C
/// and s(β(λ)) = s(λ)·Γ^{(β)}·C as λ runs over the field.
#[derive(Clone, PartialEq, Debug)]
pub struct ParametricCurve {
    pub gamma_alpha: Mat,
    pub gamma_beta: Mat,
}

/// Row-per-generator presentation (L | R): row k holds the s-vector of the
/// k-th generator g_k followed by the C^{-1}-scaled s-vector of f(g_k).
#[derive(Clone, PartialEq, Debug)]
pub struct GeneratorMatrix {
    pub left: Mat,
    pub right: Mat,
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("point map is not additive, so no adjacency matrix represents it")]
    NotAdditive,
    #[error("map is degenerate (adjacency matrix is singular)")]
    Degenerate,
    #[error("generator rows are linearly dependent")]
    GeneratorsDegenerate,
}

impl Curve {
    pub fn new(gamma: Mat) -> Curve {
        Curve { gamma, phi: None }
    }

    pub fn d(&self, field: &Field) -> usize {
        field.d()
    }

    /// Is f α-commuting in the multiplication sense tr(αf(β)) = tr(βf(α))?
    /// Equivalent to Γ being symmetric.
    pub fn is_commutative(&self) -> bool {
        self.gamma.is_symmetric()
    }

    pub fn is_invertible(&self) -> bool {
        self.gamma.is_invertible()
    }
}

/// f(σ^i) as a label: Σ_k (s^i Γ)_k θ_k.
pub fn curve_eval(field: &Field, curve: &Curve, i: usize) -> usize {
    point_from_gamma(field, &curve.gamma, i)
}

/// Evaluates the map `s ↦ s·Γ` pointwise: takes σ^i to the element whose
/// θ-frame coordinates are s^i·Γ.
pub fn point_from_gamma(field: &Field, gamma: &Mat, i: usize) -> usize {
    let v = row_times_mat(field.svector(i), gamma);
    field.label_from_theta_coords(&v)
}

/// Builds the adjacency matrix of an arbitrary point map (label → label),
/// then rejects maps that are not additive.
pub fn adjacency_from_map<F>(field: &Field, f: F) -> Result<Curve, CurveError>
where
    F: Fn(usize) -> usize,
{
    let n = field.n();
    let p = field.p();
    let mut gamma = Mat::zero(p, n, n);
    for k in 0..n {
        let img = f(field.scaled_theta_label(k));
        for (l, &s) in field.svector(img).iter().enumerate() {
            // tr(c_l^{-1} θ_l · f(g_k)) = c_l^{-1} · s_l(f(g_k))
            gamma.set(k, l, s * crate::matrix::inv_mod(field.basis().c[l], p) % p);
        }
    }
    let curve = Curve::new(gamma);
    for i in 0..field.d() {
        if curve_eval(field, &curve, i) != f(i) {
            return Err(CurveError::NotAdditive);
        }
    }
    Ok(curve)
}

/// The identity map: Γ = C^{-1}.
pub fn identity_curve(field: &Field) -> Curve {
    Curve::new(field.c_inv_mat())
}

/// f(α) = σ^e·α (e is an exponent, so e = d−1 gives the identity).
pub fn scalar_curve(field: &Field, e: usize) -> Curve {
    let lbl = field.label_from_exp(e as i64);
    let mut c = adjacency_from_map(field, |i| field.mul(lbl, i)).expect("scalar maps are additive");
    let mut phi = vec![None; field.n()];
    phi[0] = Some(field.label_from_exp(e as i64));
    c.phi = Some(phi);
    c
}

/// f(α) = Σ_j σ^{e_j} α^{p^j} for the given exponent tags.
pub fn curve_from_phi(field: &Field, phi: &[Option<usize>]) -> Result<Curve, CurveError> {
    assert_eq!(phi.len(), field.n());
    let coeffs: Vec<Option<usize>> =
        phi.iter().map(|t| t.map(|e| field.label_from_exp(e as i64))).collect();
    let p = field.p();
    let eval = |i: usize| {
        let mut acc = 0usize;
        for (j, c) in coeffs.iter().enumerate() {
            if let Some(c) = c {
                let power = field.pow(i, (p as u32).pow(j as u32));
                acc = field.add(acc, field.mul(*c, power));
            }
        }
        acc
    };
    let mut curve = adjacency_from_map(field, eval)?;
    curve.phi = Some(coeffs);
    Ok(curve)
}

/// The d−1 nonzero scalar maps α ↦ σ^e α. Together with the two axes they
/// form the standard (Desarguesian) bundle of d+1 mutually orthogonal
/// constructions.
pub fn desarguesian_bundle(field: &Field) -> Vec<Curve> {
    (1..field.d()).map(|e| scalar_curve(field, e)).collect()
}

/// Γ^{(f∘g)} = Γ^{(g)} C Γ^{(f)} (apply g first, then f).
pub fn compose(field: &Field, f: &Curve, g: &Curve) -> Curve {
    Curve::new(g.gamma.mul(&field.c_mat()).mul(&f.gamma))
}

/// Γ^{(f^{-1})} = C^{-1} Γ^{-1} C^{-1}; errors when f is not invertible.
pub fn invert_curve(field: &Field, f: &Curve) -> Result<Curve, CurveError> {
    let inv = f.gamma.inverse().ok_or(CurveError::Degenerate)?;
    let ci = field.c_inv_mat();
    Ok(Curve::new(ci.mul(&inv).mul(&ci)))
}

impl ParametricCurve {
    pub fn new(gamma_alpha: Mat, gamma_beta: Mat) -> ParametricCurve {
        ParametricCurve { gamma_alpha, gamma_beta }
    }

    /// Parametric form of an explicit curve: α(λ) = λ, β(λ) = f(λ).
    pub fn from_explicit(field: &Field, f: &Curve) -> ParametricCurve {
        ParametricCurve { gamma_alpha: field.c_inv_mat(), gamma_beta: f.gamma.clone() }
    }

    /// The point (α(σ^i), β(σ^i)) as a pair of labels.
    pub fn point(&self, field: &Field, i: usize) -> (usize, usize) {
        (
            point_from_gamma(field, &self.gamma_alpha, i),
            point_from_gamma(field, &self.gamma_beta, i),
        )
    }
}

/// Eliminates the parameter: Γ^{(f)} = (Γ^{(α)} C)^{-1} Γ^{(β)}. Errors when
/// α(λ) is not a bijection (a vertical-axis curve has no explicit form).
pub fn parametric_to_explicit(field: &Field, pc: &ParametricCurve) -> Result<Curve, CurveError> {
    let ga_c = pc.gamma_alpha.mul(&field.c_mat());
    let inv = ga_c.inverse().ok_or(CurveError::Degenerate)?;
    Ok(Curve::new(inv.mul(&pc.gamma_beta)))
}

/// Generator presentation of an explicit curve over arbitrary generators
/// (labels). Row k = ( s(g_k) | s(f(g_k))·C^{-1} ).
pub fn generator_matrix(
    field: &Field,
    f: &Curve,
    generators: &[usize],
) -> Result<GeneratorMatrix, CurveError> {
    assert_eq!(generators.len(), field.n());
    let p = field.p();
    let n = field.n();
    let mut left = Mat::zero(p, n, n);
    let mut right = Mat::zero(p, n, n);
    for (k, &g) in generators.iter().enumerate() {
        let img = curve_eval(field, f, g);
        let sv = field.svector(g);
        let si = row_times_mat(field.svector(img), &field.c_inv_mat());
        for l in 0..n {
            left.set(k, l, sv[l]);
            right.set(k, l, si[l]);
        }
    }
    if !left.is_invertible() {
        return Err(CurveError::GeneratorsDegenerate);
    }
    Ok(GeneratorMatrix { left, right })
}

/// Generator presentation of a parametric curve: row k describes the point at
/// parameter λ = g_k, as ( s(α(g_k)) | s(β(g_k))·C^{-1} ).
pub fn generator_matrix_parametric(
    field: &Field,
    pc: &ParametricCurve,
    generators: &[usize],
) -> Result<GeneratorMatrix, CurveError> {
    assert_eq!(generators.len(), field.n());
    let p = field.p();
    let n = field.n();
    let mut left = Mat::zero(p, n, n);
    let mut right = Mat::zero(p, n, n);
    let ci = field.c_inv_mat();
    for (k, &g) in generators.iter().enumerate() {
        let (a, b) = pc.point(field, g);
        let sa = field.svector(a);
        let sb = row_times_mat(field.svector(b), &ci);
        for l in 0..n {
            left.set(k, l, sa[l]);
            right.set(k, l, sb[l]);
        }
    }
    // A parametric generator matrix may legitimately have singular left half
    // (vertical-axis curves); callers that need explicit form go through
    // `curve_from_generator`, which checks.
    Ok(GeneratorMatrix { left, right })
}

/// Canonical generators g_k = c_k^{-1}θ_k, for which the presentation is (1 | Γ).
pub fn canonical_generators(field: &Field) -> Vec<usize> {
    (0..field.n()).map(|k| field.scaled_theta_label(k)).collect()
}

/// Recovers the adjacency matrix from any generator presentation: Γ = L^{-1}·R.
pub fn curve_from_generator(gm: &GeneratorMatrix) -> Result<Curve, CurveError> {
    let inv = gm.left.inverse().ok_or(CurveError::GeneratorsDegenerate)?;
    Ok(Curve::new(inv.mul(&gm.right)))
}

impl GeneratorMatrix {
    /// The n×2n block (L | R) as rows, for display.
    pub fn rows(&self) -> Vec<Vec<u64>> {
        let n = self.left.nrows();
        (0..n)
            .map(|k| {
                let mut row = self.left.row(k).to_vec();
                row.extend_from_slice(self.right.row(k));
                row
            })
            .collect()
    }

    /// Right-multiplies both halves by the 2n×2n block matrix
    /// [[K11, K12], [K21, K22]]: (L | R) ↦ (L·K11 + R·K21 | L·K12 + R·K22).
    pub fn apply_block(&self, k11: &Mat, k12: &Mat, k21: &Mat, k22: &Mat) -> GeneratorMatrix {
        GeneratorMatrix {
            left: self.left.mul(k11).add(&self.right.mul(k21)),
            right: self.left.mul(k12).add(&self.right.mul(k22)),
        }
    }
}

/// Serialized curve: adjacency rows plus the optional linearized-polynomial
/// tags. `{"gamma":[[0,1],[1,0]],"phi":[8,null]}` says f(α) = σ^8·α.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CurveDescription {
    pub gamma: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Option<usize>>>,
}

impl CurveDescription {
    pub fn from_curve(c: &Curve) -> CurveDescription {
        CurveDescription { gamma: c.gamma.to_rows(), phi: c.phi.clone() }
    }

    pub fn to_curve(&self, field: &Field) -> Curve {
        Curve { gamma: Mat::from_rows(field.p(), &self.gamma), phi: self.phi.clone() }
    }
}
