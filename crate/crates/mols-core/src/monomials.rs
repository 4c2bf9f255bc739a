//! Curve points as generalized Pauli monomials: commutation, disjointness,
//! and the partition of all nonidentity monomials into p^n + 1 classes.
//!
//! A point (α, β) becomes Z_α X_β = Z^{c_1a_1}X^{b_1} ⊗ … ⊗ Z^{c_na_n}X^{b_n},
//! where a and b are the θ-frame coordinates of α and β. Since c_i a_i is
//! exactly the s-vector entry of α, the stored Z-exponents are s(α) and the
//! X-exponents are the plain θ-coordinates of β.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curves::{curve_eval, Curve};
use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PauliMonomial {
    /// Exponent label of α (the Z side).
    pub alpha: usize,
    /// Exponent label of β (the X side).
    pub beta: usize,
    /// Per-qudit Z exponents: z_i = c_i a_i = s_i(α).
    pub z: Vec<u64>,
    /// Per-qudit X exponents: b_i, the θ-frame coordinates of β.
    pub x: Vec<u64>,
}

/// The p^n − 1 pairwise-commuting monomials of one commutative curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommutingSet {
    pub monomials: Vec<PauliMonomial>,
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum MonomialError {
    #[error("curve is not commutative (adjacency matrix is asymmetric)")]
    NotCommutative,
    #[error("simultaneous eigenbasis construction failed")]
    EigenbasisFailure,
}

pub fn monomial_from_point(field: &Field, alpha: usize, beta: usize) -> PauliMonomial {
    PauliMonomial {
        alpha,
        beta,
        z: field.svector(alpha).to_vec(),
        x: field.theta_coords(beta),
    }
}

impl PauliMonomial {
    pub fn is_identity(&self) -> bool {
        self.alpha == 0 && self.beta == 0
    }
}

impl fmt::Display for PauliMonomial {
    /// "ZX⊗1"-style rendering: one factor per qudit, powers as ^k.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, (&z, &x)) in self.z.iter().zip(&self.x).enumerate() {
            if j > 0 {
                write!(f, "⊗")?;
            }
            if z == 0 && x == 0 {
                write!(f, "1")?;
                continue;
            }
            if z > 0 {
                write!(f, "Z")?;
                if z > 1 {
                    write!(f, "^{z}")?;
                }
            }
            if x > 0 {
                write!(f, "X")?;
                if x > 1 {
                    write!(f, "^{x}")?;
                }
            }
        }
        Ok(())
    }
}

/// The commutator phase exponent of u against v: tr(α_u β_v) − tr(α_v β_u)
/// mod p. Zero exactly when the monomials commute.
pub fn commutator_exponent(field: &Field, u: &PauliMonomial, v: &PauliMonomial) -> u64 {
    let p = field.p();
    let t1 = field.trace(field.mul(u.alpha, v.beta));
    let t2 = field.trace(field.mul(v.alpha, u.beta));
    (t1 + p - t2) % p
}

pub fn commutes(field: &Field, u: &PauliMonomial, v: &PauliMonomial) -> bool {
    commutator_exponent(field, u, v) == 0
}

/// All monomials {Z_{σ^i} X_{f(σ^i)}} of an explicit curve; requires Γ
/// symmetric, which is exactly pairwise commutation.
pub fn curve_commuting_set(field: &Field, f: &Curve) -> Result<CommutingSet, MonomialError> {
    if !f.gamma.is_symmetric() {
        return Err(MonomialError::NotCommutative);
    }
    let monomials = (1..field.d())
        .map(|i| monomial_from_point(field, i, curve_eval(field, f, i)))
        .collect();
    Ok(CommutingSet { monomials })
}

/// Exponent-level product: exponents add componentwise mod p (phases dropped).
pub fn product_exponents(
    field: &Field,
    u: &PauliMonomial,
    v: &PauliMonomial,
) -> (Vec<u64>, Vec<u64>) {
    let p = field.p();
    let z = u.z.iter().zip(&v.z).map(|(&a, &b)| (a + b) % p).collect();
    let x = u.x.iter().zip(&v.x).map(|(&a, &b)| (a + b) % p).collect();
    (z, x)
}

fn pair_code(field: &Field, z: &[u64], x: &[u64]) -> usize {
    let p = field.p() as usize;
    let zc = z.iter().rev().fold(0usize, |acc, &v| acc * p + v as usize);
    let xc = x.iter().rev().fold(0usize, |acc, &v| acc * p + v as usize);
    zc * field.d() + xc
}

/// The exponent-vector lists of all p^n + 1 monomial classes: the Z-only
/// class, one class per bundle curve, and the X-only class.
pub fn bundle_classes(field: &Field, bundle: &[Curve]) -> Vec<Vec<(Vec<u64>, Vec<u64>)>> {
    let d = field.d();
    let n = field.n();
    let mut classes = Vec::with_capacity(bundle.len() + 2);
    classes.push((1..d).map(|i| (field.svector(i).to_vec(), vec![0u64; n])).collect());
    for f in bundle {
        classes.push(
            (1..d)
                .map(|i| {
                    let img = curve_eval(field, f, i);
                    (field.svector(i).to_vec(), field.theta_coords(img))
                })
                .collect(),
        );
    }
    classes.push((1..d).map(|i| (vec![0u64; n], field.theta_coords(i))).collect());
    classes
}

/// True when the bundle's classes, plus the Z-only and X-only classes,
/// partition all p^{2n} − 1 nonidentity monomials (pairwise disjoint, full
/// cover). This is the algebraic form of the unbiasedness structure.
pub fn bundle_is_mub(field: &Field, bundle: &[Curve]) -> bool {
    if bundle.len() != field.d() - 1 {
        return false;
    }
    if bundle.iter().any(|f| !f.gamma.is_symmetric() || !f.is_invertible()) {
        return false;
    }
    let d = field.d();
    let mut seen = vec![false; d * d];
    let mut count = 0usize;
    for class in bundle_classes(field, bundle) {
        for (z, x) in class {
            let code = pair_code(field, &z, &x);
            if seen[code] {
                return false;
            }
            seen[code] = true;
            count += 1;
        }
    }
    count == d * d - 1
}
