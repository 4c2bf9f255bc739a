//! Small-dimension numeric verification that a bundle's monomial classes give
//! mutually unbiased bases: build each class's joint eigenbasis explicitly and
//! check every cross-basis overlap modulus equals 1/√d.
//!
//! Everything is dense complex arithmetic at desk scale (d ≤ 32). The
//! eigenbasis construction is deterministic: each class element U satisfies
//! U^p = γ·identity, so the spectral projectors P_k = (1/p)·Σ_j λ_k^{−j}U^j
//! split the space exactly; frames are refined monomial by monomial until
//! every invariant subspace is one-dimensional.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curves::Curve;
use crate::field::Field;
use crate::monomials::{bundle_classes, MonomialError};

type CMat = Vec<Vec<Complex64>>;

const SPLIT_TOL: f64 = 1e-8;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn cmat_zero(rows: usize, cols: usize) -> CMat {
    vec![vec![czero(); cols]; rows]
}

fn cmat_mul(a: &CMat, b: &CMat) -> CMat {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    let mut out = cmat_zero(r, c);
    for i in 0..r {
        for t in 0..k {
            let av = a[i][t];
            if av.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..c {
                out[i][j] += av * b[t][j];
            }
        }
    }
    out
}

/// ω^e with ω = exp(2πi/p).
fn root_of_unity(p: u64, e: u64) -> Complex64 {
    let angle = 2.0 * std::f64::consts::PI * (e % p) as f64 / p as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// The d×d unitary ⊗_j Z^{z_j} X^{x_j} with p-dimensional factors
/// Z|u⟩ = ω^u|u⟩ and X|u⟩ = |u+1⟩. Qudit 1 is the most significant digit of
/// the state index.
pub fn monomial_unitary(p: u64, n: usize, z: &[u64], x: &[u64]) -> CMat {
    let d = (p as usize).pow(n as u32);
    let mut out = cmat_zero(d, d);
    for col in 0..d {
        // Decompose the source state, apply X then Z factor-wise.
        let mut digits = vec![0u64; n];
        let mut rest = col;
        for j in (0..n).rev() {
            digits[j] = (rest % p as usize) as u64;
            rest /= p as usize;
        }
        let mut phase_exp = 0u64;
        let mut row = 0usize;
        for j in 0..n {
            let shifted = (digits[j] + x[j]) % p;
            phase_exp = (phase_exp + z[j] * shifted) % p;
            row = row * p as usize + shifted as usize;
        }
        out[row][col] = root_of_unity(p, phase_exp);
    }
    out
}

/// Orthonormal columns spanning the column space of `cols`, via modified
/// Gram-Schmidt with a rank tolerance.
fn orthonormal_columns(cols: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for c in cols {
        let mut v = c.clone();
        for b in &basis {
            let proj: Complex64 =
                b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > SPLIT_TOL {
            for x in v.iter_mut() {
                *x /= norm;
            }
            basis.push(v);
        }
    }
    basis
}

/// Joint eigenbasis of one commuting class, as a list of d orthonormal column
/// vectors. Deterministic; fails only if the class doesn't split the space
/// into d one-dimensional common eigenspaces.
pub fn class_eigenbasis(
    p: u64,
    n: usize,
    class: &[(Vec<u64>, Vec<u64>)],
) -> Result<Vec<Vec<Complex64>>, MonomialError> {
    let d = (p as usize).pow(n as u32);
    // Start with the standard basis as one d-dimensional frame.
    let mut frames: Vec<Vec<Vec<Complex64>>> = vec![(0..d)
        .map(|i| {
            let mut e = vec![czero(); d];
            e[i] = Complex64::new(1.0, 0.0);
            e
        })
        .collect()];
    for (z, x) in class {
        if frames.iter().all(|f| f.len() == 1) {
            break;
        }
        let u = monomial_unitary(p, n, z, x);
        // Powers u^0..u^{p-1} and the scalar γ with u^p = γ·identity.
        let mut powers: Vec<CMat> = Vec::with_capacity(p as usize);
        let mut acc: CMat = (0..d)
            .map(|i| {
                let mut row = vec![czero(); d];
                row[i] = Complex64::new(1.0, 0.0);
                row
            })
            .collect();
        for _ in 0..p {
            powers.push(acc.clone());
            acc = cmat_mul(&u, &acc);
        }
        let gamma = acc[0][0];
        let gamma_root = Complex64::from_polar(1.0, gamma.arg() / p as f64);
        let mut next_frames = Vec::new();
        for frame in &frames {
            if frame.len() == 1 {
                next_frames.push(frame.clone());
                continue;
            }
            let mut total = 0usize;
            for k in 0..p {
                let lambda = gamma_root * root_of_unity(p, k);
                // Apply P_k = (1/p) Σ_j λ^{−j} u^j to every frame column.
                let projected: Vec<Vec<Complex64>> = frame
                    .iter()
                    .map(|col| {
                        let mut out = vec![czero(); d];
                        let mut lam_pow = Complex64::new(1.0, 0.0);
                        for pw in &powers {
                            let coef = lam_pow.conj() / p as f64;
                            for (o, row) in out.iter_mut().zip(pw) {
                                let dot: Complex64 =
                                    row.iter().zip(col).map(|(m, c)| m * c).sum();
                                *o += coef * dot;
                            }
                            lam_pow *= lambda;
                        }
                        out
                    })
                    .collect();
                let ortho = orthonormal_columns(&projected);
                total += ortho.len();
                if !ortho.is_empty() {
                    next_frames.push(ortho);
                }
            }
            if total != frame.len() {
                return Err(MonomialError::EigenbasisFailure);
            }
        }
        frames = next_frames;
    }
    if frames.iter().any(|f| f.len() != 1) {
        return Err(MonomialError::EigenbasisFailure);
    }
    Ok(frames.into_iter().map(|mut f| f.pop().unwrap()).collect())
}

/// Outcome of the numeric check: how far the bases are from orthonormal and
/// how far every cross-basis overlap is from 1/√d.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct NumericReport {
    pub d: usize,
    pub bases: usize,
    pub max_orthonormality_deviation: f64,
    pub max_overlap_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Builds the p^n + 1 eigenbases of a bundle's monomial classes and verifies
/// pairwise unbiasedness within `tol`.
pub fn numeric_unbiasedness(
    field: &Field,
    bundle: &[Curve],
    tol: f64,
) -> Result<NumericReport, MonomialError> {
    let d = field.d();
    assert!(d <= 32, "numeric verification is desk-scale only (d ≤ 32)");
    let p = field.p();
    let n = field.n();
    let mut bases = Vec::new();
    for class in bundle_classes(field, bundle) {
        bases.push(class_eigenbasis(p, n, &class)?);
    }
    let mut max_ortho: f64 = 0.0;
    for basis in &bases {
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let dot: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                max_ortho = max_ortho.max((dot.norm() - expect).abs());
            }
        }
    }
    let target = 1.0 / (d as f64).sqrt();
    let mut max_dev: f64 = 0.0;
    for bi in 0..bases.len() {
        for bj in bi + 1..bases.len() {
            for a in &bases[bi] {
                for b in &bases[bj] {
                    let dot: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                    max_dev = max_dev.max((dot.norm() - target).abs());
                }
            }
        }
    }
    Ok(NumericReport {
        d,
        bases: bases.len(),
        max_orthonormality_deviation: max_ortho,
        max_overlap_deviation: max_dev,
        tolerance: tol,
        passed: max_ortho <= 1e-10 && max_dev <= tol,
    })
}
