//! GF(p^n) with exponent labels, trace tables, and (almost) self-dual bases.
//!
//! Elements carry the labeling convention used throughout this crate: label 0
//! is the additive zero (we never write it as a power of σ), and label
//! i ∈ 1..p^n−1 is σ^i for a primitive element σ, so label p^n−1 is the
//! multiplicative identity. All tables are precomputed at construction; every
//! operation afterwards is a lookup plus O(n) arithmetic.

use serde::{Deserialize, Serialize};

use crate::matrix::Mat;

/// Construction parameters: characteristic, degree, and the monic modulus
/// polynomial (constant coefficient first).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub n: usize,
    pub poly: Vec<u64>,
}

/// One field element in both representations: exponent label and coordinate
/// vector over Z_p (coefficients of 1, σ, …, σ^{n−1}).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldElement {
    pub label: usize,
    pub coeffs: Vec<u64>,
}

/// Basis {θ_1..θ_n} with tr(θ_i θ_j) = c_j δ_ij. `c` is the diagonal of C;
/// by construction c_j = 1 for j > 1 ("almost" self-dual: only c_1 may differ).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SelfDualBasis {
    pub theta: Vec<FieldElement>,
    pub c: Vec<u64>,
}

/// Coordinate row vector s of an element α, with s_k = tr(α θ_k).
/// Reconstruction: α = Σ_k s_k c_k^{-1} θ_k.
pub type SVector = Vec<u64>;

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not monic of degree {0} with coefficients mod {1}")]
    BadPolynomial(usize, u64),
    #[error("polynomial is reducible over Z_{0}")]
    NotIrreducible(u64),
    #[error("polynomial is irreducible but its root is not primitive")]
    NotPrimitive,
    #[error("no almost self-dual basis exists for this field")]
    BasisNotFound,
}

/// A fully tabulated finite field GF(p^n).
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    d: usize,
    /// label → coordinate vector; exp[0] is the zero vector.
    exp: Vec<Vec<u64>>,
    /// coefficient code (Σ c_i p^i) → label.
    log: Vec<usize>,
    /// label → tr(σ^label) ∈ Z_p.
    trace_tab: Vec<u64>,
    basis: SelfDualBasis,
    /// label → s-vector.
    svec: Vec<Vec<u64>>,
    /// s-vector code (Σ s_k p^k) → label.
    svec_log: Vec<usize>,
}

impl Field {
    /// Builds GF(p^n). When `poly` is omitted, (p,n) = (2,3) and (3,2) use the
    /// built-in moduli σ³+σ²+1 and σ²+σ+2; any other field gets the first
    /// monic polynomial, in lexicographic order on (c_0, …, c_{n−1}), that is
    /// irreducible with a primitive root.
    pub fn build(p: u64, n: usize, poly: Option<&[u64]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        assert!(n >= 1, "extension degree must be at least 1");
        let d_big = (p as u128).checked_pow(n as u32).expect("field too large");
        assert!(d_big <= 4096, "only desk-scale fields (p^n ≤ 4096) are supported");
        let d = d_big as usize;

        let poly = match poly {
            Some(c) => {
                let c: Vec<u64> = c.iter().map(|&x| x % p).collect();
                if c.len() != n + 1 || *c.last().unwrap() != 1 {
                    return Err(FieldError::BadPolynomial(n, p));
                }
                if !is_irreducible(&c, p) {
                    return Err(FieldError::NotIrreducible(p));
                }
                c
            }
            None => default_poly(p, n),
        };

        let Some(exp) = power_table(&poly, p, n, d) else {
            return Err(FieldError::NotPrimitive);
        };

        let mut log = vec![usize::MAX; d];
        for (label, coeffs) in exp.iter().enumerate() {
            log[code(coeffs, p)] = label;
        }

        let mut trace_tab = vec![0u64; d];
        for i in 1..d {
            let mut acc = vec![0u64; n];
            let mut e = i as u64;
            for _ in 0..n {
                let lbl = label_from_exp_raw(e, d);
                for (a, &b) in acc.iter_mut().zip(&exp[lbl]) {
                    *a = (*a + b) % p;
                }
                e = e * p % (d as u64 - 1);
                if e == 0 {
                    e = d as u64 - 1;
                }
            }
            debug_assert!(acc[1..].iter().all(|&x| x == 0), "trace left the prime field");
            trace_tab[i] = acc[0];
        }

        let mut partial = Field {
            spec: FieldSpec { p, n, poly },
            d,
            exp,
            log,
            trace_tab,
            basis: SelfDualBasis { theta: vec![], c: vec![] },
            svec: vec![],
            svec_log: vec![],
        };
        partial.basis = partial.find_basis_impl()?;

        let mut svec = vec![vec![0u64; n]; d];
        let mut svec_log = vec![usize::MAX; d];
        let theta: Vec<usize> = partial.basis.theta.iter().map(|t| t.label).collect();
        for i in 0..d {
            for (k, &t) in theta.iter().enumerate() {
                svec[i][k] = partial.trace_tab[partial.mul(i, t)];
            }
            svec_log[code(&svec[i], p)] = i;
        }
        debug_assert!(svec_log.iter().all(|&l| l != usize::MAX));
        partial.svec = svec;
        partial.svec_log = svec_log;
        Ok(partial)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Field size d = p^n; also the Latin-square order.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &SelfDualBasis {
        &self.basis
    }

    pub fn theta_label(&self, k: usize) -> usize {
        self.basis.theta[k].label
    }

    /// c_k^{-1}·θ_k as a label (the canonical generator g_k).
    pub fn scaled_theta_label(&self, k: usize) -> usize {
        self.scalar_mul(crate::matrix::inv_mod(self.basis.c[k], self.p()), self.theta_label(k))
    }

    pub fn c_mat(&self) -> Mat {
        Mat::diag(self.p(), &self.basis.c)
    }

    pub fn c_inv_mat(&self) -> Mat {
        let p = self.p();
        let inv: Vec<u64> = self.basis.c.iter().map(|&c| crate::matrix::inv_mod(c, p)).collect();
        Mat::diag(p, &inv)
    }

    pub fn element(&self, label: usize) -> FieldElement {
        FieldElement { label, coeffs: self.exp[label].clone() }
    }

    pub fn coeffs(&self, label: usize) -> &[u64] {
        &self.exp[label]
    }

    pub fn label_of_coeffs(&self, coeffs: &[u64]) -> usize {
        self.log[code(coeffs, self.p())]
    }

    /// Label for σ^e with e taken mod p^n−1; exponent ≡ 0 maps to the
    /// multiplicative identity label p^n−1, never to the zero label.
    pub fn label_from_exp(&self, e: i64) -> usize {
        let m = (self.d - 1) as i64;
        let r = e.rem_euclid(m);
        if r == 0 {
            self.d - 1
        } else {
            r as usize
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let p = self.p();
        let coeffs: Vec<u64> =
            self.exp[a].iter().zip(&self.exp[b]).map(|(&x, &y)| (x + y) % p).collect();
        self.label_of_coeffs(&coeffs)
    }

    pub fn neg(&self, a: usize) -> usize {
        let p = self.p();
        let coeffs: Vec<u64> = self.exp[a].iter().map(|&x| (p - x) % p).collect();
        self.label_of_coeffs(&coeffs)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            0
        } else {
            self.label_from_exp(a as i64 + b as i64)
        }
    }

    /// Multiplicative inverse; `None` for the zero label.
    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.label_from_exp(-(a as i64)))
    }

    pub fn pow(&self, a: usize, k: u32) -> usize {
        if a == 0 {
            if k == 0 {
                self.d - 1
            } else {
                0
            }
        } else {
            self.label_from_exp(a as i64 * k as i64)
        }
    }

    /// Multiplication by the prime-field scalar t.
    pub fn scalar_mul(&self, t: u64, a: usize) -> usize {
        let p = self.p();
        let t = t % p;
        let coeffs: Vec<u64> = self.exp[a].iter().map(|&x| x * t % p).collect();
        self.label_of_coeffs(&coeffs)
    }

    pub fn trace(&self, a: usize) -> u64 {
        self.trace_tab[a]
    }

    /// s-vector of σ^label: s_k = tr(σ^label · θ_k).
    pub fn svector(&self, label: usize) -> &[u64] {
        &self.svec[label]
    }

    /// Inverse of [`svector`]: the label whose s-vector is `s`.
    pub fn label_from_svector(&self, s: &[u64]) -> usize {
        let p = self.p();
        let reduced: Vec<u64> = s.iter().map(|&x| x % p).collect();
        self.svec_log[code(&reduced, p)]
    }

    pub fn element_from_svector(&self, s: &[u64]) -> FieldElement {
        self.element(self.label_from_svector(s))
    }

    /// Coordinates of σ^label in the plain θ frame (α = Σ_k v_k θ_k);
    /// equals the s-vector scaled by C^{-1}.
    pub fn theta_coords(&self, label: usize) -> Vec<u64> {
        let p = self.p();
        self.svec[label]
            .iter()
            .zip(&self.basis.c)
            .map(|(&s, &c)| s * crate::matrix::inv_mod(c, p) % p)
            .collect()
    }

    /// Label of Σ_k v_k θ_k for θ-frame coordinates v.
    pub fn label_from_theta_coords(&self, v: &[u64]) -> usize {
        let p = self.p();
        let s: Vec<u64> = v.iter().zip(&self.basis.c).map(|(&x, &c)| x * c % p).collect();
        self.label_from_svector(&s)
    }

    /// Serializable description: spec plus the chosen basis.
    pub fn description(&self) -> FieldDescription {
        FieldDescription {
            p: self.p(),
            n: self.n(),
            poly: self.spec.poly.clone(),
            theta: self.basis.theta.iter().map(|t| t.label).collect(),
            c: self.basis.c.clone(),
        }
    }

    /// Deterministic search for an almost self-dual basis: smallest exponent
    /// tuple in lexicographic order with pairwise trace-orthogonality, nonzero
    /// diagonal traces, and at most one c_j ≠ 1 (placed first in the result).
    /// A fully self-dual basis (all c_j = 1) is preferred when one exists.
    fn find_basis_impl(&self) -> Result<SelfDualBasis, FieldError> {
        let n = self.n();
        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        if !self.basis_dfs(1, &mut chosen, true) && {
            chosen.clear();
            !self.basis_dfs(1, &mut chosen, false)
        } {
            return Err(FieldError::BasisNotFound);
        }
        let p = self.p();
        let mut with_c: Vec<(usize, u64)> =
            chosen.iter().map(|&t| (t, self.trace_tab[self.mul(t, t)] % p)).collect();
        // Ordering convention: the (single) element with c ≠ 1 comes first,
        // the rest keep increasing exponent order.
        with_c.sort_by_key(|&(t, c)| (c == 1, t));
        Ok(SelfDualBasis {
            theta: with_c.iter().map(|&(t, _)| self.element(t)).collect(),
            c: with_c.iter().map(|&(_, c)| c).collect(),
        })
    }

    fn basis_dfs(&self, start: usize, chosen: &mut Vec<usize>, strict: bool) -> bool {
        if chosen.len() == self.n() {
            return true;
        }
        for cand in start..self.d {
            let diag = self.trace_tab[self.mul(cand, cand)];
            if diag == 0 {
                continue;
            }
            if diag != 1
                && (strict || chosen.iter().any(|&t| self.trace_tab[self.mul(t, t)] != 1))
            {
                continue;
            }
            if chosen.iter().any(|&t| self.trace_tab[self.mul(t, cand)] != 0) {
                continue;
            }
            chosen.push(cand);
            if self.basis_dfs(cand + 1, chosen, strict) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// JSON form of a field: `{"p":2,"n":3,"poly":[1,0,1,1],"theta":[1,2,4],"c":[1,1,1]}`
/// with θ given as exponent labels.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FieldDescription {
    pub p: u64,
    pub n: usize,
    pub poly: Vec<u64>,
    pub theta: Vec<usize>,
    pub c: Vec<u64>,
}

fn code(coeffs: &[u64], p: u64) -> usize {
    coeffs.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// σ^1..σ^{d−1} as coordinate vectors, or `None` when the root of the
/// (irreducible) modulus fails to generate the whole multiplicative group.
fn power_table(poly: &[u64], p: u64, n: usize, d: usize) -> Option<Vec<Vec<u64>>> {
    let mut exp = vec![vec![0u64; n]];
    let mut cur = vec![0u64; n];
    if n == 1 {
        cur[0] = (p - poly[0] % p) % p; // root of x + c_0
    } else {
        cur[1] = 1; // σ itself
    }
    let one = {
        let mut v = vec![0u64; n];
        v[0] = 1;
        v
    };
    for k in 1..d {
        if cur.iter().all(|&c| c == 0) {
            return None; // x divides the modulus; σ is not even invertible
        }
        if cur == one && k != d - 1 {
            return None; // order of σ is a proper divisor of d−1
        }
        exp.push(cur.clone());
        cur = mul_by_x(&cur, poly, p);
    }
    (exp[d - 1] == one).then_some(exp)
}

/// Multiply a degree-<n residue by x, reducing by the monic modulus.
fn mul_by_x(v: &[u64], poly: &[u64], p: u64) -> Vec<u64> {
    let n = v.len();
    let carry = v[n - 1];
    let mut out = vec![0u64; n];
    for i in 1..n {
        out[i] = v[i - 1];
    }
    if carry != 0 {
        for i in 0..n {
            out[i] = (out[i] + carry * (p - poly[i] % p)) % p;
        }
    }
    out
}

fn label_from_exp_raw(e: u64, d: usize) -> usize {
    let m = d as u64 - 1;
    let r = e % m;
    if r == 0 {
        d - 1
    } else {
        r as usize
    }
}

/// Advances `low` one step in lexicographic order (first entry most
/// significant); returns false once the range is exhausted.
fn next_lex(low: &mut [u64], p: u64) -> bool {
    for i in (0..low.len()).rev() {
        low[i] += 1;
        if low[i] < p {
            return true;
        }
        low[i] = 0;
    }
    false
}

/// Trial division by every monic polynomial of degree 1..n/2.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let n = poly.len() - 1;
    if n == 1 {
        return true;
    }
    for deg in 1..=n / 2 {
        let mut low = vec![0u64; deg];
        loop {
            let mut divisor = low.clone();
            divisor.push(1);
            if divides(&divisor, poly, p) {
                return false;
            }
            if !next_lex(&mut low, p) {
                break;
            }
        }
    }
    true
}

/// Does the monic `divisor` divide the monic `poly` over Z_p?
fn divides(divisor: &[u64], poly: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = poly.to_vec();
    let dd = divisor.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dd;
        if lead != 0 {
            for i in 0..=dd {
                let idx = shift + i;
                rem[idx] = (rem[idx] + (p - divisor[i] % p) * lead) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

fn default_poly(p: u64, n: usize) -> Vec<u64> {
    match (p, n) {
        (2, 3) => return vec![1, 0, 1, 1], // σ³+σ²+1
        (3, 2) => return vec![2, 1, 1],    // σ²+σ+2
        _ => {}
    }
    let d: usize = (p as usize).pow(n as u32);
    let mut low = vec![0u64; n];
    loop {
        let mut poly = low.clone();
        poly.push(1);
        if is_irreducible(&poly, p) && power_table(&poly, p, n, d).is_some() {
            return poly;
        }
        assert!(
            next_lex(&mut low, p),
            "no primitive polynomial found (impossible for a prime p)"
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_prime() {
        assert_eq!(Field::build(4, 1, None).unwrap_err(), FieldError::NotPrime(4));
    }

    #[test]
    fn rejects_reducible_polynomial() {
        // σ³+1 = (σ+1)(σ²+σ+1) over Z_2
        let err = Field::build(2, 3, Some(&[1, 0, 0, 1])).unwrap_err();
        assert_eq!(err, FieldError::NotIrreducible(2));
    }

    #[test]
    fn rejects_irreducible_but_imprimitive() {
        // σ²+σ+1 is irreducible over Z_5 but its root has order 3, not 24.
        let err = Field::build(5, 2, Some(&[1, 1, 1])).unwrap_err();
        assert_eq!(err, FieldError::NotPrimitive);
    }

    #[test]
    fn builtin_moduli_and_bases() {
        let f8 = Field::build(2, 3, None).unwrap();
        assert_eq!(f8.spec().poly, vec![1, 0, 1, 1]);
        assert_eq!(f8.description().theta, vec![1, 2, 4]);
        assert_eq!(f8.basis().c, vec![1, 1, 1]);

        let f9 = Field::build(3, 2, None).unwrap();
        assert_eq!(f9.spec().poly, vec![2, 1, 1]);
        assert_eq!(f9.description().theta, vec![4, 2]);
        assert_eq!(f9.basis().c, vec![2, 1]);
    }

    #[test]
    fn prefers_fully_self_dual_basis_when_available() {
        // Prime fields: tr is the identity, so θ with θ² = 1 gives c = 1.
        for p in [2u64, 3, 5, 7] {
            let f = Field::build(p, 1, None).unwrap();
            assert_eq!(f.basis().c, vec![1], "p = {p}");
            let theta = f.theta_label(0);
            assert_eq!(f.mul(theta, theta), f.d() - 1);
        }
        // Odd characteristic, even degree: no fully self-dual basis exists,
        // so the almost self-dual fallback must keep its single c ≠ 1.
        let f9 = Field::build(3, 2, None).unwrap();
        assert_eq!(f9.basis().c, vec![2, 1]);
        let f25 = Field::build(5, 2, None).unwrap();
        assert_eq!(f25.basis().c.iter().filter(|&&c| c != 1).count(), 1);
        // Characteristic 2 always admits a fully self-dual basis.
        let f16 = Field::build(2, 4, None).unwrap();
        assert_eq!(f16.basis().c, vec![1, 1, 1, 1]);
    }

    #[test]
    fn label_arithmetic_matches_exponents() {
        let f = Field::build(2, 3, None).unwrap();
        assert_eq!(f.mul(3, 5), 1); // σ³·σ⁵ = σ⁸ = σ
        assert_eq!(f.mul(0, 4), 0);
        assert_eq!(f.add(1, 2), 6); // σ + σ² = σ⁶
        assert_eq!(f.add(3, 3), 0);
        let f9 = Field::build(3, 2, None).unwrap();
        assert_eq!(f9.mul(4, 4), 8); // σ⁴·σ⁴ = σ⁸ = 1
    }

    #[test]
    fn trace_values_from_worked_examples() {
        let f8 = Field::build(2, 3, None).unwrap();
        assert_eq!(f8.trace(2), 1);
        assert_eq!(f8.trace(0), 0);
        let f9 = Field::build(3, 2, None).unwrap();
        assert_eq!(f9.trace(8), 2);
    }
}
