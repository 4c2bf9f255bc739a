//! CNOT and single-qudit (Type-S / Type-F) transformations acting on curves,
//! generator matrices, bundles, and squares — everything symbolic over Z_p.
//!
//! Conventions:
//! - Generator matrices transform by right multiplication, so sequences of
//!   operations compose left-to-right in application order. "CNOTs first"
//!   normal form means the CNOTs are applied before the local operations.
//! - All permutation triples follow the content-movement semantics of
//!   [`crate::latin::apply_triple`].

use serde::{Deserialize, Serialize};

use crate::curves::{
    canonical_generators, curve_from_generator, generator_matrix, Curve, CurveError,
    GeneratorMatrix, ParametricCurve,
};
use crate::field::Field;
use crate::latin::{apply_triple, label_action, standard_ls, PermutationTriple};
use crate::matrix::{inv_mod, Mat};

/// Controlled-add gate X^m_{p,q}: qudit `control` (= p) adds m times itself
/// into qudit `target` (= q). Indices are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CnotOp {
    #[serde(rename = "p")]
    pub control: usize,
    #[serde(rename = "q")]
    pub target: usize,
    pub m: u64,
}

/// The two families of single-qudit operations with unit-determinant 2×2 maps:
/// S(k) ↦ diag(k, k^{-1}) and F(k) ↦ [[0, −k^{-1}], [k, 0]].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum LocalKind {
    S,
    F,
}

/// One single-qudit operation per qudit, all of the same kind, with parameter
/// k_j ∈ Z_p* on qudit j. (k_j = 1 is the identity for S; F always acts.)
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LocalOp {
    pub kind: LocalKind,
    pub k: Vec<u64>,
}

/// Per-qudit mixture of S and F kinds — only used to demonstrate that mixing
/// breaks bundles; uniform-kind operations go through [`LocalOp`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MixedAssignment {
    pub kinds: Vec<LocalKind>,
    pub k: Vec<u64>,
}

/// 2n×2n block matrix (K11, K12; K21, K22) acting on generator matrices by
/// right multiplication; every block is diagonal for local operations.
#[derive(Clone, PartialEq, Debug)]
pub struct KMatrix {
    pub k11: Mat,
    pub k12: Mat,
    pub k21: Mat,
    pub k22: Mat,
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("per-qudit kinds are mixed; uniform S or F is required here")]
    MixedKind,
    #[error("operations act on incompatible field/qudit structures")]
    IncompatibleOps,
    #[error("this formula only applies in characteristic 2")]
    NotQubit,
}

impl CnotOp {
    pub fn new(control: usize, target: usize, m: u64) -> CnotOp {
        CnotOp { control, target, m }
    }

    pub fn validate(&self, field: &Field) -> Result<(), TransformError> {
        let n = field.n();
        let ok = self.control >= 1
            && self.control <= n
            && self.target >= 1
            && self.target <= n
            && self.control != self.target;
        if ok {
            Ok(())
        } else {
            Err(TransformError::IncompatibleOps)
        }
    }

    /// X^m_{p,q} = identity + m·E_{p,q} over Z_p.
    pub fn matrix(&self, field: &Field) -> Mat {
        Mat::elementary(field.p(), field.n(), self.control - 1, self.target - 1, self.m)
    }

    /// X^{−m}_{p,q}, the inverse gate.
    pub fn inverse(&self, field: &Field) -> CnotOp {
        let p = field.p();
        CnotOp { control: self.control, target: self.target, m: (p - self.m % p) % p }
    }

    /// K-matrix form blockdiag((X^{−m})^T, X^m) — how the gate acts on
    /// generator matrices.
    pub fn k_matrix(&self, field: &Field) -> KMatrix {
        let n = field.n();
        let p = field.p();
        KMatrix {
            k11: self.inverse(field).matrix(field).transpose(),
            k12: Mat::zero(p, n, n),
            k21: Mat::zero(p, n, n),
            k22: self.matrix(field),
        }
    }
}

impl LocalOp {
    pub fn new(kind: LocalKind, k: Vec<u64>) -> LocalOp {
        LocalOp { kind, k }
    }

    pub fn validate(&self, field: &Field) -> Result<(), TransformError> {
        if self.k.len() != field.n() || self.k.iter().any(|&x| x % field.p() == 0) {
            return Err(TransformError::IncompatibleOps);
        }
        Ok(())
    }

    /// The 2×2 map of the operation on qudit j (row-vector right action).
    pub fn t_map(&self, field: &Field, j: usize) -> Mat {
        let p = field.p();
        let k = self.k[j] % p;
        let ki = inv_mod(k, p);
        match self.kind {
            LocalKind::S => Mat::from_rows(p, &[vec![k, 0], vec![0, ki]]),
            LocalKind::F => Mat::from_rows(p, &[vec![0, (p - ki) % p], vec![k, 0]]),
        }
    }

    pub fn k_matrix(&self, field: &Field) -> KMatrix {
        let p = field.p();
        let n = field.n();
        let k: Vec<u64> = self.k.iter().map(|&x| x % p).collect();
        let kinv: Vec<u64> = k.iter().map(|&x| inv_mod(x, p)).collect();
        match self.kind {
            LocalKind::S => KMatrix {
                k11: Mat::diag(p, &k),
                k12: Mat::zero(p, n, n),
                k21: Mat::zero(p, n, n),
                k22: Mat::diag(p, &kinv),
            },
            LocalKind::F => KMatrix {
                k11: Mat::zero(p, n, n),
                k12: Mat::diag(p, &kinv).neg(),
                k21: Mat::diag(p, &k),
                k22: Mat::zero(p, n, n),
            },
        }
    }
}

impl MixedAssignment {
    pub fn is_uniform(&self) -> bool {
        self.kinds.windows(2).all(|w| w[0] == w[1])
    }

    pub fn k_matrix(&self, field: &Field) -> KMatrix {
        let p = field.p();
        let n = field.n();
        let mut k11 = vec![0u64; n];
        let mut k12 = vec![0u64; n];
        let mut k21 = vec![0u64; n];
        let mut k22 = vec![0u64; n];
        for j in 0..n {
            let k = self.k[j] % p;
            let ki = inv_mod(k, p);
            match self.kinds[j] {
                LocalKind::S => {
                    k11[j] = k;
                    k22[j] = ki;
                }
                LocalKind::F => {
                    k21[j] = k;
                    k12[j] = (p - ki) % p;
                }
            }
        }
        KMatrix {
            k11: Mat::diag(p, &k11),
            k12: Mat::diag(p, &k12),
            k21: Mat::diag(p, &k21),
            k22: Mat::diag(p, &k22),
        }
    }
}

/// Γ^{(g)} = (X^m)^T · Γ^{(f)} · X^m. Preserves symmetry and invertibility.
pub fn cnot_on_curve(field: &Field, f: &Curve, op: &CnotOp) -> Curve {
    let x = op.matrix(field);
    Curve::new(x.transpose().mul(&f.gamma).mul(&x))
}

/// Parametric image of a curve under a CNOT:
/// Γ^{(α)} = (X^{−m})^T·C^{-1}, Γ^{(β)} = Γ^{(f)}·X^m. Its explicit form
/// equals [`cnot_on_curve`]; its nonstandard square is the "physical" one.
pub fn cnot_parametric(field: &Field, f: &Curve, op: &CnotOp) -> ParametricCurve {
    let ga = op.inverse(field).matrix(field).transpose().mul(&field.c_inv_mat());
    let gb = f.gamma.mul(&op.matrix(field));
    ParametricCurve::new(ga, gb)
}

/// Rows and columns both move by i ↦ label(s^i·(X^{−m})^T); symbols fixed.
/// Takes the CNOT nonstandard square to the standard square of the same map.
pub fn perms_nonstandard_to_standard(field: &Field, op: &CnotOp) -> PermutationTriple {
    let m = op.inverse(field).matrix(field).transpose();
    let perm = label_action(field, &m);
    PermutationTriple {
        row_perm: perm.clone(),
        col_perm: perm,
        sym_perm: (0..field.d()).collect(),
        transpose_first: false,
    }
}

/// Takes the CNOT nonstandard square of f straight back to the standard square
/// of f itself: rows fixed, columns via W = (X^{−m})^T·C^{-1}·X^{−m}·C,
/// symbols via C^{-1}·X^{−m}·C.
pub fn perms_to_original(field: &Field, op: &CnotOp) -> PermutationTriple {
    let xm_inv = op.inverse(field).matrix(field);
    let c = field.c_mat();
    let ci = field.c_inv_mat();
    let w = xm_inv.transpose().mul(&ci).mul(&xm_inv).mul(&c);
    let v = ci.mul(&xm_inv).mul(&c);
    PermutationTriple {
        row_perm: (0..field.d()).collect(),
        col_perm: label_action(field, &w),
        sym_perm: label_action(field, &v),
        transpose_first: false,
    }
}

/// Takes the standard square of the CNOT image g back to the standard square
/// of the original f: rows via (X^m)^T, columns and symbols via C^{-1}·X^{−m}·C.
/// The triple depends only on the gate, not on the curve — one triple maps a
/// whole transformed bundle back.
pub fn perms_standard_to_standard(field: &Field, op: &CnotOp) -> PermutationTriple {
    let rows = label_action(field, &op.matrix(field).transpose());
    let v = field.c_inv_mat().mul(&op.inverse(field).matrix(field)).mul(&field.c_mat());
    let cols_syms = label_action(field, &v);
    PermutationTriple {
        row_perm: rows,
        col_perm: cols_syms.clone(),
        sym_perm: cols_syms,
        transpose_first: false,
    }
}

/// (L | R) ↦ (L·K11 + R·K21 | L·K12 + R·K22).
pub fn apply_local_to_generator(a: &GeneratorMatrix, k: &KMatrix) -> GeneratorMatrix {
    a.apply_block(&k.k11, &k.k12, &k.k21, &k.k22)
}

/// Parametric image of a curve under a uniform local operation:
/// S: (K11·C^{-1}, Γ·K11^{-1});  F: (Γ·K21·C^{-1}, −K21^{-1}).
pub fn local_on_curve(field: &Field, f: &Curve, op: &LocalOp) -> ParametricCurve {
    let p = field.p();
    let kd: Vec<u64> = op.k.iter().map(|&x| x % p).collect();
    let kinv: Vec<u64> = kd.iter().map(|&x| inv_mod(x, p)).collect();
    match op.kind {
        LocalKind::S => {
            let k11 = Mat::diag(p, &kd);
            ParametricCurve::new(k11.mul(&field.c_inv_mat()), f.gamma.mul(&Mat::diag(p, &kinv)))
        }
        LocalKind::F => {
            let k21 = Mat::diag(p, &kd);
            ParametricCurve::new(
                f.gamma.mul(&k21).mul(&field.c_inv_mat()),
                Mat::diag(p, &kinv).neg(),
            )
        }
    }
}

/// Triple taking the local-transformed nonstandard square back to the original
/// standard square of f. S: columns via K11², symbols via K11. F: transpose
/// first, then columns via −K21^{-2}·C², symbols via K21^{-1}·C.
pub fn local_perms(field: &Field, op: &LocalOp) -> PermutationTriple {
    let p = field.p();
    let d = field.d();
    let kd: Vec<u64> = op.k.iter().map(|&x| x % p).collect();
    match op.kind {
        LocalKind::S => {
            let k11 = Mat::diag(p, &kd);
            PermutationTriple {
                row_perm: (0..d).collect(),
                col_perm: label_action(field, &k11.mul(&k11)),
                sym_perm: label_action(field, &k11),
                transpose_first: false,
            }
        }
        LocalKind::F => {
            let kinv: Vec<u64> = kd.iter().map(|&x| inv_mod(x, p)).collect();
            let k21_inv = Mat::diag(p, &kinv);
            let c = field.c_mat();
            let cols = k21_inv.mul(&k21_inv).mul(&c).mul(&c).neg();
            let syms = k21_inv.mul(&c);
            PermutationTriple {
                row_perm: (0..d).collect(),
                col_perm: label_action(field, &cols),
                sym_perm: label_action(field, &syms),
                transpose_first: true,
            }
        }
    }
}

/// Per-curve outcome of a bundle transformation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BundleEntry {
    pub input_gamma: Vec<Vec<u64>>,
    /// Explicit adjacency of the image when it exists.
    pub output_gamma: Option<Vec<Vec<u64>>>,
    /// Parametric halves of the transformed generator matrix (L | R).
    pub output_left: Vec<Vec<u64>>,
    pub output_right: Vec<Vec<u64>>,
    /// Whether the transformed curve still has an invertible explicit form.
    pub invertible: bool,
}

/// Outcome of transforming a whole bundle, including the single permutation
/// triple that maps every transformed square back to its original (when the
/// transformation preserves the bundle).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BundleReport {
    pub entries: Vec<BundleEntry>,
    pub preserved: bool,
    pub common_triple: Option<PermutationTriple>,
}

fn entry_from_generator(input: &Curve, gm: &GeneratorMatrix) -> BundleEntry {
    let explicit = curve_from_generator(gm).ok();
    let invertible = explicit.as_ref().map_or(false, |c| c.is_invertible());
    BundleEntry {
        input_gamma: input.gamma.to_rows(),
        output_gamma: explicit.map(|c| c.gamma.to_rows()),
        output_left: gm.left.to_rows(),
        output_right: gm.right.to_rows(),
        invertible,
    }
}

fn curves_nonintersecting(a: &Curve, b: &Curve) -> bool {
    a.gamma.add(&b.gamma.neg()).is_invertible()
}

/// Transforms every curve of a bundle by one CNOT, derives the common
/// standard-to-standard triple, and verifies square equality for every member.
pub fn cnot_bundle_report(
    field: &Field,
    bundle: &[Curve],
    op: &CnotOp,
) -> Result<BundleReport, TransformError> {
    op.validate(field)?;
    let gens = canonical_generators(field);
    let k = op.k_matrix(field);
    let mut entries = Vec::with_capacity(bundle.len());
    let mut images = Vec::with_capacity(bundle.len());
    for f in bundle {
        let gm = generator_matrix(field, f, &gens).map_err(|_| TransformError::IncompatibleOps)?;
        let gm2 = apply_local_to_generator(&gm, &k);
        entries.push(entry_from_generator(f, &gm2));
        images.push(cnot_on_curve(field, f, op));
    }
    let all_invertible = entries.iter().all(|e| e.invertible);
    let nonintersecting = pairwise_nonintersecting(&images);
    let triple = perms_standard_to_standard(field, op);
    let mut triple_ok = true;
    for (f, g) in bundle.iter().zip(&images) {
        let lf = standard_ls(field, f).map_err(|_| TransformError::IncompatibleOps)?;
        let lg = standard_ls(field, g).map_err(|_| TransformError::IncompatibleOps)?;
        let back = apply_triple(&lg, &triple).map_err(|_| TransformError::IncompatibleOps)?;
        if back.grid != lf.grid {
            triple_ok = false;
        }
    }
    Ok(BundleReport {
        entries,
        preserved: all_invertible && nonintersecting,
        common_triple: if triple_ok { Some(triple) } else { None },
    })
}

fn pairwise_nonintersecting(curves: &[Curve]) -> bool {
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            if !curves_nonintersecting(&curves[i], &curves[j]) {
                return false;
            }
        }
    }
    true
}

/// Applies a per-qudit S/F mixture to every curve of a bundle at the
/// generator-matrix level. A genuinely mixed assignment always leaves at least
/// one curve without an invertible explicit form.
pub fn mixed_sf_breaks_bundle(
    field: &Field,
    bundle: &[Curve],
    assignment: &MixedAssignment,
) -> Result<BundleReport, TransformError> {
    if assignment.kinds.len() != field.n() || assignment.k.len() != field.n() {
        return Err(TransformError::IncompatibleOps);
    }
    if assignment.k.iter().any(|&x| x % field.p() == 0) {
        return Err(TransformError::IncompatibleOps);
    }
    let gens = canonical_generators(field);
    let k = assignment.k_matrix(field);
    let mut entries = Vec::with_capacity(bundle.len());
    let mut explicit_images = Vec::new();
    for f in bundle {
        let gm = generator_matrix(field, f, &gens).map_err(|_| TransformError::IncompatibleOps)?;
        let gm2 = apply_local_to_generator(&gm, &k);
        let entry = entry_from_generator(f, &gm2);
        if let Some(g) = &entry.output_gamma {
            explicit_images.push(Curve::new(Mat::from_rows(field.p(), g)));
        }
        entries.push(entry);
    }
    let all_invertible =
        entries.iter().all(|e| e.invertible) && explicit_images.len() == entries.len();
    let preserved = all_invertible && pairwise_nonintersecting(&explicit_images);
    Ok(BundleReport { entries, preserved, common_triple: None })
}

/// A sequence of operations in application order, normalized so that all
/// CNOTs run first, followed by at most one uniform local operation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComposedOp {
    pub cnots: Vec<CnotOp>,
    pub local: Option<LocalOp>,
}

impl ComposedOp {
    pub fn from_cnot(op: CnotOp) -> ComposedOp {
        ComposedOp { cnots: vec![op], local: None }
    }

    pub fn from_local(op: LocalOp) -> ComposedOp {
        ComposedOp { cnots: Vec::new(), local: Some(op) }
    }

    pub fn identity() -> ComposedOp {
        ComposedOp { cnots: Vec::new(), local: None }
    }

    /// Full K-matrix of the sequence (product in application order).
    pub fn k_matrix(&self, field: &Field) -> KMatrix {
        let mut acc = KMatrix::identity(field);
        for c in &self.cnots {
            acc = acc.mul(&c.k_matrix(field));
        }
        if let Some(l) = &self.local {
            acc = acc.mul(&l.k_matrix(field));
        }
        acc
    }
}

impl KMatrix {
    pub fn identity(field: &Field) -> KMatrix {
        let p = field.p();
        let n = field.n();
        KMatrix {
            k11: Mat::identity(p, n),
            k12: Mat::zero(p, n, n),
            k21: Mat::zero(p, n, n),
            k22: Mat::identity(p, n),
        }
    }

    /// Block product: self applied first, then rhs.
    pub fn mul(&self, rhs: &KMatrix) -> KMatrix {
        KMatrix {
            k11: self.k11.mul(&rhs.k11).add(&self.k12.mul(&rhs.k21)),
            k12: self.k11.mul(&rhs.k12).add(&self.k12.mul(&rhs.k22)),
            k21: self.k21.mul(&rhs.k11).add(&self.k22.mul(&rhs.k21)),
            k22: self.k21.mul(&rhs.k12).add(&self.k22.mul(&rhs.k22)),
        }
    }
}

/// Composes two per-qudit local operations (apply `a` first, then `b`) via
/// their 2×2 maps. The kind algebra is S·S=S, S·F=F, F·S=F, F·F=S; parameters
/// follow T(a)·T(b).
pub fn compose_local(field: &Field, a: &LocalOp, b: &LocalOp) -> Result<LocalOp, TransformError> {
    a.validate(field)?;
    b.validate(field)?;
    let p = field.p();
    let n = field.n();
    let kind = match (a.kind, b.kind) {
        (LocalKind::S, LocalKind::S) | (LocalKind::F, LocalKind::F) => LocalKind::S,
        _ => LocalKind::F,
    };
    let mut k = Vec::with_capacity(n);
    for j in 0..n {
        let t = a.t_map(field, j).mul(&b.t_map(field, j));
        // Read the parameter back off the product's matrix form.
        let kj = match kind {
            LocalKind::S => t.get(0, 0),
            LocalKind::F => t.get(1, 0),
        };
        debug_assert_ne!(kj % p, 0);
        k.push(kj);
        // The product must exactly match the canonical form of its kind.
        let check = LocalOp { kind, k: vec![kj; n] }.t_map(field, 0);
        debug_assert_eq!(t, check);
    }
    Ok(LocalOp { kind, k })
}

/// Moves a local operation past a following CNOT: (local L, then X^m_{p,q})
/// equals (X^{m'} first, then L), with
/// S: m' = m·k_q·k_p^{-1}, control/target unchanged;
/// F: m' = −m·k_q·k_p^{-1}, control and target swapped.
pub fn commute_local_past_cnot(
    field: &Field,
    local: &LocalOp,
    cnot: &CnotOp,
) -> Result<(CnotOp, LocalOp), TransformError> {
    local.validate(field)?;
    cnot.validate(field)?;
    let p = field.p();
    let kp = local.k[cnot.control - 1] % p;
    let kq = local.k[cnot.target - 1] % p;
    let ratio = kq * inv_mod(kp, p) % p;
    let out = match local.kind {
        LocalKind::S => CnotOp { control: cnot.control, target: cnot.target, m: cnot.m % p * ratio % p },
        LocalKind::F => CnotOp {
            control: cnot.target,
            target: cnot.control,
            m: (p - cnot.m % p * ratio % p) % p,
        },
    };
    Ok((out, local.clone()))
}

/// Composes two normalized sequences (apply `a` first, then `b`) and returns
/// the normal form with all CNOTs in front.
pub fn compose_ops(
    field: &Field,
    a: &ComposedOp,
    b: &ComposedOp,
) -> Result<ComposedOp, TransformError> {
    for c in a.cnots.iter().chain(&b.cnots) {
        c.validate(field)?;
    }
    let mut cnots = a.cnots.clone();
    let mut local = a.local.clone();
    if let Some(l) = &local {
        l.validate(field)?;
    }
    // Pull b's CNOTs through a's trailing local, left to right.
    for c in &b.cnots {
        match &local {
            Some(l) => {
                let (c2, l2) = commute_local_past_cnot(field, l, c)?;
                if c2.m % field.p() != 0 {
                    cnots.push(c2);
                }
                local = Some(l2);
            }
            None => {
                if c.m % field.p() != 0 {
                    cnots.push(*c);
                }
            }
        }
    }
    // Merge adjacent CNOTs on the same control/target pair.
    let mut merged: Vec<CnotOp> = Vec::new();
    for c in cnots {
        match merged.last_mut() {
            Some(last) if last.control == c.control && last.target == c.target => {
                last.m = (last.m + c.m) % field.p();
                if last.m == 0 {
                    merged.pop();
                }
            }
            _ => merged.push(c),
        }
    }
    let local = match (&local, &b.local) {
        (Some(x), Some(y)) => Some(compose_local(field, x, y)?),
        (Some(x), None) => Some(x.clone()),
        (None, Some(y)) => {
            y.validate(field)?;
            Some(y.clone())
        }
        (None, None) => None,
    };
    // An S operation with all parameters 1 is the identity; drop it.
    let local = local.filter(|l| {
        !(matches!(l.kind, LocalKind::S) && l.k.iter().all(|&x| x % field.p() == 1))
    });
    Ok(ComposedOp { cnots: merged, local })
}

/// One step of a self-composition orbit.
#[derive(Clone, PartialEq, Debug)]
pub struct OrbitStep {
    pub curve: Curve,
    /// Row relabeling ρ (apply-form: row i of this square moves to ρ(i))
    /// taking this square to the next square of the orbit.
    pub row_relabeling: Vec<usize>,
}

/// Repeated composition of a curve with itself until the sequence returns to
/// the seed: seed, seed∘seed, …; every consecutive pair of standard squares
/// differs by the same fixed first-index relabeling.
pub fn orbit(field: &Field, seed: &Curve) -> Result<Vec<OrbitStep>, CurveError> {
    if !seed.is_invertible() {
        return Err(CurveError::Degenerate);
    }
    // next[i][j] = prev[m(i)][j] with m(i) = label(s^i·Γ^{(seed)}·C), so the
    // applied relabeling (new position of old row k) is ρ = m^{-1}.
    let m_map = label_action(field, &seed.gamma.mul(&field.c_mat()));
    let mut rho = vec![0usize; field.d()];
    for (i, &mi) in m_map.iter().enumerate() {
        rho[mi] = i;
    }
    // The orbit length is the order of C·Γ in GL(n, p), so it divides |GL(n, p)|.
    let cap: u128 = {
        let p = field.p() as u128;
        let pn = p.pow(field.n() as u32);
        (0..field.n() as u32).map(|i| pn - p.pow(i)).product()
    };
    let mut steps = Vec::new();
    let mut cur = seed.clone();
    loop {
        steps.push(OrbitStep { curve: cur.clone(), row_relabeling: rho.clone() });
        cur = crate::curves::compose(field, &cur, seed);
        if cur.gamma == seed.gamma {
            return Ok(steps);
        }
        assert!((steps.len() as u128) <= cap, "orbit failed to close");
    }
}

/// Characteristic-2 pointwise form of the CNOT action on a curve:
/// g(α) = f(α) + Tr(αθ_q)·f(θ_p) + Tr(f(α)θ_p)·θ_q + Tr(αθ_q)·Tr(f(θ_p)θ_p)·θ_q.
/// Its adjacency matrix always equals [`cnot_on_curve`] — an independent
/// oracle for the matrix rule.
pub fn cnot_qubit_curve_formula(
    field: &Field,
    f: &Curve,
    op: &CnotOp,
) -> Result<Curve, TransformError> {
    if field.p() != 2 {
        return Err(TransformError::NotQubit);
    }
    op.validate(field)?;
    if op.m % 2 == 0 {
        return Ok(f.clone());
    }
    let tp = field.theta_label(op.control - 1);
    let tq = field.theta_label(op.target - 1);
    let f_tp = crate::curves::curve_eval(field, f, tp);
    let tr_ftp_tp = field.trace(field.mul(f_tp, tp));
    let g = |a: usize| {
        let fa = crate::curves::curve_eval(field, f, a);
        let t1 = field.trace(field.mul(a, tq));
        let t2 = field.trace(field.mul(fa, tp));
        let mut acc = fa;
        acc = field.add(acc, field.scalar_mul(t1, f_tp));
        acc = field.add(acc, field.scalar_mul(t2, tq));
        acc = field.add(acc, field.scalar_mul(t1 * tr_ftp_tp % 2, tq));
        acc
    };
    crate::curves::adjacency_from_map(field, g).map_err(|_| TransformError::IncompatibleOps)
}

/// JSON descriptor for one operation: `{"cnot":{"p":1,"q":2,"m":1}}` or
/// `{"local":{"kind":"S","k":[2,1]}}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum OpDescriptor {
    #[serde(rename = "cnot")]
    Cnot(CnotOp),
    #[serde(rename = "local")]
    Local(LocalOp),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{identity_curve, parametric_to_explicit, scalar_curve};
    use crate::latin::nonstandard_ls;

    fn f8() -> Field {
        Field::build(2, 3, None).unwrap()
    }

    fn f9() -> Field {
        Field::build(3, 2, None).unwrap()
    }

    #[test]
    fn cnot_matrix_and_gamma_gf8() {
        let f = f8();
        let op = CnotOp::new(1, 2, 1);
        assert_eq!(op.matrix(&f).to_rows(), vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let g = cnot_on_curve(&f, &identity_curve(&f), &op);
        assert_eq!(g.gamma.to_rows(), vec![vec![1, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn cnot_gamma_gf9() {
        let f = f9();
        let op = CnotOp::new(1, 2, 2);
        let g = cnot_on_curve(&f, &scalar_curve(&f, 3), &op);
        assert_eq!(g.gamma.to_rows(), vec![vec![2, 2], vec![2, 1]]);
    }

    #[test]
    fn cnot_zero_power_is_identity() {
        let f = f9();
        let op = CnotOp::new(2, 1, 0);
        let c = scalar_curve(&f, 5);
        assert_eq!(cnot_on_curve(&f, &c, &op).gamma, c.gamma);
        let pc = cnot_parametric(&f, &c, &op);
        assert_eq!(pc.gamma_alpha, f.c_inv_mat());
        assert_eq!(pc.gamma_beta, c.gamma);
    }

    #[test]
    fn parametric_explicit_consistency() {
        let f = f8();
        let op = CnotOp::new(2, 3, 1);
        for e in 1..f.d() {
            let c = scalar_curve(&f, e);
            let pc = cnot_parametric(&f, &c, &op);
            let explicit = parametric_to_explicit(&f, &pc).unwrap();
            assert_eq!(explicit.gamma, cnot_on_curve(&f, &c, &op).gamma);
        }
    }

    #[test]
    fn nonstandard_to_standard_swaps_gf8() {
        let f = f8();
        let t = perms_nonstandard_to_standard(&f, &CnotOp::new(1, 2, 1));
        // Printed recipe: interchange rows/columns 2↔6 and 5↔7.
        assert_eq!(t.row_perm, vec![0, 1, 6, 3, 4, 7, 2, 5]);
        assert_eq!(t.row_perm, t.col_perm);
        assert!(t.sym_perm.iter().enumerate().all(|(i, &v)| i == v));
    }

    #[test]
    fn standard_to_standard_recovers_original_square() {
        let f = f8();
        let op = CnotOp::new(1, 2, 1);
        let t = perms_standard_to_standard(&f, &op);
        assert_eq!(t.row_perm, vec![0, 1, 6, 3, 4, 7, 2, 5]);
        assert_eq!(t.col_perm, vec![0, 6, 2, 7, 4, 5, 1, 3]);
        assert_eq!(t.sym_perm, t.col_perm);
        for e in 1..f.d() {
            let c = scalar_curve(&f, e);
            let g = cnot_on_curve(&f, &c, &op);
            let lc = standard_ls(&f, &c).unwrap();
            let lg = standard_ls(&f, &g).unwrap();
            assert_eq!(apply_triple(&lg, &t).unwrap().grid, lc.grid);
        }
    }

    #[test]
    fn to_original_collapses_both_steps() {
        let f = f9();
        let op = CnotOp::new(1, 2, 2);
        let c = scalar_curve(&f, 3);
        let tilde = nonstandard_ls(&f, &cnot_parametric(&f, &c, &op)).unwrap();
        let direct = apply_triple(&tilde, &perms_to_original(&f, &op)).unwrap();
        assert_eq!(direct.grid, standard_ls(&f, &c).unwrap().grid);
    }

    #[test]
    fn local_s_fixed_point_gf9() {
        let f = f9();
        let c = scalar_curve(&f, 4);
        assert_eq!(c.gamma.to_rows(), vec![vec![1, 0], vec![0, 2]]);
        let op = LocalOp::new(LocalKind::S, vec![2, 1]);
        let pc = local_on_curve(&f, &c, &op);
        let back = parametric_to_explicit(&f, &pc).unwrap();
        assert_eq!(back.gamma, c.gamma);
    }

    #[test]
    fn generator_transform_gf9_worked_example() {
        let f = f9();
        let c = scalar_curve(&f, 4);
        let gm = crate::curves::generator_matrix(&f, &c, &[8, 2]).unwrap();
        let op = LocalOp::new(LocalKind::S, vec![2, 1]);
        let out = apply_local_to_generator(&gm, &op.k_matrix(&f));
        assert_eq!(out.rows(), vec![vec![2, 0, 2, 0], vec![0, 1, 0, 2]]);
    }

    #[test]
    fn local_perm_triples_restore_standard_square() {
        let f9v = f9();
        let c = scalar_curve(&f9v, 4);
        let op = LocalOp::new(LocalKind::S, vec![2, 1]);
        let tilde = nonstandard_ls(&f9v, &local_on_curve(&f9v, &c, &op)).unwrap();
        let t = local_perms(&f9v, &op);
        assert_eq!(apply_triple(&tilde, &t).unwrap().grid, standard_ls(&f9v, &c).unwrap().grid);

        let f4 = Field::build(2, 2, None).unwrap();
        let id4 = identity_curve(&f4);
        let fop = LocalOp::new(LocalKind::F, vec![1, 1]);
        let tilde_f = nonstandard_ls(&f4, &local_on_curve(&f4, &id4, &fop)).unwrap();
        let tf = local_perms(&f4, &fop);
        assert!(tf.transpose_first);
        assert_eq!(apply_triple(&tilde_f, &tf).unwrap().grid, standard_ls(&f4, &id4).unwrap().grid);
    }

    #[test]
    fn local_composition_relations() {
        // S·S → S(kr); S then F → F(tk^{-1}); F then S → F(tk); F·F → S(−k^{-1}r).
        let f = Field::build(5, 1, None).unwrap();
        let p = 5u64;
        for k in 1..p {
            for r in 1..p {
                let s_k = LocalOp::new(LocalKind::S, vec![k]);
                let s_r = LocalOp::new(LocalKind::S, vec![r]);
                let f_k = LocalOp::new(LocalKind::F, vec![k]);
                let f_r = LocalOp::new(LocalKind::F, vec![r]);
                let ss = compose_local(&f, &s_k, &s_r).unwrap();
                assert_eq!((ss.kind, ss.k[0]), (LocalKind::S, k * r % p));
                let sf = compose_local(&f, &s_k, &f_r).unwrap();
                assert_eq!((sf.kind, sf.k[0]), (LocalKind::F, r * inv_mod(k, p) % p));
                let fs = compose_local(&f, &f_k, &s_r).unwrap();
                assert_eq!((fs.kind, fs.k[0]), (LocalKind::F, k * r % p));
                let ff = compose_local(&f, &f_k, &f_r).unwrap();
                assert_eq!((ff.kind, ff.k[0]), (LocalKind::S, (p - inv_mod(k, p) * r % p) % p));
            }
        }
    }

    #[test]
    fn cnot_commutation_matches_k_matrices() {
        let f = f9();
        let p = 3u64;
        for kind in [LocalKind::S, LocalKind::F] {
            for k1 in 1..p {
                for k2 in 1..p {
                    for m in 1..p {
                        let local = LocalOp::new(kind, vec![k1, k2]);
                        let cnot = CnotOp::new(1, 2, m);
                        let (c2, l2) = commute_local_past_cnot(&f, &local, &cnot).unwrap();
                        let lhs = local.k_matrix(&f).mul(&cnot.k_matrix(&f));
                        let rhs = c2.k_matrix(&f).mul(&l2.k_matrix(&f));
                        assert_eq!(lhs, rhs, "kind {kind:?} k=({k1},{k2}) m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn compose_ops_normal_form() {
        let f = f9();
        let a = ComposedOp::from_local(LocalOp::new(LocalKind::S, vec![2, 1]));
        let b = ComposedOp::from_cnot(CnotOp::new(1, 2, 1));
        let ab = compose_ops(&f, &a, &b).unwrap();
        assert_eq!(ab.cnots.len(), 1);
        assert!(ab.local.is_some());
        // K-matrix equality with the unnormalized sequence.
        let lhs = a.k_matrix(&f).mul(&b.k_matrix(&f));
        assert_eq!(lhs, ab.k_matrix(&f));
    }

    #[test]
    fn orbit_gf8_seed_sigma_alpha() {
        let f = f8();
        let steps = orbit(&f, &scalar_curve(&f, 1)).unwrap();
        assert_eq!(steps.len(), 7);
        // Printed relabeling cycle 7→6→5→4→3→2→1→7.
        assert_eq!(steps[0].row_relabeling, vec![0, 7, 1, 2, 3, 4, 5, 6]);
        // Consecutive squares differ by exactly that row relabeling.
        for w in steps.windows(2) {
            let cur = standard_ls(&f, &w[0].curve).unwrap();
            let next = standard_ls(&f, &w[1].curve).unwrap();
            let t = PermutationTriple {
                row_perm: w[0].row_relabeling.clone(),
                col_perm: (0..8).collect(),
                sym_perm: (0..8).collect(),
                transpose_first: false,
            };
            assert_eq!(apply_triple(&cur, &t).unwrap().grid, next.grid);
        }
    }

    #[test]
    fn orbit_lengths() {
        let f8v = f8();
        assert_eq!(orbit(&f8v, &identity_curve(&f8v)).unwrap().len(), 1);
        let f9v = f9();
        assert_eq!(orbit(&f9v, &scalar_curve(&f9v, 1)).unwrap().len(), 8);
    }

    #[test]
    fn qubit_pointwise_formula_matches_matrix_rule() {
        let f = f8();
        let op = CnotOp::new(1, 2, 1);
        for e in 1..f.d() {
            let c = scalar_curve(&f, e);
            let via_points = cnot_qubit_curve_formula(&f, &c, &op).unwrap();
            assert_eq!(via_points.gamma, cnot_on_curve(&f, &c, &op).gamma);
        }
        let f9v = f9();
        assert_eq!(
            cnot_qubit_curve_formula(&f9v, &scalar_curve(&f9v, 1), &CnotOp::new(1, 2, 1))
                .unwrap_err(),
            TransformError::NotQubit
        );
    }

    #[test]
    fn mixed_assignment_breaks_gf9_bundle() {
        let f = f9();
        let bundle = crate::curves::desarguesian_bundle(&f);
        let mix = MixedAssignment { kinds: vec![LocalKind::S, LocalKind::F], k: vec![1, 1] };
        let report = mixed_sf_breaks_bundle(&f, &bundle, &mix).unwrap();
        assert!(!report.preserved);
        assert!(report.entries.iter().any(|e| !e.invertible));
        // Uniform all-S assignment keeps everything invertible.
        let uniform = MixedAssignment { kinds: vec![LocalKind::S, LocalKind::S], k: vec![2, 1] };
        let clean = mixed_sf_breaks_bundle(&f, &bundle, &uniform).unwrap();
        assert!(clean.preserved);
    }

    #[test]
    fn op_descriptor_json_round_trip() {
        let c = OpDescriptor::Cnot(CnotOp::new(1, 2, 1));
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"cnot":{"p":1,"q":2,"m":1}}"#);
        assert_eq!(serde_json::from_str::<OpDescriptor>(&s).unwrap(), c);
        let l = OpDescriptor::Local(LocalOp::new(LocalKind::S, vec![2, 1]));
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"{"local":{"kind":"S","k":[2,1]}}"#);
        assert_eq!(serde_json::from_str::<OpDescriptor>(&s).unwrap(), l);
    }
}
