//! Recomputes each bundled worked example from scratch, compares every
//! artifact against the embedded golden data, and prints it. The first
//! mismatch aborts with exit code 1.

use anyhow::Result;

use mols_core::curves::{
    curve_from_generator, curve_from_phi, generator_matrix, identity_curve,
    parametric_to_explicit, scalar_curve, ParametricCurve,
};
use mols_core::fixtures::{self, mat};
use mols_core::latin::{apply_triple, minisquare, minisquare_commutative, nonstandard_ls,
    standard_ls, standardize,
};
use mols_core::matrix::Mat;
use mols_core::monomials::{curve_commuting_set, MonomialError};
use mols_core::transforms::{
    apply_local_to_generator, cnot_on_curve, cnot_parametric, cnot_qubit_curve_formula,
    perms_to_original, LocalKind, LocalOp,
};

use crate::print_grid;

macro_rules! ensure_match {
    ($cond:expr, $what:expr) => {
        if !$cond {
            eprintln!("mismatch: {}", $what);
            return Ok(1);
        }
    };
}

fn print_rows(rows: &[Vec<u64>]) {
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        println!("{}", line.join(" "));
    }
}

fn print_perm(perm: &[usize]) {
    let line: Vec<String> = perm.iter().map(|v| v.to_string()).collect();
    println!("{}", line.join(" "));
}

fn tags(t: &[usize]) -> String {
    t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Three-qubit example: addition square, transformed adjacency, both square
/// forms of the image, the pointwise table, and the identity minisquare.
pub fn a1() -> Result<u8> {
    let fx = fixtures::three_qubit();
    let field = fx.field.build()?;
    let id = identity_curve(&field);

    let addition = standard_ls(&field, &id)?;
    ensure_match!(addition.grid == fx.addition_square, "addition square");
    print_grid(&addition.grid);

    let image = cnot_on_curve(&field, &id, &fx.cnot);
    ensure_match!(image.gamma == mat(field.p(), &fx.cnot_gamma), "transformed adjacency");
    println!();
    print_rows(&image.gamma.to_rows());

    let tilde = nonstandard_ls(&field, &cnot_parametric(&field, &id, &fx.cnot))?;
    ensure_match!(tilde.grid == fx.cnot_nonstandard_square, "transformed square, nonstandard");
    println!();
    print_grid(&tilde.grid);

    let standard = standard_ls(&field, &image)?;
    ensure_match!(standard.grid == fx.cnot_standard_square, "transformed square, standard");
    println!();
    print_grid(&standard.grid);

    println!();
    for row in &fx.pointwise_cnot_rows {
        let before = curve_from_phi(&field, &row.f_phi())?;
        let printed = curve_from_phi(&field, &row.g_phi())?;
        let by_formula = cnot_qubit_curve_formula(&field, &before, &fx.cnot)
            .map_err(|err| anyhow::anyhow!("{err}"))?;
        ensure_match!(
            by_formula.gamma == printed.gamma
                && cnot_on_curve(&field, &before, &fx.cnot).gamma == printed.gamma,
            format!("pointwise row {}", tags(&row.f))
        );
        println!("{} -> {}", tags(&row.f), tags(&row.g));
    }

    let ms = minisquare(&field, &id);
    ensure_match!(
        ms.entries == fx.identity_minisquare.entries
            && ms.theta_exponents == fx.identity_minisquare.theta_exponents
            && ms.scaled_theta_exponents == fx.identity_minisquare.scaled_theta_exponents,
        "identity minisquare"
    );
    println!();
    print_grid(&ms.entries);
    Ok(0)
}

/// Two-qutrit example: coordinate table, parametric square and its
/// standardization, the transformed square with its restoring triple, and the
/// scaling fixed point.
pub fn a2() -> Result<u8> {
    let fx = fixtures::two_qutrit();
    let field = fx.field.build()?;

    let svectors: Vec<Vec<u64>> = (0..field.d()).map(|i| field.svector(i).to_vec()).collect();
    ensure_match!(svectors == fx.svectors, "coordinate table");
    print_rows(&svectors);

    let pc = ParametricCurve::new(
        mat(field.p(), &fx.parametric.gamma_alpha),
        mat(field.p(), &fx.parametric.gamma_beta),
    );
    let explicit = parametric_to_explicit(&field, &pc)?;
    ensure_match!(
        explicit.gamma == mat(field.p(), &fx.parametric.explicit_gamma),
        "explicit adjacency"
    );
    println!();
    print_rows(&pc.gamma_alpha.to_rows());
    println!();
    print_rows(&pc.gamma_beta.to_rows());
    println!();
    print_rows(&explicit.gamma.to_rows());

    let tilde = nonstandard_ls(&field, &pc)?;
    ensure_match!(tilde.grid == fx.parametric_nonstandard_square, "parametric square");
    println!();
    print_grid(&tilde.grid);

    let (standardized, triple) = standardize(&field, &tilde, &pc)?;
    ensure_match!(
        triple.row_perm == fx.standardize_row_col_perm
            && triple.col_perm == fx.standardize_row_col_perm,
        "standardizing permutation"
    );
    ensure_match!(
        standardized.grid == standard_ls(&field, &explicit)?.grid,
        "standardized square"
    );
    println!();
    print_perm(&triple.row_perm);
    println!();
    print_grid(&standardized.grid);

    let image = cnot_on_curve(&field, &explicit, &fx.cnot);
    ensure_match!(image.gamma == mat(field.p(), &fx.cnot_gamma), "transformed adjacency");
    println!();
    print_rows(&image.gamma.to_rows());

    let tilde_g = nonstandard_ls(&field, &cnot_parametric(&field, &explicit, &fx.cnot))?;
    ensure_match!(tilde_g.grid == fx.cnot_nonstandard_square, "transformed square");
    println!();
    print_grid(&tilde_g.grid);

    let restore = perms_to_original(&field, &fx.cnot);
    ensure_match!(
        restore.row_perm == fx.to_original.row_perm
            && restore.col_perm == fx.to_original.col_perm
            && restore.sym_perm == fx.to_original.sym_perm,
        "restoring permutations"
    );
    ensure_match!(
        apply_triple(&tilde_g, &restore)?.grid == standard_ls(&field, &explicit)?.grid,
        "restoring the original square"
    );
    println!();
    print_perm(&restore.row_perm);
    print_perm(&restore.col_perm);
    print_perm(&restore.sym_perm);

    let sc = &fx.scaling_transform;
    let op = LocalOp::new(LocalKind::S, sc.k.clone());
    ensure_match!(
        op.t_map(&field, 0) == Mat::diag(field.p(), &sc.t_diag),
        "scaling map diagonal"
    );
    let fixed = scalar_curve(&field, sc.curve_exponent);
    let gm = generator_matrix(&field, &fixed, &sc.generator_labels)
        .map_err(|err| anyhow::anyhow!("{err}"))?;
    ensure_match!(
        gm.left == mat(field.p(), &sc.generator_left)
            && gm.right == mat(field.p(), &sc.generator_right),
        "generator matrix"
    );
    let moved = apply_local_to_generator(&gm, &op.k_matrix(&field));
    ensure_match!(
        moved.left == mat(field.p(), &sc.transformed_left)
            && moved.right == mat(field.p(), &sc.transformed_right),
        "transformed generator matrix"
    );
    ensure_match!(
        curve_from_generator(&moved).map_err(|err| anyhow::anyhow!("{err}"))?.gamma
            == fixed.gamma,
        "scaling fixed point"
    );
    println!();
    print_rows(&[sc.t_diag.clone()]);
    println!();
    print_rows(&gm.rows());
    println!();
    print_rows(&moved.rows());
    Ok(0)
}

/// Non-commutative plane: adjacency, square, minisquare, and the verdict.
pub fn hall() -> Result<u8> {
    let fx = fixtures::hall_plane();
    let field = fx.field.build()?;
    let curve = curve_from_phi(&field, &fx.phi)?;
    ensure_match!(curve.gamma == mat(field.p(), &fx.gamma), "adjacency");
    print_rows(&curve.gamma.to_rows());

    let sq = standard_ls(&field, &curve)?;
    ensure_match!(sq.grid == fx.square, "square");
    println!();
    print_grid(&sq.grid);

    let ms = minisquare(&field, &curve);
    ensure_match!(
        ms.entries == fx.minisquare.entries
            && ms.theta_exponents == fx.minisquare.theta_exponents
            && ms.scaled_theta_exponents == fx.minisquare.scaled_theta_exponents,
        "minisquare"
    );
    println!();
    print_grid(&ms.entries);

    let trace_verdict = minisquare_commutative(&field, &ms);
    let set_rejects = matches!(
        curve_commuting_set(&field, &curve),
        Err(MonomialError::NotCommutative)
    );
    ensure_match!(!trace_verdict && set_rejects, "commutativity verdict");
    println!();
    println!("not commutative");
    Ok(0)
}
