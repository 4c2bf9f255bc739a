//! The permutation recipes attached to controlled-add and scaling operations,
//! checked by applying each triple and comparing whole squares against the
//! golden fixtures.

use mols_core::curves::{
    curve_from_generator, parametric_to_explicit, scalar_curve, GeneratorMatrix,
    ParametricCurve,
};
use mols_core::fixtures::{self, mat};
use mols_core::latin::{apply_triple, nonstandard_ls, standard_ls, standardize, LatinSquare};
use mols_core::matrix::Mat;
use mols_core::transforms::{
    apply_local_to_generator, cnot_on_curve, cnot_parametric, perms_nonstandard_to_standard,
    perms_standard_to_standard, perms_to_original, LocalKind, LocalOp,
};

fn sq(grid: &[Vec<usize>]) -> LatinSquare {
    LatinSquare::from_grid(grid.to_vec()).unwrap()
}

#[test]
fn three_qubit_nonstandard_to_standard_triple() {
    let fx = fixtures::three_qubit();
    let f = fx.field.build().unwrap();
    let triple = perms_nonstandard_to_standard(&f, &fx.cnot);
    assert_eq!(triple.row_perm, fx.nonstandard_to_standard.row_perm);
    assert_eq!(triple.col_perm, fx.nonstandard_to_standard.col_perm);
    assert_eq!(triple.sym_perm, fx.nonstandard_to_standard.sym_perm);

    let moved = apply_triple(&sq(&fx.cnot_nonstandard_square), &triple).unwrap();
    assert_eq!(moved.grid, fx.cnot_standard_square);
}

#[test]
fn three_qubit_to_original_triple() {
    let fx = fixtures::three_qubit();
    let f = fx.field.build().unwrap();
    let triple = perms_to_original(&f, &fx.cnot);
    assert_eq!(triple.row_perm, fx.to_original.row_perm);
    assert_eq!(triple.col_perm, fx.to_original.col_perm);
    assert_eq!(triple.sym_perm, fx.to_original.sym_perm);

    let moved = apply_triple(&sq(&fx.cnot_nonstandard_square), &triple).unwrap();
    assert_eq!(moved.grid, fx.addition_square);
}

#[test]
fn three_qubit_standard_to_standard_triple() {
    let fx = fixtures::three_qubit();
    let f = fx.field.build().unwrap();
    let triple = perms_standard_to_standard(&f, &fx.cnot);
    assert_eq!(triple.row_perm, fx.standard_to_standard.row_perm);
    assert_eq!(triple.col_perm, fx.standard_to_standard.col_perm);
    assert_eq!(triple.sym_perm, fx.standard_to_standard.sym_perm);

    let moved = apply_triple(&sq(&fx.cnot_standard_square), &triple).unwrap();
    assert_eq!(moved.grid, fx.addition_square);
}

#[test]
fn standard_to_standard_triple_is_curve_independent() {
    // The same triple that fixes the identity-map squares also maps every
    // other scalar map's standard square to its transformed counterpart.
    let fx = fixtures::three_qubit();
    let f = fx.field.build().unwrap();
    let triple = perms_standard_to_standard(&f, &fx.cnot);
    for e in 1..f.d() {
        let before = standard_ls(&f, &scalar_curve(&f, e)).unwrap();
        let after = standard_ls(&f, &cnot_on_curve(&f, &scalar_curve(&f, e), &fx.cnot)).unwrap();
        let moved = apply_triple(&after, &triple).unwrap();
        assert_eq!(moved.grid, before.grid, "scalar exponent {e}");
    }
}

#[test]
fn two_qutrit_standardize_permutation() {
    let fx = fixtures::two_qutrit();
    let f = fx.field.build().unwrap();
    let pc = ParametricCurve::new(
        mat(f.p(), &fx.parametric.gamma_alpha),
        mat(f.p(), &fx.parametric.gamma_beta),
    );
    let tilde = nonstandard_ls(&f, &pc).unwrap();
    let (standard, triple) = standardize(&f, &tilde, &pc).unwrap();
    assert_eq!(triple.row_perm, fx.standardize_row_col_perm);
    assert_eq!(triple.col_perm, fx.standardize_row_col_perm);
    assert!(triple.sym_perm.iter().enumerate().all(|(i, &v)| i == v));

    let explicit = parametric_to_explicit(&f, &pc).unwrap();
    assert_eq!(standard.grid, standard_ls(&f, &explicit).unwrap().grid);
}

#[test]
fn two_qutrit_to_original_triple() {
    let fx = fixtures::two_qutrit();
    let f = fx.field.build().unwrap();
    let triple = perms_to_original(&f, &fx.cnot);
    assert_eq!(triple.row_perm, fx.to_original.row_perm);
    assert_eq!(triple.col_perm, fx.to_original.col_perm);
    assert_eq!(triple.sym_perm, fx.to_original.sym_perm);

    // Taking the transformed nonstandard square back to the original
    // standard square collapses standardization and inverse transform.
    let pc = ParametricCurve::new(
        mat(f.p(), &fx.parametric.gamma_alpha),
        mat(f.p(), &fx.parametric.gamma_beta),
    );
    let original = parametric_to_explicit(&f, &pc).unwrap();
    let transformed = cnot_parametric(&f, &original, &fx.cnot);
    let tilde = nonstandard_ls(&f, &transformed).unwrap();
    assert_eq!(tilde.grid, fx.cnot_nonstandard_square);
    let moved = apply_triple(&tilde, &triple).unwrap();
    assert_eq!(moved.grid, standard_ls(&f, &original).unwrap().grid);
}

#[test]
fn two_qutrit_scaling_fixed_point() {
    let fx = fixtures::two_qutrit();
    let f = fx.field.build().unwrap();
    let sc = &fx.scaling_transform;
    let op = LocalOp::new(LocalKind::S, sc.k.clone());

    // T-map of the first qudit matches the printed diagonal.
    let t = op.t_map(&f, 0);
    assert_eq!(t, Mat::diag(f.p(), &sc.t_diag));

    // Generator matrix over the printed generators, before and after.
    let curve = scalar_curve(&f, sc.curve_exponent);
    let gm = mols_core::curves::generator_matrix(&f, &curve, &sc.generator_labels).unwrap();
    assert_eq!(gm.left, mat(f.p(), &sc.generator_left));
    assert_eq!(gm.right, mat(f.p(), &sc.generator_right));

    let moved = apply_local_to_generator(&gm, &op.k_matrix(&f));
    assert_eq!(moved.left, mat(f.p(), &sc.transformed_left));
    assert_eq!(moved.right, mat(f.p(), &sc.transformed_right));

    // The transformed generators still describe the same map: a fixed point.
    let back = curve_from_generator(&moved).unwrap();
    assert_eq!(back.gamma, curve.gamma);
}

#[test]
fn generator_matrix_display_rows_interleave_blocks() {
    let fx = fixtures::two_qutrit();
    let f = fx.field.build().unwrap();
    let sc = &fx.scaling_transform;
    let gm = GeneratorMatrix {
        left: mat(f.p(), &sc.generator_left),
        right: mat(f.p(), &sc.generator_right),
    };
    assert_eq!(gm.rows(), vec![vec![1, 0, 1, 0], vec![0, 1, 0, 2]]);
}
