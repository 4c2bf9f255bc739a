//! Structural properties of squares and permutation triples: Latin-ness is
//! preserved under triples, orthogonality is isotopy-invariant, and the two
//! square constructions agree where they overlap.

use mols_core::curves::{desarguesian_bundle, scalar_curve, ParametricCurve};
use mols_core::field::Field;
use mols_core::latin::{
    apply_triple, are_orthogonal, collisions, is_complete_mols, is_complete_mols_sequential,
    nonstandard_ls, standard_ls, standardize, LatinSquare, PermutationTriple,
};
use proptest::prelude::*;

fn perm_strategy(d: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..d).collect::<Vec<usize>>()).prop_shuffle()
}

fn triple_strategy(d: usize) -> impl Strategy<Value = PermutationTriple> {
    (perm_strategy(d), perm_strategy(d), perm_strategy(d), any::<bool>()).prop_map(
        |(row_perm, col_perm, sym_perm, transpose_first)| PermutationTriple {
            row_perm,
            col_perm,
            sym_perm,
            transpose_first,
        },
    )
}

fn gf8_square(e: usize) -> LatinSquare {
    let f = Field::build(2, 3, None).unwrap();
    standard_ls(&f, &scalar_curve(&f, e)).unwrap()
}

proptest! {
    #[test]
    fn triples_preserve_latin_property(t in triple_strategy(8), e in 1usize..8) {
        let moved = apply_triple(&gf8_square(e), &t).unwrap();
        prop_assert!(moved.is_latin());
    }

    #[test]
    fn row_and_column_permutations_commute(
        rows in perm_strategy(8),
        cols in perm_strategy(8),
        e in 1usize..8,
    ) {
        let d = 8;
        let id: Vec<usize> = (0..d).collect();
        let row_only = PermutationTriple {
            row_perm: rows.clone(),
            col_perm: id.clone(),
            sym_perm: id.clone(),
            transpose_first: false,
        };
        let col_only = PermutationTriple {
            row_perm: id.clone(),
            col_perm: cols.clone(),
            sym_perm: id.clone(),
            transpose_first: false,
        };
        let sq = gf8_square(e);
        let rc = apply_triple(&apply_triple(&sq, &row_only).unwrap(), &col_only).unwrap();
        let cr = apply_triple(&apply_triple(&sq, &col_only).unwrap(), &row_only).unwrap();
        prop_assert_eq!(rc.grid, cr.grid);
    }

    #[test]
    fn common_triple_preserves_orthogonality(t in triple_strategy(8)) {
        // Isotopy invariance: one shared triple moves a complete set to a
        // complete set.
        let f = Field::build(2, 3, None).unwrap();
        let squares: Vec<LatinSquare> = desarguesian_bundle(&f)
            .iter()
            .map(|c| standard_ls(&f, c).unwrap())
            .collect();
        let moved: Vec<LatinSquare> = squares
            .iter()
            .map(|s| apply_triple(s, &t).unwrap())
            .collect();
        prop_assert!(is_complete_mols(&moved).unwrap());
    }

    #[test]
    fn identity_triple_is_neutral(e in 1usize..8) {
        let sq = gf8_square(e);
        let moved = apply_triple(&sq, &PermutationTriple::identity(8)).unwrap();
        prop_assert_eq!(moved.grid, sq.grid);
    }
}

#[test]
fn sequential_order_matches_simultaneous_application() {
    // transpose → rows → columns → symbols, one at a time, agrees with the
    // all-at-once definition.
    let f = Field::build(2, 3, None).unwrap();
    let sq = standard_ls(&f, &scalar_curve(&f, 3)).unwrap();
    let d = 8;
    let id: Vec<usize> = (0..d).collect();
    let t = PermutationTriple {
        row_perm: vec![1, 0, 3, 2, 5, 4, 7, 6],
        col_perm: vec![7, 6, 5, 4, 3, 2, 1, 0],
        sym_perm: vec![2, 0, 1, 4, 3, 6, 5, 7],
        transpose_first: true,
    };
    let all_at_once = apply_triple(&sq, &t).unwrap();

    let step = |s: &LatinSquare, t: &PermutationTriple| apply_triple(s, t).unwrap();
    let transposed = step(
        &sq,
        &PermutationTriple {
            row_perm: id.clone(),
            col_perm: id.clone(),
            sym_perm: id.clone(),
            transpose_first: true,
        },
    );
    let rows = step(
        &transposed,
        &PermutationTriple {
            row_perm: t.row_perm.clone(),
            col_perm: id.clone(),
            sym_perm: id.clone(),
            transpose_first: false,
        },
    );
    let cols = step(
        &rows,
        &PermutationTriple {
            row_perm: id.clone(),
            col_perm: t.col_perm.clone(),
            sym_perm: id.clone(),
            transpose_first: false,
        },
    );
    let syms = step(
        &cols,
        &PermutationTriple {
            row_perm: id.clone(),
            col_perm: id,
            sym_perm: t.sym_perm.clone(),
            transpose_first: false,
        },
    );
    assert_eq!(all_at_once.grid, syms.grid);
}

#[test]
fn nonstandard_construction_generalizes_standard() {
    // With the first parameter map set to the identity encoding, the
    // parametric construction reproduces the standard square.
    for (p, n) in [(2u64, 2usize), (2, 3), (3, 2)] {
        let f = Field::build(p, n, None).unwrap();
        for e in 1..f.d() {
            let curve = scalar_curve(&f, e);
            let pc = ParametricCurve::new(f.c_inv_mat(), curve.gamma.clone());
            assert_eq!(
                nonstandard_ls(&f, &pc).unwrap().grid,
                standard_ls(&f, &curve).unwrap().grid,
                "field ({p},{n}), exponent {e}"
            );
        }
    }
}

#[test]
fn standardize_agrees_with_explicit_form_across_bundles() {
    for (p, n) in [(2u64, 3usize), (3, 2)] {
        let f = Field::build(p, n, None).unwrap();
        for e in 1..f.d() {
            let curve = scalar_curve(&f, e);
            // A genuinely nonstandard encoding of the same map: α(λ) = σ·λ,
            // β(λ) = f(σ·λ).
            let sigma = scalar_curve(&f, 1);
            let composed = mols_core::curves::compose(&f, &curve, &sigma);
            let pc = ParametricCurve::new(
                sigma.gamma.clone(),
                composed.gamma.clone(),
            );
            let tilde = nonstandard_ls(&f, &pc).unwrap();
            let (standard, triple) = standardize(&f, &tilde, &pc).unwrap();
            assert!(standard.is_standard());
            assert_eq!(standard.grid, standard_ls(&f, &curve).unwrap().grid);
            let moved = apply_triple(&tilde, &triple).unwrap();
            assert_eq!(moved.grid, standard.grid);
        }
    }
}

#[test]
fn desarguesian_bundles_are_complete_mols() {
    for (p, n) in [(2u64, 2usize), (3, 2), (2, 3)] {
        let f = Field::build(p, n, None).unwrap();
        let squares: Vec<LatinSquare> = desarguesian_bundle(&f)
            .iter()
            .map(|c| standard_ls(&f, c).unwrap())
            .collect();
        assert_eq!(squares.len(), f.d() - 1);
        assert!(is_complete_mols(&squares).unwrap());
        assert!(is_complete_mols_sequential(&squares).unwrap());
    }
}

#[test]
fn collision_diagnostics_count_pair_multiplicities() {
    let a = gf8_square(1);
    assert!(!are_orthogonal(&a, &a).unwrap());
    let cs = collisions(&a, &a);
    // Pairing a square with itself puts each of the d² cells on a diagonal
    // pair (s, s), so every reported pair has multiplicity d.
    assert_eq!(cs.len(), 8);
    assert!(cs.iter().all(|&(x, y, m)| x == y && m == 8));

    let b = gf8_square(2);
    assert!(are_orthogonal(&a, &b).unwrap());
    assert!(collisions(&a, &b).is_empty());
}
