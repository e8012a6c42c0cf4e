use proptest::prelude::*;

use orbent::entanglement::{nssr_entanglement_singlet, oracle_value, sector_spectrum};
use orbent::fock::{BasisVariant, SymmetryEigenbasis};
use orbent::free_fermion::{analytic_weights, disentangling_distance, two_site_entanglement, two_site_rdm};
use orbent::ssr::{detect_symmetries, nssr_project, pssr_project, Ssr};

#[test]
fn half_filled_pairs_have_every_symmetry() {
    for l in 1..=12 {
        let rho = two_site_rdm(0.5, l).unwrap();
        for state in [nssr_project(&rho), pssr_project(&rho)] {
            let rep = detect_symmetries(&state, 1e-10);
            let flags = [
                rep.number.holds,
                rep.spin_z.holds,
                rep.spin_squared.holds,
                rep.reflection.holds,
                rep.p10_eq_p11.holds,
                rep.p1_eq_p16.holds,
                rep.b_vanishes.holds,
                rep.b_prime_vanishes.holds,
            ];
            assert!(flags.iter().all(|&f| f), "l = {l}: {rep:?}");
        }
    }
}

#[test]
fn formula_matches_the_oracle_on_a_grid() {
    let basis = SymmetryEigenbasis::new(BasisVariant::Nssr);
    let mut points = 0;
    for k in 1..=10 {
        let eta = 0.05 + 0.09 * (k - 1) as f64;
        for l in [1, 2, 3, 5, 8] {
            let rho = nssr_project(&two_site_rdm(eta, l).unwrap());
            let spec = sector_spectrum(&rho, &basis).unwrap();
            let formula = nssr_entanglement_singlet(&spec).unwrap().value;
            let oracle = oracle_value(&spec, Ssr::N).unwrap();
            assert!(
                (formula - oracle).abs() <= 1e-8,
                "eta {eta} l {l}: {formula} vs {oracle}"
            );
            points += 1;
        }
    }
    assert_eq!(points, 50);
}

#[test]
fn disentangled_distances_clear_the_boundary() {
    for k in 1..=9 {
        let eta = k as f64 / 10.0;
        let d = disentangling_distance(eta, None).unwrap();
        for l in d.l_min..=d.l_cap {
            let [p8, p9, p10] = analytic_weights(eta, l).unwrap();
            let margin = p8.min(p9) + 2.0 * p10 - p8.max(p9);
            assert!(margin > 1e-12, "eta {eta} l {l}: r - t = {margin:e}");
            assert_eq!(two_site_entanglement(eta, l).unwrap(), 0.0);
        }
        if d.l_min > 1 {
            assert!(two_site_entanglement(eta, d.l_min - 1).unwrap() > 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn particle_hole_mirror(eta in 0.02f64..0.98, l in 1usize..40) {
        let a = two_site_entanglement(eta, l).unwrap();
        let b = two_site_entanglement(1.0 - eta, l).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn analytic_weights_match_the_constructed_state(eta in 0.02f64..0.98, l in 1usize..40) {
        let rho = two_site_rdm(eta, l).unwrap();
        let basis = SymmetryEigenbasis::new(BasisVariant::Nssr);
        let w = |k: usize| rho.matrix_element(basis.vector(k), basis.vector(k)).re;
        let [p8, p9, p10] = analytic_weights(eta, l).unwrap();
        prop_assert!((w(7) - p8).abs() < 1e-12);
        prop_assert!((w(8) - p9).abs() < 1e-12);
        prop_assert!((w(9) - p10).abs() < 1e-12);
        prop_assert!((w(10) - p10).abs() < 1e-12);
    }
}
