use proptest::prelude::*;

use orbent::entanglement::{
    classical_correlation, closest_separable_state, entanglement, evaluate, is_separable_m, is_separable_m_prime,
    mutual_information, nssr_entanglement_singlet, EntanglementOptions, SectorSpectrum,
};
use orbent::fock::BasisVariant;
use orbent::oracle::ppt_oracle;
use orbent::random::{random_spectrum, random_symmetric_state, rng};
use orbent::ssr::{FormulaVariant, Ssr};

const VARIANTS: [FormulaVariant; 4] = [
    FormulaVariant::NssrSinglet,
    FormulaVariant::NssrGeneral,
    FormulaVariant::PssrSymmetric,
    FormulaVariant::PssrGeneral,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn zero_exactly_on_separable_spectra(seed in any::<u64>(), k in 0usize..4) {
        let variant = VARIANTS[k];
        let spec = random_spectrum(&mut rng(seed), variant);
        let p = spec.p;
        let mut separable = is_separable_m(p[7], p[8], p[9], p[10]).unwrap();
        if variant.ssr() == Ssr::P {
            separable &= is_separable_m_prime(p[0], p[5], p[6], p[15]).unwrap();
        }
        let e = evaluate(&spec, variant).unwrap().value;
        prop_assert_eq!(e == 0.0, separable, "E = {}", e);
        prop_assert!(e >= 0.0);
    }

    #[test]
    fn number_rule_never_exceeds_parity_rule(seed in any::<u64>()) {
        let rho = random_symmetric_state(&mut rng(seed));
        let opts = EntanglementOptions::default();
        let n = entanglement(&rho, Ssr::N, &opts).unwrap().value;
        let p = entanglement(&rho, Ssr::P, &opts).unwrap().value;
        prop_assert!(n <= p + 1e-10);
    }

    #[test]
    fn closest_separable_state_is_ppt(seed in any::<u64>(), parity in any::<bool>()) {
        let rho = random_symmetric_state(&mut rng(seed));
        let ssr = if parity { Ssr::P } else { Ssr::N };
        let result = entanglement(&rho, ssr, &EntanglementOptions::default()).unwrap();
        let sigma = closest_separable_state(&result).unwrap();
        let ppt = ppt_oracle(&sigma);
        prop_assert!(ppt.is_ppt, "min eigenvalue {}", ppt.min_eigenvalue);
    }

    #[test]
    fn correlations_are_nonnegative(seed in any::<u64>()) {
        let rho = random_symmetric_state(&mut rng(seed));
        let opts = EntanglementOptions::default();
        prop_assert!(mutual_information(&rho) >= -1e-12);
        for ssr in [Ssr::N, Ssr::P] {
            prop_assert!(classical_correlation(&rho, ssr, &opts).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn pair_relabeling_leaves_the_value_unchanged(seed in any::<u64>(), k in 0usize..4) {
        let variant = VARIANTS[k];
        let spec = random_spectrum(&mut rng(seed), variant);
        let mut p = spec.p;
        p.swap(7, 8);
        p.swap(5, 6);
        let swapped = SectorSpectrum::from_weights(spec.basis, p).unwrap();
        let a = evaluate(&spec, variant).unwrap().value;
        let b = evaluate(&swapped, variant).unwrap().value;
        prop_assert!((a - b).abs() < 1e-14);
    }
}

/// Singlet-case spectrum with `t − r = gap` and `p₉ ≥ p₈`.
fn near_boundary(gap: f64) -> SectorSpectrum {
    let (p8, p10) = (0.1, 0.05);
    let p9 = p8 + 2.0 * p10 + gap;
    let mut p = [0.0; 16];
    p[7] = p8;
    p[8] = p9;
    p[9] = p10;
    p[10] = p10;
    let rest = (1.0 - p8 - p9 - 2.0 * p10) / 12.0;
    for (k, w) in p.iter_mut().enumerate() {
        if !(7..=10).contains(&k) {
            *w = rest;
        }
    }
    SectorSpectrum::from_weights(BasisVariant::Nssr, p).unwrap()
}

#[test]
fn entanglement_vanishes_continuously_at_the_boundary() {
    let path: Vec<f64> = (0..10).map(|k| 0.2 * 10f64.powf(-(k as f64))).collect();
    let values: Vec<f64> = path
        .iter()
        .map(|&gap| nssr_entanglement_singlet(&near_boundary(gap)).unwrap().value)
        .collect();
    for w in values.windows(2) {
        assert!(w[1] < w[0], "{values:?}");
    }
    assert!(*values.last().unwrap() <= 1e-8, "{values:?}");
    assert_eq!(nssr_entanglement_singlet(&near_boundary(0.0)).unwrap().value, 0.0);
}
