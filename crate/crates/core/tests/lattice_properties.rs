use orbent::entanglement::EntanglementOptions;
use orbent::fock::{build_operator, OperatorTag};
use orbent::free_fermion::{finite_chain_correlations, CorrelationMatrix};
use orbent::lattice::scan::SolvedChain;
use orbent::lattice::{spin_squared, Boundary, ChainSpec, SolverOptions};
use orbent::ssr::{detect_symmetries, Ssr};

const GRID: [(f64, f64); 6] = [(0.0, 0.0), (2.0, 0.0), (4.0, 1.0), (6.0, 3.0), (6.0, 3.5), (1.0, 2.5)];

fn solve(sites: usize, boundary: Boundary, u: f64, v: f64) -> SolvedChain {
    SolvedChain::new(
        &ChainSpec::half_filled(sites, boundary, 1.0, u, v),
        &SolverOptions::default(),
    )
    .unwrap()
}

#[test]
fn half_filled_ground_states_are_singlets() {
    for sites in [4, 6, 8] {
        for (u, v) in GRID {
            let chain = solve(sites, Boundary::Open, u, v);
            let s2 = spin_squared(chain.hamiltonian.basis(), &chain.ground.vector);
            assert!(s2.abs() <= 1e-8, "L={sites} U={u} V={v}: S2 = {s2:e}");
        }
    }
}

#[test]
fn pair_states_inherit_the_ground_state_symmetries() {
    let tags = [OperatorTag::Number, OperatorTag::SpinZ, OperatorTag::SpinSquared];
    let ops: Vec<_> = tags.iter().map(|t| build_operator(t).unwrap().matrix).collect();
    for (u, v) in GRID {
        let chain = solve(6, Boundary::Open, u, v);
        for (i, j) in [(0, 1), (2, 3), (1, 4), (5, 0)] {
            let rho = chain.rdm(i, j).unwrap();
            for op in &ops {
                let comm = (rho.matrix() * op - op * rho.matrix()).norm();
                assert!(comm <= 1e-8, "U={u} V={v} ({i},{j}): {comm:e}");
            }
            assert!(detect_symmetries(&rho, 1e-8).p10_eq_p11.holds);
        }
    }
}

#[test]
fn ring_bonds_are_translation_invariant() {
    let opts = EntanglementOptions::default();
    // The free ring with L = 8 is open-shell and has a degenerate ground state.
    let cases = [
        (6, 0.0, 0.0),
        (6, 4.0, 1.0),
        (6, 2.0, 2.0),
        (8, 4.0, 1.0),
        (8, 2.0, 2.0),
    ];
    for (sites, u, v) in cases {
        let chain = solve(sites, Boundary::Periodic, u, v);
        let values: Vec<f64> = (0..sites)
            .map(|i| chain.bond_entanglement(i, (i + 1) % sites, Ssr::N, &opts).unwrap())
            .collect();
        for e in &values {
            assert!((e - values[0]).abs() <= 1e-9, "L={sites} U={u} V={v}: {values:?}");
        }
    }
}

#[test]
fn open_shell_free_ring_is_reported_degenerate() {
    let chain = solve(8, Boundary::Periodic, 0.0, 0.0);
    assert_eq!(chain.ground.degeneracy, 4);
    assert!(chain.rdm(0, 1).is_err());
}

#[test]
fn free_chains_match_gaussian_states() {
    for (sites, boundary) in [(6, Boundary::Open), (6, Boundary::Periodic), (4, Boundary::Open)] {
        let chain = solve(sites, boundary, 0.0, 0.0);
        let full = finite_chain_correlations(sites, sites / 2, boundary).unwrap();
        for i in 0..sites {
            for j in 0..sites {
                if i == j {
                    continue;
                }
                let ed = chain.rdm(i, j).unwrap();
                let gaussian = CorrelationMatrix::restrict(&full, &[i, j]).pair_rdm().unwrap();
                let diff = (ed.matrix() - gaussian.matrix()).camax();
                assert!(diff <= 1e-10, "L={sites} {boundary:?} ({i},{j}): {diff:e}");
            }
        }
    }
}
