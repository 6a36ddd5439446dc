use std::path::PathBuf;

use kgrid::format::parse_puzzle;
use kgrid::grid::{Coordinate, NumberedGrid};
use kgrid::oracle::{enumerate_solutions, generate, GenMode, GenSpec, Symmetry};
use kgrid::state::PuzzleState;
use kgrid::tau::{apply_builder, run_tau, TauStatus};
use kgrid::words::{
    count_configs, enumerate_feasible, enumerate_phi_k, omega_star, ConfigWord, OmegaStar, WordSet,
};

fn fixture(name: &str) -> NumberedGrid {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    parse_puzzle(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn words(list: &[&str]) -> WordSet {
    list.iter()
        .map(|w| w.parse::<ConfigWord>().unwrap())
        .collect()
}

#[test]
fn worked_example_words() {
    let g = fixture("worked-example.kgrid");
    let p = Coordinate::new(0, 0);
    let q = Coordinate::new(2, 1);
    let start = PuzzleState::new(g);
    let at_p = enumerate_feasible(&start, p).unwrap();
    assert_eq!(at_p, words(&["12"]));
    // Both doubles survive the neighbor-residual filter and die later.
    let phi = enumerate_phi_k(2, 2).unwrap();
    assert!(phi.contains(&"11".parse().unwrap()));
    assert!(phi.contains(&"22".parse().unwrap()));

    let after = apply_builder(&start, p, &"12".parse().unwrap()).unwrap();
    let at_q = enumerate_feasible(&after, q).unwrap();
    assert_eq!(at_q, words(&["11223", "11224", "11234", "12234"]));
    assert_eq!(
        omega_star(&after, q).unwrap(),
        OmegaStar::Guaranteed("12".parse().unwrap())
    );
}

#[test]
fn pinwheel_like_has_no_guaranteed_word() {
    let g = fixture("pinwheel-like.kgrid");
    let state = PuzzleState::new(g.clone());
    for n in g.nodes() {
        assert_eq!(
            omega_star(&state, n.coord).unwrap(),
            OmegaStar::Guaranteed(ConfigWord::zero()),
            "{}",
            n.coord
        );
    }
    let out = run_tau(&g);
    assert_eq!(out.status, TauStatus::Stalled);
    assert!(out.stall_holds());
    assert!(enumerate_solutions(&g, None).is_unique());
}

#[test]
fn trace_replays_and_every_step_is_forced() {
    let mut checked = 0;
    for seed in 0..150u64 {
        let spec = GenSpec {
            seed,
            width: 4,
            height: 4,
            node_density: 0.55,
            k: 1 + (seed % 3) as u32,
            mode: if seed % 2 == 0 {
                GenMode::SolvableByConstruction
            } else {
                GenMode::Random
            },
            symmetry: Symmetry::None,
        };
        let g = generate(&spec).unwrap();
        let out = run_tau(&g);
        let all = enumerate_solutions(&g, None);
        assert!(all.exhausted);
        let mut state = PuzzleState::new(g.clone());
        for step in &out.trace {
            let before = state.total_residual();
            state = apply_builder(&state, step.node, &step.word).unwrap();
            assert_eq!(state.digest(), step.digest);
            assert!(state.total_residual() < before);
            for (edge, m) in &step.added {
                for sol in &all.solutions {
                    assert!(
                        sol.get(edge).copied().unwrap_or(0) >= state.multiplicity(edge),
                        "seed {seed}: {edge} x{m}"
                    );
                }
            }
        }
        assert_eq!(state, out.final_state);
        match out.status {
            TauStatus::Solved => {
                assert!(all.is_unique());
                assert_eq!(all.solutions[0], state.connections());
            }
            TauStatus::Unsolvable => assert!(all.is_empty()),
            TauStatus::Stalled => assert!(out.stall_holds()),
        }
        checked += 1;
    }
    assert_eq!(checked, 150);
}

#[test]
fn count_identities() {
    assert_eq!(count_configs(7, 4, 2), 4);
    assert_eq!(count_configs(20, 4, 10), 891);
    // Magnitude 3 over four neighbors with k = 2 has 16 configurations; 4
    // is the k = 1 value.
    assert_eq!(count_configs(3, 4, 2), 16);
    assert_eq!(count_configs(3, 4, 1), 4);
    for k in 1..=8u32 {
        for i in 1..=u64::from(k) + 1 {
            let n = 4 * k - (i as u32 - 1);
            assert_eq!(count_configs(n, 4, k), i * (i + 1) * (i + 2) / 6);
            let n3 = 3 * k - (i as u32 - 1);
            assert_eq!(count_configs(n3, 3, k), i * (i + 1) / 2);
        }
    }
    for n in 1..=12 {
        for k in 1..=4 {
            let listed = enumerate_phi_k(n, k).map(|s| s.len() as u64).unwrap_or(0);
            assert_eq!(listed, count_configs(n, 4, k), "n={n} k={k}");
        }
    }
}

#[test]
fn generating_function_rows_sum_to_powers() {
    for r in 1..=4u32 {
        for k in 1..=6u32 {
            let total: u64 = (0..=r * k).map(|n| count_configs(n, r, k)).sum();
            assert_eq!(total, u64::from(k + 1).pow(r));
        }
    }
}
