use polymu::alternation::Class;
use polymu::games::{check_via_game, solve_exhaustive, solve_parity, verify_solution};
use polymu::generator::{gen_formula, gen_game, gen_lts, GenConfig, ReplMode};
use polymu::semantics::check;

fn instance_config(seed: u64) -> GenConfig {
    let k = 1 + (seed % 3) as usize;
    let m = (seed / 3 % 3) as usize;
    let class = if seed.is_multiple_of(2) {
        Class::Sigma
    } else {
        Class::Pi
    };
    let mut cfg = GenConfig::new(k, m, class).with_seed(seed);
    cfg.budget = 12;
    cfg.states = 5;
    cfg.props = vec!["p".into(), "q".into()];
    cfg.acts = vec!["a".into(), "b".into()];
    cfg.repl = if seed.is_multiple_of(4) {
        ReplMode::Arbitrary
    } else {
        ReplMode::Simple
    };
    cfg
}

#[test]
fn naive_and_game_verdicts_agree() {
    for seed in 0..300 {
        let cfg = instance_config(seed);
        let phi = gen_formula(&cfg).unwrap();
        let lts = gen_lts(&cfg).unwrap();
        let k = cfg.k;
        let tuple: Vec<usize> = (0..k).map(|i| (seed as usize + i) % lts.num_states()).collect();
        let naive = check(&phi, &lts, &tuple).unwrap();
        let game = check_via_game(&phi, &lts, &tuple).unwrap();
        assert_eq!(naive, game, "seed {seed}: {phi} on\n{lts}at {tuple:?}");
    }
}

#[test]
fn solver_matches_exhaustive_enumeration() {
    for seed in 0..300 {
        let g = gen_game(seed, 5, 3);
        let sol = solve_parity(&g);
        assert_eq!(verify_solution(&g, &sol), Ok(()), "seed {seed}");
        assert_eq!(sol.winner, solve_exhaustive(&g), "seed {seed}: {g:?}");
    }
}
