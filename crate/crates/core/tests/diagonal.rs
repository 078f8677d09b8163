use polymu::alternation::Class;
use polymu::diagonal::{diagonal_check, encode_lts};
use polymu::fixed_sig::{diagonal_check_fixed, encode_lts_fixed, PROP1};
use polymu::generator::{gen_formula, GenConfig, ReplMode};
use polymu::Engine;

fn props() -> Vec<String> {
    vec!["q0".into(), "q1".into()]
}

fn config(k: usize, m: usize, class: Class, seed: u64) -> GenConfig {
    let mut cfg = GenConfig::new(k, m, class).with_seed(seed);
    cfg.props = props();
    cfg.budget = 10;
    cfg.repl = ReplMode::Simple;
    cfg
}

#[test]
fn xor_holds_on_random_formulas_both_classes() {
    for class in [Class::Sigma, Class::Pi] {
        for k in 1..=2 {
            for m in 1..=2 {
                for seed in 0..30 {
                    let phi = gen_formula(&config(k, m, class, seed)).unwrap();
                    let r = diagonal_check(&phi, k, m, &props(), class, Engine::Naive).unwrap();
                    assert!(r.ok(), "{class} k={k} m={m} seed={seed}: {phi} -> {r:?}");
                    if seed % 5 == 0 {
                        let g = diagonal_check(&phi, k, m, &props(), class, Engine::Game).unwrap();
                        assert_eq!(g, r, "engines disagree on {phi}");
                    }
                }
            }
        }
    }
}

#[test]
fn encoding_has_one_state_per_subformula() {
    for seed in 0..50 {
        let phi = gen_formula(&config(2, 2, Class::Sigma, seed)).unwrap();
        let lts = encode_lts(&phi, &props()).unwrap();
        assert_eq!(lts.num_states(), phi.subformulas().len());
        for s in lts.states() {
            assert_eq!(lts.labels(s).len(), 1);
        }
    }
}

fn fixed_config(k: usize, m: usize, class: Class, seed: u64) -> GenConfig {
    let mut cfg = config(k, m, class, seed);
    // Include names that collide with gadget labels.
    cfg.props = vec!["ppos".into(), "pdot".into(), "psw".into()];
    cfg
}

#[test]
fn fixed_signature_xor_on_random_formulas() {
    for class in [Class::Sigma, Class::Pi] {
        for k in 1..=2 {
            for m in 1..=2 {
                for seed in 0..(if k == 1 { 20 } else { 5 }) {
                    let phi = gen_formula(&fixed_config(k, m, class, seed)).unwrap();
                    let r = diagonal_check_fixed(&phi, k, m, class, Engine::Game).unwrap();
                    assert!(r.ok(), "{class} k={k} m={m} seed={seed}: {phi} -> {r:?}");
                    if seed % 10 == 0 && k == 1 {
                        let n = diagonal_check_fixed(&phi, k, m, class, Engine::Naive).unwrap();
                        assert_eq!(n, r, "engines disagree on {phi}");
                    }
                }
            }
        }
    }
}

#[test]
fn fixed_encoding_uses_only_the_fixed_signature() {
    for seed in 0..30 {
        let phi = gen_formula(&fixed_config(2, 2, Class::Sigma, seed)).unwrap();
        let lts = encode_lts_fixed(&phi, 2).unwrap();
        assert!(lts.num_states() > phi.subformulas().len());
        for s in lts.states() {
            assert!(lts.labels(s).len() <= 1);
            assert!(lts.labels(s).iter().all(|l| PROP1.contains(&l.as_str())));
        }
        assert_eq!(lts.actions(), ["a"]);
    }
}
