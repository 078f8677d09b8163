//! The city-hopping formula on a four-city graph.

use polymu::bisim::bisimulation_classes;
use polymu::formula::{parse_formula, Formula};
use polymu::lts::{parse_lts, Lts};
use polymu::semantics::{evaluate, Environment};
use polymu::{holds, Engine};

fn fixture() -> (Formula, Lts) {
    let phi = parse_formula(include_str!("fixtures/flight.mu")).unwrap();
    let lts = parse_lts(include_str!("fixtures/cities.lts")).unwrap();
    (phi, lts)
}

fn sim(var: &str) -> String {
    format!("nu {var}. (warm(1) -> warm(2)) & (safe(1) -> safe(2)) & [flight]_1 <flight>_2 {var} & {{1<->2}} {var}")
}

#[test]
fn fixture_shape() {
    let (phi, lts) = fixture();
    assert_eq!(phi.arity(), 3);
    assert_eq!(phi.binders(), vec!["B1", "X", "B2", "B3"]);
    assert!(phi.is_closed());
    assert_eq!(lts.num_states(), 4);
}

#[test]
fn copy_reads_the_named_pebble() {
    // {3<-1}: position 1 reads pebble 3, so the conjunct compares u with t.
    let (_, lts) = fixture();
    let blocks = bisimulation_classes(&lts);
    let phi = parse_formula(&format!("{{3<-1}} ({})", sim("B"))).unwrap();
    for s in lts.states() {
        for t in lts.states() {
            for u in lts.states() {
                let got = holds(Engine::Naive, &phi, &lts, &[s, t, u]).unwrap();
                assert_eq!(got, blocks[u] == blocks[t], "({s},{t},{u})");
            }
        }
    }
    assert!(holds(Engine::Game, &phi, &lts, &[0, 1, 1]).unwrap());
    assert!(!holds(Engine::Game, &phi, &lts, &[1, 1, 0]).unwrap());
}

#[test]
fn least_fixpoint_collapses_through_the_copy() {
    // {2<-3}X makes positions 2 and 3 agree, and X at such a tuple only
    // depends on itself, so the least fixpoint (and the formula) is empty.
    let (phi, lts) = fixture();
    let rel = evaluate(&phi, &lts, 3, &Environment::new()).unwrap();
    assert!(rel.is_empty());
    for s in lts.states() {
        for t in lts.states() {
            for u in lts.states() {
                assert!(!holds(Engine::Game, &phi, &lts, &[s, t, u]).unwrap());
            }
        }
    }
}

#[test]
fn inner_trip_without_the_copy() {
    // Dropping the copy leaves a satisfiable round-trip property.
    let text = format!(
        "<flight>_2 mu X. warm(2) & safe(2) & <flight>_1 ({}) & ({{3<-1}} ({}) | [flight]_2 X)",
        sim("B2"),
        sim("B3")
    );
    let phi = parse_formula(&text).unwrap();
    let (_, lts) = fixture();
    let rel = evaluate(&phi, &lts, 3, &Environment::new()).unwrap();
    assert!(!rel.is_empty());
    for t in rel.iter() {
        assert!(holds(Engine::Game, &phi, &lts, &t).unwrap());
    }
}
