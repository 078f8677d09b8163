use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polymu::alternation::Class;
use polymu::cli::main_with;
use polymu::generator::{gen_formula, gen_lts, GenConfig};

fn polymu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polymu")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polymu-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const LTS: &str = "states 2\ninit 0\nlabel 0 p\ntrans 0 a 1\ntrans 1 a 1\n";

#[test]
fn check_least_fixpoint_loop_is_false() {
    let dir = scratch("mu");
    let lts = write(&dir, "t.lts", LTS);
    let o = polymu(&["check", "-e", "mu X. X", &lts]);
    assert_eq!(stdout(&o), "false\n");
    assert_eq!(o.status.code(), Some(0));
    let o = polymu(&["check", "-e", "mu X. X", &lts, "--status"]);
    assert_eq!(o.status.code(), Some(1));
    let o = polymu(&["check", "-e", "nu X. <a>_1 X", &lts, "--status", "--engine", "game"]);
    assert_eq!((stdout(&o).as_str(), o.status.code()), ("true\n", Some(0)));
}

#[test]
fn check_input_errors() {
    let dir = scratch("errors");
    let lts = write(&dir, "t.lts", LTS);
    let o = polymu(&["check", "/definitely/missing.mu", &lts]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.mu"));
    let o = polymu(&["check", "-e", "p(1) &", &lts]);
    assert_eq!(o.status.code(), Some(3));
    let o = polymu(&["check", "-e", "p(5)", &lts]);
    assert_eq!(o.status.code(), Some(3));
    let o = polymu(&["check", "-e", "p(5)", &lts, "--max-arity", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = polymu(&["check", "-e", "p(1)", &lts, "--tuple", "0,9"]);
    assert_eq!(o.status.code(), Some(3));
    let o = polymu(&["check"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn check_both_engines_on_random_instances() {
    let dir = scratch("both");
    let mut sink = Vec::new();
    for seed in 0..200 {
        let mut cfg = GenConfig::new(1 + seed as usize % 3, seed as usize % 3, Class::Sigma).with_seed(seed);
        cfg.acts = vec!["a".into(), "b".into()];
        cfg.states = 5;
        let f = write(&dir, "f.mu", &gen_formula(&cfg).unwrap().to_string());
        let l = write(&dir, "t.lts", &gen_lts(&cfg).unwrap().to_string());
        let code = main_with(["polymu", "check", &f, &l, "--both"], &mut sink, &mut Vec::new());
        assert_eq!(code, 0, "seed {seed}");
    }
    let text = String::from_utf8(sink).unwrap();
    assert_eq!(text.matches("naive:").count(), 200);
    assert!(!text.contains("disagree"));
}

#[test]
fn analyze_alternation_example() {
    let o = polymu(&[
        "analyze",
        "-e",
        "mu X. p(2) | <b>_1 (nu Y. q(1) & (nu Y'. (mu Z. Y' | <a>_1 Z)) & [b]_2 Y)",
    ]);
    let text = stdout(&o);
    for line in [
        "ad X = 3 (mu)",
        "ad Y = 2 (nu)",
        "ad Y' = 2 (nu)",
        "ad Z = 1 (mu)",
        "alternation type (mu, nu, mu)",
    ] {
        assert!(text.contains(line), "{line} missing from\n{text}");
    }
    assert!(text.contains("Sigma^2_3"));
}

#[test]
fn encode_and_normalize() {
    let o = polymu(&["encode", "-e", "mu X. X"]);
    let lts = polymu::lts::parse_lts(&stdout(&o)).unwrap();
    assert_eq!(lts.num_states(), 2);

    let o = polymu(&["encode", "--fixed", "-e", "mu X. X"]);
    assert_eq!(polymu::lts::parse_lts(&stdout(&o)).unwrap().num_states(), 4);
    let o = polymu(&["encode", "--fixed", "-e", "{1<-2, 2<-3, 3<-1} p(1)"]);
    assert_eq!(o.status.code(), Some(3));

    let text = "nu X. {1<->2} (p(1) & <a>_2 X)";
    let pretty = polymu::formula::parse_formula(text).unwrap().to_string();
    let o = polymu(&["normalize", "-e", text]);
    assert_eq!(stdout(&o), format!("{pretty}\n"));
    let o = polymu(&["normalize", "-e", "{1<-2, 2<-3, 3<-1} p(1)"]);
    assert!(polymu::formula::parse_formula(&stdout(&o)).unwrap().is_normalized());
}

#[test]
fn diagonal_formulas() {
    let o = polymu(&["diagonal", "--k", "1", "--m", "2", "--props", "p"]);
    let phi = polymu::formula::parse_formula(&stdout(&o)).unwrap();
    assert_eq!(phi.arity(), 2);
    let o = polymu(&["diagonal", "--k", "2", "--m", "1", "--fixed"]);
    let phi = polymu::formula::parse_formula(&stdout(&o)).unwrap();
    assert!(phi.propositions().iter().all(|p| polymu::fixed_sig::PROP1.contains(p)));
    let o = polymu(&["diagonal", "--k", "0", "--m", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn diagcheck_sweeps() {
    let o = polymu(&["diagcheck", "--k", "1", "--m", "1", "--count", "100", "--seed", "7"]);
    assert!(stdout(&o).contains("passed 100/100"), "{}", stdout(&o));
    assert!(stdout(&o).contains("seed=7"));
    assert_eq!(o.status.code(), Some(0));

    let o = polymu(&[
        "diagcheck",
        "--k",
        "2",
        "--m",
        "2",
        "--fixed",
        "--count",
        "4",
        "--seed",
        "7",
    ]);
    assert!(stdout(&o).contains("passed 4/4"), "{}", stdout(&o));

    let o = polymu(&["diagcheck", "--k", "1", "--m", "1", "--count", "0"]);
    assert!(stdout(&o).contains("passed 0/0"));
    assert_eq!(o.status.code(), Some(0));

    let o = polymu(&[
        "diagcheck",
        "--k",
        "1",
        "--m",
        "1",
        "--class",
        "pi",
        "--both",
        "-e",
        "nu X. p(1) & <a>_1 X",
    ]);
    assert!(stdout(&o).contains("xor: ok"), "{}", stdout(&o));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bisim_and_games() {
    let dir = scratch("bisim");
    let lts = write(
        &dir,
        "t.lts",
        "states 3\ninit 0\ntrans 0 a 0\ntrans 1 a 2\ntrans 2 a 1\n",
    );
    assert_eq!(stdout(&polymu(&["bisim", &lts, "0", "1"])), "true\n");
    assert_eq!(
        stdout(&polymu(&["bisim", &lts, "0", "2", "--engine", "game"])),
        "true\n"
    );
    assert_eq!(stdout(&polymu(&["bisim", &lts])), "{0, 1, 2}\n");

    let game = stdout(&polymu(&["gen", "game", "--seed", "11", "--positions", "5"]));
    let g = write(&dir, "g.txt", &game);
    let o = polymu(&["solve-game", &g, "--exhaustive"]);
    assert!(stdout(&o).contains("exhaustive enumeration agrees"));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn gen_is_reproducible() {
    let args = ["gen", "formula", "--seed", "5", "--count", "3", "--k", "3", "--m", "2"];
    let a = stdout(&polymu(&args));
    assert_eq!(a, stdout(&polymu(&args)));
    assert_eq!(a.lines().count(), 3);
    let l = stdout(&polymu(&["gen", "lts", "--seed", "5"]));
    assert!(polymu::lts::parse_lts(&l).is_ok());
}

#[test]
fn selftest_passes() {
    let o = polymu(&["selftest", "--count", "10", "--seed", "3"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.matches("passed").count(), 6);
}
