use std::path::Path;
use std::process::Command;

use linres::combinatorics::{run_trial, Lemma, TrialParams};
use linres::games::{play_lintrees, GameConfig, PaperDelayer, RandomProver, StrategyParams};
use linres::gf::Budget;
use linres::instances::{code_distance, gen_instance, GenParams, GeneratorKind, LinearSystem};
use linres::refutations::{build_layered_refutation, Refutation};
use linres::robustness::{path_witness, robustness_profile};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["linres"];
    full.extend_from_slice(args);
    let code = linres::cli::run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn rs737(dir: &Path) -> String {
    let path = p(dir, "i.lsys");
    let (code, out, _) = run(&[
        "gen", "--kind", "rs", "--p", "7", "--n", "7", "--k", "3", "--seed", "1", "-o", &path,
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "d 5\n");
    path
}

#[test]
fn gen_then_distance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = rs737(dir.path());
    assert_eq!(
        run(&["distance", "-i", &inst]),
        (0, "5\n".into(), String::new())
    );
    let lib = gen_instance(
        GenParams {
            kind: GeneratorKind::ReedSolomon,
            p: 7,
            n: 7,
            k: 3,
            min_d: 1,
            seed: 1,
        },
        Budget::DEFAULT,
    )
    .unwrap();
    assert_eq!(
        std::fs::read_to_string(&inst).unwrap(),
        lib.system.to_text()
    );
}

#[test]
fn build_check_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let inst = rs737(dir.path());
    let proof = p(dir.path(), "p.lref");
    let (code, out, _) = run(&["build-layered", "-i", &inst, "-o", &proof]);
    assert_eq!(code, 0);
    assert!(out.starts_with("nodes "));
    assert_eq!(run(&["check", "-i", &inst, "-P", &proof]).0, 0);

    let sys = LinearSystem::parse(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    let lib = build_layered_refutation(&sys, &(0..7).collect::<Vec<_>>(), Budget::DEFAULT).unwrap();
    let text = std::fs::read_to_string(&proof).unwrap();
    assert_eq!(text, lib.refutation.to_text());

    // bump the right-hand side of the root's first equation
    let bad = p(dir.path(), "bad.lref");
    let corrupted = text.replacen("eq 1 1 1 1 1 1 1 | 0", "eq 1 1 1 1 1 1 1 | 1", 1);
    assert_ne!(corrupted, text);
    std::fs::write(&bad, corrupted).unwrap();
    let (code, out, _) = run(&["check", "-i", &inst, "-P", &bad]);
    assert_eq!(code, 1);
    assert!(out.starts_with("reject"), "{out}");

    std::fs::write(&bad, "kind binregdag\nroot 0\nnode 0\nsplit var 9\n").unwrap();
    let (code, out, _) = run(&["check", "-i", &inst, "-P", &bad]);
    assert_eq!(code, 1);
    assert!(out.starts_with("reject"), "{out}");
}

#[test]
fn sat_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = rs737(dir.path());
    assert_eq!(
        run(&["sat", "-i", &inst]),
        (0, "unsat\n".into(), String::new())
    );
    let sat = p(dir.path(), "s.lsys");
    std::fs::write(&sat, "p 5\ndims 1 3\n1 1 1 | 2\n").unwrap();
    assert_eq!(run(&["sat", "-i", &sat]).0, 1);
    assert_eq!(run(&["sat", "-i", &sat]).1, "sat 011\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["distance"]).0, 2);
    assert_eq!(
        run(&["gen", "--kind", "random", "--p", "5", "--n", "6", "--k", "3"]).0,
        2
    );
    assert_eq!(run(&["distance", "-i", "/nonexistent/file"]).0, 2);
    assert_eq!(run(&["verify-lemma", "nolemma", "--seed", "1"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn play_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let inst = rs737(dir.path());
    let (code, out, _) = run(&["play", "-i", &inst, "--seed", "4"]);
    assert_eq!(code, 0);
    let sys = LinearSystem::parse(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    let d = code_distance(sys.a(), Budget::DEFAULT).unwrap();
    let mut prover = RandomProver::new(4);
    let mut delayer = PaperDelayer::new(StrategyParams::for_distance(7, d), Budget::DEFAULT);
    let t = play_lintrees(&sys, &mut prover, &mut delayer, GameConfig::default()).unwrap();
    assert_eq!(out, t.to_text());

    let (_, sweep, _) = run(&["play", "-i", &inst, "--seed", "4", "--sweep", "3"]);
    let lines: Vec<&str> = sweep.lines().collect();
    assert_eq!(lines[0], "seed,n,k,d,rounds,branchings,reason");
    assert_eq!(lines[1], t.csv_row(4, 7, 3, d));
    assert_eq!(lines.len(), 4);
}

#[test]
fn verify_lemma_rows() {
    let (code, out, _) = run(&["verify-lemma", "implclaim", "--seed", "3", "--trials", "4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "seed,params,outcome,elapsed");
    for (i, line) in lines[1..].iter().enumerate() {
        let row = run_trial(
            Lemma::ImplClaim,
            TrialParams::defaults(Lemma::ImplClaim, 5),
            3 + i as u64,
            Budget::DEFAULT,
        )
        .unwrap();
        assert_eq!(*line, format!("{},{},pass,-", row.seed, row.params));
    }
    let (_, timed, _) = run(&[
        "verify-lemma",
        "addcomb",
        "--seed",
        "0",
        "--trials",
        "2",
        "--timing",
    ]);
    for line in timed.lines().skip(1) {
        let el = line.rsplit(',').next().unwrap();
        assert!(el.parse::<f64>().is_ok(), "{line}");
    }
}

#[test]
fn scan_and_path_witness_match_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let inst = p(dir.path(), "r.lsys");
    assert_eq!(
        run(&[
            "gen", "--kind", "random", "--p", "5", "--n", "6", "--k", "3", "--seed", "2", "-o",
            &inst
        ])
        .0,
        0
    );
    let sys = LinearSystem::parse(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    let (code, out, _) = run(&["robustness-scan", "-i", &inst, "--s-max", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        robustness_profile(&sys, 2, Budget::DEFAULT)
            .unwrap()
            .to_csv()
    );

    let proof = p(dir.path(), "r.lref");
    assert_eq!(run(&["build-layered", "-i", &inst, "-o", &proof]).0, 0);
    let t = Refutation::parse(&std::fs::read_to_string(&proof).unwrap(), sys.field(), 6).unwrap();
    let x = [false, true, false, true, false, true];
    let w = path_witness(&t, &sys, &x, 1, Budget::DEFAULT).unwrap();
    assert_eq!(
        run(&[
            "path-witness",
            "-i",
            &inst,
            "-P",
            &proof,
            "-x",
            "010101",
            "-s",
            "1"
        ])
        .1,
        w.to_text()
    );
    let (code, out, _) = run(&[
        "path-witness",
        "-i",
        &inst,
        "-P",
        &proof,
        "-x",
        "010101",
        "-s",
        "9",
    ]);
    assert_eq!((code, out.as_str()), (1, "never reached\n"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_linres");
    let dir = tempfile::tempdir().unwrap();
    let inst = rs737(dir.path());
    let status = Command::new(bin)
        .args(["distance", "-i", &inst])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&status.stdout), "5\n");
    let status = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(!status.stderr.is_empty());
    let budget = Command::new(bin)
        .args(["distance", "-i", &inst])
        .env("LINRES_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(1));
}
