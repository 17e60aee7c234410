//! End-to-end runs of the `ainfty` binary: the documented examples, exit
//! codes, report determinism, and cross-checks against in-process results.

use std::path::PathBuf;
use std::process::{Command, Output};

use ainfty::report::{CheckFile, PagesFile, SolveFile, SuperpotentialFile};
use ainfty_core::models::{formal_sphere, quantum_sphere};
use ainfty_core::spectral::{page, theorem_oracle, twisted_complex};

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ainfty"));
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("AINFTY_THREADS", n),
        None => cmd.env_remove("AINFTY_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn model_arg(name: &str) -> String {
    models_dir().join(name).to_string_lossy().into_owned()
}

#[test]
fn check_axioms_example_passes() {
    let out = run(
        &[
            "check-axioms",
            "--model",
            &model_arg("formal_sphere_2.json"),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let rep: CheckFile = serde_json::from_slice(&out.stdout).unwrap();
    assert!(rep.ok);
    assert!(rep.violations.is_empty());
}

#[test]
fn solve_mc_obstructed_example() {
    let out = run(
        &[
            "solve-mc",
            "--model",
            &model_arg("obstructed.json"),
            "--integral",
            "s",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let rep: SolveFile = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep.status, "obstructed");
    let ob = rep.obstruction.unwrap();
    assert_eq!((ob.level, ob.dimension), (1, 1));
}

#[test]
fn spectral_example_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("pages.json");
    let out = run(
        &[
            "spectral",
            "--model",
            &model_arg("formal_sphere_2.json"),
            "--b",
            "s*vol",
            "--pages",
            "3",
            "--out",
            out_path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let rep: PagesFile =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    // The dump agrees with the in-process structural comparison.
    let md = formal_sphere(2);
    let b = ainfty::expr::parse_element(&md.alg.tower, &md.alg.basis, "s*vol").unwrap();
    let oracle = theorem_oracle(&md, &b).unwrap();
    assert_eq!(rep.e1_checked, oracle.e1_checked);
    assert_eq!(rep.einf_checked, oracle.einf_checked);
    assert_eq!(rep.degenerate, oracle.degenerate);
    let tc = twisted_complex(&md.alg, &b, true).unwrap();
    assert_eq!(rep.labels, tc.fc.labels);
    assert_eq!(rep.pages.len(), 4);
    for dumped in &rep.pages {
        let computed = page(&tc.fc, dumped.r);
        for cell in &dumped.cells {
            assert_eq!(computed.dim(cell.p, cell.q), cell.dim);
            assert_eq!(cell.reps.len(), cell.dim);
        }
        let nonzero = computed.cells.values().filter(|c| c.dim > 0).count();
        assert_eq!(dumped.cells.len(), nonzero, "page {}", dumped.r);
    }
}

#[test]
fn quantum_solve_and_superpotential_chain() {
    let dir = tempfile::tempdir().unwrap();
    let solve_path = dir.path().join("solve.json");
    let out = run(
        &[
            "solve-mc",
            "--model",
            &model_arg("quantum_sphere_2.json"),
            "--integral",
            "s",
            "--out",
            solve_path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let rep: SolveFile =
        serde_json::from_str(&std::fs::read_to_string(&solve_path).unwrap()).unwrap();
    assert_eq!(rep.status, "ok");
    assert_eq!(rep.b.as_deref(), Some("(1*s)*vol"));
    assert_eq!(rep.c.as_deref(), Some("-1*s^2*T^[1]"));
    let verify = rep.verify.unwrap();
    assert!(verify.central && verify.degree_ok && verify.unit_pair_ok);
    assert_eq!(rep.rho.unwrap().unit_coeff, "1");

    let out = run(
        &[
            "superpotential",
            "--model",
            &model_arg("quantum_sphere_2.json"),
            "--b-from",
            solve_path.to_str().unwrap(),
            "--extract",
            "beta=[1],k=3,t=[]",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let rep: SuperpotentialFile = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep.omega, "1/3*s^3*T^[1]");
    assert_eq!(rep.extract.unwrap().count, "2");

    // Passing the element directly gives the identical report.
    let direct = run(
        &[
            "superpotential",
            "--model",
            &model_arg("quantum_sphere_2.json"),
            "--b",
            "s*vol",
            "--extract",
            "beta=[1],k=3,t=[]",
        ],
        None,
    );
    assert_eq!(direct.stdout, out.stdout);
}

#[test]
fn extend_passes_on_all_shipped_models() {
    for name in [
        "formal_sphere_2.json",
        "formal_sphere_3.json",
        "quantum_sphere_2.json",
        "real_model_2.json",
        "obstructed.json",
    ] {
        let out = run(&["extend", "--model", &model_arg(name)], None);
        assert_eq!(out.status.code(), Some(0), "{name}: {out:?}");
        let rep: CheckFile = serde_json::from_slice(&out.stdout).unwrap();
        assert!(rep.ok, "{name}");
        assert_eq!(rep.command, "extend");
    }
}

#[test]
fn reports_are_byte_identical_across_thread_counts() {
    let model = model_arg("quantum_sphere_2.json");
    let args = ["extend", "--model", model.as_str()];
    let one = run(&args, Some("1"));
    assert_eq!(one.status.code(), Some(0));
    for threads in ["2", "4", "7"] {
        let many = run(&args, Some(threads));
        assert_eq!(many.status.code(), Some(0));
        assert_eq!(one.stdout, many.stdout, "threads {threads}");
    }
    // Determinism across repeated identical runs.
    assert_eq!(run(&args, Some("3")).stdout, one.stdout);
}

#[test]
fn mutated_model_fails_with_exit_one() {
    let mut md = quantum_sphere(2);
    let flipped = md.alg.pairing.get(&(0, 1)).unwrap().neg();
    md.alg.pairing.insert((0, 1), flipped);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mutated.json");
    ainfty::format::save_model(&md, &path).unwrap();

    let out = run(&["check-axioms", "--model", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let rep: CheckFile = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!rep.ok);
    assert_eq!(rep.violations[0].property, 8);

    // Solver-side commands refuse the model before doing any work.
    let out = run(
        &[
            "solve-mc",
            "--model",
            path.to_str().unwrap(),
            "--integral",
            "s",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("axiom"));
}

#[test]
fn usage_errors_exit_two() {
    // Missing file.
    let out = run(&["check-axioms", "--model", "no_such_model.json"], None);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    assert!(!out.stderr.is_empty());
    // Malformed expression.
    let out = run(
        &[
            "solve-mc",
            "--model",
            &model_arg("quantum_sphere_2.json"),
            "--integral",
            "s*nope",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    // Unknown pivot rule.
    let out = run(
        &[
            "solve-mc",
            "--model",
            &model_arg("quantum_sphere_2.json"),
            "--integral",
            "s",
            "--pivot",
            "middle",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    // Inadmissible seed.
    let out = run(
        &[
            "solve-mc",
            "--model",
            &model_arg("quantum_sphere_2.json"),
            "--integral",
            "s^2",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    // Unknown subcommand is a clap-level usage error.
    let out = run(&["frobnicate"], None);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn truncation_overrides_apply() {
    // A lowered energy cutoff truncates the quantum product away: the model
    // solves flat.
    let out = run(
        &[
            "solve-mc",
            "--model",
            &model_arg("quantum_sphere_2.json"),
            "--integral",
            "s",
            "--emax",
            "1/2",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let rep: SolveFile = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep.c.as_deref(), Some("0"));
    // Invalid overrides are usage errors.
    for bad in [["--emax", "0"], ["--smax", "0"]] {
        let out = run(
            &[
                "solve-mc",
                "--model",
                &model_arg("quantum_sphere_2.json"),
                "--integral",
                "s",
                bad[0],
                bad[1],
            ],
            None,
        );
        assert_eq!(out.status.code(), Some(2), "{bad:?}: {out:?}");
    }
}
