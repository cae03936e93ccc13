//! End-to-end CLI tests over the JSON document formats and the exit-code
//! table: 0 success, 1 check failed, 2 search failed, 3 reconstruction
//! infeasible, 64 usage, 65 data format.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sicq::doc::{self, Body, Document, ProbabilitiesDoc};
use sicq::{
    known_fiducial, random_density, wh_orbit, DensityOperator, Povm, StateVector, Tolerances,
};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sicq")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn write_doc(path: &Path, doc: &Document) {
    std::fs::write(path, doc.to_json()).unwrap();
}

struct Fixture {
    _dir: tempfile::TempDir,
    root: PathBuf,
    sic2: PathBuf,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        let sic2 = root.join("sic2.json");
        let fid = known_fiducial(2).unwrap();
        let orbit = wh_orbit(&fid).unwrap();
        write_doc(&sic2, &doc::sic_doc(&fid, &orbit));
        Self {
            _dir: dir,
            root,
            sic2,
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }
}

#[test]
fn verify_passes_on_catalogued_sic() {
    let fx = Fixture::new();
    let out = run(&["verify", "--input", fx.sic2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"pass\": true"));
}

#[test]
fn verify_fails_on_orthonormal_system() {
    let fx = Fixture::new();
    // four vectors with overlaps 0 and 1 instead of 1/3
    let plus = StateVector::normalized(vec![1.0.into(), 1.0.into()]).unwrap();
    let minus = StateVector::normalized(vec![1.0.into(), (-1.0).into()]).unwrap();
    let vectors = vec![
        StateVector::basis(2, 0),
        StateVector::basis(2, 1),
        plus,
        minus,
    ];
    let path = fx.path("bad_sic.json");
    write_doc(&path, &doc::sic_doc(&vectors[0], &vectors));
    let out = run(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("worst_overlap_deviation"));
}

#[test]
fn verify_povm_document() {
    let fx = Fixture::new();
    let path = fx.path("basis.json");
    write_doc(&path, &doc::povm_doc(&Povm::computational_basis(3)));
    let out = run(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_truncated_file_is_data_error() {
    let fx = Fixture::new();
    let text = std::fs::read_to_string(&fx.sic2).unwrap();
    let path = fx.path("trunc.json");
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    let out = run(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line"), "stderr should locate the failure: {err}");
}

#[test]
fn ftp_compare_random_sweep_passes() {
    let fx = Fixture::new();
    let target = fx.path("target.json");
    write_doc(&target, &doc::povm_doc(&Povm::computational_basis(2)));
    let report = fx.path("report.json");
    let out = run(&[
        "ftp-compare",
        "--sic",
        fx.sic2.to_str().unwrap(),
        "--random",
        "50",
        "--seed",
        "3",
        "--target",
        target.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = Document::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    match doc.body {
        Body::Report(doc::ReportDoc::FtpCompare(r)) => {
            assert_eq!(r.cases.len(), 50);
            assert!(r.max_deviation_qbist <= 1e-9);
            assert!(r.pass);
        }
        _ => panic!("expected an ftp_compare report"),
    }
}

#[test]
fn ftp_compare_maximally_mixed_on_sic_is_uniform() {
    let fx = Fixture::new();
    let state = fx.path("mixed.json");
    write_doc(&state, &doc::state_doc(&DensityOperator::maximally_mixed(2)));
    let report = fx.path("report.json");
    let out = run(&[
        "ftp-compare",
        "--sic",
        fx.sic2.to_str().unwrap(),
        "--state",
        state.to_str().unwrap(),
        "--target",
        fx.sic2.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = Document::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    match doc.body {
        Body::Report(doc::ReportDoc::FtpCompare(r)) => {
            let case = &r.cases[0];
            for vector in [&case.born, &case.classical, &case.qbist] {
                for &v in vector {
                    assert!((v - 0.25).abs() < 1e-9);
                }
            }
        }
        _ => panic!("expected an ftp_compare report"),
    }
}

#[test]
fn ftp_compare_reports_classical_witness() {
    let fx = Fixture::new();
    let state = fx.path("pure.json");
    write_doc(
        &state,
        &doc::state_doc(&DensityOperator::pure(&StateVector::basis(2, 0))),
    );
    let target = fx.path("target.json");
    write_doc(&target, &doc::povm_doc(&Povm::computational_basis(2)));
    let report = fx.path("report.json");
    let out = run(&[
        "ftp-compare",
        "--sic",
        fx.sic2.to_str().unwrap(),
        "--state",
        state.to_str().unwrap(),
        "--target",
        target.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = Document::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    match doc.body {
        Body::Report(doc::ReportDoc::FtpCompare(r)) => {
            assert!(r.max_deviation_classical > 0.05);
            assert!(r.max_deviation_qbist <= 1e-9);
        }
        _ => panic!("expected an ftp_compare report"),
    }
}

#[test]
fn ftp_compare_dimension_mismatch_is_data_error() {
    let fx = Fixture::new();
    let target = fx.path("target3.json");
    write_doc(&target, &doc::povm_doc(&Povm::computational_basis(3)));
    let out = run(&[
        "ftp-compare",
        "--sic",
        fx.sic2.to_str().unwrap(),
        "--random",
        "1",
        "--target",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn reconstruct_uniform_probabilities_gives_maximally_mixed() {
    let fx = Fixture::new();
    let probs = fx.path("probs.json");
    write_doc(
        &probs,
        &Document::new(Body::Probabilities(ProbabilitiesDoc {
            values: vec![0.25; 4],
        })),
    );
    let out_path = fx.path("state.json");
    let out = run(&[
        "reconstruct",
        "--probs",
        probs.to_str().unwrap(),
        "--reference",
        fx.sic2.to_str().unwrap(),
        "--method",
        "sic",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = Document::from_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    match doc.body {
        Body::State(s) => {
            let rho = doc::load_state(&s, &Tolerances::default()).unwrap();
            let diff = rho
                .matrix()
                .max_abs_diff(DensityOperator::maximally_mixed(2).matrix())
                .unwrap();
            assert!(diff <= 1e-12);
        }
        _ => panic!("expected a state document"),
    }
}

#[test]
fn reconstruct_round_trips_a_random_state() {
    let fx = Fixture::new();
    let rho = random_density(2, 31).unwrap();
    let sic = {
        let fid = known_fiducial(2).unwrap();
        sicq::sic_effects(&wh_orbit(&fid).unwrap(), &Tolerances::default()).unwrap()
    };
    let p = sicq::reference_probabilities(&rho, &sic).unwrap();
    let probs = fx.path("probs.json");
    write_doc(
        &probs,
        &Document::new(Body::Probabilities(ProbabilitiesDoc {
            values: p.values().to_vec(),
        })),
    );
    for method in ["sic", "inversion"] {
        let out_path = fx.path("rebuilt.json");
        let out = run(&[
            "reconstruct",
            "--probs",
            probs.to_str().unwrap(),
            "--reference",
            fx.sic2.to_str().unwrap(),
            "--method",
            method,
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "method {method}");
        let doc = Document::from_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
        match doc.body {
            Body::State(s) => {
                let rebuilt = doc::load_state(&s, &Tolerances::default()).unwrap();
                let err = rho.matrix().max_abs_diff(rebuilt.matrix()).unwrap();
                assert!(err <= 1e-9, "method {method}: {err}");
            }
            _ => panic!("expected a state document"),
        }
    }
}

#[test]
fn reconstruct_point_mass_is_infeasible() {
    let fx = Fixture::new();
    let probs = fx.path("probs.json");
    write_doc(
        &probs,
        &Document::new(Body::Probabilities(ProbabilitiesDoc {
            values: vec![1.0, 0.0, 0.0, 0.0],
        })),
    );
    let out_path = fx.path("state.json");
    let out = run(&[
        "reconstruct",
        "--probs",
        probs.to_str().unwrap(),
        "--reference",
        fx.sic2.to_str().unwrap(),
        "--method",
        "sic",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reconstruct_non_ic_reference_is_underdetermined() {
    let fx = Fixture::new();
    let reference = fx.path("basis.json");
    write_doc(&reference, &doc::povm_doc(&Povm::computational_basis(2)));
    let probs = fx.path("probs.json");
    write_doc(
        &probs,
        &Document::new(Body::Probabilities(ProbabilitiesDoc {
            values: vec![0.5, 0.5],
        })),
    );
    let out = run(&[
        "reconstruct",
        "--probs",
        probs.to_str().unwrap(),
        "--reference",
        reference.to_str().unwrap(),
        "--method",
        "inversion",
        "--out",
        fx.path("state.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("rank"), "stderr: {err}");
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["sic-find", "--dimension", "2"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn outputs_are_deterministic_across_commands() {
    let fx = Fixture::new();
    let target = fx.path("target.json");
    write_doc(&target, &doc::povm_doc(&Povm::computational_basis(2)));
    let args = |out: &Path| {
        vec![
            "ftp-compare".to_string(),
            "--sic".into(),
            fx.sic2.to_str().unwrap().into(),
            "--random".into(),
            "5".into(),
            "--seed".into(),
            "7".into(),
            "--target".into(),
            target.to_str().unwrap().into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let out_a = fx.path("a.json");
    let out_b = fx.path("b.json");
    assert_eq!(
        Command::new(bin()).args(args(&out_a)).output().unwrap().status.code(),
        Some(0)
    );
    assert_eq!(
        Command::new(bin()).args(args(&out_b)).output().unwrap().status.code(),
        Some(0)
    );
    assert_eq!(std::fs::read(&out_a).unwrap(), std::fs::read(&out_b).unwrap());
}
