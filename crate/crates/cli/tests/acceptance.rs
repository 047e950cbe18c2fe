//! Acceptance run: one PASS/FAIL line per criterion, tolerances pinned here.

use std::process::{Command, ExitCode};
use std::time::Instant;

use beltrami_cli::checks::{lundquist_xray_oracle, run_suite};
use beltrami_cli::{CheckReport, RunConfig, Suite};

struct Criterion {
    id: u32,
    title: &'static str,
    /// Check names with the tolerance each must meet.
    bounds: Vec<(String, f64)>,
}

fn criteria(report: &CheckReport) -> Vec<Criterion> {
    let curl = report
        .checks
        .iter()
        .filter(|c| c.name.starts_with("eigen.") && c.name != "eigen.solenoidal")
        .map(|c| (c.name.clone(), 1e-5))
        .collect();
    let pin = |list: &[(&str, f64)]| list.iter().map(|&(n, t)| (n.to_string(), t)).collect::<Vec<_>>();
    vec![
        Criterion { id: 1, title: "curl eigen-suite over the field catalog", bounds: curl },
        Criterion { id: 2, title: "Lundquist X-ray: damped quadrature vs closed form", bounds: pin(&[("xray.lundquist_numeric", 1e-3)]) },
        Criterion { id: 3, title: "spherical-mean inversion of the Lundquist X-ray", bounds: pin(&[("invert.spherical_mean", 1e-6)]) },
        Criterion {
            id: 4,
            title: "Grangeat-type inversion and sign agreement",
            bounds: pin(&[("invert.grangeat", 1e-6), ("invert.grangeat_signs", 1e-8)]),
        },
        Criterion { id: 5, title: "divergent-beam sphere mean", bounds: pin(&[("invert.gg_mean", 1e-6)]) },
        Criterion {
            id: 6,
            title: "D(theta) +/- D(-theta) decomposition",
            bounds: pin(&[("decomposition.sum", 1e-10), ("decomposition.difference", 1e-10)]),
        },
        Criterion {
            id: 7,
            title: "Hilbert, Smith and Tuy identities",
            bounds: pin(&[("hilbert.radon", 1e-14), ("smith", 1e-7), ("tuy", 1e-7)]),
        },
        Criterion {
            id: 8,
            title: "Funk multipliers, inverse and finite part",
            bounds: pin(&[("funk.multiplier", 1e-10), ("funk.semyanistyi", 1e-10), ("funk.finite_part", 1e-10)]),
        },
        Criterion { id: 9, title: "John's equation and its curl form", bounds: pin(&[("john.equation", 1e-4), ("john.curl_form", 1e-4)]) },
        Criterion { id: 10, title: "Riesz and Biot-Savart scalings", bounds: pin(&[("riesz_biot_savart", 1e-12)]) },
        Criterion {
            id: 11,
            title: "twistor suite",
            bounds: pin(&[
                ("twistor.lundquist_kernel", 1e-10),
                ("twistor.laurent_ck", 1e-10),
                ("twistor.fundamental_solution", 1e-8),
                ("twistor.axisymmetric", 1e-8),
                ("twistor.spheromak_debye", 1e-8),
                ("twistor.eigen", 1e-6),
            ]),
        },
        Criterion { id: 12, title: "plane-wave Y transform oracle", bounds: pin(&[("ytrf.plane_wave_numeric", 1e-2)]) },
        Criterion { id: 13, title: "Radon recovery from divergent beams", bounds: pin(&[("invert.gg_radon", 1e-5)]) },
    ]
}

fn evaluate(report: &CheckReport, c: &Criterion) -> (bool, String) {
    let mut ok = !c.bounds.is_empty();
    let mut parts = Vec::new();
    for (name, tol) in &c.bounds {
        match report.get(name) {
            Some(e) => {
                let pass = e.residual <= *tol;
                ok &= pass;
                parts.push(format!("{name} {:.3e} <= {tol:e}{}", e.residual, if pass { "" } else { " FAILED" }));
            }
            None => {
                ok = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    (ok, parts.join("; "))
}

fn check_all_bytes() -> Vec<u8> {
    let dir = std::env::temp_dir().join(format!("beltrami-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("all.json");
    std::fs::write(&path, r#"{"command": "check all"}"#).expect("write config");
    let out = Command::new(env!("CARGO_BIN_EXE_beltrami")).arg(&path).output().expect("run beltrami");
    out.stdout
}

fn main() -> ExitCode {
    let cfg = RunConfig::load(r#"{"command": "check all"}"#, &[]).expect("config");
    let report = run_suite(Suite::All, &cfg).expect("suite");
    let mut failed = 0;
    for c in criteria(&report) {
        let (mut ok, mut detail) = evaluate(&report, &c);
        if c.id == 2 {
            let start = Instant::now();
            let again = lundquist_xray_oracle();
            let secs = start.elapsed().as_secs_f64();
            let timely = secs <= 10.0 && again.is_ok();
            ok &= timely;
            detail.push_str(&format!("; runtime {secs:.2} s <= 10 s{}", if timely { "" } else { " FAILED" }));
        }
        failed += usize::from(!ok);
        println!("criterion {:02} {} {}: {}", c.id, if ok { "PASS" } else { "FAIL" }, c.title, detail);
    }
    let first = check_all_bytes();
    let second = check_all_bytes();
    let same = !first.is_empty() && first == second;
    failed += usize::from(!same);
    println!(
        "criterion 14 {} repeated `check all` reports are byte-identical: {} bytes",
        if same { "PASS" } else { "FAIL" },
        first.len()
    );
    println!("acceptance: {} of 14 criteria passed", 14 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
