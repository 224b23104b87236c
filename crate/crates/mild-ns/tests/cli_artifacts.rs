//! End-to-end checks of the batch front door: artifacts, exit codes, and
//! byte determinism, driven through the library entry point the binary wraps.

use std::fs;
use std::path::{Path, PathBuf};

use mild_ns::cli::{run, Command, Overrides};

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn overrides(out: &Path) -> Overrides {
    Overrides {
        out: Some(out.to_path_buf()),
        strict: None,
        seed: None,
    }
}

#[test]
fn constants_artifact_satisfies_the_identities() {
    let dir = tempfile::tempdir().unwrap();
    let code = run(Command::Constants {
        n: 2,
        rs: vec![f64::INFINITY, 6.0, 4.0],
        out: dir.path().to_path_buf(),
    })
    .unwrap();
    assert_eq!(code, 0);
    let text = fs::read_to_string(dir.path().join("constants.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let alpha = value["alpha"].as_f64().unwrap();
    let gamma = value["gamma"].as_f64().unwrap();
    let rows = value["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let beta = row["beta"].as_f64().unwrap();
        let delta = row["delta"].as_f64().unwrap();
        let eta = row["eta"].as_f64().unwrap();
        let rc = row["r_conjugate"].as_f64().unwrap();
        assert_eq!(delta, beta * gamma);
        assert_eq!(eta, rc * alpha * delta);
    }
    assert_eq!(rows[0]["r"], serde_json::json!("inf"));
}

#[test]
fn taylor_green_solve_artifacts_and_decay_fit() {
    let dir = tempfile::tempdir().unwrap();
    let code = run(Command::Solve {
        config: bundled("taylor_green.json"),
        overrides: overrides(dir.path()),
    })
    .unwrap();
    assert_eq!(code, 0);

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["converged"], serde_json::json!(true));
    assert!(summary["residual"].as_f64().unwrap() <= 1e-6);

    // least-squares fit of ln(sup_norm) vs t must recover the decay rate 2
    let csv = fs::read_to_string(dir.path().join("norms.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let t_col = 0;
    let sup_col = header.iter().position(|h| *h == "sup_norm").unwrap();
    let mut pts = Vec::new();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let t: f64 = cells[t_col].parse().unwrap();
        let sup: f64 = cells[sup_col].parse().unwrap();
        pts.push((t, sup.ln()));
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    assert!((slope + 2.0).abs() <= 0.01, "fitted decay rate {slope}");

    // threshold columns exist because the config requests r values
    assert!(header.iter().any(|h| h.starts_with("blowup_threshold_")));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let code = run(Command::BlowupReport {
            config: bundled("small_random.json"),
            overrides: overrides(dir.path()),
        })
        .unwrap();
        assert_eq!(code, 0);
    }
    for name in ["norms.csv", "summary.json", "blowup.csv"] {
        let a = fs::read(dir_a.path().join(name)).unwrap();
        let b = fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn divergent_solve_exits_3_with_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("large.json");
    let out_path = dir.path().join("out");
    fs::write(
        &config_path,
        format!(
            "{{\"dimension\":2,\"points_per_axis\":32,\"box_length\":6.2831853071795862,\
             \"initial_data\":{{\"kind\":\"random-solenoidal\",\"seed\":5,\
             \"spectral_slope\":-1.0,\"amplitude\":40.0}},\"horizon\":0.5,\
             \"time_nodes\":8,\"max_iterations\":6,\"output_dir\":{:?}}}",
            out_path.display().to_string()
        ),
    )
    .unwrap();
    let code = run(Command::Solve {
        config: config_path,
        overrides: Overrides::default(),
    })
    .unwrap();
    assert_eq!(code, 3, "divergence is reported through the exit code");
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_path.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["converged"], serde_json::json!(false));
    assert!(
        out_path.join("norms.csv").exists(),
        "report written despite divergence"
    );
}

#[test]
fn invalid_config_exits_2_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("bad.json");
    let out_path = dir.path().join("never");
    fs::write(
        &config_path,
        format!(
            "{{\"dimension\":2,\"points_per_axis\":64,\"box_length\":6.28,\
             \"initial_data\":{{\"kind\":\"taylor-green\"}},\"horizon\":0.5,\
             \"time_nodes\":0,\"output_dir\":{:?}}}",
            out_path.display().to_string()
        ),
    )
    .unwrap();
    let err = run(Command::Solve {
        config: config_path,
        overrides: Overrides::default(),
    })
    .unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(!out_path.exists(), "no artifacts on validation failure");
}

#[test]
fn plot_renders_one_svg_per_norm_column_with_overlays() {
    let solve_dir = tempfile::tempdir().unwrap();
    run(Command::Solve {
        config: bundled("taylor_green.json"),
        overrides: overrides(solve_dir.path()),
    })
    .unwrap();
    let plot_dir = tempfile::tempdir().unwrap();
    let code = run(Command::Plot {
        csv: solve_dir.path().join("norms.csv"),
        out: plot_dir.path().to_path_buf(),
    })
    .unwrap();
    assert_eq!(code, 0);
    let svgs: Vec<String> = fs::read_dir(plot_dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    // four norm columns, none for the threshold columns themselves
    assert_eq!(svgs.len(), 4, "{svgs:?}");
    let sup = fs::read_to_string(plot_dir.path().join("sup_norm.svg")).unwrap();
    assert!(
        sup.contains("class=\"threshold\""),
        "threshold overlay present"
    );

    // without threshold columns there is no overlay
    let bare_dir = tempfile::tempdir().unwrap();
    fs::write(
        bare_dir.path().join("bare.csv"),
        "t,sup_norm\n0.1,1.0\n0.2,0.5\n",
    )
    .unwrap();
    run(Command::Plot {
        csv: bare_dir.path().join("bare.csv"),
        out: bare_dir.path().join("plots"),
    })
    .unwrap();
    let bare = fs::read_to_string(bare_dir.path().join("plots/sup_norm.svg")).unwrap();
    assert!(!bare.contains("class=\"threshold\""));

    // empty series: header only, still exit 0 with an axes-only SVG
    fs::write(bare_dir.path().join("empty.csv"), "t,sup_norm\n").unwrap();
    let code = run(Command::Plot {
        csv: bare_dir.path().join("empty.csv"),
        out: bare_dir.path().join("empty_plots"),
    })
    .unwrap();
    assert_eq!(code, 0);
    let empty = fs::read_to_string(bare_dir.path().join("empty_plots/sup_norm.svg")).unwrap();
    assert!(empty.contains("<line"));
    assert!(!empty.contains("polyline"));

    // malformed CSV: exit code 2
    fs::write(bare_dir.path().join("broken.csv"), "t,sup\n0.1\n").unwrap();
    let err = run(Command::Plot {
        csv: bare_dir.path().join("broken.csv"),
        out: bare_dir.path().join("broken_plots"),
    })
    .unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn norms_and_kernel_check_and_estimates_emit_their_schemas() {
    let dir = tempfile::tempdir().unwrap();
    run(Command::Norms {
        config: bundled("taylor_green.json"),
        overrides: overrides(dir.path()),
    })
    .unwrap();
    let norms = fs::read_to_string(dir.path().join("norms.csv")).unwrap();
    assert!(norms.starts_with("p,q,kind,value\n"));
    assert!(norms.contains("infbar"));

    let kdir = tempfile::tempdir().unwrap();
    run(Command::KernelCheck {
        config: bundled("kernel_check.json"),
        overrides: overrides(kdir.path()),
    })
    .unwrap();
    let kernel = fs::read_to_string(kdir.path().join("kernel_check.csv")).unwrap();
    assert!(
        kernel.starts_with("tag,alpha,t,l1_norm,lp1_1,lp1_1.5,decay_constant,semigroup_residual\n")
    );
    // 4 specs x 3 times
    assert_eq!(kernel.lines().count(), 1 + 12);

    let edir = tempfile::tempdir().unwrap();
    run(Command::EstimateCheck {
        config: bundled("small_random.json"),
        overrides: overrides(edir.path()),
    })
    .unwrap();
    let estimates = fs::read_to_string(edir.path().join("estimates.csv")).unwrap();
    assert!(estimates.starts_with("estimate,case,lhs,rhs,ratio\n"));
    for line in estimates.lines().skip(1) {
        let ratio: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(ratio <= 1.0 + 1e-8, "estimate violation: {line}");
    }
}

#[test]
fn regularity_report_emits_gap_columns() {
    let dir = tempfile::tempdir().unwrap();
    let code = run(Command::RegularityReport {
        config: bundled("taylor_green.json"),
        overrides: overrides(dir.path()),
    })
    .unwrap();
    assert_eq!(code, 0);
    let text = fs::read_to_string(dir.path().join("regularity.csv")).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("t,alpha,quotient,bracket,ratio"));
    assert!(header.contains("gap_2_2"));
    assert!(header.contains("gap_infbar_inf"));
    // rows: (nodes - 1) per alpha, default three alphas
    assert_eq!(text.lines().count(), 1 + 3 * 31);
}
