use std::path::Path;
use std::process::{Command, Output};

fn automorph(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_automorph"))
        .args(args)
        .current_dir(dir)
        .env_remove("AUTOMORPH_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn summary(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn empty_task_list_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("e.cfg"),
        "source=delta\nN=5000\noutputs=out\n",
    )
    .unwrap();
    let o = automorph(&["run", "e.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn invalid_configs_exit_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.cfg"),
        "source=delta\nN=5000\ntask=windows\n",
    )
    .unwrap();
    let o = automorph(&["run", "bad.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("bad.cfg:3: unknown key `task`"),
        "{}",
        stderr(&o)
    );

    std::fs::write(
        dir.path().join("r.cfg"),
        "source=delta\nN=5000\nr=0.9\nr=0.59\n",
    )
    .unwrap();
    let o = automorph(&["run", "r.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("r.cfg:4: duplicate key `r`"),
        "{}",
        stderr(&o)
    );

    std::fs::write(dir.path().join("r.cfg"), "source=delta\nN=5000\nr=0.59\n").unwrap();
    let o = automorph(&["run", "r.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let msg = stderr(&o);
    assert!(
        msg.contains("r.cfg:3:") && msg.contains("3/5") && msg.contains("and 1"),
        "{msg}"
    );
}

#[test]
fn io_failures_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = automorph(&["run", "missing.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    std::fs::write(dir.path().join("blocked"), "").unwrap();
    std::fs::write(
        dir.path().join("d.cfg"),
        "source=delta\nN=2000\ntasks=divisor-bound-check\noutputs=blocked/out\n",
    )
    .unwrap();
    let o = automorph(&["run", "d.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn bad_thread_count_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_automorph"))
        .arg("presets")
        .env("AUTOMORPH_THREADS", "zero")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("AUTOMORPH_THREADS"));
}

#[test]
fn selfcheck_and_presets() {
    let dir = tempfile::tempdir().unwrap();
    let o = automorph(&["selfcheck"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(!out.contains("FAIL"));
    assert!(out.contains("τ(4) = -1472"));
    assert!(out.contains("gl2-selfdual threshold 3/5"));

    let o = automorph(&["presets"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("gl2-selfdual")).unwrap();
    assert!(
        row.contains("7/64")
            && row.contains("71/192")
            && row.contains("3/5")
            && row.ends_with("true")
    );
    assert!(out.contains("siegel-spinor") && out.contains("41/47"));
}

#[test]
fn synthetic_rankin_check_passes_and_records_seed() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s.cfg"),
        "source=synthetic\nm=2\nmodel=ramanujan-uniform\nseed=7\nN=10000\ntasks=rankin-check\n",
    )
    .unwrap();
    let o = automorph(&["run", "s.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = summary(&dir.path().join("synthetic-summary.json"));
    assert_eq!(s["seed"], 7);
    assert_eq!(s["tasks"]["rankin-check"]["details"]["violations"], 0);
    assert!(dir.path().join("synthetic-rankin-check.csv").exists());
}

#[test]
fn failed_checks_exit_two() {
    // i.i.d. Satake angles are not automorphic: their partial sums outgrow
    // the GL3 first-moment exponent
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s.cfg"),
        "source=synthetic\nm=3\nseed=7\nN=20000\ntasks=moments\n",
    )
    .unwrap();
    let o = automorph(&["run", "s.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stdout(&o).contains("FAIL moments"));
    assert_eq!(
        summary(&dir.path().join("synthetic-summary.json"))["passed"],
        false
    );
}

#[test]
fn overrides_and_labels() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d.cfg"), "source=delta\nN=2000\n").unwrap();
    let o = automorph(
        &[
            "run",
            "d.cfg",
            "--set",
            "tasks=windows,cumulative",
            "--set",
            "label=tau",
            "--set",
            "N=20000",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let windows = std::fs::read_to_string(dir.path().join("tau-windows.csv")).unwrap();
    assert!(windows.starts_with("x,window_len,changes,gap_fraction\n1,1,1,0.0\n"));
    let cumulative = std::fs::read_to_string(dir.path().join("tau-cumulative.csv")).unwrap();
    assert!(cumulative.starts_with("x,cumulative\n1,0\n2,1\n"));
    let s = summary(&dir.path().join("tau-summary.json"));
    assert_eq!(s["N"], 20000);
    assert_eq!(s["profile"]["threshold"]["exact"], "3/5");
    assert_eq!(s["tasks"]["windows"]["details"]["x0"], 1);
}

#[test]
fn ingested_gaps_warn_and_report_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("# weight=20\n");
    for n in (1..=3000usize).filter(|n| n % 5 != 4) {
        let sign = if n % 3 == 0 { -1.0 } else { 1.0 };
        text.push_str(&format!("{n} {}\n", sign * (n as f64).powf(18.5)));
    }
    std::fs::write(dir.path().join("eig.txt"), text).unwrap();
    std::fs::write(
        dir.path().join("i.cfg"),
        "source=spinor-ingest\npath=eig.txt\nweight=20\nN=3000\ntasks=windows,divisor-bound-check\n",
    )
    .unwrap();
    let o = automorph(&["run", "i.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));
    let s = summary(&dir.path().join("spinor-ingest-summary.json"));
    assert!((s["gap_fraction"].as_f64().unwrap() - 0.2).abs() < 1e-3);
    assert!(
        s["tasks"]["windows"]["details"]["max_gap_fraction"]
            .as_f64()
            .unwrap()
            > 0.0
    );
}
