use super::run;

struct Output {
    code: i32,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

fn hoytlab(args: &[&str]) -> Output {
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let argv = std::iter::once("hoytlab").chain(args.iter().copied());
    let code = run(argv, &mut stdout, &mut stderr);
    Output {
        code,
        stdout,
        stderr,
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn figure_commands_run_without_flags() {
    for cmd in ["capacity", "secrecy", "outage", "ie-table"] {
        let o = hoytlab(&[cmd]);
        assert_eq!(o.code, 0, "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        assert!(text.lines().count() > 10, "{cmd}");
    }
}

#[test]
fn capacity_rows_at_q_one_are_rayleigh() {
    let o = hoytlab(&[
        "capacity", "--q", "1", "--sweep", "snr_db", "--start", "0", "--stop", "10", "--points",
        "2",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "gamma_bar_db,q,capacity_bps_hz,lower_bound,high_snr_asymptote,capacity_loss_mu"
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[..3], ["0", "1", "0.860347382271"]);
    assert_eq!(first[2], first[3]);
}

#[test]
fn capacity_loss_column_over_q() {
    let o = hoytlab(&[
        "capacity", "--sweep", "q", "--snr-db", "40", "--points", "2",
    ]);
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0][5].starts_with("1.8327"));
    assert!(rows[1][5].starts_with("0.8327"));
    assert_eq!(rows[0][3], "");
}

#[test]
fn noise_only_outage_matches_rayleigh() {
    let o = hoytlab(&[
        "outage", "--sweep", "snr_db", "--q", "1", "--start", "10", "--stop", "20", "--points", "2",
    ]);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "none");
    let p: f64 = row[3].parse().unwrap();
    assert!((p - (1.0 - (-0.1f64).exp())).abs() < 1e-11);
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: [&[&str]; 6] = [
        &["capacity", "--q", "1.5"],
        &["capacity", "--sweep", "sir_db"],
        &["outage", "--interferer", "kind=eta_mu,mu=1"],
        &["secrecy", "--start", "5", "--stop", "1"],
        &["mc", "--metric", "ber"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = hoytlab(args);
        assert_eq!(o.code, 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = hoytlab(&["outage", "--interferer", "kind=eta_mu,mu=1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("accepted keys"));
}

#[test]
fn selftest_exit_codes() {
    assert_eq!(hoytlab(&["selftest"]).code, 0);
    let o = hoytlab(&["selftest", "--inject-failure"]);
    assert_eq!(o.code, 1);
    assert!(stdout(&o).contains("FAIL  injected"));
}

#[test]
fn mc_reports_agreement() {
    let o = hoytlab(&[
        "mc",
        "--metric",
        "capacity_ora",
        "--samples",
        "100000",
        "--seed",
        "3",
    ]);
    assert_eq!(o.code, 0);
    let text = stdout(&o);
    assert!(
        text.starts_with("metric,analytic,mc_value,std_error,n_samples,seed,z_score,within_3se")
    );
    assert!(text.contains("capacity_ora,"));
    assert!(text.trim_end().ends_with(",true"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("hoytlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "# outage run\nq = 0.5\npoints = 2\nstart = -10\nstop = 0\ninterferer = kind=kappa_mu,kappa=1,mu=1\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&hoytlab(&["outage", "--config", cfg]));
    assert_eq!(from_file.lines().count(), 3);
    assert!(from_file.contains("-10,0.5,kappa_mu(kappa=1;mu=1),"));
    let overridden = stdout(&hoytlab(&[
        "--config",
        cfg,
        "outage",
        "--q",
        "1",
        "--interferer",
        "kind=eta_mu,eta=0.5,mu=1",
    ]));
    assert!(overridden.contains(",1,eta_mu(f2;eta=0.5;mu=1),"));
    assert!(!overridden.contains("kappa_mu"));
    let missing = hoytlab(&[
        "capacity",
        "--config",
        dir.join("absent.cfg").to_str().unwrap(),
    ]);
    assert_eq!(missing.code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn help_documents_defaults() {
    let o = hoytlab(&["secrecy", "--help"]);
    assert_eq!(o.code, 0);
    let text = stdout(&o);
    assert!(text.contains("15 dB"));
    assert!(text.contains("[default: 0.1]"));
}
