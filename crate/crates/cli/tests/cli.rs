use std::process::{Command, Output};

fn mimetic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mimetic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_writes_one_csv_record() {
    let o = mimetic(&["solve", "--method", "single", "--order", "2", "--elements", "2x2", "--c", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "method,N,Mx,My,c,dof,l2_omega,l2_q,linf_conservation,runtime_s");
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&fields[..4], &["single", "2", "2", "2"]);
    let conservation: f64 = fields[8].parse().unwrap();
    assert!(conservation < 1e-12);
}

#[test]
fn solve_accepts_rectangular_grids() {
    let o = mimetic(&["solve", "--order", "2", "--elements", "3x2", "--c", "-0.1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("dual,2,3,2,-0.1,"));
}

#[test]
fn invalid_input_exits_with_2() {
    for args in [
        &["solve", "--order", "2", "--elements", "2", "--c", "0.4"][..],
        &["solve", "--order", "0", "--elements", "2"],
        &["solve", "--order", "2", "--elements", "2", "--out", "/nonexistent/dir/out.csv"],
        &["convergence", "--sweep", "h", "--mesh-levels", "2,4"],
        &["verify", "--criteria", "9"],
    ] {
        let o = mimetic(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn h_sweep_writes_file_and_reports_slopes() {
    let dir = std::env::temp_dir().join(format!("mimetic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("h.csv");
    let o = mimetic(&[
        "convergence", "--sweep", "h", "--method", "dual", "--orders", "2", "--mesh-levels", "2,4,8", "--c-list", "0",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("dual N=2 c=0: slope omega"), "{stderr}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn p_sweep_prints_projection_reference() {
    let o = mimetic(&["convergence", "--sweep", "p", "--method", "both", "--orders", "2..3", "--mesh-levels", "2", "--c-list", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
    assert_eq!(String::from_utf8_lossy(&o.stderr).matches("projection N=").count(), 2);
}

#[test]
fn verify_passing_subset_exits_with_0() {
    let o = mimetic(&["verify", "--criteria", "1,2,8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches(": PASS").count(), 3);
}
