use std::fs;
use std::process::Command;

fn wordavg(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_wordavg")).args(args).output().unwrap()
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn census_to_stdout() {
    let out = wordavg(&["census", "--letters", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("n,count\n1,7\n2,35\n3,217\n4,1407\n"));
}

#[test]
fn average_matches_golden() {
    let out = wordavg(&["average", "--letters", "2", "--exact"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), include_str!("golden/averaged_n2.txt"));
}

#[test]
fn validation_failures_exit_with_two() {
    assert_eq!(wordavg(&["average", "--letters", "6", "--exact"]).status.code(), Some(2));
    assert_eq!(wordavg(&["simulate", "--nu", "7"]).status.code(), Some(2));
    assert_eq!(wordavg(&["errors", "--letters", "6"]).status.code(), Some(2));
    assert_eq!(wordavg(&["census", "--letters", "8"]).status.code(), Some(2));
    assert_eq!(wordavg(&["potential", "--order", "3"]).status.code(), Some(2));
    assert_eq!(wordavg(&["bogus"]).status.code(), Some(2));
}

#[test]
fn files_in_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = wordavg(&["simulate", "--t-end", "2", "--letters", "3", "--out", d]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("simulate_B0.52_n3.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# A=0.2"));
    assert_eq!(lines.next().unwrap(), "t,z_ref,Phi,Y,z_tilde");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 5);
    assert_eq!(first[1], "-1.0000000000000000e0");
    assert_eq!(text.lines().count(), 2 + 64);
}

#[test]
fn potential_and_coefficients() {
    let out = wordavg(&["potential", "--B", "0,0.9"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "B,critical_points,depths,merged");
    assert!(rows[1].starts_with("0,-1.0000000000:min 0.0000000000:max 1.0000000000:min,0.2500000000 0.2500000000,false"));
    assert!(rows[2].ends_with(",true"));
    let out = wordavg(&["coeffs", "--letters", "2"]);
    let text = stdout(&out);
    assert!(text.contains("\n0,1,0,0\n"));
    assert!(text.contains("\n1.-1,0,-1,-1\n"));
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    fs::write(&path, "B = [0.0]\nletters = [1]\n").unwrap();
    let out = wordavg(&["potential", "--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 2);
    fs::write(&path, "letter = 3\n").unwrap();
    assert_eq!(wordavg(&["census", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}
