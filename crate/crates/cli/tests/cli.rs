use std::process::{Command, Output};

fn bispec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bispec")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn parse_prints_the_normal_form() {
    let o = bispec(&["parse", "x*d + 1", "--style", "dbasis"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("D + 1"), "{}", stdout(&o));
}

#[test]
fn mul_and_conj() {
    let o = bispec(&["mul", "d", "x"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("x*d + 1"), "{}", stdout(&o));
    let o = bispec(&["conj", "x*d"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("-x*d - 1"), "{}", stdout(&o));
}

#[test]
fn twist_accepts_a_negative_scale() {
    let o = bispec(&["twist", "x^2", "--scale", "-1/3", "--by", "bessel(-1, 1, 3)", "--style", "graded"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn darboux_exit_codes() {
    let good = bispec(&["darboux", "--l", "d^2", "--p", "x*d - 1", "--q", "d + 1/x", "--theta", "x"]);
    assert_eq!(good.status.code(), Some(0), "{}", stdout(&good));
    assert!(stdout(&good).contains("PASS"));
    let bad = bispec(&["darboux", "--l", "d^2", "--p", "x*d", "--q", "d + 1/x", "--theta", "x"]);
    assert_eq!(bad.status.code(), Some(1), "{}", stdout(&bad));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bispec(&["parse", "d +"]).status.code(), Some(2));
    assert_eq!(bispec(&["run", "no_such_job"]).status.code(), Some(2));
    assert_eq!(bispec(&["parse", "d ; x"]).status.code(), Some(2));
}

#[test]
fn bundled_jobs_and_waves() {
    let o = bispec(&["run", "ex3_4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = bispec(&["wave-check", "hermite"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = bispec(&["--format", "structured", "list-builtin"]);
    assert!(stdout(&o).contains("kind=job name=ex2_6"));
    assert!(stdout(&o).contains("kind=triple name=q_bessel"));
}
