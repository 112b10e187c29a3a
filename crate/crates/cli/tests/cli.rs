use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn racgdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_racgdiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn reduce_example() {
    let o = racgdiv(&[
        "word",
        "reduce",
        "--graph",
        "gamma:1",
        "--word",
        "a_1 a_0 a_1",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "a_0");
    let o = racgdiv(&["word", "reduce", "--graph", "gamma:1", "--word", "a_0 a_0"]);
    assert_eq!(stdout(&o).trim(), "e");
}

#[test]
fn word_geodesic_and_walls() {
    let o = racgdiv(&[
        "word",
        "geodesic",
        "--graph",
        "gamma:2",
        "--word",
        "a_2 b_2 a_2",
    ]);
    assert_eq!(stdout(&o).trim(), "true");
    let o = racgdiv(&[
        "word",
        "geodesic",
        "--graph",
        "gamma:1",
        "--word",
        "a_0 a_1 a_0",
    ]);
    assert_eq!(stdout(&o).trim(), "false");
    let o = racgdiv(&["word", "walls", "--graph", "gamma:2", "--word", "a_2 b_2"]);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines, ["a_2\ta_2", "b_2\ta_2 b_2 a_2"]);
}

#[test]
fn zero_radius_divergence() {
    let o = racgdiv(&[
        "div",
        "geodesic",
        "--graph",
        "gamma:2",
        "--geodesic",
        "periodic",
        "--word",
        "a_2 b_2",
        "--r",
        "0",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[5], "found");
    assert_eq!(row[6], "0");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&racgdiv(&["frobnicate"])), 2);
    assert_eq!(
        code(&racgdiv(&[
            "div", "geodesic", "--graph", "gamma:2", "--bogus"
        ])),
        2
    );
    assert_eq!(code(&racgdiv(&["experiment", "paper-unknown"])), 2);
    assert_eq!(
        code(&racgdiv(&[
            "div", "geodesic", "--graph", "gamma:2", "--word", "a_2 b_2"
        ])),
        2
    );
    assert_eq!(
        code(&racgdiv(&[
            "div",
            "geodesic",
            "--graph",
            "gamma:2",
            "--word",
            "a_2 b_2",
            "--r",
            "3",
            "--cap-radius",
            "4"
        ])),
        2
    );
    // domain errors
    assert_eq!(
        code(&racgdiv(&[
            "word", "reduce", "--graph", "gamma:1", "--word", "a_9"
        ])),
        1
    );
    assert_eq!(
        code(&racgdiv(&[
            "div", "geodesic", "--graph", "gamma:2", "--word", "a_2 a_0", "--r", "1"
        ])),
        1
    );
    assert_eq!(
        code(&racgdiv(&["graph", "validate", "/nonexistent/graph.txt"])),
        1
    );
}

#[test]
fn every_subcommand_has_help() {
    let paths: &[&[&str]] = &[
        &[],
        &["graph"],
        &["graph", "gen"],
        &["graph", "validate"],
        &["graph", "dot"],
        &["word"],
        &["word", "reduce"],
        &["word", "geodesic"],
        &["word", "walls"],
        &["ball"],
        &["div"],
        &["div", "pair"],
        &["div", "geodesic"],
        &["div", "lower"],
        &["div", "gersten"],
        &["fit"],
        &["experiment"],
    ];
    for p in paths {
        let mut args = p.to_vec();
        args.push("--help");
        let o = racgdiv(&args);
        assert_eq!(code(&o), 0, "{p:?}");
        assert!(stdout(&o).contains("Usage"), "{p:?}");
    }
}

#[test]
fn graph_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = racgdiv(&["graph", "gen", "--graph", "gamma:3"]);
    assert_eq!(code(&o), 0);
    let path = dir.path().join("g3.txt");
    fs::write(&path, &o.stdout).unwrap();
    let v = racgdiv(&["graph", "validate", path.to_str().unwrap()]);
    assert_eq!(
        stdout(&v).trim(),
        "ok: 8 generators, 12 edges, triangle-free: yes"
    );
    let spec = format!("file:{}", path.display());
    let r = racgdiv(&["word", "reduce", "--graph", &spec, "--word", "b_2 a_1 b_2"]);
    assert_eq!(stdout(&r).trim(), "a_1");
    let dot = racgdiv(&["graph", "dot", "--graph", "gamma:3"]);
    assert_eq!(stdout(&dot).matches(" -- ").count(), 12);
}

#[test]
fn ball_sizes() {
    let o = racgdiv(&["ball", "--graph", "gamma:1", "--r", "2"]);
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert_eq!(last, "2\t8\t13");
    let o = racgdiv(&["ball", "--graph", "gamma:1", "--r", "1", "--emit-dot"]);
    assert!(stdout(&o).starts_with("graph cayley"));
}

fn csv_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect()
}

#[test]
fn alpha_experiment_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("alpha");
    let o = racgdiv(&[
        "experiment",
        "paper-alpha",
        "--m",
        "2",
        "--r-max",
        "8",
        "--out",
        out.to_str().unwrap(),
        "--emit-dot",
    ]);
    assert_eq!(code(&o), 0);
    let lines = csv_lines(&out.join("samples.csv"));
    assert_eq!(lines.len(), 9);
    let values: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(6).unwrap())
        .collect();
    assert_eq!(values, ["6", "16", "30", "48", "70", "96", "126", "160"]);
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("expected-exponent = 2"));
    assert!(report.contains("exponent: PASS"));
    let dot = fs::read_to_string(out.join("path_r2.dot")).unwrap();
    assert_eq!(dot.matches("color=red, penwidth=2").count(), 16);

    let fit = racgdiv(&[
        "fit",
        "--input",
        out.join("samples.csv").to_str().unwrap(),
        "--fit-range",
        "2:8",
        "--expected-exponent",
        "2",
        "--tol",
        "0.1",
    ]);
    assert_eq!(code(&fit), 0);
    assert!(stdout(&fit).contains("exponent: FAIL"));
}

#[test]
fn config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# smaller run\nr-max = 3\ntol = 0.05\nworkers = 2\n").unwrap();
    let out = dir.path().join("flat");
    let o = racgdiv(&[
        "experiment",
        "paper-flat",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_lines(&out.join("samples.csv")).len(), 4);
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("tol = 0.05"));
    assert!(report.contains("word = a_0 b_0"));

    let o = racgdiv(&[
        "experiment",
        "paper-flat",
        "--config",
        cfg.to_str().unwrap(),
        "--r-max",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_lines(&out.join("samples.csv")).len(), 6);

    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(
        code(&racgdiv(&[
            "experiment",
            "paper-flat",
            "--config",
            cfg.to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn output_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let run = |w: &str| {
        let out = dir.path().join(format!("w{w}"));
        let o = racgdiv(&[
            "experiment",
            "paper-alpha",
            "--r-max",
            "6",
            "--workers",
            w,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        fs::read(out.join("samples.csv")).unwrap()
    };
    assert_eq!(run("1"), run("8"));
}

#[test]
fn other_measures() {
    let o = racgdiv(&[
        "div",
        "pair",
        "--graph",
        "gamma:3",
        "--ray1",
        "support:a_3",
        "--ray2",
        "support:a_3:b_0 a_0",
        "--r-max",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    let values: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(6).unwrap().to_string())
        .collect();
    assert_eq!(values, ["4", "8", "12"]);

    let o = racgdiv(&[
        "div",
        "lower",
        "--graph",
        "gamma:3",
        "--geodesic",
        "gamma",
        "--t",
        "2",
        "--window",
        "-10:10",
        "--r",
        "2",
    ]);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.ends_with(",16,8,50000000,5122,true,-10"), "{row}");

    let o = racgdiv(&["div", "gersten", "--graph", "gamma:1", "--r", "1"]);
    assert!(stdout(&o).lines().nth(1).unwrap().contains(",found,4,"));
}
