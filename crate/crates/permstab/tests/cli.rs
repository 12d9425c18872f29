//! End-to-end tests of the command-line interface: files in, files out,
//! exit codes, and run-to-run determinism.

use std::path::Path;
use std::process::{Command, Output};

use permstab::harness::{perturb, random_honest_action, zoo_gog, PerturbModel};
use permstab::io::{
    read_json, write_json, AlmostActionFile, AutomorphismFile, GogFile, SchreierGraphFile,
};
use permstab::perm::Perm;
use permstab::ratio::rat_int;
use permstab::schreier::{AlmostAutomorphism, SchreierGraph};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_permstab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn stabilize_writes_an_exact_action_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let gog = zoo_gog("sl2z").unwrap();
    let gog_path = dir.path().join("gog.json");
    write_json(&gog_path, &GogFile::from_gog(&gog)).unwrap();

    let honest = random_honest_action(&gog, 12, 5);
    let p = perturb(&honest, &PerturbModel::Transpositions { per_letter: 2 }, 6);
    let action_path = dir.path().join("action.json");
    write_json(&action_path, &AlmostActionFile::from_almost_action(&p.action)).unwrap();

    let out_path = dir.path().join("fixed.json");
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "stabilize",
        "--gog",
        path_str(&gog_path),
        "--action",
        path_str(&action_path),
        "--output",
        path_str(&out_path),
        "--report",
        path_str(&report_path),
    ]);
    assert!(
        out.status.success(),
        "stabilize failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("defect"), "summary missing from stderr: {stderr}");

    // the emitted action must parse and be exactly honest
    let fixed: AlmostActionFile = read_json(&out_path).unwrap();
    let fixed = fixed.to_almost_action(&gog).unwrap();
    assert_eq!(fixed.defect(), rat_int(0));
    assert!(fixed.is_honest());

    // the report must carry the measured defects as rational strings
    let report: serde_json::Value = read_json(&report_path).unwrap();
    assert_eq!(report["output_defect"], "0");
    assert!(report["input_defect"].as_str().is_some());
}

#[test]
fn stabilize_streams_to_stdout_when_no_output_is_given() {
    let dir = tempfile::tempdir().unwrap();
    let gog = zoo_gog("z2_star_z3").unwrap();
    let gog_path = dir.path().join("gog.json");
    write_json(&gog_path, &GogFile::from_gog(&gog)).unwrap();
    let honest = random_honest_action(&gog, 6, 1);
    let action_path = dir.path().join("action.json");
    write_json(&action_path, &AlmostActionFile::from_almost_action(&honest)).unwrap();

    let out = run(&[
        "stabilize",
        "--gog",
        path_str(&gog_path),
        "--action",
        path_str(&action_path),
    ]);
    assert!(out.status.success());
    let parsed: AlmostActionFile = serde_json::from_slice(&out.stdout).unwrap();
    let back = parsed.to_almost_action(&gog).unwrap();
    // honest input round-trips unchanged
    assert_eq!(back.letters(), honest.letters());
}

#[test]
fn missing_files_exit_with_code_two() {
    let out = run(&["stabilize", "--gog", "/nonexistent/gog.json", "--action", "/nonexistent/a.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn cone_solves_a_problem_file_with_defaulted_weights() {
    let dir = tempfile::tempdir().unwrap();
    let problem_path = dir.path().join("problem.json");
    write_json(
        &problem_path,
        &serde_json::json!({
            "matrix": [[1, -1]],
            "lambda": [3, 1],
        }),
    )
    .unwrap();
    let sol_path = dir.path().join("solution.json");
    let out = run(&[
        "cone",
        "--problem",
        path_str(&problem_path),
        "--output",
        path_str(&sol_path),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sol: serde_json::Value = read_json(&sol_path).unwrap();
    assert_eq!(sol["lambda_prime"], serde_json::json!([1, 1]));
    assert_eq!(sol["in_kernel"], true);
    assert_eq!(sol["in_cone"], true);
    assert_eq!(sol["norm_nonincreasing"], true);
    assert_eq!(sol["distance"], "2");
}

#[test]
fn repair_emits_a_bundled_result_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    // an order-2 lift on 8 vertices: two levels of 4, labels copied
    let base = Perm::new(vec![1, 2, 3, 0]).unwrap();
    let mut labels = Vec::new();
    for b in [&base, &base.inverse()] {
        let mut map: Vec<usize> = (0..8).collect();
        for level in 0..2 {
            for x in 0..4 {
                map[level * 4 + x] = level * 4 + b.apply(x);
            }
        }
        labels.push(Perm::new(map).unwrap());
    }
    // damage one edge of the first label
    labels[0] = labels[0].compose(&Perm::transposition(8, 0, 1));
    let graph = SchreierGraph::new(8, labels).unwrap();
    let alpha = Perm::new(vec![4, 5, 6, 7, 0, 1, 2, 3]).unwrap();
    let am = AlmostAutomorphism::strict(&graph, alpha, 2).unwrap();

    let graph_path = dir.path().join("graph.json");
    let am_path = dir.path().join("automorphism.json");
    write_json(&graph_path, &SchreierGraphFile::from_graph(&graph)).unwrap();
    write_json(&am_path, &AutomorphismFile::from_automorphism(&am)).unwrap();

    let out = run(&[
        "repair",
        "--graph",
        path_str(&graph_path),
        "--automorphism",
        path_str(&am_path),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let bundle: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // repaired graph and automorphism parse back and are exact
    let graph2: SchreierGraphFile = serde_json::from_value(bundle["graph"].clone()).unwrap();
    let graph2 = graph2.to_graph().unwrap();
    let am2: AutomorphismFile = serde_json::from_value(bundle["automorphism"].clone()).unwrap();
    let am2 = am2.to_automorphism(&graph2).unwrap();
    assert!(am2.is_exact(&graph2));
    assert!(am2.vertex_map.pow(2).is_identity());
    assert!(bundle["report"]["edge_diff"].is_u64());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("edge diff"), "missing summary: {stderr}");
}

#[test]
fn repair_writes_separate_files_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let base = Perm::new(vec![1, 0, 3, 2]).unwrap();
    let graph = SchreierGraph::new(4, vec![base.clone(), base.clone()]).unwrap();
    let am = AlmostAutomorphism::strict(&graph, Perm::identity(4), 3).unwrap();
    let graph_path = dir.path().join("graph.json");
    let am_path = dir.path().join("am.json");
    write_json(&graph_path, &SchreierGraphFile::from_graph(&graph)).unwrap();
    write_json(&am_path, &AutomorphismFile::from_automorphism(&am)).unwrap();
    let og = dir.path().join("out_graph.json");
    let oa = dir.path().join("out_am.json");
    let rp = dir.path().join("report.json");
    let out = run(&[
        "repair",
        "--graph",
        path_str(&graph_path),
        "--automorphism",
        path_str(&am_path),
        "--out-graph",
        path_str(&og),
        "--out-automorphism",
        path_str(&oa),
        "--report",
        path_str(&rp),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty(), "file outputs must not also print to stdout");
    let rg: SchreierGraphFile = read_json(&og).unwrap();
    let rg = rg.to_graph().unwrap();
    let ra: AutomorphismFile = read_json(&oa).unwrap();
    assert!(ra.to_automorphism(&rg).unwrap().is_exact(&rg));
    let report: serde_json::Value = read_json(&rp).unwrap();
    assert!(report["vertex_diff"].is_u64());
}

#[test]
fn bench_prints_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.json");
    write_json(
        &config_path,
        &serde_json::json!({
            "gog_name": "sl2z",
            "degree": 12,
            "model": {"kind": "transpositions", "per_letter": 1},
            "trials": 3,
            "seed": 7,
        }),
    )
    .unwrap();
    let first = run(&["bench", "--config", path_str(&config_path)]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let text = String::from_utf8(first.stdout).unwrap();
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 4, "header plus one row per trial: {text}");
    assert_eq!(
        lines[0],
        "gog,|X|,model,seed,delta,kernel_defect,cone_ratio,distance,runtime_ms,fallback"
    );
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 10, "malformed row: {row}");
        assert_eq!(fields[0], "sl2z");
        assert_eq!(fields[1], "12");
        assert_eq!(fields[2], "transpositions:1");
    }

    // identical config ⇒ identical records, runtime excluded
    let second = run(&["bench", "--config", path_str(&config_path)]);
    let text2 = String::from_utf8(second.stdout).unwrap();
    let strip = |t: &str| -> Vec<Vec<String>> {
        t.trim_end()
            .lines()
            .map(|row| {
                row.split(',')
                    .enumerate()
                    .filter(|(i, _)| *i != 8)
                    .map(|(_, f)| f.to_string())
                    .collect()
            })
            .collect()
    };
    assert_eq!(strip(&text), strip(&text2));
}

#[test]
fn bench_accepts_a_config_array_and_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("configs.json");
    write_json(
        &config_path,
        &serde_json::json!([
            {
                "gog_name": "f2_x_z2",
                "degree": 8,
                "model": {"kind": "rewire", "rate": 0.2},
                "trials": 2,
                "seed": 1,
            },
            {
                "gog_name": "two_edge",
                "degree": 6,
                "model": {"kind": "transpositions", "per_letter": 1},
                "trials": 2,
                "seed": 2,
            }
        ]),
    )
    .unwrap();
    let csv_path = dir.path().join("out.csv");
    let out = run(&[
        "bench",
        "--config",
        path_str(&config_path),
        "--output",
        path_str(&csv_path),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 5, "header plus four rows: {text}");
    assert!(lines[1].starts_with("f2_x_z2,8,rewire:0.2,"));
    assert!(lines[3].starts_with("two_edge,6,transpositions:1,"));
}
