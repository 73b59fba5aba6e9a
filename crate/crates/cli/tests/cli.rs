use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use coref_core::ingest::write_fixture;
use coref_core::synth::{generate, write_xml, BenchmarkConfig};
use coref_core::PaperRecord;
use flate2::write::GzEncoder;
use flate2::Compression;

fn coref(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coref"))
        .args(args)
        .env("COREF_LOG", "debug")
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn three_papers(dir: &Path) -> std::path::PathBuf {
    let records = [
        PaperRecord::new("conf/a/1", Some(2017), "One").with_authors([
            "Chen Li 0001",
            "Ann Ames",
            "Bob Burr",
        ]),
        PaperRecord::new("conf/a/2", Some(2018), "Two").with_authors(["Chen Li 0001", "Bob Burr"]),
        PaperRecord::new("conf/a/3", None, "Three").with_authors(["Chen Li 0002", "Cy Cole"]),
    ];
    let mut bytes = Vec::new();
    write_fixture(&mut bytes, &records).unwrap();
    let p = dir.join("three.tsv");
    fs::write(&p, bytes).unwrap();
    p
}

#[test]
fn ingest_fixture_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let input = three_papers(dir.path());
    let snap = dir.path().join("g.crg");
    let out = coref(&["ingest", "--input", path(&input), "--out", path(&snap)]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("papers\t3\n"), "{stdout}");
    assert!(stdout.contains("authors\t5\n"), "{stdout}");
    assert!(snap.exists());

    let stats = coref(&["stats", "--input", path(&snap)]);
    assert_eq!(stats.status.code(), Some(0));
    assert!(String::from_utf8(stats.stdout)
        .unwrap()
        .contains("edges\t7\n"));
}

#[test]
fn gzip_input_gives_the_same_graph() {
    let dir = tempfile::tempdir().unwrap();
    let records = generate(&BenchmarkConfig::default());
    let mut xml = Vec::new();
    write_xml(&mut xml, &records).unwrap();
    let plain = dir.path().join("dblp.xml");
    fs::write(&plain, &xml).unwrap();
    let gz = dir.path().join("dblp.xml.gz");
    let mut enc = GzEncoder::new(fs::File::create(&gz).unwrap(), Compression::default());
    enc.write_all(&xml).unwrap();
    enc.finish().unwrap();

    let a = dir.path().join("a.crg");
    let b = dir.path().join("b.crg");
    assert_eq!(
        coref(&["ingest", "--input", path(&plain), "--out", path(&a)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        coref(&["ingest", "--input", path(&gz), "--out", path(&b)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn malformed_xml_exits_two_without_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.xml");
    fs::write(
        &input,
        "<dblp><article key=\"a/1\"><author>X</title></article></dblp>",
    )
    .unwrap();
    let snap = dir.path().join("g.crg");
    let out = coref(&["ingest", "--input", path(&input), "--out", path(&snap)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte"));
    assert!(!snap.exists());

    let missing = coref(&["stats", "--input", path(&dir.path().join("nope.xml"))]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn query_problems_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = three_papers(dir.path());
    let out_dir = dir.path().join("out");
    let absent = coref(&[
        "disambiguate",
        "--input",
        path(&input),
        "--query",
        "Wei Wang",
        "--out",
        path(&out_dir),
    ]);
    assert_eq!(absent.status.code(), Some(3));
    let single = coref(&[
        "disambiguate",
        "--input",
        path(&input),
        "--query",
        "Cy Cole",
        "--out",
        path(&out_dir),
    ]);
    assert_eq!(single.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&single.stderr).contains("nothing to disambiguate"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = three_papers(dir.path());
    let bad_measure = coref(&[
        "disambiguate",
        "--input",
        path(&input),
        "--query",
        "Chen Li",
        "--measure",
        "jaccard",
    ]);
    assert_eq!(bad_measure.status.code(), Some(1));
    let bad_format = coref(&[
        "disambiguate",
        "--input",
        path(&input),
        "--query",
        "Chen Li",
        "--format",
        "xml",
        "--out",
        path(&dir.path().join("o")),
    ]);
    assert_eq!(bad_format.status.code(), Some(1));
    let empty_rho = coref(&[
        "sweep",
        "--input",
        path(&input),
        "--query",
        "Chen Li",
        "--rho-list",
        "",
    ]);
    assert_eq!(empty_rho.status.code(), Some(1));
}

#[test]
fn disambiguate_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = three_papers(dir.path());
    let out_dir = dir.path().join("out");
    let out = coref(&[
        "disambiguate",
        "--input",
        path(&input),
        "--query",
        "  Chen   Li ",
        "--measure",
        "aa",
        "--out",
        path(&out_dir),
        "--threads",
        "2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["measure"], "aa");
    assert_eq!(report["rho"], 0.0);
    for key in ["tp", "fp", "tn", "fn", "unknown"] {
        assert!(report["counts"][key].is_u64(), "{key}");
    }
    for key in ["precision", "accuracy", "specificity", "sensitivity"] {
        assert!(report["metrics"].get(key).is_some(), "{key}");
    }
    assert!(report["zero_tail"]["pairs"].is_u64() && report["zero_tail"]["fn"].is_u64());
    assert!(
        report["ranking"].get("kta_literal").is_some() && report["ranking"].get("auc").is_some()
    );
    assert_eq!(report["counts"]["tp"], 1);
    assert_eq!(report["counts"]["tn"], 2);

    let pairs = fs::read_to_string(out_dir.join("pairs.csv")).unwrap();
    assert_eq!(pairs.lines().count(), 4);
    let clusters = fs::read_to_string(out_dir.join("clusters.csv")).unwrap();
    assert_eq!(
        clusters.lines().next().unwrap(),
        "mention_id,paper_key,author_key,cluster"
    );
    assert_eq!(clusters.lines().count(), 4);
}

#[test]
fn sweep_rows_and_monotone_sensitivity() {
    let dir = tempfile::tempdir().unwrap();
    let records = generate(&BenchmarkConfig {
        unsuffixed_papers: 3,
        ..Default::default()
    });
    let mut bytes = Vec::new();
    write_fixture(&mut bytes, &records).unwrap();
    let input = dir.path().join("bench.tsv");
    fs::write(&input, bytes).unwrap();
    let out_dir = dir.path().join("out");
    let out = coref(&[
        "sweep",
        "--input",
        path(&input),
        "--query",
        "Chen Li",
        "--rho-list",
        "0,0.5,1,2",
        "--out",
        path(&out_dir),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 12);
    for measure in rows.chunks(4) {
        let sens: Vec<f64> = measure.iter().map(|r| r[10].parse().unwrap()).collect();
        assert!(sens.windows(2).all(|w| w[1] <= w[0]), "{sens:?}");
        assert!(
            measure.iter().all(|r| r[6].parse::<u64>().unwrap() > 0),
            "unknown pairs expected"
        );
    }
}
