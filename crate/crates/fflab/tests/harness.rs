use std::path::{Path, PathBuf};
use std::process::Command;

use fflab::{execute, read_records, write_records, Format, ReportRecord, RunConfig, Status};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn load(name: &str) -> RunConfig {
    RunConfig::load(&fixture(name)).unwrap()
}

fn task_of(cfg: &RunConfig) -> String {
    cfg.task.clone().expect("fixtures name their task")
}

fn run(name: &str) -> (Status, Vec<ReportRecord>) {
    let cfg = load(name);
    let out = execute(&task_of(&cfg), &cfg);
    (out.status, out.records)
}

fn bytes(records: &[ReportRecord], format: Format) -> Vec<u8> {
    let mut buf = Vec::new();
    write_records(records, format, &mut buf).unwrap();
    buf
}

fn only<'a>(records: &'a [ReportRecord], kind: &str) -> &'a ReportRecord {
    let mut it = records.iter().filter(|r| r.kind == kind);
    let r = it.next().unwrap_or_else(|| panic!("no {kind} record"));
    assert!(it.next().is_none(), "several {kind} records");
    r
}

#[test]
fn dissect_fixture_reports_identity() {
    let (status, records) = run("dissect_q5_n3.toml");
    assert_eq!(status, Status::Pass);
    let id = only(&records, "identity");
    assert_eq!(id.get("holds"), Some("true"));
    assert_eq!(id.get("evaluations"), Some("15625"));
    assert_eq!(id.get("integral").unwrap(), format!("[{},0,0,0]", id.get("brute_count").unwrap()));
    assert_eq!(only(&records, "measure").get("total_measure"), Some("1"));
}

#[test]
fn major_arc_fixture_is_q_to_mu_hat() {
    let (status, records) = run("major_q5_n3.toml");
    assert_eq!(status, Status::Pass);
    assert_eq!(only(&records, "major-total").get("major"), Some("[25,0,0,0]"));
}

#[test]
fn exponent_audit_emits_min_saving() {
    let (status, records) = run("audit_d3_n45.toml");
    assert_eq!(status, Status::Pass);
    let rows: Vec<_> = records.iter().filter(|r| r.kind == "min-saving").collect();
    assert_eq!(rows.len(), 8);
    for r in rows {
        assert_eq!(r.get("holds"), Some("true"));
        assert_eq!(r.get("n0"), Some("44"));
        assert_ne!(r.get("min_saving"), Some("-"));
    }
    // at the boundary n = n0 the outcome is recorded but not asserted
    let (_, records) = run("audit_d3_n44.toml");
    let row = only(&records, "min-saving");
    assert!(row.get("holds").is_none());
    assert!(row.get("passed").is_some());
}

#[test]
fn lattice_tasks_pass() {
    for name in ["lattice_minima.toml", "ratio_lemma.toml", "cape_lemma.toml"] {
        let (status, records) = run(name);
        assert_eq!(status, Status::Pass, "{name}");
        assert_eq!(records.len(), 100, "{name}");
    }
}

#[test]
fn moduli_tasks_pass() {
    let (status, records) = run("cone_q5_n3.toml");
    assert_eq!(status, Status::Pass);
    let cone = only(&records, "cone");
    let c: u64 = cone.get("cone").unwrap().parse().unwrap();
    assert_eq!(c + 1, cone.get("brute_count").unwrap().parse::<u64>().unwrap());

    let (status, records) = run("morphisms_q5.toml");
    assert_eq!(status, Status::Pass);
    let m = only(&records, "morphisms");
    assert_eq!((m.get("lines"), m.get("morphisms")), (Some("3"), Some("360")));
    assert!(only(&records, "smoothness").get("outcome").unwrap().starts_with("NoSingularPoint"));

    let (status, records) = run("langweil_q5.toml");
    assert_eq!(status, Status::Pass);
    let rows: Vec<_> = records.iter().filter(|r| r.kind == "count").collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1].get("field_order"), Some("25"));
}

#[test]
fn reruns_and_worker_counts_give_identical_bytes() {
    for name in ["dissect_q5_n3.toml", "lattice_minima.toml", "shrink_e1.toml"] {
        let cfg = load(name);
        let task = task_of(&cfg);
        let outputs: Vec<Vec<u8>> = [1, 2, 3]
            .into_iter()
            .flat_map(|threads| {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
                let records = pool.install(|| execute(&task, &cfg).records);
                [bytes(&records, Format::Csv), bytes(&records, Format::Jsonl)]
            })
            .collect();
        for pair in outputs.chunks(2).skip(1) {
            assert_eq!(pair[0], outputs[0], "{name} csv");
            assert_eq!(pair[1], outputs[1], "{name} jsonl");
        }
    }
}

#[test]
fn empty_stream_is_header_only_csv() {
    assert_eq!(bytes(&[], Format::Csv), b"task,record,kind,key,value\n");
    assert!(bytes(&[], Format::Jsonl).is_empty());
}

#[test]
fn records_round_trip() {
    let (_, mut records) = run("langweil_q5.toml");
    records.extend(run("dissect_q7_n2.toml").1);
    // a value needing CSV quoting and one needing JSON escaping
    records.push(ReportRecord {
        task: "x".into(),
        record: 0,
        kind: "odd".into(),
        fields: vec![("a".into(), "[1/2,0,\"q\"]".into()), ("b".into(), "line\nbreak".into())],
    });
    for format in [Format::Jsonl, Format::Csv] {
        let back = read_records(bytes(&records, format).as_slice(), format).unwrap();
        assert_eq!(back, records, "{format}");
    }
}

#[test]
fn malformed_form_names_the_line() {
    let err = RunConfig::load(&fixture("malformed.toml")).unwrap_err();
    assert!(err.path.ends_with("malformed.form"));
    assert_eq!(err.line, Some(4));
    assert!(err.to_string().contains("malformed.form:4:"), "{err}");
}

fn parse(text: &str) -> Result<RunConfig, fflab::ConfigError> {
    RunConfig::parse(text, Path::new("inline.toml"), &fixture(""))
}

#[test]
fn config_validation() {
    let base = "[field]\np = 5\n[problem]\nd = 3\nn = 2\ne = 1\n";
    assert!(parse(base).is_ok());
    let err = parse(&base.replace("p = 5", "p = 3")).unwrap_err();
    assert_eq!(err.line, Some(2));
    assert!(err.msg.contains("must exceed d"));
    let err = parse(&format!("{base}colour = 1\n")).unwrap_err();
    assert!(err.msg.contains("colour"), "{err}");
    assert!(parse(&base.replace("p = 5", "p = 5\nf = 2")).unwrap_err().msg.contains("modulus"));
    assert!(parse(&base.replace("p = 5", "p = 5\nf = 2\nmodulus = [1, 0, 1]")).unwrap_err().msg.contains("reducible"));
    assert!(parse(&base.replace("p = 5", "p = 5\nf = 2\nmodulus = [2, 0, 1]")).is_ok());
    assert!(parse(&format!("task = \"fly\"\n{base}")).unwrap_err().msg.contains("unknown task"));
    assert!(parse(&format!("{base}[params]\neta = [\"half\"]\n")).unwrap_err().msg.contains("eta"));
    assert!(parse(&format!("[run]\nbudget = 0\n{base}")).unwrap_err().msg.contains("budget"));
    assert!(parse(&format!("[run]\nformat = \"xml\"\n{base}")).is_err());
    // tasks that need a form say so
    let cfg = parse(base).unwrap();
    assert_eq!(execute("dissect-verify", &cfg).status, Status::ConfigError);
}

#[test]
fn budget_exhaustion_is_distinct_and_marked_incomplete() {
    let (status, records) = run("budget_tiny.toml");
    assert_eq!(status, Status::BudgetExhausted);
    let last = records.last().unwrap();
    assert_eq!(last.kind, "incomplete");
    assert!(last.get("reason").unwrap().contains("budget"));
}

fn fflab(args: &[&str], envs: &[(&str, &Path)]) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fflab"));
    cmd.args(args).env_remove("FFLAB_WORKERS").env_remove("FFLAB_OUT");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn cli_exit_codes_and_output_dir() {
    let dir = std::env::temp_dir().join(format!("fflab-cli-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let cfg = fixture("major_q5_n3.toml");
    let (code, stdout) = fflab(&["major-arc", "--config", cfg.to_str().unwrap(), "--out", d, "--workers", "2"], &[]);
    assert_eq!((code, stdout.trim()), (0, "major-arc: pass"));
    let first = std::fs::read(dir.join("major-arc.csv")).unwrap();

    let env_dir = dir.join("env");
    let (code, _) = fflab(&["major-arc", "--config", cfg.to_str().unwrap(), "--format", "jsonl"], &[("FFLAB_OUT", &env_dir)]);
    assert_eq!(code, 0);
    let jsonl = std::fs::read(env_dir.join("major-arc.jsonl")).unwrap();
    let back = read_records(jsonl.as_slice(), Format::Jsonl).unwrap();
    assert_eq!(bytes(&back, Format::Csv), first);

    let (code, _) = fflab(&["dissect-verify", "--config", fixture("malformed.toml").to_str().unwrap(), "--out", d], &[]);
    assert_eq!(code, 2);
    let (code, _) = fflab(&["major-arc", "--config", fixture("dissect_q5_n3.toml").to_str().unwrap(), "--out", d], &[]);
    assert_eq!(code, 2, "config names a different task");
    let (code, stdout) = fflab(&["dissect-verify", "--config", fixture("budget_tiny.toml").to_str().unwrap(), "--out", d], &[]);
    assert_eq!((code, stdout.trim()), (3, "dissect-verify: budget exhausted"));
    let partial = std::fs::read_to_string(dir.join("dissect-verify.csv")).unwrap();
    assert!(partial.contains(",incomplete,reason,"));
    std::fs::remove_dir_all(&dir).unwrap();
}
