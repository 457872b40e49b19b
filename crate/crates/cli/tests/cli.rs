use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn mfold(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfold"))
        .args(args)
        .current_dir(dir)
        .env_remove("MFOLD_DATA_DIR")
        .output()
        .expect("run mfold")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn body_lines(text: &str) -> Vec<String> {
    let mut lines: Vec<String> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(str::to_string)
        .collect();
    lines.sort();
    lines
}

const FACTS: &str = "InstrumentContribution\tu1\tCONTRIBUTOR={WillMcGregor}\tINSTRUMENT-ROLE={Bass,BassGuitar}\tRECORDING={PreciousThings}\n\
InstrumentContribution\tu2\tCONTRIBUTOR={MichaelHarrison}\tINSTRUMENT-ROLE={Violin}\tRECORDING={PrettyGoodYear}\n";

/// Two binary relations on a line of five entities: `next` links k to k+1.
fn toy_train() -> String {
    let mut s = String::new();
    for k in 0..4 {
        s.push_str(&format!("next\thead=e{k}\ttail=e{}\n", k + 1));
        s.push_str(&format!("prev\thead=e{}\ttail=e{k}\n", k + 1));
    }
    s
}

#[test]
fn t_id_then_recover_reproduces_facts() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("facts.tsv"), FACTS).unwrap();
    let out = mfold(dir.path(), &["convert", "facts.tsv", "--mode", "t-id", "-o", "tid.tsv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("instances\t2\t3"), "{}", stdout(&out));
    let out = mfold(dir.path(), &["convert", "tid.tsv", "--mode", "recover", "-o", "back.tsv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let back = fs::read_to_string(dir.path().join("back.tsv")).unwrap();
    assert_eq!(body_lines(&back), body_lines(FACTS));
}

#[test]
fn convert_empty_file() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("empty.tsv"), "").unwrap();
    let out = mfold(dir.path(), &["convert", "empty.tsv", "--mode", "t", "-o", "out.tsv"]);
    assert!(out.status.success());
    assert!(body_lines(&fs::read_to_string(dir.path().join("out.tsv")).unwrap()).is_empty());
    assert!(stdout(&out).contains("entities\t0\t0"));
    assert!(stdout(&out).contains("instances\t0\t0"));
}

#[test]
fn recover_without_ids_is_data_error() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("g.tsv"), toy_train()).unwrap();
    let out = mfold(dir.path(), &["convert", "g.tsv", "--mode", "recover", "-o", "x.tsv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_error_reports_line() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.tsv"), "r\ta=x\tb=y\nr\toops\n").unwrap();
    let out = mfold(dir.path(), &["stats", "bad.tsv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.tsv:2"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    assert_eq!(mfold(dir.path(), &["frobnicate"]).status.code(), Some(1));
    fs::write(dir.path().join("g.tsv"), toy_train()).unwrap();
    let out = mfold(dir.path(), &["train", "g.tsv", "--dim", "0", "-o", "m.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stats_and_data_dir() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("g.tsv"), toy_train()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mfold"))
        .args(["stats", "g.tsv"])
        .env("MFOLD_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# mfold "));
    assert!(text.contains("entities\t5\n"));
    assert!(text.contains("instances\t8\n"));
    assert!(text.contains("fold_2\t8\n"));
}

#[test]
fn train_zero_epochs_saves_initial_model() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("g.tsv"), toy_train()).unwrap();
    let out = mfold(
        dir.path(),
        &["train", "g.tsv", "--mode", "m-transh", "--dim", "25", "--epochs", "0", "-o", "m.txt"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let model = fs::read_to_string(dir.path().join("m.txt")).unwrap();
    assert!(model.contains("\ndim\t25\n"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dim = 25"));
}

#[test]
fn same_seed_gives_identical_model_files() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("g.tsv"), toy_train()).unwrap();
    let args = |out: &'static str| {
        vec!["train", "g.tsv", "--mode", "m-transh", "--dim", "8", "--epochs", "20", "--seed", "3", "-o", out]
    };
    assert!(mfold(dir.path(), &args("a.txt")).status.success());
    assert!(mfold(dir.path(), &args("b.txt")).status.success());
    assert_eq!(
        fs::read(dir.path().join("a.txt")).unwrap(),
        fs::read(dir.path().join("b.txt")).unwrap()
    );
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("g.tsv"), toy_train()).unwrap();
    fs::write(dir.path().join("c.toml"), "dim = 6\nepochs = 3\nseed = 9\n").unwrap();
    let out = mfold(
        dir.path(),
        &["train", "g.tsv", "--config", "c.toml", "--epochs", "2", "-o", "m.txt", "--log", "log.txt"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let echo = String::from_utf8_lossy(&out.stderr);
    assert!(echo.contains("dim = 6") && echo.contains("epochs = 2") && echo.contains("seed = 9"));
    let log = fs::read_to_string(dir.path().join("log.txt")).unwrap();
    assert_eq!(body_lines(&log).len(), 2);
    assert!(body_lines(&log)[0].starts_with("epoch 1 loss "));
    let bad = mfold(dir.path(), &["train", "g.tsv", "--config", "missing.toml", "-o", "m.txt"]);
    assert_eq!(bad.status.code(), Some(2));
    fs::write(dir.path().join("u.toml"), "dimension = 6\n").unwrap();
    let unknown = mfold(dir.path(), &["train", "g.tsv", "--config", "u.toml", "-o", "m.txt"]);
    assert_eq!(unknown.status.code(), Some(1));
}

/// A hand-set model in which `next(x) = x + 1` on a line is exact.
fn exact_model() -> String {
    let mut s = String::from("mfold-model\t1\nkind\ttransh\ndim\t2\nconfig\t-\nentities\t5\n");
    for k in 0..5 {
        s.push_str(&format!("e\tentity\te{k}\t{k}.0\t0.0\n"));
    }
    s.push_str("relations\t1\nrelation\tnext\nroles\thead\ttail\nnormal\t0.0\t1.0\noffset\t1.0\t0.0\nend\n");
    s
}

#[test]
fn eval_exact_model_scores_perfectly_and_recomputes() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("m.txt"), exact_model()).unwrap();
    fs::write(dir.path().join("t.tsv"), "next\thead=e1\ttail=e2\nnext\thead=e3\ttail=e4\n").unwrap();
    let out = mfold(dir.path(), &["eval", "m.txt", "t.tsv", "--protocol", "triple", "-o", "r.txt"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("r.txt")).unwrap();
    assert!(text.contains("protocol dim hit10 mean_rank\nTransH:triple 2 1 1\n"), "{text}");
    let parsed = mfold::eval::parse_export(&text).unwrap();
    let n = parsed.records.len() as f64;
    let hits = parsed.records.iter().filter(|r| r.rank <= 10).count() as f64;
    let mean = parsed.records.iter().map(|r| r.rank as f64).sum::<f64>() / n;
    assert_eq!(hits / n, parsed.hit_at_10);
    assert_eq!(mean, parsed.mean_rank);
}

#[test]
fn eval_incompatible_protocol_is_usage_error() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("m.txt"), exact_model()).unwrap();
    fs::write(dir.path().join("t.tsv"), "next\thead=e1\ttail=e2\n").unwrap();
    let out = mfold(dir.path(), &["eval", "m.txt", "t.tsv", "--protocol", "instance-id"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eval_unknown_entity_and_skip() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("m.txt"), exact_model()).unwrap();
    fs::write(dir.path().join("t.tsv"), "next\thead=e1\ttail=e2\nnext\thead=e4\ttail=z\n").unwrap();
    let out = mfold(dir.path(), &["eval", "m.txt", "t.tsv", "--protocol", "triple"]);
    assert_eq!(out.status.code(), Some(2));
    let out = mfold(dir.path(), &["eval", "m.txt", "t.tsv", "--protocol", "triple", "--skip-unknown"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("TransH:triple 2 1 1\n"));
}

#[test]
fn split_writes_consistent_variants() {
    let dir = TempDir::new().unwrap();
    let mut facts = String::new();
    for k in 0..30 {
        facts.push_str(&format!(
            "M\tf{k}\ta={{x{}}}\tb={{y{},y{}}}\tc={{z{}}}\n",
            k % 5,
            k % 4,
            (k + 1) % 4,
            k % 3
        ));
    }
    fs::write(dir.path().join("facts.tsv"), facts).unwrap();
    let out = mfold(
        dir.path(),
        &["split", "facts.tsv", "--format", "facts", "--out-dir", "data", "--seed", "4", "--min-entity-instances", "2"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["g_id", "g", "g_s2c"] {
        for side in ["train", "test"] {
            assert!(dir.path().join(format!("data/{name}_{side}.tsv")).exists());
        }
    }
    let out = mfold(dir.path(), &["convert", "data/g_train.tsv", "--mode", "s2c", "-o", "s2c.tsv"]);
    assert!(out.status.success());
    let ours = fs::read_to_string(dir.path().join("s2c.tsv")).unwrap();
    let theirs = fs::read_to_string(dir.path().join("data/g_s2c_train.tsv")).unwrap();
    assert_eq!(body_lines(&ours), body_lines(&theirs));
    assert!(stdout(&out).contains("stat\tbefore\tafter"));
}

#[test]
fn witness_reports_collision() {
    let dir = TempDir::new().unwrap();
    let out = mfold(dir.path(), &["witness", "--out-dir", "w"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("distinct\ttrue") && text.contains("same_s2c\ttrue"));
    assert!(dir.path().join("w/g1.tsv").exists());
}
