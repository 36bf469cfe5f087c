use std::path::Path;
use std::process::{Command, Output};

const BM_SYMBOLS: &str = r#"
name = "bm-symbols"
[model]
dimension = 1
catalog = { name = "additive-bm", variance = [0.0, 1.0, 0.5] }
[task]
kind = "symbol-sweep"
taus = [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25]
x = [0.0]
frequencies = [[0.5], [1.0], [1.5], [2.0], [2.5], [3.0], [3.5], [4.0], [4.5], [5.0]]
"#;

const CP_ESTIMATES: &str = r#"
name = "cp-estimates"
[model]
dimension = 1
[model.drift]
kind = "constant"
values = [0.5]
[model.diffusion]
kind = "constant"
values = [0.0]
[model.jumps]
family = "compound-poisson"
intensity = { kind = "constant", values = [2.0] }
law = { law = "gaussian", mean = 0.3, std = 0.5 }
[task]
kind = "estimate-sweep"
taus = [0.0]
x = [0.0]
frequencies = [[1.0], [2.0]]
paths = 500
seed = 3
"#;

fn itosym(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itosym"))
        .args(args)
        .env("ITOSYM_OUT", out)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn symbol_sweep_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", BM_SYMBOLS);
    let out = dir.path().join("out");
    let o = itosym(&["run", &cfg], &out);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let run = out.join("bm-symbols");
    let csv = std::fs::read_to_string(run.join("symbols.csv")).unwrap();
    assert_eq!(csv.lines().count(), 101);
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(run.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["task"], "symbol-sweep");
    assert_eq!(manifest["model_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn missing_key_exits_with_parse_code_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        &CP_ESTIMATES.replace("paths = 500\n", ""),
    );
    let out = dir.path().join("out");
    let o = itosym(&["run", &cfg], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("paths"));
    assert!(!out.exists());
}

#[test]
fn sector_violation_exits_with_hypothesis_code() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
name = "drift-lower"
[model]
dimension = 1
catalog = { name = "pure-drift" }
[model.drift]
kind = "constant"
values = [2.0]
[model.diffusion]
kind = "constant"
values = [0.0]
[task]
kind = "verify-max-inequality"
side = "lower"
tau = 0.0
x = [0.0]
t_grid = [0.1]
radii = [1.0]
paths = 100
seed = 1
step = 0.01
"#;
    let cfg = write(dir.path(), "c.toml", text);
    let out = dir.path().join("out");
    let o = itosym(&["run", &cfg], &out);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("sector"));
    assert!(!out.exists());
}

#[test]
fn emit_json_lines_and_missing_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", CP_ESTIMATES);
    let out = dir.path().join("out");
    assert_eq!(itosym(&["run", &cfg], &out).status.code(), Some(0));
    let report = out.join("cp-estimates").join("report.json");
    let o = itosym(
        &["emit", report.to_str().unwrap(), "--format", "json-lines"],
        &out,
    );
    assert_eq!(o.status.code(), Some(0));
    let lines = std::fs::read_to_string(out.join("cp-estimates").join("estimates.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 2);
    for l in lines.lines() {
        let row: serde_json::Value = serde_json::from_str(l).unwrap();
        assert!(row["radius"].as_f64().unwrap() > 0.0);
    }
    let gone = dir.path().join("nope.json");
    assert_eq!(
        itosym(&["emit", gone.to_str().unwrap(), "--format", "csv"], &out)
            .status
            .code(),
        Some(5)
    );
}

#[test]
fn catalog_lists_every_family() {
    let dir = tempfile::tempdir().unwrap();
    let o = itosym(&["catalog"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    for name in [
        "additive-bm",
        "pure-drift",
        "alpha-stable-levy",
        "compound-poisson",
        "jump-diffusion",
        "det-jump-unit",
    ] {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", CP_ESTIMATES);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(itosym(&["run", &cfg], &a).status.code(), Some(0));
    assert_eq!(
        itosym(
            &["run", &cfg, "--out", b.to_str().unwrap()],
            &a.join("unused")
        )
        .status
        .code(),
        Some(0)
    );
    assert!(!a.join("unused").exists());
    for f in ["report.json", "estimates.csv"] {
        let x = std::fs::read(a.join("cp-estimates").join(f)).unwrap();
        let y = std::fs::read(b.join("cp-estimates").join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}
