use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn okdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_okdyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_scenario(dir: &Path, text: &str) -> String {
    let p = dir.join("scenario.toml");
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &str = r#"
seed = 11

[[scenario]]
name = "cert"
task = "certify"
family = "gaussian-squares"
shift_samples = 10

[[scenario]]
name = "orbit"
task = "orbit"
family = "linear-quadratic"
generator = "sqrt2"
c_max = 2
ladder = [100, 1000]

[[scenario]]
name = "popular"
task = "khintchine"
polys = [[0, 0, 1], [0, 0, 2]]
generator = "golden"
set = [["0", "3/10"]]
epsilon = "1/100"
range = [1, 500]

[[scenario]]
name = "grid"
task = "popdiff"
family = "linear-quadratic"
grid = { kind = "random", d = 1, n = 512, delta = 0.5 }
epsilon = "1/50"
export = "grid.bits"

[[scenario]]
name = "limit"
task = "limit-check"
generator = "sqrt2"
r = 1
s = 2
p = [0, 0, 1]
functions = [{ intervals = [["0", "1/2"]] }, {}, { character = 1 }]
ladder = [10, 100, 1000]
"#;

fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let file = write_scenario(tmp.path(), SMALL);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let c = tmp.path().join("c");
    for (out, threads) in [(&a, "1"), (&b, "1"), (&c, "3")] {
        let o = okdyn(&["run", &file, "--out-dir", out.to_str().unwrap(), "--threads", threads]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let (ca, cb, cc) = (dir_contents(&a), dir_contents(&b), dir_contents(&c));
    assert_eq!(ca.len(), 12);
    assert_eq!(ca, cb);
    assert_eq!(ca, cc);
    // --seed takes precedence over the file-level seed
    let d = tmp.path().join("d");
    let o = okdyn(&["run", &file, "--out-dir", d.to_str().unwrap(), "--seed", "99"]);
    assert!(o.status.success());
    let grid = |dir: &Path| std::fs::read(dir.join("grid.bits")).unwrap();
    assert_ne!(grid(&a), grid(&d));
}

#[test]
fn cli_seed_used_without_file_seed() {
    let tmp = TempDir::new().unwrap();
    let text = SMALL.replace("seed = 11\n", "");
    let file = write_scenario(tmp.path(), &text);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(okdyn(&["run", &file, "--out-dir", a.to_str().unwrap(), "--seed", "1"]).status.success());
    assert!(okdyn(&["run", &file, "--out-dir", b.to_str().unwrap(), "--seed", "2"]).status.success());
    let grid = |dir: &Path| std::fs::read(dir.join("grid.bits")).unwrap();
    assert_ne!(grid(&a), grid(&b));
}

#[test]
fn failed_assertion_exits_one() {
    let tmp = TempDir::new().unwrap();
    let file = write_scenario(
        tmp.path(),
        r#"
[[scenario]]
name = "shifted"
task = "certify"
polys = [[0, 0, 1], [-1, 1]]
moduli = [[2]]
expect = "certified"
"#,
    );
    let out = tmp.path().join("out");
    let o = okdyn(&["run", &file, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let summary = std::fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("NOT jointly intersective at modulus 2"), "{summary}");
    assert!(summary.contains("assertion failed"));
}

#[test]
fn khintchine_threshold_in_json() {
    let tmp = TempDir::new().unwrap();
    let file = write_scenario(
        tmp.path(),
        r#"
[[scenario]]
name = "golden"
task = "khintchine"
polys = [[0, 0, 1], [0, 0, 2]]
generator = "golden"
set = [["0", "3/10"]]
epsilon = "1/1000"
range = [1, 200]
"#,
    );
    let out = tmp.path().join("out");
    assert!(okdyn(&["run", &file, "--out-dir", out.to_str().unwrap()]).status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("golden.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["threshold"], "13/500");
    assert_eq!(v["result"]["delta"], "3/10");
    assert_eq!(v["params"]["k"], 2);
    let csv = std::fs::read_to_string(out.join("golden.csv")).unwrap();
    assert_eq!(csv.lines().count(), 201);
}

#[test]
fn empty_scenario_list_writes_nothing() {
    let tmp = TempDir::new().unwrap();
    let file = write_scenario(tmp.path(), "# nothing here\n");
    let out = tmp.path().join("out");
    let o = okdyn(&["run", &file, "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(!out.exists());
}

#[test]
fn parse_errors_carry_position() {
    let tmp = TempDir::new().unwrap();
    let file = write_scenario(tmp.path(), "[[scenario]]\nname = \"x\"\ntask = \"certify\"\nfamily = squares\n");
    let o = okdyn(&["check", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    let file = write_scenario(
        tmp.path(),
        "[[scenario]]\nname = \"x\"\ntask = \"certify\"\nfamily = \"squares\"\nmodulii = [[2]]\n",
    );
    let o = okdyn(&["check", &file]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("modulii") && e.contains("parse error at line"), "{e}");
}

#[test]
fn validation_errors_name_the_key() {
    let tmp = TempDir::new().unwrap();
    let file = write_scenario(
        tmp.path(),
        r#"
[[scenario]]
name = "ok"
task = "certify"
family = "squares"

[[scenario]]
name = "bad"
task = "popdiff"
family = "linear-quadratic"
grid = { kind = "interval", d = 1, n = 64, lo = 0, hi = 32 }
epsilon = "-1/10"
"#,
    );
    let o = okdyn(&["check", &file]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("'bad'") && e.contains("line 7") && e.contains("key 'epsilon'"), "{e}");

    let file = write_scenario(
        tmp.path(),
        "[[scenario]]\nname = \"g\"\ntask = \"orbit\"\nfamily = \"squares\"\ngenerator = \"pi\"\n",
    );
    let e = stderr(&okdyn(&["check", &file]));
    assert!(e.contains("key 'generator'") && e.contains("\"pi\""), "{e}");

    let file = write_scenario(
        tmp.path(),
        "[[scenario]]\nname = \"g\"\ntask = \"popdiff\"\nfamily = \"squares\"\nepsilon = \"1/10\"\ngrid = { kind = \"random\", d = 2, n = 8, delta = 0.5 }\n",
    );
    let e = stderr(&okdyn(&["check", &file]));
    assert!(e.contains("key 'grid'") && e.contains("field degree"), "{e}");
}

#[test]
fn module_errors_keep_scenario_context() {
    let tmp = TempDir::new().unwrap();
    let file = write_scenario(
        tmp.path(),
        r#"
[[scenario]]
name = "half"
task = "khintchine"
polys = [[0, "1/2"]]
generator = "sqrt2"
set = [["0", "1/2"]]
epsilon = "1/10"
range = [1, 10]
"#,
    );
    let o = okdyn(&["check", &file]);
    assert!(o.status.success(), "validation cannot see values: {}", stderr(&o));
    let out = tmp.path().join("out");
    let o = okdyn(&["run", &file, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("task error in scenario 'half' (line 2)") && e.contains("1/2"), "{e}");
}

#[test]
fn check_does_not_write() {
    let tmp = TempDir::new().unwrap();
    let file = write_scenario(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    let o = okdyn(&["check", &file, "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("5 scenario(s) valid"));
    assert!(!out.exists());
}

#[test]
fn presets_listing_and_overrides() {
    let o = okdyn(&["presets"]);
    let text = String::from_utf8_lossy(&o.stdout).into_owned();
    for name in ["gaussian", "rationals", "sqrt2", "cubic", "golden", "rp-sp-square"] {
        assert!(text.contains(name), "{name}");
    }
    let tmp = TempDir::new().unwrap();
    let empty = tmp.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let o = okdyn(&["presets", "--presets-dir", empty.to_str().unwrap()]);
    assert_eq!(String::from_utf8_lossy(&o.stdout), text);

    let user = tmp.path().join("user");
    std::fs::create_dir(&user).unwrap();
    std::fs::write(
        user.join("extra.toml"),
        r#"
[fields.sqrt5]
min_poly = [-5, 0, 1]

[generators.sqrt7]
radicand = 7

[families.sqrt5-squares]
field = "sqrt5"
polys = [[0, 0, 1]]
description = "{x^2} over Z[sqrt 5]"
"#,
    )
    .unwrap();
    let o = okdyn(&["presets", "--presets-dir", user.to_str().unwrap()]);
    let listed = String::from_utf8_lossy(&o.stdout).into_owned();
    assert!(listed.contains("sqrt5") && listed.contains("sqrt7") && listed.contains("gaussian"));

    // user presets resolve inside scenarios
    let file = write_scenario(
        tmp.path(),
        "[[scenario]]\nname = \"u\"\ntask = \"certify\"\nfamily = \"sqrt5-squares\"\nmoduli = [[2, 0], [0, 1]]\nexpect = \"certified\"\n",
    );
    let out = tmp.path().join("out");
    let o = okdyn(&["run", &file, "--out-dir", out.to_str().unwrap(), "--presets-dir", user.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));

    std::fs::write(user.join("broken.toml"), "[fields.bad]\nmin_poly = [1, 2, 1]\n").unwrap();
    let o = okdyn(&["presets", "--presets-dir", user.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken.toml"));
}

#[test]
fn grid_files_round_trip_through_scenarios() {
    let tmp = TempDir::new().unwrap();
    let file = write_scenario(tmp.path(), SMALL);
    let out = tmp.path().join("out");
    assert!(okdyn(&["run", &file, "--out-dir", out.to_str().unwrap()]).status.success());
    std::fs::copy(out.join("grid.bits"), tmp.path().join("saved.bits")).unwrap();
    let file = write_scenario(
        tmp.path(),
        r#"
[[scenario]]
name = "grid"
task = "popdiff"
family = "linear-quadratic"
grid = { kind = "bits", path = "saved.bits" }
epsilon = "1/50"
"#,
    );
    let out2 = tmp.path().join("out2");
    let o = okdyn(&["run", &file, "--out-dir", out2.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        std::fs::read(out.join("grid.csv")).unwrap(),
        std::fs::read(out2.join("grid.csv")).unwrap()
    );
}

#[test]
fn shipped_scenarios_validate() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/desk.toml");
    let o = okdyn(&["check", path]);
    assert!(o.status.success(), "{}", stderr(&o));
}
