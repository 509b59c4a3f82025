use std::path::Path;
use std::process::{Command, Output};

use genent::lmg::lmg_row;
use genent::xy_chain::xy_row;
use genent_cli::output::format_value;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

fn genent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = genent(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    genent(args).status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn read_csv(p: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(p).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn sidecar(p: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(format!("{p}.json")).unwrap()).unwrap()
}

#[test]
fn xy_sweep_reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    for out in [&a, &b] {
        ok(&[
            "xy", "sweep", "--gamma", "0.25:1:4", "--g", "0:1.2:13", "--n", "64", "--out", out,
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let side = sidecar(&a);
    assert_eq!(side["spec"]["N"], 64);
    assert_eq!(side["spec"]["model"], "xy");
    assert_eq!(side["rows"], 52);
    assert_eq!(side["library_version"], genent::VERSION);
    assert!(side["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn lmg_sweep_reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    for out in [&a, &b] {
        ok(&[
            "lmg",
            "sweep",
            "--v",
            "-0.02:0.02:4",
            "--w",
            "-2:0:3",
            "--n",
            "300",
            "--out",
            out,
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (header, rows) = read_csv(&a);
    assert_eq!(
        header.join(","),
        "V,W,N,energy_per_particle,purity_jz,n_up,classical_energy,classical_purity"
    );
    assert_eq!(rows.len(), 12);
    let transitions = sidecar(&a)["extra"]["transitions"]
        .as_array()
        .unwrap()
        .clone();
    let first_order: Vec<f64> = transitions
        .iter()
        .filter(|t| t["first_order"].as_bool().unwrap())
        .map(|t| t["w"].as_f64().unwrap())
        .collect();
    assert_eq!(first_order, vec![-2.0]);
}

#[test]
fn random_rows_recompute_through_the_library() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let xy = path(&dir, "xy.csv");
    ok(&[
        "xy", "sweep", "--gamma", "0:1:5", "--g", "0:1.5:31", "--n", "100", "--out", &xy,
    ]);
    let (header, rows) = read_csv(&xy);
    for _ in 0..5 {
        let row = &rows[rng.random_range(0..rows.len())];
        let (gamma, g) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        let expect = xy_row(gamma, g, 100).unwrap().values();
        for (i, (cell, v)) in row.iter().zip(expect).enumerate() {
            assert_eq!(
                cell,
                &format_value(v, header[i] == "N"),
                "column {}",
                header[i]
            );
        }
    }

    let lmg = path(&dir, "lmg.csv");
    ok(&[
        "lmg", "sweep", "--v", "-3:3:7", "--w", "-2:2:5", "--n", "200", "--out", &lmg,
    ]);
    let (header, rows) = read_csv(&lmg);
    for _ in 0..5 {
        let row = &rows[rng.random_range(0..rows.len())];
        let (v, w) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        let expect = lmg_row(v, w, 200).unwrap().values();
        for (i, (cell, x)) in row.iter().zip(expect).enumerate() {
            assert_eq!(
                cell,
                &format_value(x, header[i] == "N"),
                "column {}",
                header[i]
            );
        }
    }
}

#[test]
fn column_selection_keeps_order_and_values() {
    let full = ok(&[
        "xy",
        "sweep",
        "--gamma",
        "0.5",
        "--g",
        "0.2:0.8:4",
        "--n",
        "40",
    ]);
    let some = ok(&[
        "xy",
        "sweep",
        "--gamma",
        "0.5",
        "--g",
        "0.2:0.8:4",
        "--n",
        "40",
        "--columns",
        "c1,g",
    ]);
    let lines: Vec<&str> = some.lines().collect();
    assert_eq!(lines[0], "c1,g");
    for (f, s) in full.lines().skip(1).zip(lines.iter().skip(1)) {
        let cells: Vec<&str> = f.split(',').collect();
        assert_eq!(*s, format!("{},{}", cells[10], cells[1]));
    }
}

#[test]
fn shifted_purity_column_follows_the_closed_form() {
    let out = ok(&[
        "xy",
        "sweep",
        "--gamma",
        "1",
        "--g",
        "0:1:101",
        "--n",
        "400",
        "--columns",
        "g,shifted_purity",
    ]);
    for line in out.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        if v[0] <= 0.5 {
            assert!((v[1] - (0.5 - 2.0 * v[0] * v[0])).abs() < 3e-3, "{line}");
        }
    }
}

#[test]
fn lmg_purity_surface_has_unit_plateau() {
    let out = ok(&[
        "lmg",
        "sweep",
        "--v",
        "-4:4:9",
        "--w",
        "-4:4:9",
        "--n",
        "500",
        "--columns",
        "V,W,purity_jz",
    ]);
    let rows: Vec<Vec<f64>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 81);
    for r in &rows {
        let delta = r[0].abs() - r[1];
        if delta <= 0.5 {
            assert!(r[2] > 0.99, "{r:?}");
        }
        if delta >= 2.0 {
            assert!((r[2] - 1.0 / (delta * delta)).abs() < 0.02, "{r:?}");
        }
    }
}

#[test]
fn exponent_fits_from_sweep_files() {
    let dir = TempDir::new().unwrap();
    let nu = path(&dir, "nu.csv");
    ok(&[
        "xy",
        "sweep",
        "--gamma",
        "1",
        "--g",
        "0.4:0.499:100",
        "--n",
        "200",
        "--columns",
        "g,shifted_purity",
        "--out",
        &nu,
    ]);
    let fit: Value = serde_json::from_str(&ok(&[
        "fit",
        "--csv",
        &nu,
        "--x-col",
        "g",
        "--y-col",
        "shifted_purity",
        "--center",
        "0.5",
        "--window",
        "0.001:0.1",
    ]))
    .unwrap();
    let estimate = fit["fit"]["estimate"].as_f64().unwrap();
    assert!((estimate - 1.0).abs() <= 0.05, "nu = {estimate}");
    assert!(fit["fit"]["stderr"].as_f64().unwrap() > 0.0);

    let chi = path(&dir, "chi.csv");
    ok(&[
        "xy",
        "sweep",
        "--gamma",
        "0",
        "--g",
        "0.501:0.6:100",
        "--n",
        "100000",
        "--columns",
        "g,mz",
        "--out",
        &chi,
    ]);
    let fit: Value = serde_json::from_str(&ok(&[
        "fit",
        "--csv",
        &chi,
        "--x-col",
        "g",
        "--y-col",
        "mz",
        "--y-offset",
        "1",
        "--center",
        "0.5",
        "--window",
        "0.001:0.1",
    ]))
    .unwrap();
    let estimate = fit["fit"]["estimate"].as_f64().unwrap();
    assert!((estimate - 0.5).abs() <= 0.05, "chi = {estimate}");

    let dc = path(&dir, "dc.csv");
    ok(&[
        "xy",
        "sweep",
        "--gamma",
        "1",
        "--g",
        "0.3:0.5:201",
        "--n",
        "2000",
        "--columns",
        "g,dc1_dg",
        "--out",
        &dc,
    ]);
    let residual = |window: &str| {
        let v: Value = serde_json::from_str(&ok(&[
            "fit", "--csv", &dc, "--x-col", "g", "--y-col", "dc1_dg", "--center", "0.5",
            "--window", window, "--model", "log",
        ]))
        .unwrap();
        assert!(v["fit"]["estimate"].as_f64().unwrap().is_finite());
        v["fit"]["rms_residual"].as_f64().unwrap()
    };
    let r: Vec<f64> = ["0.005:0.2", "0.005:0.1", "0.005:0.05", "0.005:0.03"]
        .iter()
        .map(|w| residual(w))
        .collect();
    assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
}

#[test]
fn fit_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "few.csv");
    ok(&[
        "xy",
        "sweep",
        "--gamma",
        "1",
        "--g",
        "0.4:0.49:5",
        "--n",
        "20",
        "--out",
        &p,
    ]);
    let base = [
        "fit",
        "--csv",
        p.as_str(),
        "--x-col",
        "g",
        "--center",
        "0.5",
    ];
    assert_eq!(
        code(
            &[
                &base[..],
                &["--y-col", "shifted_purity", "--window", "0.001:0.2"]
            ]
            .concat()
        ),
        2
    );
    assert_eq!(
        code(&[&base[..], &["--y-col", "nope", "--window", "0.001:0.2"]].concat()),
        2
    );
    assert_eq!(
        code(
            &[
                &base[..],
                &["--y-col", "shifted_purity", "--window", "0.2:0.1"]
            ]
            .concat()
        ),
        2
    );
    let many = path(&dir, "many.csv");
    ok(&[
        "xy",
        "sweep",
        "--gamma",
        "1",
        "--g",
        "0.4:0.6:21",
        "--n",
        "20",
        "--out",
        &many,
    ]);
    // shifted purity vanishes above the critical point
    let args = [
        "fit",
        "--csv",
        &many,
        "--x-col",
        "g",
        "--y-col",
        "shifted_purity",
        "--window",
        "0.5:0.6",
    ];
    assert_eq!(code(&args), 2);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        code(&["xy", "sweep", "--gamma", "1", "--g", "0:1:3", "--n", "10"]),
        0
    );
    assert_eq!(
        code(&["xy", "sweep", "--gamma", "1", "--g", "0:1:1", "--n", "10"]),
        2
    );
    assert_eq!(
        code(&["xy", "sweep", "--gamma", "1", "--g", "0:1:x", "--n", "10"]),
        2
    );
    assert_eq!(
        code(&["xy", "sweep", "--gamma", "1", "--g", "0:1:3", "--n", "11"]),
        2
    );
    assert_eq!(code(&["xy", "sweep", "--gamma", "1", "--g", "0:1:3"]), 2);
    assert_eq!(
        code(&[
            "xy",
            "sweep",
            "--gamma",
            "1",
            "--g",
            "0:1:3",
            "--n",
            "10",
            "--columns",
            "bogus"
        ]),
        2
    );
    assert_eq!(code(&["lmg", "sweep", "--v", "0:1:3", "--n", "10"]), 2);
    let unwritable = path(&dir, "missing/dir/out.csv");
    assert_eq!(
        code(&[
            "xy",
            "sweep",
            "--gamma",
            "1",
            "--g",
            "0:1:3",
            "--n",
            "10",
            "--out",
            &unwritable
        ]),
        2
    );
    assert_eq!(
        code(&["oracle", "xy", "--n", "14", "--g", "0.3", "--gamma", "1"]),
        3
    );
    assert_eq!(
        code(&["oracle", "lmg", "--n", "4", "--v", "0", "--w", "5"]),
        3
    );
    assert_eq!(
        code(&[
            "oracle",
            "lmg",
            "--n",
            "4",
            "--v",
            "0",
            "--w",
            "5",
            "--unchecked"
        ]),
        0
    );
    let big = path(&dir, "big.json");
    ok(&["state", "make", "--kind", "ghz", "--n", "7", "--out", &big]);
    assert_eq!(
        code(&["purity", "compute", "--state", &big, "--basis", "su"]),
        3
    );
    assert_eq!(
        code(&["purity", "compute", "--state", &path(&dir, "absent.json")]),
        2
    );
    assert_eq!(code(&["no-such-command"]), 2);
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "sweep.toml");
    let out = path(&dir, "from_config.csv");
    std::fs::write(
        &cfg,
        format!(
            "model = \"xy\"\nN = 40\ncolumns = [\"g\", \"purity_uN\"]\nout = \"{}\"\n\n[grids]\ngamma = 0.5\ng = \"0:1:5\"\n",
            out.replace('\\', "\\\\")
        ),
    )
    .unwrap();
    ok(&["xy", "sweep", "--config", &cfg]);
    let (header, rows) = read_csv(&out);
    assert_eq!(header, vec!["g", "purity_uN"]);
    assert_eq!(rows.len(), 5);
    assert_eq!(sidecar(&out)["spec"]["N"], 40);

    let over = path(&dir, "override.csv");
    ok(&[
        "xy", "sweep", "--config", &cfg, "--n", "80", "--g", "0:1:3", "--out", &over,
    ]);
    assert_eq!(sidecar(&over)["spec"]["N"], 80);
    assert_eq!(read_csv(&over).1.len(), 3);
    assert!(Path::new(&out).exists());

    let table = path(&dir, "table.toml");
    std::fs::write(
        &table,
        "N = 40\n[grids]\ngamma = { start = 0.5, stop = 1.0, steps = 2 }\ng = 0.3\n",
    )
    .unwrap();
    let csv = ok(&["xy", "sweep", "--config", &table]);
    assert_eq!(csv.lines().count(), 3);

    let wrong_model = path(&dir, "lmg.toml");
    std::fs::write(&wrong_model, "model = \"lmg\"\nN = 10\n").unwrap();
    assert_eq!(
        code(&[
            "xy",
            "sweep",
            "--config",
            &wrong_model,
            "--gamma",
            "1",
            "--g",
            "0.3"
        ]),
        2
    );
    let unknown = path(&dir, "unknown.toml");
    std::fs::write(&unknown, "N = 10\ncolour = \"red\"\n").unwrap();
    assert_eq!(
        code(&["xy", "sweep", "--config", &unknown, "--gamma", "1", "--g", "0.3"]),
        2
    );
}

#[test]
fn state_make_and_purity_compute() {
    let dir = TempDir::new().unwrap();
    let ghz = path(&dir, "ghz.json");
    ok(&["state", "make", "--kind", "ghz", "--n", "4", "--out", &ghz]);
    let state: Value = serde_json::from_str(&std::fs::read_to_string(&ghz).unwrap()).unwrap();
    let amps = state["amplitudes"].as_array().unwrap();
    assert_eq!(amps.len(), 2);
    assert_eq!(amps[0]["index"], 0);
    assert_eq!(amps[1]["index"], 15);
    assert!((amps[1]["re"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    assert_eq!(amps[1]["im"], 0.0);
    let p: Value = serde_json::from_str(&ok(&["purity", "compute", "--state", &ghz])).unwrap();
    assert!(p["purity"].as_f64().unwrap().abs() < 1e-12);

    let prod = path(&dir, "prod.json");
    ok(&[
        "state",
        "make",
        "--kind",
        "product",
        "--n",
        "3",
        "--s",
        "1",
        "--local",
        "0.2,-0.5,0.7",
        "--out",
        &prod,
    ]);
    let p: Value = serde_json::from_str(&ok(&[
        "purity",
        "compute",
        "--state",
        &prod,
        "--per-generator",
    ]))
    .unwrap();
    assert!((p["purity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(p["per_generator"].as_array().unwrap().len(), 24);

    let bcs = path(&dir, "bcs.json");
    ok(&[
        "state", "make", "--kind", "bcs", "--n", "8", "--g", "0.4", "--gamma", "0.6", "--out", &bcs,
    ]);
    let un: Value = serde_json::from_str(&ok(&[
        "purity", "compute", "--state", &bcs, "--basis", "un",
    ]))
    .unwrap();
    let expect =
        genent::xy_chain::purity_un_finite(&genent::xy_chain::XyParams::new(8, 0.4, 0.6).unwrap())
            .unwrap();
    assert!((un["purity"].as_f64().unwrap() - expect).abs() < 1e-12);
    let so: Value = serde_json::from_str(&ok(&[
        "purity", "compute", "--state", &bcs, "--basis", "so2n",
    ]))
    .unwrap();
    assert!((so["purity"].as_f64().unwrap() - 1.0).abs() < 1e-10);

    let aklt = path(&dir, "aklt.json");
    ok(&[
        "state", "make", "--kind", "aklt", "--n", "4", "--out", &aklt,
    ]);
    let p: Value = serde_json::from_str(&ok(&["purity", "compute", "--state", &aklt])).unwrap();
    assert!(p["purity"].as_f64().unwrap().abs() < 1e-10);

    assert_eq!(code(&["state", "make", "--kind", "bell", "--n", "3"]), 2);
    assert_eq!(
        code(&["state", "make", "--kind", "bcs", "--n", "8", "--g", "0.4"]),
        2
    );
    assert_eq!(
        code(&["state", "make", "--kind", "product", "--n", "2", "--local", "1,0,0"]),
        2
    );
    assert_eq!(
        code(&["purity", "compute", "--state", &aklt, "--basis", "pauli"]),
        2
    );
}

#[test]
fn number_distribution_csv() {
    let out = ok(&["xy", "dist", "--n", "12", "--g", "0.6", "--gamma", "0.5"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,prob"));
    let rows: Vec<(usize, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 13);
    assert!((rows.iter().map(|r| r.1).sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(rows.iter().filter(|r| r.0 % 2 == 1).all(|r| r.1 == 0.0));
}

#[test]
fn oracle_commands_agree_with_analytics() {
    let out = ok(&[
        "oracle",
        "xy",
        "--n",
        "8",
        "--g",
        "0.1:0.9:3",
        "--gamma",
        "0.5:1:2",
    ]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 7);
    assert!(rows[0].starts_with("N,g,gamma,residual,energy_ed,energy_analytic"));
    for r in &rows[1..] {
        let diff: f64 = r.rsplit(',').next().unwrap().parse().unwrap();
        assert!(diff < 1e-9, "{r}");
    }
    let out = ok(&[
        "oracle",
        "lmg",
        "--n",
        "8",
        "--v",
        "3",
        "--w",
        "-1:1:3",
        "--columns",
        "W,j_squared,max_abs_diff",
    ]);
    for r in out.lines().skip(1) {
        let v: Vec<f64> = r.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - 20.0).abs() < 1e-9 && v[2] < 1e-9, "{r}");
    }
}
