use std::fs;
use std::path::Path;
use std::process::Command;

fn fxround(args: &[&str], cwd: &Path) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_fxround"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "fxround {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn idx(magic: u8, dims: &[u32], payload: &[u8]) -> Vec<u8> {
    let mut v = vec![0, 0, 8, magic];
    for d in dims {
        v.extend_from_slice(&d.to_be_bytes());
    }
    v.extend_from_slice(payload);
    v
}

/// Four IDX files with a few crude 6s and 9s: a 6 is bright in the lower
/// half, a 9 in the upper half, with some other digits mixed in.
fn fake_mnist(dir: &Path) {
    let mut state = 12345u32;
    let mut next = move || {
        state = state.wrapping_mul(1_664_525).wrapping_add(1_013_904_223);
        (state >> 24) as u8
    };
    for (prefix, count) in [("train", 60u32), ("t10k", 24)] {
        let mut pixels = Vec::new();
        let mut labels = Vec::new();
        for i in 0..count {
            let digit = [6u8, 9, 6, 9, 1][i as usize % 5];
            labels.push(digit);
            for p in 0..784 {
                let bright = match digit {
                    6 => p >= 392,
                    9 => p < 392,
                    _ => p % 2 == 0,
                };
                pixels.push(if bright { 128 + next() / 2 } else { next() / 8 });
            }
        }
        fs::write(dir.join(format!("{prefix}-images-idx3-ubyte")), idx(3, &[count, 28, 28], &pixels)).unwrap();
        fs::write(dir.join(format!("{prefix}-labels-idx1-ubyte")), idx(1, &[count], &labels)).unwrap();
    }
}

#[test]
fn dotprod_is_byte_identical_across_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["dotprod", "--n", "50,100", "--nmax", "200", "--modes", "rn,csr,rr", "--seed", "9", "--repeats", "2"];
    fxround(&[&args[..], &["--out", "a.csv"]].concat(), dir.path());
    fxround(&[&args[..], &["--out", "b.csv"]].concat(), dir.path());
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    // 2 sizes × (2 seeds + mean) × 3 modes, plus the header
    assert_eq!(text.lines().count(), 1 + 2 * 3 * 3);
    assert!(dir.path().join("a.manifest").exists());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("exp.cfg"), "n = 20\nnmax = 30\nmodes = rr\nout = from_file.csv\n").unwrap();
    fxround(&["dotprod", "--config", "exp.cfg", "--modes", "csr"], dir.path());
    let text = fs::read_to_string(dir.path().join("from_file.csv")).unwrap();
    assert!(text.lines().skip(1).all(|l| l.contains(",20,30,csr,")), "{text}");

    fs::write(dir.path().join("typo.cfg"), "nmaxx = 3\n").unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_fxround"))
        .args(["dotprod", "--config", "typo.cfg"])
        .current_dir(dir.path())
        .output()
        .unwrap()
        .status;
    assert!(!status.success());
}

#[test]
fn train_histogram_plot_pipeline_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("mnist");
    fs::create_dir(&data).unwrap();
    fake_mnist(&data);
    let train = |out: &str| {
        fxround(
            &[
                "train", "--digits", "9,6", "--modes", "rn,rr", "--reference", "--epochs", "4",
                "--hidden", "6", "--seed", "5", "--data-dir", "mnist", "--out", out,
            ],
            dir.path(),
        )
    };
    train("run1");
    train("run2");
    for name in ["reference.csv", "rn.csv", "rr.csv", "rr.params"] {
        let a = fs::read(dir.path().join("run1").join(name)).unwrap();
        let b = fs::read(dir.path().join("run2").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
    let rr = fs::read_to_string(dir.path().join("run1/rr.csv")).unwrap();
    assert!(rr.starts_with("epoch,train_error,test_error,loss,saturations\n0,"));
    assert_eq!(rr.lines().count(), 1 + 5);

    for out in ["h1.csv", "h2.csv"] {
        fxround(
            &["histogram", "--params", "run1/rr.params", "--digits", "6,9", "--data-dir", "mnist", "--out", out],
            dir.path(),
        );
    }
    let h = fs::read(dir.path().join("h1.csv")).unwrap();
    assert_eq!(h, fs::read(dir.path().join("h2.csv")).unwrap());
    let total: u64 = String::from_utf8(h)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    // every fifth fake image is a 1 and gets filtered out
    assert_eq!(total, 20);

    fxround(
        &["plot", "--in", "run1/reference.csv", "run1/rn.csv", "run1/rr.csv", "--out", "fig.svg"],
        dir.path(),
    );
    let svg = fs::read_to_string(dir.path().join("fig.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
    fxround(&["plot", "--in", "h1.csv", "--out", "hist.svg"], dir.path());
    assert!(fs::read_to_string(dir.path().join("hist.svg")).unwrap().contains("predicted score"));
}

#[test]
fn plot_rejects_an_empty_series() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.csv"), "epoch,test_error\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fxround"))
        .args(["plot", "--in", "empty.csv", "--out", "x.svg"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
}
