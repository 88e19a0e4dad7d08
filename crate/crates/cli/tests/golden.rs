//! Byte-for-byte comparisons against recorded runs. Set `UPDATE_GOLDEN=1`
//! to rewrite the recordings.

use std::path::PathBuf;
use std::process::Command;

const MODELS: [&str; 7] = [
    "LINE", "YPLUS", "SWAP", "ZIGZAG", "COMB", "TWINSWAP", "TRIPOD",
];

fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_leafspace"))
        .args(args)
        .output()
        .expect("binary runs");
    format!(
        "{}--\nexit {}\n",
        String::from_utf8(out.stdout).unwrap(),
        out.status.code().unwrap_or(-1)
    )
}

fn golden(name: &str, args: &[&str]) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    let actual = run(args);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing {}; run with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(actual, expected, "{name} differs from its recording");
}

#[test]
fn gallery_suites_text() {
    for m in MODELS {
        golden(&format!("suite_{m}.txt"), &["suite", "--gallery", m]);
    }
}

#[test]
fn gallery_suites_json() {
    for m in MODELS {
        golden(
            &format!("suite_{m}.json"),
            &["suite", "--gallery", m, "--json"],
        );
    }
}

#[test]
fn queries() {
    golden(
        "path_ZIGZAG.txt",
        &[
            "path",
            "--gallery",
            "ZIGZAG",
            "--from",
            "E[0]:1/2",
            "--to",
            "E[1]:1/2",
        ],
    );
    golden(
        "loci_ZIGZAG.txt",
        &["loci", "--gallery", "ZIGZAG", "--depth", "1"],
    );
    golden(
        "stab_SWAP.txt",
        &["stab", "--gallery", "SWAP", "--locus", "a,b"],
    );
    golden(
        "classify_ZIGZAG.txt",
        &["classify", "--gallery", "ZIGZAG", "--word", "h"],
    );
    golden("gallery_SWAP.txt", &["gallery", "SWAP"]);
    golden("random_1.txt", &["random", "--seed", "1"]);
    golden(
        "check_return_SWAP.txt",
        &[
            "check",
            "check_return",
            "--gallery",
            "SWAP",
            "--word",
            "g",
            "--lambda",
            "x",
            "--k",
            "2",
        ],
    );
}
