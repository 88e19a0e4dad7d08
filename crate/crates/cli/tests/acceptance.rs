//! Acceptance criteria, one line per criterion. Run with
//! `cargo test -p leafspace-cli --test acceptance`.

#[path = "../../core/tests/support/oracle.rs"]
mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use leafspace_core::checks::{
    check_faithfulness, check_fix_propagation, check_intermediate_fixed, check_odd_path,
    check_return, stabilizer_ball,
};
use leafspace_core::{
    branch_loci, branching_type, classify_element, expand, gallery, random_spec, run_check,
    BranchingType, Cell, CheckError, Error, Order, Point, RandomParams, SuiteOptions, Verdict,
    Word,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn pt(s: &str) -> Point {
    s.parse().unwrap()
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn units(names: &[&str]) -> Vec<Cell> {
    names.iter().map(|&n| Cell::unit(n)).collect()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn random_paths() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for seed in 1..=1000u64 {
        let spec = random_spec(&RandomParams {
            seed,
            copies: (seed % 4) as usize,
            ..RandomParams::default()
        })
        .map_err(err)?;
        let tr = expand(&spec, 0).map_err(err)?;
        let order = Order::new(&tr).map_err(err)?;
        let points = tr.sample_points();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..256 {
            let x = points.choose(&mut rng).unwrap();
            let y = points.choose(&mut rng).unwrap();
            let expected = oracle::path_length(&tr, x, y);
            match order.path(x, y) {
                Ok(p) => {
                    ensure!(
                        Some(p.length()) == expected,
                        "seed {seed}: {x} -> {y} has length {}, oracle {expected:?}",
                        p.length()
                    );
                    oracle::check_path(&tr, &p, x, y)
                        .map_err(|e| format!("seed {seed}: {x} -> {y}: {e}"))?;
                }
                Err(Error::Truncated) => ensure!(
                    expected.is_none(),
                    "seed {seed}: {x} -> {y} truncated, oracle {expected:?}"
                ),
                Err(e) => return Err(format!("seed {seed}: {x} -> {y}: {e}")),
            }
            pairs += 1;
        }
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    Ok(format!(
        "{pairs} pairs over 1000 models in {:.1}s",
        took.as_secs_f64()
    ))
}

fn swap_stabilizer() -> Outcome {
    let spec = gallery::swap().spec;
    for depth in 1..=6 {
        let loci = branch_loci(&expand(&spec, depth).map_err(err)?);
        ensure!(loci.len() == 1, "depth {depth}: {} loci", loci.len());
        ensure!(
            loci[0].members == units(&["a", "b"]),
            "depth {depth}: members {:?}",
            loci[0].members
        );
    }
    let ball = stabilizer_ball(&spec, &units(&["a", "b"]), 6, 4).map_err(err)?;
    ensure!(
        ball.cyclic_generator == Some(w("g")),
        "generator {:?}",
        ball.cyclic_generator
    );
    let g = ball
        .table
        .iter()
        .find(|(x, _)| *x == w("g"))
        .ok_or("g missing from the ball")?;
    ensure!(
        g.1 == vec![
            (Cell::unit("a"), Cell::unit("b")),
            (Cell::unit("b"), Cell::unit("a"))
        ],
        "g acts as {:?}",
        g.1
    );
    Ok(format!(
        "one locus {{a, b}}, ball of {} generated by g, g swaps a and b",
        ball.members.len()
    ))
}

fn swap_return() -> Outcome {
    let r = check_return(&gallery::swap().spec, &w("g"), &pt("ra[0]:1/2"), 2, 4).map_err(err)?;
    ensure!(r.verdict == Verdict::Pass, "{}: {}", r.verdict, r.summary);
    let get = |k: &str| {
        r.witness
            .iter()
            .find(|(a, _)| a == k)
            .map(|(_, v)| v.as_str())
    };
    ensure!(
        get("m") == Some("1") && get("check") == Some("a") && get("hat") == Some("b"),
        "witness {:?}",
        r.witness
    );
    Ok("m = 1 with check a and hat b".into())
}

fn zigzag_odd_path() -> Outcome {
    let start = Instant::now();
    let r = check_odd_path(&gallery::zigzag().spec, &w("h"), &pt("E[0]:1/2"), 4, 6).map_err(err)?;
    let took = start.elapsed();
    ensure!(r.verdict == Verdict::Pass, "{}: {}", r.verdict, r.summary);
    ensure!(took < Duration::from_secs(10), "took {took:?}");
    Ok(format!("{} in {:.2}s", r.summary, took.as_secs_f64()))
}

fn faithfulness() -> Outcome {
    for name in ["SWAP", "ZIGZAG"] {
        let r = check_faithfulness(&gallery::by_name(name).unwrap().spec, 6, 4).map_err(err)?;
        ensure!(
            r.verdict == Verdict::Pass,
            "{name}: {}: {}",
            r.verdict,
            r.summary
        );
    }
    match check_faithfulness(&gallery::line().spec, 6, 4) {
        Err(CheckError::PreconditionFailed(_)) => {}
        other => {
            return Err(format!(
                "LINE: expected a failed precondition, got {other:?}"
            ))
        }
    }
    Ok("SWAP and ZIGZAG pass, LINE fails the precondition".into())
}

fn no_violation(
    name: &str,
    spec: &leafspace_core::LeafSpaceSpec,
    opts: &SuiteOptions,
) -> Result<(), String> {
    for check in ["check_path_in_comparable_set", "check_connected_open"] {
        match run_check(spec, check, *opts) {
            Ok(r) => ensure!(
                r.verdict != Verdict::Violation,
                "{name}: {check}: {}",
                r.summary
            ),
            Err(CheckError::PreconditionFailed(_)) => {}
            Err(e) => return Err(format!("{name}: {check}: {e}")),
        }
    }
    Ok(())
}

fn comparable_sets() -> Outcome {
    let opts = SuiteOptions::default();
    // TRIPOD carries a generator that is not an automorphism, so it only
    // serves the sensitivity half of this criterion.
    for g in gallery::all().into_iter().filter(|g| g.name != "TRIPOD") {
        no_violation(g.name, &g.spec, &opts)?;
    }
    let small = SuiteOptions {
        depth: 1,
        word_len: 3,
        ..SuiteOptions::default()
    };
    for seed in 1..=200u64 {
        let copies = 2 + (seed % 3) as usize;
        let spec = random_spec(&RandomParams {
            seed,
            copies,
            ..RandomParams::default()
        })
        .map_err(err)?;
        no_violation(&format!("seed {seed}"), &spec, &small)?;
    }
    let r = check_fix_propagation(&gallery::tripod().spec, &units(&["a", "b", "c"]), 2, 0)
        .map_err(err)?;
    ensure!(
        r.verdict == Verdict::Violation,
        "TRIPOD fix propagation: {}",
        r.verdict
    );
    let r = run_check(
        &gallery::tripod().spec,
        "check_path_in_comparable_set",
        opts,
    )
    .map_err(err)?;
    ensure!(
        r.verdict == Verdict::Violation,
        "TRIPOD swapped junction: {}",
        r.verdict
    );
    Ok(
        "no violation over the automorphism gallery and 200 random models; TRIPOD caught twice"
            .into(),
    )
}

fn classification() -> Outcome {
    let spec = gallery::zigzag().spec;
    ensure!(
        classify_element(&spec, &w("h"), 3)
            .map_err(err)?
            .is_neither_in_window(),
        "h is not a neither-element"
    );
    let b = branching_type(&spec, 3).map_err(err)?;
    ensure!(
        b.value == BranchingType::TwoSided,
        "branching {:?}",
        b.value
    );
    let r = check_intermediate_fixed(
        &gallery::swap().spec,
        &w("g^2"),
        &pt("s[0]:1/2"),
        &pt("ra[0]:1/2"),
        4,
    )
    .map_err(err)?;
    ensure!(
        r.verdict == Verdict::Pass,
        "intermediate fixed: {}: {}",
        r.verdict,
        r.summary
    );
    ensure!(
        r.witness.contains(&("fixed".into(), "a".into())),
        "witness {:?}",
        r.witness
    );
    Ok("h is neither with two-sided branching; g^2 fixes a".into())
}

fn determinism() -> Outcome {
    let models = [
        "LINE", "YPLUS", "SWAP", "ZIGZAG", "COMB", "TWINSWAP", "TRIPOD",
    ];
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut compared = 0;
    for m in models {
        for json in [false, true] {
            let mut args = vec!["suite", "--gallery", m];
            if json {
                args.push("--json");
            }
            let file = dir.join(format!("suite_{m}.{}", if json { "json" } else { "txt" }));
            let golden =
                std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            for _ in 0..2 {
                let out = Command::new(env!("CARGO_BIN_EXE_leafspace"))
                    .args(&args)
                    .output()
                    .map_err(err)?;
                let got = format!(
                    "{}--\nexit {}\n",
                    String::from_utf8_lossy(&out.stdout),
                    out.status.code().unwrap_or(-1)
                );
                ensure!(
                    got == golden,
                    "{} differs from {}",
                    args.join(" "),
                    file.display()
                );
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} runs byte-identical to recordings"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "paths agree with the oracle on 1000 random models",
            random_paths,
        ),
        ("SWAP stabilizer is generated by g", swap_stabilizer),
        ("SWAP return check", swap_return),
        ("ZIGZAG odd path check", zigzag_odd_path),
        ("faithfulness", faithfulness),
        ("comparable sets and fix propagation", comparable_sets),
        (
            "element classification and intermediate fixed points",
            classification,
        ),
        ("deterministic output", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name} ({why})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
