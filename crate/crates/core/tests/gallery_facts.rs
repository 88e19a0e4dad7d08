use leafspace_core::checks::{
    check_faithfulness, check_fix_propagation, check_return, stabilizer_ball,
};
use leafspace_core::{
    branch_loci, branching_type, check_automorphism, classify_element, expand, gallery, path,
    validate, BranchingType, Cell, Point, Sign, Tri, Verdict, Word,
};

fn pt(s: &str) -> Point {
    s.parse().unwrap()
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn units(names: &[&str]) -> Vec<Cell> {
    names.iter().map(|&n| Cell::unit(n)).collect()
}

fn signs(name: &str, depth: u32) -> (usize, usize) {
    let tr = expand(&gallery::by_name(name).unwrap().spec, depth).unwrap();
    let loci = branch_loci(&tr);
    let pos = loci.iter().filter(|l| l.sign == Sign::Positive).count();
    (pos, loci.len() - pos)
}

#[test]
fn every_entry_validates_to_depth_8() {
    for g in gallery::all() {
        for depth in 0..=8 {
            let report = validate(&expand(&g.spec, depth).unwrap());
            assert!(
                report.is_valid(),
                "{} depth {depth}: {}",
                g.name,
                report.summary()
            );
        }
    }
}

#[test]
fn automorphisms() {
    for g in gallery::reference() {
        for gen in g.spec.generators() {
            assert!(
                check_automorphism(&g.spec, &gen.name).unwrap().is_empty(),
                "{} {}",
                g.name,
                gen.name
            );
        }
    }
    let tripod = gallery::tripod().spec;
    assert!(check_automorphism(&tripod, "w").unwrap().is_empty());
    assert!(!check_automorphism(&tripod, "x").unwrap().is_empty());
}

#[test]
fn line_facts() {
    assert_eq!(signs("LINE", 4), (0, 0));
    let spec = gallery::line().spec;
    assert_eq!(branching_type(&spec, 4).unwrap().value, BranchingType::None);
    assert_eq!(
        classify_element(&spec, &w("t"), 3)
            .unwrap()
            .pos_transversable
            .answer,
        Tri::Yes
    );
}

#[test]
fn yplus_facts() {
    assert_eq!(signs("YPLUS", 0), (1, 0));
    let tr = expand(&gallery::yplus().spec, 0).unwrap();
    assert!(tr.is_closed());
    assert_eq!(path(&tr, &pt("p:1/2"), &pt("q:1/2")).unwrap().length(), 2);
    assert_eq!(path(&tr, &pt("s:1/2"), &pt("q:1/2")).unwrap().length(), 1);
}

#[test]
fn swap_facts() {
    for depth in 1..=6 {
        assert_eq!(signs("SWAP", depth), (1, 0));
    }
    let spec = gallery::swap().spec;
    let tr = expand(&spec, 4).unwrap();
    assert_eq!(branch_loci(&tr)[0].members, units(&["a", "b"]));
    assert_eq!(
        path(&tr, &pt("ra[0]:1/2"), &pt("rb[0]:1/2"))
            .unwrap()
            .length(),
        2
    );
    let ball = stabilizer_ball(&spec, &units(&["a", "b"]), 6, 4).unwrap();
    assert_eq!(ball.members.len(), 13);
    assert_eq!(ball.cyclic_generator, Some(w("g")));
    assert!(ball.acts_nontrivially);
    let g = ball.table.iter().find(|(x, _)| *x == w("g")).unwrap();
    assert_eq!(
        g.1,
        vec![
            (Cell::unit("a"), Cell::unit("b")),
            (Cell::unit("b"), Cell::unit("a"))
        ]
    );
    assert_eq!(
        check_return(&spec, &w("g"), &pt("ra[0]:1/2"), 2, 4)
            .unwrap()
            .verdict,
        Verdict::Pass
    );
    assert_eq!(
        check_fix_propagation(&spec, &units(&["a", "b"]), 6, 4)
            .unwrap()
            .verdict,
        Verdict::Pass
    );
    let p = classify_element(&spec, &w("g^2"), 3).unwrap();
    assert_eq!(p.tangentiable.witness, Some(pt("a")));
}

#[test]
fn zigzag_facts() {
    assert_eq!(signs("ZIGZAG", 1), (3, 3));
    let spec = gallery::zigzag().spec;
    assert_eq!(
        branching_type(&spec, 3).unwrap().value,
        BranchingType::TwoSided
    );
    let tr = expand(&spec, 3).unwrap();
    let p = path(&tr, &pt("E[0]:1/2"), &pt("E[1]:1/2")).unwrap();
    assert_eq!(p.length(), 3);
    assert!(classify_element(&spec, &w("h"), 3)
        .unwrap()
        .is_neither_in_window());
}

#[test]
fn comb_facts() {
    for depth in 1..=4 {
        assert_eq!(signs("COMB", depth), (2 * depth as usize, 0));
    }
    let spec = gallery::comb().spec;
    assert_eq!(
        branching_type(&spec, 3).unwrap().value,
        BranchingType::OneSidedPositive
    );
}

#[test]
fn auxiliary_facts() {
    assert_eq!(signs("TWINSWAP", 3), (3, 0));
    // The copy exchange is an involution, so faithfulness fails by design.
    let r = check_faithfulness(&gallery::twinswap().spec, 2, 3).unwrap();
    assert_eq!(r.verdict, Verdict::Violation);
    assert_eq!(r.witness, vec![("word".to_string(), "u^2".to_string())]);

    assert_eq!(signs("TRIPOD", 0), (1, 0));
    let r = check_fix_propagation(&gallery::tripod().spec, &units(&["a", "b", "c"]), 2, 0).unwrap();
    assert_eq!(r.verdict, Verdict::Violation);
}
