mod support;

use proptest::prelude::*;
use proptest::sample::Index;

use leafspace_core::comparable::{classify_in, membership};
use leafspace_core::{
    branch_loci, check_automorphism, expand, gallery, random_spec, Comparability, LeafSpaceSpec,
    Letter, Order, RandomParams, Transform, Tri, Word,
};
use support::oracle;

/// Gallery models whose generators are all automorphisms, plus random
/// models with copy-permuting generators.
fn model(pick: usize, seed: u64) -> LeafSpaceSpec {
    let fixtures = [
        gallery::line(),
        gallery::yplus(),
        gallery::swap(),
        gallery::zigzag(),
        gallery::comb(),
        gallery::twinswap(),
    ];
    match fixtures.get(pick) {
        Some(g) => g.spec.clone(),
        None => random_spec(&RandomParams {
            seed,
            copies: 3,
            ..RandomParams::default()
        })
        .unwrap(),
    }
}

fn word(spec: &LeafSpaceSpec, letters: &[(usize, bool)]) -> Word {
    let gens = spec.generators();
    if gens.is_empty() {
        return Word::identity();
    }
    Word::from_letters(letters.iter().map(|&(g, inverse)| Letter {
        generator: gens[g % gens.len()].name.clone(),
        inverse,
    }))
}

fn flip(c: Comparability) -> Comparability {
    match c {
        Comparability::Less => Comparability::Greater,
        Comparability::Greater => Comparability::Less,
        other => other,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn reversal(pick in 0usize..7, seed in 1u64..500, depth in 0u32..3, i: Index, j: Index) {
        let spec = model(pick, seed);
        let tr = expand(&spec, depth).unwrap();
        let order = Order::new(&tr).unwrap();
        let pts = tr.sample_points();
        let (x, y) = (i.get(&pts), j.get(&pts));
        if let (Ok(p), Ok(q)) = (order.path(x, y), order.path(y, x)) {
            prop_assert_eq!(p.length(), q.length());
            let r = p.reverse();
            prop_assert!(oracle::check_path(&tr, &r, y, x).is_ok());
            prop_assert_eq!(r.reverse(), p);
        }
        prop_assert_eq!(order.compare(y, x).unwrap(), flip(order.compare(x, y).unwrap()));
    }

    #[test]
    fn partial_order(pick in 0usize..7, seed in 1u64..500, depth in 0u32..3, i: Index, j: Index, k: Index) {
        let spec = model(pick, seed);
        let tr = expand(&spec, depth).unwrap();
        let order = Order::new(&tr).unwrap();
        let pts = tr.sample_points();
        let (x, y, z) = (i.get(&pts), j.get(&pts), k.get(&pts));
        let xy = order.compare(x, y).unwrap();
        prop_assert_eq!(xy == Comparability::Equal, x == y);
        if xy == Comparability::Less && order.compare(y, z).unwrap() == Comparability::Less {
            prop_assert_eq!(order.compare(x, z).unwrap(), Comparability::Less);
        }
    }

    #[test]
    fn action_preserves_order(
        pick in 0usize..7, seed in 1u64..500, depth in 1u32..3,
        letters in prop::collection::vec((0usize..3, any::<bool>()), 0..4),
        i: Index, j: Index,
    ) {
        let spec = model(pick, seed);
        for g in spec.generators() {
            prop_assert!(check_automorphism(&spec, &g.name).unwrap().is_empty());
        }
        let tr = expand(&spec, depth).unwrap();
        let order = Order::new(&tr).unwrap();
        let t = Transform::of_word(&spec, &word(&spec, &letters)).unwrap();
        let pts = tr.sample_points();
        let (x, y) = (i.get(&pts), j.get(&pts));
        let (gx, gy) = (t.apply_point(&spec, x).unwrap(), t.apply_point(&spec, y).unwrap());
        if tr.resolve(&gx).is_some() && tr.resolve(&gy).is_some() {
            let before = order.compare(x, y).unwrap();
            let after = order.compare(&gx, &gy).unwrap();
            if before != Comparability::Truncated && after != Comparability::Truncated {
                prop_assert_eq!(before, after);
            }
            if let (Ok(p), Ok(q)) = (order.path(x, y), order.path(&gx, &gy)) {
                prop_assert_eq!(p.length(), q.length());
            }
        }
    }

    #[test]
    fn comparable_sets(
        pick in 0usize..7, seed in 1u64..500, depth in 1u32..3,
        letters in prop::collection::vec((0usize..3, any::<bool>()), 0..4),
        i: Index,
    ) {
        let spec = model(pick, seed);
        let tr = expand(&spec, depth).unwrap();
        let order = Order::new(&tr).unwrap();
        let w = word(&spec, &letters);
        let t = Transform::of_word(&spec, &w).unwrap();
        let inv = Transform::of_word(&spec, &w.inverse()).unwrap();
        let x = i.get(&tr.sample_points()).clone();
        let wx = t.apply_point(&spec, &x).unwrap();
        let here = membership(&order, &t, &x).unwrap();
        if tr.resolve(&wx).is_some() {
            // x ~ w(x) is the same statement as w(x) ~ w^-1(w(x)).
            let back = membership(&order, &inv, &wx).unwrap();
            prop_assert_eq!(here, back);
            // C_w is w-invariant.
            let next = membership(&order, &t, &wx).unwrap();
            if here != Tri::Truncated && next != Tri::Truncated {
                prop_assert_eq!(here, next);
            }
        }
        if w.is_identity() {
            prop_assert_eq!(here, Tri::Yes);
        }
    }

    #[test]
    fn loci_are_equivariant(pick in 0usize..7, seed in 1u64..500, depth in 1u32..4) {
        let spec = model(pick, seed);
        let tr = expand(&spec, depth).unwrap();
        let loci = branch_loci(&tr);
        for g in spec.generators() {
            let t = Transform::of_word(&spec, &Word::generator(&g.name)).unwrap();
            for l in &loci {
                let mut image: Vec<_> = l.members.iter().map(|c| t.apply_cell(&spec, c).unwrap()).collect();
                image.sort();
                if image.iter().all(|c| tr.lookup(c).is_some()) {
                    let target = loci.iter().find(|m| m.members == image);
                    // The image locus may need stem cells beyond the window.
                    if let Some(m) = target {
                        prop_assert_eq!(m.sign, l.sign);
                    } else {
                        prop_assert!(!tr.is_closed());
                    }
                }
            }
        }
    }

    #[test]
    fn windows_grow(pick in 0usize..7, seed in 1u64..500, depth in 0u32..4) {
        let spec = model(pick, seed);
        let small = expand(&spec, depth).unwrap();
        let large = expand(&spec, depth + 1).unwrap();
        for c in small.cells() {
            prop_assert!(large.lookup(c).is_some());
        }
        prop_assert!(branch_loci(&small).len() <= branch_loci(&large).len());
    }

    #[test]
    fn tangentiable_means_fixed_comparably(
        pick in 0usize..7, seed in 1u64..500, depth in 1u32..3,
        letters in prop::collection::vec((0usize..3, any::<bool>()), 0..4),
    ) {
        let spec = model(pick, seed);
        let tr = expand(&spec, depth).unwrap();
        let order = Order::new(&tr).unwrap();
        let w = word(&spec, &letters);
        let t = Transform::of_word(&spec, &w).unwrap();
        let profile = classify_in(&order, &w, &t).unwrap();
        if let Some(x) = &profile.tangentiable.witness {
            let wx = t.apply_point(&spec, x).unwrap();
            prop_assert_eq!(order.compare(x, &wx).unwrap(), Comparability::Equal);
        }
        if let Some(x) = &profile.pos_transversable.witness {
            let wx = t.apply_point(&spec, x).unwrap();
            prop_assert_eq!(order.compare(x, &wx).unwrap(), Comparability::Less);
        }
        if let Some(x) = &profile.neg_transversable.witness {
            let wx = t.apply_point(&spec, x).unwrap();
            prop_assert_eq!(order.compare(x, &wx).unwrap(), Comparability::Greater);
        }
    }
}
