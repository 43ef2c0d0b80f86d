mod common;

use std::collections::BTreeMap;

use common::{brute_hits, odd_prime_powers};
use proptest::prelude::*;
use untouchable::conics::{Conic, Pencil};
use untouchable::constructions::{admissible_params, construct, union_sets, Family};
use untouchable::gf::Elem;
use untouchable::plane::Plane;
use untouchable::search::{exhaustive_exists, min_untouchable_size, MinSize, SearchOptions, SearchStatus};
use untouchable::verify::{is_untouchable, spectrum};

#[test]
fn odd_conic_spectrum_up_to_31() {
    for q in odd_prime_powers(3, 31) {
        let plane = Plane::of_order(q).unwrap();
        let want = BTreeMap::from([(0, q * (q - 1) / 2), (1, q + 1), (2, q * (q + 1) / 2)]);
        for k in plane.field().nonzero_elements() {
            let c = Conic::from_pencil(&plane, Pencil::P3, k).unwrap();
            assert_eq!(spectrum(&plane, c.points()).nonzero(), want, "q = {q}, k = {k}");
        }
    }
}

fn untouchable_pool(plane: &Plane) -> Vec<untouchable::PointSet> {
    let mut pool = Vec::new();
    for family in [Family::Even2qMinus1, Family::Even2qMinus2, Family::Even2qPlus1, Family::Odd2qPlus1, Family::Hyperconic] {
        for p in admissible_params(plane, family) {
            pool.push(construct(plane, family, &p).unwrap().set);
        }
    }
    pool
}

#[test]
fn unions_of_constructed_sets_stay_untouchable() {
    for q in [8u64, 16, 7, 11, 19] {
        let plane = Plane::of_order(q).unwrap();
        let pool = untouchable_pool(&plane);
        assert!(!pool.is_empty());
        let n = pool.len();
        for i in (0..n).step_by(1 + n / 40) {
            for j in (i..n).step_by(1 + n / 25) {
                let r = union_sets(&plane, &[pool[i].clone(), pool[j].clone()]).unwrap();
                assert!(brute_hits(&plane, &r.set).iter().all(|&h| h != 1), "q = {q}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn double_count(q_idx in 0usize..7, picks in prop::collection::vec(any::<u32>(), 0..60)) {
        let q = [2u64, 3, 4, 5, 8, 9, 71][q_idx];
        let plane = Plane::of_order(q).unwrap();
        let n = plane.num_points() as u32;
        let set = plane.point_set(picks.iter().map(|p| p % n)).unwrap();
        let rep = spectrum(&plane, &set);
        prop_assert_eq!(rep.incidences(), set.len() as u64 * (q + 1));
        prop_assert_eq!(rep.total_lines(), plane.num_lines() as u64);
        let hits = brute_hits(&plane, &set);
        for (s, &c) in rep.counts().iter().enumerate() {
            prop_assert_eq!(hits.iter().filter(|&&h| h == s).count() as u64, c);
        }
    }

    #[test]
    fn random_unions_of_hyperconics(a in 2u32..16, b in 1u32..16, c in 2u32..16) {
        let plane = Plane::of_order(16).unwrap();
        let sets = [
            construct(&plane, Family::Hyperconic, &untouchable::Params { pencil: Some(Pencil::P1), a: Some(Elem(a)), ..Default::default() }).unwrap().set,
            construct(&plane, Family::Hyperconic, &untouchable::Params { pencil: Some(Pencil::P2), a: Some(Elem(b)), ..Default::default() }).unwrap().set,
            construct(&plane, Family::Even2qMinus1, &untouchable::Params::a(Elem(c))).map(|r| r.set).unwrap_or_else(|_| plane.empty_set()),
        ];
        let r = union_sets(&plane, &sets).unwrap();
        prop_assert!(is_untouchable(&plane, &r.set));
    }
}

#[test]
fn minimum_sizes_in_tiny_planes() {
    let opts = SearchOptions::default();
    for (q, want) in [(2u64, 4usize), (3, 6), (4, 6)] {
        let plane = Plane::of_order(q).unwrap();
        let o = min_untouchable_size(&plane, want, &opts).unwrap();
        match o.result {
            MinSize::Found { size, witness } => {
                assert_eq!(size, want, "q = {q}");
                assert_eq!(witness.len(), size);
                assert!(is_untouchable(&plane, &witness));
            }
            other => panic!("q = {q}: {other:?}"),
        }
    }
}

#[test]
fn nothing_below_eight_at_q5() {
    let plane = Plane::of_order(5).unwrap();
    let o = min_untouchable_size(&plane, 7, &SearchOptions::default()).unwrap();
    assert_eq!(o.result, MinSize::NoneUpTo(7));
}

#[test]
fn search_is_deterministic() {
    let plane = Plane::of_order(5).unwrap();
    for size in [6usize, 8] {
        let seq = SearchOptions { parallel: false, ..Default::default() };
        let a = exhaustive_exists(&plane, size, &seq).unwrap();
        let b = exhaustive_exists(&plane, size, &SearchOptions::default()).unwrap();
        let c = exhaustive_exists(&plane, size, &SearchOptions::default()).unwrap();
        assert_eq!(a.status, SearchStatus::Exhausted);
        assert_eq!((a.status, a.nodes_explored), (b.status, b.nodes_explored));
        assert_eq!((b.status, b.nodes_explored), (c.status, c.nodes_explored));
    }
}

#[test]
fn witnesses_have_target_size() {
    let plane = Plane::of_order(3).unwrap();
    for size in 0..=plane.num_points() {
        let o = exhaustive_exists(&plane, size, &SearchOptions::default()).unwrap();
        assert_ne!(o.status, SearchStatus::Inconclusive);
        if let Some(w) = o.witness {
            assert_eq!(w.len(), size);
            assert!(brute_hits(&plane, &w).iter().all(|&h| h != 1));
        }
    }
}

#[test]
fn hyperconic_sizes_found_by_search() {
    // q = 4 hyperovals are the only constructed family small enough to search
    let plane = Plane::of_order(4).unwrap();
    let o = exhaustive_exists(&plane, 6, &SearchOptions::default()).unwrap();
    assert_eq!(o.exists(), Some(true));
}

#[test]
fn search_agrees_with_subset_enumeration() {
    for q in [2u64, 3, 4] {
        let plane = Plane::of_order(q).unwrap();
        for size in 0..=plane.num_points() {
            let o = exhaustive_exists(&plane, size, &SearchOptions::default()).unwrap();
            assert_eq!(o.exists(), Some(common::brute_untouchable_exists(&plane, size)), "q = {q}, size = {size}");
        }
    }
    let plane = Plane::of_order(5).unwrap();
    for size in [6usize, 8, 9, 10, 12] {
        let o = exhaustive_exists(&plane, size, &SearchOptions::default()).unwrap();
        assert_eq!(o.exists(), Some(common::brute_untouchable_exists(&plane, size)), "q = 5, size = {size}");
    }
}
