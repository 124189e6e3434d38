use std::collections::BTreeMap;

use tptri::bijection::word_of_partition;
use tptri::network::*;
use tptri::partition::{enumerate_partitions, stirling_subset};
use tptri::poly::{Polynomial, VariableTable};
use tptri::tpcheck::{enumerate_minors, MinorCache};
use tptri::triangle::{gen_ace_seq, gen_general4, AceParams, Params4};

#[test]
fn d_with_unit_alpha_and_level_beta_is_stirling() {
    let t = VariableTable::new();
    let net = build_d(&t, 8, |_, _| Polynomial::one(&t), |_, l| Polynomial::constant(&t, l as i64));
    let pm = net.path_matrix(8).unwrap();
    let s = stirling_subset(8);
    for n in 0..=8 {
        for k in 0..=n {
            assert_eq!(pm.get(n, k).as_integer().unwrap(), s[n][k], "({n},{k})");
        }
    }
}

#[test]
fn reduced_network_census() {
    let t = VariableTable::new();
    let net = build_dprime(&t, 7);
    let s = stirling_subset(8);
    for n in 0..=7 {
        for k in 0..=n {
            let count = net.path_count(net.sources()[n], net.sinks()[k]);
            assert_eq!(count, s[n + 1][n + 1 - k], "|P({n},{k})|");
        }
        for k in n + 1..=7 {
            assert_eq!(net.path_count(net.sources()[n], net.sinks()[k]), 0.into());
        }
    }
}

#[test]
fn reduced_network_specializes_to_general4() {
    let t = VariableTable::new();
    let pm = build_dprime(&t, 6).path_matrix(6).unwrap();
    let z = Polynomial::zero(&t);
    let expected = gen_general4(6, &Params4 { d: z, ..Params4::symbolic(&t) });
    assert_eq!(specialize_ace(&pm).unwrap(), expected);
}

#[test]
fn reduced_network_specializes_to_sequences() {
    let t = VariableTable::new();
    let pm = build_dprime(&t, 6).path_matrix(6).unwrap();
    let expected = gen_ace_seq(6, &AceParams::symbolic(&t, 6));
    assert_eq!(specialize_ace_seq(&pm).unwrap(), expected);
}

#[test]
fn path_words_match_partition_words() {
    let t = VariableTable::new();
    let net = build_dprime(&t, 5);
    for n in 0..=5 {
        for k in 0..=n {
            let mut from_paths: Vec<String> = net
                .enumerate_paths(n, k, 10_000)
                .unwrap()
                .iter()
                .map(|p| p.word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            let mut from_parts: Vec<String> = enumerate_partitions(n + 1, n + 1 - k)
                .iter()
                .map(|pi| word_of_partition(pi).0.to_string())
                .collect();
            from_paths.sort();
            from_parts.sort();
            assert_eq!(from_paths, from_parts, "({n},{k})");
        }
    }
}

#[test]
fn path_weight_is_product_of_letters() {
    let t = VariableTable::new();
    let net = build_dprime(&t, 4);
    for p in net.enumerate_paths(4, 2, 10_000).unwrap() {
        let w = p.word.iter().fold(Polynomial::one(&t), |acc, l| {
            &acc * &Polynomial::variable(&t, l.symbol()).unwrap()
        });
        assert_eq!(w, p.weight);
    }
}

#[test]
fn lgv_on_reduced_network() {
    let t = VariableTable::new();
    let net = build_dprime(&t, 5);
    let pm = net.path_matrix(5).unwrap();
    let cache = MinorCache::new(&pm);
    let mut checked = 0;
    for spec in enumerate_minors(6, 1, 3) {
        let fams = net.nonintersecting_families(&spec.rows, &spec.cols, 100_000).unwrap();
        let sum = fams.iter().fold(Polynomial::zero(&t), |acc, f| {
            let w = f.iter().fold(Polynomial::one(&t), |w, p| &w * &p.weight);
            &acc + &w
        });
        assert_eq!(*cache.det_spec(&spec), sum, "{spec:?}");
        checked += 1;
    }
    assert_eq!(checked, 36 + 225 + 400);
}

#[test]
fn lgv_on_stirling_network_counts() {
    let t = VariableTable::new();
    let net = build_d(&t, 6, |_, _| Polynomial::one(&t), |_, l| Polynomial::constant(&t, l as i64));
    let pm = net.path_matrix(6).unwrap();
    let cache = MinorCache::new(&pm);
    for spec in enumerate_minors(7, 2, 2) {
        let fams = net.nonintersecting_families(&spec.rows, &spec.cols, 100_000).unwrap();
        let sum = fams.iter().fold(Polynomial::zero(&t), |acc, f| {
            &acc + &f.iter().fold(Polynomial::one(&t), |w, p| &w * &p.weight)
        });
        assert_eq!(*cache.det_spec(&spec), sum);
    }
}

#[test]
fn reduced_network_letter_census() {
    let t = VariableTable::new();
    let net = build_dprime(&t, 4);
    let mut by_kind: BTreeMap<&str, usize> = BTreeMap::new();
    for e in net.edges() {
        match e.letter {
            Some(tptri::bijection::Letter::E { .. }) => *by_kind.entry("e").or_default() += 1,
            Some(tptri::bijection::Letter::A { j: 0, .. }) => *by_kind.entry("c").or_default() += 1,
            Some(_) => *by_kind.entry("a").or_default() += 1,
            None => assert!(e.weight == Polynomial::one(&t)),
        }
    }
    // letters e(i,l) and a(i,0,l) with i + l < 4, a(i,j,l) with 1 <= j <= i, i + l < 4
    assert_eq!(by_kind["e"], 10);
    assert_eq!(by_kind["c"], 10);
    assert_eq!(by_kind["a"], 10);
}
