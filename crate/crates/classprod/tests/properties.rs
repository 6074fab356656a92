//! Cross-cutting properties of the std crate: catalog contract, report
//! determinism, ingest round-trips, and the Lemma 4.4 reduction validated
//! against the full wreath product.

use classprod::handle::{parse_group_spec, spec_name, GroupHandle};
use classprod::ingest;
use classprod::report::{self, Outcome};
use classprod::scenario::{
    self, builtin_catalog, load_scenario_str, run_scenario, serialize_scenario, RunOptions,
    wreath_met_classes_reduced,
};
use classprod_core::classes::{class_product_decompose, enumerate_class};
use classprod_core::classical::ClassicalGroup;
use classprod_core::Perm;
use proptest::prelude::*;

#[test]
fn catalog_contract() {
    let catalog = builtin_catalog();
    assert!(catalog.len() >= 16, "catalog holds {} scenarios", catalog.len());
    let mut ids: Vec<&str> = catalog.iter().map(|s| s.id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), catalog.len(), "scenario ids are unique");
    for s in &catalog {
        // every file-sourced group and SLP element appears in the gated list
        let gated: Vec<&str> = s.gated.iter().map(|g| g.file.as_str()).collect();
        if let Some(f) = &s.group.file {
            assert!(gated.contains(&f.as_str()), "{}: group file gated", s.id);
        }
        for (name, e) in &s.elements {
            if let Some(f) = &e.file {
                assert!(gated.contains(&f.as_str()), "{}: element {name} file gated", s.id);
            }
        }
    }
}

#[test]
fn scenario_roundtrip() {
    for s in builtin_catalog() {
        let text = serialize_scenario(&s);
        assert_eq!(load_scenario_str(&text).unwrap(), s, "{} round-trips", s.id);
    }
}

#[test]
fn ungated_scenarios_never_skip_and_reports_are_deterministic() {
    let opts = RunOptions::default();
    let spec = scenario::builtin("thm1_4_sl2_3").unwrap();
    assert!(spec.gated.is_empty());
    let mut a = run_scenario(&spec, &opts);
    let mut b = run_scenario(&spec, &opts);
    assert_ne!(a.outcome, Outcome::Skipped, "ungated scenario never skips");
    a.wall_ms = 0;
    b.wall_ms = 0;
    assert_eq!(
        report::to_json(&[a]),
        report::to_json(&[b]),
        "identical inputs give identical reports (up to wall time)"
    );
}

#[test]
fn gated_scenario_skips_without_data() {
    let opts = RunOptions {
        data_dir: std::env::temp_dir().join("classprod-no-such-dir"),
        cache_dir: Some(std::env::temp_dir().join("classprod-no-such-cache")),
        ..RunOptions::default()
    };
    let spec = scenario::builtin("prop6_2_g2_in_d4").unwrap();
    let report = run_scenario(&spec, &opts);
    assert_eq!(report.outcome, Outcome::Skipped);
    assert_eq!(report.outcome_str(), "SKIPPED(GatedDataMissing)");
}

/// Lemma 4.4 reduction vs ground truth: the number of classes met by C1*C2
/// in the actual wreath product SL2(q) wr 2 equals the reduced SL2(q) count.
#[test]
fn wreath_reduction_matches_full_product() {
    for (q, expected) in [(3u8, 2usize), (5, 4)] {
        let spec = parse_group_spec(&format!("WrSL2:4:{q}")).unwrap();
        let h = GroupHandle::new(spec_name(&spec), ClassicalGroup::build(spec, 0).unwrap());
        let c1 = h
            .element_perm("wreath_double_transvection", &Default::default())
            .unwrap();
        let c2 = h.element_perm("block_swap", &Default::default()).unwrap();
        let g = &h.inner.group;
        let cc1 = enumerate_class(g, &c1, 1_000_000, 0).unwrap();
        let cc2 = enumerate_class(g, &c2, 1_000_000, 0).unwrap();
        let dec = class_product_decompose(g, &cc1, &cc2, 1_000_000, 10_000_000, 0).unwrap();
        assert_eq!(dec.rows.len(), expected, "q = {q}: full wreath count");
        assert_eq!(
            wreath_met_classes_reduced(q).unwrap(),
            expected,
            "q = {q}: reduced count"
        );
    }
}

/// A uniform-ish permutation of the given degree: argsort of random keys.
fn perm_of(deg: u16) -> impl Strategy<Value = Perm> {
    proptest::collection::vec(any::<u32>(), deg as usize).prop_map(move |keys| {
        let mut img: Vec<u16> = (0..deg).collect();
        img.sort_by_key(|&i| (keys[i as usize], i));
        Perm::from_images(img).unwrap()
    })
}

/// A nonempty list of permutations sharing one degree (file formats require
/// a uniform degree).
fn perm_vec() -> impl Strategy<Value = Vec<Perm>> {
    (1..=40u16).prop_flat_map(|deg| proptest::collection::vec(perm_of(deg), 1..6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn images_and_cycles_roundtrip(perms in perm_vec()) {
        let text = ingest::serialize_images(&perms);
        prop_assert_eq!(ingest::parse_images(&text).unwrap(), perms.clone());
        let cyc = ingest::serialize_cycles(&perms);
        prop_assert_eq!(ingest::parse_cycles(&cyc).unwrap(), perms);
    }

    #[test]
    fn slp_eval_matches_direct_composition(
        (a, b, e) in (2..=12u16).prop_flat_map(|d| (perm_of(d), perm_of(d), 0u64..6)),
    ) {
        let prog = ingest::parse_slp(&format!("inp a\ninp b\nmu a b c\niv c d\npw d {e} f\noup f\n")).unwrap();
        let out = ingest::eval_slp(&prog, &[a.clone(), b.clone()]).unwrap();
        let direct = a.compose(&b).inverse().pow(e);
        prop_assert_eq!(out.into_iter().next().unwrap(), direct);
    }
}
