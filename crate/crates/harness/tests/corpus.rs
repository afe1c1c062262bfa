use equipment_harness::corpus::{exhaustive, generate_corpus, library, CorpusBounds};
use equipment_harness::instance::load_instance;

#[test]
fn arrow_has_eleven_small_copresheaves() {
    // maps between sets of sizes m ≤ n ≤ 2 from the source to the target: Σ n^m
    let oracle: usize = (0..=2usize).flat_map(|m| (0..=2usize).map(move |n| n.pow(m as u32))).sum();
    assert_eq!(oracle, 11);
    let n = exhaustive(2).iter().filter(|e| e.name.starts_with("arrow/")).count();
    assert_eq!(n, oracle);
}

#[test]
fn sweep_covers_the_library() {
    let c = generate_corpus(CorpusBounds::exhaustive(), 0);
    for (name, _) in library() {
        assert!(c.iter().any(|e| e.name.starts_with(&format!("{name}/"))), "{name}");
    }
    assert!(generate_corpus(CorpusBounds::zero(), 0).is_empty());
}

#[test]
fn fixture_loads() {
    let inst =
        load_instance(&std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/boolean_square.json")).unwrap();
    assert_eq!(inst.categories.len(), 1);
    assert_eq!(inst.product_choices.len(), 1);
    assert_eq!(inst.product_choices["meets"].terminal(), 3);
}
