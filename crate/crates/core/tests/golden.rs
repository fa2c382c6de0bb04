mod common;

use cnlql::compile;
use cnlql::qlgen::{normalize_ql, RenderOptions};
use cnlql::registry::builtin_crypto_profile;
use common::*;

fn assert_golden(nsra: &str, reference: &str) {
    let ql = compile(nsra, &builtin_crypto_profile(), &RenderOptions::default()).unwrap();
    assert_eq!(
        normalize_ql(&ql),
        normalize_ql(reference),
        "generated:\n{ql}"
    );
}

#[test]
fn single_invocation() {
    assert_golden(INTRO_NSRA, INTRO_QL);
}

#[test]
fn negative_invocation() {
    assert_golden(NEGATIVE_NSRA, NEGATIVE_QL);
}

#[test]
fn key_versus_algorithm() {
    assert_golden(TASK1_NSRA, &patched(LISTING2, LISTING2_PATCHES));
}

#[test]
fn algorithm_versus_mode() {
    assert_golden(TASK2_NSRA, LISTING3);
}

#[test]
fn mode_versus_signature() {
    assert_golden(TASK3_NSRA, &patched(LISTING4, LISTING4_PATCHES));
}

#[test]
fn unpatched_listings_differ() {
    let reg = builtin_crypto_profile();
    for (nsra, listing) in [(TASK1_NSRA, LISTING2), (TASK3_NSRA, LISTING4)] {
        let ql = compile(nsra, &reg, &RenderOptions::default()).unwrap();
        assert_ne!(normalize_ql(&ql), normalize_ql(listing));
    }
}

#[test]
fn listing_normalization_is_idempotent() {
    for listing in [
        INTRO_QL.to_string(),
        NEGATIVE_QL.to_string(),
        LISTING2.to_string(),
        patched(LISTING2, LISTING2_PATCHES),
        LISTING3.to_string(),
        LISTING4.to_string(),
    ] {
        let once = normalize_ql(&listing);
        assert_eq!(normalize_ql(&once), once);
    }
}

#[test]
fn narrow_layout_normalizes_the_same() {
    let reg = builtin_crypto_profile();
    for nsra in [TASK1_NSRA, TASK2_NSRA, TASK3_NSRA] {
        let wide = compile(nsra, &reg, &RenderOptions::default()).unwrap();
        let narrow = compile(nsra, &reg, &RenderOptions::new(40, 6).unwrap()).unwrap();
        assert_ne!(wide, narrow);
        assert_eq!(normalize_ql(&wide), normalize_ql(&narrow));
    }
}
