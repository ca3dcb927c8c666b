//! Byte-for-byte output of six invocations, each run twice.
//!
//! `UPDATE_GOLDEN=1 cargo test -p hsym-cli --test golden` rewrites the files.

mod common;

#[test]
fn golden_outputs() {
    let failures: Vec<String> =
        common::GOLDEN_CASES.iter().filter_map(|(name, args)| common::check_case(name, args).err()).collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn exit_codes_cover_the_contract() {
    let codes: Vec<String> = common::GOLDEN_CASES
        .iter()
        .map(|(_, args)| common::run(args).lines().next().unwrap().to_string())
        .collect();
    for c in ["exit: 0", "exit: 1", "exit: 2"] {
        assert!(codes.iter().any(|x| x == c), "{codes:?}");
    }
}
