//! Acceptance suite for `aglist`. The criteria live in `tests/acceptance.rs`
//! and print one PASS/FAIL line each:
//!
//! ```text
//! cargo test -p aglist-validation --test acceptance
//! ```
//!
//! The suite sits in its own package so that `cargo test --workspace` runs
//! it after every other test binary; a failing criterion then cannot hide
//! the results of the unit and integration tests.
