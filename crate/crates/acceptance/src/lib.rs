//! Holds the acceptance report, run with `cargo test -p panto-acceptance`.
