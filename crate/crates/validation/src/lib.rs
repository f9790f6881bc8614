//! Holds the `acceptance` test target, which checks every acceptance
//! criterion and prints one PASS/FAIL line each. Run it with
//! `cargo test -p parking-validation --test acceptance`.
