//! Shared corpus, brute-force oracles and acceptance criteria for the
//! integration tests.
#![allow(dead_code)]

pub mod corpus;
pub mod criteria;
pub mod oracle;
