//! Library surface of the command-line harness: the exhaustive corpus
//! runner, witness shrinking, and the report types shared with tests.

pub mod commands;
pub mod corpus;
pub mod report;
