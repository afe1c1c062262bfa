//! Randomized and exhaustive cross-checks over finite instances, with JSON
//! instance files and reports.

pub mod corpus;
pub mod gen;
pub mod instance;
pub mod report;
pub mod run;
pub mod suites;
pub mod thm1;
pub mod thm23;
