//! Library half of the command-line front end: the named verification
//! suites, shared between the `verify` verb and the integration tests.

pub mod suites;
