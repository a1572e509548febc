//! Batch front end for the `symbi` library: one JSON request in, one
//! JSON, CSV or text report out.

pub mod request;
pub mod run;
mod svg;

pub use request::{parse_request, Request};
pub use run::{execute, Artifact, Failure, Outcome};
