//! Command-line front end and HTTP API.

pub mod api;
