//! JSON file formats and the `associahedra` command-line tool built on the
//! [`associahedra`] crate.

pub mod app;
pub mod json;
