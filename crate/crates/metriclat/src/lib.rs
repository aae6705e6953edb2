//! Verification harness, model loading and file formats for `metriclat-core`.

pub mod io;
pub mod models;
pub mod oracle;
pub mod sweep;
pub mod verify;
