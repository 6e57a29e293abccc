//! Configuration, CSV and manifest output, and the command runners behind
//! the `anyon` binary.

pub mod commands;
pub mod config;
pub mod csv;
pub mod manifest;

pub use commands::{run, spectrum_options, RunReport};
pub use config::{RunConfig, Verb};
pub use csv::{Cell, CsvTable};
pub use manifest::{sha256_hex, RunManifest};

use crate::error::Error;

/// Process exit code for an error: 2 validation, 3 numerical, 4 I/O.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::Format(_) | Error::Resource(_) => 2,
        Error::NotConverged(_) | Error::Quadrature(_) | Error::Assembly(_) | Error::Singular(_) => {
            3
        }
        Error::Io(_) => 4,
    }
}

/// Single-line `error[kind]: message` form.
pub fn error_line(e: &Error) -> String {
    let kind = match exit_code(e) {
        2 => "validation",
        3 => "numerical",
        _ => "io",
    };
    format!("error[{kind}]: {}", e.to_string().replace('\n', " "))
}
