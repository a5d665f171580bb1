//! Text formats: PD codes, signed Gauss codes and the JSON schema.

pub mod gauss_code;
pub mod json;
pub mod pd;

pub use gauss_code::{emit_gauss, parse_gauss};
pub use pd::{emit_pd, parse_pd};
