//! Exact local Fourier transforms of formal connections.

pub mod coeff;
pub mod series;
pub mod connection;
pub mod transform;
pub mod oracle;
pub mod cli;
