//! File formats, solver dispatch, generators and experiments behind `spctl`.

pub mod dimacs;
pub mod dispatch;
pub mod experiment;
pub mod format;
pub mod generate;
