//! Library side of the huygens-channel CLI: configuration parsing,
//! point/sweep evaluation and output rendering. The binary in `main.rs`
//! is a thin clap front end over these modules.

pub mod config;
pub mod output;
pub mod run;
