//! Command-line experiments for phase-damping channels: channel files,
//! CSV output, configuration and thread-parallel sampling on top of
//! [`dephasing_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod format;
pub mod output;
pub mod report;

pub use crate::config::{FileConfig, RunConfig};
pub use crate::error::CliError;
pub use crate::experiments::{
    assistance, figure_records, lambda_sweep, mcmq_curve, with_threads, CurveRow, LambdaRow,
    McmqBound,
};
pub use crate::format::{
    channel_to_json, parse_channel, parse_channel_with, read_channel, ChannelFile,
};
pub use crate::report::{analyze, MetricsReport, VolumeKind};
