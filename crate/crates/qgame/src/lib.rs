//! File formats, report rendering, threaded workers and the `qgame` command
//! line for [`qgame_core`].

pub mod cli;
pub mod formats;
pub mod parallel;
pub mod report;
