//! File formats, SVG export and the `multiquilt` command-line front end for
//! [`multiquilt_core`].
//!
//! All outputs are deterministic: the same arguments and seed give byte-identical reports,
//! SVG files and plot data.

pub mod cli;
pub mod commands;
pub mod formats;
pub mod report;
pub mod svg;
