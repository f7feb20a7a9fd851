//! CSV ingestion, parameter sweeps and SVG plots.

mod sample;
mod svg;
mod sweep;

pub use sample::{parse_sample_csv, read_sample_csv, ColumnSelector, IngestReport};
pub use svg::{mp_plot_svg_string, render_mp_plot_svg, PlotOptions};
pub use sweep::{
    fmt_num, read_sweep_csv, sweep, sweep_csv_string, sweep_with, write_sweep_csv, SweepResult, SweepRow,
};
