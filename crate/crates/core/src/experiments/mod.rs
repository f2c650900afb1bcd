//! Figure-reproduction sweeps and the tables they produce.

mod config;
mod figures;
mod table;

pub use config::{linspace, ConfigFile, FigureId, Mode, SweepSpec, DEFAULTS};
pub use figures::{run_fig2b, run_fig3bcd, run_fig3e, run_fig4b, run_fig4c, run_figure};
pub use table::{write_table, Column, Format, SweepTable};
