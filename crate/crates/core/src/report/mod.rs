//! Layout, styling, exports, and the end-to-end pipeline.

pub mod graphml;
pub mod layout;
pub mod pipeline;
pub mod style;
pub mod svg;
pub mod tables;
pub mod verify;

pub use graphml::{export_graphml, parse_graphml, read_graphml, to_dot, to_graphml, AnnotatedNetwork, NodeAttributes};
pub use layout::{layout_spring, spring_positions, DEFAULT_LAYOUT_ITERATIONS};
pub use pipeline::{
    compute_intermediates, derive_outputs, load_inputs, run_pipeline, Inputs, Intermediates, OutputLock, RunConfig,
    RunParameters, RunReport,
};
pub use style::{rate_color, ColorDirection, NodeStyle, SizeBy, HIGH_COLOR, LOW_COLOR};
pub use verify::{verify_run, VerifySummary};
