//! Library side of the `dglbss` command-line tool: the `.dgl` and map file
//! formats, the reports, and the computations behind each subcommand.

pub mod commands;
pub mod dgl_file;
pub mod map_file;
pub mod report;

pub use commands::{CliError, ExampleName, Target};
pub use dgl_file::{DglFile, ParseError};
pub use map_file::MapFile;
