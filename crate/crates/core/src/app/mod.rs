//! File formats and the `grafrec` command line.
//!
//! All text inputs share one line syntax: `#` starts a comment line, blank
//! lines are ignored, `[name]` opens a section and fields are separated by
//! tabs or spaces. Ratings are the exception and use CSV.

mod cli;
mod files;
mod labels;
mod layout;
mod text;

use std::path::Path;

use thiserror::Error;

use crate::graph::GraphRepresentation;
use crate::hetnet::RatingScale;

pub use cli::run_cli;
pub use files::{
    pgrec_from_ratings, read_classes, read_het, read_link, read_ratings, read_session, write_het,
    write_link, LabeledHet, LabeledRatings, LabeledSession,
};
pub use labels::Labels;
pub use layout::{read_layout, write_layout};

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    /// Well-formed lines that do not describe a valid layout.
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    /// The input breaks a rule of the model it describes.
    #[error("{path}: {message}")]
    Validation { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl AppError {
    /// 1 for rule violations, 2 for everything caused by malformed input or
    /// arguments.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Validation { .. } => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Session,
    Link,
    Het,
    Ratings(RatingScale),
}

#[derive(Debug, Clone)]
pub enum GraphModel {
    Session(LabeledSession),
    Link(GraphRepresentation),
    Het(LabeledHet),
    Ratings(LabeledRatings),
}

pub(crate) fn read_text(path: &Path) -> Result<String, AppError> {
    std::fs::read_to_string(path).map_err(|source| AppError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads and validates a model file. Session files must satisfy every
/// structural rule, including the class rules when classes are declared.
pub fn parse_graph_file(path: &Path, kind: FileKind) -> Result<GraphModel, AppError> {
    let text = read_text(path)?;
    let origin = path.display().to_string();
    Ok(match kind {
        FileKind::Session => {
            let s = read_session(&text, &origin)?;
            let violations = s.graph.validate(s.graph.classes());
            if !violations.is_empty() {
                let described: Vec<String> = violations.iter().map(|v| s.describe(v)).collect();
                return Err(AppError::Validation {
                    path: origin,
                    message: described.join("; "),
                });
            }
            GraphModel::Session(s)
        }
        FileKind::Link => GraphModel::Link(read_link(&text, &origin)?),
        FileKind::Het => GraphModel::Het(read_het(&text, &origin)?),
        FileKind::Ratings(scale) => GraphModel::Ratings(read_ratings(&text, &origin, scale)?),
    })
}
