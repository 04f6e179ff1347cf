//! Quillen and Sullivan models, the space catalog, and model files.

mod catalog;
mod io;
mod lie_expr;
mod quillen;
mod sullivan;

pub use catalog::{full_catalog, truncated_polynomial_quillen, truncated_polynomial_sullivan, Space};
pub use io::{model_from_json, model_from_str, model_to_json, quillen_from_json, quillen_to_json, sullivan_from_json, sullivan_to_json};
pub use lie_expr::{LieExpr, LieTree, TensorElement};
pub use quillen::{QuillenGenerator, QuillenModel};
pub use sullivan::{SullivanGenerator, SullivanModel};

use std::fmt;

use thiserror::Error;

/// One failed check of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub generator: String,
    pub message: String,
    pub residue: Option<String>,
}

impl Violation {
    pub fn new(generator: &str, message: &str) -> Self {
        Violation { generator: generator.into(), message: message.into(), residue: None }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.generator, self.message)?;
        if let Some(r) = &self.residue {
            write!(f, " (residue {r})")?;
        }
        Ok(())
    }
}

fn join(v: &[Violation]) -> String {
    v.iter().map(Violation::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unsupported space `{0}` (try sphere:n, cp:r, hp:r, op2, kz:d, kzxs:d,p)")]
    UnsupportedSpace(String),
    #[error("{pointer}: {message}")]
    Parse { pointer: String, message: String },
    #[error("{pointer}: unknown generator `{name}`")]
    UnknownGenerator { name: String, pointer: String },
    #[error("invalid model: {}", join(.0))]
    Invalid(Vec<Violation>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Quillen(QuillenModel),
    Sullivan(SullivanModel),
}

impl Model {
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            Model::Quillen(m) => m.validate(),
            Model::Sullivan(m) => m.validate(),
        }
    }
}
