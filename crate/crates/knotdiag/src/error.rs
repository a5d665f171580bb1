use thiserror::Error;

use crate::diagram::Violation;

fn join(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Failures of the core diagram layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("invalid diagram: {}", join(.0))]
    InvalidDiagram(Vec<Violation>),
    #[error("unknown edge {0}")]
    UnknownEdge(u32),
    #[error("unknown face {0}")]
    UnknownFace(usize),
    #[error("port {0} is not a dart of this diagram")]
    UnknownDart(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("Gauss diagram has no planar realization")]
    NonRealizable,
    #[error("unknown arrow {0}")]
    UnknownArrow(usize),
    #[error("malformed Gauss diagram: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("inapplicable move: {0}")]
    InapplicableMove(String),
    #[error("face {0} is not a 3-gon")]
    NotATriangle(usize),
    #[error("edge sides do not lie on a common face")]
    NotCofacial,
    #[error("both edge sides belong to the same edge")]
    SameEdge,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error("no cofacial pair of core edges separates the protected copy")]
    NoCofacialCorePair,
    #[error("invalid tangle: {0}")]
    InvalidTangle(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    Move(#[from] MoveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no applicable move from the current diagram")]
    Deadend,
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("violation at depth {depth}: isolated-copy count dropped to 0")]
    ViolationFound { depth: usize, diagram: String },
    #[error(transparent)]
    Move(#[from] MoveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("layout failed: {0}")]
    LayoutFailure(String),
}

/// Parse errors carry a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("structure error: {0}")]
    StructureError(String),
    #[error("not a knot: {0} components")]
    NotAKnot(usize),
}
