//! Knot diagrams as combinatorial maps, their Gauss diagrams, Reidemeister
//! moves, pattern counts, and bounded searches over the move graph.

pub mod constructions;
pub mod diagram;
pub mod error;
pub mod gauss;
pub mod io;
pub mod moves;
pub mod render;
pub mod search;

pub use diagram::{
    CanonicalKey, EdgeId, EdgeSide, FaceId, FaceViolation, Faces, Outer, PlanarDiagram, Polygon, Port, PreconditionReport, Side,
    Sign,
};
pub use error::{ConstructionError, DiagramError, GaussError, MoveError, ParseError, RenderError, SearchError};
pub use gauss::{count_isolated_copies, count_pattern, reconstruct_planar, Arrow, ArrowPattern, GaussDiagram, IsolatedCopies};
pub use moves::{apply_move, enumerate_moves, MoveKind, MoveKinds, MoveSequence, ReidemeisterMove};
