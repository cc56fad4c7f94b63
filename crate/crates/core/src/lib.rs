pub mod algebraic;
pub mod atoms;
pub mod error;
pub mod fixtures;
pub mod formula;
pub mod interpretation;
pub mod kteam;
pub mod probes;
pub mod provenance;
pub mod repairs;
pub mod sampling;
pub mod semiring;
pub mod team_semantics;

pub use error::{Error, Result};
pub use formula::{CmpOp, DependencyAtom, Formula, Literal, TeamFormula, Vocabulary};
pub use interpretation::{Assignment, KInterpretation, Structure, Universe};
pub use kteam::KTeam;
pub use semiring::{SemiringSpec, Value};
