//! Strands algebras of pointed matched circles over F2, the identity type DD
//! bimodule, a large model of the identity AA bimodule with an explicit
//! contracting homotopy, the rank-1 bimodule obtained by homological
//! perturbation, and duality computations in the cobar resolution.

pub mod bigmodel;
pub mod bimod;
pub mod cobar;
pub mod homology;
pub mod homotopy;
pub mod identity_dd;
pub mod linalg;
pub mod perturbation;
pub mod pmc;
pub mod strands;

pub use bigmodel::BigGenerator;
pub use homology::{homology, Homology};
pub use pmc::{Chord, Idempotent, Pmc, Point, PointedMatchedCircle, Segment};
pub use strands::{AlgebraElement, MultiplicityVector, StrandDiagram};
