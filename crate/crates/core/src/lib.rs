//! Average quantum coherence of pure-state decompositions.
//!
//! A mixed state admits infinitely many pure-state ensembles, and the
//! average coherence of an ensemble depends on which one you pick. This
//! crate provides the machinery to explore that freedom for small dense
//! systems:
//!
//! - [`qmat`]: validated density matrices, Hermitian eigendecomposition,
//!   dephasing, and correlation matrices;
//! - [`measures`]: symmetric concave coherence measures on pure states
//!   (relative entropy, l1, fidelity, a power family, convex mixes) plus
//!   majorization utilities;
//! - [`ensembles`]: pure-state decompositions, their construction through
//!   the isometry freedom of ensembles, average coherence and mean square
//!   deviation;
//! - [`bounds`]: the diagonal upper bound on average coherence, its
//!   saturation condition, closed-form optimal decompositions, and a
//!   derivative-free maximizer certifying saturation in low dimension;
//! - [`bloch`]: the qubit Bloch-sphere picture with four canonical
//!   decompositions and their measure-independent order relations.
//!
//! Batch work (grid sweeps, randomized checks, optimizer restarts) runs
//! through [`exec`], which is data-parallel with rayon under the default
//! `parallel` feature and falls back to sequential iteration without it.
//! Results are aggregated in index order either way, so outputs do not
//! depend on scheduling.

pub mod bloch;
pub mod bounds;
pub mod ensembles;
pub mod exec;
pub mod measures;
pub mod qmat;
mod simplex;

pub use bloch::{BlochVector, OrderingRecord};
pub use bounds::BoundReport;
pub use ensembles::{Ensemble, Isometry};
pub use measures::{CoherenceMeasure, CoherenceVector, PureState};
pub use qmat::{ComplexMatrix, CorrelationMatrix, DensityMatrix, EigenSystem};
