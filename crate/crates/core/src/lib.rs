//! Small simplicial complexes with fundamental group `Z^n`, and the group
//! presentation machinery that bounds how small they can be.
//!
//! * [`complex`]: simplicial complexes, spur collapses and integer homology.
//! * [`factorization`]: 1-factorizations of `K_2n` and orthogonal pairs.
//! * [`construction`]: the complexes `W_n`, their spur partitions and `X_m`.
//! * [`presentation`]: 3-presentations, abelianization and Tietze rewriting.
//! * [`sg`]: exact Sylvester–Gallai configuration checks and degree pruning.
//! * [`pipeline`]: end-to-end drivers and reports.
//!
//! With the default `parallel` feature, batch loops (homology degrees, per-point
//! tallies, per-plane sparsity checks) run on rayon. Disabling the feature gives
//! the same results sequentially.

pub mod complex;
pub mod construction;
pub mod factorization;
pub mod linalg;
pub mod par;
pub mod pipeline;
pub mod presentation;
pub mod sg;

pub use complex::{Simplex, SimplicialComplex};
pub use linalg::{IntegerMatrix, SnfResult};
pub use presentation::{AbelianMap, Presentation, Word};
