//! Exact-arithmetic machinery for kneading maps, generalized odometers, and
//! ordered Bratteli-Vershik diagrams.
//!
//! The crate builds the combinatorial objects attached to a unimodal kneading
//! map `Q`: its cutting times `S_k` (defined by `S_k = S_{k-1} + S_{Q(k)}`),
//! the generalized odometer on `{0,1}`-digit sequences in the numeration
//! system `(S_k)`, the leveled ordered diagram whose path counts reproduce the
//! cutting times, and the exact-rational stochastic matrices that describe its
//! simplex of invariant measures as an inverse limit. On top of that sits a
//! constructive realization routine ([`realization::approximate_targets`])
//! that, given a tower of target simplex columns, produces a two-parameter
//! kneading map whose transition tower hits every target column within an
//! explicit, exactly verified error schedule.
//!
//! Everything is integer or rational arithmetic on arbitrary-precision
//! numbers; no operation in this crate touches floating point. Identities are
//! checked with tolerance zero.
//!
//! # Modules
//!
//! - [`kneading`]: kneading maps, cutting times, admissibility, and the
//!   block-structured `(a, q)` family.
//! - [`odometer`]: digit expansions, the add-one-and-carry map, and cylinder
//!   dynamics.
//! - [`bratteli`]: the leveled diagram of a kneading map, path counts,
//!   transition matrices, and the successor (adic) map on finite paths.
//! - [`towers`]: exact-rational stochastic linear algebra and inverse-limit
//!   comparison bounds.
//! - [`realization`]: the target-column approximation algorithm, the
//!   closed-form block products, and the projection/intertwining identities
//!   that tie the diagram tower to the canonical one.
//! - [`contfrac`]: continued-fraction kneading maps and 2x2 continuant
//!   products.
//! - [`tent`]: exact-slope tent maps, interval chains, cutting-time
//!   extraction, and slope fitting.
//! - [`gen`]: seeded generators for randomized verification suites.
//!
//! # Parallelism
//!
//! With the default `parallel` feature, batch operations (matrix products,
//! digit-expansion ranges, path-count oracles) run on a rayon pool. Results
//! are bit-identical to the sequential fallback; every parallel entry point
//! has a `_seq` twin used by the benchmark suite.

pub mod bratteli;
pub mod contfrac;
pub mod gen;
pub mod kneading;
pub mod odometer;
pub mod rational;
pub mod realization;
pub mod tent;
pub mod towers;

pub use kneading::{AqSpec, CuttingTimes, KneadingMap};
pub use rational::{Int, Nat, Rat};
