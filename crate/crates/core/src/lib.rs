//! Exact and numerical machinery for projective systems on branching graphs.
//!
//! The crate implements four projective systems and everything attached to
//! them:
//!
//! * the **Pascal graph** and the **binomial system** on `Z_+` with levels
//!   indexed by positive reals,
//! * the **Young graph** `Y` of Young diagrams graded by box count,
//! * the **Gelfand-Tsetlin graph** `GT` of signatures (its nonnegative part
//!   `GT+` is what the link constructors operate on),
//! * the **Young bouquet** `YB`, the continuously graded poset of pairs
//!   (diagram, positive level).
//!
//! Finite-level Markov kernels ([`links`]) are exact rational. Boundary
//! kernels ([`boundary`]) evaluate symmetric functions at Thoma cone points
//! ([`symfunc`]) and mix exact combinatorial factors with real-valued
//! exponentials. The distinguished coherent families (negative binomial,
//! z-measures, zw-measures) live in [`measures`], quantitative verifiers for
//! the degeneration theorems in [`limits`], and Gibbs path samplers in
//! [`paths`]. Brute-force reference implementations used by the test suites
//! are collected in [`oracles`].

pub mod boundary;
pub mod limits;
pub mod links;
pub mod measures;
pub mod oracles;
pub mod partitions;
pub mod paths;
pub mod scalar;
pub mod symfunc;

mod error;

pub use error::{Error, Result};
