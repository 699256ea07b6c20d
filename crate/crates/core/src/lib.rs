//! Algebra on left coset representatives of finite permutation groups.
//!
//! A transversal `M` of a subgroup `G` in a group `X` carries a binary
//! operation with a left identity and right division, a `G`-valued cocycle
//! recording its failure to associate, and a pair of cross actions between
//! `M` and `G`. This crate builds that structure and the tower of
//! consequences on top of it:
//!
//! * [`transversal`] — the factorisation tables, their defining identities,
//!   structural classification, a Cayley-style embedding of abstract tables,
//!   and the reconstruction of `X` from the tables;
//! * [`module`], [`tensor`], [`dual`] — the tensor category of `M`-graded
//!   `G`-modules with its non-trivial associator, unit maps, duals and
//!   exact coherence checks (pentagon, triangle, naturality, snakes);
//! * [`algebra`] — the algebra `H` on `M x G` acting by grading projection
//!   and the group action, associative through the associator;
//! * [`double`] — the double: a second copy of `X` with the product
//!   `(us) o (vt) = vust`, its matched-pair structure, and the derived
//!   right `X`-action on doubly graded objects;
//! * [`braided`] — the braided category of doubly graded modules:
//!   structure-condition validation, braided tensor products, the braiding
//!   and its hexagon identities;
//! * [`hopf`] — the braided Hopf algebra `D` on `Y x X` with product,
//!   coproduct, counit and antipode, all verified exactly.
//!
//! Every check is exact (rational arithmetic, table equality) and
//! exhaustive unless a budget is explicitly supplied.

pub mod algebra;
pub mod braided;
pub mod double;
pub mod dual;
pub mod error;
pub mod group;
pub mod hopf;
pub mod linalg;
pub mod module;
pub mod perm;
pub mod presets;
pub mod report;
pub mod suites;
pub mod tensor;
pub mod transversal;

pub use error::{Error, Result};
