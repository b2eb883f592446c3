//! Class-level geometry of noncommutative quadratic transforms.
//!
//! Points of an elliptic curve are modelled by a finite abelian group ([`group`]), line
//! bundles by `(degree, sum)` classes ([`picard`]), and the geometric data of quadratic and
//! cubic Sklyanin algebras by helices of such classes ([`helix`]). On top of that sit the
//! blow-up, blow-down and Cremona transforms with their inverses ([`transforms`]), the
//! Hilbert-function grid ([`grid`]) and the I-basis counting identities ([`ibasis`]).

pub mod grid;
pub mod group;
pub mod helix;
pub mod ibasis;
pub mod instances;
pub mod picard;
pub mod transforms;

pub use group::{Group, GroupDescriptor, GroupElement, GroupError};
pub use helix::{CubicHelixSpec, Helix, HelixData, HelixKind, HelixWindow, QuadraticHelixSpec};
pub use picard::{DivisorClass, Translation};
pub use transforms::{BlowDownSpec, BlowUpSpec, CremonaSpec, RoundTripReport, RoundTripStart};
