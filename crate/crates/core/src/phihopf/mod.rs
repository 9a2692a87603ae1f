//! Φ-objects, finite-group δ-Hopf-Galois extensions and descent along them.

pub mod descent;
pub mod group;
pub mod hopf_galois;
pub mod object;

pub use descent::{coinvariants, descent_check, multiplication_map, Coinvariants, DescentCheck};
pub use group::{FinGroup, FinGroupHopf};
pub use hopf_galois::{can_map, check_hopf_galois, hopf_galois_failures, is_hopf_galois, Algebra, FinHopfGalois};
pub use object::{aut_is_constant_check, extend_scalars, is_phi_morphism, PhiObject, PhiType, Signature};
