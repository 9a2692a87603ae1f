//! Exact differential Galois computations over `Q(ζ_N)(x)`.

pub mod cocycle;
pub mod cyclo;
pub mod dcsa;
pub mod diffmod;
pub mod error;
pub mod factor;
pub mod field;
pub mod gen;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod modgcd;
pub mod modp;
pub mod parse;
pub mod phihopf;
pub mod partial;
pub mod poly;
pub mod ratfunc;
pub mod torsor;

pub use cyclo::CycloNum;
pub use error::{Error, ParseError, Result};
pub use parse::parse;
pub use poly::Poly;
pub use ratfunc::RatFunc;
