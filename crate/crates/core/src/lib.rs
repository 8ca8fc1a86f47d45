//! Exact construction and verification of win-lose games: gadget games, the
//! 3SAT reduction, the GHR symmetrization with balanced mixtures, and a
//! brute-force Nash equilibrium oracle for small bimatrix games.

pub mod arith;
pub mod enumerate;
pub mod error;
pub mod gadgets;
pub mod ghr;
pub mod game;
pub mod io;
pub mod linalg;
pub mod reduction;
pub mod report;
pub mod sample;
pub mod sat;
pub mod scenario;

pub use arith::{Field, QuadExt, Rational, Scalar};
pub use error::{Error, Result};
pub use game::{Game, MixedProfile};
