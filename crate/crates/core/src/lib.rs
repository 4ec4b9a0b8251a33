//! Representation zeta functions: abscissae of Mellin and Witten zeta
//! functions, and exact orbit, centralizer and twist-zeta counts for GL2 and
//! SL2 over finite truncated local rings.

pub mod centralizers;
pub mod config;
pub mod error;
pub mod gl2zeta;
pub mod mat2;
pub mod mellin;
pub mod orbits;
pub mod ring;
pub mod rootsys;
pub mod verify;

pub use config::{Config, Format};
pub use error::{Error, Result};
pub use mat2::{Flavor, GroupDesc, Mat2};
pub use mellin::LinearFormPoly;
pub use orbits::{OrbitClass, OrbitType};
pub use ring::{Elem, Field, FieldDesc, Ring, RingDesc, RingKind};
pub use rootsys::{DominantWeight, RootSystem};
