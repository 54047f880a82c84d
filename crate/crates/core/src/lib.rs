//! Flippable tilings of constant-curvature surfaces and the convex polyhedral
//! surfaces in S³ and AdS₃ they correspond to.

pub mod error;
pub mod forms;
pub mod fuchsian;
pub mod polyhedra;
pub mod space;
pub mod testing;
pub mod tilings;
pub mod trig;
pub mod tol;
pub mod util;

pub use error::{Error, Result};
pub use forms::Vec4;
