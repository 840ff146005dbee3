pub mod bits;
pub mod caps;
pub mod complexes;
pub mod error;
pub mod homology;
pub mod kneser;
pub mod morse;
pub mod order_homotopy;
pub mod stable_sets;

pub use caps::Caps;
pub use error::{Error, Result};
