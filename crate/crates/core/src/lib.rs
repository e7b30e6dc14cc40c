pub mod body;
pub mod error;
pub mod feet;
pub mod linalg;
pub mod model;
pub mod reference;
pub mod scenario;
pub mod sim;

pub use error::{Error, ParseError, Result};
