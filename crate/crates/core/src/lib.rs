pub mod access_tags;
pub mod attachments;
pub mod codec;
pub mod content;
pub mod cos;
pub mod error;
pub mod extraction;
pub mod structure;
pub mod validate;

pub use error::{Error, Result};
