//! The COS object layer: values, the file container and its writer.

mod document;
mod object;
pub(crate) mod parser;
mod writer;

pub use document::{parse_document, resolve, Document, ParseIssue};
pub use object::{dict_get, CosValue, Dictionary, ObjectId, Stream};
pub use parser::parse_value;
pub(crate) use writer::write_value;
pub use writer::{format_real, serialize_document, serialize_value};
