//! Text input, canonical output and JSON reports.

pub mod parse;
pub mod print;
pub mod report;

pub use parse::{parse_constant, parse_document, parse_extension, parse_matrix, parse_point, InputDocument, ParseError, ParseErrorKind};
pub use print::{document_to_string, matrix_to_string, ratfun_to_string};
