//! Syntactic quality: bracketed parse trees and normalized tree edit distance.

mod ted;
mod tree;

pub use ted::{
    syntactic_distance, syntactic_distance_prepared, syntax_skeleton, tree_edit_distance, EditCost,
    InvalidCost, PreparedTree, TedScratch, SYNTAX_LEVEL,
};
pub use tree::{parse_bracketed, InvalidLabel, ParseTree, TreeParseError};

/// Reads a tree sidecar line. Blank lines mean "no parse available".
pub fn parse_sidecar_line(line: &str) -> Result<Option<ParseTree>, TreeParseError> {
    if line.trim().is_empty() {
        Ok(None)
    } else {
        parse_bracketed(line).map(Some)
    }
}
