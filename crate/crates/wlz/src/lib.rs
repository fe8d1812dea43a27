//! Word-based LZ77/LZSS compression.
//!
//! The pipeline splits text into alternating word / non-word tokens, maps each
//! distinct token to a dense integer symbol, finds repeats with a sliding
//! window over the symbol stream, and encodes the resulting parse with
//! pluggable integer codes or adaptive Huffman models.

pub mod codes;
pub mod format;
pub mod matchfinder;
pub mod parser;
pub mod pipeline;
pub mod tokenizer;

pub use pipeline::{compress, decompress, CodecConfig};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("value outside code domain: {0}")]
    Domain(&'static str),
    #[error("truncated bitstream")]
    Truncated,
    #[error("corrupt container: {0}")]
    Corrupt(&'static str),
    #[error("unknown symbol id {0}")]
    UnknownSymbol(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
