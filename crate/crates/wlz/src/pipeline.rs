//! End-to-end codec: bytes -> tokens -> parse items -> container, and back.
//!
//! `CodecConfig` is the single user-facing knob set. Derived values follow
//! the structure and variant: the effective minimum match length is the
//! larger of the variant's default and what the structure can find, LZ77
//! gives up one offset value of window span so the 0/0 sentinel has a
//! mapped value of its own, and the block-code base defaults to window/16
//! for offsets (they cluster near the window size on text) or 4 otherwise.

use crate::codes::{bits_for_count, CoderKind, IntCoder};
use crate::format::{self, FormatParams};
use crate::matchfinder::{Structure, WindowConfig, DEFAULT_CHAIN_LIMIT};
use crate::parser::{
    parse_lz77, parse_lzss_greedy, parse_lzss_lazy, parse_lzss_shortest, DirectCost, Variant,
};
use crate::tokenizer::{to_symbols, Symbol};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodecConfig {
    pub variant: Variant,
    pub structure: Structure,
    /// Window capacity in symbols, as a power of two.
    pub window_log2: u32,
    pub max_match: usize,
    /// `None` derives max(variant default, structure minimum).
    pub min_match: Option<usize>,
    pub offset_coder: CoderKind,
    pub length_coder: CoderKind,
    pub literal_coder: CoderKind,
    /// log2 of the block-code base; `None` derives from the window.
    pub bblock_base_log2: Option<u32>,
    /// `None` uses the structure's default table size.
    pub table_bits: Option<u32>,
    /// Hash-chain candidate budget; `None` removes the cap.
    pub chain_limit: Option<usize>,
}

impl Default for CodecConfig {
    /// The best-ratio preset: lazy parsing over a hashed Patricia forest,
    /// block-coded offsets, adaptive Huffman lengths and literals.
    fn default() -> Self {
        CodecConfig {
            variant: Variant::LzssLazy,
            structure: Structure::Pth,
            window_log2: 20,
            max_match: 16,
            min_match: None,
            offset_coder: CoderKind::BBlock,
            length_coder: CoderKind::AdaptiveHuffman,
            literal_coder: CoderKind::AdaptiveHuffman,
            bblock_base_log2: None,
            table_bits: None,
            chain_limit: Some(DEFAULT_CHAIN_LIMIT),
        }
    }
}

impl CodecConfig {
    pub fn preset_best() -> Self {
        Self::default()
    }

    /// Same parse, every channel fixed-width; the baseline the adaptive
    /// coders are measured against.
    pub fn preset_direct(variant: Variant) -> Self {
        CodecConfig {
            variant,
            offset_coder: CoderKind::Direct,
            length_coder: CoderKind::Direct,
            literal_coder: CoderKind::Direct,
            ..Self::default()
        }
    }

    pub fn effective_min_match(&self) -> usize {
        self.min_match.unwrap_or_else(|| {
            self.variant
                .default_min_match()
                .max(self.structure.structural_min_match())
        })
    }

    pub fn effective_bblock_base_log2(&self) -> u32 {
        self.bblock_base_log2.unwrap_or(if self.offset_coder == CoderKind::BBlock {
            self.window_log2.saturating_sub(4).max(1)
        } else {
            2
        })
    }

    pub fn window_config(&self) -> WindowConfig {
        let capacity = 1usize << self.window_log2;
        // triple-based copies reserve the mapped offset 1 for the 0/0
        // sentinel, so their real offsets give up one value of span
        let max_offset = if self.variant == Variant::Lz77 { capacity - 1 } else { capacity };
        WindowConfig {
            capacity,
            max_offset,
            max_match: self.max_match,
            min_match: self.effective_min_match(),
            structure: self.structure,
            table_bits: self.table_bits.unwrap_or_else(|| self.structure.default_table_bits()),
            chain_limit: self.chain_limit,
        }
    }

    pub fn format_params(&self) -> FormatParams {
        FormatParams {
            variant: self.variant,
            window_log2: self.window_log2,
            max_match: self.max_match,
            min_match: self.effective_min_match(),
            offset_coder: self.offset_coder,
            length_coder: self.length_coder,
            literal_coder: self.literal_coder,
            bblock_base_log2: self.effective_bblock_base_log2(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.window_config().validate()?;
        self.format_params().validate()
    }
}

/// Fixed-width bit prices for the globally optimal parse: offsets cost the
/// full window field, lengths their direct field, and a literal costs one
/// id field plus the average spelling overhead observed in this input.
fn shortest_path_cost(cfg: &CodecConfig, symbols: &[Symbol], vocab_len: usize, spelling_bits: u64) -> DirectCost {
    let min = cfg.effective_min_match();
    let amortized =
        if symbols.is_empty() { 0 } else { spelling_bits.div_ceil(symbols.len() as u64) };
    // An adaptive literal code approaches the stream's zeroth-order entropy,
    // which on skewed streams is far below the index width; charging the
    // measured entropy keeps copy-versus-literal trade-offs honest.
    let per_literal = if cfg.literal_coder == CoderKind::AdaptiveHuffman {
        let mut freq = vec![0u64; vocab_len];
        for s in symbols {
            freq[s.0 as usize] += 1;
        }
        let n = symbols.len() as f64;
        let entropy: f64 = freq
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| (c as f64 / n) * (n / c as f64).log2())
            .sum();
        (entropy.ceil() as u32).max(1)
    } else {
        bits_for_count(vocab_len as u64 + 1)
    };
    DirectCost {
        offset_width: cfg.window_log2,
        length_width: bits_for_count((cfg.max_match - min + 1) as u64),
        literal_width: per_literal + amortized as u32,
    }
}

pub fn compress(input: &[u8], cfg: &CodecConfig) -> Result<Vec<u8>> {
    cfg.validate()?;
    let (symbols, vocab) = to_symbols(input);
    let wcfg = cfg.window_config();
    let items = match cfg.variant {
        Variant::Lz77 => parse_lz77(&symbols, &wcfg)?,
        Variant::Lzss => parse_lzss_greedy(&symbols, &wcfg)?,
        Variant::LzssLazy => parse_lzss_lazy(&symbols, &wcfg)?,
        Variant::LzssShortest => {
            let mut spelling_bits = 0u64;
            for id in 0..vocab.len() {
                let token = vocab.resolve(Symbol(id as u32))?;
                spelling_bits += IntCoder::EliasGamma.cost_bits(token.bytes.len() as u64)?;
                spelling_bits += 8 * token.bytes.len() as u64;
            }
            let cost = shortest_path_cost(cfg, &symbols, vocab.len(), spelling_bits);
            parse_lzss_shortest(&symbols, &wcfg, &cost)?
        }
    };
    format::encode(&cfg.format_params(), &items, &vocab, input.len() as u64)
}

pub fn decompress(container: &[u8]) -> Result<Vec<u8>> {
    format::decode(container)
}
