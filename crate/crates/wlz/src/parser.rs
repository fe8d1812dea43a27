//! Parsing strategies: turning a symbol stream into literals and copies.
//!
//! Four strategies share one item vocabulary. `parse_lz77` emits strict
//! (copy, literal) pairs where an empty copy is the offset-0/length-0
//! sentinel and a match that would swallow the last symbol is shortened so
//! the trailing literal survives. The three LZSS strategies emit free-form
//! item sequences: `greedy` always takes the longest match, `lazy` defers a
//! match by one symbol when the very next position matches strictly longer
//! (deferrals may cascade), and `shortest` picks the item sequence with the
//! globally minimal bit cost under a caller-supplied cost model.
//!
//! `replay` reverses any item sequence and is the correctness oracle shared
//! by tests and the decoder.

use crate::matchfinder::{Match, SlidingWindow, WindowConfig};
use crate::tokenizer::Symbol;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseItem {
    Literal(Symbol),
    Copy { offset: usize, length: usize },
}

/// Parsing strategy selector, also stored in the container header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Lz77,
    Lzss,
    LzssLazy,
    LzssShortest,
}

impl Variant {
    pub const ALL: [Variant; 4] =
        [Variant::Lz77, Variant::Lzss, Variant::LzssLazy, Variant::LzssShortest];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Lz77 => "lz77",
            Variant::Lzss => "lzss",
            Variant::LzssLazy => "lzss-lazy",
            Variant::LzssShortest => "lzss-shortest",
        }
    }

    /// Shortest match worth encoding: LZ77 copy slots are always paired with
    /// a literal so even length 1 pays off; LZSS flags make 1 a loss.
    pub fn default_min_match(self) -> usize {
        match self {
            Variant::Lz77 => 1,
            _ => 2,
        }
    }

    pub fn to_byte(self) -> u8 {
        match self {
            Variant::Lz77 => 0,
            Variant::Lzss => 1,
            Variant::LzssLazy => 2,
            Variant::LzssShortest => 3,
        }
    }

    pub fn from_byte(b: u8) -> Result<Variant> {
        Ok(match b {
            0 => Variant::Lz77,
            1 => Variant::Lzss,
            2 => Variant::LzssLazy,
            3 => Variant::LzssShortest,
            _ => return Err(Error::Corrupt("unknown parse variant")),
        })
    }
}

/// Bit prices for parse decisions. Costs must not depend on parser state so
/// that a left-to-right shortest path is exact.
pub trait CostModel {
    /// Cost of the literal/copy selector, if the format has one.
    fn flag_bits(&self) -> u64;
    fn literal_bits(&self, sym: Symbol) -> u64;
    fn copy_bits(&self, m: Match) -> u64;
}

/// Fixed-width pricing: every literal, offset and length costs its full
/// field width. Offset-independent, which `parse_lzss_shortest` exploits.
#[derive(Debug, Clone, Copy)]
pub struct DirectCost {
    pub offset_width: u32,
    pub length_width: u32,
    pub literal_width: u32,
}

impl CostModel for DirectCost {
    fn flag_bits(&self) -> u64 {
        1
    }

    fn literal_bits(&self, _sym: Symbol) -> u64 {
        self.literal_width as u64
    }

    fn copy_bits(&self, _m: Match) -> u64 {
        (self.offset_width + self.length_width) as u64
    }
}

/// Strict (copy, literal) pairs; the copy may be the 0/0 sentinel.
pub fn parse_lz77(symbols: &[Symbol], cfg: &WindowConfig) -> Result<Vec<ParseItem>> {
    let mut w = SlidingWindow::new(cfg.clone())?;
    let mut items = Vec::new();
    let n = symbols.len();
    let mut i = 0;
    while i < n {
        let mut m = w.find_longest(&symbols[i..]).unwrap_or(Match { offset: 0, length: 0 });
        if m.length > 0 && i + m.length == n {
            // keep one symbol back so the pair keeps its literal
            m.length -= 1;
            if m.length < cfg.min_match {
                m = Match { offset: 0, length: 0 };
            }
        }
        items.push(ParseItem::Copy { offset: m.offset, length: m.length });
        for j in 0..m.length {
            w.insert(symbols[i + j]);
        }
        i += m.length;
        items.push(ParseItem::Literal(symbols[i]));
        w.insert(symbols[i]);
        i += 1;
    }
    Ok(items)
}

pub fn parse_lzss_greedy(symbols: &[Symbol], cfg: &WindowConfig) -> Result<Vec<ParseItem>> {
    let mut w = SlidingWindow::new(cfg.clone())?;
    let mut items = Vec::new();
    let n = symbols.len();
    let mut i = 0;
    while i < n {
        match w.find_longest(&symbols[i..]) {
            Some(m) => {
                items.push(ParseItem::Copy { offset: m.offset, length: m.length });
                for j in 0..m.length {
                    w.insert(symbols[i + j]);
                }
                i += m.length;
            }
            None => {
                items.push(ParseItem::Literal(symbols[i]));
                w.insert(symbols[i]);
                i += 1;
            }
        }
    }
    Ok(items)
}

pub fn parse_lzss_lazy(symbols: &[Symbol], cfg: &WindowConfig) -> Result<Vec<ParseItem>> {
    let mut w = SlidingWindow::new(cfg.clone())?;
    let mut items = Vec::new();
    let n = symbols.len();
    let mut i = 0;
    while i < n {
        let Some(m0) = w.find_longest(&symbols[i..]) else {
            items.push(ParseItem::Literal(symbols[i]));
            w.insert(symbols[i]);
            i += 1;
            continue;
        };
        // a maximal match cannot be beaten, and the last position has no peek
        if m0.length < cfg.max_match && i + 1 < n {
            w.insert(symbols[i]);
            let next_len = w.find_longest(&symbols[i + 1..]).map_or(0, |m| m.length);
            if next_len > m0.length {
                // defer: emit this symbol alone, reconsider from i+1
                items.push(ParseItem::Literal(symbols[i]));
                i += 1;
                continue;
            }
            items.push(ParseItem::Copy { offset: m0.offset, length: m0.length });
            for j in 1..m0.length {
                w.insert(symbols[i + j]);
            }
            i += m0.length;
        } else {
            items.push(ParseItem::Copy { offset: m0.offset, length: m0.length });
            for j in 0..m0.length {
                w.insert(symbols[i + j]);
            }
            i += m0.length;
        }
    }
    Ok(items)
}

/// Globally cost-minimal parse under `cost`, via a left-to-right shortest
/// path over the item graph: one literal edge per position plus one copy
/// edge per length from `min_match` up to the longest match there. All copy
/// edges at a position reuse the longest match's offset — any prefix of a
/// match is a match at the same offset — which is optimal whenever the cost
/// model prices all representable offsets alike, as fixed-width models do.
pub fn parse_lzss_shortest(
    symbols: &[Symbol],
    cfg: &WindowConfig,
    cost: &impl CostModel,
) -> Result<Vec<ParseItem>> {
    let n = symbols.len();
    let mut w = SlidingWindow::new(cfg.clone())?;
    let mut dist = vec![u64::MAX; n + 1];
    let mut from: Vec<(usize, ParseItem)> = vec![(usize::MAX, ParseItem::Copy { offset: 0, length: 0 }); n + 1];
    dist[0] = 0;
    for i in 0..n {
        let here = dist[i];
        debug_assert_ne!(here, u64::MAX, "literal edges keep every position reachable");
        let lit = here + cost.flag_bits() + cost.literal_bits(symbols[i]);
        if lit < dist[i + 1] {
            dist[i + 1] = lit;
            from[i + 1] = (i, ParseItem::Literal(symbols[i]));
        }
        if let Some(m) = w.find_longest(&symbols[i..]) {
            for len in cfg.min_match..=m.length {
                let c = here + cost.flag_bits() + cost.copy_bits(Match { offset: m.offset, length: len });
                if c < dist[i + len] {
                    dist[i + len] = c;
                    from[i + len] = (i, ParseItem::Copy { offset: m.offset, length: len });
                }
            }
        }
        w.insert(symbols[i]);
    }
    let mut items = Vec::new();
    let mut j = n;
    while j > 0 {
        let (i, item) = from[j];
        items.push(item);
        j = i;
    }
    items.reverse();
    Ok(items)
}

/// Expand items back into symbols. Copies may overlap their own output;
/// a length-0 copy is the LZ77 "no match" sentinel and expands to nothing.
pub fn replay(items: &[ParseItem]) -> Result<Vec<Symbol>> {
    let mut out: Vec<Symbol> = Vec::new();
    for item in items {
        match *item {
            ParseItem::Literal(s) => out.push(s),
            ParseItem::Copy { length: 0, .. } => {}
            ParseItem::Copy { offset, length } => {
                if offset == 0 || offset > out.len() {
                    return Err(Error::Corrupt("copy reaches before the start of the stream"));
                }
                for _ in 0..length {
                    out.push(out[out.len() - offset]);
                }
            }
        }
    }
    Ok(out)
}

/// Total bit cost of an item sequence under `cost`; for comparing parses.
pub fn parse_cost(items: &[ParseItem], cost: &impl CostModel) -> u64 {
    items
        .iter()
        .map(|item| {
            cost.flag_bits()
                + match *item {
                    ParseItem::Literal(s) => cost.literal_bits(s),
                    ParseItem::Copy { offset, length } => {
                        cost.copy_bits(Match { offset, length })
                    }
                }
        })
        .sum()
}
