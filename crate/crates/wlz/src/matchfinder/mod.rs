//! Sliding-window longest-match search over symbol streams.
//!
//! Ten interchangeable index structures share one window: binary search trees
//! keyed on bounded symbol strings (`Bt`, plus forests dispersed by first
//! symbol `Bta` or by a hash of the first two `Bth`), hash chains over the
//! first 1..4 symbols (`Ht1`..`Ht4`), and Patricia tries with most-recent
//! position tracking (`Pt`, `Pta`, `Pth`).
//!
//! Offsets count backwards in symbols (1 = the previous symbol) and matches
//! may overlap the lookahead: a candidate is compared against the window
//! contents extended by the lookahead itself, which is exactly what a
//! repeating copy reproduces. Tree and trie indexes defer a position until
//! its full `max_match`-symbol key is in the buffer, hash chains until the
//! hashed prefix is; the most recent, not-yet-indexed positions are searched
//! by direct comparison so every retained position stays findable.

mod hash;
mod tree;
mod trie;

use crate::tokenizer::Symbol;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Match {
    /// Backward distance in symbols; 1 addresses the most recent symbol.
    pub offset: usize,
    pub length: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Structure {
    Bt,
    Bta,
    Bth,
    Ht1,
    Ht2,
    Ht3,
    Ht4,
    Pt,
    Pta,
    Pth,
}

impl Structure {
    pub const ALL: [Structure; 10] = [
        Structure::Bt,
        Structure::Bta,
        Structure::Bth,
        Structure::Ht1,
        Structure::Ht2,
        Structure::Ht3,
        Structure::Ht4,
        Structure::Pt,
        Structure::Pta,
        Structure::Pth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Structure::Bt => "bt",
            Structure::Bta => "bta",
            Structure::Bth => "bth",
            Structure::Ht1 => "ht1",
            Structure::Ht2 => "ht2",
            Structure::Ht3 => "ht3",
            Structure::Ht4 => "ht4",
            Structure::Pt => "pt",
            Structure::Pta => "pta",
            Structure::Pth => "pth",
        }
    }

    /// Symbols consumed by the hash that picks a chain or root, if any.
    pub fn hashed_symbols(self) -> usize {
        match self {
            Structure::Ht1 => 1,
            Structure::Ht2 => 2,
            Structure::Ht3 => 3,
            Structure::Ht4 => 4,
            Structure::Bth | Structure::Pth => 2,
            _ => 0,
        }
    }

    /// Matches shorter than this are invisible to the structure, so
    /// configurations must not ask for them.
    pub fn structural_min_match(self) -> usize {
        self.hashed_symbols().max(1)
    }

    pub fn default_table_bits(self) -> u32 {
        match self {
            Structure::Ht1 => 16,
            Structure::Ht2 => 18,
            Structure::Ht3 => 21,
            Structure::Ht4 => 24,
            Structure::Bth | Structure::Pth => 18,
            _ => 0,
        }
    }

    /// Whether the structure allocates a hash table (chains or roots).
    pub fn uses_table(self) -> bool {
        self.default_table_bits() != 0
    }
}

#[derive(Debug, Clone)]
pub struct WindowConfig {
    /// Ring size in symbols; a power of two.
    pub capacity: usize,
    /// Largest offset the window will report; at most `capacity`. Lets a
    /// format reserve one offset value (e.g. a sentinel) without losing
    /// exactness.
    pub max_offset: usize,
    pub max_match: usize,
    pub min_match: usize,
    pub structure: Structure,
    pub table_bits: u32,
    /// Hash-chain candidate budget per query; `None` removes the cap.
    pub chain_limit: Option<usize>,
}

pub const DEFAULT_CHAIN_LIMIT: usize = 256;

impl WindowConfig {
    pub fn new(structure: Structure, capacity: usize, max_match: usize, min_match: usize) -> Self {
        WindowConfig {
            capacity,
            max_offset: capacity,
            max_match,
            min_match,
            structure,
            table_bits: structure.default_table_bits(),
            chain_limit: Some(DEFAULT_CHAIN_LIMIT),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !self.capacity.is_power_of_two() {
            return fail(format!("window capacity {} is not a power of two", self.capacity));
        }
        if self.max_match < 1 || self.max_match > 65535 {
            return fail(format!("max_match {} outside [1, 65535]", self.max_match));
        }
        if self.min_match < 1 || self.min_match > self.max_match {
            return fail(format!(
                "min_match {} outside [1, max_match {}]",
                self.min_match, self.max_match
            ));
        }
        if self.capacity < self.max_match {
            return fail(format!(
                "window capacity {} below max_match {}",
                self.capacity, self.max_match
            ));
        }
        if self.max_offset < self.max_match || self.max_offset > self.capacity {
            return fail(format!(
                "max_offset {} outside [max_match {}, capacity {}]",
                self.max_offset, self.max_match, self.capacity
            ));
        }
        let bound = self.structure.structural_min_match();
        if self.min_match < bound {
            return fail(format!(
                "{} hashes {} symbols and cannot find matches shorter than that; min_match {} is below it",
                self.structure.name(),
                bound,
                self.min_match
            ));
        }
        if self.structure.uses_table() && !(1..=30).contains(&self.table_bits) {
            return fail(format!("table_bits {} outside [1, 30]", self.table_bits));
        }
        Ok(())
    }
}

/// Deterministic multiplicative mix of a few symbol ids.
fn mix_hash(syms: &[Symbol], bits: u32) -> usize {
    let mut h: u64 = 0;
    for s in syms {
        h = (h ^ s.0 as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    }
    (h >> (64 - bits)) as usize
}

/// Last `capacity` symbols with absolute positions.
struct Ring {
    buf: Vec<Symbol>,
    mask: usize,
    /// Total symbols inserted so far; also the next position.
    pos: usize,
}

impl Ring {
    fn new(capacity: usize) -> Self {
        Ring { buf: Vec::new(), mask: capacity - 1, pos: 0 }
    }

    #[inline]
    fn get(&self, p: usize) -> Symbol {
        debug_assert!(p < self.pos && self.pos - p <= self.mask + 1);
        self.buf[p & self.mask]
    }

    fn push(&mut self, s: Symbol) {
        let slot = self.pos & self.mask;
        if slot == self.buf.len() {
            self.buf.push(s);
        } else {
            self.buf[slot] = s;
        }
        self.pos += 1;
    }

    /// Length of the common prefix of `lookahead` and the stream starting at
    /// `start`, where positions at or past `pos` resolve to the lookahead
    /// itself (the overlapped-copy rule).
    fn extended_match_len(&self, start: usize, lookahead: &[Symbol]) -> usize {
        let mut l = 0;
        while l < lookahead.len() {
            let x = start + l;
            let s = if x < self.pos { self.get(x) } else { lookahead[x - self.pos] };
            if s != lookahead[l] {
                break;
            }
            l += 1;
        }
        l
    }
}

enum Index {
    Tree(tree::TreeIndex),
    Hash(hash::HashIndex),
    Trie(trie::TrieIndex),
}

pub struct SlidingWindow {
    cfg: WindowConfig,
    ring: Ring,
    index: Index,
}

impl SlidingWindow {
    pub fn new(cfg: WindowConfig) -> Result<Self> {
        cfg.validate()?;
        let capacity = cfg.capacity;
        let index = match cfg.structure {
            Structure::Bt | Structure::Bta | Structure::Bth => {
                Index::Tree(tree::TreeIndex::new(&cfg))
            }
            Structure::Ht1 | Structure::Ht2 | Structure::Ht3 | Structure::Ht4 => {
                Index::Hash(hash::HashIndex::new(&cfg))
            }
            Structure::Pt | Structure::Pta | Structure::Pth => {
                Index::Trie(trie::TrieIndex::new(&cfg))
            }
        };
        Ok(SlidingWindow { cfg, ring: Ring::new(capacity), index })
    }

    pub fn config(&self) -> &WindowConfig {
        &self.cfg
    }

    /// Symbols inserted so far.
    pub fn len(&self) -> usize {
        self.ring.pos
    }

    pub fn is_empty(&self) -> bool {
        self.ring.pos == 0
    }

    /// Positions currently reachable as match sources.
    pub fn occupancy(&self) -> usize {
        self.ring.pos.min(self.cfg.max_offset)
    }

    /// Symbols a tree or trie index waits for before a position's key is
    /// complete; hash chains only wait for the hashed prefix.
    fn deferral(&self) -> usize {
        match &self.index {
            Index::Hash(h) => h.hashed_symbols(),
            _ => self.cfg.max_match,
        }
    }

    pub fn insert(&mut self, s: Symbol) {
        let q = self.ring.pos;
        if q >= self.cfg.max_offset {
            let evict = q - self.cfg.max_offset;
            match &mut self.index {
                Index::Tree(t) => t.evict(&self.ring, &self.cfg, evict),
                Index::Hash(_) => {} // chains prune lazily during the walk
                Index::Trie(t) => t.evict(&self.ring, &self.cfg, evict),
            }
        }
        self.ring.push(s);
        let defer = self.deferral();
        if self.ring.pos >= defer {
            let p = self.ring.pos - defer;
            match &mut self.index {
                Index::Tree(t) => t.insert(&self.ring, &self.cfg, p),
                Index::Hash(h) => h.insert(&self.ring, p),
                Index::Trie(t) => t.insert(&self.ring, &self.cfg, p),
            }
        }
    }

    /// Longest match for `lookahead` against the current window, or `None`
    /// when nothing reaches `min_match`. Hash and trie structures return the
    /// smallest offset among maximal-length matches; trees leave the offset
    /// unspecified among ties.
    pub fn find_longest(&self, lookahead: &[Symbol]) -> Option<Match> {
        let look = &lookahead[..lookahead.len().min(self.cfg.max_match)];
        if look.is_empty() || self.ring.pos == 0 {
            return None;
        }
        let span = self.occupancy();
        let pos = self.ring.pos;
        let mut best = Match { offset: 0, length: 0 };

        // Most recent positions are not indexed yet; compare them directly,
        // nearest first so ties keep the smallest offset.
        let tail = span.min(self.deferral() - 1);
        for off in 1..=tail {
            let l = self.ring.extended_match_len(pos - off, look);
            if l > best.length {
                best = Match { offset: off, length: l };
                if l == look.len() {
                    break;
                }
            }
        }

        if best.length < look.len() {
            let indexed = match &self.index {
                Index::Tree(t) => t.search(&self.ring, &self.cfg, look, span),
                Index::Hash(h) => h.search(&self.ring, &self.cfg, look, span),
                Index::Trie(t) => t.search(&self.ring, look, span),
            };
            if let Some(m) = indexed {
                if m.length > best.length {
                    best = m;
                }
            }
        }

        debug_assert!(best.offset <= span);
        if best.length >= self.cfg.min_match {
            Some(best)
        } else {
            None
        }
    }
}

/// Reference longest-match scan: maximal length, then minimal offset, over
/// the plain window slice (oldest symbol first). The overlap rule matches
/// `SlidingWindow`: positions past the window resolve to the lookahead.
pub fn brute_force_longest(
    buffer: &[Symbol],
    lookahead: &[Symbol],
    min_match: usize,
    max_match: usize,
) -> Option<Match> {
    let look = &lookahead[..lookahead.len().min(max_match)];
    if look.is_empty() {
        return None;
    }
    let n = buffer.len();
    let mut best = Match { offset: 0, length: 0 };
    for off in 1..=n {
        let j = n - off;
        let mut l = 0;
        while l < look.len() {
            let s = if j + l < n { buffer[j + l] } else { look[j + l - n] };
            if s != look[l] {
                break;
            }
            l += 1;
        }
        if l > best.length {
            best = Match { offset: off, length: l };
            if l == look.len() {
                break;
            }
        }
    }
    if best.length >= min_match {
        Some(best)
    } else {
        None
    }
}
