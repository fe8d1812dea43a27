//! Hash chains over the first 1..4 symbols.
//!
//! `head[h]` holds the most recent position whose leading symbols hash to
//! `h`; `prev[slot]` links each position to the previous member of its
//! chain. Chains are never pruned on eviction: the walk stops at the first
//! position outside the window, and a slot is only rewritten when its old
//! occupant is already past the valid span. Walking newest to oldest makes
//! the first maximal match the one with the smallest offset.

use super::{mix_hash, Match, Ring, Structure, WindowConfig};
use crate::tokenizer::Symbol;

const NIL: usize = usize::MAX;

pub(crate) struct HashIndex {
    k: usize,
    bits: u32,
    head: Vec<usize>,
    prev: Vec<usize>,
}

impl HashIndex {
    pub fn new(cfg: &WindowConfig) -> Self {
        let k = match cfg.structure {
            Structure::Ht1 => 1,
            Structure::Ht2 => 2,
            Structure::Ht3 => 3,
            Structure::Ht4 => 4,
            other => unreachable!("not a hash-chain structure: {}", other.name()),
        };
        HashIndex {
            k,
            bits: cfg.table_bits,
            head: vec![NIL; 1usize << cfg.table_bits],
            prev: vec![NIL; cfg.capacity],
        }
    }

    pub fn hashed_symbols(&self) -> usize {
        self.k
    }

    fn bucket_for(&self, ring: &Ring, p: usize) -> usize {
        let mut syms = [Symbol(0); 4];
        for (i, s) in syms[..self.k].iter_mut().enumerate() {
            *s = ring.get(p + i);
        }
        mix_hash(&syms[..self.k], self.bits)
    }

    pub fn insert(&mut self, ring: &Ring, p: usize) {
        let h = self.bucket_for(ring, p);
        self.prev[p & ring.mask] = self.head[h];
        self.head[h] = p;
    }

    pub fn search(
        &self,
        ring: &Ring,
        cfg: &WindowConfig,
        look: &[Symbol],
        span: usize,
    ) -> Option<Match> {
        if look.len() < self.k {
            return None;
        }
        let h = mix_hash(&look[..self.k], self.bits);
        let oldest = ring.pos - span;
        let mut budget = cfg.chain_limit.unwrap_or(usize::MAX);
        let mut cand = self.head[h];
        let mut best = Match { offset: 0, length: 0 };
        while cand != NIL && cand >= oldest && budget > 0 {
            budget -= 1;
            let l = ring.extended_match_len(cand, look);
            if l > best.length {
                best = Match { offset: ring.pos - cand, length: l };
                if l == look.len() {
                    break;
                }
            }
            let next = self.prev[cand & ring.mask];
            if next == NIL || next >= cand {
                break; // chain ends (or a reused slot, only possible past the span)
            }
            cand = next;
        }
        if best.length > 0 {
            Some(best)
        } else {
            None
        }
    }
}
