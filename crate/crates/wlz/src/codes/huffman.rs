//! Adaptive Huffman coding with an escape leaf for unbounded alphabets.
//!
//! The tree lives in a contiguous arena ordered by non-increasing weight:
//! the root sits at index 0 and sibling pairs occupy fixed adjacent slots
//! (2k+1, 2k+2), so the arena order doubles as the numbering required by the
//! sibling property. Updates swap node *contents* between equal-weight slots
//! (the block leader is found by binary search) and then increment, which
//! keeps the ordering sorted at every step. The escape leaf carries a
//! permanent floor weight of 1; that guarantees a parent always outweighs its
//! children strictly, so a block leader can never be an ancestor of the node
//! being promoted and the swap needs no special cases.
//!
//! When the root weight reaches 2^16 every leaf weight is halved (rounding
//! up) and the tree is rebuilt with a two-queue Huffman construction, laid
//! out in pair-creation order so the sibling ordering holds by construction.
//! Encoder and decoder run the identical deterministic procedure, keeping
//! their trees in lockstep.

use std::collections::HashMap;

use super::bits::{BitReader, BitWriter};
use crate::Result;

const HALVE_AT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Internal { left: usize, right: usize },
    Leaf(u32),
    Escape,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptiveHuffman {
    weight: Vec<u64>,
    parent: Vec<usize>,
    node: Vec<Node>,
    leaf_pos: HashMap<u32, usize>,
    nyt: usize,
}

/// Result of reading one code from the stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoded {
    Known(u32),
    /// The escape leaf: an out-of-band payload for a first occurrence
    /// follows. The caller must `install` the new symbol afterwards.
    Escape,
}

const NIL: usize = usize::MAX;

impl Default for AdaptiveHuffman {
    fn default() -> Self {
        Self::new()
    }
}

impl AdaptiveHuffman {
    pub fn new() -> Self {
        AdaptiveHuffman {
            weight: vec![1],
            parent: vec![NIL],
            node: vec![Node::Escape],
            leaf_pos: HashMap::new(),
            nyt: 0,
        }
    }

    pub fn contains(&self, sym: u32) -> bool {
        self.leaf_pos.contains_key(&sym)
    }

    pub fn len(&self) -> usize {
        self.leaf_pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaf_pos.is_empty()
    }

    /// Current code length of `sym` in bits, if transmitted before.
    pub fn code_len(&self, sym: u32) -> Option<usize> {
        self.leaf_pos.get(&sym).map(|&p| self.depth(p))
    }

    fn depth(&self, mut p: usize) -> usize {
        let mut d = 0;
        while self.parent[p] != NIL {
            d += 1;
            p = self.parent[p];
        }
        d
    }

    fn emit_path(&self, w: &mut BitWriter, mut p: usize) {
        let mut bits = Vec::with_capacity(32);
        while self.parent[p] != NIL {
            let q = self.parent[p];
            match self.node[q] {
                Node::Internal { right, .. } => bits.push(right == p),
                _ => unreachable!("parent is always internal"),
            }
            p = q;
        }
        for bit in bits.into_iter().rev() {
            w.write_bit(bit);
        }
    }

    /// Emits the code for `sym` (or the escape code on first sight, in which
    /// case the caller appends the payload) and updates the model. Returns
    /// true when escape was emitted.
    pub fn encode(&mut self, w: &mut BitWriter, sym: u32) -> bool {
        match self.leaf_pos.get(&sym) {
            Some(&p) => {
                self.emit_path(w, p);
                self.bump(p);
                false
            }
            None => {
                self.emit_path(w, self.nyt);
                self.install(sym);
                true
            }
        }
    }

    /// Walks one code off the stream. `Known` symbols update the model here;
    /// after `Escape` the caller decodes the payload and calls `install`.
    pub fn decode(&mut self, r: &mut BitReader) -> Result<Decoded> {
        let mut p = 0;
        loop {
            match self.node[p] {
                Node::Internal { left, right } => {
                    p = if r.read_bit()? { right } else { left };
                }
                Node::Leaf(sym) => {
                    self.bump(p);
                    return Ok(Decoded::Known(sym));
                }
                Node::Escape => return Ok(Decoded::Escape),
            }
        }
    }

    /// Adds a first-seen symbol: the escape leaf spawns an internal node
    /// whose children are the escape leaf and the new symbol's leaf. Must be
    /// called in the same sequence on both sides.
    pub fn install(&mut self, sym: u32) {
        debug_assert!(!self.contains(sym));
        let e = self.nyt;
        let n = self.node.len();
        // The escape floor weight moves into the relocated escape leaf, so no
        // ancestor weight changes during the structural split.
        self.node[e] = Node::Internal {
            left: n,
            right: n + 1,
        };
        self.weight.extend([1, 0]);
        self.parent.extend([e, e]);
        self.node.extend([Node::Escape, Node::Leaf(sym)]);
        self.nyt = n;
        self.leaf_pos.insert(sym, n + 1);
        self.bump(n + 1);
    }

    /// First index of the equal-weight block containing `p`. Only the prefix
    /// up to `p` is consulted; it is sorted non-increasing at this point.
    fn block_leader(&self, p: usize) -> usize {
        let w = self.weight[p];
        self.weight[..=p].partition_point(|&x| x > w)
    }

    fn swap_contents(&mut self, a: usize, b: usize) {
        debug_assert_eq!(self.weight[a], self.weight[b]);
        self.node.swap(a, b);
        for &pos in &[a, b] {
            match self.node[pos] {
                Node::Internal { left, right } => {
                    self.parent[left] = pos;
                    self.parent[right] = pos;
                }
                Node::Leaf(sym) => {
                    self.leaf_pos.insert(sym, pos);
                }
                Node::Escape => self.nyt = pos,
            }
        }
    }

    /// Increment `p`'s weight maintaining the sibling property: promote each
    /// node on the leaf-to-root path to its block leader before bumping it.
    fn bump(&mut self, mut p: usize) {
        loop {
            let leader = self.block_leader(p);
            if leader != p && leader != self.parent[p] {
                self.swap_contents(leader, p);
                p = leader;
            }
            self.weight[p] += 1;
            if p == 0 {
                break;
            }
            p = self.parent[p];
        }
        if self.weight[0] >= HALVE_AT {
            self.rebuild();
        }
    }

    /// Halve all leaf counts (rounding up, escape keeps its floor of 1) and
    /// rebuild an optimal tree with the two-queue construction. Pairs are
    /// created in non-decreasing weight order, so laying them out from the
    /// back of the arena restores the sorted sibling ordering.
    fn rebuild(&mut self) {
        #[derive(Clone)]
        struct Tmp {
            weight: u64,
            node: Node,
            children: Option<(usize, usize)>, // indexes into `built`
        }
        // Leaves in arena order are already sorted by non-increasing weight,
        // and halving preserves that order; reverse for an ascending queue.
        let mut leaves: Vec<Tmp> = Vec::with_capacity(self.leaf_pos.len() + 1);
        for (pos, n) in self.node.iter().enumerate() {
            match n {
                Node::Leaf(_) | Node::Escape => leaves.push(Tmp {
                    weight: (self.weight[pos] + 1) / 2,
                    node: n.clone(),
                    children: None,
                }),
                Node::Internal { .. } => {}
            }
        }
        leaves.reverse();

        let mut built: Vec<Tmp> = Vec::with_capacity(leaves.len() * 2);
        let mut q1 = std::collections::VecDeque::from(leaves);
        let mut q2: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let take = |built: &mut Vec<Tmp>,
                    q1: &mut std::collections::VecDeque<Tmp>,
                    q2: &mut std::collections::VecDeque<usize>|
         -> usize {
            // Prefer the leaf queue on ties for determinism.
            match (q1.front(), q2.front()) {
                (Some(l), Some(&i)) if built[i].weight < l.weight => q2.pop_front().unwrap(),
                (Some(_), _) => {
                    let t = q1.pop_front().unwrap();
                    built.push(t);
                    built.len() - 1
                }
                (None, Some(_)) => q2.pop_front().unwrap(),
                (None, None) => unreachable!(),
            }
        };
        while q1.len() + q2.len() >= 2 {
            let a = take(&mut built, &mut q1, &mut q2);
            let b = take(&mut built, &mut q1, &mut q2);
            let sum = built[a].weight + built[b].weight;
            built.push(Tmp {
                weight: sum,
                node: Node::Internal { left: 0, right: 0 }, // links fixed below
                children: Some((a, b)),
            });
            let parent = built.len() - 1;
            pairs.push((a, b));
            q2.push_back(parent);
        }
        let root = take(&mut built, &mut q1, &mut q2);

        // Pair i (created earliest = lightest) lands at slots (2k+1, 2k+2)
        // counted from the back; the root takes slot 0. Heavier pair member
        // first keeps the arena non-increasing.
        let total = built.len();
        let mut slot_of = vec![NIL; total];
        slot_of[root] = 0;
        for (i, &(a, b)) in pairs.iter().enumerate() {
            let hi = total - 1 - 2 * i; // even slot of this pair
            let (first, second) = if built[a].weight >= built[b].weight {
                (a, b)
            } else {
                (b, a)
            };
            slot_of[first] = hi - 1;
            slot_of[second] = hi;
        }

        self.weight = vec![0; total];
        self.parent = vec![NIL; total];
        self.node = vec![Node::Escape; total];
        for (i, tmp) in built.iter().enumerate() {
            let s = slot_of[i];
            self.weight[s] = tmp.weight;
            self.node[s] = match tmp.children {
                Some((a, b)) => {
                    self.parent[slot_of[a]] = s;
                    self.parent[slot_of[b]] = s;
                    Node::Internal {
                        left: slot_of[a],
                        right: slot_of[b],
                    }
                }
                None => tmp.node.clone(),
            };
            match &self.node[s] {
                Node::Leaf(sym) => {
                    self.leaf_pos.insert(*sym, s);
                }
                Node::Escape => self.nyt = s,
                Node::Internal { .. } => {}
            }
        }
    }

    /// Test-only structural audit of every invariant the updates rely on.
    #[cfg(test)]
    fn check_invariants(&self) {
        let n = self.node.len();
        assert_eq!(self.weight.len(), n);
        assert_eq!(self.parent.len(), n);
        assert_eq!(self.parent[0], NIL);
        for i in 1..n {
            assert!(
                self.weight[i - 1] >= self.weight[i],
                "weights not sorted at {i}"
            );
        }
        let mut escapes = 0;
        for i in 0..n {
            match self.node[i] {
                Node::Internal { left, right } => {
                    assert!(left > i && right > i, "parent after child at {i}");
                    assert_eq!(self.parent[left], i);
                    assert_eq!(self.parent[right], i);
                    assert_eq!(
                        self.weight[i],
                        self.weight[left] + self.weight[right],
                        "weight mismatch at {i}"
                    );
                    // sibling pairs sit in adjacent slots
                    assert_eq!(left.max(right), left.min(right) + 1);
                }
                Node::Leaf(sym) => {
                    assert_eq!(self.leaf_pos[&sym], i);
                    assert!(self.weight[i] >= 1);
                }
                Node::Escape => {
                    assert_eq!(self.nyt, i);
                    assert!(self.weight[i] >= 1);
                    escapes += 1;
                }
            }
        }
        assert_eq!(escapes, 1);
        assert_eq!(self.leaf_pos.len() * 2 + 1, n);
    }
}
