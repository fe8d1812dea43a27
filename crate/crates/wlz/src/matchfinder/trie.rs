//! Patricia tries over fixed-length symbol keys with recency tracking.
//!
//! Each indexed position is a `max_match`-symbol key. Edges carry compressed
//! labels; a label is not stored as symbols but as a (depth, length) view
//! into any key passing through the node, using the subtree's most recent
//! position as the representative — the shared prefix guarantees every
//! representative spells the same symbols. `newest` on each node is the most
//! recent position in its subtree, so a query reads off the smallest offset
//! for the longest match directly. Duplicate keys keep one leaf, updated to
//! the newer position.

use super::{mix_hash, Match, Ring, Structure, WindowConfig};
use crate::tokenizer::Symbol;
use std::collections::HashMap;

const TNIL: u32 = u32::MAX;

struct Node {
    /// Symbols from the key start to the beginning of this node's edge.
    depth: u32,
    /// Edge label length in symbols.
    len: u32,
    /// Most recent position in this subtree; for a leaf, its position.
    newest: usize,
    /// Sorted (first label symbol, node id) pairs; empty marks a leaf.
    children: Vec<(Symbol, u32)>,
}

enum TrieRoots {
    Single(u32),
    BySymbol(HashMap<Symbol, u32>),
    Hashed(Vec<u32>),
}

#[derive(Clone, Copy)]
enum RootSel {
    Unit,
    Sym(Symbol),
    Bucket(usize),
}

pub(crate) struct TrieIndex {
    nodes: Vec<Node>,
    free: Vec<u32>,
    roots: TrieRoots,
    table_bits: u32,
}

impl TrieIndex {
    pub fn new(cfg: &WindowConfig) -> Self {
        let roots = match cfg.structure {
            Structure::Pt => TrieRoots::Single(TNIL),
            Structure::Pta => TrieRoots::BySymbol(HashMap::new()),
            Structure::Pth => TrieRoots::Hashed(vec![TNIL; 1 << cfg.table_bits]),
            other => unreachable!("not a trie structure: {}", other.name()),
        };
        TrieIndex { nodes: Vec::new(), free: Vec::new(), roots, table_bits: cfg.table_bits }
    }

    fn alloc(&mut self, node: Node) -> u32 {
        if let Some(id) = self.free.pop() {
            self.nodes[id as usize] = node;
            id
        } else {
            self.nodes.push(node);
            (self.nodes.len() - 1) as u32
        }
    }

    fn release(&mut self, id: u32) {
        self.nodes[id as usize].children = Vec::new();
        self.free.push(id);
    }

    fn sel_for_pos(&self, ring: &Ring, p: usize) -> RootSel {
        match &self.roots {
            TrieRoots::Single(_) => RootSel::Unit,
            TrieRoots::BySymbol(_) => RootSel::Sym(ring.get(p)),
            TrieRoots::Hashed(_) => {
                RootSel::Bucket(mix_hash(&[ring.get(p), ring.get(p + 1)], self.table_bits))
            }
        }
    }

    fn sel_for_look(&self, look: &[Symbol]) -> Option<RootSel> {
        match &self.roots {
            TrieRoots::Single(_) => Some(RootSel::Unit),
            TrieRoots::BySymbol(_) => Some(RootSel::Sym(look[0])),
            TrieRoots::Hashed(_) => {
                if look.len() < 2 {
                    None
                } else {
                    Some(RootSel::Bucket(mix_hash(&look[..2], self.table_bits)))
                }
            }
        }
    }

    fn get_root(&self, sel: RootSel) -> u32 {
        match (&self.roots, sel) {
            (TrieRoots::Single(r), RootSel::Unit) => *r,
            (TrieRoots::BySymbol(m), RootSel::Sym(s)) => m.get(&s).copied().unwrap_or(TNIL),
            (TrieRoots::Hashed(v), RootSel::Bucket(b)) => v[b],
            _ => unreachable!("root selector does not match root kind"),
        }
    }

    fn set_root(&mut self, sel: RootSel, id: u32) {
        match (&mut self.roots, sel) {
            (TrieRoots::Single(r), RootSel::Unit) => *r = id,
            (TrieRoots::BySymbol(m), RootSel::Sym(s)) => {
                if id == TNIL {
                    m.remove(&s);
                } else {
                    m.insert(s, id);
                }
            }
            (TrieRoots::Hashed(v), RootSel::Bucket(b)) => v[b] = id,
            _ => unreachable!("root selector does not match root kind"),
        }
    }

    /// `i`-th symbol of `id`'s edge label, read through the representative.
    #[inline]
    fn label_sym(&self, ring: &Ring, id: u32, i: usize) -> Symbol {
        let n = &self.nodes[id as usize];
        ring.get(n.newest + n.depth as usize + i)
    }

    fn child(&self, id: u32, s: Symbol) -> Option<u32> {
        let kids = &self.nodes[id as usize].children;
        kids.binary_search_by_key(&s, |&(sym, _)| sym).ok().map(|i| kids[i].1)
    }

    fn link_child(&mut self, id: u32, s: Symbol, child: u32) {
        let kids = &mut self.nodes[id as usize].children;
        match kids.binary_search_by_key(&s, |&(sym, _)| sym) {
            Ok(i) => kids[i].1 = child,
            Err(i) => kids.insert(i, (s, child)),
        }
    }

    pub fn insert(&mut self, ring: &Ring, cfg: &WindowConfig, p: usize) {
        let max = cfg.max_match;
        let key = |i: usize| ring.get(p + i);
        let sel = self.sel_for_pos(ring, p);
        let mut node = self.get_root(sel);
        if node == TNIL {
            node = self.alloc(Node { depth: 0, len: 0, newest: p, children: Vec::new() });
            self.set_root(sel, node);
        }
        let mut d = 0usize;
        loop {
            self.nodes[node as usize].newest = p;
            debug_assert!(d < max, "internal node at full key depth");
            let c = key(d);
            let Some(child) = self.child(node, c) else {
                let leaf = self.alloc(Node {
                    depth: d as u32,
                    len: (max - d) as u32,
                    newest: p,
                    children: Vec::new(),
                });
                self.link_child(node, c, leaf);
                return;
            };
            let lab_len = self.nodes[child as usize].len as usize;
            let mut m = 0;
            while m < lab_len && self.label_sym(ring, child, m) == key(d + m) {
                m += 1;
            }
            if m == lab_len {
                if self.nodes[child as usize].children.is_empty() {
                    // full key equality: the newer position takes the leaf
                    debug_assert_eq!(d + m, max);
                    self.nodes[child as usize].newest = p;
                    return;
                }
                node = child;
                d += m;
                continue;
            }
            // diverged inside the edge: split at m
            let old_branch = self.label_sym(ring, child, m);
            let split = self.alloc(Node {
                depth: d as u32,
                len: m as u32,
                newest: p,
                children: Vec::new(),
            });
            {
                let ch = &mut self.nodes[child as usize];
                ch.depth = (d + m) as u32;
                ch.len = (lab_len - m) as u32;
            }
            let leaf = self.alloc(Node {
                depth: (d + m) as u32,
                len: (max - d - m) as u32,
                newest: p,
                children: Vec::new(),
            });
            self.link_child(split, old_branch, child);
            self.link_child(split, key(d + m), leaf);
            self.link_child(node, c, split);
            return;
        }
    }

    /// Remove position `e` as it leaves the window. The oldest retained
    /// position can never be any subtree's `newest` unless it is alone in it,
    /// so no recency values need recomputing on the way out.
    pub fn evict(&mut self, ring: &Ring, cfg: &WindowConfig, e: usize) {
        let sel = self.sel_for_pos(ring, e);
        let root = self.get_root(sel);
        if root == TNIL {
            return;
        }
        let key = |i: usize| ring.get(e + i);
        // descend to the leaf for e's key, remembering the path
        let mut path: Vec<(u32, Symbol)> = Vec::new(); // (parent, edge symbol)
        let mut node = root;
        let mut d = 0usize;
        loop {
            if self.nodes[node as usize].children.is_empty() && node != root {
                break;
            }
            if d >= cfg.max_match {
                break;
            }
            let c = key(d);
            let Some(child) = self.child(node, c) else {
                debug_assert!(false, "window key missing from trie");
                return;
            };
            path.push((node, c));
            d += self.nodes[child as usize].len as usize;
            node = child;
        }
        if self.nodes[node as usize].newest != e {
            return; // replaced by a newer position with the same key
        }
        let Some(&(parent, sym)) = path.last() else {
            debug_assert!(false, "leaf cannot be a root");
            return;
        };
        let kids = &mut self.nodes[parent as usize].children;
        let i = kids.binary_search_by_key(&sym, |&(s, _)| s).expect("edge just traversed");
        kids.remove(i);
        self.release(node);

        if parent == root {
            if self.nodes[root as usize].children.is_empty() {
                self.release(root);
                self.set_root(sel, TNIL);
            }
            return;
        }
        if self.nodes[parent as usize].children.len() == 1 {
            // Patricia invariant: merge the lone child into its parent
            let (_, only) = self.nodes[parent as usize].children[0];
            let (c_len, c_newest) = {
                let c = &self.nodes[only as usize];
                (c.len, c.newest)
            };
            let grandkids = std::mem::take(&mut self.nodes[only as usize].children);
            let pnode = &mut self.nodes[parent as usize];
            pnode.len += c_len;
            pnode.newest = c_newest;
            pnode.children = grandkids;
            self.release(only);
        }
    }

    /// Longest prefix of `look` spelled by any stored key, with the most
    /// recent matching position (hence the smallest offset).
    pub fn search(&self, ring: &Ring, look: &[Symbol], span: usize) -> Option<Match> {
        let sel = self.sel_for_look(look)?;
        let mut node = self.get_root(sel);
        if node == TNIL {
            return None;
        }
        let mut d = 0usize;
        let mut best = Match { offset: 0, length: 0 };
        while d < look.len() {
            let Some(child) = self.child(node, look[d]) else {
                break;
            };
            let lab_len = self.nodes[child as usize].len as usize;
            let mut m = 0;
            let lim = lab_len.min(look.len() - d);
            while m < lim && self.label_sym(ring, child, m) == look[d + m] {
                m += 1;
            }
            best = Match {
                offset: ring.pos - self.nodes[child as usize].newest,
                length: d + m,
            };
            if m < lab_len || self.nodes[child as usize].children.is_empty() {
                break;
            }
            node = child;
            d += m;
        }
        debug_assert!(best.length == 0 || best.offset <= span);
        if best.length > 0 {
            Some(best)
        } else {
            None
        }
    }

    /// Full structural validation; test builds only.
    #[cfg(test)]
    pub fn assert_consistent(&self, ring: &Ring, cfg: &WindowConfig) {
        let roots: Vec<u32> = match &self.roots {
            TrieRoots::Single(r) => vec![*r],
            TrieRoots::BySymbol(m) => m.values().copied().collect(),
            TrieRoots::Hashed(v) => v.clone(),
        };
        for root in roots {
            if root == TNIL {
                continue;
            }
            let r = &self.nodes[root as usize];
            assert_eq!((r.depth, r.len), (0, 0), "root must have an empty label");
            assert!(!r.children.is_empty(), "empty root not reclaimed");
            self.check(ring, cfg, root, root);
        }
    }

    #[cfg(test)]
    fn check(&self, ring: &Ring, cfg: &WindowConfig, id: u32, root: u32) {
        let n = &self.nodes[id as usize];
        assert!(ring.pos - n.newest <= cfg.max_offset, "stale representative");
        if n.children.is_empty() {
            assert_eq!(
                (n.depth + n.len) as usize,
                cfg.max_match,
                "leaf key is not full length"
            );
            return;
        }
        if id != root {
            assert!(n.children.len() >= 2, "unmerged single-child node");
        }
        let mut newest = 0;
        let mut prev_sym: Option<Symbol> = None;
        for &(sym, child) in &n.children {
            if let Some(p) = prev_sym {
                assert!(p < sym, "children out of order");
            }
            prev_sym = Some(sym);
            let c = &self.nodes[child as usize];
            assert_eq!(c.depth, n.depth + n.len, "child depth mismatch");
            assert!(c.len >= 1);
            assert_eq!(self.label_sym(ring, child, 0), sym, "edge symbol mismatch");
            newest = newest.max(c.newest);
            self.check(ring, cfg, child, root);
        }
        assert_eq!(n.newest, newest, "recency not the max of children");
    }
}
