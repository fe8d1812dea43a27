//! Binary search trees over fixed-length symbol keys.
//!
//! Every indexed position `p` is keyed by the `max_match` symbols starting at
//! `p`, compared lexicographically. Nodes live in flat arrays indexed by ring
//! slot (`position & mask`), so the tree never allocates per insert. Inserting
//! a key that is already present replaces the older occupant, keeping one node
//! per distinct key. The forest variants disperse keys over many small trees:
//! one per first symbol, or one per hash bucket of the first two symbols.

use super::{mix_hash, Match, Ring, Structure, WindowConfig};
use crate::tokenizer::Symbol;
use std::cmp::Ordering;
use std::collections::HashMap;

const NIL: usize = usize::MAX;
/// `parent` value marking a tree root; roots are reached via the root table.
const ROOT_MARK: usize = usize::MAX - 1;

enum Roots {
    Single(usize),
    BySymbol(HashMap<Symbol, usize>),
    Hashed(Vec<usize>),
}

#[derive(Clone, Copy)]
enum RootSel {
    Unit,
    Sym(Symbol),
    Bucket(usize),
}

pub(crate) struct TreeIndex {
    parent: Vec<usize>,
    left: Vec<usize>,
    right: Vec<usize>,
    /// Absolute position occupying each slot.
    occupant: Vec<usize>,
    roots: Roots,
    table_bits: u32,
}

impl TreeIndex {
    pub fn new(cfg: &WindowConfig) -> Self {
        let n = cfg.capacity;
        let roots = match cfg.structure {
            Structure::Bt => Roots::Single(NIL),
            Structure::Bta => Roots::BySymbol(HashMap::new()),
            Structure::Bth => Roots::Hashed(vec![NIL; 1 << cfg.table_bits]),
            other => unreachable!("not a tree structure: {}", other.name()),
        };
        TreeIndex {
            parent: vec![NIL; n],
            left: vec![NIL; n],
            right: vec![NIL; n],
            occupant: vec![0; n],
            roots,
            table_bits: cfg.table_bits,
        }
    }

    fn sel_for_pos(&self, ring: &Ring, p: usize) -> RootSel {
        match &self.roots {
            Roots::Single(_) => RootSel::Unit,
            Roots::BySymbol(_) => RootSel::Sym(ring.get(p)),
            Roots::Hashed(_) => {
                RootSel::Bucket(mix_hash(&[ring.get(p), ring.get(p + 1)], self.table_bits))
            }
        }
    }

    /// Root selector for a query; `None` when the lookahead is too short to
    /// address a root (only possible for the hashed forest).
    fn sel_for_look(&self, look: &[Symbol]) -> Option<RootSel> {
        match &self.roots {
            Roots::Single(_) => Some(RootSel::Unit),
            Roots::BySymbol(_) => Some(RootSel::Sym(look[0])),
            Roots::Hashed(_) => {
                if look.len() < 2 {
                    None
                } else {
                    Some(RootSel::Bucket(mix_hash(&look[..2], self.table_bits)))
                }
            }
        }
    }

    fn get_root(&self, sel: RootSel) -> usize {
        match (&self.roots, sel) {
            (Roots::Single(r), RootSel::Unit) => *r,
            (Roots::BySymbol(m), RootSel::Sym(s)) => m.get(&s).copied().unwrap_or(NIL),
            (Roots::Hashed(v), RootSel::Bucket(b)) => v[b],
            _ => unreachable!("root selector does not match root kind"),
        }
    }

    fn set_root(&mut self, sel: RootSel, slot: usize) {
        match (&mut self.roots, sel) {
            (Roots::Single(r), RootSel::Unit) => *r = slot,
            (Roots::BySymbol(m), RootSel::Sym(s)) => {
                if slot == NIL {
                    m.remove(&s);
                } else {
                    m.insert(s, slot);
                }
            }
            (Roots::Hashed(v), RootSel::Bucket(b)) => v[b] = slot,
            _ => unreachable!("root selector does not match root kind"),
        }
        if slot != NIL {
            self.parent[slot] = ROOT_MARK;
        }
    }

    /// Lexicographic order of the `max_match`-symbol keys at positions `a`
    /// and `b`, both fully inside the ring.
    fn compare_keys(ring: &Ring, a: usize, b: usize, max_match: usize) -> Ordering {
        for i in 0..max_match {
            match ring.get(a + i).cmp(&ring.get(b + i)) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    pub fn insert(&mut self, ring: &Ring, cfg: &WindowConfig, p: usize) {
        let slot = p & ring.mask;
        debug_assert_eq!(self.parent[slot], NIL, "slot reused while occupied");
        self.occupant[slot] = p;
        self.left[slot] = NIL;
        self.right[slot] = NIL;
        let sel = self.sel_for_pos(ring, p);
        let mut cur = self.get_root(sel);
        if cur == NIL {
            self.set_root(sel, slot);
            return;
        }
        loop {
            match Self::compare_keys(ring, p, self.occupant[cur], cfg.max_match) {
                Ordering::Equal => {
                    // Same key: the newer position takes over the node.
                    let (l, r, pp) = (self.left[cur], self.right[cur], self.parent[cur]);
                    self.left[slot] = l;
                    self.right[slot] = r;
                    if l != NIL {
                        self.parent[l] = slot;
                    }
                    if r != NIL {
                        self.parent[r] = slot;
                    }
                    if pp == ROOT_MARK {
                        self.set_root(sel, slot);
                    } else {
                        if self.left[pp] == cur {
                            self.left[pp] = slot;
                        } else {
                            self.right[pp] = slot;
                        }
                        self.parent[slot] = pp;
                    }
                    self.parent[cur] = NIL;
                    self.left[cur] = NIL;
                    self.right[cur] = NIL;
                    return;
                }
                Ordering::Less => {
                    if self.left[cur] == NIL {
                        self.left[cur] = slot;
                        self.parent[slot] = cur;
                        return;
                    }
                    cur = self.left[cur];
                }
                Ordering::Greater => {
                    if self.right[cur] == NIL {
                        self.right[cur] = slot;
                        self.parent[slot] = cur;
                        return;
                    }
                    cur = self.right[cur];
                }
            }
        }
    }

    /// Remove position `e` as it leaves the window. A position replaced by a
    /// newer equal key is already gone; that is not an error.
    pub fn evict(&mut self, ring: &Ring, _cfg: &WindowConfig, e: usize) {
        let slot = e & ring.mask;
        if self.parent[slot] == NIL || self.occupant[slot] != e {
            return;
        }
        let sel = self.sel_for_pos(ring, e);
        let p = self.parent[slot];
        let l = self.left[slot];
        let r = self.right[slot];
        let repl = if l == NIL {
            r
        } else if r == NIL {
            l
        } else {
            // Splice in the in-order predecessor (rightmost of left subtree).
            let mut q = l;
            while self.right[q] != NIL {
                q = self.right[q];
            }
            if self.parent[q] != slot {
                let pq = self.parent[q];
                self.right[pq] = self.left[q];
                if self.left[q] != NIL {
                    self.parent[self.left[q]] = pq;
                }
                self.left[q] = l;
                self.parent[l] = q;
            }
            self.right[q] = r;
            self.parent[r] = q;
            q
        };
        if p == ROOT_MARK {
            self.set_root(sel, repl);
        } else {
            if repl != NIL {
                self.parent[repl] = p;
            }
            if self.left[p] == slot {
                self.left[p] = repl;
            } else {
                self.right[p] = repl;
            }
        }
        self.parent[slot] = NIL;
        self.left[slot] = NIL;
        self.right[slot] = NIL;
    }

    /// Longest prefix of `look` present in the tree. Descending by the first
    /// differing symbol visits every candidate that could extend the current
    /// best, so the maximum length is exact; the offset among equal-length
    /// candidates is whatever the tree shape yields.
    pub fn search(
        &self,
        ring: &Ring,
        _cfg: &WindowConfig,
        look: &[Symbol],
        span: usize,
    ) -> Option<Match> {
        let sel = self.sel_for_look(look)?;
        let mut cur = self.get_root(sel);
        let mut best = Match { offset: 0, length: 0 };
        while cur != NIL {
            let cp = self.occupant[cur];
            let mut l = 0;
            while l < look.len() && ring.get(cp + l) == look[l] {
                l += 1;
            }
            if l > best.length {
                best = Match { offset: ring.pos - cp, length: l };
            }
            if l == look.len() {
                break;
            }
            cur = if look[l] < ring.get(cp + l) { self.left[cur] } else { self.right[cur] };
        }
        debug_assert!(best.length == 0 || best.offset <= span);
        if best.length > 0 {
            Some(best)
        } else {
            None
        }
    }

    /// Walk every tree checking structural invariants; test builds only.
    #[cfg(test)]
    pub fn assert_consistent(&self, ring: &Ring, cfg: &WindowConfig) {
        let roots: Vec<usize> = match &self.roots {
            Roots::Single(r) => vec![*r],
            Roots::BySymbol(m) => m.values().copied().collect(),
            Roots::Hashed(v) => v.clone(),
        };
        for root in roots {
            if root == NIL {
                continue;
            }
            assert_eq!(self.parent[root], ROOT_MARK, "root with a parent");
            let mut inorder = Vec::new();
            self.walk(ring, cfg, root, &mut inorder);
            for pair in inorder.windows(2) {
                assert_eq!(
                    Self::compare_keys(ring, pair[0], pair[1], cfg.max_match),
                    Ordering::Less,
                    "in-order keys out of order or duplicated"
                );
            }
        }
    }

    #[cfg(test)]
    fn walk(&self, ring: &Ring, cfg: &WindowConfig, n: usize, inorder: &mut Vec<usize>) {
        let p = self.occupant[n];
        assert!(p + cfg.max_match <= ring.pos, "key overruns the stream");
        assert!(ring.pos - p <= cfg.max_offset, "evicted position still linked");
        if self.left[n] != NIL {
            assert_eq!(self.parent[self.left[n]], n);
            self.walk(ring, cfg, self.left[n], inorder);
        }
        inorder.push(p);
        if self.right[n] != NIL {
            assert_eq!(self.parent[self.right[n]], n);
            self.walk(ring, cfg, self.right[n], inorder);
        }
    }
}
