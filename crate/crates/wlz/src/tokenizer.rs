//! Byte-level word/non-word tokenization and the dynamic vocabulary.
//!
//! A word is a maximal run of ASCII alphanumeric bytes; everything else
//! (whitespace, punctuation, non-ASCII bytes) forms non-word runs. Runs longer
//! than `MAX_TOKEN_LEN` are force-split so a token length always fits in 16
//! bits; alternation between the two kinds is relaxed only at such splits.

use std::collections::HashMap;

use crate::{Error, Result};

/// Longest representable token, in bytes.
pub const MAX_TOKEN_LEN: usize = 65535;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    NonWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub kind: TokenKind,
    pub bytes: Vec<u8>,
}

impl Token {
    pub fn new(bytes: Vec<u8>) -> Self {
        debug_assert!(!bytes.is_empty() && bytes.len() <= MAX_TOKEN_LEN);
        let kind = classify(bytes[0]);
        Token { kind, bytes }
    }
}

/// Dense symbol id assigned by first appearance. Ids are stable across runs:
/// they depend only on interning order, never on hash iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u32);

fn classify(b: u8) -> TokenKind {
    if b.is_ascii_alphanumeric() {
        TokenKind::Word
    } else {
        TokenKind::NonWord
    }
}

/// Split `input` into tokens. Lossless: concatenating the token bytes in order
/// reproduces the input exactly.
pub fn tokenize(input: &[u8]) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut start = 0;
    while start < input.len() {
        let kind = classify(input[start]);
        let mut end = start + 1;
        while end < input.len() && classify(input[end]) == kind && end - start < MAX_TOKEN_LEN {
            end += 1;
        }
        tokens.push(Token {
            kind,
            bytes: input[start..end].to_vec(),
        });
        start = end;
    }
    tokens
}

pub fn detokenize(tokens: &[Token]) -> Vec<u8> {
    let mut out = Vec::new();
    for t in tokens {
        out.extend_from_slice(&t.bytes);
    }
    out
}

/// Token table shared by encoder and decoder. The decoder rebuilds an
/// identical table because first occurrences always travel as spelled-out
/// literals, in stream order.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<Token>,
    ids: HashMap<Token, Symbol>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the token's symbol, assigning the next dense id on first sight.
    /// The flag reports whether the token was new.
    pub fn intern(&mut self, token: &Token) -> (Symbol, bool) {
        if let Some(&sym) = self.ids.get(token) {
            return (sym, false);
        }
        let sym = Symbol(self.entries.len() as u32);
        self.entries.push(token.clone());
        self.ids.insert(token.clone(), sym);
        (sym, true)
    }

    /// Fails on ids never interned, which signals encoder/decoder
    /// desynchronization.
    pub fn resolve(&self, sym: Symbol) -> Result<&Token> {
        self.entries
            .get(sym.0 as usize)
            .ok_or(Error::UnknownSymbol(sym.0))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Tokenize and intern in one pass: the symbol stream plus the vocabulary it
/// references.
pub fn to_symbols(input: &[u8]) -> (Vec<Symbol>, Vocabulary) {
    let mut vocab = Vocabulary::new();
    let symbols = tokenize(input)
        .iter()
        .map(|t| vocab.intern(t).0)
        .collect();
    (symbols, vocab)
}
