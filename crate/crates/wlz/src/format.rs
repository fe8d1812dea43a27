//! Container format: a self-describing header plus one interleaved,
//! MSB-first bitstream of parse items.
//!
//! Layout: magic `WLZ7`, version, parse variant, window log2, max/min match
//! lengths, one coder id per channel (offset, length, literal), the shared
//! block-code base, and the original byte length as LEB128. The decoder
//! needs no window or match structure: it keeps the full symbol history and
//! replays items until the declared length is reached.
//!
//! Channel values are mapped to the positive integers the coders expect.
//! With fixed-width (direct) coding every channel writes `mapped - 1`, so
//! the LZ77 sentinel offset 0 maps to field value 0 and an LZSS offset uses
//! the full `window_log2` bits for offsets 1..=capacity. Literal ids grow
//! with the vocabulary: a direct literal field is exactly wide enough for
//! every known id plus one escape value, an integer-coded literal sends
//! `id + 1` with `vocab + 1` as the escape, and an adaptive Huffman literal
//! uses its built-in escape leaf. Every escape is followed by the token
//! spelling: its byte length (Elias gamma) and raw bytes. First occurrences
//! always travel as literals — a copy can only reproduce symbols that
//! already occurred — so both sides assign identical dense ids. Adaptive
//! Huffman offset/length channels escape with the gamma code of the mapped
//! value itself.

use crate::codes::{
    bits_for_count, AdaptiveHuffman, BitReader, BitWriter, CoderKind, Decoded, IntCoder,
};
use crate::parser::{ParseItem, Variant};
use crate::tokenizer::{Symbol, Token, Vocabulary, MAX_TOKEN_LEN};
use crate::{Error, Result};

pub const MAGIC: [u8; 4] = *b"WLZ7";
pub const VERSION: u8 = 1;

/// Everything the header records about how a stream was produced, except
/// the original length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatParams {
    pub variant: Variant,
    pub window_log2: u32,
    pub max_match: usize,
    pub min_match: usize,
    pub offset_coder: CoderKind,
    pub length_coder: CoderKind,
    pub literal_coder: CoderKind,
    /// log2 of the block-code base, shared by any channel using `BBlock`.
    pub bblock_base_log2: u32,
}

impl FormatParams {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.window_log2 < 1 || self.window_log2 > 30 {
            return fail(format!("window_log2 {} outside [1, 30]", self.window_log2));
        }
        if self.max_match < 1 || self.max_match > 65535 {
            return fail(format!("max_match {} outside [1, 65535]", self.max_match));
        }
        if self.min_match < 1 || self.min_match > self.max_match || self.min_match > 255 {
            return fail(format!(
                "min_match {} outside [1, min(max_match, 255)]",
                self.min_match
            ));
        }
        if self.bblock_base_log2 > 30 {
            return fail(format!("bblock_base_log2 {} outside [0, 30]", self.bblock_base_log2));
        }
        Ok(())
    }

    fn write_header(&self, out: &mut Vec<u8>, original_len: u64) {
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.variant.to_byte());
        out.push(self.window_log2 as u8);
        out.extend_from_slice(&(self.max_match as u16).to_le_bytes());
        out.push(self.min_match as u8);
        out.push(self.offset_coder.to_byte());
        out.push(self.length_coder.to_byte());
        out.push(self.literal_coder.to_byte());
        out.push(self.bblock_base_log2 as u8);
        write_leb128(out, original_len);
    }
}

fn write_leb128(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7F) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn read_leb128(bytes: &[u8], idx: &mut usize) -> Result<u64> {
    let mut v: u64 = 0;
    let mut shift = 0u32;
    loop {
        let &b = bytes.get(*idx).ok_or(Error::Truncated)?;
        *idx += 1;
        if shift >= 64 || (shift == 63 && b > 1) {
            return Err(Error::Corrupt("length varint does not fit in 64 bits"));
        }
        v |= ((b & 0x7F) as u64) << shift;
        if b & 0x80 == 0 {
            return Ok(v);
        }
        shift += 7;
    }
}

/// Parse the header: the parameters, the declared original length, and the
/// offset where the bitstream begins.
pub fn read_params(container: &[u8]) -> Result<(FormatParams, u64, usize)> {
    if container.len() < 14 {
        return Err(Error::Truncated);
    }
    if container[0..4] != MAGIC {
        return Err(Error::Corrupt("bad magic"));
    }
    if container[4] != VERSION {
        return Err(Error::Corrupt("unsupported version"));
    }
    let variant = Variant::from_byte(container[5])?;
    let window_log2 = container[6] as u32;
    let max_match = u16::from_le_bytes([container[7], container[8]]) as usize;
    let min_match = container[9] as usize;
    let offset_coder = CoderKind::from_byte(container[10])?;
    let length_coder = CoderKind::from_byte(container[11])?;
    let literal_coder = CoderKind::from_byte(container[12])?;
    let bblock_base_log2 = container[13] as u32;
    let mut idx = 14;
    let original_len = read_leb128(container, &mut idx)?;
    let params = FormatParams {
        variant,
        window_log2,
        max_match,
        min_match,
        offset_coder,
        length_coder,
        literal_coder,
        bblock_base_log2,
    };
    params.validate().map_err(|_| Error::Corrupt("inconsistent header fields"))?;
    Ok((params, original_len, idx))
}

/// One numeric channel. All values arrive pre-mapped to n >= 1; the direct
/// form writes `n - 1` in a fixed field, the adaptive form escapes unseen
/// values through an Elias gamma payload.
enum NumCoder {
    Direct { width: u32 },
    Int(IntCoder),
    Huff(Box<AdaptiveHuffman>),
}

impl NumCoder {
    fn new(kind: CoderKind, direct_width: u32, bblock_base_log2: u32) -> Self {
        match kind {
            CoderKind::Direct => NumCoder::Direct { width: direct_width },
            CoderKind::Fibonacci => NumCoder::Int(IntCoder::Fibonacci),
            CoderKind::EliasGamma => NumCoder::Int(IntCoder::EliasGamma),
            CoderKind::EliasDelta => NumCoder::Int(IntCoder::EliasDelta),
            CoderKind::BBlock => {
                NumCoder::Int(IntCoder::BBlock { base_log2: bblock_base_log2 })
            }
            CoderKind::AdaptiveHuffman => NumCoder::Huff(Box::new(AdaptiveHuffman::new())),
        }
    }

    fn put(&mut self, w: &mut BitWriter, mapped: u64) -> Result<()> {
        debug_assert!(mapped >= 1);
        match self {
            NumCoder::Direct { width } => {
                let v = mapped - 1;
                if *width < 64 && (v >> *width) != 0 {
                    return Err(Error::Domain("value exceeds its fixed-width field"));
                }
                w.write_bits(v, *width);
                Ok(())
            }
            NumCoder::Int(c) => c.encode(w, mapped),
            NumCoder::Huff(t) => {
                let sym = u32::try_from(mapped)
                    .map_err(|_| Error::Domain("value exceeds the adaptive code range"))?;
                // encode() installs the new symbol itself; only the payload
                // that lets the decoder do the same is appended here
                if t.encode(w, sym) {
                    IntCoder::EliasGamma.encode(w, mapped)?;
                }
                Ok(())
            }
        }
    }

    fn get(&mut self, r: &mut BitReader) -> Result<u64> {
        match self {
            NumCoder::Direct { width } => Ok(r.read_bits(*width)? + 1),
            NumCoder::Int(c) => c.decode(r),
            NumCoder::Huff(t) => match t.decode(r)? {
                Decoded::Known(sym) => Ok(sym as u64),
                Decoded::Escape => {
                    let mapped = IntCoder::EliasGamma.decode(r)?;
                    let sym = u32::try_from(mapped)
                        .map_err(|_| Error::Corrupt("escaped value out of range"))?;
                    t.install(sym);
                    Ok(mapped)
                }
            },
        }
    }
}

/// Literal channel: known ids grow in lockstep with the decoder's
/// vocabulary, escapes carry the token spelling.
enum LiteralCoder {
    /// Field width tracks the vocabulary: exactly wide enough for all known
    /// ids plus the escape value `vocab_len`.
    Direct,
    Int(IntCoder),
    Huff(Box<AdaptiveHuffman>),
}

impl LiteralCoder {
    fn new(kind: CoderKind, bblock_base_log2: u32) -> Self {
        match kind {
            CoderKind::Direct => LiteralCoder::Direct,
            CoderKind::Fibonacci => LiteralCoder::Int(IntCoder::Fibonacci),
            CoderKind::EliasGamma => LiteralCoder::Int(IntCoder::EliasGamma),
            CoderKind::EliasDelta => LiteralCoder::Int(IntCoder::EliasDelta),
            CoderKind::BBlock => {
                LiteralCoder::Int(IntCoder::BBlock { base_log2: bblock_base_log2 })
            }
            CoderKind::AdaptiveHuffman => LiteralCoder::Huff(Box::new(AdaptiveHuffman::new())),
        }
    }
}

struct ItemEncoder {
    variant: Variant,
    window_log2: u32,
    min_match: u64,
    max_match: u64,
    offset: NumCoder,
    length: NumCoder,
    literal: LiteralCoder,
    /// Symbols the decoder knows so far (dense ids 0..seen).
    seen: u32,
}

fn direct_length_width(params: &FormatParams) -> u32 {
    match params.variant {
        // lengths 0..=max_match, 0 being the sentinel
        Variant::Lz77 => bits_for_count(params.max_match as u64 + 1),
        // lengths min_match..=max_match
        _ => bits_for_count((params.max_match - params.min_match + 1) as u64),
    }
}

impl ItemEncoder {
    fn new(params: &FormatParams) -> Self {
        ItemEncoder {
            variant: params.variant,
            window_log2: params.window_log2,
            min_match: params.min_match as u64,
            max_match: params.max_match as u64,
            offset: NumCoder::new(params.offset_coder, params.window_log2, params.bblock_base_log2),
            length: NumCoder::new(params.length_coder, direct_length_width(params), params.bblock_base_log2),
            literal: LiteralCoder::new(params.literal_coder, params.bblock_base_log2),
            seen: 0,
        }
    }

    fn emit_copy(&mut self, w: &mut BitWriter, offset: u64, length: u64) -> Result<()> {
        let capacity = 1u64 << self.window_log2;
        let (mapped_off, mapped_len) = match self.variant {
            Variant::Lz77 => {
                if (offset == 0) != (length == 0) {
                    return Err(Error::Domain("sentinel must have offset 0 and length 0"));
                }
                if offset >= capacity || length > self.max_match {
                    return Err(Error::Domain("copy outside the representable range"));
                }
                (offset + 1, length + 1)
            }
            _ => {
                if offset < 1 || offset > capacity {
                    return Err(Error::Domain("offset outside the window"));
                }
                if length < self.min_match || length > self.max_match {
                    return Err(Error::Domain("length outside [min_match, max_match]"));
                }
                (offset, length - self.min_match + 1)
            }
        };
        self.offset.put(w, mapped_off)?;
        self.length.put(w, mapped_len)
    }

    fn emit_literal(&mut self, w: &mut BitWriter, sym: Symbol, vocab: &Vocabulary) -> Result<()> {
        if sym.0 > self.seen {
            return Err(Error::Domain("literal skips ahead of the vocabulary"));
        }
        let novel = sym.0 == self.seen;
        match &mut self.literal {
            LiteralCoder::Direct => {
                let width = bits_for_count(self.seen as u64 + 1);
                w.write_bits(sym.0 as u64, width);
            }
            LiteralCoder::Int(c) => c.encode(w, sym.0 as u64 + 1)?,
            LiteralCoder::Huff(t) => {
                let escaped = t.encode(w, sym.0);
                debug_assert_eq!(escaped, novel, "tree and vocabulary out of step");
            }
        }
        if novel {
            // the Huffman tree already installed the id inside encode();
            // the spelling lets the decoder mirror that install
            let token = vocab.resolve(sym)?;
            IntCoder::EliasGamma.encode(w, token.bytes.len() as u64)?;
            for &b in &token.bytes {
                w.write_bits(b as u64, 8);
            }
            self.seen += 1;
        }
        Ok(())
    }
}

struct ItemDecoder {
    variant: Variant,
    window_log2: u32,
    min_match: u64,
    max_match: u64,
    offset: NumCoder,
    length: NumCoder,
    literal: LiteralCoder,
}

impl ItemDecoder {
    fn new(params: &FormatParams) -> Self {
        ItemDecoder {
            variant: params.variant,
            window_log2: params.window_log2,
            min_match: params.min_match as u64,
            max_match: params.max_match as u64,
            offset: NumCoder::new(params.offset_coder, params.window_log2, params.bblock_base_log2),
            length: NumCoder::new(params.length_coder, direct_length_width(params), params.bblock_base_log2),
            literal: LiteralCoder::new(params.literal_coder, params.bblock_base_log2),
        }
    }

    /// Read one (offset, length) pair in stream domain; LZ77 may yield the
    /// (0, 0) sentinel.
    fn read_copy(&mut self, r: &mut BitReader) -> Result<(u64, u64)> {
        let mapped_off = self.offset.get(r)?;
        let mapped_len = self.length.get(r)?;
        if mapped_off == 0 || mapped_len == 0 {
            return Err(Error::Corrupt("zero-mapped channel value"));
        }
        let capacity = 1u64 << self.window_log2;
        match self.variant {
            Variant::Lz77 => {
                let offset = mapped_off - 1;
                let length = mapped_len - 1;
                if (offset == 0) != (length == 0) {
                    return Err(Error::Corrupt("half-empty copy sentinel"));
                }
                if offset >= capacity || length > self.max_match {
                    return Err(Error::Corrupt("copy outside the representable range"));
                }
                Ok((offset, length))
            }
            _ => {
                let offset = mapped_off;
                let length = mapped_len + self.min_match - 1;
                if offset > capacity {
                    return Err(Error::Corrupt("offset beyond the window"));
                }
                if length > self.max_match {
                    return Err(Error::Corrupt("length above max_match"));
                }
                Ok((offset, length))
            }
        }
    }

    fn read_literal(&mut self, r: &mut BitReader, vocab: &mut Vocabulary) -> Result<Symbol> {
        let known = vocab.len() as u64;
        let (id, novel) = match &mut self.literal {
            LiteralCoder::Direct => {
                let width = bits_for_count(known + 1);
                let v = r.read_bits(width)?;
                if v > known {
                    return Err(Error::Corrupt("literal id out of range"));
                }
                (v, v == known)
            }
            LiteralCoder::Int(c) => {
                let v = c.decode(r)?;
                if v == 0 || v > known + 1 {
                    return Err(Error::Corrupt("literal id out of range"));
                }
                (v - 1, v == known + 1)
            }
            LiteralCoder::Huff(t) => match t.decode(r)? {
                Decoded::Known(id) => (id as u64, false),
                Decoded::Escape => (known, true),
            },
        };
        if !novel {
            return Ok(Symbol(id as u32));
        }
        let len = IntCoder::EliasGamma.decode(r)?;
        if len as usize > MAX_TOKEN_LEN {
            return Err(Error::Corrupt("token spelling too long"));
        }
        let mut bytes = Vec::with_capacity(len as usize);
        for _ in 0..len {
            bytes.push(r.read_bits(8)? as u8);
        }
        let (sym, fresh) = vocab.intern(&Token::new(bytes));
        if !fresh || sym.0 as u64 != known {
            return Err(Error::Corrupt("token spelled twice"));
        }
        if let LiteralCoder::Huff(t) = &mut self.literal {
            t.install(sym.0);
        }
        Ok(sym)
    }
}

/// Serialize parsed items into a complete container.
pub fn encode(
    params: &FormatParams,
    items: &[ParseItem],
    vocab: &Vocabulary,
    original_len: u64,
) -> Result<Vec<u8>> {
    params.validate()?;
    let mut out = Vec::new();
    params.write_header(&mut out, original_len);
    let mut w = BitWriter::new();
    let mut enc = ItemEncoder::new(params);
    match params.variant {
        Variant::Lz77 => {
            if items.len() % 2 != 0 {
                return Err(Error::Config("LZ77 items must pair copies with literals".into()));
            }
            for pair in items.chunks(2) {
                let ParseItem::Copy { offset, length } = pair[0] else {
                    return Err(Error::Config("LZ77 items must alternate copy, literal".into()));
                };
                let ParseItem::Literal(sym) = pair[1] else {
                    return Err(Error::Config("LZ77 items must alternate copy, literal".into()));
                };
                enc.emit_copy(&mut w, offset as u64, length as u64)?;
                enc.emit_literal(&mut w, sym, vocab)?;
            }
        }
        _ => {
            for item in items {
                match *item {
                    ParseItem::Literal(sym) => {
                        w.write_bit(false);
                        enc.emit_literal(&mut w, sym, vocab)?;
                    }
                    ParseItem::Copy { offset, length } => {
                        w.write_bit(true);
                        enc.emit_copy(&mut w, offset as u64, length as u64)?;
                    }
                }
            }
        }
    }
    out.extend_from_slice(&w.finish());
    Ok(out)
}

/// Decode a container back to the original bytes.
pub fn decode(container: &[u8]) -> Result<Vec<u8>> {
    let (params, original_len, header_len) = read_params(container)?;
    let mut r = BitReader::new(&container[header_len..]);
    let mut dec = ItemDecoder::new(&params);
    let mut vocab = Vocabulary::new();
    let mut syms: Vec<Symbol> = Vec::new();
    let mut out: Vec<u8> = Vec::new();

    fn push_symbol(
        s: Symbol,
        vocab: &Vocabulary,
        syms: &mut Vec<Symbol>,
        out: &mut Vec<u8>,
        original_len: u64,
    ) -> Result<()> {
        let token = vocab.resolve(s)?;
        out.extend_from_slice(&token.bytes);
        if out.len() as u64 > original_len {
            return Err(Error::Corrupt("stream produces more than the declared length"));
        }
        syms.push(s);
        Ok(())
    }

    let apply_copy = |offset: u64,
                          length: u64,
                          vocab: &Vocabulary,
                          syms: &mut Vec<Symbol>,
                          out: &mut Vec<u8>|
     -> Result<()> {
        if offset == 0 || offset > syms.len() as u64 {
            return Err(Error::Corrupt("copy reaches before the start of the stream"));
        }
        for _ in 0..length {
            let s = syms[syms.len() - offset as usize];
            push_symbol(s, vocab, syms, out, original_len)?;
        }
        Ok(())
    };

    match params.variant {
        Variant::Lz77 => {
            while (out.len() as u64) < original_len {
                let (offset, length) = dec.read_copy(&mut r)?;
                if length > 0 {
                    apply_copy(offset, length, &vocab, &mut syms, &mut out)?;
                }
                let s = dec.read_literal(&mut r, &mut vocab)?;
                push_symbol(s, &vocab, &mut syms, &mut out, original_len)?;
            }
        }
        _ => {
            while (out.len() as u64) < original_len {
                if r.read_bit()? {
                    let (offset, length) = dec.read_copy(&mut r)?;
                    apply_copy(offset, length, &vocab, &mut syms, &mut out)?;
                } else {
                    let s = dec.read_literal(&mut r, &mut vocab)?;
                    push_symbol(s, &vocab, &mut syms, &mut out, original_len)?;
                }
            }
        }
    }
    if r.remaining_bits() >= 8 {
        return Err(Error::Corrupt("trailing bytes after the stream end"));
    }
    while r.remaining_bits() > 0 {
        if r.read_bit()? {
            return Err(Error::Corrupt("nonzero padding bits"));
        }
    }
    Ok(out)
}
