//! Shared helpers for integration tests: corpus loading with a deterministic
//! synthetic fallback, and serialization of the heavyweight tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::sync::Mutex;

/// Well-known test files and their exact sizes; reference ratio checks only
/// apply when the real bytes are present.
pub const KNOWN_CORPORA: [(&str, usize); 2] =
    [("bible.txt", 4_047_392), ("world192.txt", 2_473_400)];

/// Heavy corpus-scale tests take this lock so wall-clock measurements are
/// not distorted by each other.
pub static HEAVY: Mutex<()> = Mutex::new(());

pub fn corpus_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("WLZ_CORPUS_DIR") {
        return PathBuf::from(dir);
    }
    let home = std::env::var("HOME").unwrap_or_else(|_| ".".into());
    PathBuf::from(home).join(".cache").join("wlz-corpus")
}

/// The named corpus file, only if present locally with the expected size.
pub fn load_real(name: &str) -> Option<Vec<u8>> {
    let expected = KNOWN_CORPORA.iter().find(|(n, _)| *n == name)?.1;
    let data = std::fs::read(corpus_dir().join(name)).ok()?;
    (data.len() == expected).then_some(data)
}

/// English-shaped filler: Zipf-ranked words from a fixed vocabulary with
/// sentence casing and punctuation, plus recency-biased phrase reuse so the
/// byte stream carries the repeated multi-word runs real prose exhibits.
/// Fully determined by the seed.
pub fn synthetic_text(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab_size = 4096usize;
    let lengths = [1usize, 2, 3, 3, 4, 4, 5, 5, 5, 6, 6, 7, 7, 8, 9, 10, 11, 12];
    let words: Vec<Vec<u8>> = (0..vocab_size)
        .map(|_| {
            let n = lengths[rng.gen_range(0..lengths.len())];
            (0..n).map(|_| b'a' + rng.gen_range(0..26u8)).collect()
        })
        .collect();

    let mut out = Vec::with_capacity(len + 64);
    // byte span of every emitted word, separators excluded
    let mut bounds: Vec<(usize, usize)> = Vec::new();
    let mut capitalize = true;
    let mut words_in_sentence = 0usize;
    let mut sentence_target = rng.gen_range(6..22);
    while out.len() < len {
        let mut emitted = 1usize;
        if !capitalize && bounds.len() > 64 && rng.gen_range(0..100) < 22 {
            // re-quote a recent phrase verbatim, inner separators included
            let span = [2usize, 2, 2, 3, 3, 3, 4, 4, 5, 5, 6, 7, 8][rng.gen_range(0..13)];
            let horizon = bounds.len().min(30_000) as f64;
            let back = (horizon.powf(rng.gen::<f64>()) as usize).clamp(1, bounds.len());
            let j = bounds.len() - back;
            let k = span.min(bounds.len() - j);
            let (a, _) = bounds[j];
            let b = bounds[j + k - 1].1;
            let dst = out.len();
            for w in 0..k {
                let (wa, wb) = bounds[j + w];
                bounds.push((dst + (wa - a), dst + (wb - a)));
            }
            out.extend_from_within(a..b);
            emitted = k;
        } else if rng.gen_range(0..100) < 2 {
            // the odd numeral keeps both token classes in play
            let start = out.len();
            out.extend_from_slice(rng.gen_range(0..10_000u32).to_string().as_bytes());
            bounds.push((start, out.len()));
        } else {
            // ranks log-uniform on [1, V]: density proportional to 1/rank
            let u: f64 = rng.gen();
            let rank = (vocab_size as f64).powf(u) as usize;
            let word = &words[rank.clamp(1, vocab_size) - 1];
            let start = out.len();
            if capitalize {
                out.push(word[0].to_ascii_uppercase());
                out.extend_from_slice(&word[1..]);
            } else {
                out.extend_from_slice(word);
            }
            bounds.push((start, out.len()));
        }
        capitalize = false;
        words_in_sentence += emitted;
        if words_in_sentence >= sentence_target {
            out.extend_from_slice(if rng.gen_range(0..4) == 0 { b".\n" } else { b". " });
            capitalize = true;
            words_in_sentence = 0;
            sentence_target = rng.gen_range(6..22);
        } else if rng.gen_range(0..100) < 7 {
            out.extend_from_slice(b", ");
        } else {
            out.push(b' ');
        }
    }
    out.truncate(len);
    out
}

/// A large text to benchmark against: the real thing when cached, otherwise
/// synthetic. The flag tells callers whether reference numbers apply.
pub fn text_corpus() -> (Vec<u8>, bool) {
    match load_real("bible.txt") {
        Some(data) => (data, true),
        None => (synthetic_text(2 << 20, 0xB1B1E), false),
    }
}

pub fn ratio_pct(compressed: usize, original: usize) -> f64 {
    100.0 * compressed as f64 / original as f64
}
