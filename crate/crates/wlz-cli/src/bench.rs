//! Benchmark runners: each compresses with a set of configurations, checks
//! the round trip, and emits one CSV row per configuration on stdout.

use anyhow::{ensure, Context, Result};
use std::io::Write;
use std::time::Instant;
use wlz::codes::CoderKind;
use wlz::matchfinder::Structure;
use wlz::parser::Variant;
use wlz::{compress, decompress, CodecConfig};

pub struct Row {
    pub config: String,
    pub original_bytes: u64,
    pub compressed_bytes: u64,
    pub ratio_pct: f64,
    pub time_ms: f64,
}

/// Compress three times on the monotonic clock, keep the median, and verify
/// the container restores the input before reporting anything.
fn run_one(label: &str, input: &[u8], cfg: &CodecConfig) -> Result<Row> {
    let mut times = [0f64; 3];
    let mut packed = Vec::new();
    for t in &mut times {
        let start = Instant::now();
        packed = compress(input, cfg).with_context(|| format!("compressing with {label}"))?;
        *t = start.elapsed().as_secs_f64() * 1e3;
    }
    times.sort_by(f64::total_cmp);
    let restored = decompress(&packed).with_context(|| format!("round trip of {label}"))?;
    ensure!(restored == input, "{label}: round trip mismatch");
    Ok(Row {
        config: label.to_string(),
        original_bytes: input.len() as u64,
        compressed_bytes: packed.len() as u64,
        ratio_pct: 100.0 * packed.len() as f64 / input.len().max(1) as f64,
        time_ms: times[1],
    })
}

fn write_csv(out: &mut dyn Write, input_name: &str, rows: &[Row], mark_best: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let best = rows
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.ratio_pct.total_cmp(&b.1.ratio_pct))
        .map(|(i, _)| i);
    let mut header =
        vec!["config", "input", "original_bytes", "compressed_bytes", "ratio_pct", "time_ms"];
    if mark_best {
        header.push("best");
    }
    w.write_record(&header)?;
    for (i, r) in rows.iter().enumerate() {
        let mut record = vec![
            r.config.clone(),
            input_name.to_string(),
            r.original_bytes.to_string(),
            r.compressed_bytes.to_string(),
            format!("{:.4}", r.ratio_pct),
            format!("{:.3}", r.time_ms),
        ];
        if mark_best {
            record.push(if Some(i) == best { "*".into() } else { String::new() });
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn baseline(window_log2: u32) -> CodecConfig {
    let mut cfg = CodecConfig::preset_best();
    cfg.window_log2 = window_log2;
    cfg
}

/// One row per window structure, identical parse and coders throughout, so
/// the time column isolates the search data structure.
pub fn structures(out: &mut dyn Write, name: &str, input: &[u8], window_log2: u32) -> Result<()> {
    let mut rows = Vec::new();
    for structure in Structure::ALL {
        let mut cfg = baseline(window_log2);
        cfg.structure = structure;
        if structure.uses_table() {
            // very wide default tables would dwarf the window at CLI scale
            cfg.table_bits = Some(structure.default_table_bits().min(window_log2));
        }
        rows.push(run_one(structure.name(), input, &cfg)?);
    }
    write_csv(out, name, &rows, false)
}

/// Direct fields versus the adaptive assignment, for every parse variant.
pub fn coders(out: &mut dyn Write, name: &str, input: &[u8], window_log2: u32) -> Result<()> {
    let mut rows = Vec::new();
    for variant in Variant::ALL {
        for adaptive in [false, true] {
            let mut cfg = if adaptive {
                baseline(window_log2)
            } else {
                let mut direct = CodecConfig::preset_direct(variant);
                direct.structure = Structure::Pth;
                direct.window_log2 = window_log2;
                direct
            };
            cfg.variant = variant;
            let label =
                format!("{}+{}", variant.name(), if adaptive { "adaptive" } else { "direct" });
            rows.push(run_one(&label, input, &cfg)?);
        }
    }
    write_csv(out, name, &rows, false)
}

/// Full grid of parse variants against coder families; the smallest ratio
/// gets a `*` in the `best` column.
pub fn sweep(out: &mut dyn Write, name: &str, input: &[u8], window_log2: u32) -> Result<()> {
    let families: [(&str, [CoderKind; 3]); 3] = [
        ("direct", [CoderKind::Direct; 3]),
        ("universal", [CoderKind::Fibonacci, CoderKind::EliasGamma, CoderKind::EliasGamma]),
        ("adaptive", [CoderKind::BBlock, CoderKind::AdaptiveHuffman, CoderKind::AdaptiveHuffman]),
    ];
    let mut rows = Vec::new();
    for variant in Variant::ALL {
        for (family, [off, len, lit]) in &families {
            let mut cfg = baseline(window_log2);
            cfg.variant = variant;
            cfg.offset_coder = *off;
            cfg.length_coder = *len;
            cfg.literal_coder = *lit;
            rows.push(run_one(&format!("{}+{family}", variant.name()), input, &cfg)?);
        }
    }
    write_csv(out, name, &rows, true)
}
