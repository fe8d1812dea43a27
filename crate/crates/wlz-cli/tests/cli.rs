//! End-to-end tests that drive the compiled `wlz` binary.

use std::path::Path;
use std::process::{Command, Output};
use std::sync::Mutex;

/// Timing-sensitive tests take this lock so they do not run concurrently.
static SEQUENTIAL: Mutex<()> = Mutex::new(());

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wlz")).args(args).output().expect("binary runs")
}

fn expect_ok(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Deterministic compressible filler: a skewed 512-word soup where a fifth
/// of the word slots re-quote a recent phrase verbatim.
fn make_text(len: usize, seed: u64) -> Vec<u8> {
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let words: Vec<Vec<u8>> = (0..512)
        .map(|_| (0..2 + next() % 9).map(|_| b'a' + (next() % 26) as u8).collect())
        .collect();
    let mut out = Vec::with_capacity(len + 16);
    let mut bounds: Vec<(usize, usize)> = Vec::new();
    while out.len() < len {
        if bounds.len() > 32 && next() % 5 == 0 {
            let j = bounds.len() - 1 - (next() as usize % bounds.len().min(20_000));
            let k = (2 + next() as usize % 6).min(bounds.len() - j);
            let (a, _) = bounds[j];
            let b = bounds[j + k - 1].1;
            let dst = out.len();
            for w in 0..k {
                let (wa, wb) = bounds[j + w];
                bounds.push((dst + (wa - a), dst + (wb - a)));
            }
            out.extend_from_within(a..b);
        } else {
            let rank = ((next() % 512).min(next() % 512)) as usize;
            let start = out.len();
            out.extend_from_slice(&words[rank]);
            bounds.push((start, out.len()));
        }
        out.extend_from_slice(if next() % 16 == 0 { b".\n" } else { b" " });
    }
    out.truncate(len);
    out
}

#[test]
fn round_trip_megabyte_file() {
    let _g = SEQUENTIAL.lock().unwrap_or_else(|e| e.into_inner());
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("big.txt");
    let packed = dir.path().join("big.wlz");
    let restored = dir.path().join("big.out");
    let data = make_text(1 << 20, 0xC11);
    std::fs::write(&input, &data).unwrap();

    expect_ok(&run(&["compress", path_str(&input), path_str(&packed)]));
    let packed_len = std::fs::metadata(&packed).unwrap().len();
    assert!(
        packed_len < data.len() as u64 / 2,
        "repetitive text must compress below half, got {packed_len}"
    );
    expect_ok(&run(&["decompress", path_str(&packed), path_str(&restored)]));
    assert_eq!(std::fs::read(&restored).unwrap(), data);
}

#[test]
fn empty_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty");
    let packed = dir.path().join("empty.wlz");
    let restored = dir.path().join("empty.out");
    std::fs::write(&input, b"").unwrap();

    expect_ok(&run(&["compress", path_str(&input), path_str(&packed)]));
    assert!(std::fs::metadata(&packed).unwrap().len() < 32, "empty container is header-sized");
    expect_ok(&run(&["decompress", path_str(&packed), path_str(&restored)]));
    assert_eq!(std::fs::read(&restored).unwrap(), b"");
}

#[test]
fn damaged_containers_are_rejected_with_a_reason() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("doc.txt");
    let packed = dir.path().join("doc.wlz");
    std::fs::write(&input, make_text(64 << 10, 0xBAD)).unwrap();
    expect_ok(&run(&["compress", path_str(&input), path_str(&packed)]));

    let whole = std::fs::read(&packed).unwrap();
    let cut = dir.path().join("cut.wlz");
    std::fs::write(&cut, &whole[..whole.len() * 3 / 5]).unwrap();
    let out = run(&["decompress", path_str(&cut), path_str(&dir.path().join("cut.out"))]);
    assert!(!out.status.success(), "truncated container must be rejected");
    let stderr = String::from_utf8_lossy(&out.stderr).to_lowercase();
    assert!(
        stderr.contains("truncated") || stderr.contains("corrupt"),
        "stderr must say why: {stderr}"
    );

    let out = run(&["decompress", path_str(&input), path_str(&dir.path().join("not.out"))]);
    assert!(!out.status.success(), "plain text is not a container");
    let stderr = String::from_utf8_lossy(&out.stderr).to_lowercase();
    assert!(stderr.contains("corrupt"), "stderr must say why: {stderr}");
}

#[test]
fn fetch_reports_expected_paths_on_empty_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wlz"))
        .args(["fetch"])
        .env("WLZ_CORPUS_DIR", dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success(), "empty cache is an error");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bible.txt") && stderr.contains("4047392"), "stderr: {stderr}");
}

fn parse_csv(stdout: &[u8]) -> Vec<std::collections::HashMap<String, String>> {
    let mut reader = csv::Reader::from_reader(stdout);
    let headers = reader.headers().unwrap().clone();
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            headers.iter().map(String::from).zip(r.iter().map(String::from)).collect()
        })
        .collect()
}

#[test]
fn coder_bench_csv_is_internally_consistent() {
    let _g = SEQUENTIAL.lock().unwrap_or_else(|e| e.into_inner());
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bench.txt");
    let len = 256 << 10;
    std::fs::write(&input, make_text(len, 0xC0DE5)).unwrap();

    let out = run(&["bench-coders", path_str(&input), "--window-log2", "18"]);
    expect_ok(&out);
    let rows = parse_csv(&out.stdout);
    assert_eq!(rows.len(), 8, "4 variants x direct/adaptive");
    let mut ratios = std::collections::HashMap::new();
    for row in &rows {
        assert_eq!(row["input"], "bench.txt");
        assert_eq!(row["original_bytes"], len.to_string());
        let compressed: f64 = row["compressed_bytes"].parse().unwrap();
        let ratio: f64 = row["ratio_pct"].parse().unwrap();
        assert!((ratio - 100.0 * compressed / len as f64).abs() < 0.01, "ratio column drifted");
        assert!(row["time_ms"].parse::<f64>().unwrap() > 0.0);
        ratios.insert(row["config"].clone(), ratio);
    }
    for variant in ["lz77", "lzss", "lzss-lazy", "lzss-shortest"] {
        assert!(
            ratios[&format!("{variant}+adaptive")] < ratios[&format!("{variant}+direct")],
            "adaptive coders must beat direct fields for {variant}"
        );
    }
}

#[test]
fn structure_bench_reflects_chain_quality() {
    let _g = SEQUENTIAL.lock().unwrap_or_else(|e| e.into_inner());
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bench.txt");
    std::fs::write(&input, make_text(1 << 20, 0x57A7)).unwrap();

    let out = run(&["bench-structures", path_str(&input), "--window-log2", "18"]);
    expect_ok(&out);
    let rows = parse_csv(&out.stdout);
    assert_eq!(rows.len(), 10, "one row per structure");
    let mut time = std::collections::HashMap::new();
    let mut ratio = std::collections::HashMap::new();
    for row in &rows {
        assert!(row["ratio_pct"].parse::<f64>().unwrap() < 100.0);
        time.insert(row["config"].clone(), row["time_ms"].parse::<f64>().unwrap());
        ratio.insert(row["config"].clone(), row["ratio_pct"].parse::<f64>().unwrap());
    }
    // chains that pre-match four symbols are shorter and better-targeted
    // than single-symbol chains under the same candidate budget
    assert!(time["ht4"] < time["ht1"], "ht4 {:?} vs ht1 {:?}", time["ht4"], time["ht1"]);
    assert!(ratio["ht4"] <= ratio["ht1"], "ht4 finds at least as good matches");
}

#[test]
fn sweep_marks_exactly_one_best_cell() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bench.txt");
    std::fs::write(&input, make_text(96 << 10, 0x5EE9)).unwrap();

    let out = run(&["bench-sweep", path_str(&input), "--window-log2", "16"]);
    expect_ok(&out);
    let rows = parse_csv(&out.stdout);
    assert_eq!(rows.len(), 12, "4 variants x 3 coder families");
    let starred: Vec<_> = rows.iter().filter(|r| r["best"] == "*").collect();
    assert_eq!(starred.len(), 1, "exactly one best cell");
    let best_ratio: f64 = starred[0]["ratio_pct"].parse().unwrap();
    for row in &rows {
        assert!(best_ratio <= row["ratio_pct"].parse::<f64>().unwrap() + 1e-9);
    }
}
