//! `wlz`: compress and restore files with the word-based sliding-window
//! codec, and benchmark its structures and coder assignments.

mod bench;
mod corpus;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use wlz::codes::CoderKind;
use wlz::matchfinder::Structure;
use wlz::parser::Variant;
use wlz::CodecConfig;

#[derive(Parser)]
#[command(name = "wlz", version, about = "Word-based sliding-window text compressor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a file into a container
    Compress(CompressArgs),
    /// Restore the original bytes from a container
    Decompress {
        input: PathBuf,
        output: PathBuf,
    },
    /// Check the local benchmark corpus cache and say what is missing
    Fetch,
    /// Time every window structure on one input (CSV on stdout)
    BenchStructures(BenchArgs),
    /// Compare direct and adaptive coder assignments per parse variant (CSV)
    BenchCoders(BenchArgs),
    /// Sweep parse variants against coder families; `*` marks the best cell (CSV)
    BenchSweep(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Lz77,
    Lzss,
    LzssLazy,
    LzssShortest,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Lz77 => Variant::Lz77,
            VariantArg::Lzss => Variant::Lzss,
            VariantArg::LzssLazy => Variant::LzssLazy,
            VariantArg::LzssShortest => Variant::LzssShortest,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StructureArg {
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

impl From<StructureArg> for Structure {
    fn from(s: StructureArg) -> Self {
        match s {
            StructureArg::Bt => Structure::Bt,
            StructureArg::Bta => Structure::Bta,
            StructureArg::Bth => Structure::Bth,
            StructureArg::Ht1 => Structure::Ht1,
            StructureArg::Ht2 => Structure::Ht2,
            StructureArg::Ht3 => Structure::Ht3,
            StructureArg::Ht4 => Structure::Ht4,
            StructureArg::Pt => Structure::Pt,
            StructureArg::Pta => Structure::Pta,
            StructureArg::Pth => Structure::Pth,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CoderArg {
    Direct,
    Fibonacci,
    EliasGamma,
    EliasDelta,
    Bblock,
    AdaptiveHuffman,
}

impl From<CoderArg> for CoderKind {
    fn from(c: CoderArg) -> Self {
        match c {
            CoderArg::Direct => CoderKind::Direct,
            CoderArg::Fibonacci => CoderKind::Fibonacci,
            CoderArg::EliasGamma => CoderKind::EliasGamma,
            CoderArg::EliasDelta => CoderKind::EliasDelta,
            CoderArg::Bblock => CoderKind::BBlock,
            CoderArg::AdaptiveHuffman => CoderKind::AdaptiveHuffman,
        }
    }
}

#[derive(Args)]
struct CompressArgs {
    input: PathBuf,
    output: PathBuf,
    #[arg(long, value_enum, default_value = "lzss-lazy")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "pth")]
    structure: StructureArg,
    /// Window capacity as a power of two, in symbols
    #[arg(long, default_value_t = 20)]
    window_log2: u32,
    #[arg(long, default_value_t = 16)]
    max_match: usize,
    /// Defaults to the larger of the variant's and the structure's minimum
    #[arg(long)]
    min_match: Option<usize>,
    #[arg(long, value_enum, default_value = "bblock")]
    offset_coder: CoderArg,
    #[arg(long, value_enum, default_value = "adaptive-huffman")]
    length_coder: CoderArg,
    #[arg(long, value_enum, default_value = "adaptive-huffman")]
    literal_coder: CoderArg,
    /// Block-code base as a power of two; defaults per channel
    #[arg(long)]
    bblock_base_log2: Option<u32>,
    /// Hash table width in bits; defaults per structure
    #[arg(long)]
    table_bits: Option<u32>,
    /// Candidates examined per query; 0 removes the cap
    #[arg(long, default_value_t = 256)]
    chain_limit: usize,
}

impl CompressArgs {
    fn config(&self) -> CodecConfig {
        CodecConfig {
            variant: self.variant.into(),
            structure: self.structure.into(),
            window_log2: self.window_log2,
            max_match: self.max_match,
            min_match: self.min_match,
            offset_coder: self.offset_coder.into(),
            length_coder: self.length_coder.into(),
            literal_coder: self.literal_coder.into(),
            bblock_base_log2: self.bblock_base_log2,
            table_bits: self.table_bits,
            chain_limit: if self.chain_limit == 0 { None } else { Some(self.chain_limit) },
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    input: PathBuf,
    /// Window capacity as a power of two, in symbols
    #[arg(long, default_value_t = 20)]
    window_log2: u32,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

fn input_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Compress(args) => {
            let input = read(&args.input)?;
            let packed = wlz::compress(&input, &args.config())
                .with_context(|| format!("cannot compress {}", args.input.display()))?;
            write(&args.output, &packed)?;
            eprintln!(
                "{} -> {}: {} -> {} bytes ({:.2}%)",
                args.input.display(),
                args.output.display(),
                input.len(),
                packed.len(),
                100.0 * packed.len() as f64 / input.len().max(1) as f64
            );
        }
        Command::Decompress { input, output } => {
            let container = read(&input)?;
            let restored = wlz::decompress(&container)
                .with_context(|| format!("cannot decompress {}", input.display()))?;
            write(&output, &restored)?;
            eprintln!("{} -> {}: {} bytes restored", input.display(), output.display(), restored.len());
        }
        Command::Fetch => corpus::verify()?,
        Command::BenchStructures(args) => {
            let input = read(&args.input)?;
            bench::structures(
                &mut std::io::stdout().lock(),
                &input_name(&args.input),
                &input,
                args.window_log2,
            )?;
        }
        Command::BenchCoders(args) => {
            let input = read(&args.input)?;
            bench::coders(
                &mut std::io::stdout().lock(),
                &input_name(&args.input),
                &input,
                args.window_log2,
            )?;
        }
        Command::BenchSweep(args) => {
            let input = read(&args.input)?;
            bench::sweep(
                &mut std::io::stdout().lock(),
                &input_name(&args.input),
                &input,
                args.window_log2,
            )?;
        }
    }
    Ok(())
}
