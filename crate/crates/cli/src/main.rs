//! `liftcodec`: encode, decode, verify, sweep and synthesize phantoms.

mod sweep;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use liftcodec::codec::DEFAULT_SPATIAL_LEVELS;
use liftcodec::metrics::QualityReport;
use liftcodec::volume::{self, write_pgm, PhantomObject, Shape, DEFAULT_BIT_DEPTH};
use liftcodec::{
    analyze_sequence, decode_sequence, encode_subbands, load_raw, save_raw, synthesize_phantom,
    CodecConfig, Decoded, DenoiseConfig, DenoiseKind, Frame, Layers, LiftingMode, MotionConfig,
    PhantomSpec, Real, Sequence, Xi,
};

#[derive(Parser)]
#[command(name = "liftcodec", version, about = "Lossless scalable coding of 12-bit frame sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a raw sequence into a WLPC stream.
    Encode(EncodeArgs),
    /// Decode a WLPC stream to raw frames.
    Decode(DecodeArgs),
    /// Encode, decode and compare in one process.
    Verify(VerifyArgs),
    /// Run a grid of configurations and write a CSV of sizes and LP quality.
    Sweep(sweep::SweepArgs),
    /// Generate a synthetic phantom sequence.
    Synth(SynthArgs),
}

/// Headerless raw input: little-endian u16 samples, frames back to back.
#[derive(Args, Clone)]
struct RawArgs {
    #[arg(long)]
    width: usize,
    #[arg(long)]
    height: usize,
    #[arg(long)]
    frames: usize,
    #[arg(long, default_value_t = DEFAULT_BIT_DEPTH)]
    bit_depth: u8,
}

#[derive(Args, Clone)]
struct CodecArgs {
    #[arg(long, default_value = "MCTF", value_parser = parse_mode)]
    mode: LiftingMode,
    #[arg(long, default_value = "identity", value_parser = parse_filter)]
    filter: DenoiseKind,
    /// Noise parameter, an integer or a fraction such as `3/2`.
    #[arg(long, default_value = "0", value_parser = parse_xi)]
    xi: Xi,
    #[arg(long, default_value_t = MotionConfig::default().grid_size)]
    grid_size: usize,
    #[arg(long, default_value_t = MotionConfig::default().search_range)]
    search_range: usize,
    #[arg(long, default_value_t = DEFAULT_SPATIAL_LEVELS)]
    levels: u8,
}

impl CodecArgs {
    fn config(&self) -> CodecConfig {
        let motion = MotionConfig {
            grid_size: self.grid_size,
            search_range: self.search_range,
        };
        let mut cfg = CodecConfig::new(self.mode, DenoiseConfig::new(self.filter, self.xi), motion);
        cfg.spatial_levels = self.levels;
        cfg
    }
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    output: PathBuf,
    #[command(flatten)]
    raw: RawArgs,
    #[command(flatten)]
    codec: CodecArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LayerChoice {
    /// Base layer only: the LP frames.
    Bl,
    /// Base plus enhancement layer: the original frames.
    Full,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "full")]
    layers: LayerChoice,
    /// Also write every output frame as a 16-bit PGM into this directory.
    #[arg(long)]
    pgm: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[command(flatten)]
    raw: RawArgs,
    #[command(flatten)]
    codec: CodecArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Preset {
    /// No objects, background and noise only.
    None,
    /// Flat body with high-contrast moving disks.
    Heart,
    /// Low-contrast static speckle with a textured moving chamber.
    Textured,
}

#[derive(Args, Clone)]
pub(crate) struct PhantomArgs {
    #[arg(long, default_value_t = 64)]
    pub width: usize,
    #[arg(long, default_value_t = 64)]
    pub height: usize,
    #[arg(long, default_value_t = 10)]
    pub frames: usize,
    #[arg(long, value_enum, default_value = "heart")]
    pub preset: Preset,
    /// Speed of the preset's moving objects in pixels per frame.
    #[arg(long, default_value_t = 2)]
    pub speed: i64,
    #[arg(long)]
    pub background: Option<i64>,
    /// Extra disk `cx,cy,radius,intensity[,vx,vy]`; repeatable.
    #[arg(long = "disk", value_parser = parse_disk)]
    pub disks: Vec<PhantomObject>,
    /// Extra rectangle `x,y,width,height,intensity[,vx,vy]`; repeatable.
    #[arg(long = "rect", value_parser = parse_rect)]
    pub rects: Vec<PhantomObject>,
    #[arg(long, default_value_t = 0.0)]
    pub noise_sigma: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl PhantomArgs {
    pub fn spec(&self) -> PhantomSpec {
        let (w, h, t, v) = (self.width, self.height, self.frames, self.speed);
        let mut spec = match self.preset {
            Preset::None => PhantomSpec {
                objects: Vec::new(),
                ..PhantomSpec::moving_heart(w, h, t, v)
            },
            Preset::Heart => PhantomSpec::moving_heart(w, h, t, v),
            Preset::Textured => PhantomSpec::textured_heart(w, h, t, v),
        };
        if let Some(bg) = self.background {
            spec.background = bg;
        }
        spec.objects.extend(self.disks.iter().chain(&self.rects).copied());
        spec.with_noise(self.noise_sigma, self.seed)
    }
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, short)]
    output: PathBuf,
    #[command(flatten)]
    phantom: PhantomArgs,
    /// Also write every frame as a 16-bit PGM into this directory.
    #[arg(long)]
    pgm: Option<PathBuf>,
}

pub(crate) fn parse_mode(s: &str) -> Result<LiftingMode, String> {
    s.parse().map_err(|e: liftcodec::Error| e.to_string())
}

pub(crate) fn parse_filter(s: &str) -> Result<DenoiseKind, String> {
    s.parse().map_err(|e: liftcodec::Error| e.to_string())
}

pub(crate) fn parse_xi(s: &str) -> Result<Xi, String> {
    let xi: Xi = s.trim().parse().map_err(|_| format!("invalid xi `{s}`"))?;
    if *xi.denom() == 0 {
        return Err(format!("invalid xi `{s}`"));
    }
    Ok(xi)
}

fn parse_ints(s: &str, min: usize, names: &str) -> Result<Vec<i64>, String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("`{s}`: {e}"))?;
    if v.len() != min && v.len() != min + 2 {
        return Err(format!("expected {names}[,vx,vy], got `{s}`"));
    }
    Ok(v)
}

fn velocity(v: &[i64], at: usize) -> (i64, i64) {
    if v.len() > at {
        (v[at], v[at + 1])
    } else {
        (0, 0)
    }
}

fn parse_disk(s: &str) -> Result<PhantomObject, String> {
    let v = parse_ints(s, 4, "cx,cy,radius,intensity")?;
    Ok(PhantomObject {
        shape: Shape::Disk {
            cx: v[0],
            cy: v[1],
            radius: v[2],
        },
        intensity: v[3],
        velocity: velocity(&v, 4),
    })
}

fn parse_rect(s: &str) -> Result<PhantomObject, String> {
    let v = parse_ints(s, 5, "x,y,width,height,intensity")?;
    Ok(PhantomObject {
        shape: Shape::Rect {
            x: v[0],
            y: v[1],
            width: v[2],
            height: v[3],
        },
        intensity: v[4],
        velocity: velocity(&v, 5),
    })
}

fn load(path: &Path, raw: &RawArgs) -> Result<Sequence> {
    load_raw(path, raw.width, raw.height, raw.frames, raw.bit_depth)
        .with_context(|| format!("reading {}", path.display()))
}

fn write_pgms(frames: &[Frame], bit_depth: u8, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (t, f) in frames.iter().enumerate() {
        write_pgm(f, bit_depth, dir.join(format!("frame_{t:04}.pgm")))?;
    }
    Ok(())
}

fn cmd_encode(args: &EncodeArgs) -> Result<()> {
    let seq = load(&args.input, &args.raw)?;
    let enc = liftcodec::encode_sequence(&seq, &args.codec.config())?;
    fs::write(&args.output, &enc.bytes).with_context(|| format!("writing {}", args.output.display()))?;
    let s = enc.sizes;
    println!(
        "total_bytes={} lp_bytes={} hp_bytes={} mv_bytes={} header_bytes={}",
        s.total(),
        s.lp_bytes,
        s.hp_bytes,
        s.mv_bytes,
        s.header_bytes
    );
    Ok(())
}

fn cmd_decode(args: &DecodeArgs) -> Result<()> {
    let bytes = fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let header = liftcodec::BitstreamHeader::parse(&bytes)?;
    let layers = match args.layers {
        LayerChoice::Bl => Layers::BaseOnly,
        LayerChoice::Full => Layers::BasePlusEnhancement,
    };
    let seq = match decode_sequence(&bytes, layers)? {
        Decoded::Full(seq) => seq,
        Decoded::Base(lps) => {
            // LP samples may overshoot the sample range slightly.
            let max = volume::max_sample(header.bit_depth);
            let frames = lps.into_iter().map(|f| f.map(|s| s.clamp(0, max))).collect();
            Sequence::new(frames, header.bit_depth)?
        }
    };
    save_raw(&seq, &args.output).with_context(|| format!("writing {}", args.output.display()))?;
    if let Some(dir) = &args.pgm {
        write_pgms(seq.frames(), seq.bit_depth(), dir)?;
    }
    println!("frames={} width={} height={}", seq.len(), seq.width(), seq.height());
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let seq = load(&args.input, &args.raw)?;
    let cfg = args.codec.config();
    let pairs = analyze_sequence(&seq, &cfg.lifting)?;
    let quality = QualityReport::<Real>::evaluate(pairs.iter().map(|p| &p.lp), seq.frames(), seq.max_value())?;
    let enc = encode_subbands(&cfg.header_for(&seq)?, &pairs)?;
    let s = enc.sizes;
    println!(
        "total_bytes={} lp_bytes={} hp_bytes={} mv_bytes={} header_bytes={}",
        s.total(),
        s.lp_bytes,
        s.hp_bytes,
        s.mv_bytes,
        s.header_bytes
    );
    println!("psnr_lp_db={} ssim_lp={}", quality.psnr_lp, quality.ssim_lp);
    match decode_sequence(&enc.bytes, Layers::BasePlusEnhancement)? {
        Decoded::Full(out) if out == seq => {
            println!("lossless: yes");
            Ok(())
        }
        Decoded::Full(out) => {
            let first = seq
                .frames()
                .iter()
                .zip(out.frames())
                .enumerate()
                .find_map(|(t, (a, b))| {
                    a.samples()
                        .iter()
                        .zip(b.samples())
                        .position(|(x, y)| x != y)
                        .map(|i| (t, i))
                });
            match first {
                Some((t, i)) => bail!("reconstruction differs at frame {t}, sample {i}"),
                None => bail!("reconstruction differs in shape"),
            }
        }
        Decoded::Base(_) => bail!("full decode returned only the base layer"),
    }
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let spec = args.phantom.spec();
    let seq = synthesize_phantom(&spec)?;
    save_raw(&seq, &args.output).with_context(|| format!("writing {}", args.output.display()))?;
    if let Some(dir) = &args.pgm {
        write_pgms(seq.frames(), seq.bit_depth(), dir)?;
    }
    println!(
        "frames={} width={} height={} noise_sigma={}",
        seq.len(),
        seq.width(),
        seq.height(),
        spec.noise_sigma
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
