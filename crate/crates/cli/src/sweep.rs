//! Rate-vs-quality sweeps over (mode, filter, xi).

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use liftcodec::metrics::{relative_delta_pct, QualityReport};
use liftcodec::volume::DEFAULT_BIT_DEPTH;
use liftcodec::{
    analyze_sequence, encode_subbands, load_raw, synthesize_phantom, CodecConfig, DenoiseConfig,
    DenoiseKind, LiftingMode, MotionConfig, Real, Sequence, Xi,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::{parse_filter, parse_mode, parse_xi, PhantomArgs};

#[derive(Args)]
pub struct SweepArgs {
    /// CSV output path.
    #[arg(long, short)]
    output: PathBuf,
    /// Raw input sequence; dimensions come from --width/--height/--frames.
    /// Without it a phantom is synthesized from the phantom flags.
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BIT_DEPTH)]
    bit_depth: u8,
    #[command(flatten)]
    phantom: PhantomArgs,
    #[arg(long, value_delimiter = ',', default_value = "WLDU,WLDUr,WLDP,WLDPU", value_parser = parse_mode)]
    modes: Vec<LiftingMode>,
    #[arg(long, value_delimiter = ',', default_value = "bm3d_simplified", value_parser = parse_filter)]
    filters: Vec<DenoiseKind>,
    /// Comma-separated values or inclusive integer ranges `a..b`.
    #[arg(long, default_value = "1..100")]
    xi: String,
    #[arg(long, default_value_t = MotionConfig::default().grid_size)]
    grid_size: usize,
    #[arg(long, default_value_t = MotionConfig::default().search_range)]
    search_range: usize,
    /// Worker threads; 0 uses all cores.
    #[arg(long, env = "LIFTCODEC_THREADS", default_value_t = 0)]
    threads: usize,
}

#[derive(Serialize)]
struct Row {
    mode: String,
    filter: String,
    xi: String,
    lp_bytes: usize,
    hp_bytes: usize,
    mv_bytes: usize,
    total_bytes: usize,
    psnr_lp_db: String,
    ssim_lp: Real,
    rel_delta_vs_mctf_pct: Real,
}

fn parse_xi_list(s: &str) -> Result<Vec<Xi>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (u16, u16) = (
                a.trim().parse().with_context(|| format!("range start in `{part}`"))?,
                b.trim().parse().with_context(|| format!("range end in `{part}`"))?,
            );
            if a > b {
                bail!("empty xi range `{part}`");
            }
            out.extend((a..=b).map(Xi::from_integer));
        } else {
            out.push(parse_xi(part).map_err(anyhow::Error::msg)?);
        }
    }
    if out.is_empty() {
        bail!("no xi values given");
    }
    Ok(out)
}

/// Configurations in output order. The MCTF baseline comes first and only
/// once; modes without a denoiser get a single identity row.
fn points(args: &SweepArgs, xis: &[Xi], motion: MotionConfig) -> Vec<CodecConfig> {
    let mut out = vec![CodecConfig::new(LiftingMode::Mctf, DenoiseConfig::identity(), motion)];
    for &mode in &args.modes {
        if mode == LiftingMode::Mctf {
            continue;
        }
        if !mode.uses_denoiser() {
            out.push(CodecConfig::new(mode, DenoiseConfig::identity(), motion));
            continue;
        }
        for &kind in &args.filters {
            for &xi in xis {
                out.push(CodecConfig::new(mode, DenoiseConfig::new(kind, xi), motion));
            }
        }
    }
    out
}

struct Measured {
    cfg: CodecConfig,
    lp: usize,
    hp: usize,
    mv: usize,
    total: usize,
    quality: QualityReport<Real>,
}

fn measure(seq: &Sequence, cfg: CodecConfig) -> Result<Measured> {
    let pairs = analyze_sequence(seq, &cfg.lifting)?;
    let quality = QualityReport::evaluate(pairs.iter().map(|p| &p.lp), seq.frames(), seq.max_value())?;
    let enc = encode_subbands(&cfg.header_for(seq)?, &pairs)?;
    let s = enc.sizes;
    Ok(Measured {
        cfg,
        lp: s.lp_bytes,
        hp: s.hp_bytes,
        mv: s.mv_bytes,
        total: s.total(),
        quality,
    })
}

pub fn run(args: &SweepArgs) -> Result<()> {
    if args.modes.is_empty() || args.filters.is_empty() {
        bail!("modes and filters must be non-empty");
    }
    let xis = parse_xi_list(&args.xi)?;
    let motion = MotionConfig {
        grid_size: args.grid_size,
        search_range: args.search_range,
    };
    motion.validate()?;
    let seq = match &args.input {
        Some(path) => {
            let p = &args.phantom;
            load_raw(path, p.width, p.height, p.frames, args.bit_depth)
                .with_context(|| format!("reading {}", path.display()))?
        }
        None => synthesize_phantom(&args.phantom.spec())?,
    };
    let configs = points(args, &xis, motion);

    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.threads).build()?;
    let measured: Vec<Measured> =
        pool.install(|| configs.into_par_iter().map(|c| measure(&seq, c)).collect::<Result<_>>())?;

    let base = measured[0].total as Real;
    let mut writer = csv::Writer::from_path(&args.output).with_context(|| format!("writing {}", args.output.display()))?;
    for m in &measured {
        let dn = m.cfg.lifting.denoise;
        writer.serialize(Row {
            mode: m.cfg.lifting.mode.to_string(),
            filter: dn.kind.to_string(),
            xi: dn.xi.to_string(),
            lp_bytes: m.lp,
            hp_bytes: m.hp,
            mv_bytes: m.mv,
            total_bytes: m.total,
            psnr_lp_db: m.quality.psnr_lp.to_string(),
            ssim_lp: m.quality.ssim_lp,
            rel_delta_vs_mctf_pct: relative_delta_pct(m.total as Real, base),
        })?;
    }
    writer.flush()?;
    println!("rows={} baseline_total_bytes={}", measured.len(), measured[0].total);
    Ok(())
}
