//! Subcommand definitions and drivers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ftrpca_core::filter::{band_norm_profile, estimate_two_band_alpha, synthetic_ramp_filter, uniform_for};
use ftrpca_core::metrics::{psnr, rse, DEFAULT_ERROR_THRESHOLD};
use ftrpca_core::solver::{rtpca, SolverConfig, SolverResult};
use ftrpca_core::synth::{add_sparse_noise, phantom3d, synth_video, NoiseSpec};
use ftrpca_core::tensor::band_count;
use ftrpca_core::{FilterVector, GrayImage, MetricsReport, Tensor3};

use crate::error::{CliError, Result};
use crate::filter_spec::parse_filter;
use crate::image_io::{load_frames, load_image, save_frames, save_gray, save_image};
use crate::manifest::{RunManifest, SolveRecord};
use crate::tensor_file::{load_tensor, save_tensor};

#[derive(Debug, Parser)]
#[command(name = "ftrpca", version, about = "Frequency-filtered tensor robust PCA")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shepp-Logan phantom slab with sparse corruption.
    SynthPhantom(SynthPhantomArgs),
    /// Static background with a moving square, written as PNG frames.
    SynthVideo(SynthVideoArgs),
    /// Solve X = L + E for a tensor file.
    Rtpca(RtpcaArgs),
    /// Corrupt a color image, recover it with the two-band filter and report metrics.
    DenoiseImage(DenoiseImageArgs),
    /// Extract a static background from a directory of frames.
    Background(BackgroundArgs),
    /// Nuclear norm of every frequency band, as CSV.
    Spectrum(SpectrumArgs),
    /// Recovery metrics between two images.
    Metrics(MetricsArgs),
    /// Filtered versus uniform solve on the same corrupted tensor.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Sparsity weight [default: 1/sqrt(max(I1, I2) I3)]
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = SolverConfig::DEFAULT_MU0)]
    pub mu0: f64,
    #[arg(long, default_value_t = SolverConfig::DEFAULT_RHO)]
    pub rho: f64,
    #[arg(long, default_value_t = SolverConfig::DEFAULT_MU_MAX)]
    pub mu_max: f64,
    #[arg(long, default_value_t = SolverConfig::DEFAULT_EPS)]
    pub eps: f64,
    #[arg(long, default_value_t = SolverConfig::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

impl SolverArgs {
    pub fn config(&self, dims: [usize; 3], alpha: FilterVector) -> SolverConfig {
        let mut cfg = SolverConfig::new(dims, alpha);
        if let Some(lambda) = self.lambda {
            cfg.lambda = lambda;
        }
        cfg.mu0 = self.mu0;
        cfg.rho = self.rho;
        cfg.mu_max = self.mu_max;
        cfg.eps = self.eps;
        cfg.max_iter = self.max_iter;
        cfg
    }
}

#[derive(Debug, Args)]
pub struct SynthPhantomArgs {
    #[arg(long, default_value_t = 200)]
    pub size: usize,
    #[arg(long, default_value_t = 21)]
    pub frames: usize,
    /// Fraction of corrupted entries.
    #[arg(long, default_value_t = 0.3)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Corrupted tensor.
    #[arg(long)]
    pub out: PathBuf,
    /// Clean phantom.
    #[arg(long)]
    pub out_clean: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthVideoArgs {
    #[arg(long, default_value_t = 160)]
    pub width: usize,
    #[arg(long, default_value_t = 120)]
    pub height: usize,
    #[arg(long, default_value_t = 40)]
    pub frames: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `frame_NNNN.png`.
    #[arg(long)]
    pub out: PathBuf,
    /// True background image.
    #[arg(long)]
    pub out_bg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RtpcaArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// uniform | ramp11 | denoise:R | background | csv:PATH
    #[arg(long, default_value = "uniform")]
    pub filter: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out_l: PathBuf,
    #[arg(long)]
    pub out_e: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DenoiseImageArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.2)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Filter string [default: denoise:<noise>]
    #[arg(long)]
    pub filter: Option<String>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out_clean: PathBuf,
    #[arg(long)]
    pub out_noisy: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BackgroundArgs {
    #[arg(long)]
    pub frames: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Ground-truth background, for AGE / pEPs / pCEPs / MS-SSIM.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ERROR_THRESHOLD)]
    pub threshold: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Reference image or `.ft3d` with 1 or 3 slices.
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ERROR_THRESHOLD)]
    pub threshold: f64,
    /// Also write the CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    /// Filter for the filtered solve. `auto` picks ramp11 for 11 bands and a
    /// two-band filter estimated from the truth for 2 bands.
    #[arg(long, default_value = "auto")]
    pub filter: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Also write the table here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs one parsed command. `args` is recorded verbatim in the manifest.
pub fn run(cli: Cli, args: Vec<String>) -> Result<()> {
    match cli.command {
        Command::SynthPhantom(a) => synth_phantom_cmd(a, args),
        Command::SynthVideo(a) => synth_video_cmd(a, args),
        Command::Rtpca(a) => rtpca_cmd(a, args),
        Command::DenoiseImage(a) => denoise_image_cmd(a, args),
        Command::Background(a) => background_cmd(a, args),
        Command::Spectrum(a) => spectrum_cmd(a, args),
        Command::Metrics(a) => metrics_cmd(a, args),
        Command::Compare(a) => compare_cmd(a, args),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn solve(
    label: &str,
    x: &Tensor3,
    cfg: &SolverConfig,
    manifest: &mut RunManifest,
) -> Result<SolverResult> {
    let (result, seconds) = timed(|| rtpca(x, cfg));
    let result = result?;
    manifest.solves.push(SolveRecord::new(label, cfg, &result, seconds));
    manifest.time(label, seconds);
    Ok(result)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn synth_phantom_cmd(a: SynthPhantomArgs, args: Vec<String>) -> Result<()> {
    let mut manifest = RunManifest::new("synth-phantom", args);
    manifest.seed = Some(a.seed);
    let clean = phantom3d(a.size, a.frames)?;
    let noisy = add_sparse_noise(&clean, &NoiseSpec::new(a.noise, a.seed))?;
    save_tensor(&noisy, &a.out)?;
    manifest.add_output(&a.out)?;
    if let Some(path) = &a.out_clean {
        save_tensor(&clean, path)?;
        manifest.add_output(path)?;
    }
    manifest.write_beside(&a.out)?;
    Ok(())
}

fn synth_video_cmd(a: SynthVideoArgs, args: Vec<String>) -> Result<()> {
    let mut manifest = RunManifest::new("synth-video", args);
    manifest.seed = Some(a.seed);
    let clip = synth_video(a.width, a.height, a.frames, a.seed)?;
    save_frames(&clip.video, &a.out)?;
    manifest.add_output(&a.out)?;
    if let Some(path) = &a.out_bg {
        save_image(&clip.background, path)?;
        manifest.add_output(path)?;
    }
    manifest.write_beside(&a.out)?;
    Ok(())
}

fn rtpca_cmd(a: RtpcaArgs, args: Vec<String>) -> Result<()> {
    let mut manifest = RunManifest::new("rtpca", args);
    let x = load_tensor(&a.input)?;
    manifest.add_input(&a.input)?;
    let cfg = a.solver.config(x.dims(), parse_filter(&a.filter, x.dims()[2])?);
    let r = solve("rtpca", &x, &cfg, &mut manifest)?;
    save_tensor(&r.low_rank, &a.out_l)?;
    manifest.add_output(&a.out_l)?;
    if let Some(path) = &a.out_e {
        save_tensor(&r.sparse, path)?;
        manifest.add_output(path)?;
    }
    manifest.write_beside(&a.out_l)?;
    println!(
        "iterations={} converged={} svd_calls={} seconds={:.3}",
        r.iterations, r.converged, r.svd_calls, manifest.timings["rtpca"]
    );
    Ok(())
}

fn denoise_image_cmd(a: DenoiseImageArgs, args: Vec<String>) -> Result<()> {
    let mut manifest = RunManifest::new("denoise-image", args);
    manifest.seed = Some(a.seed);
    let clean = load_image(&a.input)?;
    manifest.add_input(&a.input)?;
    let noisy = add_sparse_noise(&clean, &NoiseSpec::new(a.noise, a.seed))?;
    let spec = a.filter.clone().unwrap_or_else(|| format!("denoise:{}", a.noise));
    let cfg = a.solver.config(noisy.dims(), parse_filter(&spec, noisy.dims()[2])?);
    let r = solve("rtpca", &noisy, &cfg, &mut manifest)?;
    let recovered = r.low_rank.map(|v| v.clamp(0.0, 255.0));

    save_image(&recovered, &a.out_clean)?;
    manifest.add_output(&a.out_clean)?;
    if let Some(path) = &a.out_noisy {
        save_image(&noisy, path)?;
        manifest.add_output(path)?;
    }
    manifest.write_beside(&a.out_clean)?;

    println!("image,psnr,rse");
    println!("noisy,{:.4},{:.6}", psnr(&clean, &noisy)?, rse(&clean, &noisy)?);
    println!("recovered,{:.4},{:.6}", psnr(&clean, &recovered)?, rse(&clean, &recovered)?);
    Ok(())
}

fn background_cmd(a: BackgroundArgs, args: Vec<String>) -> Result<()> {
    let mut manifest = RunManifest::new("background", args);
    let video = load_frames(&a.frames)?;
    manifest.add_input(&a.frames)?;
    let alpha = parse_filter("background", video.dims()[2])?;
    let cfg = a.solver.config(video.dims(), alpha);
    let r = solve("rtpca", &video, &cfg, &mut manifest)?;
    let background = GrayImage::from_frontal(&r.low_rank, 0);
    save_gray(&background, &a.out)?;
    manifest.add_output(&a.out)?;
    if let Some(truth) = &a.truth {
        manifest.add_input(truth)?;
    }
    manifest.write_beside(&a.out)?;

    println!(
        "svd_calls={} iterations={} seconds={:.3}",
        r.svd_calls, r.iterations, manifest.timings["rtpca"]
    );
    if let Some(truth) = &a.truth {
        let truth = GrayImage::from_tensor(&load_image(truth)?)?;
        print!("{}", metrics_csv(&MetricsReport::compute(&truth, &background, a.threshold)?));
    }
    Ok(())
}

/// CSV body of the `spectrum` command: 1-based band numbers.
pub fn spectrum_csv(x: &Tensor3) -> Result<String> {
    let profile = band_norm_profile(x)?;
    let mut out = String::from("band,nuclear_norm\n");
    for (j, n) in profile.norms.iter().enumerate() {
        out.push_str(&format!("{},{}\n", j + 1, n));
    }
    Ok(out)
}

fn spectrum_cmd(a: SpectrumArgs, args: Vec<String>) -> Result<()> {
    let mut manifest = RunManifest::new("spectrum", args);
    let x = load_tensor(&a.input)?;
    manifest.add_input(&a.input)?;
    write_text(&a.out, &spectrum_csv(&x)?)?;
    manifest.add_output(&a.out)?;
    manifest.write_beside(&a.out)?;
    Ok(())
}

pub fn metrics_csv(m: &MetricsReport) -> String {
    format!(
        "psnr,rse,age,peps,pceps,msssim\n{},{},{},{},{},{}\n",
        m.psnr, m.rse, m.age, m.peps, m.pceps, m.msssim
    )
}

fn load_gray(path: &Path) -> Result<GrayImage> {
    let is_tensor = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("ft3d"));
    let t = if is_tensor { load_tensor(path)? } else { load_image(path)? };
    Ok(GrayImage::from_tensor(&t)?)
}

fn metrics_cmd(a: MetricsArgs, args: Vec<String>) -> Result<()> {
    let reference = load_gray(&a.reference)?;
    let test = load_gray(&a.test)?;
    let csv = metrics_csv(&MetricsReport::compute(&reference, &test, a.threshold)?);
    print!("{csv}");
    if let Some(out) = &a.out {
        let mut manifest = RunManifest::new("metrics", args);
        manifest.add_input(&a.reference)?;
        manifest.add_input(&a.test)?;
        write_text(out, &csv)?;
        manifest.add_output(out)?;
        manifest.write_beside(out)?;
    }
    Ok(())
}

fn auto_filter(x: &Tensor3, truth: &Tensor3) -> Result<FilterVector> {
    match band_count(x.dims()[2])? {
        11 => Ok(synthetic_ramp_filter()),
        2 => {
            let a1 = estimate_two_band_alpha(&band_norm_profile(truth)?, &band_norm_profile(x)?)?;
            Ok(FilterVector::new(vec![a1, 1.0])?)
        }
        n => Err(CliError::FilterSpec(format!(
            "auto has no default for {n} bands; pass --filter"
        ))),
    }
}

/// Table with one row per index and one column per method.
pub fn compare_table(tnn: (f64, f64), ftnn: (f64, f64)) -> String {
    format!(
        "index,TNN,FTNN\nPSNR,{:.4},{:.4}\nRSE,{:.6},{:.6}\n",
        tnn.0, ftnn.0, tnn.1, ftnn.1
    )
}

fn compare_cmd(a: CompareArgs, args: Vec<String>) -> Result<()> {
    let mut manifest = RunManifest::new("compare", args);
    let x = load_tensor(&a.input)?;
    let truth = load_tensor(&a.truth)?;
    manifest.add_input(&a.input)?;
    manifest.add_input(&a.truth)?;
    if x.dims() != truth.dims() {
        return Err(ftrpca_core::Error::DimensionMismatch(format!(
            "input {:?} vs truth {:?}",
            x.dims(),
            truth.dims()
        ))
        .into());
    }
    let i3 = x.dims()[2];
    let alpha = if a.filter == "auto" {
        auto_filter(&x, &truth)?
    } else {
        parse_filter(&a.filter, i3)?
    };

    let ftnn = solve("ftnn", &x, &a.solver.config(x.dims(), alpha), &mut manifest)?;
    let tnn = solve("tnn", &x, &a.solver.config(x.dims(), uniform_for(i3)?), &mut manifest)?;
    let score = |r: &SolverResult| -> Result<(f64, f64)> {
        Ok((psnr(&truth, &r.low_rank)?, rse(&truth, &r.low_rank)?))
    };
    let table = compare_table(score(&tnn)?, score(&ftnn)?);
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(table.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))?;
    if let Some(out) = &a.out {
        write_text(out, &table)?;
        manifest.add_output(out)?;
        manifest.write_beside(out)?;
    }
    Ok(())
}
