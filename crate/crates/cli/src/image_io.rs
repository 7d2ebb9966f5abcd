//! Image and frame-directory I/O.
//!
//! Images load as `height x width x 3` tensors on the 0..255 scale, one
//! frontal slice per RGB channel. Frame directories load as gray-level
//! `height x width x frames` tensors.

use std::fs;
use std::path::{Path, PathBuf};

use ftrpca_core::{GrayImage, Tensor3};
use image::{ImageFormat, Rgb, RgbImage};

use crate::error::{CliError, Result};

const EXTENSIONS: [&str; 5] = ["png", "ppm", "pgm", "pnm", "pbm"];

fn format_for(path: &Path) -> Result<ImageFormat> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    match ext.as_str() {
        "png" => Ok(ImageFormat::Png),
        "ppm" | "pgm" | "pnm" | "pbm" => Ok(ImageFormat::Pnm),
        _ => Err(CliError::UnsupportedFormat(path.display().to_string())),
    }
}

fn map_image_err(path: &Path, e: image::ImageError) -> CliError {
    match e {
        image::ImageError::IoError(io) => CliError::io(path, io),
        other => CliError::UnsupportedFormat(format!("{}: {other}", path.display())),
    }
}

fn read_rgb(path: &Path) -> Result<RgbImage> {
    let format = format_for(path)?;
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let img = image::load_from_memory_with_format(&bytes, format).map_err(|e| map_image_err(path, e))?;
    Ok(img.to_rgb8())
}

fn rgb_to_tensor(img: &RgbImage) -> Tensor3 {
    let (w, h) = img.dimensions();
    Tensor3::from_fn([h as usize, w as usize, 3], |r, c, k| {
        img.get_pixel(c as u32, r as u32)[k] as f64
    })
    .expect("8-bit pixels are finite")
}

/// RGB image as an `H x W x 3` tensor. Gray inputs give three equal slices.
pub fn load_image(path: impl AsRef<Path>) -> Result<Tensor3> {
    Ok(rgb_to_tensor(&read_rgb(path.as_ref())?))
}

fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Writes an `H x W x 3` (RGB) or `H x W x 1` (gray) tensor, rounding and
/// clamping to 8 bits.
pub fn save_image(t: &Tensor3, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let format = format_for(path)?;
    let [h, w, ch] = t.dims();
    let img = match ch {
        3 => RgbImage::from_fn(w as u32, h as u32, |c, r| {
            let px = |k| to_u8(t.get(r as usize, c as usize, k));
            Rgb([px(0), px(1), px(2)])
        }),
        1 => RgbImage::from_fn(w as u32, h as u32, |c, r| {
            let v = to_u8(t.get(r as usize, c as usize, 0));
            Rgb([v, v, v])
        }),
        _ => {
            return Err(CliError::UnsupportedFormat(format!(
                "cannot write a {ch}-channel tensor as an image"
            )))
        }
    };
    let mut bytes = std::io::Cursor::new(Vec::new());
    if ch == 1 {
        image::DynamicImage::ImageRgb8(img)
            .to_luma8()
            .write_to(&mut bytes, format)
    } else {
        img.write_to(&mut bytes, format)
    }
    .map_err(|e| map_image_err(path, e))?;
    fs::write(path, bytes.into_inner()).map_err(|e| CliError::io(path, e))
}

pub fn save_gray(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    save_image(&img.to_tensor(), path)
}

/// Image files in `dir` sorted by file name.
pub fn frame_paths(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
        })
        .collect();
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if paths.is_empty() {
        return Err(CliError::EmptyDirectory(dir.to_path_buf()));
    }
    Ok(paths)
}

/// Gray-level video: frame `k` (lexicographic order) becomes frontal slice
/// `k`, converted with BT.601 luminance.
pub fn load_frames(dir: impl AsRef<Path>) -> Result<Tensor3> {
    let paths = frame_paths(dir)?;
    let mut slices = Vec::with_capacity(paths.len());
    let mut expected = None;
    for path in &paths {
        let rgb = read_rgb(path)?;
        let found = rgb.dimensions();
        match expected {
            None => expected = Some(found),
            Some(e) if e != found => {
                return Err(CliError::InconsistentDims {
                    path: path.clone(),
                    expected: e,
                    found,
                })
            }
            _ => {}
        }
        let gray = GrayImage::from_tensor(&rgb_to_tensor(&rgb))?;
        slices.push(gray.to_tensor().into_vec());
    }
    let (w, h) = expected.expect("at least one frame");
    Ok(Tensor3::from_slices(h as usize, w as usize, &slices)?)
}

/// Writes each frontal slice of a gray video as `frame_0000.png`, ...
pub fn save_frames(video: &Tensor3, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    (0..video.dims()[2])
        .map(|k| {
            let path = dir.join(format!("frame_{k:04}.png"));
            save_gray(&GrayImage::from_frontal(video, k), &path)?;
            Ok(path)
        })
        .collect()
}
