use std::fs;
use std::path::{Path, PathBuf};

use msis_core::codec::clear_tail_bits;
use msis_core::metrics::{analyze_share, QualityReport};
use msis_core::shareio::{self, LoadedImage};
use msis_core::{decode_group, derive_key, encode_batch, Error, GrayImage};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_IO: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }

    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    fn from_core(context: &Path, err: Error) -> Self {
        let code = match err {
            Error::DimensionMismatch { .. }
            | Error::EmptyInput
            | Error::GroupSize(_)
            | Error::LengthMismatch { .. }
            | Error::SideMismatch { .. }
            | Error::NotSquare { .. }
            | Error::InvalidImage(_)
            | Error::InvalidKey(_)
            | Error::InvalidPlane(_)
            | Error::EmptyStream => EXIT_VALIDATION,
            _ => EXIT_IO,
        };
        Self {
            code,
            message: format!("{}: {err}", context.display()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn load(path: &Path) -> Result<GrayImage, Failure> {
    let LoadedImage {
        image,
        converted_from_color,
    } = shareio::load_image(path).map_err(|e| Failure::from_core(path, e))?;
    if converted_from_color {
        eprintln!(
            "warning: {} is a color image; converted to luminance",
            path.display()
        );
    }
    Ok(image)
}

pub fn keygen(comparison: &Path) -> CmdResult {
    let image = load(comparison)?;
    println!("{}", derive_key(&image));
    Ok(())
}

pub fn encode(comparison: &Path, stem: &str, secret_paths: &[PathBuf]) -> CmdResult {
    let comparison_image = load(comparison)?;
    let secrets = secret_paths
        .iter()
        .map(|p| load(p))
        .collect::<Result<Vec<_>, _>>()?;

    if let Some((first, rest)) = secrets.split_first() {
        for (img, path) in rest.iter().zip(&secret_paths[1..]) {
            if img.dimensions() != first.dimensions() {
                return Err(Failure::validation(format!(
                    "{} is {}x{} but {} is {}x{}",
                    path.display(),
                    img.width(),
                    img.height(),
                    secret_paths[0].display(),
                    first.width(),
                    first.height()
                )));
            }
        }
        let clear = clear_tail_bits(&comparison_image, first.width(), first.height());
        if clear > 0 {
            eprintln!(
                "warning: comparison image covers only {} of {} pad bits; the last {clear} bits \
                 of every secret are sent in the clear",
                comparison_image.pixels().len() * 8,
                first.pixels().len() * 8,
            );
        }
    }

    let containers =
        encode_batch(&secrets, &comparison_image).map_err(|e| Failure::from_core(comparison, e))?;

    if let Some(parent) = Path::new(stem)
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
    {
        fs::create_dir_all(parent)
            .map_err(|e| Failure::io(format!("{}: {e}", parent.display())))?;
    }
    for (index, container) in containers.iter().enumerate() {
        let name = shareio::batch_file_name(stem, index);
        let path = Path::new(&name);
        let bytes =
            shareio::save_share(container, path).map_err(|e| Failure::from_core(path, e))?;
        println!(
            "{name}: {} secret(s) {}x{}, share {side}x{side}, {bytes} bytes",
            container.num_real(),
            container.secret_width(),
            container.secret_height(),
            side = container.share_side(),
        );
    }
    Ok(())
}

pub fn decode(comparison: &Path, shares: &[PathBuf], out_dir: &Path) -> CmdResult {
    let comparison_image = load(comparison)?;
    let containers = shares
        .iter()
        .map(|p| shareio::load_share(p).map_err(|e| Failure::from_core(p, e)))
        .collect::<Result<Vec<_>, _>>()?;

    fs::create_dir_all(out_dir).map_err(|e| Failure::io(format!("{}: {e}", out_dir.display())))?;
    for (group, (container, path)) in containers.iter().zip(shares).enumerate() {
        let decoded =
            decode_group(container, &comparison_image).map_err(|e| Failure::from_core(path, e))?;
        for (index, image) in decoded.real_images().iter().enumerate() {
            let target = out_dir.join(format!("recovered_{group:04}_{index}.pgm"));
            shareio::write_image(image, &target).map_err(|e| Failure::from_core(&target, e))?;
            println!("{}", target.display());
        }
    }
    Ok(())
}

fn image_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?
            .path();
        let is_image = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "pgm" | "ppm" | "png"));
        if path.is_file() && is_image {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn format_psnr(psnr: f64) -> String {
    if psnr.is_infinite() {
        "Inf".to_string()
    } else {
        format!("{psnr:.2}")
    }
}

fn format_rmse(rmse: f64) -> String {
    if rmse == 0.0 {
        "0".to_string()
    } else {
        format!("{rmse:.4}")
    }
}

pub fn verify(original: &Path, recovered: &Path, strict: bool) -> CmdResult {
    let originals = image_files(original)?;
    let recovereds = image_files(recovered)?;
    if originals.is_empty() || recovereds.is_empty() {
        return Err(Failure::validation("nothing to compare: no images found"));
    }
    if originals.len() != recovereds.len() {
        return Err(Failure::validation(format!(
            "{} original image(s) but {} recovered",
            originals.len(),
            recovereds.len()
        )));
    }

    println!("image\trecovered\tSSIM\tPSNR\tRMSE");
    let mut all_lossless = true;
    for (a_path, b_path) in originals.iter().zip(&recovereds) {
        let a = load(a_path)?;
        let b = load(b_path)?;
        if a.dimensions() != b.dimensions() {
            return Err(Failure::validation(format!(
                "{} is {}x{} but {} is {}x{}",
                a_path.display(),
                a.width(),
                a.height(),
                b_path.display(),
                b.width(),
                b.height()
            )));
        }
        let report = QualityReport::compare(&a, &b).map_err(|e| Failure::from_core(b_path, e))?;
        all_lossless &= report.is_lossless();
        let name = |p: &Path| {
            p.file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned()
        };
        println!(
            "{}\t{}\t{:.2}\t{}\t{}",
            name(a_path),
            name(b_path),
            report.ssim,
            format_psnr(report.psnr),
            format_rmse(report.rmse)
        );
    }

    if strict && !all_lossless {
        return Err(Failure::validation(
            "recovered images are not bit-identical",
        ));
    }
    Ok(())
}

pub fn analyze(share: &Path) -> CmdResult {
    let container = shareio::load_share(share).map_err(|e| Failure::from_core(share, e))?;
    let analysis = analyze_share(&container);
    println!(
        "share: {side}x{side} ({} secret(s) of {}x{})",
        container.num_real(),
        container.secret_width(),
        container.secret_height(),
        side = container.share_side()
    );
    println!("entropy: {:.4} bits/pixel", analysis.entropy);
    println!(
        "histogram: min bin {}, max bin {}",
        analysis.histogram_min, analysis.histogram_max
    );
    let balance: Vec<String> = analysis
        .plane_balance
        .iter()
        .map(|b| format!("{b:.4}"))
        .collect();
    println!("plane ones fraction (MSB..LSB): {}", balance.join(" "));
    Ok(())
}
