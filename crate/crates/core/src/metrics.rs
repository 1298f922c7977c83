//! Recovery quality (SSIM, PSNR, RMSE) and share randomness measures.

use crate::bitcore::GrayImage;
use crate::codec::ShareContainer;
use crate::error::{Error, Result};

const PEAK: f64 = 255.0;
const C1: f64 = (0.01 * PEAK) * (0.01 * PEAK);
const C2: f64 = (0.03 * PEAK) * (0.03 * PEAK);

/// Original-vs-recovered comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityReport {
    pub ssim: f64,
    /// Decibels; `f64::INFINITY` for identical images.
    pub psnr: f64,
    pub rmse: f64,
}

impl QualityReport {
    pub fn compare(a: &GrayImage, b: &GrayImage) -> Result<Self> {
        Ok(Self {
            ssim: ssim(a, b)?,
            psnr: psnr(a, b)?,
            rmse: rmse(a, b)?,
        })
    }

    pub fn is_lossless(&self) -> bool {
        self.rmse == 0.0
    }
}

fn check_dimensions(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if a.dimensions() != b.dimensions() {
        return Err(Error::DimensionMismatch {
            expected: a.dimensions(),
            actual: b.dimensions(),
        });
    }
    Ok(())
}

fn squared_error_sum(a: &GrayImage, b: &GrayImage) -> u64 {
    a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum()
}

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dimensions(a, b)?;
    Ok(squared_error_sum(a, b) as f64 / a.pixels().len() as f64)
}

pub fn rmse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    Ok(mse(a, b)?.sqrt())
}

/// PSNR with an 8-bit peak of 255; infinite when the images are equal.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dimensions(a, b)?;
    if squared_error_sum(a, b) == 0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK * PEAK / mse(a, b)?).log10())
}

/// Global SSIM: one window covering the whole image.
pub fn ssim(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dimensions(a, b)?;
    let n = a.pixels().len() as f64;
    let mean = |img: &GrayImage| img.pixels().iter().map(|&p| p as f64).sum::<f64>() / n;
    let (mu_a, mu_b) = (mean(a), mean(b));

    let (mut var_a, mut var_b, mut cov) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.pixels().iter().zip(b.pixels()) {
        let dx = x as f64 - mu_a;
        let dy = y as f64 - mu_b;
        var_a += dx * dx;
        var_b += dy * dy;
        cov += dx * dy;
    }
    var_a /= n;
    var_b /= n;
    cov /= n;

    let num = (2.0 * mu_a * mu_b + C1) * (2.0 * cov + C2);
    let den = (mu_a * mu_a + mu_b * mu_b + C1) * (var_a + var_b + C2);
    Ok(num / den)
}

pub fn histogram(img: &GrayImage) -> [u64; 256] {
    let mut bins = [0u64; 256];
    for &p in img.pixels() {
        bins[p as usize] += 1;
    }
    bins
}

/// Shannon entropy of the 256-bin histogram, in bits per pixel.
pub fn entropy(img: &GrayImage) -> f64 {
    let total = img.pixels().len() as f64;
    let h: f64 = histogram(img)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    // clamp the -0.0 of a single-symbol histogram
    h.max(0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShareAnalysis {
    pub entropy: f64,
    pub histogram_min: u64,
    pub histogram_max: u64,
    /// Fraction of ones in each share bit plane, index 0 being the MSB
    /// (first secret). Only the `bit_length` payload cells are counted.
    pub plane_balance: [f64; 8],
}

pub fn analyze_share(container: &ShareContainer) -> ShareAnalysis {
    let share = container.share();
    let bins = histogram(share);
    let payload = &share.pixels()[..container.bit_length().min(share.pixels().len())];
    let mut ones = [0usize; 8];
    for &p in payload {
        for (i, count) in ones.iter_mut().enumerate() {
            *count += ((p >> (7 - i)) & 1) as usize;
        }
    }
    ShareAnalysis {
        entropy: entropy(share),
        histogram_min: *bins.iter().min().unwrap_or(&0),
        histogram_max: *bins.iter().max().unwrap_or(&0),
        plane_balance: ones.map(|c| c as f64 / payload.len().max(1) as f64),
    }
}
