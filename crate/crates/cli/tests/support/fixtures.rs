use msis_core::GrayImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(rng: &mut impl Rng, width: usize, height: usize) -> GrayImage {
    let mut pixels = vec![0u8; width * height];
    rng.fill(&mut pixels[..]);
    GrayImage::new(width, height, pixels).unwrap()
}

/// Eight structured, face-database-sized stand-ins: smooth gradients,
/// blobs and edges rather than noise, so leaks would be visible.
pub fn secret_set(width: usize, height: usize) -> Vec<GrayImage> {
    let (w, h) = (width as f64, height as f64);
    let patterns: [Box<dyn Fn(f64, f64) -> f64>; 8] = [
        Box::new(|x, _| 255.0 * x / w),
        Box::new(|_, y| 255.0 * y / h),
        Box::new(|x, y| {
            let (dx, dy) = (x - w / 2.0, y - h / 2.0);
            let r = (dx * dx + dy * dy).sqrt();
            255.0 - r * 510.0 / w.max(h)
        }),
        Box::new(|x, y| {
            if ((x as usize / 8) + (y as usize / 8)) % 2 == 0 {
                30.0
            } else {
                220.0
            }
        }),
        Box::new(|x, y| 127.5 + 127.5 * (x / 5.0).sin() * (y / 7.0).cos()),
        Box::new(|x, y| {
            // a crude face: head ellipse, two eyes, a mouth
            let (nx, ny) = (x / w - 0.5, y / h - 0.5);
            let head = (nx / 0.35).powi(2) + (ny / 0.45).powi(2) < 1.0;
            let eye = |cx: f64| ((nx - cx).powi(2) + (ny + 0.12).powi(2)).sqrt() < 0.06;
            let mouth = ny > 0.15 && ny < 0.2 && nx.abs() < 0.15;
            if !head {
                20.0
            } else if eye(-0.13) || eye(0.13) || mouth {
                40.0
            } else {
                190.0 - 80.0 * ny
            }
        }),
        Box::new(|x, y| ((x * 3.0 + y * 5.0) as usize % 256) as f64),
        Box::new(|x, y| {
            if (x - y).abs() < 4.0 || (x + y - w).abs() < 4.0 {
                255.0
            } else {
                60.0
            }
        }),
    ];
    patterns
        .iter()
        .map(|f| {
            GrayImage::from_fn(width, height, |x, y| {
                f(x as f64, y as f64).clamp(0.0, 255.0) as u8
            })
            .unwrap()
        })
        .collect()
}
