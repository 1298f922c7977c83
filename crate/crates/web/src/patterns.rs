//! Procedural stand-ins for the secret images and the comparison image.

use msis_core::GrayImage;

fn clamp(v: f64) -> u8 {
    v.clamp(0.0, 255.0) as u8
}

/// Secret `index` (0..8) drawn on a `side` x `side` canvas.
pub fn secret_pattern(index: usize, side: usize) -> GrayImage {
    let s = side as f64;
    GrayImage::from_fn(side, side, |x, y| {
        let (u, v) = (x as f64 / s - 0.5, y as f64 / s - 0.5);
        let r = (u * u + v * v).sqrt();
        clamp(match index % 8 {
            // face: head, eyes, mouth
            0 => {
                let head = (u / 0.36).powi(2) + (v / 0.46).powi(2) < 1.0;
                let eye = |cx: f64| ((u - cx).powi(2) + (v + 0.12).powi(2)).sqrt() < 0.06;
                let mouth = v > 0.14 && v < 0.2 && u.abs() < 0.16 - (v - 0.17).abs();
                match (head, eye(-0.14) || eye(0.14) || mouth) {
                    (false, _) => 25.0,
                    (true, true) => 35.0,
                    (true, false) => 200.0 - 90.0 * (v + 0.5),
                }
            }
            1 => 255.0 * (1.0 - r * 1.6),
            2 => {
                let cell = (side / 8).max(1);
                if (x / cell + y / cell) % 2 == 0 {
                    40.0
                } else {
                    215.0
                }
            }
            3 => 128.0 + 120.0 * (u * 25.0).sin() * (v * 18.0).cos(),
            // a ring
            4 => {
                if (r - 0.3).abs() < 0.06 {
                    240.0
                } else {
                    50.0 + 60.0 * (u + 0.5)
                }
            }
            // the digit-like glyph "8"
            5 => {
                let lobe = |cy: f64| {
                    (((u / 0.22).powi(2) + ((v - cy) / 0.2).powi(2)).sqrt() - 1.0).abs() < 0.2
                };
                if lobe(-0.2) || lobe(0.2) {
                    20.0
                } else {
                    235.0
                }
            }
            6 => 255.0 * (u + 0.5) * (v + 0.5) * 4.0 % 256.0,
            // a cross
            _ => {
                if u.abs() < 0.08 || v.abs() < 0.08 {
                    250.0
                } else {
                    90.0 - 60.0 * r
                }
            }
        })
    })
    .expect("side >= 1")
}

fn hash(mut h: u32) -> u32 {
    h ^= h >> 16;
    h = h.wrapping_mul(0x7feb_352d);
    h ^= h >> 15;
    h = h.wrapping_mul(0x846c_a68b);
    h ^ (h >> 16)
}

/// A textured landscape-like image: smooth hills plus per-pixel grain, so
/// every bit plane carries a mix of zeros and ones.
pub fn comparison_landscape(side: usize, seed: u32) -> GrayImage {
    let s = side as f64;
    let phase = (hash(seed) % 1000) as f64 / 100.0;
    GrayImage::from_fn(side, side, |x, y| {
        let (u, v) = (x as f64 / s, y as f64 / s);
        let hills = 0.5 + 0.25 * (u * 7.0 + phase).sin() + 0.2 * (v * 5.0 - phase * 0.7).cos();
        let sky = if v < 0.35 + 0.1 * (u * 4.0 + phase).sin() {
            0.25
        } else {
            0.0
        };
        let grain = hash(seed ^ hash((y * side + x) as u32)) % 64;
        clamp(255.0 * (hills + sky) * 0.75 + grain as f64)
    })
    .expect("side >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns_are_distinct_and_sized() {
        let imgs: Vec<_> = (0..8).map(|i| secret_pattern(i, 20)).collect();
        for (i, a) in imgs.iter().enumerate() {
            assert_eq!(a.dimensions(), (20, 20));
            for b in &imgs[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn landscape_depends_on_seed() {
        assert_eq!(comparison_landscape(16, 4), comparison_landscape(16, 4));
        assert_ne!(comparison_landscape(16, 4), comparison_landscape(16, 5));
    }
}
