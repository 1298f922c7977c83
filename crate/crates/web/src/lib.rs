//! Browser demo: encode eight procedurally drawn secrets into one share,
//! inspect the individual binary shares, and decode with a correct or a
//! tampered comparison image.
//!
//! The logic lives in [`DemoState`], which is plain Rust and tested
//! natively; the `#[wasm_bindgen]` items are thin wrappers for the page.

use msis_core::codec::{clear_tail_bits, encode_group, unpack_group};
use msis_core::metrics::{analyze_share, QualityReport};
use msis_core::{decode_group, derive_key, GrayImage, SecretGroup, ShareContainer};
use wasm_bindgen::prelude::*;

mod patterns;

pub use patterns::{comparison_landscape, secret_pattern};

/// Everything the page shows for one encode.
pub struct DemoState {
    secrets: Vec<GrayImage>,
    comparison: GrayImage,
    container: ShareContainer,
}

impl DemoState {
    pub fn new(secrets: Vec<GrayImage>, comparison: GrayImage) -> msis_core::Result<Self> {
        let group = SecretGroup::new(secrets.clone())?;
        let container = encode_group(&group, &comparison)?;
        Ok(Self {
            secrets,
            comparison,
            container,
        })
    }

    pub fn procedural(secret_side: usize, seed: u32) -> msis_core::Result<Self> {
        let secrets = (0..8).map(|i| secret_pattern(i, secret_side)).collect();
        Self::new(secrets, comparison_landscape(secret_side * 2, seed))
    }

    pub fn key(&self) -> String {
        derive_key(&self.comparison).to_string()
    }

    pub fn share(&self) -> &GrayImage {
        self.container.share()
    }

    pub fn container(&self) -> &ShareContainer {
        &self.container
    }

    pub fn secrets(&self) -> &[GrayImage] {
        &self.secrets
    }

    pub fn comparison(&self) -> &GrayImage {
        &self.comparison
    }

    /// The comparison image with `offset` added to every pixel (mod 256).
    pub fn tampered_comparison(&self, offset: u8) -> GrayImage {
        let pixels = self
            .comparison
            .pixels()
            .iter()
            .map(|p| p.wrapping_add(offset))
            .collect();
        GrayImage::new(self.comparison.width(), self.comparison.height(), pixels)
            .expect("same geometry")
    }

    /// Individual binary share `index` as a 0/255 image.
    pub fn binary_share(&self, index: usize) -> GrayImage {
        let plane = &unpack_group(self.share()).expect("share is square")[index];
        let side = plane.side();
        let pixels = plane
            .bits()
            .iter()
            .map(|b| if b { 255 } else { 0 })
            .collect();
        GrayImage::new(side, side, pixels).expect("square plane")
    }

    pub fn recover(&self, offset: u8) -> Vec<GrayImage> {
        decode_group(&self.container, &self.tampered_comparison(offset))
            .expect("container built by this demo")
            .into_real_images()
    }

    pub fn quality(&self, offset: u8) -> Vec<QualityReport> {
        self.secrets
            .iter()
            .zip(self.recover(offset))
            .map(|(a, b)| QualityReport::compare(a, &b).expect("same size"))
            .collect()
    }
}

/// Gray pixels to opaque RGBA for `ImageData`.
pub fn gray_to_rgba(gray: &[u8]) -> Vec<u8> {
    gray.iter().flat_map(|&g| [g, g, g, 255]).collect()
}

/// RGBA canvas pixels to luminance.
pub fn rgba_to_gray(rgba: &[u8]) -> Vec<u8> {
    rgba.chunks_exact(4)
        .map(|p| msis_core::shareio::luminance(p[0], p[1], p[2]))
        .collect()
}

fn to_js(err: msis_core::Error) -> JsValue {
    JsValue::from_str(&err.to_string())
}

/// Security key of an RGBA image, as eight digits.
#[wasm_bindgen(js_name = deriveKey)]
pub fn derive_key_rgba(rgba: &[u8], width: usize, height: usize) -> Result<String, JsValue> {
    let img = GrayImage::new(width, height, rgba_to_gray(rgba)).map_err(to_js)?;
    Ok(derive_key(&img).to_string())
}

#[wasm_bindgen]
pub struct Demo {
    state: DemoState,
}

#[wasm_bindgen]
impl Demo {
    /// Procedural secrets of `secret_side` pixels and a seeded comparison.
    #[wasm_bindgen(constructor)]
    pub fn new(secret_side: usize, seed: u32) -> Result<Demo, JsValue> {
        DemoState::procedural(secret_side.max(1), seed)
            .map(|state| Demo { state })
            .map_err(to_js)
    }

    /// Same procedural secrets, user-supplied comparison (RGBA pixels).
    #[wasm_bindgen(js_name = withComparison)]
    pub fn with_comparison(
        secret_side: usize,
        rgba: &[u8],
        width: usize,
        height: usize,
    ) -> Result<Demo, JsValue> {
        let comparison = GrayImage::new(width, height, rgba_to_gray(rgba)).map_err(to_js)?;
        let secrets = (0..8)
            .map(|i| secret_pattern(i, secret_side.max(1)))
            .collect();
        DemoState::new(secrets, comparison)
            .map(|state| Demo { state })
            .map_err(to_js)
    }

    pub fn key(&self) -> String {
        self.state.key()
    }

    #[wasm_bindgen(getter, js_name = secretSide)]
    pub fn secret_side(&self) -> usize {
        self.state.container().secret_width()
    }

    #[wasm_bindgen(getter, js_name = shareSide)]
    pub fn share_side(&self) -> usize {
        self.state.container().share_side()
    }

    #[wasm_bindgen(getter, js_name = comparisonWidth)]
    pub fn comparison_width(&self) -> usize {
        self.state.comparison().width()
    }

    #[wasm_bindgen(getter, js_name = comparisonHeight)]
    pub fn comparison_height(&self) -> usize {
        self.state.comparison().height()
    }

    /// Secret bits left unencrypted because the comparison image is small.
    #[wasm_bindgen(js_name = clearTailBits)]
    pub fn clear_tail_bits(&self) -> usize {
        let c = self.state.container();
        clear_tail_bits(self.state.comparison(), c.secret_width(), c.secret_height())
    }

    #[wasm_bindgen(js_name = comparisonRgba)]
    pub fn comparison_rgba(&self, offset: u8) -> Vec<u8> {
        gray_to_rgba(self.state.tampered_comparison(offset).pixels())
    }

    #[wasm_bindgen(js_name = secretRgba)]
    pub fn secret_rgba(&self, index: usize) -> Vec<u8> {
        gray_to_rgba(self.state.secrets()[index].pixels())
    }

    #[wasm_bindgen(js_name = shareRgba)]
    pub fn share_rgba(&self) -> Vec<u8> {
        gray_to_rgba(self.state.share().pixels())
    }

    #[wasm_bindgen(js_name = binaryShareRgba)]
    pub fn binary_share_rgba(&self, index: usize) -> Vec<u8> {
        gray_to_rgba(self.state.binary_share(index).pixels())
    }

    /// All eight recovered secrets, concatenated as RGBA.
    #[wasm_bindgen(js_name = recoverRgba)]
    pub fn recover_rgba(&self, offset: u8) -> Vec<u8> {
        self.state
            .recover(offset)
            .iter()
            .flat_map(|img| gray_to_rgba(img.pixels()))
            .collect()
    }

    /// `[ssim, psnr, rmse]` per secret, flattened; PSNR may be `Infinity`.
    pub fn quality(&self, offset: u8) -> Vec<f64> {
        self.state
            .quality(offset)
            .iter()
            .flat_map(|q| [q.ssim, q.psnr, q.rmse])
            .collect()
    }

    /// `[entropy, histogram_min, histogram_max, balance_0..balance_7]`.
    #[wasm_bindgen(js_name = shareStats)]
    pub fn share_stats(&self) -> Vec<f64> {
        let a = analyze_share(self.state.container());
        let mut out = vec![a.entropy, a.histogram_min as f64, a.histogram_max as f64];
        out.extend(a.plane_balance);
        out
    }
}
