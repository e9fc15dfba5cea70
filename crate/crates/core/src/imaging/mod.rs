//! Image and saliency-map containers, PNG/JPEG ingestion and map export.

mod export;
mod overlay;
mod resize;

use std::path::Path;

use image::{DynamicImage, GrayImage, RgbImage};

use crate::error::{Error, Result};

pub use export::{read_map_binary, read_map_csv, write_map_binary, write_map_csv};
pub use overlay::{colormap, render_overlay, COLORMAP_LEN};
pub use resize::resize_bilinear;

/// Row-major, channel-interleaved float image with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::Input(format!(
                "image must be at least 1x1, got {height}x{width}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::Input(format!(
                "images have 1 or 3 channels, got {channels}"
            )));
        }
        if data.len() != height * width * channels {
            return Err(Error::Dimension(format!(
                "{height}x{width}x{channels} image needs {} values, got {}",
                height * width * channels,
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Input(format!(
                "pixel value {v} outside [0, 1]"
            )));
        }
        Ok(Image {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn filled(height: usize, width: usize, channels: usize, value: f64) -> Result<Self> {
        Image::new(height, width, channels, vec![value; height * width * channels])
    }

    /// Builds an image from a per-pixel function returning one value per channel.
    pub fn from_fn(
        height: usize,
        width: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(y, x, c));
                }
            }
        }
        Image::new(height, width, channels, data)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn pixel_count(&self) -> usize {
        self.height * self.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, y: usize, x: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// All channel values of the pixel at row-major index `idx`.
    pub fn pixel(&self, idx: usize) -> &[f64] {
        &self.data[idx * self.channels..(idx + 1) * self.channels]
    }

    /// Overwrites one pixel (all channels) with `values`.
    ///
    /// Crate-internal so the `[0, 1]` invariant only has to be checked where
    /// the source values come from another valid image.
    pub(crate) fn set_pixel(&mut self, idx: usize, values: &[f64]) {
        self.data[idx * self.channels..(idx + 1) * self.channels].copy_from_slice(values);
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.height == other.height && self.width == other.width && self.channels == other.channels
    }

    pub(crate) fn from_raw_unchecked(
        height: usize,
        width: usize,
        channels: usize,
        data: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(data.len(), height * width * channels);
        Image {
            height,
            width,
            channels,
            data,
        }
    }

    /// Per-channel arithmetic mean.
    pub fn channel_means(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.channels];
        for px in self.data.chunks_exact(self.channels) {
            for (s, v) in sums.iter_mut().zip(px) {
                *s += v;
            }
        }
        let n = self.pixel_count() as f64;
        sums.into_iter().map(|s| s / n).collect()
    }

    /// Single-channel luminance (ITU-R BT.601 weights); 1-channel images are returned as is.
    pub fn grayscale(&self) -> Image {
        if self.channels == 1 {
            return self.clone();
        }
        let data = self
            .data
            .chunks_exact(3)
            .map(|p| (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]).clamp(0.0, 1.0))
            .collect();
        Image::from_raw_unchecked(self.height, self.width, 1, data)
    }

    fn from_dynamic(img: DynamicImage) -> Self {
        let (w, h) = (img.width() as usize, img.height() as usize);
        if img.color().has_color() {
            let rgb = img.to_rgb8();
            let data = rgb.as_raw().iter().map(|&b| f64::from(b) / 255.0).collect();
            Image::from_raw_unchecked(h, w, 3, data)
        } else {
            let gray = img.to_luma8();
            let data = gray.as_raw().iter().map(|&b| f64::from(b) / 255.0).collect();
            Image::from_raw_unchecked(h, w, 1, data)
        }
    }

    fn to_bytes(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect()
    }
}

/// Per-pixel importance grid; values may be any finite real until normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl SaliencyMap {
    pub fn new(height: usize, width: usize, values: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::Input(format!(
                "saliency map must be at least 1x1, got {height}x{width}"
            )));
        }
        if values.len() != height * width {
            return Err(Error::Dimension(format!(
                "{height}x{width} map needs {} values, got {}",
                height * width,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("saliency values must be finite".into()));
        }
        Ok(SaliencyMap {
            height,
            width,
            values,
        })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        SaliencyMap {
            height,
            width,
            values: vec![0.0; height * width],
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Multiplies every value by `factor`.
    pub fn scaled(&self, factor: f64) -> SaliencyMap {
        SaliencyMap {
            height: self.height,
            width: self.width,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub(crate) fn from_raw_unchecked(height: usize, width: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), height * width);
        SaliencyMap {
            height,
            width,
            values,
        }
    }
}

/// Decodes a PNG/JPEG file into `[0, 1]` floats and resizes it to `target`
/// (height, width) with corner-aligned bilinear interpolation.
///
/// Grayscale files stay single-channel; anything with color becomes RGB.
pub fn load_image(path: impl AsRef<Path>, target: (usize, usize)) -> Result<Image> {
    let path = path.as_ref();
    if target.0 == 0 || target.1 == 0 {
        return Err(Error::Config(format!(
            "target size must be positive, got {}x{}",
            target.0, target.1
        )));
    }
    let decoded = image::open(path).map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    let img = Image::from_dynamic(decoded);
    if img.dims() == target {
        return Ok(img);
    }
    Ok(resize_bilinear(&img, target.0, target.1))
}

/// Decodes without resizing.
pub fn load_image_native(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let decoded = image::open(path).map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Image::from_dynamic(decoded))
}

/// Writes an 8-bit PNG (values are rounded to the nearest of 256 levels).
pub fn save_png(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let (w, h) = (img.width as u32, img.height as u32);
    let bytes = img.to_bytes();
    let dynamic = if img.channels == 1 {
        DynamicImage::ImageLuma8(GrayImage::from_raw(w, h, bytes).expect("buffer size"))
    } else {
        DynamicImage::ImageRgb8(RgbImage::from_raw(w, h, bytes).expect("buffer size"))
    };
    dynamic
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|source| Error::Encode {
            path: path.to_path_buf(),
            source,
        })
}

/// Constant image of the same shape holding each channel's mean.
pub fn mean_fill(img: &Image) -> Image {
    let means = img.channel_means();
    let data = means
        .iter()
        .copied()
        .cycle()
        .take(img.data.len())
        .map(|v| v.clamp(0.0, 1.0))
        .collect();
    Image::from_raw_unchecked(img.height, img.width, img.channels, data)
}

/// Places images left to right on a black canvas; all inputs must share height
/// and channel count.
pub fn hstack(images: &[Image]) -> Result<Image> {
    let first = images
        .first()
        .ok_or_else(|| Error::Input("nothing to stack".into()))?;
    let (h, c) = (first.height, first.channels);
    if let Some(bad) = images.iter().find(|i| i.height != h || i.channels != c) {
        return Err(Error::Dimension(format!(
            "cannot stack {}x{}x{} next to {}x{}x{}",
            bad.height, bad.width, bad.channels, first.height, first.width, first.channels
        )));
    }
    let width: usize = images.iter().map(|i| i.width).sum();
    let mut data = Vec::with_capacity(h * width * c);
    for y in 0..h {
        for img in images {
            let row = y * img.width * c;
            data.extend_from_slice(&img.data[row..row + img.width * c]);
        }
    }
    Ok(Image::from_raw_unchecked(h, width, c, data))
}
