use super::{Image, SaliencyMap};
use crate::error::{Error, Result};

pub const COLORMAP_LEN: usize = 256;

/// Entry `i` of the fixed blue-to-red lookup table.
///
/// With `t = i / 255` the color is `(t, 0, (1 - t) / 2)`: navy at 0, red at 255.
/// The channel sum `(1 + t) / 2` grows with `t`, so a map scaled down by a
/// smaller weight always renders darker.
pub fn colormap(i: usize) -> [f64; 3] {
    assert!(i < COLORMAP_LEN, "colormap index {i} out of range");
    let t = i as f64 / (COLORMAP_LEN - 1) as f64;
    [t, 0.0, 0.5 * (1.0 - t)]
}

fn lookup(v: f64) -> [f64; 3] {
    let idx = (v.clamp(0.0, 1.0) * (COLORMAP_LEN - 1) as f64).round() as usize;
    colormap(idx)
}

/// `(1 - alpha) * grayscale(img) + alpha * colormap(map)` per pixel, as RGB.
///
/// Map values are clamped to `[0, 1]` before the lookup.
pub fn render_overlay(img: &Image, map: &SaliencyMap, alpha: f64) -> Result<Image> {
    if img.dims() != map.dims() {
        return Err(Error::Dimension(format!(
            "overlay of {}x{} map on {}x{} image",
            map.height(),
            map.width(),
            img.height(),
            img.width()
        )));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Config(format!("overlay alpha {alpha} outside [0, 1]")));
    }
    let gray = img.grayscale();
    let mut data = Vec::with_capacity(img.pixel_count() * 3);
    for (g, &v) in gray.data().iter().zip(map.values()) {
        let color = lookup(v);
        for c in color {
            data.push(((1.0 - alpha) * g + alpha * c).clamp(0.0, 1.0));
        }
    }
    Ok(Image::from_raw_unchecked(img.height(), img.width(), 3, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_pair(seed: u64) -> (Image, SaliencyMap) {
        let mut rng = crate::rng::seeded(seed);
        let img = Image::from_fn(6, 5, 3, |_, _, _| rng.random()).unwrap();
        let map = SaliencyMap::new(6, 5, (0..30).map(|_| rng.random()).collect()).unwrap();
        (img, map)
    }

    #[test]
    fn endpoints() {
        assert_eq!(colormap(0), [0.0, 0.0, 0.5]);
        assert_eq!(colormap(255), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn alpha_zero_is_grayscale() {
        let (img, map) = random_pair(3);
        let out = render_overlay(&img, &map, 0.0).unwrap();
        let gray = img.grayscale();
        for (i, g) in gray.data().iter().enumerate() {
            assert_eq!(out.pixel(i), &[*g, *g, *g]);
        }
    }

    #[test]
    fn alpha_one_zero_map_is_uniform_first_color() {
        let (img, _) = random_pair(5);
        let out = render_overlay(&img, &SaliencyMap::zeros(6, 5), 1.0).unwrap();
        for i in 0..30 {
            assert_eq!(out.pixel(i), &colormap(0));
        }
    }

    #[test]
    fn half_blend_matches_hand_computation() {
        let (img, map) = random_pair(7);
        let out = render_overlay(&img, &map, 0.5).unwrap();
        for y in 0..6 {
            for x in 0..5 {
                let (r, g, b) = (img.get(y, x, 0), img.get(y, x, 1), img.get(y, x, 2));
                let lum = 0.299 * r + 0.587 * g + 0.114 * b;
                let t = (map.get(y, x) * 255.0).round() / 255.0;
                let expect = [
                    0.5 * lum + 0.5 * t,
                    0.5 * lum,
                    0.5 * lum + 0.5 * 0.5 * (1.0 - t),
                ];
                for c in 0..3 {
                    assert!((out.get(y, x, c) - expect[c]).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn shape_mismatch() {
        let (img, _) = random_pair(1);
        assert!(matches!(
            render_overlay(&img, &SaliencyMap::zeros(5, 6), 0.5),
            Err(Error::Dimension(_))
        ));
    }
}
