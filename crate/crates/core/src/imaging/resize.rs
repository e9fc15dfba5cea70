use super::Image;

/// Source coordinate for output index `i` under corner-aligned sampling.
///
/// Output corners land exactly on input corners; a single output sample sits at
/// the input center.
fn source_coord(i: usize, out_len: usize, in_len: usize) -> f64 {
    if out_len == 1 {
        (in_len - 1) as f64 / 2.0
    } else {
        i as f64 * (in_len - 1) as f64 / (out_len - 1) as f64
    }
}

fn taps(pos: f64, in_len: usize) -> (usize, usize, f64) {
    let lo = (pos.floor() as usize).min(in_len - 1);
    let hi = (lo + 1).min(in_len - 1);
    (lo, hi, pos - lo as f64)
}

/// Bilinear resize with corner-aligned sampling.
pub fn resize_bilinear(img: &Image, height: usize, width: usize) -> Image {
    assert!(height > 0 && width > 0, "resize target must be positive");
    let c = img.channels();
    let (ih, iw) = img.dims();
    let cols: Vec<_> = (0..width)
        .map(|x| taps(source_coord(x, width, iw), iw))
        .collect();
    let mut data = Vec::with_capacity(height * width * c);
    for y in 0..height {
        let (y0, y1, fy) = taps(source_coord(y, height, ih), ih);
        for &(x0, x1, fx) in &cols {
            for ch in 0..c {
                let top = img.get(y0, x0, ch) * (1.0 - fx) + img.get(y0, x1, ch) * fx;
                let bottom = img.get(y1, x0, ch) * (1.0 - fx) + img.get(y1, x1, ch) * fx;
                data.push((top * (1.0 - fy) + bottom * fy).clamp(0.0, 1.0));
            }
        }
    }
    Image::from_raw_unchecked(height, width, c, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_size_is_identity() {
        let mut rng = crate::rng::seeded(1);
        let img = Image::from_fn(7, 5, 3, |_, _, _| rng.random()).unwrap();
        assert_eq!(resize_bilinear(&img, 7, 5), img);
    }

    #[test]
    fn two_by_two_to_one_pixel_averages_corners() {
        let img = Image::new(2, 2, 1, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(resize_bilinear(&img, 1, 1).data(), &[0.5]);
    }

    #[test]
    fn corners_are_preserved_when_upsampling() {
        let img = Image::new(2, 2, 1, vec![0.0, 0.25, 0.5, 1.0]).unwrap();
        let up = resize_bilinear(&img, 5, 9);
        assert_eq!(up.get(0, 0, 0), 0.0);
        assert_eq!(up.get(0, 8, 0), 0.25);
        assert_eq!(up.get(4, 0, 0), 0.5);
        assert_eq!(up.get(4, 8, 0), 1.0);
    }
}
