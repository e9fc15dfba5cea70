#![cfg(feature = "onnx")]

use std::path::PathBuf;

use rand::Rng;
use srise_core::embedding::{
    pair_similarity, ChannelOrder, Embedder, ExternalModelEmbedder, PatchMeanEmbedder, TensorLayout,
};
use srise_core::imaging::Image;
use srise_core::rng::seeded;
use srise_core::Error;

/// 4x4 average pooling over a 1x3x8x8 input, flattened to 12 values.
fn model_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/avgpool4_8x8.onnx")
}

fn raw_layout() -> TensorLayout {
    TensorLayout {
        height: 8,
        width: 8,
        channels: 3,
        channels_first: true,
        channel_order: ChannelOrder::Rgb,
        mean: vec![0.0; 3],
        std: vec![1.0; 3],
    }
}

fn random_image(seed: u64) -> Image {
    let mut rng = seeded(seed);
    Image::from_fn(8, 8, 3, |_, _, _| rng.random()).unwrap()
}

#[test]
fn pooling_model_agrees_with_patch_means() {
    let model = ExternalModelEmbedder::load(model_path(), raw_layout()).unwrap();
    let reference = PatchMeanEmbedder::new(2).unwrap();
    for seed in 0..5 {
        let (a, b) = (random_image(seed), random_image(seed + 50));
        let got = pair_similarity(&model, &a, &b).unwrap();
        let want = pair_similarity(&reference, &a, &b).unwrap();
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }
}

#[test]
fn channel_order_permutes_output() {
    let bgr = TensorLayout {
        channel_order: ChannelOrder::Bgr,
        ..raw_layout()
    };
    let rgb_model = ExternalModelEmbedder::load(model_path(), raw_layout()).unwrap();
    let bgr_model = ExternalModelEmbedder::load(model_path(), bgr).unwrap();
    let img = random_image(3);
    let rgb = rgb_model.embed(&img).unwrap();
    let bgr = bgr_model.embed(&img).unwrap();
    // Output is channel-major: 4 values per channel.
    for i in 0..4 {
        assert!((rgb.values()[i] - bgr.values()[8 + i]).abs() < 1e-6);
    }
}

#[test]
fn wrong_input_size_and_missing_file() {
    let model = ExternalModelEmbedder::load(model_path(), raw_layout()).unwrap();
    let big = Image::filled(9, 8, 3, 0.5).unwrap();
    assert!(matches!(model.embed(&big), Err(Error::Dimension(_))));
    let missing = ExternalModelEmbedder::load("no/such/model.onnx", raw_layout());
    let msg = missing.unwrap_err().to_string();
    assert!(msg.contains("no/such/model.onnx"), "{msg}");
    let bad = TensorLayout {
        std: vec![0.0; 3],
        ..raw_layout()
    };
    assert!(matches!(
        ExternalModelEmbedder::load(model_path(), bad),
        Err(Error::Config(_))
    ));
}
