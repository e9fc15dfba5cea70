//! Black-box saliency maps for embedding models that compare two images.
//!
//! [`explainer::explain_pair`] perturbs one image of a pair with random smooth
//! masks and weighs each mask by the resulting embedding similarity.
//! [`evaluation`] scores any saliency map with deletion and insertion curves,
//! and [`sanity`] checks that maps depend on the model's parameters.

pub mod embedding;
pub mod error;
pub mod evaluation;
pub mod explainer;
pub mod fixtures;
pub mod imaging;
pub mod masks;
pub mod rng;
pub mod sanity;

pub use embedding::{cosine_similarity, Embedder, Embedding, PatchMeanEmbedder, RandomizedEmbedder};
pub use error::{Error, Result};
pub use evaluation::{deletion, insertion, MetricConfig, MetricResult};
pub use explainer::{explain_pair, explain_triplet, ExplainConfig, PairExplanation, Triplet};
pub use imaging::{Image, SaliencyMap};
pub use masks::MaskConfig;
pub use sanity::{randomization_check, SanityReport};
