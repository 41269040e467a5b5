pub mod easing;
pub mod model;
pub mod num;
pub mod tokenizer;
pub mod metrics;
pub mod optimizer;
pub mod svg_bridge;
pub mod synth;
