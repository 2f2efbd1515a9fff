pub mod complex;
pub mod link;
pub mod templates;
pub mod spine;
pub mod group;
pub mod covering;
pub mod morse;
pub mod distortion;
pub mod pipeline;
