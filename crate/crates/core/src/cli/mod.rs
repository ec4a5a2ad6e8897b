//! Command-line front end and SVG rendering.

#[cfg(feature = "cli")]
mod app;
pub mod render;

#[cfg(feature = "cli")]
pub use app::run;
pub use render::{render_polytope_svg, render_svg, RenderOptions};
