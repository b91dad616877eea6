//! mdbook cannot execute Rust snippets as tests, so every chapter of the
//! guide is included here as module documentation and `cargo test --doc`
//! runs the code blocks. A chapter per module keeps failures attributable.
//!
//! The rendered book lives in `book/`; build it with `mdbook build book`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/gaussian-packets.md")]
pub mod gaussian_packets {}

#[doc = include_str!("../../../book/src/coupled-dynamics.md")]
pub mod coupled_dynamics {}

#[doc = include_str!("../../../book/src/closed-forms.md")]
pub mod closed_forms {}

#[doc = include_str!("../../../book/src/trajectories.md")]
pub mod trajectories {}

#[doc = include_str!("../../../book/src/interference.md")]
pub mod interference {}

#[doc = include_str!("../../../book/src/scenarios.md")]
pub mod scenarios {}
