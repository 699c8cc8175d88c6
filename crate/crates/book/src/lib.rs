//! Compiles the guide's listings as doc-tests, one module per chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/apertures.md")]
pub mod apertures {}
#[doc = include_str!("../../../book/src/green.md")]
pub mod green {}
#[doc = include_str!("../../../book/src/los.md")]
pub mod los {}
#[doc = include_str!("../../../book/src/nlos.md")]
pub mod nlos {}
#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}
#[doc = include_str!("../../../book/src/sweeps.md")]
pub mod sweeps {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
