//! The chapters of the guide under `book/`, included here so that every
//! code block in the book is compiled and run by `cargo test --doc`.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/cone.md")]
pub mod cone {}

#[doc = include_str!("../../../book/src/stability.md")]
pub mod stability {}

#[doc = include_str!("../../../book/src/coeff.md")]
pub mod coeff {}

#[doc = include_str!("../../../book/src/hall.md")]
pub mod hall {}

#[doc = include_str!("../../../book/src/integrate.md")]
pub mod integrate {}

#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
