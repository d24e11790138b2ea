//! Compiles and runs every code block in the user guide (`book/`) as a
//! documentation test, so the guide and the library cannot drift apart.
//! Each chapter appears as an empty module carrying the chapter text.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/multiplex-networks.md")]
pub mod multiplex_networks {}

#[doc = include_str!("../../../book/src/generators.md")]
pub mod generators {}

#[doc = include_str!("../../../book/src/embeddings.md")]
pub mod embeddings {}

#[doc = include_str!("../../../book/src/similarity.md")]
pub mod similarity {}

#[doc = include_str!("../../../book/src/robustness.md")]
pub mod robustness {}

#[doc = include_str!("../../../book/src/reducibility.md")]
pub mod reducibility {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
