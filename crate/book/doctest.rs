// mdbook cannot link the listings against a workspace crate, so each chapter
// is pulled in as a module doc and `cargo test --doc` runs the listings.

#[doc = include_str!("src/intro.md")]
pub mod intro {}
#[doc = include_str!("src/scalars.md")]
pub mod scalars {}
#[doc = include_str!("src/algebras.md")]
pub mod algebras {}
#[doc = include_str!("src/symmetric-tensors.md")]
pub mod symmetric_tensors {}
#[doc = include_str!("src/central-idempotents.md")]
pub mod central_idempotents {}
#[doc = include_str!("src/primitive-idempotents.md")]
pub mod primitive_idempotents {}
#[doc = include_str!("src/octonions.md")]
pub mod octonions {}
#[doc = include_str!("src/verification.md")]
pub mod verification {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
#[doc = include_str!("../README.md")]
pub mod readme {}
