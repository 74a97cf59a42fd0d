pub mod algebra;
pub mod error;
pub mod idempotents;
pub mod linalg;
pub mod scalars;
pub mod symtensor;
pub mod verify;
