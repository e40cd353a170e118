//! Free groups, their automorphisms, and a combinatorial Whitehead model of
//! collared sphere bases with exhaustive degree search.

pub mod bounds;
pub mod diagram;
pub mod error;
pub mod morphism;
pub mod search;
pub mod textio;
pub mod word;

pub use diagram::{ComponentKind, NestedDiagram, Violation, ViolationCode};
pub use error::{Error, Result};
pub use morphism::{Endomorphism, NielsenCertificate, NielsenMove};
pub use word::{Letter, Word};
