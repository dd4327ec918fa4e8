pub mod formula;
pub mod oracle;
pub mod rewrite;
pub mod bench;

pub use formula::{parse, render, Formula};
