pub mod canon;
pub mod cli;
pub mod encode;
pub mod fuzz;
pub mod meta;
pub mod name;
pub mod names;
pub mod parse;
pub mod principal;
pub mod reduction;
pub mod simulate;
pub mod print;
pub mod rewrite;
pub mod term;
pub mod typing;
pub mod xcalc;

pub use name::{Name, NameKind};
pub use parse::parse;
pub use print::print;
pub use term::{CutKind, Position, Term};
