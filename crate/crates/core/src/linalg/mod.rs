pub mod fp;
pub mod howell;
pub mod snf;

pub use howell::{solve, Howell};
pub use snf::Smith;
