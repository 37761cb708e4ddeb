//! Finite fields, Zorn vector matrices and the nonassociative finite simple
//! Moufang loops M*(q), with machinery to check which sets generate them.

pub mod cli;
pub mod engine;
pub mod gensets;
pub mod gf;
pub mod paige;
pub mod psl2;
pub mod zorn;

pub use gf::{Field, FieldElement, GfError};
pub use paige::{enumerate_loop, LoopContext, PaigeElement};
pub use psl2::{Family, Mat2, PslElement};
pub use zorn::{Vec3, ZornMatrix};
