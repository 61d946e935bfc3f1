pub mod checker;
pub mod engine;
pub mod fo;
pub mod frames;
pub mod sgtree;
pub mod syntax;
