pub mod benchmark;
pub mod decompose;
pub mod dtw;
pub mod gradcheck;
pub mod predict;
