pub mod cli;
pub mod geometry;
pub mod lifting;
pub mod numerics;
pub mod skeleton;
pub mod uniformize;
