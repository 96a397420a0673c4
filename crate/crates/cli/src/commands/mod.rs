pub mod cluster;
pub mod extract;
pub mod synth;
pub mod train;
