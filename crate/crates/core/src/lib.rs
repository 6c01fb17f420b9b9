pub mod cli;
pub mod dynamics;
pub mod exactalg;
pub mod sidon;
pub mod tameness;
