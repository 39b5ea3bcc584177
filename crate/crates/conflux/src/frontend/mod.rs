//! Problem files, proof output and the command-line driver.

pub mod cli;
pub mod parse;
pub mod render;
