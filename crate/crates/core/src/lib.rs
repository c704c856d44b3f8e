pub mod cli;
pub mod fuchsian;
pub mod master;
pub mod polycore;
pub mod reconstruct;
pub mod schubert;
