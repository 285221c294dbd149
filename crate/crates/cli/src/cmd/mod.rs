pub mod csequence;
pub mod evolve;
pub mod lp;
pub mod reduce;
