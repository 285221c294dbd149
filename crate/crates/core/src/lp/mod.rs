//! Laurent Phenomenon algebra seeds and mutation, and the lattice seed whose
//! mutations reproduce the Toda-type recurrence.

mod mutation;
mod seed;
mod toda_seed;

pub use mutation::{
    cluster_expansions, compute_hat, default_new_var, mutate, mutate_as, mutate_sequence, EntryUpdate,
    EntryUpdateReport, ExchangeLaurent, MutationError, MutationLog, MutationRecord, MutationRecordReport,
    MutationStep, DEFAULT_HAT_BOUND,
};
pub use seed::{parse_seed, EntryReport, Seed, SeedEntry, SeedError, SeedFileError, SeedReport};
pub use toda_seed::{
    build_toda_seed, exchange_polynomial, lemma_check, lemma_formula, mu_infinity_check, mutate_lattice_points,
    LemmaReport, MuInfinityReport, TodaSeed, TodaSeedError,
};
