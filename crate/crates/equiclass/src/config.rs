//! Centralized caps, tolerances and seeds.
//!
//! Every size cap and numerical tolerance used by the library lives here so
//! that callers can raise a cap deliberately instead of editing constants
//! scattered through the code. `Config::default()` is the documented desk
//! scale; the CLI maps `--max-order`, `--tol`, `--seed` and the
//! `EQUICLASS_MAX_ORDER` environment variable onto one of these records.

#[derive(Debug, Clone)]
pub struct Config {
    /// Largest group order for which exhaustive subgroup enumeration runs.
    pub subgroup_order_cap: usize,
    /// Largest source/target order for homomorphism enumeration.
    pub hom_order_cap: usize,
    /// Largest order for which table validation checks associativity
    /// exhaustively (O(n^3)); structural constructors are exact anyway.
    pub assoc_check_cap: usize,
    /// Cap on the order of a direct product.
    pub product_order_cap: usize,
    /// Worklist bound (number of pairs) for family closure.
    pub closure_pair_cap: usize,
    /// Largest group order for the numerical character table.
    pub character_order_cap: usize,
    /// Largest group order for 2-cohomology / Schur multiplier runs.
    pub cohomology_order_cap: usize,
    /// Largest group order for twisted regular representation splits.
    pub twisted_order_cap: usize,
    /// Largest matrix dimension fed to the Jacobi eigensolver.
    pub eigen_dim_cap: usize,

    /// Unitarity / multiplicativity validation tolerance.
    pub unitarity_tol: f64,
    /// Residual tolerance for recovered conjugators.
    pub conjugation_tol: f64,
    /// Singular values at or below this are treated as zero.
    pub singular_cutoff: f64,
    /// Multiplicities and other integers recovered from floats must sit
    /// within this distance of the lattice.
    pub snap_tol: f64,
    /// Angular tolerance when snapping phases to roots of unity.
    pub phase_tol: f64,
    /// Scalar-multiple-of-identity residual for projective lift products.
    pub projective_tol: f64,

    /// Randomized retries before `SingularIntertwiner` is reported.
    pub conjugator_retries: usize,
    /// Reseeded attempts before a spectral split reports failure.
    pub split_retries: usize,

    /// Default truncation degree for Poincare series.
    pub degree_default: usize,
    /// Hard cap on the truncation degree.
    pub degree_cap: usize,

    /// Seed for every randomized (but reproducible) routine.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            subgroup_order_cap: 64,
            hom_order_cap: 24,
            assoc_check_cap: 64,
            product_order_cap: 10_000,
            closure_pair_cap: 100_000,
            character_order_cap: 24,
            cohomology_order_cap: 16,
            twisted_order_cap: 16,
            eigen_dim_cap: 32,
            unitarity_tol: 1e-9,
            conjugation_tol: 1e-8,
            singular_cutoff: 1e-12,
            snap_tol: 1e-6,
            phase_tol: 1e-6,
            projective_tol: 1e-6,
            conjugator_retries: 8,
            split_retries: 6,
            degree_default: 10,
            degree_cap: 40,
            seed: 0,
        }
    }
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Config {
            seed,
            ..Config::default()
        }
    }
}

/// Distinct stream tags so independent routines seeded from the same
/// `Config::seed` do not share random streams.
pub mod stream {
    pub const CHARACTER_TABLE: u64 = 0x5348_4152;
    pub const TWISTED_SPLIT: u64 = 0x5457_4953;
    pub const CONJUGATOR: u64 = 0x434f_4e4a;
    pub const SEPARATION: u64 = 0x5345_5041;
    pub const VERIFY: u64 = 0x5645_5249;
    pub const FAMILY: u64 = 0x4641_4d49;
    pub const BUNDLE: u64 = 0x4255_4e44;
}

/// ChaCha stream derivation: one fixed, documented mixing rule.
pub fn rng_for(seed: u64, tag: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}
