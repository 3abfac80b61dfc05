/// Size limits for the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest `|N|·|H|` for which admissible quotients are enumerated.
    pub max_quotient_cells: usize,
    /// Largest `|H|·|N|` for which action classes are enumerated.
    pub max_action_cells: usize,
    /// Most Schreier retractions materialized for one extension.
    pub max_retractions: u128,
    /// Largest monoid order the brute-force oracle enumerates.
    pub max_oracle_order: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_quotient_cells: 36,
            max_action_cells: 16,
            max_retractions: 1_000_000,
            max_oracle_order: 6,
        }
    }
}
