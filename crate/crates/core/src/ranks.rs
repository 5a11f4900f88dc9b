//! Generic-rank bookkeeping for cubic Chow decompositions.

use crate::chow::cone_dim;
use crate::poly::binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankTableRow {
    pub n: usize,
    /// `binom(n + 3, 3)`
    pub dim_ambient: usize,
    /// `3n + 1`
    pub cone_dim: usize,
    /// `ceil(dim_ambient / cone_dim)`
    pub r_gen: usize,
    /// `floor(dim_ambient / cone_dim) - 1`; may be negative for tiny `n`.
    pub r_identifiable_bound: i64,
    /// `cone_dim` divides `dim_ambient`.
    pub perfect: bool,
    /// `2 cone_dim < floor(dim_ambient / cone_dim)`: the range where the
    /// asymptotic identifiability argument applies without a computer check.
    pub beyond_computer_range: bool,
}

impl RankTableRow {
    pub fn new(n: usize) -> Self {
        let dim_ambient = binomial(n as u64 + 3, 3) as usize;
        let cone = cone_dim(n);
        let floor = dim_ambient / cone;
        let perfect = dim_ambient.is_multiple_of(cone);
        Self {
            n,
            dim_ambient,
            cone_dim: cone,
            r_gen: dim_ambient.div_ceil(cone),
            r_identifiable_bound: floor as i64 - 1,
            perfect,
            beyond_computer_range: 2 * cone < floor,
        }
    }

    /// The rank certified by the sweep, `r_gen - 1`.
    pub fn certification_rank(&self) -> usize {
        self.r_gen.saturating_sub(1)
    }
}

pub fn rank_table(n_min: usize, n_max: usize) -> Vec<RankTableRow> {
    (n_min.max(1)..=n_max).map(RankTableRow::new).collect()
}
