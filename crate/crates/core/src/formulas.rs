//! Closed-form dimension and degree counts, as pure functions of the genus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planeprym::prym_parameters;

/// Every numeric count attached to genus `g`, plus the constants of the genus-5 family.
///
/// Absent optional entries serialize as `null` in JSON and as empty CSV cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaTable {
    pub g: u64,
    pub h: u64,
    pub eps: u64,
    pub n: u64,
    pub delta: u64,
    /// `C(n-1, 2) - C(n-4, 2)`, the arithmetic genus of the plane system.
    pub p_a: u64,
    pub dim_rg: u64,
    /// Degree of the forgetful map to `M_g`, the number of nonzero 2-torsion points.
    pub deg_forgetful: u128,
    pub dim_r0g: u64,
    pub dim_r0nb: u64,
    /// `2g + 3`, stated only for `g >= 7`.
    pub dim_tetragonal: Option<u64>,
    /// For `g <= 6` the tetragonal locus is all of `R_g`.
    pub tetragonal_is_rg: bool,
    /// The unirational family of plane models with their nodes: `4h + 9 + 3 eps`.
    pub dim_h: u64,
    /// Covers with two pairs of ramification points over common branch points.
    pub dim_d: u64,
    /// Naive count `3n - 10 - delta` for the Prym-canonical system.
    pub prym_count: i64,
    pub dim_v: u64,
    pub dim_v_prime: u64,
    pub dim_b5: u64,
    pub dim_d05: u64,
    pub dim_v_linear_system: u64,
}

pub const MAX_GENUS: u32 = 64;

fn c2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

pub fn formula_table(g: u32) -> Result<FormulaTable> {
    let p = prym_parameters(g)?;
    let g = g as u64;
    let (h, eps, n, delta) = (p.h as u64, p.eps as u64, p.n as u64, p.delta as u64);
    let t = FormulaTable {
        g,
        h,
        eps,
        n,
        delta,
        p_a: c2(n - 1) - c2(n - 4),
        dim_rg: 3 * g - 3,
        deg_forgetful: u128::MAX >> (128 - 2 * g),
        dim_r0g: 2 * g + 1,
        dim_r0nb: 2 * g - 2,
        dim_tetragonal: (g >= 7).then_some(2 * g + 3),
        tetragonal_is_rg: g <= 6,
        dim_h: 4 * h + 9 + 3 * eps,
        dim_d: 2 * g + 1,
        prym_count: 3 * n as i64 - 10 - delta as i64,
        dim_v: 16,
        dim_v_prime: 16 - 6,
        dim_b5: 10,
        dim_d05: 10,
        dim_v_linear_system: 12,
    };
    let violations = t.violations();
    if !violations.is_empty() {
        return Err(Error::InternalError(format!("formula table for g = {g}: {}", violations.join("; "))));
    }
    Ok(t)
}

impl FormulaTable {
    /// Identities the counts must satisfy among themselves.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut check = |ok: bool, what: &str| {
            if !ok {
                v.push(what.to_string());
            }
        };
        check(self.dim_r0g == self.dim_d, "dim R0_g = dim D");
        check(self.dim_r0nb < self.dim_r0g, "dim R0nb_g < dim R0_g");
        check(self.dim_r0g - self.dim_r0nb == 3, "dim R0_g - dim R0nb_g = 3");
        check(self.g == 2 * self.h + self.eps, "g = 2h + eps");
        check(self.p_a >= self.delta && self.p_a - self.delta == self.g, "p_a - delta = g");
        check(self.prym_count == self.g as i64 - 1, "3n - 10 - delta = g - 1");
        check(self.dim_v == self.dim_v_linear_system + 4, "dim V = 12 + 4");
        v
    }
}

/// Tables for every genus in `range`, each validated.
pub fn formula_tables(range: std::ops::RangeInclusive<u32>) -> Result<Vec<FormulaTable>> {
    range.map(formula_table).collect()
}

pub fn to_csv(tables: &[FormulaTable]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for t in tables {
        w.serialize(t).map_err(|e| Error::InternalError(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InternalError(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InternalError(format!("csv: {e}")))
}
