use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical data of the plane model: `g = 2h + eps`, curves of degree `n`
/// with an `(n-4)`-fold point and `delta` nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrymParameters {
    pub g: u32,
    pub h: u32,
    pub eps: u32,
    pub n: u32,
    pub delta: u32,
}

pub(crate) fn binom2(x: i64) -> i64 {
    x * (x - 1) / 2
}

pub fn prym_parameters(g: u32) -> Result<PrymParameters> {
    if g < 5 {
        return Err(Error::GenusTooSmall(g));
    }
    let h = g / 2;
    let eps = g % 2;
    let n = h + 3 + eps;
    let ni = n as i64;
    let delta = binom2(ni - 1) - binom2(ni - 4) - g as i64;
    debug_assert_eq!(delta, (h + 2 * eps) as i64);
    Ok(PrymParameters { g, h, eps, n, delta: delta as u32 })
}

impl PrymParameters {
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn delta(&self) -> usize {
        self.delta as usize
    }

    /// Projective dimension of the base system of degree `n`.
    pub fn expected_base(&self) -> i64 {
        2 * self.h as i64 + 9 - self.eps as i64
    }

    pub fn expected_claim31(&self) -> i64 {
        2 * self.h as i64 - 1 - self.eps as i64
    }

    pub fn expected_claim32(&self) -> i64 {
        2 * self.h as i64 + 1 - self.eps as i64
    }

    /// Arithmetic genus of the base system minus the nodes.
    pub fn geometric_genus(&self) -> i64 {
        let n = self.n as i64;
        binom2(n - 1) - binom2(n - 4) - self.delta as i64
    }

    /// Naive dimension count for the Prym-canonical system, `3n - 10 - delta`.
    pub fn prym_count(&self) -> i64 {
        3 * self.n as i64 - 10 - self.delta as i64
    }

    /// Naive count with the four `q` conditions removed, `3n - 6 - delta`.
    pub fn prym_count_without_q(&self) -> i64 {
        3 * self.n as i64 - 6 - self.delta as i64
    }
}
