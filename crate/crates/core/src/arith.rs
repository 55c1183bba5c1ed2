//! Sums-of-squares counts r_k(n), the divisor function and d̃_k(n).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RkMethod {
    Enumeration,
    Convolution,
}

/// r_k(0..=nmax).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RkTable {
    pub k: u32,
    pub nmax: usize,
    pub values: Vec<u64>,
    pub method: RkMethod,
}

impl RkTable {
    pub fn get(&self, n: usize) -> u64 {
        self.values[n]
    }
}

/// Enumeration limits for the brute-force oracle.
pub const ENUM_MAX_K: u32 = 8;
pub const ENUM_MAX_N: usize = 1_000_000;

/// r_k by direct lattice-point counting.
///
/// Points are visited as non-decreasing tuples 0 ≤ a₁ ≤ … ≤ a_k; each one stands for
/// (number of distinct orderings) × 2^{#nonzero} signed, ordered vectors.
pub fn rk_enumerate(k: u32, nmax: usize) -> Result<RkTable> {
    if k == 0 || k > ENUM_MAX_K || nmax > ENUM_MAX_N {
        return Err(Error::ScaleExceeded(format!("k={k}, nmax={nmax}")));
    }
    let mut values = vec![0u64; nmax + 1];
    let mut tuple = Vec::with_capacity(k as usize);
    let fact: Vec<u64> = (0..=k as u64).scan(1u64, |f, i| {
        if i > 0 {
            *f *= i;
        }
        Some(*f)
    }).collect();
    enumerate_rec(k as usize, 0, 0, nmax, &mut tuple, &mut values, &fact)?;
    Ok(RkTable { k, nmax, values, method: RkMethod::Enumeration })
}

fn enumerate_rec(
    k: usize,
    start: usize,
    partial: usize,
    nmax: usize,
    tuple: &mut Vec<usize>,
    values: &mut [u64],
    fact: &[u64],
) -> Result<()> {
    if tuple.len() == k {
        let mut weight = fact[k];
        let mut run = 1usize;
        for i in 1..=k {
            if i < k && tuple[i] == tuple[i - 1] {
                run += 1;
            } else {
                weight /= fact[run];
                run = 1;
            }
        }
        let nonzero = tuple.iter().filter(|&&a| a != 0).count();
        weight <<= nonzero;
        values[partial] = values[partial]
            .checked_add(weight)
            .ok_or_else(|| Error::Overflow(format!("r_{k}({partial})")))?;
        return Ok(());
    }
    let left = k - tuple.len();
    let mut a = start;
    // remaining entries are all ≥ a
    while partial + left * a * a <= nmax {
        tuple.push(a);
        enumerate_rec(k, a, partial + a * a, nmax, tuple, values, fact)?;
        tuple.pop();
        a += 1;
    }
    Ok(())
}

/// r_k by peeling one square off at a time: r_k(n) = Σ_j w(j) r_{k−1}(n − j²),
/// w(0) = 1, w(j) = 2 for j ≥ 1.
pub fn rk_convolution(k: u32, nmax: usize) -> Result<RkTable> {
    if k == 0 {
        return Err(Error::DomainError("k must be positive".into()));
    }
    Ok(rk_convolution_all(k, nmax)?.pop().expect("k ≥ 1 tables"))
}

/// Tables r_1, …, r_k on 0..=nmax from a single peeling pass (entry j holds r_{j+1}).
pub fn rk_convolution_all(k: u32, nmax: usize) -> Result<Vec<RkTable>> {
    let mut out: Vec<RkTable> = Vec::with_capacity(k as usize);
    let mut prev = vec![0u64; nmax + 1];
    prev[0] = 1;
    for level in 1..=k {
        let mut next = vec![0u64; nmax + 1];
        for (n, slot) in next.iter_mut().enumerate() {
            let mut acc = prev[n];
            let mut j = 1usize;
            while j * j <= n {
                let add = prev[n - j * j]
                    .checked_mul(2)
                    .ok_or_else(|| Error::Overflow(format!("r({n})")))?;
                acc = acc.checked_add(add).ok_or_else(|| Error::Overflow(format!("r({n})")))?;
                j += 1;
            }
            *slot = acc;
        }
        out.push(RkTable { k: level, nmax, values: next.clone(), method: RkMethod::Convolution });
        prev = next;
    }
    Ok(out)
}

/// Number of positive divisors.
pub fn divisor_d(n: u64) -> u64 {
    assert!(n >= 1, "divisor_d needs n ≥ 1");
    let mut count = 0;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            count += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    count
}

/// d̃_k(n) = Σ_{d|n} r_k(d) r_k(n/d) for n = 0..=nmax (index 0 is 0).
pub fn dtilde(k: u32, nmax: usize) -> Result<Vec<u64>> {
    let r = rk_convolution(k, nmax)?;
    let mut out = vec![0u64; nmax + 1];
    for d in 1..=nmax {
        let rd = r.values[d];
        if rd == 0 {
            continue;
        }
        let mut m = 1usize;
        while d * m <= nmax {
            let rm = r.values[m];
            if rm != 0 {
                let prod = rd.checked_mul(rm).ok_or_else(|| Error::Overflow(format!("d̃({})", d * m)))?;
                out[d * m] = out[d * m]
                    .checked_add(prod)
                    .ok_or_else(|| Error::Overflow(format!("d̃({})", d * m)))?;
            }
            m += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(rk_enumerate(1, 10).unwrap().get(4), 2);
        assert_eq!(rk_enumerate(2, 0).unwrap().get(0), 1);
        assert_eq!(rk_enumerate(3, 5).unwrap().get(1), 6);
        assert_eq!(rk_convolution(2, 5).unwrap().get(1), 4);
        assert_eq!(rk_convolution(4, 5).unwrap().get(1), 8);
        assert_eq!(rk_convolution(1, 5).unwrap().get(3), 0);
    }

    #[test]
    fn enumeration_matches_convolution() {
        for k in 1..=6 {
            assert_eq!(rk_enumerate(k, 300).unwrap().values, rk_convolution(k, 300).unwrap().values);
        }
    }

    #[test]
    fn enumeration_limits() {
        assert!(matches!(rk_enumerate(9, 10), Err(Error::ScaleExceeded(_))));
        assert!(matches!(rk_enumerate(2, 2_000_000), Err(Error::ScaleExceeded(_))));
    }

    #[test]
    fn divisor_counts() {
        assert_eq!(divisor_d(1), 1);
        assert_eq!(divisor_d(4), 3);
        assert_eq!(divisor_d(12), 6);
    }

    #[test]
    fn dtilde_examples() {
        let d1 = dtilde(1, 10).unwrap();
        assert_eq!(d1[4], 8);
        assert_eq!(d1[3], 0);
        assert_eq!(dtilde(2, 4).unwrap()[2], 32);
    }

    #[test]
    fn dtilde_one_on_squares_is_four_divisors_of_root() {
        let d1 = dtilde(1, 400).unwrap();
        for n in 1..=400usize {
            let m = (n as f64).sqrt().round() as usize;
            if m * m == n {
                assert_eq!(d1[n], 4 * divisor_d(m as u64));
            } else {
                assert_eq!(d1[n], 0);
            }
        }
    }
}
