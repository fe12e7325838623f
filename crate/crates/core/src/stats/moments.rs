//! Streaming joint moments with exact power sums.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Every finite f64 times `2^FIXED_SHIFT` is an integer.
const FIXED_SHIFT: u32 = 1074;

pub const DEFAULT_MOMENT_DEGREE: u32 = 8;

/// Joint power sums `sum_t prod_i x_{t,i}^{a_i}` for every exponent vector
/// with `1 <= |a| <= degree`, kept as exact integers.
///
/// Sums are exact, so merging is associative and commutative bit for bit and
/// does not depend on the order samples arrive in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentAccumulator {
    dim: usize,
    degree: u32,
    count: u64,
    keys: Vec<Vec<u8>>,
    /// Index into `keys` of the key with one exponent removed, and which one.
    parents: Vec<(usize, usize)>,
    index: HashMap<Vec<u8>, usize>,
    /// `sums[i]` scaled by `2^(FIXED_SHIFT * |keys[i]|)`.
    sums: Vec<BigInt>,
}

fn exponent_vectors(dim: usize, degree: u32) -> Vec<Vec<u8>> {
    // ordered by total degree so parents come first
    let mut out: Vec<Vec<u8>> = Vec::new();
    let mut layer: Vec<Vec<u8>> = vec![vec![0; dim]];
    for _ in 0..degree {
        let mut next = Vec::new();
        for a in &layer {
            // only raise coordinates at or after the last nonzero one
            let start = a.iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in start..dim {
                let mut b = a.clone();
                b[i] += 1;
                next.push(b);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn to_fixed(x: f64) -> Result<BigInt> {
    if !x.is_finite() {
        return Err(Error::Numeric(format!("non-finite sample value {x}")));
    }
    if x == 0.0 {
        return Ok(BigInt::zero());
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    Ok(BigInt::from(sign * mant as i64) << (e + FIXED_SHIFT as i64) as usize)
}

impl MomentAccumulator {
    pub fn new(dim: usize) -> Self {
        Self::with_degree(dim, DEFAULT_MOMENT_DEGREE)
    }

    /// Power sums up to total degree `degree` (at least 2).
    pub fn with_degree(dim: usize, degree: u32) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        assert!(degree >= 2, "need at least second moments");
        let keys = exponent_vectors(dim, degree);
        let index: HashMap<Vec<u8>, usize> =
            keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        let parents = keys
            .iter()
            .map(|k| {
                let last = k.iter().rposition(|&e| e > 0).unwrap();
                let mut parent = k.clone();
                parent[last] -= 1;
                let pi = if parent.iter().all(|&e| e == 0) {
                    usize::MAX
                } else {
                    index[&parent]
                };
                (pi, last)
            })
            .collect();
        let sums = vec![BigInt::zero(); keys.len()];
        MomentAccumulator {
            dim,
            degree,
            count: 0,
            keys,
            parents,
            index,
            sums,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn push(&mut self, x: &[f64]) -> Result<()> {
        assert_eq!(x.len(), self.dim, "sample has the wrong dimension");
        let fixed: Vec<BigInt> = x.iter().map(|&v| to_fixed(v)).collect::<Result<_>>()?;
        let mut vals: Vec<BigInt> = Vec::with_capacity(self.keys.len());
        for (i, &(parent, coord)) in self.parents.iter().enumerate() {
            let v = if parent == usize::MAX {
                fixed[coord].clone()
            } else {
                &vals[parent] * &fixed[coord]
            };
            self.sums[i] += &v;
            vals.push(v);
        }
        self.count += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &MomentAccumulator) {
        assert_eq!(self.dim, other.dim, "merging accumulators of different dimension");
        assert_eq!(self.degree, other.degree, "merging accumulators of different degree");
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
        self.count += other.count;
    }

    /// Exact `sum_t prod_i x_{t,i}^{a_i}`.
    pub fn power_sum(&self, exponents: &[u8]) -> BigRational {
        assert_eq!(exponents.len(), self.dim);
        let total: u32 = exponents.iter().map(|&e| e as u32).sum();
        if total == 0 {
            return BigRational::from_integer(self.count.into());
        }
        let i = *self
            .index
            .get(exponents)
            .unwrap_or_else(|| panic!("degree {total} exceeds the accumulator's {}", self.degree));
        BigRational::new(self.sums[i].clone(), BigInt::from(1) << (FIXED_SHIFT * total) as usize)
    }

    fn unit(&self, i: usize, power: u8) -> Vec<u8> {
        let mut e = vec![0; self.dim];
        e[i] = power;
        e
    }

    fn need(&self, needed: usize) -> Result<()> {
        if (self.count as usize) < needed {
            return Err(Error::InsufficientData {
                needed,
                got: self.count as usize,
            });
        }
        Ok(())
    }

    fn exact_mean(&self, i: usize) -> BigRational {
        self.power_sum(&self.unit(i, 1)) / BigRational::from_integer(self.count.into())
    }

    pub fn mean(&self, i: usize) -> Result<f64> {
        self.need(1)?;
        Ok(ratio_to_f64(&self.exact_mean(i)))
    }

    pub fn means(&self) -> Result<Vec<f64>> {
        (0..self.dim).map(|i| self.mean(i)).collect()
    }

    /// Unbiased covariance (divisor `count - 1`).
    pub fn covariance(&self, i: usize, j: usize) -> Result<f64> {
        self.need(2)?;
        let mut e = vec![0u8; self.dim];
        e[i] += 1;
        e[j] += 1;
        let n = BigRational::from_integer(self.count.into());
        let sij = self.power_sum(&e);
        let si = self.power_sum(&self.unit(i, 1));
        let sj = self.power_sum(&self.unit(j, 1));
        let num = sij - si * sj / &n;
        Ok(ratio_to_f64(&(num / (n - BigRational::from_integer(1.into())))))
    }

    pub fn variance(&self, i: usize) -> Result<f64> {
        self.covariance(i, i)
    }

    pub fn covariance_matrix(&self) -> Result<Vec<Vec<f64>>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.covariance(i, j)).collect())
            .collect()
    }

    /// Population central moment `(1/N) sum (x_i - mean)^r`, exact until the
    /// final rounding.
    pub fn central_moment(&self, i: usize, r: u32) -> Result<f64> {
        self.need(1)?;
        assert!(r <= self.degree, "moment order exceeds the accumulator degree");
        let n = BigRational::from_integer(self.count.into());
        let neg_mean = -self.exact_mean(i);
        let mut total = BigRational::zero();
        let mut binom = BigInt::from(1);
        for j in 0..=r {
            let sj = self.power_sum(&self.unit(i, j as u8));
            let mut term = sj * BigRational::from_integer(binom.clone());
            for _ in 0..(r - j) {
                term *= &neg_mean;
            }
            total += term;
            binom = binom * BigInt::from(r - j) / BigInt::from(j + 1);
        }
        Ok(ratio_to_f64(&(total / n)))
    }

    /// `m3 / m2^{3/2}` from population central moments.
    pub fn skewness(&self, i: usize) -> Result<f64> {
        self.need(2)?;
        let m2 = self.central_moment(i, 2)?;
        Ok(self.central_moment(i, 3)? / m2.powf(1.5))
    }

    /// `m4 / m2^2 - 3`.
    pub fn excess_kurtosis(&self, i: usize) -> Result<f64> {
        self.need(2)?;
        let m2 = self.central_moment(i, 2)?;
        Ok(self.central_moment(i, 4)? / (m2 * m2) - 3.0)
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Accumulate a finite stream of `k`-vectors.
pub fn estimate_moments<I, V>(dim: usize, samples: I) -> Result<MomentAccumulator>
where
    I: IntoIterator<Item = V>,
    V: AsRef<[f64]>,
{
    let mut acc = MomentAccumulator::new(dim);
    for s in samples {
        acc.push(s.as_ref())?;
    }
    Ok(acc)
}
