use crate::error::{Error, Result};
use crate::graph::EdgeKey;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial seed as a pure function of `(master, index)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master ^ 0x5eed_5eed_5eed_5eed).wrapping_add(index.wrapping_mul(GOLDEN)))
}

/// The pure per-edge Bernoulli(p) outcome for one `(seed, round)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeCoin {
    p: f64,
    seed: u64,
    round: u32,
    salt_in: u64,
    salt_out: u64,
    threshold: u64,
}

impl EdgeCoin {
    pub fn new(p: f64, seed: u64, round: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
        }
        let salt_in = mix64(seed.wrapping_add(GOLDEN.wrapping_mul(round as u64 + 1)));
        let salt_out = mix64(salt_in ^ 0xa076_1d64_78bd_642f);
        // alive <=> hash < threshold; p = 1 is handled separately.
        let threshold = (p * 18_446_744_073_709_551_616.0) as u64;
        Ok(EdgeCoin {
            p,
            seed,
            round,
            salt_in,
            salt_out,
            threshold,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    #[inline]
    pub fn alive(&self, e: EdgeKey) -> bool {
        if self.p >= 1.0 {
            return true;
        }
        let h = mix64(mix64(e.packed().wrapping_add(self.salt_in)) ^ self.salt_out);
        h < self.threshold
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let one = EdgeCoin::new(1.0, 1, 0).unwrap();
        let zero = EdgeCoin::new(0.0, 1, 0).unwrap();
        for u in 0..20 {
            for v in u + 1..20 {
                assert!(one.alive(EdgeKey { u, v }));
                assert!(!zero.alive(EdgeKey { u, v }));
            }
        }
        assert!(EdgeCoin::new(1.5, 1, 0).is_err());
        assert!(EdgeCoin::new(f64::NAN, 1, 0).is_err());
    }

    #[test]
    fn unbiased_at_point_three() {
        let coin = EdgeCoin::new(0.3, 77, 0).unwrap();
        let draws = 100_000u32;
        let alive = (0..draws)
            .filter(|&i| coin.alive(EdgeKey { u: i / 400, v: 400 + i }))
            .count() as f64;
        let frac = alive / draws as f64;
        let sigma = (0.3f64 * 0.7 / draws as f64).sqrt();
        assert!((frac - 0.3).abs() <= 3.0 * sigma, "fraction {frac}");
    }

    #[test]
    fn rounds_are_uncorrelated() {
        let p = 0.5;
        let a = EdgeCoin::new(p, 123, 1).unwrap();
        let b = EdgeCoin::new(p, 123, 2).unwrap();
        let n = 10_000u32;
        let (mut sa, mut sb, mut sab) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let e = EdgeKey { u: i % 97, v: 100 + i };
            let x = a.alive(e) as u8 as f64;
            let y = b.alive(e) as u8 as f64;
            sa += x;
            sb += y;
            sab += x * y;
        }
        let nf = n as f64;
        let cov = sab / nf - (sa / nf) * (sb / nf);
        let corr = cov / (p * (1.0 - p));
        // Under independence the sample correlation has sd about 1/sqrt(n).
        assert!(corr.abs() <= 3.0 / nf.sqrt(), "corr {corr}");
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(7, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }
}
