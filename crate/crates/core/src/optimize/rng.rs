//! xoshiro256+ with splitmix64 seeding.

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// One splitmix64 step: returns the output and the advanced state.
#[inline]
pub fn splitmix64_next(state: u64) -> (u64, u64) {
    let state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (z ^ (z >> 31), state)
}

/// xoshiro256+ generator state. Never all-zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xoshiro256Plus {
    s: [u64; 4],
}

impl Xoshiro256Plus {
    /// Expands a 64-bit seed into the state with four splitmix64 outputs.
    pub fn from_seed(seed: u64) -> Self {
        let mut st = seed;
        let mut s = [0u64; 4];
        for w in &mut s {
            let (v, next) = splitmix64_next(st);
            *w = v;
            st = next;
        }
        if s == [0; 4] {
            s[0] = GOLDEN_GAMMA;
        }
        Xoshiro256Plus { s }
    }

    /// Generator for optimizer instance `index` under a global seed.
    pub fn for_instance(seed: u64, index: u64) -> Self {
        let (derived, _) = splitmix64_next(seed ^ index.wrapping_mul(GOLDEN_GAMMA).rotate_left(17));
        Self::from_seed(derived)
    }

    pub fn state(&self) -> [u64; 4] {
        self.s
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[0].wrapping_add(s[3]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in [0, 1) from the top 53 bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    #[inline]
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let v = lo + (hi - lo) * self.next_f64();
        // rounding can land exactly on hi
        if v >= hi {
            lo.max(hi - (hi - lo) * f64::EPSILON)
        } else {
            v
        }
    }

    /// Uniform integer in [0, n).
    #[inline]
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_f64() * n as f64) as usize).min(n - 1)
    }

    /// Standard normal deviate (Box-Muller, one value per call).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_pure() {
        assert_eq!(splitmix64_next(0).0, 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64_next(123), splitmix64_next(123));
        let (a, s) = splitmix64_next(0);
        assert_ne!(a, splitmix64_next(s).0);
    }

    #[test]
    fn doubles_stay_in_unit_interval() {
        let mut r = Xoshiro256Plus::from_seed(7);
        for _ in 0..1_000_000 {
            let v = r.next_f64();
            assert!((0.0..1.0).contains(&v));
        }
    }

    #[test]
    fn equal_seeds_equal_streams() {
        let mut a = Xoshiro256Plus::from_seed(99);
        let mut b = Xoshiro256Plus::from_seed(99);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn instances_get_distinct_streams() {
        let a = Xoshiro256Plus::for_instance(1, 0);
        let b = Xoshiro256Plus::for_instance(1, 1);
        let c = Xoshiro256Plus::for_instance(2, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn normal_has_plausible_moments() {
        let mut r = Xoshiro256Plus::from_seed(3);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| r.normal()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "{mean}");
        assert!((var - 1.0).abs() < 0.02, "{var}");
    }
}
