//! Seeded sampling that is reproducible from the algorithm description alone.
//!
//! The generator is SplitMix64: the state advances by `0x9E3779B97F4A7C15`
//! per draw and each output is the state passed through the SplitMix64
//! finalizer. Bounded draws use rejection sampling on the top of the range so
//! every value in `0..n` is equally likely, and subsets are the first `m`
//! slots of a partial Fisher-Yates shuffle of `0..n`, returned sorted.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent stream for `(seed, labels...)`: each label is folded in as
    /// `state = mix(state ^ label) + GOLDEN`.
    pub fn derive(seed: u64, labels: &[u64]) -> Self {
        let state = labels.iter().fold(mix(seed), |s, &l| mix(s ^ l).wrapping_add(GOLDEN));
        SplitMix64 { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let reject_under = n.wrapping_neg() % n;
        loop {
            let x = self.next_u64();
            if x >= reject_under {
                return x % n;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn in_range(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi);
        lo + self.below(hi - lo + 1)
    }

    /// Uniform `m`-subset of `0..n`, sorted.
    pub fn subset(&mut self, n: usize, m: usize) -> Vec<usize> {
        assert!(m <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..m {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(m);
        pool.sort_unstable();
        pool
    }

    /// Subset of `0..n` whose size is uniform in `lo..=hi`.
    pub fn sized_subset(&mut self, n: usize, lo: usize, hi: usize) -> Vec<usize> {
        let m = self.in_range(lo as u64, hi as u64) as usize;
        self.subset(n, m)
    }
}
