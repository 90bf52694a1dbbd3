//! Shared fixtures for the census benchmarks.

use bdd_census::Counter;

/// A counter with every table needed for sizes up to `max_vars` in memo.
pub fn warm_counter(max_vars: u32) -> Counter {
    let counter = Counter::new();
    for vars in 1..=max_vars {
        counter.size_distribution(vars).expect("within budget");
    }
    counter
}

/// A pseudorandom 64-bit truth-table stream (SplitMix64).
pub struct Tables {
    state: u64,
}

impl Tables {
    pub fn new(seed: u64) -> Tables {
        Tables { state: seed }
    }

    pub fn next_code(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}
