//! The census dynamic programming: a memoized recursion over equivalence
//! classes of spine subtrees, keyed by (size, pool profile, level rank),
//! plus the aggregations `N(n, k)` and the per-`k` size distribution.
//!
//! `count(n, p, s)` returns, per subtree profile, the summed completion
//! weight of every subtree of size `n` whose root has pool profile `p` and
//! level rank `s`. The recursion splits off the left subtree size `i` and
//! the left root index, extends the pool with the left profile, and
//! recurses on the right; an empty left subtree contributes the pool size
//! (a red low edge), an empty right subtree contributes the extended pool
//! size minus one (a red high edge, which may not equal the low child).
//! For `n = 1` the level rank is subtracted: earlier same-index nodes have
//! already claimed that many sink/node pairs. All arithmetic is exact.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Error;
use crate::profile::Profile;

/// Default budget for [`Counter::size_distribution`].
pub const DEFAULT_MAX_VARS: u32 = 7;
/// Environment variable overriding the memoization cap, in MiB.
pub const MEMO_LIMIT_ENV: &str = "BDD_CENSUS_MEMO_LIMIT_MB";
const DEFAULT_MEMO_LIMIT_MB: u64 = 4096;

/// Memo key of one subtree equivalence class.
///
/// The level rank only influences classes of size 1 (the `−s` pair
/// exclusion); larger classes are stored with `level_rank = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CountKey {
    pub size: u32,
    pub pool: Profile,
    pub level_rank: u32,
}

/// Weights per subtree profile, iterated in canonical profile order. Every
/// stored profile has component 0 equal to 0 and last component 1; every
/// stored weight is positive.
pub type ProfileWeights = BTreeMap<Profile, BigUint>;

/// The memoized census counter. Cheap shared reads, synchronized writes;
/// recomputation races are benign because inserts are idempotent.
pub struct Counter {
    memo: RwLock<HashMap<CountKey, Arc<ProfileWeights>>>,
    memo_bytes: AtomicU64,
    memo_limit_bytes: u64,
    max_vars: u32,
}

impl Default for Counter {
    fn default() -> Self {
        Counter::new()
    }
}

impl Counter {
    /// A counter with the default budget; the memo cap can be overridden
    /// through `BDD_CENSUS_MEMO_LIMIT_MB`.
    pub fn new() -> Counter {
        let limit_mb = std::env::var(MEMO_LIMIT_ENV)
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
            .unwrap_or(DEFAULT_MEMO_LIMIT_MB);
        Counter::with_limits(DEFAULT_MAX_VARS, limit_mb)
    }

    pub fn with_limits(max_vars: u32, memo_limit_mb: u64) -> Counter {
        Counter {
            memo: RwLock::new(HashMap::new()),
            memo_bytes: AtomicU64::new(0),
            memo_limit_bytes: memo_limit_mb.saturating_mul(1024 * 1024),
            max_vars,
        }
    }

    pub fn max_vars(&self) -> u32 {
        self.max_vars
    }

    pub fn memo_entries(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    /// Approximate memo footprint in bytes.
    pub fn memo_bytes(&self) -> u64 {
        self.memo_bytes.load(Ordering::Relaxed)
    }

    /// The weight table of the class `(n, p, s)`; see the module docs.
    ///
    /// `p` must be non-empty with `p[0] ≥ 2` (both sinks present) and `n`
    /// at least 1; the root index of the class is `p`'s length.
    pub fn count(
        &self,
        size: u32,
        pool: &Profile,
        level_rank: u32,
    ) -> Result<Arc<ProfileWeights>, Error> {
        assert!(size >= 1);
        assert!(!pool.is_empty() && pool.component(0) >= 2);
        let root_index = pool.len() as u32;

        if size == 1 {
            // A single node with two half edges: ordered pairs over the
            // pool minus the pairs of earlier same-index nodes.
            let pool_size = pool.norm() as i64;
            let pairs = pool_size * (pool_size - 1) - i64::from(level_rank);
            let mut table = ProfileWeights::new();
            if pairs > 0 {
                table.insert(Profile::unit(root_index), BigUint::from(pairs as u64));
            }
            return Ok(Arc::new(table));
        }

        let key = CountKey {
            size,
            pool: pool.clone(),
            level_rank: 0,
        };
        if let Some(hit) = self.memo.read().unwrap().get(&key) {
            return Ok(Arc::clone(hit));
        }

        let mut table = ProfileWeights::new();
        let unit = Profile::unit(root_index);
        for left_size in 0..size {
            let right_size = size - 1 - left_size;
            let lefts: Vec<Arc<ProfileWeights>> = if left_size == 0 {
                vec![Arc::new(ProfileWeights::from([(
                    Profile::empty(),
                    BigUint::from(pool.norm()),
                )]))]
            } else {
                let mut v = Vec::with_capacity(pool.len() - 1);
                for child_index in 1..pool.len() {
                    v.push(self.count(
                        left_size,
                        &pool.prefix(child_index),
                        pool.component(child_index),
                    )?);
                }
                v
            };
            for left_table in &lefts {
                for (left, left_weight) in left_table.iter() {
                    let extended = pool.add(left);
                    let rights: Vec<Arc<ProfileWeights>> = if right_size == 0 {
                        vec![Arc::new(ProfileWeights::from([(
                            Profile::empty(),
                            BigUint::from(extended.norm() - 1),
                        )]))]
                    } else {
                        let mut v = Vec::with_capacity(pool.len() - 1);
                        for child_index in 1..pool.len() {
                            v.push(self.count(
                                right_size,
                                &extended.prefix(child_index),
                                extended.component(child_index),
                            )?);
                        }
                        v
                    };
                    for right_table in &rights {
                        for (right, right_weight) in right_table.iter() {
                            let profile = left.add(right).add(&unit);
                            let weight = left_weight * right_weight;
                            *table.entry(profile).or_insert_with(BigUint::zero) += weight;
                        }
                    }
                }
            }
        }

        let table = Arc::new(table);
        let cost = entry_cost(&key, &table);
        let total = self.memo_bytes.fetch_add(cost, Ordering::Relaxed) + cost;
        if total > self.memo_limit_bytes {
            return Err(Error::MemoLimitExceeded {
                limit_mb: self.memo_limit_bytes / (1024 * 1024),
            });
        }
        self.memo
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::clone(&table));
        Ok(table)
    }

    /// `N(n, k)`: the number of BDDs of root index `k` and size `n`; zero
    /// for `n < 3`.
    pub fn num_bdds(&self, size: u32, vars: u32) -> Result<BigUint, Error> {
        assert!(vars >= 1, "the root index is at least 1");
        if size < 3 {
            return Ok(BigUint::zero());
        }
        let table = self.count(size - 2, &Profile::sinks_only(vars), 0)?;
        Ok(table.values().sum())
    }

    /// All sizes with a positive count, in increasing order. Sizes of BDDs
    /// over `k` variables form one contiguous range starting at 3, so the
    /// scan stops at the first gap (and in any case at size `2^k + 1`, the
    /// full binary tree).
    pub fn size_distribution(&self, vars: u32) -> Result<Distribution, Error> {
        if vars < 1 || vars > self.max_vars {
            return Err(Error::VarsOutOfRange {
                vars,
                limit: self.max_vars,
            });
        }
        let cap = (1u32 << vars) + 1;
        let mut rows = Vec::new();
        for size in 3..=cap {
            let count = self.num_bdds(size, vars)?;
            if count.is_zero() {
                if !rows.is_empty() {
                    break;
                }
            } else {
                rows.push((size, count));
            }
        }
        Ok(Distribution { vars, rows })
    }
}

fn entry_cost(key: &CountKey, table: &ProfileWeights) -> u64 {
    let mut bytes = 64 + 4 * key.pool.len() as u64;
    for (profile, weight) in table.iter() {
        bytes += 64 + 4 * profile.len() as u64 + weight.bits().div_ceil(8);
    }
    bytes
}

/// A complete size distribution for one variable count.
#[derive(Clone, Debug)]
pub struct Distribution {
    vars: u32,
    rows: Vec<(u32, BigUint)>,
}

impl Distribution {
    pub fn vars(&self) -> u32 {
        self.vars
    }

    pub fn rows(&self) -> &[(u32, BigUint)] {
        &self.rows
    }

    pub fn total(&self) -> BigUint {
        self.rows.iter().map(|(_, c)| c).sum()
    }

    pub fn min_size(&self) -> Option<u32> {
        self.rows.first().map(|&(n, _)| n)
    }

    pub fn max_size(&self) -> Option<u32> {
        self.rows.last().map(|&(n, _)| n)
    }

    /// The size with the largest count (the smallest such size on ties).
    pub fn mode(&self) -> Option<u32> {
        self.rows
            .iter()
            .max_by(|(an, ac), (bn, bc)| ac.cmp(bc).then(bn.cmp(an)))
            .map(|&(n, _)| n)
    }
}

/// The exact decimal expansion of `count / total` rounded half-up to
/// `significant` significant digits, without exponent notation.
pub fn decimal_proportion(count: &BigUint, total: &BigUint, significant: usize) -> String {
    assert!(significant >= 1 && !total.is_zero() && count <= total);
    if count.is_zero() {
        return "0".to_string();
    }
    if count == total {
        return format!("1.{}", "0".repeat(significant - 1));
    }
    let ten = BigUint::from(10u32);
    let threshold = ten.pow(significant as u32 - 1);
    let mut scaled = count.clone();
    let mut exp = 0usize;
    while &scaled / total < threshold {
        scaled *= &ten;
        exp += 1;
    }
    let mut quotient = &scaled / total;
    let remainder = &scaled - &quotient * total;
    if &remainder * 2u32 >= *total {
        quotient += 1u32;
    }
    if quotient == ten.pow(significant as u32) {
        quotient = threshold;
        exp -= 1;
    }
    let digits = quotient.to_string();
    if exp >= digits.len() {
        format!("0.{}{}", "0".repeat(exp - digits.len()), digits)
    } else {
        let split = digits.len() - exp;
        format!("{}.{}", &digits[..split], &digits[split..])
    }
}
