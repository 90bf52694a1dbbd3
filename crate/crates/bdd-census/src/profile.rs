//! Index profiles: per-index node counts with a padded sum.

use std::cmp::Ordering;
use std::fmt;

/// A list of non-negative integers where component `i` counts the nodes of
/// index `i` in some set of BDD nodes.
///
/// Profiles of different lengths can be summed: the shorter operand is
/// padded with the longer operand's tail. Profiles are ordered by length
/// first, then lexicographically from component 0; this "canonical profile
/// order" fixes the iteration order of every weight table and hence the
/// generation order of BDDs.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Profile(Vec<u32>);

impl Profile {
    /// The empty profile (the profile of an empty set of nodes).
    pub fn empty() -> Profile {
        Profile(Vec::new())
    }

    /// The profile `(0, …, 0, 1)` with `k + 1` components: a single node of
    /// index `k`.
    pub fn unit(k: u32) -> Profile {
        let mut v = vec![0; k as usize + 1];
        v[k as usize] = 1;
        Profile(v)
    }

    /// The pool profile `(2, 0, …, 0)` of length `k`: both sinks and nothing
    /// else, as seen by a root of index `k`.
    pub fn sinks_only(k: u32) -> Profile {
        let mut v = vec![0; k as usize];
        v[0] = 2;
        Profile(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    /// Component `i`, defaulting to 0 past the end.
    pub fn component(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// The first `j` components as a new profile.
    pub fn prefix(&self, j: usize) -> Profile {
        debug_assert!(j <= self.0.len());
        Profile(self.0[..j].to_vec())
    }

    /// `‖p‖`: the sum of all components.
    pub fn norm(&self) -> u64 {
        self.0.iter().map(|&c| u64::from(c)).sum()
    }

    /// Padded sum: componentwise where both operands are defined, the longer
    /// operand's tail otherwise.
    pub fn add(&self, other: &Profile) -> Profile {
        let (short, long) = if self.0.len() <= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut out = long.clone();
        for (o, s) in out.iter_mut().zip(short.iter()) {
            *o += s;
        }
        Profile(out)
    }
}

impl From<Vec<u32>> for Profile {
    fn from(v: Vec<u32>) -> Profile {
        Profile(v)
    }
}

impl Ord for Profile {
    fn cmp(&self, other: &Profile) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Profile {
    fn partial_cmp(&self, other: &Profile) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padded_sum() {
        let v = Profile::from(vec![2, 0]);
        let w = Profile::from(vec![0, 1, 1, 3]);
        assert_eq!(v.add(&w), Profile::from(vec![2, 1, 1, 3]));
        assert_eq!(w.add(&v), Profile::from(vec![2, 1, 1, 3]));
        assert_eq!(v.add(&Profile::empty()), v);
    }

    #[test]
    fn norm_and_prefix() {
        let p = Profile::from(vec![2, 1, 0, 3]);
        assert_eq!(p.norm(), 6);
        assert_eq!(p.prefix(2), Profile::from(vec![2, 1]));
        assert_eq!(Profile::sinks_only(3), Profile::from(vec![2, 0, 0]));
        assert_eq!(Profile::unit(2), Profile::from(vec![0, 0, 1]));
    }

    #[test]
    fn canonical_order_is_length_then_lex() {
        let mut profiles = vec![
            Profile::from(vec![0, 2, 1]),
            Profile::from(vec![0, 1]),
            Profile::from(vec![0, 1, 1]),
            Profile::empty(),
        ];
        profiles.sort();
        assert_eq!(
            profiles,
            vec![
                Profile::empty(),
                Profile::from(vec![0, 1]),
                Profile::from(vec![0, 1, 1]),
                Profile::from(vec![0, 2, 1]),
            ]
        );
    }
}
