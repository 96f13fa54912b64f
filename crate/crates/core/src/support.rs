use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Extension of a hypothesis: a subset of `{1, ..., d}` stored as a bitset.
///
/// Bit `y - 1` is set when `y` belongs to the subset. Two supports over the
/// same domain compare equal exactly when they contain the same integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Support {
    d: u32,
    words: Vec<u64>,
}

impl Support {
    pub fn empty(d: u32) -> Self {
        Support {
            d,
            words: vec![0; (d as usize).div_ceil(64)],
        }
    }

    /// Builds a support from integers; values outside `1..=d` are dropped.
    pub fn from_values<I: IntoIterator<Item = u64>>(d: u32, values: I) -> Self {
        let mut s = Support::empty(d);
        for v in values {
            if v >= 1 && v <= d as u64 {
                s.insert(v as u32);
            }
        }
        s
    }

    /// `{lo, ..., hi}` clipped to the domain.
    pub fn range(d: u32, lo: u32, hi: u32) -> Self {
        let mut s = Support::empty(d);
        for y in lo.max(1)..=hi.min(d) {
            s.insert(y);
        }
        s
    }

    pub fn full(d: u32) -> Self {
        Support::range(d, 1, d)
    }

    pub fn domain_size(&self) -> u32 {
        self.d
    }

    pub fn insert(&mut self, y: u32) {
        debug_assert!(y >= 1 && y <= self.d);
        let i = (y - 1) as usize;
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, y: u32) -> bool {
        if y == 0 || y > self.d {
            return false;
        }
        let i = (y - 1) as usize;
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn contains_all(&self, ys: &[u32]) -> bool {
        ys.iter().all(|&y| self.contains(y))
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u32 * 64 + bit + 1)
            })
        })
    }

    pub fn first(&self) -> Option<u32> {
        self.iter().next()
    }

    pub fn last(&self) -> Option<u32> {
        self.iter().last()
    }

    /// Whether the members form one contiguous block.
    pub fn is_contiguous(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(lo), Some(hi)) => (hi - lo + 1) as usize == self.len(),
            _ => false,
        }
    }

    /// Sorted inclusive runs `[a, b]` covering the support.
    pub fn runs(&self) -> Vec<[u32; 2]> {
        let mut runs: Vec<[u32; 2]> = Vec::new();
        for y in self.iter() {
            match runs.last_mut() {
                Some(last) if last[1] + 1 == y => last[1] = y,
                _ => runs.push([y, y]),
            }
        }
        runs
    }

    /// Inverse of [`Support::runs`]. Values outside the domain are dropped.
    pub fn from_runs(d: u32, runs: &[[u32; 2]]) -> Self {
        let mut s = Support::empty(d);
        for &[a, b] in runs {
            for y in a.max(1)..=b.min(d) {
                s.insert(y);
            }
        }
        s
    }
}

impl fmt::Debug for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Support(d={}, ", self.d)?;
        f.debug_list().entries(self.runs()).finish()?;
        f.write_str(")")
    }
}
