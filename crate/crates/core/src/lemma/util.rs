use crate::field::Field;
use crate::set::OpKind;
use std::collections::HashSet;

/// Distinct-value counter with an epoch-stamped table for enumerable fields.
pub(crate) struct Distinct {
    seen: Vec<u32>,
    epoch: u32,
    hashed: HashSet<u32>,
}

impl Distinct {
    pub(crate) fn new(q: u64) -> Distinct {
        let seen = if q <= 1 << 20 { vec![0; q as usize] } else { Vec::new() };
        Distinct { seen, epoch: 0, hashed: HashSet::new() }
    }

    pub(crate) fn count(&mut self, values: impl Iterator<Item = u32>) -> usize {
        if self.seen.is_empty() {
            self.hashed.clear();
            self.hashed.extend(values);
            return self.hashed.len();
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let mut n = 0;
        for v in values {
            let s = &mut self.seen[v as usize];
            if *s != self.epoch {
                *s = self.epoch;
                n += 1;
            }
        }
        n
    }

    /// `|{x op y}|` for `op` in {+, -, ×}.
    pub(crate) fn op_size(&mut self, f: &Field, xs: &[u32], ys: &[u32], kind: OpKind) -> usize {
        self.count(xs.iter().flat_map(|&x| ys.iter().map(move |&y| kind.apply(f, x, y).unwrap_or(0))))
    }
}

/// All `k`-subsets of `0..n` as bit masks, in increasing order (n <= 31).
pub(crate) fn masks_of_size(n: u32, k: u32) -> Vec<u32> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut m: u32 = (1u32 << k) - 1;
    let limit = 1u64 << n;
    while (m as u64) < limit {
        out.push(m);
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
        if r == 0 {
            break;
        }
    }
    out
}

pub(crate) fn select(elems: &[u32], mask: u32) -> Vec<u32> {
    elems.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect()
}
