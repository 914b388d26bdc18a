/// Prefix sums over `0..n` with point updates.
pub(crate) struct Fenwick {
    tree: Vec<i64>,
}

impl Fenwick {
    pub(crate) fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0; n + 1],
        }
    }

    pub(crate) fn add(&mut self, i: usize, delta: i64) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over `0..i`.
    pub(crate) fn prefix(&self, i: usize) -> i64 {
        let mut i = i;
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    }

    /// Sum over `lo..=hi`.
    pub(crate) fn range_sum(&self, lo: usize, hi: usize) -> i64 {
        self.prefix(hi + 1) - self.prefix(lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_sums() {
        let values = [3i64, -1, 4, 1, -5, 9, 2, 6];
        let mut f = Fenwick::new(values.len());
        for (i, &x) in values.iter().enumerate() {
            f.add(i, x);
        }
        for lo in 0..values.len() {
            for hi in lo..values.len() {
                assert_eq!(f.range_sum(lo, hi), values[lo..=hi].iter().sum::<i64>());
            }
        }
    }
}
