/// Table of `ln k!` for `k <= n`.
#[derive(Debug, Clone)]
pub(crate) struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub(crate) fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        table.push(0.0);
        for k in 1..=n {
            acc += (k as f64).ln();
            table.push(acc);
        }
        Self { table }
    }

    pub(crate) fn ln_factorial(&self, k: usize) -> f64 {
        self.table[k]
    }

    pub(crate) fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        debug_assert!(k <= n);
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

/// Exact `C(n, k)` as `u128`, saturating at `u128::MAX`.
pub(crate) fn binomial_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Weak compositions of `total` into `parts` nonnegative parts, in
/// lexicographic order of the part vector.
pub(crate) struct Compositions {
    current: Vec<usize>,
    total: usize,
    done: bool,
}

impl Compositions {
    pub(crate) fn new(total: usize, parts: usize) -> Self {
        assert!(parts >= 1, "compositions need at least one part");
        let mut current = vec![0; parts];
        current[parts - 1] = total;
        Self {
            current,
            total,
            done: false,
        }
    }

    /// Number of weak compositions, `C(total + parts - 1, parts - 1)`.
    pub(crate) fn count(total: usize, parts: usize) -> u128 {
        binomial_u128((total + parts - 1) as u128, (parts - 1) as u128)
    }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // advance: find the rightmost position (excluding the last) that can
        // take one unit from the tail
        let n = self.current.len();
        if n == 1 {
            self.done = true;
            return Some(out);
        }
        let mut i = n - 1;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            let used: usize = self.current[..=i].iter().sum();
            if used < self.total {
                self.current[i] += 1;
                for slot in self.current[i + 1..].iter_mut() {
                    *slot = 0;
                }
                let used: usize = self.current[..n - 1].iter().sum();
                self.current[n - 1] = self.total - used;
                break;
            }
        }
        Some(out)
    }
}
