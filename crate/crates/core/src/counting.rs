//! Exact rule counts and big Ramsey degrees.
//!
//! `P_p(n, ω^d·k)` counts coloring rules with `p` classes; `S_p(n, α)` counts
//! general rules. The degree `T(n, α)` is the sum of `S_p` over `p ≤ n·d`.
//! Everything is computed from the recurrences alone, memoized per thread.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::ordinal::Ordinal;

pub type BigCount = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum MemoKey {
    P {
        n: usize,
        d: usize,
        k: u64,
        p: usize,
    },
    S {
        n: usize,
        alpha: Vec<u64>,
        p: usize,
    },
}

/// A memo table for the recurrences. Results do not depend on whether
/// memoization is enabled.
#[derive(Debug, Clone)]
pub struct Counter {
    memo: HashMap<MemoKey, BigCount>,
    pascal: Vec<Vec<BigCount>>,
    memoize: bool,
}

impl Default for Counter {
    fn default() -> Self {
        Self::new()
    }
}

impl Counter {
    pub fn new() -> Self {
        Counter {
            memo: HashMap::new(),
            pascal: vec![vec![BigCount::one()]],
            memoize: true,
        }
    }

    /// A counter that recomputes everything; slow, for cross-checks only.
    pub fn without_memo() -> Self {
        Counter {
            memoize: false,
            ..Self::new()
        }
    }

    fn pascal(&mut self, n: usize, r: usize) -> BigCount {
        if r > n {
            return BigCount::zero();
        }
        while self.pascal.len() <= n {
            let prev = self.pascal.last().expect("nonempty triangle");
            let mut row = Vec::with_capacity(prev.len() + 1);
            row.push(BigCount::one());
            for w in prev.windows(2) {
                row.push(&w[0] + &w[1]);
            }
            row.push(BigCount::one());
            self.pascal.push(row);
        }
        self.pascal[n][r].clone()
    }

    fn lookup(&self, key: &MemoKey) -> Option<BigCount> {
        self.memoize.then(|| self.memo.get(key).cloned()).flatten()
    }

    fn store(&mut self, key: MemoKey, value: &BigCount) {
        if self.memoize {
            self.memo.insert(key, value.clone());
        }
    }

    /// `P_p(n, ω^d·k)`.
    pub fn p_size(&mut self, n: usize, d: usize, k: u64, p: usize) -> BigCount {
        let key = MemoKey::P { n, d, k, p };
        if let Some(hit) = self.lookup(&key) {
            return hit;
        }
        let value = if d == 0 && n as u64 > k {
            BigCount::zero()
        } else if n == 0 {
            if p == 0 {
                BigCount::one()
            } else {
                BigCount::zero()
            }
        } else if d == 0 {
            if p == 0 {
                binomial(k, n as u64)
            } else {
                BigCount::zero()
            }
        } else if d == 1 {
            if n == p {
                BigCount::from(k).pow(n as u32)
            } else {
                BigCount::zero()
            }
        } else if p == 0 {
            BigCount::zero()
        } else {
            let mut sum = BigCount::zero();
            for j in 1..=n {
                for i in 0..p {
                    let head = self.p_size(j, d - 1, 1, i);
                    if head.is_zero() {
                        continue;
                    }
                    let rest = self.p_size(n - j, d, k, p - 1 - i);
                    sum += self.pascal(p - 1, i) * head * rest;
                }
            }
            sum * k
        };
        self.store(key, &value);
        value
    }

    /// `P(n, ω^d·k)`, the number of coloring rules.
    pub fn p_total(&mut self, n: usize, d: usize, k: u64) -> BigCount {
        (0..=n * d).map(|p| self.p_size(n, d, k, p)).sum()
    }

    /// `S_p(n, α)`.
    pub fn s_size(&mut self, n: usize, alpha: &Ordinal, p: usize) -> BigCount {
        let d = alpha.degree();
        if d == 0 {
            return self.p_size(n, 0, alpha.coeff(0), p);
        }
        let key = MemoKey::S {
            n,
            alpha: alpha.coeffs().to_vec(),
            p,
        };
        if let Some(hit) = self.lookup(&key) {
            return hit;
        }
        let k = alpha.leading_coeff();
        let lower = alpha.lower_part();
        let mut sum = BigCount::zero();
        for j in 0..=n {
            for i in 0..=p {
                let top = self.p_size(j, d, k, i);
                if top.is_zero() {
                    continue;
                }
                let rest = self.s_size(n - j, &lower, p - i);
                sum += self.pascal(p, i) * top * rest;
            }
        }
        self.store(key, &sum);
        sum
    }

    /// `T(n, α)`. Zero for `n ≥ 1` on the empty ordinal.
    pub fn degree(&mut self, n: usize, alpha: &Ordinal) -> BigCount {
        (0..=n * alpha.degree())
            .map(|p| self.s_size(n, alpha, p))
            .sum()
    }
}

/// Exact `binom(n, r)` for possibly large `n`.
pub fn binomial(n: u64, r: u64) -> BigCount {
    if r > n {
        return BigCount::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigCount::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

thread_local! {
    static COUNTER: RefCell<Counter> = RefCell::new(Counter::new());
}

fn with_counter<T>(f: impl FnOnce(&mut Counter) -> T) -> T {
    COUNTER.with(|c| f(&mut c.borrow_mut()))
}

/// `P_p(n, ω^d·k)`.
pub fn count_p_size(n: usize, d: usize, k: u64, p: usize) -> BigCount {
    with_counter(|c| c.p_size(n, d, k, p))
}

/// `P(n, ω^d·k)`.
pub fn count_p_total(n: usize, d: usize, k: u64) -> BigCount {
    with_counter(|c| c.p_total(n, d, k))
}

/// `S_p(n, α)`.
pub fn count_s_size(n: usize, alpha: &Ordinal, p: usize) -> BigCount {
    with_counter(|c| c.s_size(n, alpha, p))
}

/// The big Ramsey degree `T(n, α)`.
pub fn degree(n: usize, alpha: &Ordinal) -> BigCount {
    with_counter(|c| c.degree(n, alpha))
}

/// `T(n, ζ) = 2^n` for the integers.
pub fn degree_zeta(n: usize) -> BigCount {
    BigCount::one() << n
}

/// `table[d][n] = T(n, ω^d)` for `d ≤ max_d`, `n ≤ max_n`.
pub fn table(max_n: usize, max_d: usize) -> Vec<Vec<BigCount>> {
    (0..=max_d)
        .map(|d| {
            let alpha = Ordinal::omega_power(d, 1);
            (0..=max_n).map(|n| degree(n, &alpha)).collect()
        })
        .collect()
}
