use super::check_feasible;
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::stats::mw_count_estimate;

/// Largest estimated `|G(n,d)|` the enumerator will attempt.
pub const ENUMERATION_LIMIT: f64 = 1e8;
const MAX_N: usize = 10;

/// Every labeled d-regular graph on `n` vertices exactly once, in
/// lexicographic order of the include/exclude decisions over vertex pairs
/// `(0,1), (0,2), ..., (n-2,n-1)` (include tried first).
pub fn enumerate_regular(n: usize, d: usize) -> Result<RegularGraphIterator> {
    check_feasible(n, d)?;
    if n > MAX_N {
        return Err(Error::TooLarge {
            what: "vertices for exhaustive enumeration",
            found: n,
            limit: MAX_N,
        });
    }
    if let Ok(log_est) = mw_count_estimate(n, d) {
        if log_est > ENUMERATION_LIMIT.ln() {
            return Err(Error::TooLarge {
                what: "estimated number of regular graphs",
                found: log_est.exp().min(usize::MAX as f64) as usize,
                limit: ENUMERATION_LIMIT as usize,
            });
        }
    }
    let pairs = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    Ok(RegularGraphIterator {
        n,
        d,
        pairs,
        deg: vec![0; n],
        stack: Vec::new(),
        done: false,
    })
}

#[derive(Clone, Debug)]
pub struct RegularGraphIterator {
    n: usize,
    d: usize,
    pairs: Vec<(usize, usize)>,
    deg: Vec<usize>,
    /// One include/exclude decision per decided pair, in pair order.
    stack: Vec<bool>,
    done: bool,
}

impl RegularGraphIterator {
    fn try_push(&mut self, include: bool) -> bool {
        let k = self.stack.len();
        let (i, j) = self.pairs[k];
        let (n, d) = (self.n, self.d);
        let ok = if include {
            self.deg[i] < d && self.deg[j] < d
        } else {
            // remaining undecided pairs after this one: i has (i, j'>j),
            // j has (i'<j with i'>i) and (j, j'>j)
            self.deg[i] + (n - 1 - j) >= d && self.deg[j] + (j - i - 1) + (n - 1 - j) >= d
        };
        if ok {
            if include {
                self.deg[i] += 1;
                self.deg[j] += 1;
            }
            self.stack.push(include);
        }
        ok
    }

    /// Undo decisions until one can be flipped from include to exclude.
    fn backtrack(&mut self) {
        while let Some(inc) = self.stack.pop() {
            if inc {
                let (i, j) = self.pairs[self.stack.len()];
                self.deg[i] -= 1;
                self.deg[j] -= 1;
                if self.try_push(false) {
                    return;
                }
            }
        }
        self.done = true;
    }

    fn current(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for (&(i, j), &inc) in self.pairs.iter().zip(&self.stack) {
            if inc {
                g.add_edge(i, j);
            }
        }
        g
    }
}

impl Iterator for RegularGraphIterator {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        loop {
            if self.done {
                return None;
            }
            if self.stack.len() == self.pairs.len() {
                let complete = self.deg.iter().all(|&x| x == self.d);
                let g = complete.then(|| self.current());
                self.backtrack();
                if let Some(g) = g {
                    debug_assert!(g.is_regular(self.d));
                    return Some(g);
                }
                continue;
            }
            if !(self.try_push(true) || self.try_push(false)) {
                self.backtrack();
            }
        }
    }
}
