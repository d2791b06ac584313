use num_integer::Integer;

use super::system::SystemMap;
use crate::error::{Error, Result};

/// Functional-graph structure of a point map: every orbit runs down a tail
/// into exactly one cycle.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Steps until the orbit of each point enters its cycle.
    pub depth: Vec<usize>,
    /// Length of the cycle each point eventually enters.
    pub cycle_len: Vec<usize>,
    /// Identifier of that cycle, numbered in order of discovery.
    pub cycle_id: Vec<usize>,
    pub cycles: usize,
}

impl Decomposition {
    pub fn of(sys: &SystemMap) -> Result<Self> {
        let t = sys.require_map("orbit decomposition")?;
        let n = t.len();
        // 0 = unseen, 1 = on the current path, 2 = finished.
        let mut state = vec![0u8; n];
        let mut depth = vec![0usize; n];
        let mut cycle_len = vec![0usize; n];
        let mut cycle_id = vec![0usize; n];
        let mut cycles = 0;
        let mut path = Vec::new();
        for s in 0..n {
            if state[s] != 0 {
                continue;
            }
            path.clear();
            let mut x = s;
            while state[x] == 0 {
                state[x] = 1;
                path.push(x);
                x = t[x] as usize;
            }
            // `x` is either on the current path (a new cycle) or finished.
            let (mut d, len, id, tail_end) = if state[x] == 1 {
                let pos = path.iter().position(|&y| y == x).unwrap();
                let len = path.len() - pos;
                for &y in &path[pos..] {
                    cycle_len[y] = len;
                    cycle_id[y] = cycles;
                }
                cycles += 1;
                (0, len, cycles - 1, pos)
            } else {
                (depth[x], cycle_len[x], cycle_id[x], path.len())
            };
            for &y in path[..tail_end].iter().rev() {
                d += 1;
                depth[y] = d;
                cycle_len[y] = len;
                cycle_id[y] = id;
            }
            for &y in &path {
                state[y] = 2;
            }
        }
        Ok(Decomposition {
            depth,
            cycle_len,
            cycle_id,
            cycles,
        })
    }

    pub fn is_periodic(&self, x: usize) -> bool {
        self.depth[x] == 0
    }

    pub fn preperiod(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn period(&self) -> Result<usize> {
        let mut seen = vec![false; self.depth.len() + 1];
        let mut p = 1usize;
        for &l in &self.cycle_len {
            if !seen[l] {
                seen[l] = true;
                p = p.checked_mul(l / p.gcd(&l)).ok_or(Error::BoundExceeded {
                    what: "eventual period",
                    requested: u128::MAX,
                    limit: usize::MAX as u128,
                })?;
            }
        }
        Ok(p)
    }
}

/// Least `(preperiod, period)` with `T^{preperiod + period} = T^{preperiod}`.
pub fn eventual_period(sys: &SystemMap) -> Result<(usize, usize)> {
    let d = Decomposition::of(sys)?;
    Ok((d.preperiod(), d.period()?))
}

/// `preperiod + period`: iterates below this exhaust every distinct `T^n`.
pub fn exhaustive_horizon(sys: &SystemMap) -> Result<usize> {
    let (rho, pi) = eventual_period(sys)?;
    rho.checked_add(pi).ok_or(Error::invalid("eventual period overflows"))
}
