//! Complete DPLL with two watched literals and chronological backtracking.

use std::time::Instant;

/// Literal encoding: `2 * var` is positive, `2 * var + 1` negative.
pub type Lit = u32;

pub fn pos(v: usize) -> Lit {
    (v as Lit) << 1
}

pub fn neg(v: usize) -> Lit {
    ((v as Lit) << 1) | 1
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Vec<bool>),
    Unsat,
    DecisionLimit,
    Timeout,
}

pub struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    units: Vec<Lit>,
    empty: bool,
    watches: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    trail: Vec<Lit>,
    qhead: usize,
}

impl Solver {
    pub fn new(num_vars: usize) -> Self {
        Solver {
            num_vars,
            clauses: Vec::new(),
            units: Vec::new(),
            empty: false,
            watches: vec![Vec::new(); 2 * num_vars],
            value: vec![None; num_vars],
            trail: Vec::new(),
            qhead: 0,
        }
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len() + self.units.len()
    }

    pub fn add_clause(&mut self, mut lits: Vec<Lit>) {
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return;
        }
        match lits.len() {
            0 => self.empty = true,
            1 => self.units.push(lits[0]),
            _ => {
                let id = self.clauses.len();
                self.watches[lits[0] as usize].push(id);
                self.watches[lits[1] as usize].push(id);
                self.clauses.push(lits);
            }
        }
    }

    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.value[var(l)].map(|b| b == (l & 1 == 0))
    }

    fn assign(&mut self, l: Lit) {
        self.value[var(l)] = Some(l & 1 == 0);
        self.trail.push(l);
    }

    /// Unit propagation; false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = self.trail[self.qhead] ^ 1;
            self.qhead += 1;
            let watching = std::mem::take(&mut self.watches[falsified as usize]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut conflict = false;
            for (k, &cid) in watching.iter().enumerate() {
                if conflict {
                    keep.extend_from_slice(&watching[k..]);
                    break;
                }
                let c = &mut self.clauses[cid];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let other = c[0];
                let other_val = self.value[var(other)].map(|b| b == (other & 1 == 0));
                if other_val == Some(true) {
                    keep.push(cid);
                    continue;
                }
                let mut moved = false;
                for i in 2..c.len() {
                    let l = c[i];
                    if self.value[var(l)].map(|b| b == (l & 1 == 0)) != Some(false) {
                        c.swap(1, i);
                        self.watches[c[1] as usize].push(cid);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                keep.push(cid);
                match other_val {
                    None => self.assign(other),
                    Some(false) => conflict = true,
                    Some(true) => unreachable!(),
                }
            }
            self.watches[falsified as usize] = keep;
            if conflict {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().expect("nonempty trail");
            self.value[var(l)] = None;
        }
        self.qhead = self.qhead.min(len);
    }

    /// Decides the lowest unassigned variable, false first.
    pub fn solve(&mut self, max_decisions: usize, deadline: Option<Instant>) -> SatResult {
        if self.empty {
            return SatResult::Unsat;
        }
        for l in self.units.clone() {
            match self.lit_value(l) {
                Some(true) => {}
                Some(false) => return SatResult::Unsat,
                None => self.assign(l),
            }
        }
        // (trail length before the decision, decided literal, already flipped)
        let mut stack: Vec<(usize, Lit, bool)> = Vec::new();
        let mut decisions = 0usize;
        let mut ok = self.propagate();
        let mut next_var = 0;
        loop {
            if !ok {
                loop {
                    let Some((len, lit, flipped)) = stack.pop() else { return SatResult::Unsat };
                    self.undo_to(len);
                    if !flipped {
                        stack.push((len, lit ^ 1, true));
                        self.assign(lit ^ 1);
                        next_var = var(lit);
                        break;
                    }
                }
                ok = self.propagate();
                continue;
            }
            while next_var < self.num_vars && self.value[next_var].is_some() {
                next_var += 1;
            }
            if next_var == self.num_vars {
                return SatResult::Sat(self.value.iter().map(|v| v.unwrap_or(false)).collect());
            }
            if decisions >= max_decisions {
                return SatResult::DecisionLimit;
            }
            if decisions.is_multiple_of(256) && deadline.is_some_and(|d| Instant::now() >= d) {
                return SatResult::Timeout;
            }
            decisions += 1;
            stack.push((self.trail.len(), neg(next_var), false));
            self.assign(neg(next_var));
            ok = self.propagate();
        }
    }
}
