//! Exact two-phase simplex over rationals, with Bland's rule so it always
//! terminates. Sized for the handful of unknowns produced by linear templates.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// `minimize objective . x` subject to the rows and `x >= 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    vars: usize,
    rows: Vec<(Vec<BigRational>, Cmp, BigRational)>,
    objective: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(Vec<BigRational>),
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(vars: usize) -> Self {
        LinearProgram {
            vars,
            rows: Vec::new(),
            objective: vec![BigRational::zero(); vars],
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn constrain(&mut self, coeffs: Vec<BigRational>, cmp: Cmp, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.vars);
        self.rows.push((coeffs, cmp, rhs));
    }

    pub fn bound(&mut self, var: usize, cmp: Cmp, value: BigRational) {
        let mut row = vec![BigRational::zero(); self.vars];
        row[var] = BigRational::one();
        self.constrain(row, cmp, value);
    }

    pub fn minimize(&mut self, objective: Vec<BigRational>) {
        assert_eq!(objective.len(), self.vars);
        self.objective = objective;
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    vars: usize,
    /// Columns at or past this index are artificial.
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let m = lp.rows.len();
        let slacks = lp.rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let first_artificial = lp.vars + slacks;
        let artificials = lp
            .rows
            .iter()
            .filter(|r| r.1 != Cmp::Le || r.2.is_negative())
            .count();
        let width = first_artificial + artificials;
        let mut t = Tableau {
            rows: Vec::with_capacity(m),
            rhs: Vec::with_capacity(m),
            basis: Vec::with_capacity(m),
            vars: lp.vars,
            first_artificial,
        };
        let (mut slack, mut art) = (lp.vars, first_artificial);
        for (coeffs, cmp, b) in &lp.rows {
            let mut row = vec![BigRational::zero(); width];
            row[..lp.vars].clone_from_slice(coeffs);
            let mut b = b.clone();
            let slack_col = match cmp {
                Cmp::Le => {
                    row[slack] = BigRational::one();
                    slack += 1;
                    Some(slack - 1)
                }
                Cmp::Ge => {
                    row[slack] = -BigRational::one();
                    slack += 1;
                    Some(slack - 1)
                }
                Cmp::Eq => None,
            };
            if b.is_negative() {
                row.iter_mut().for_each(|c| *c = -c.clone());
                b = -b;
            }
            let basic = match slack_col {
                Some(s) if row[s].is_positive() => s,
                _ => {
                    row[art] = BigRational::one();
                    art += 1;
                    art - 1
                }
            };
            t.rows.push(row);
            t.rhs.push(b);
            t.basis.push(basic);
        }
        t
    }

    fn width(&self) -> usize {
        self.rows.first().map_or(self.first_artificial, Vec::len)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        self.rows[r].iter_mut().for_each(|x| *x = &*x / &p);
        self.rhs[r] = &self.rhs[r] / &p;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                if !self.rows[r][j].is_zero() {
                    let d = &f * &self.rows[r][j];
                    self.rows[i][j] -= d;
                }
            }
            let d = &f * &self.rhs[r];
            self.rhs[i] -= d;
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost` over columns below `limit`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[BigRational], limit: usize) -> bool {
        loop {
            let reduced = |j: usize| -> BigRational {
                let mut z = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() {
                        z -= &cost[b] * &self.rows[i][j];
                    }
                }
                z
            };
            let Some(enter) =
                (0..limit).find(|&j| !self.basis.contains(&j) && reduced(j).is_negative())
            else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }

    fn solve(mut self, objective: &[BigRational]) -> LpOutcome {
        let width = self.width();
        if self.first_artificial < width {
            let mut cost = vec![BigRational::zero(); width];
            cost[self.first_artificial..]
                .iter_mut()
                .for_each(|c| *c = BigRational::one());
            self.optimize(&cost, width);
            let infeasible = self
                .basis
                .iter()
                .zip(&self.rhs)
                .any(|(&b, v)| b >= self.first_artificial && !v.is_zero());
            if infeasible {
                return LpOutcome::Infeasible;
            }
            // Drive remaining (zero-valued) artificials out of the basis; rows
            // with no other nonzero entry are redundant and dropped.
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] < self.first_artificial {
                    i += 1;
                    continue;
                }
                match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                    }
                }
            }
        }
        let mut cost = vec![BigRational::zero(); width];
        cost[..self.vars].clone_from_slice(objective);
        if !self.optimize(&cost, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![BigRational::zero(); self.vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.vars {
                x[b] = self.rhs[i].clone();
            }
        }
        LpOutcome::Optimal(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn v(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&n| q(n, 1)).collect()
    }

    #[test]
    fn small_minimization() {
        // min x + y with x + 2y >= 3, 3x + y >= 4
        let mut lp = LinearProgram::new(2);
        lp.constrain(v(&[1, 2]), Cmp::Ge, q(3, 1));
        lp.constrain(v(&[3, 1]), Cmp::Ge, q(4, 1));
        lp.minimize(v(&[1, 1]));
        assert_eq!(lp.solve(), LpOutcome::Optimal(vec![q(1, 1), q(1, 1)]));
    }

    #[test]
    fn fractional_vertex() {
        // min x with 2x >= 1
        let mut lp = LinearProgram::new(1);
        lp.constrain(v(&[2]), Cmp::Ge, q(1, 1));
        lp.minimize(v(&[1]));
        assert_eq!(lp.solve(), LpOutcome::Optimal(vec![q(1, 2)]));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.bound(0, Cmp::Ge, q(2, 1));
        lp.bound(0, Cmp::Le, q(1, 1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(1);
        lp.bound(0, Cmp::Ge, q(2, 1));
        lp.minimize(v(&[-1]));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn equalities_and_negative_rhs() {
        // x - y = -1, x + y <= 5, min -x
        let mut lp = LinearProgram::new(2);
        lp.constrain(v(&[1, -1]), Cmp::Eq, q(-1, 1));
        lp.constrain(v(&[1, 1]), Cmp::Le, q(5, 1));
        lp.minimize(v(&[-1, 0]));
        assert_eq!(lp.solve(), LpOutcome::Optimal(vec![q(2, 1), q(3, 1)]));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.constrain(v(&[1, 1]), Cmp::Eq, q(2, 1));
        lp.constrain(v(&[2, 2]), Cmp::Eq, q(4, 1));
        lp.minimize(v(&[1, 0]));
        assert_eq!(lp.solve(), LpOutcome::Optimal(vec![q(0, 1), q(2, 1)]));
    }

    #[test]
    fn empty_program_is_feasible() {
        assert_eq!(
            LinearProgram::new(2).solve(),
            LpOutcome::Optimal(v(&[0, 0]))
        );
    }
}
