//! Dense two-phase simplex over floats, used only to locate a basis. Every
//! answer it suggests is re-solved and re-checked in exact arithmetic by the
//! caller.
//!
//! Problem form: maximize `c . z` subject to `A z = b`, `z >= 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) struct StandardForm {
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub objective: Vec<f64>,
}

#[derive(Debug)]
pub(crate) enum Outcome {
    /// Basic original columns at an optimal vertex.
    Optimal { basis: Vec<usize> },
    Infeasible,
    Unbounded,
}

const MAX_PIVOTS: usize = 100_000;

struct Tableau {
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.t[r][self.width]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[row].clone();
        for (r, line) in self.t.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = line[col];
            if f != 0.0 {
                for (v, pv) in line.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule on the reduced-cost row `obj` (`z_j - c_j`), only
    /// letting columns `< allowed` enter. Returns false if unbounded.
    fn optimize(&mut self, obj: &mut [f64], allowed: usize, tol: f64) -> Result<bool, String> {
        for _ in 0..MAX_PIVOTS {
            let Some(col) = (0..allowed).find(|&j| obj[j] < -tol) else {
                return Ok(true);
            };
            let mut pick: Option<(f64, usize, usize)> = None;
            for r in 0..self.t.len() {
                let a = self.t[r][col];
                if a > tol {
                    let ratio = self.rhs(r) / a;
                    let better = match pick {
                        None => true,
                        Some((best, _, bcol)) => {
                            ratio < best - tol || (ratio <= best + tol && self.basis[r] < bcol)
                        }
                    };
                    if better {
                        pick = Some((ratio, r, self.basis[r]));
                    }
                }
            }
            let Some((_, row, _)) = pick else {
                return Ok(false);
            };
            self.pivot(row, col);
            let f = obj[col];
            for (o, pv) in obj.iter_mut().zip(&self.t[row]) {
                *o -= f * pv;
            }
        }
        Err("pivot limit reached".into())
    }
}

pub(crate) fn solve(sf: &StandardForm, tol: f64) -> Result<Outcome, String> {
    let m = sf.rows.len();
    let nc = sf.objective.len();
    let width = nc + m;
    let mut t = Vec::with_capacity(m);
    for (r, row) in sf.rows.iter().enumerate() {
        let sign = if sf.rhs[r] < 0.0 { -1.0 } else { 1.0 };
        let mut line: Vec<f64> = row.iter().map(|v| sign * v).collect();
        line.resize(width + 1, 0.0);
        line[nc + r] = 1.0;
        line[width] = sign * sf.rhs[r];
        t.push(line);
    }
    let mut tab = Tableau { t, basis: (nc..nc + m).collect(), width };

    // phase 1: maximize -(sum of artificials)
    let mut obj = vec![0.0; width + 1];
    for line in &tab.t {
        for j in 0..=width {
            if j < nc || j == width {
                obj[j] -= line[j];
            }
        }
    }
    if !tab.optimize(&mut obj, nc, tol)? {
        return Err("phase 1 unbounded".into());
    }
    let scale = 1.0 + sf.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if obj[width] < -tol * scale {
        return Ok(Outcome::Infeasible);
    }
    for r in 0..m {
        if tab.basis[r] >= nc {
            if let Some(col) = (0..nc).find(|&j| tab.t[r][j].abs() > tol) {
                tab.pivot(r, col);
            }
        }
    }

    // phase 2
    let mut obj = vec![0.0; width + 1];
    for (j, c) in sf.objective.iter().enumerate() {
        obj[j] = -c;
    }
    for r in 0..m {
        let b = tab.basis[r];
        let cb = if b < nc { sf.objective[b] } else { 0.0 };
        if cb != 0.0 {
            for (o, v) in obj.iter_mut().zip(&tab.t[r]) {
                *o += cb * v;
            }
        }
    }
    if !tab.optimize(&mut obj, nc, tol)? {
        return Ok(Outcome::Unbounded);
    }
    let mut basis: Vec<usize> = tab.basis.iter().copied().filter(|&b| b < nc).collect();
    basis.sort_unstable();
    Ok(Outcome::Optimal { basis })
}

pub(crate) fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Solves `A_J z_J = b` exactly for the columns `basis`, zero elsewhere.
/// Returns `None` if the columns do not admit a solution.
pub(crate) fn exact_basic_solution(
    rows: &[Vec<BigRational>],
    rhs: &[BigRational],
    basis: &[usize],
    num_cols: usize,
) -> Option<Vec<BigRational>> {
    let m = rows.len();
    let k = basis.len();
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|r| {
            let mut line: Vec<BigRational> = basis.iter().map(|&c| rows[r][c].clone()).collect();
            line.push(rhs[r].clone());
            line
        })
        .collect();
    let mut pivot_rows = Vec::with_capacity(k);
    let mut row = 0;
    for col in 0..k {
        let p = (row..m).find(|&r| !a[r][col].is_zero())?;
        a.swap(row, p);
        let inv = BigRational::one() / a[row][col].clone();
        for v in a[row].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_line = a[row].clone();
        for (r, line) in a.iter_mut().enumerate() {
            if r != row && !line[col].is_zero() {
                let f = line[col].clone();
                for (v, pv) in line.iter_mut().zip(&pivot_line) {
                    *v -= &f * pv;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    if a[row..].iter().any(|line| !line[k].is_zero()) {
        return None;
    }
    let mut z = vec![BigRational::zero(); num_cols];
    for (col, &r) in pivot_rows.iter().enumerate() {
        z[basis[col]] = a[r][k].clone();
    }
    Some(z)
}

/// True when `A z = b` and `z >= 0` hold exactly.
pub(crate) fn check_exact(rows: &[Vec<BigRational>], rhs: &[BigRational], z: &[BigRational]) -> bool {
    z.iter().all(|v| !v.is_negative())
        && rows.iter().zip(rhs).all(|(row, b)| {
            let lhs: BigRational = row.iter().zip(z).map(|(a, v)| a * v).sum();
            &lhs == b
        })
}

pub(crate) fn from_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
