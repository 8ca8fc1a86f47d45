//! Fraction-free exact linear algebra: integer-pivoting Gauss-Jordan
//! elimination and a two-phase simplex with Bland's rule.
//!
//! Every tableau entry is `D · x` where `D` is the current basis determinant,
//! so all arithmetic stays integral. Work is first attempted in checked
//! `i128`; on overflow the caller retries with `BigInt`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::Rational;

pub trait ExactInt: Clone + std::fmt::Debug + PartialEq {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// Division known to be exact.
    fn div_exact(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn signum(&self) -> i32;
    fn is_zero(&self) -> bool {
        self.signum() == 0
    }
}

impl ExactInt for i128 {
    fn zero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn signum(&self) -> i32 {
        i128::signum(*self) as i32
    }
}

impl ExactInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn signum(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// Dense integer tableau with a common denominator.
#[derive(Clone, Debug)]
pub struct Tableau<T> {
    pub rows: Vec<Vec<T>>,
    pub det: T,
}

impl<T: ExactInt> Tableau<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Self {
        Tableau { rows, det: T::from_i64(1) }
    }

    /// Pivots on (r, c); afterwards column c is `det` in row r and 0
    /// elsewhere. Keeps `det > 0` by negating everything when needed.
    pub fn pivot(&mut self, r: usize, c: usize, extra: Option<&mut Vec<T>>) -> Option<()> {
        let p = self.rows[r][c].clone();
        debug_assert!(!p.is_zero());
        let pivot_row = self.rows[r].clone();
        let det = self.det.clone();
        let update = |row: &mut Vec<T>| -> Option<()> {
            let f = row[c].clone();
            for (x, pr) in row.iter_mut().zip(&pivot_row) {
                let v = x.mul(&p)?.sub(&f.mul(pr)?)?;
                *x = v.div_exact(&det);
            }
            Some(())
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(row)?;
            }
        }
        if let Some(obj) = extra {
            update(obj)?;
        }
        self.det = p;
        Some(())
    }

    fn normalize_sign(&mut self, extra: Option<&mut Vec<T>>) {
        if self.det.signum() < 0 {
            self.det = self.det.neg();
            for x in self.rows.iter_mut().flatten() {
                *x = x.neg();
            }
            if let Some(obj) = extra {
                for x in obj.iter_mut() {
                    *x = x.neg();
                }
            }
        }
    }
}

/// Result of eliminating `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve<T> {
    Inconsistent,
    /// Unique solution `num[j] / den`, `den > 0`.
    Unique { num: Vec<T>, den: T },
    /// Consistent with the given rank < number of unknowns.
    Underdetermined { rank: usize },
}

/// Gauss-Jordan elimination on the augmented matrix `[A | b]`.
pub fn solve<T: ExactInt>(a: &[Vec<T>], b: &[T]) -> Option<Solve<T>> {
    let cols = a.first().map_or(0, |r| r.len());
    let rows: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut v = row.clone();
            v.push(bi.clone());
            v
        })
        .collect();
    let mut t = Tableau::new(rows);
    let mut used = vec![false; t.rows.len()];
    let mut basis_row = vec![None; cols];
    for c in 0..cols {
        let Some(r) = (0..t.rows.len()).find(|&r| !used[r] && !t.rows[r][c].is_zero()) else {
            continue;
        };
        t.pivot(r, c, None)?;
        t.normalize_sign(None);
        used[r] = true;
        basis_row[c] = Some(r);
    }
    for (r, row) in t.rows.iter().enumerate() {
        if !used[r] && !row[cols].is_zero() {
            return Some(Solve::Inconsistent);
        }
    }
    let rank = used.iter().filter(|&&u| u).count();
    if rank < cols {
        return Some(Solve::Underdetermined { rank });
    }
    let num = basis_row.iter().map(|r| t.rows[r.unwrap()][cols].clone()).collect();
    Some(Solve::Unique { num, den: t.det })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, point: Vec<Rational> },
}

/// `A z = b, z ≥ 0` after phase one, ready for any number of objectives.
#[derive(Clone, Debug)]
pub struct FeasibleBasis<T> {
    tab: Tableau<T>,
    basis: Vec<usize>,
    vars: usize,
}

/// Phase one. Returns `Ok(None)` when infeasible; `Err(())` on overflow.
pub fn phase_one<T: ExactInt>(a: &[Vec<T>], b: &[T]) -> Result<Option<FeasibleBasis<T>>, ()> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let width = n + m + 1;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.signum() < 0;
        let mut v = Vec::with_capacity(width);
        for x in row {
            v.push(if flip { x.neg() } else { x.clone() });
        }
        for k in 0..m {
            v.push(T::from_i64((k == i) as i64));
        }
        v.push(if flip { bi.neg() } else { bi.clone() });
        rows.push(v);
    }
    // Reduced costs of max −Σ artificials: column sums over original columns.
    let mut obj = vec![T::zero(); width];
    for row in &rows {
        for j in (0..n).chain(std::iter::once(width - 1)) {
            obj[j] = obj[j].add(&row[j]).ok_or(())?;
        }
    }
    let mut tab = Tableau::new(rows);
    let mut basis: Vec<usize> = (n..n + m).collect();
    run_simplex(&mut tab, &mut basis, &mut obj, n + m).ok_or(())?;
    if !obj[width - 1].is_zero() {
        return Ok(None);
    }
    // Drive zero-level artificials out; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => {
                    tab.pivot(i, j, None).ok_or(())?;
                    tab.normalize_sign(None);
                    basis[i] = j;
                }
                None => {
                    tab.rows.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for row in tab.rows.iter_mut() {
        row.drain(n..n + m);
    }
    Ok(Some(FeasibleBasis { tab, basis, vars: n }))
}

impl<T: ExactInt> FeasibleBasis<T> {
    /// Maximizes `c · z`. `Err(())` on overflow.
    pub fn maximize(&self, c: &[T]) -> Result<LpOutcome, ()> {
        let n = self.vars;
        let mut tab = self.tab.clone();
        let mut basis = self.basis.clone();
        // Stored reduced cost = D·c_j − Σ_i c_B(i)·T[i][j]; rhs = −D·objective.
        let mut obj = vec![T::zero(); n + 1];
        for j in 0..n {
            obj[j] = c[j].mul(&tab.det).ok_or(())?;
        }
        for (i, row) in tab.rows.iter().enumerate() {
            let cb = &c[basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=n {
                obj[j] = obj[j].sub(&cb.mul(&row[j]).ok_or(())?).ok_or(())?;
            }
        }
        match run_simplex(&mut tab, &mut basis, &mut obj, n) {
            None => Err(()),
            Some(false) => Ok(LpOutcome::Unbounded),
            Some(true) => {
                let den = tab.det.to_big();
                let value = Rational::new(-obj[n].to_big(), den.clone());
                let mut point = vec![Rational::zero(); n];
                for (i, &bv) in basis.iter().enumerate() {
                    point[bv] = Rational::new(tab.rows[i][n].to_big(), den.clone());
                }
                Ok(LpOutcome::Optimal { value, point })
            }
        }
    }
}

/// Bland's rule simplex on columns `0..allowed`; rhs is the last column.
/// Returns Some(true) at optimum, Some(false) if unbounded, None on overflow.
fn run_simplex<T: ExactInt>(tab: &mut Tableau<T>, basis: &mut [usize], obj: &mut Vec<T>, allowed: usize) -> Option<bool> {
    let rhs = obj.len() - 1;
    loop {
        let Some(s) = (0..allowed).find(|&j| obj[j].signum() > 0) else {
            return Some(true);
        };
        let mut leave: Option<usize> = None;
        for i in 0..tab.rows.len() {
            if tab.rows[i][s].signum() <= 0 {
                continue;
            }
            leave = Some(match leave {
                None => i,
                Some(l) => {
                    // Compare rhs_i / a_is with rhs_l / a_ls.
                    let lhs = tab.rows[i][rhs].mul(&tab.rows[l][s])?;
                    let rhs_v = tab.rows[l][rhs].mul(&tab.rows[i][s])?;
                    let d = lhs.sub(&rhs_v)?.signum();
                    if d < 0 || (d == 0 && basis[i] < basis[l]) {
                        i
                    } else {
                        l
                    }
                }
            });
        }
        let Some(r) = leave else {
            return Some(false);
        };
        tab.pivot(r, s, Some(obj))?;
        tab.normalize_sign(Some(obj));
        basis[r] = s;
    }
}

pub fn to_i128_matrix(a: &[Vec<BigInt>]) -> Option<Vec<Vec<i128>>> {
    a.iter().map(|row| row.iter().map(|x| x.to_i128()).collect()).collect()
}
