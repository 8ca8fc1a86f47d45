//! Brute-force equilibrium enumeration for small games.
//!
//! For a support pair (S1, S2) the two halves decouple: player 2's mixture
//! must make every row of S1 a best response, and player 1's mixture must do
//! the same for the columns of S2. Each half is a polytope query answered by
//! exact elimination, falling back to linear programs only when the
//! indifference system is rank-deficient.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::game::{for_each_profile, Game, MixedProfile};
use crate::linalg::{phase_one, solve, to_i128_matrix, ExactInt, LpOutcome, Solve};

pub const DEFAULT_CAP: usize = 12;
pub const UNIFORM_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    pub equilibria: Vec<MixedProfile<Rational>>,
    pub degenerate: bool,
    pub supports_scanned: u64,
}

/// Integer payoff matrix of one player: scaled to integers and shifted so
/// every entry is at least 1. Equilibria are unaffected.
pub fn integer_payoffs(g: &Game, player: usize) -> Vec<Vec<BigInt>> {
    let (m, n) = (g.num_strategies(0), g.num_strategies(1));
    let entries: Vec<Vec<&Rational>> = (0..m).map(|i| (0..n).map(|j| g.utility(&[i, j], player)).collect()).collect();
    let lcm = entries.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<Vec<BigInt>> = entries
        .iter()
        .map(|row| row.iter().map(|x| (x.numer() * &lcm) / x.denom()).collect())
        .collect();
    let min = scaled.iter().flatten().min().cloned().unwrap_or_else(<BigInt as Zero>::zero);
    let shift = BigInt::one() - min;
    scaled.into_iter().map(|row| row.into_iter().map(|x| x + &shift).collect()).collect()
}

fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = a.first().map_or(0, |r| r.len());
    (0..n).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// One indifference constraint set: rows are the indifferent player's
/// strategies, columns are indexed by the unknown mixture's strategies.
#[derive(Clone, Copy)]
struct Block<'a, T> {
    m: &'a [Vec<T>],
    own: &'a [usize],
}

#[derive(Clone, Debug)]
enum Quick {
    Empty,
    Point(Vec<Rational>),
    NeedsLp,
}

#[derive(Clone, Debug)]
enum SideSet {
    Empty,
    Point(Vec<Rational>),
    Continuum,
}

fn block_rows<'a, T>(b: &Block<'a, T>) -> impl Iterator<Item = (usize, bool)> + 'a {
    let own = b.own;
    (0..b.m.len()).map(move |i| (i, own.contains(&i)))
}

/// Elimination on the equality part only.
fn quick<T: ExactInt>(blocks: &[Block<T>], supp: &[usize], n: usize) -> Option<Quick> {
    let k = supp.len();
    let nb = blocks.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (bi, blk) in blocks.iter().enumerate() {
        for &i in blk.own {
            let mut row: Vec<T> = supp.iter().map(|&j| blk.m[i][j].clone()).collect();
            for c in 0..nb {
                row.push(T::from_i64(if c == bi { -1 } else { 0 }));
            }
            a.push(row);
            b.push(T::zero());
        }
    }
    let mut row = vec![T::from_i64(1); k];
    row.extend(std::iter::repeat(T::zero()).take(nb));
    a.push(row);
    b.push(T::from_i64(1));
    Some(match solve(&a, &b)? {
        Solve::Inconsistent => Quick::Empty,
        Solve::Underdetermined { .. } => Quick::NeedsLp,
        Solve::Unique { num, den } => {
            if num[..k].iter().any(|x| x.signum() <= 0) {
                return Some(Quick::Empty);
            }
            for (bi, blk) in blocks.iter().enumerate() {
                let v = &num[k + bi];
                for (i, own) in block_rows(blk) {
                    if own {
                        continue;
                    }
                    let mut acc = T::zero();
                    for (c, &j) in supp.iter().enumerate() {
                        acc = acc.add(&blk.m[i][j].mul(&num[c])?)?;
                    }
                    if acc.sub(v)?.signum() > 0 {
                        return Some(Quick::Empty);
                    }
                }
            }
            let den = den.to_big();
            let mut x = vec![Rational::zero(); n];
            for (c, &j) in supp.iter().enumerate() {
                x[j] = Rational::new(num[c].to_big(), den.clone());
            }
            Quick::Point(x)
        }
    })
}

/// Builds `A z = b` with z = (w_1..w_k, [t], v_1..v_B, slacks). With `shift`
/// the unknown is x_j = w_j + t and t is an extra column.
fn lp_system<T: ExactInt>(blocks: &[Block<T>], supp: &[usize], shift: bool) -> Option<(Vec<Vec<T>>, Vec<T>, usize)> {
    let k = supp.len();
    let nb = blocks.len();
    let extra = shift as usize;
    let slacks: usize = blocks.iter().map(|b| b.m.len() - b.own.len()).sum();
    let width = k + extra + nb + slacks;
    let mut a = Vec::new();
    let mut rhs = Vec::new();
    let mut slack = k + extra + nb;
    for (bi, blk) in blocks.iter().enumerate() {
        for (i, own) in block_rows(blk) {
            let mut row = vec![T::zero(); width];
            let mut sum = T::zero();
            for (c, &j) in supp.iter().enumerate() {
                row[c] = blk.m[i][j].clone();
                sum = sum.add(&blk.m[i][j])?;
            }
            if shift {
                row[k] = sum;
            }
            row[k + extra + bi] = T::from_i64(-1);
            if !own {
                row[slack] = T::from_i64(1);
                slack += 1;
            }
            a.push(row);
            rhs.push(T::zero());
        }
    }
    let mut row = vec![T::zero(); width];
    for c in row.iter_mut().take(k) {
        *c = T::from_i64(1);
    }
    if shift {
        row[k] = T::from_i64(k as i64);
    }
    a.push(row);
    rhs.push(T::from_i64(1));
    Some((a, rhs, width))
}

/// Does some point of the side polytope have every support coordinate > 0?
fn has_interior<T: ExactInt>(blocks: &[Block<T>], supp: &[usize]) -> Option<bool> {
    let (a, b, width) = lp_system(blocks, supp, true)?;
    let Some(fb) = phase_one(&a, &b).ok()? else {
        return Some(false);
    };
    let mut c = vec![T::zero(); width];
    c[supp.len()] = T::from_i64(1);
    Some(match fb.maximize(&c).ok()? {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        LpOutcome::Unbounded => true,
        LpOutcome::Infeasible => false,
    })
}

/// Assuming a nonempty interior: is the polytope a single point?
fn point_or_continuum<T: ExactInt>(blocks: &[Block<T>], supp: &[usize], n: usize) -> Option<SideSet> {
    let (a, b, width) = lp_system(blocks, supp, false)?;
    let Some(fb) = phase_one(&a, &b).ok()? else {
        return Some(SideSet::Empty);
    };
    let mut x = vec![Rational::zero(); n];
    for (c, &j) in supp.iter().enumerate() {
        let mut obj = vec![T::zero(); width];
        obj[c] = T::from_i64(1);
        let hi = match fb.maximize(&obj).ok()? {
            LpOutcome::Optimal { value, .. } => value,
            _ => return Some(SideSet::Continuum),
        };
        obj[c] = T::from_i64(-1);
        let lo = match fb.maximize(&obj).ok()? {
            LpOutcome::Optimal { value, .. } => -value,
            _ => return Some(SideSet::Continuum),
        };
        if hi != lo {
            return Some(SideSet::Continuum);
        }
        x[j] = hi;
    }
    Some(SideSet::Point(x))
}

/// Matrices in both representations; i128 first, BigInt if that overflows.
struct Payoffs {
    small: Option<Vec<Vec<i128>>>,
    big: Vec<Vec<BigInt>>,
}

impl Payoffs {
    fn new(big: Vec<Vec<BigInt>>) -> Self {
        Payoffs { small: to_i128_matrix(&big), big }
    }
}

fn with_fallback<R>(
    mats: &[&Payoffs],
    own: &[&[usize]],
    small: impl Fn(&[Block<i128>]) -> Option<R>,
    big: impl Fn(&[Block<BigInt>]) -> Option<R>,
) -> R {
    if mats.iter().all(|p| p.small.is_some()) {
        let blocks: Vec<Block<i128>> =
            mats.iter().zip(own).map(|(p, o)| Block { m: p.small.as_ref().unwrap(), own: o }).collect();
        if let Some(r) = small(&blocks) {
            return r;
        }
    }
    let blocks: Vec<Block<BigInt>> = mats.iter().zip(own).map(|(p, o)| Block { m: &p.big, own: o }).collect();
    big(&blocks).expect("BigInt arithmetic cannot overflow")
}

/// Solution set of one side, restricted to the unknown's support `supp`.
struct Side<'a> {
    mats: Vec<&'a Payoffs>,
    own: Vec<&'a [usize]>,
    supp: &'a [usize],
    n: usize,
}

impl Side<'_> {
    fn quick(&self) -> Quick {
        with_fallback(&self.mats, &self.own, |b| quick(b, self.supp, self.n), |b| quick(b, self.supp, self.n))
    }
    fn interior(&self) -> bool {
        with_fallback(&self.mats, &self.own, |b| has_interior(b, self.supp), |b| has_interior(b, self.supp))
    }
    fn resolve(&self) -> SideSet {
        with_fallback(
            &self.mats,
            &self.own,
            |b| point_or_continuum(b, self.supp, self.n),
            |b| point_or_continuum(b, self.supp, self.n),
        )
    }
}

/// Full analysis of a set of sides that must all be nonempty together.
fn analyze(sides: &[Side]) -> Outcome {
    let quick: Vec<Quick> = sides.iter().map(|s| s.quick()).collect();
    if quick.iter().any(|q| matches!(q, Quick::Empty)) {
        return Outcome::None;
    }
    for (s, q) in sides.iter().zip(&quick) {
        if matches!(q, Quick::NeedsLp) && !s.interior() {
            return Outcome::None;
        }
    }
    let mut points = Vec::with_capacity(sides.len());
    for (s, q) in sides.iter().zip(quick) {
        match q {
            Quick::Point(p) => points.push(p),
            _ => match s.resolve() {
                SideSet::Point(p) => points.push(p),
                SideSet::Continuum => return Outcome::Degenerate,
                SideSet::Empty => return Outcome::None,
            },
        }
    }
    Outcome::Points(points)
}

enum Outcome {
    None,
    Points(Vec<Vec<Rational>>),
    Degenerate,
}

fn mask_members(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Nonempty subsets of {0..n}, ordered by size and then by bitmask.
fn canonical_supports(n: usize) -> Vec<Vec<usize>> {
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    masks.into_iter().map(mask_members).collect()
}

fn sort_profiles(list: &mut [MixedProfile<Rational>]) {
    list.sort_by(|a, b| (a.supports(), a.dists()).cmp(&(b.supports(), b.dists())));
}

fn require_bimatrix(g: &Game, cap: usize) -> Result<()> {
    if !g.is_bimatrix() {
        return Err(Error::invalid("bimatrix game required"));
    }
    for i in 0..2 {
        if g.num_strategies(i) > cap {
            return Err(Error::invalid(format!(
                "player {} has {} strategies, cap is {cap}",
                i + 1,
                g.num_strategies(i)
            )));
        }
    }
    Ok(())
}

/// Number of first-player supports handled per parallel batch.
const BATCH_PAIRS: usize = 1 << 13;

pub fn enumerate_ne_bimatrix(g: &Game) -> Result<EnumerationResult> {
    enumerate_ne_bimatrix_capped(g, DEFAULT_CAP)
}

pub fn enumerate_ne_bimatrix_capped(g: &Game, cap: usize) -> Result<EnumerationResult> {
    require_bimatrix(g, cap)?;
    let (m, n) = (g.num_strategies(0), g.num_strategies(1));
    let r = Payoffs::new(integer_payoffs(g, 0));
    let ct = Payoffs::new(transpose(&integer_payoffs(g, 1)));
    let sup1 = canonical_supports(m);
    let sup2 = canonical_supports(n);
    let per_batch = (BATCH_PAIRS / sup2.len()).max(1);
    let mut found = Vec::new();
    let mut scanned = 0u64;
    for batch in sup1.chunks(per_batch) {
        let results: Vec<Vec<(usize, Outcome)>> = batch
            .par_iter()
            .map(|s1| {
                let mut out = Vec::new();
                for (j, s2) in sup2.iter().enumerate() {
                    let y_side = Side { mats: vec![&r], own: vec![s1], supp: s2, n };
                    let x_side = Side { mats: vec![&ct], own: vec![s2], supp: s1, n: m };
                    match analyze(&[y_side, x_side]) {
                        Outcome::None => {}
                        o => out.push((j, o)),
                    }
                }
                out
            })
            .collect();
        for outs in results {
            for (j, o) in outs {
                match o {
                    Outcome::Degenerate => {
                        sort_profiles(&mut found);
                        return Ok(EnumerationResult {
                            equilibria: found,
                            degenerate: true,
                            supports_scanned: scanned + j as u64 + 1,
                        });
                    }
                    Outcome::Points(mut p) => {
                        let x = p.pop().unwrap();
                        let y = p.pop().unwrap();
                        found.push(MixedProfile::new_unchecked(vec![x, y]));
                    }
                    Outcome::None => {}
                }
            }
            scanned += sup2.len() as u64;
        }
    }
    sort_profiles(&mut found);
    Ok(EnumerationResult { equilibria: found, degenerate: false, supports_scanned: scanned })
}

/// Equilibria with σ1 = σ2 in any square bimatrix game.
pub fn enumerate_symmetric_profiles(g: &Game, cap: usize) -> Result<EnumerationResult> {
    require_bimatrix(g, cap)?;
    let n = g.num_strategies(0);
    if g.num_strategies(1) != n {
        return Err(Error::invalid("square game required"));
    }
    let r = Payoffs::new(integer_payoffs(g, 0));
    let ct = Payoffs::new(transpose(&integer_payoffs(g, 1)));
    let sups = canonical_supports(n);
    let outcomes: Vec<Outcome> = sups
        .par_iter()
        .map(|s| {
            let side = Side { mats: vec![&r, &ct], own: vec![s, s], supp: s, n };
            analyze(&[side])
        })
        .collect();
    let mut found = Vec::new();
    for (k, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Degenerate => {
                sort_profiles(&mut found);
                return Ok(EnumerationResult { equilibria: found, degenerate: true, supports_scanned: k as u64 + 1 });
            }
            Outcome::Points(mut p) => {
                let x = p.pop().unwrap();
                found.push(MixedProfile::new_unchecked(vec![x.clone(), x]));
            }
            Outcome::None => {}
        }
    }
    sort_profiles(&mut found);
    Ok(EnumerationResult { equilibria: found, degenerate: false, supports_scanned: sups.len() as u64 })
}

/// Finds some symmetric profile (x, x) that is an equilibrium, or proves
/// none exists. One feasibility LP per closed support S: x ≥ 0 vanishing
/// off S, every strategy of S a best response for both players. Unaffected
/// by degeneracy, unlike the isolated-point scan.
pub fn find_symmetric_ne_lp(g: &Game) -> Result<Option<MixedProfile<Rational>>> {
    require_bimatrix(g, DEFAULT_CAP)?;
    let n = g.num_strategies(0);
    if g.num_strategies(1) != n {
        return Err(Error::invalid("square game required"));
    }
    let r = integer_payoffs(g, 0);
    let ct = transpose(&integer_payoffs(g, 1));
    for s in canonical_supports(n) {
        let off: Vec<usize> = (0..n).filter(|k| !s.contains(k)).collect();
        // Columns: x_S, v, w, then one slack per off-support row of each matrix.
        let k = s.len();
        let width = k + 2 + 2 * off.len();
        let mut a: Vec<Vec<BigInt>> = Vec::new();
        let mut b: Vec<BigInt> = Vec::new();
        let mut row = vec![BigInt::from(0); width];
        row[..k].iter_mut().for_each(|x| *x = BigInt::one());
        a.push(row);
        b.push(BigInt::one());
        for (which, mat) in [&r, &ct].into_iter().enumerate() {
            for t in 0..n {
                let mut row = vec![BigInt::from(0); width];
                for (c, &j) in s.iter().enumerate() {
                    row[c] = mat[t][j].clone();
                }
                row[k + which] = -BigInt::one();
                if let Some(p) = off.iter().position(|&o| o == t) {
                    row[k + 2 + which * off.len() + p] = BigInt::one();
                }
                a.push(row);
                b.push(BigInt::from(0));
            }
        }
        let Some(basis) = phase_one(&a, &b).map_err(|_| Error::invalid("overflow in exact LP"))? else {
            continue;
        };
        let LpOutcome::Optimal { point, .. } =
            basis.maximize(&vec![BigInt::from(0); width]).map_err(|_| Error::invalid("overflow in exact LP"))?
        else {
            continue;
        };
        let mut x = vec![Rational::zero(); n];
        for (c, &j) in s.iter().enumerate() {
            x[j] = point[c].clone();
        }
        return Ok(Some(MixedProfile::new_unchecked(vec![x.clone(), x])));
    }
    Ok(None)
}

pub fn enumerate_symmetric_ne(g: &Game) -> Result<EnumerationResult> {
    if !g.is_bimatrix() || !g.is_symmetric() {
        return Err(Error::invalid("symmetric bimatrix game required (R = C transposed)"));
    }
    enumerate_symmetric_profiles(g, DEFAULT_CAP)
}

/// All pure profiles with no profitable unilateral pure deviation.
pub fn enumerate_pure_ne(g: &Game) -> Vec<Vec<usize>> {
    let sizes = g.sizes();
    let mut out = Vec::new();
    for_each_profile(&sizes, |s| {
        let mut dev = s.to_vec();
        let stable = (0..g.players()).all(|i| {
            let here = g.utility(s, i).clone();
            let ok = (0..sizes[i]).all(|t| {
                dev[i] = t;
                g.utility(&dev, i) <= &here
            });
            dev[i] = s[i];
            ok
        });
        if stable {
            out.push(s.to_vec());
        }
    });
    out
}

/// Uniform-on-support equilibria, by scanning every support pair.
pub fn enumerate_uniform_ne(g: &Game) -> Result<(Vec<MixedProfile<Rational>>, u64)> {
    require_bimatrix(g, UNIFORM_CAP)?;
    let (m, n) = (g.num_strategies(0), g.num_strategies(1));
    let r = integer_payoffs(g, 0);
    let c = integer_payoffs(g, 1);
    let sup1 = canonical_supports(m);
    let sup2 = canonical_supports(n);
    // Best-response sets to uniform play are checked on integer sums.
    let tight = |vals: Vec<BigInt>, supp: &[usize]| {
        let max = vals.iter().max().unwrap();
        supp.iter().all(|&k| &vals[k] == max)
    };
    let found: Vec<MixedProfile<Rational>> = sup1
        .par_iter()
        .flat_map_iter(|s1| {
            let col_vals: Vec<BigInt> = (0..n).map(|j| s1.iter().map(|&i| &c[i][j]).sum()).collect();
            sup2.iter()
                .filter(|s2| tight(col_vals.clone(), s2))
                .filter(|s2| {
                    let row_vals: Vec<BigInt> = (0..m).map(|i| s2.iter().map(|&j| &r[i][j]).sum()).collect();
                    tight(row_vals, s1)
                })
                .map(|s2| MixedProfile::uniform(&[m, n], &[s1.clone(), s2.clone()]))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut found = found;
    sort_profiles(&mut found);
    Ok((found, (sup1.len() * sup2.len()) as u64))
}
