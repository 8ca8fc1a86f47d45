//! Normal-form games, mixed profiles, expected utilities and the Nash test.

use num_traits::{One, Zero};

use crate::arith::{QuadExt, Rational, Scalar};
use crate::error::{Error, Result};

/// A finite r-player game with a dense table of exact utilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    labels: Vec<Vec<String>>,
    strides: Vec<usize>,
    // Flat profile index * r + player.
    table: Vec<Rational>,
    win_lose: bool,
}

impl Game {
    /// `utilities[k]` is the utility vector of the k-th pure profile in
    /// row-major order (last player varies fastest).
    pub fn new(labels: Vec<Vec<String>>, utilities: Vec<Vec<Rational>>) -> Result<Self> {
        let r = labels.len();
        if r < 2 {
            return Err(Error::invalid("a game needs at least two players"));
        }
        if labels.iter().any(|l| l.is_empty()) {
            return Err(Error::invalid("every player needs at least one strategy"));
        }
        let total: usize = labels.iter().map(|l| l.len()).product();
        if utilities.len() != total {
            return Err(Error::invalid(format!(
                "expected {total} utility vectors, got {}",
                utilities.len()
            )));
        }
        let mut table = Vec::with_capacity(total * r);
        for u in utilities {
            if u.len() != r {
                return Err(Error::invalid(format!("utility vector of length {} for {r} players", u.len())));
            }
            table.extend(u);
        }
        let mut strides = vec![1; r];
        for i in (0..r - 1).rev() {
            strides[i] = strides[i + 1] * labels[i + 1].len();
        }
        let win_lose = table.iter().all(|x| x.is_zero() || x.is_one());
        Ok(Game { labels, strides, table, win_lose })
    }

    pub fn from_fn(labels: Vec<Vec<String>>, mut f: impl FnMut(&[usize]) -> Vec<Rational>) -> Result<Self> {
        let sizes: Vec<usize> = labels.iter().map(|l| l.len()).collect();
        let mut utilities = Vec::new();
        for_each_profile(&sizes, |s| utilities.push(f(s)));
        Game::new(labels, utilities)
    }

    pub fn bimatrix(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        r: &[Vec<Rational>],
        c: &[Vec<Rational>],
    ) -> Result<Self> {
        let (m, n) = (row_labels.len(), col_labels.len());
        let shape_ok = |a: &[Vec<Rational>]| a.len() == m && a.iter().all(|row| row.len() == n);
        if !shape_ok(r) || !shape_ok(c) {
            return Err(Error::invalid("matrix shape does not match labels"));
        }
        Game::from_fn(vec![row_labels, col_labels], |s| vec![r[s[0]][s[1]].clone(), c[s[0]][s[1]].clone()])
    }

    /// Bimatrix game from small integer matrices, labels "1".."m" and "1".."n".
    pub fn from_int_matrices(r: &[Vec<i64>], c: &[Vec<i64>]) -> Result<Self> {
        let conv = |a: &[Vec<i64>]| -> Vec<Vec<Rational>> {
            a.iter().map(|row| row.iter().map(|&x| crate::arith::int(x)).collect()).collect()
        };
        let m = r.len();
        let n = r.first().map_or(0, |row| row.len());
        Game::bimatrix(numbered(m, 1), numbered(n, 1), &conv(r), &conv(c))
    }

    pub fn players(&self) -> usize {
        self.labels.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.len()).collect()
    }

    pub fn num_strategies(&self, i: usize) -> usize {
        self.labels[i].len()
    }

    pub fn labels(&self, i: usize) -> &[String] {
        &self.labels[i]
    }

    pub fn all_labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn strategy_index(&self, i: usize, label: &str) -> Option<usize> {
        self.labels[i].iter().position(|l| l == label)
    }

    pub fn is_win_lose(&self) -> bool {
        self.win_lose
    }

    pub fn is_bimatrix(&self) -> bool {
        self.players() == 2
    }

    fn flat(&self, s: &[usize]) -> usize {
        s.iter().zip(&self.strides).map(|(a, b)| a * b).sum()
    }

    pub fn utilities(&self, s: &[usize]) -> &[Rational] {
        let r = self.players();
        let k = self.flat(s);
        &self.table[k * r..(k + 1) * r]
    }

    pub fn utility(&self, s: &[usize], i: usize) -> &Rational {
        &self.table[self.flat(s) * self.players() + i]
    }

    /// Row player's matrix of a bimatrix game.
    pub fn row_matrix(&self) -> Vec<Vec<Rational>> {
        self.player_matrix(0)
    }

    pub fn col_matrix(&self) -> Vec<Vec<Rational>> {
        self.player_matrix(1)
    }

    fn player_matrix(&self, p: usize) -> Vec<Vec<Rational>> {
        assert!(self.is_bimatrix());
        let (m, n) = (self.num_strategies(0), self.num_strategies(1));
        (0..m).map(|i| (0..n).map(|j| self.utility(&[i, j], p).clone()).collect()).collect()
    }

    /// R = Cᵀ with both players' strategies identified by position.
    pub fn is_symmetric(&self) -> bool {
        if !self.is_bimatrix() || self.num_strategies(0) != self.num_strategies(1) {
            return false;
        }
        let n = self.num_strategies(0);
        (0..n).all(|i| (0..n).all(|j| self.utility(&[i, j], 0) == self.utility(&[j, i], 1)))
    }

    pub fn check_profile<S>(&self, sigma: &MixedProfile<S>) -> Result<()> {
        if sigma.dists.len() != self.players() {
            return Err(Error::invalid(format!(
                "profile has {} players, game has {}",
                sigma.dists.len(),
                self.players()
            )));
        }
        for (i, d) in sigma.dists.iter().enumerate() {
            if d.len() != self.num_strategies(i) {
                return Err(Error::invalid(format!(
                    "player {} has {} strategies, profile gives {}",
                    i + 1,
                    self.num_strategies(i),
                    d.len()
                )));
            }
        }
        Ok(())
    }
}

pub fn numbered(n: usize, first: usize) -> Vec<String> {
    (first..first + n).map(|i| i.to_string()).collect()
}

/// Calls `f` on every pure profile in row-major order.
pub fn for_each_profile(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.iter().any(|&n| n == 0) {
        return;
    }
    let mut s = vec![0; sizes.len()];
    loop {
        f(&s);
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            s[k] += 1;
            if s[k] < sizes[k] {
                break;
            }
            s[k] = 0;
        }
    }
}

/// One probability distribution per player, dense over strategy indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedProfile<S> {
    dists: Vec<Vec<S>>,
}

impl<S: Scalar> MixedProfile<S> {
    pub fn new(dists: Vec<Vec<S>>) -> Result<Self> {
        for (i, d) in dists.iter().enumerate() {
            if d.iter().any(|p| p.sign() < 0) {
                return Err(Error::invalid(format!("player {} has a negative probability", i + 1)));
            }
            let total = d.iter().fold(S::zero(), |acc, p| acc + p);
            if total != S::one() {
                return Err(Error::invalid(format!("player {} probabilities sum to {total}", i + 1)));
            }
        }
        Ok(MixedProfile { dists })
    }

    pub(crate) fn new_unchecked(dists: Vec<Vec<S>>) -> Self {
        MixedProfile { dists }
    }

    pub fn pure(sizes: &[usize], s: &[usize]) -> Self {
        let dists = sizes
            .iter()
            .zip(s)
            .map(|(&n, &k)| (0..n).map(|t| if t == k { S::one() } else { S::zero() }).collect())
            .collect();
        MixedProfile { dists }
    }

    /// Uniform on each player's given (nonempty) support.
    pub fn uniform(sizes: &[usize], supports: &[Vec<usize>]) -> Self {
        let dists = sizes
            .iter()
            .zip(supports)
            .map(|(&n, sup)| {
                let p = S::from_rational(&Rational::new(1.into(), (sup.len() as i64).into()));
                let mut d = vec![S::zero(); n];
                for &t in sup {
                    d[t] = p.clone();
                }
                d
            })
            .collect();
        MixedProfile { dists }
    }

    pub fn players(&self) -> usize {
        self.dists.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.dists.iter().map(|d| d.len()).collect()
    }

    pub fn dist(&self, i: usize) -> &[S] {
        &self.dists[i]
    }

    pub fn dists(&self) -> &[Vec<S>] {
        &self.dists
    }

    pub fn into_dists(self) -> Vec<Vec<S>> {
        self.dists
    }

    pub fn prob(&self, i: usize, t: usize) -> &S {
        &self.dists[i][t]
    }

    pub fn support(&self, i: usize) -> Vec<usize> {
        (0..self.dists[i].len()).filter(|&t| self.dists[i][t].is_pos()).collect()
    }

    pub fn supports(&self) -> Vec<Vec<usize>> {
        (0..self.players()).map(|i| self.support(i)).collect()
    }

    pub fn is_pure(&self) -> bool {
        (0..self.players()).all(|i| self.support(i).len() == 1)
    }

    pub fn is_uniform(&self) -> bool {
        self.dists.iter().all(|d| {
            let mut nz = d.iter().filter(|p| p.is_pos());
            match nz.next() {
                Some(first) => nz.all(|p| p == first),
                None => true,
            }
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.players() == 2 && self.dists[0] == self.dists[1]
    }

    pub fn is_rational(&self) -> bool {
        self.dists.iter().flatten().all(|p| p.as_rational().is_some())
    }

    pub fn to_quad(&self) -> MixedProfile<QuadExt> {
        MixedProfile { dists: self.dists.iter().map(|d| d.iter().map(|p| p.to_quad()).collect()).collect() }
    }

    pub fn to_rational(&self) -> Option<MixedProfile<Rational>> {
        let dists = self
            .dists
            .iter()
            .map(|d| d.iter().map(|p| p.as_rational()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(MixedProfile { dists })
    }

    pub fn max_prob(&self) -> S {
        self.dists.iter().flatten().max().cloned().unwrap_or_else(S::zero)
    }
}

/// U_i(σ_{-i} ⋄ t) for every strategy t of player i.
pub fn conditional_utilities<S: Scalar>(g: &Game, sigma: &MixedProfile<S>, i: usize) -> Result<Vec<S>> {
    g.check_profile(sigma)?;
    let r = g.players();
    let n_i = g.num_strategies(i);
    let supports: Vec<Vec<usize>> =
        (0..r).map(|j| if j == i { vec![0] } else { sigma.support(j) }).collect();
    let mut out = vec![S::zero(); n_i];
    let mut pos = vec![0usize; r];
    let mut s = vec![0usize; r];
    loop {
        let mut p = S::one();
        for j in 0..r {
            s[j] = supports[j][pos[j]];
            if j != i {
                p = p * sigma.prob(j, s[j]);
            }
        }
        for (t, acc) in out.iter_mut().enumerate() {
            s[i] = t;
            let u = g.utility(&s, i);
            if u.is_zero() {
                continue;
            }
            let term = if u.is_one() { p.clone() } else { p.clone() * &S::from_rational(u) };
            *acc = acc.clone() + term;
        }
        let mut k = r;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < supports[k].len() {
                break;
            }
            pos[k] = 0;
        }
    }
}

pub fn conditional_utility<S: Scalar>(g: &Game, sigma: &MixedProfile<S>, i: usize, t: usize) -> Result<S> {
    if i >= g.players() || t >= g.num_strategies(i) {
        return Err(Error::invalid(format!("no strategy {t} for player {}", i + 1)));
    }
    Ok(conditional_utilities(g, sigma, i)?.swap_remove(t))
}

pub fn expected_utility<S: Scalar>(g: &Game, sigma: &MixedProfile<S>, i: usize) -> Result<S> {
    if i >= g.players() {
        return Err(Error::invalid(format!("no player {}", i + 1)));
    }
    let cond = conditional_utilities(g, sigma, i)?;
    Ok(cond.into_iter().zip(sigma.dist(i)).fold(S::zero(), |acc, (u, p)| acc + u * p))
}

pub fn expected_utilities<S: Scalar>(g: &Game, sigma: &MixedProfile<S>) -> Result<Vec<S>> {
    (0..g.players()).map(|i| expected_utility(g, sigma, i)).collect()
}

/// A profitable deviation: `worse` is supported yet `better` pays strictly more.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation<S> {
    pub player: usize,
    pub better: usize,
    pub worse: usize,
    pub better_utility: S,
    pub worse_utility: S,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NashCheck<S> {
    pub nash: bool,
    pub witness: Option<Deviation<S>>,
}

/// Every supported strategy must attain the maximal conditional utility.
pub fn is_nash<S: Scalar>(g: &Game, sigma: &MixedProfile<S>) -> Result<NashCheck<S>> {
    g.check_profile(sigma)?;
    for i in 0..g.players() {
        let cond = conditional_utilities(g, sigma, i)?;
        let (better, best) = cond
            .iter()
            .enumerate()
            .fold((0, &cond[0]), |(bi, bv), (t, v)| if v > bv { (t, v) } else { (bi, bv) });
        for t in sigma.support(i) {
            if &cond[t] < best {
                return Ok(NashCheck {
                    nash: false,
                    witness: Some(Deviation {
                        player: i,
                        better,
                        worse: t,
                        better_utility: best.clone(),
                        worse_utility: cond[t].clone(),
                    }),
                });
            }
        }
    }
    Ok(NashCheck { nash: true, witness: None })
}

pub fn is_nash_bool<S: Scalar>(g: &Game, sigma: &MixedProfile<S>) -> bool {
    is_nash(g, sigma).map(|c| c.nash).unwrap_or(false)
}

/// A strategy of `player` that pins some other player's utility to zero.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CounterStrategy {
    pub player: usize,
    pub strategy: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Structure {
    pub win_lose: bool,
    pub pup: bool,
    /// Indexed by the victim player.
    pub all_zero_counter_strategies: Vec<Vec<CounterStrategy>>,
}

pub fn check_structure(g: &Game) -> Structure {
    let r = g.players();
    let sizes = g.sizes();
    let mut pup = true;
    let mut counters = Vec::with_capacity(r);
    for i in 0..r {
        // seen[j][s] is set once a profile with s_j = s pays player i.
        let mut seen: Vec<Vec<bool>> = sizes.iter().map(|&n| vec![false; n]).collect();
        for_each_profile(&sizes, |s| {
            if g.utility(s, i) > &Rational::zero() {
                for j in 0..r {
                    seen[j][s[j]] = true;
                }
            }
        });
        let mut list = Vec::new();
        for j in (0..r).filter(|&j| j != i) {
            for (t, &ok) in seen[j].iter().enumerate() {
                if !ok {
                    list.push(CounterStrategy { player: j, strategy: t });
                }
            }
        }
        if pup {
            let mut partial = sizes.clone();
            partial[i] = 1;
            for_each_profile(&partial, |s| {
                if !pup {
                    return;
                }
                let mut s = s.to_vec();
                pup = (0..sizes[i]).any(|t| {
                    s[i] = t;
                    g.utility(&s, i) > &Rational::zero()
                });
            });
        }
        counters.push(list);
    }
    Structure { win_lose: g.is_win_lose(), pup, all_zero_counter_strategies: counters }
}

/// Checkable side conditions on a given profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertySpec {
    MinUtilityAtLeast(Rational),
    MaxUtilityAtMost(Rational),
    TotalUtilityAtLeast(Rational),
    TotalUtilityAtMost(Rational),
    SupportSizeAtLeast(usize),
    SupportSizeAtMost(usize),
    SupportContains(Vec<Vec<usize>>),
    SupportWithin(Vec<Vec<usize>>),
    MaxProbAtMost(Rational),
    Uniform,
    NonUniform,
    SymmetricProfile,
    NonSymmetricProfile,
    RationalProfile,
    PureParetoDominated,
    PureStrongParetoDominated,
}

pub fn evaluate_property<S: Scalar>(g: &Game, sigma: &MixedProfile<S>, p: &PropertySpec) -> Result<bool> {
    use PropertySpec::*;
    g.check_profile(sigma)?;
    let utils = || expected_utilities(g, sigma);
    let total = || -> Result<S> { Ok(utils()?.into_iter().fold(S::zero(), |a, b| a + b)) };
    let r = g.players();
    Ok(match p {
        MinUtilityAtLeast(u) => utils()?.iter().all(|x| x >= &S::from_rational(u)),
        MaxUtilityAtMost(u) => utils()?.iter().all(|x| x <= &S::from_rational(u)),
        TotalUtilityAtLeast(u) => total()? >= S::from_rational(u),
        TotalUtilityAtMost(u) => total()? <= S::from_rational(u),
        SupportSizeAtLeast(k) => (0..r).all(|i| sigma.support(i).len() >= *k),
        SupportSizeAtMost(k) => (0..r).all(|i| sigma.support(i).len() <= *k),
        SupportContains(sets) => {
            check_sets(g, sets)?;
            (0..r).all(|i| sets[i].iter().all(|&t| sigma.prob(i, t).is_pos()))
        }
        SupportWithin(sets) => {
            check_sets(g, sets)?;
            (0..r).all(|i| sigma.support(i).iter().all(|t| sets[i].contains(t)))
        }
        MaxProbAtMost(u) => sigma.max_prob() <= S::from_rational(u),
        Uniform => sigma.is_uniform(),
        NonUniform => !sigma.is_uniform(),
        SymmetricProfile => sigma.is_symmetric(),
        NonSymmetricProfile => !sigma.is_symmetric(),
        RationalProfile => sigma.is_rational(),
        PureParetoDominated => pure_dominator(g, sigma, false)?.is_some(),
        PureStrongParetoDominated => pure_dominator(g, sigma, true)?.is_some(),
    })
}

fn check_sets(g: &Game, sets: &[Vec<usize>]) -> Result<()> {
    if sets.len() != g.players() {
        return Err(Error::invalid("one strategy set per player required"));
    }
    for (i, set) in sets.iter().enumerate() {
        if set.iter().any(|&t| t >= g.num_strategies(i)) {
            return Err(Error::invalid(format!("strategy out of range for player {}", i + 1)));
        }
    }
    Ok(())
}

/// First pure profile (row-major) that Pareto-dominates `sigma`. In strong
/// mode, every player whose strategy differs must strictly gain.
pub fn pure_dominator<S: Scalar>(g: &Game, sigma: &MixedProfile<S>, strong: bool) -> Result<Option<Vec<usize>>> {
    let base = expected_utilities(g, sigma)?;
    let r = g.players();
    let mut found = None;
    for_each_profile(&g.sizes(), |s| {
        if found.is_some() {
            return;
        }
        let u: Vec<S> = g.utilities(s).iter().map(S::from_rational).collect();
        let some_gain = (0..r).any(|i| u[i] > base[i]);
        let ok = if strong {
            some_gain
                && (0..r).all(|j| {
                    let same = sigma.prob(j, s[j]) == &S::one();
                    same || u[j] > base[j]
                })
        } else {
            some_gain && (0..r).all(|j| u[j] >= base[j])
        };
        if ok {
            found = Some(s.to_vec());
        }
    });
    Ok(found)
}

/// A pure equilibrium extracted from an equilibrium in which some player
/// earns nothing. The pair is chosen jointly over the two supports so the
/// other player's utility is maximal there.
pub fn pure_ne_from_zero_utility(g: &Game, sigma: &MixedProfile<Rational>) -> Result<Vec<usize>> {
    if !g.is_bimatrix() || !g.is_win_lose() {
        return Err(Error::invalid("a win-lose bimatrix game is required"));
    }
    if !is_nash(g, sigma)?.nash {
        return Err(Error::invalid("profile is not a Nash equilibrium"));
    }
    let u = expected_utilities(g, sigma)?;
    let zero = match u.iter().position(|x| x.is_zero()) {
        Some(i) => i,
        None => return Err(Error::invalid("no player has zero expected utility")),
    };
    let other = 1 - zero;
    let mut best: Option<(Vec<usize>, Rational)> = None;
    for a in sigma.support(0) {
        for b in sigma.support(1) {
            let v = g.utility(&[a, b], other).clone();
            if best.as_ref().map_or(true, |(_, bv)| &v > bv) {
                best = Some((vec![a, b], v));
            }
        }
    }
    let s = best.expect("supports are nonempty").0;
    let pure = MixedProfile::<Rational>::pure(&g.sizes(), &s);
    if !is_nash(g, &pure)?.nash {
        return Err(Error::invalid("extracted pure profile is not an equilibrium"));
    }
    Ok(s)
}
