//! GHR symmetrization, balanced mixtures and their inverse, PUP completion
//! and the diagonal embedding.
//!
//! For an m×n bimatrix game ⟨R, C⟩ the symmetrized game is ⟨S, Sᵀ⟩ with
//! S = [[0, R], [Cᵀ, 0]]. Strategies 0..m (the left half) copy the base row
//! strategies, m..m+n (the right half) the base column strategies. A profile
//! φ of the symmetric game splits into four half-components ←φᵢ, →φᵢ.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{int, Rational, Scalar};
use crate::enumerate::{enumerate_ne_bimatrix, enumerate_pure_ne};
use crate::error::{Error, Result};
use crate::game::{check_structure, expected_utilities, is_nash, Game, MixedProfile};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhrLayout {
    pub base_rows: usize,
    pub base_cols: usize,
    /// Strategies of the symmetric game that copy a literal of a reduction
    /// game, from either half (L ∪ L′). Empty for other bases.
    pub literals: Vec<usize>,
}

impl GhrLayout {
    pub fn size(&self) -> usize {
        self.base_rows + self.base_cols
    }

    pub fn left(&self) -> std::ops::Range<usize> {
        0..self.base_rows
    }

    pub fn right(&self) -> std::ops::Range<usize> {
        self.base_rows..self.size()
    }

    /// Rebuilds the layout from the "row:"/"col:" label prefixes.
    pub fn from_labels(labels: &[String]) -> Result<Self> {
        let rows = labels.iter().take_while(|s| s.starts_with("row:")).count();
        if labels[rows..].iter().any(|s| !s.starts_with("col:")) {
            return Err(Error::invalid("labels are not those of a symmetrized game"));
        }
        let literals = labels
            .iter()
            .enumerate()
            .filter(|(_, s)| s[4..].starts_with("lit:"))
            .map(|(t, _)| t)
            .collect();
        Ok(GhrLayout { base_rows: rows, base_cols: labels.len() - rows, literals })
    }
}

pub fn ghr_symmetrize(g: &Game) -> Result<(Game, GhrLayout)> {
    if !g.is_bimatrix() {
        return Err(Error::invalid("symmetrization needs a bimatrix game"));
    }
    if !g.is_win_lose() {
        return Err(Error::invalid("symmetrization needs a win-lose game"));
    }
    let (m, n) = (g.num_strategies(0), g.num_strategies(1));
    let labels: Vec<String> = g
        .labels(0)
        .iter()
        .map(|l| format!("row:{l}"))
        .chain(g.labels(1).iter().map(|l| format!("col:{l}")))
        .collect();
    let layout = GhrLayout::from_labels(&labels)?;
    let s = |a: usize, b: usize| -> Rational {
        match (a < m, b < m) {
            (true, false) => g.utility(&[a, b - m], 0).clone(),
            (false, true) => g.utility(&[b, a - m], 1).clone(),
            _ => Rational::zero(),
        }
    };
    let game = Game::from_fn(vec![labels.clone(), labels], |p| vec![s(p[0], p[1]), s(p[1], p[0])])?;
    debug_assert_eq!(game.num_strategies(0), m + n);
    Ok((game, layout))
}

fn scale<S: Scalar>(v: &[S], k: &S) -> Vec<S> {
    v.iter().map(|x| x.clone() * k).collect()
}

fn concat<S: Scalar>(a: Vec<S>, b: Vec<S>) -> Vec<S> {
    a.into_iter().chain(b).collect()
}

/// (ρ∗τ, τ∗ρ) for base profiles ρ and τ; `rho = None` is the null pair,
/// giving (null∗τ, τ∗null) = (⟨0∘τ₂, τ₁∘0⟩, ⟨τ₁∘0, 0∘τ₂⟩).
pub fn balanced_mixture<S: Scalar>(
    base: &Game,
    rho: Option<&MixedProfile<S>>,
    tau: &MixedProfile<S>,
) -> Result<(MixedProfile<S>, MixedProfile<S>)> {
    base.check_profile(tau)?;
    let (m, n) = (base.num_strategies(0), base.num_strategies(1));
    let (t1, t2) = (tau.dist(0).to_vec(), tau.dist(1).to_vec());
    let Some(rho) = rho else {
        let a = MixedProfile::new(vec![concat(vec![S::zero(); m], t2.clone()), concat(t1.clone(), vec![S::zero(); n])])?;
        let b = MixedProfile::new(vec![concat(t1, vec![S::zero(); n]), concat(vec![S::zero(); m], t2)])?;
        return Ok((a, b));
    };
    base.check_profile(rho)?;
    let ut = expected_utilities(base, tau)?;
    let ur = expected_utilities(base, rho)?;
    let d1 = ut[0].clone() + &ur[1];
    let d2 = ur[0].clone() + &ut[1];
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::invalid("balanced mixture with a zero denominator"));
    }
    let a = ut[0].clone() / &d1;
    let b = ur[1].clone() / &d1;
    let c = ur[0].clone() / &d2;
    let d = ut[1].clone() / &d2;
    let (r1, r2) = (rho.dist(0), rho.dist(1));
    let p = concat(scale(r1, &a), scale(&t2, &b));
    let q = concat(scale(&t1, &c), scale(r2, &d));
    Ok((MixedProfile::new(vec![p.clone(), q.clone()])?, MixedProfile::new(vec![q, p])?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GhrCase {
    /// All four half-components nonzero.
    C1,
    /// ←φ₁ = →φ₂ = 0.
    C2,
    /// →φ₁ = ←φ₂ = 0.
    C3,
}

impl fmt::Display for GhrCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GhrCase::C1 => "C'1",
            GhrCase::C2 => "C'2",
            GhrCase::C3 => "C'3",
        })
    }
}

/// φ = first ∗ second, with `None` standing for the null pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition<S> {
    pub case: GhrCase,
    pub first: Option<MixedProfile<S>>,
    pub second: Option<MixedProfile<S>>,
}

impl<S: Scalar> Decomposition<S> {
    /// The base equilibria this decomposition is built from.
    pub fn recovered(&self) -> Vec<&MixedProfile<S>> {
        self.first.iter().chain(self.second.iter()).collect()
    }

    pub fn compose(&self, base: &Game) -> Result<MixedProfile<S>> {
        match (&self.first, &self.second) {
            (Some(r), Some(t)) => Ok(balanced_mixture(base, Some(r), t)?.0),
            (None, Some(t)) => Ok(balanced_mixture(base, None, t)?.0),
            (Some(t), None) => Ok(balanced_mixture(base, None, t)?.1),
            (None, None) => Err(Error::invalid("null∗null is not a profile")),
        }
    }
}

fn normalized<S: Scalar>(v: &[S]) -> Vec<S> {
    let total = v.iter().fold(S::zero(), |a, x| a + x);
    v.iter().map(|x| x.clone() / &total).collect()
}

fn halves<S: Scalar>(layout: &GhrLayout, phi: &MixedProfile<S>) -> [Vec<S>; 4] {
    let m = layout.base_rows;
    let (p1, p2) = (phi.dist(0), phi.dist(1));
    [p1[..m].to_vec(), p1[m..].to_vec(), p2[..m].to_vec(), p2[m..].to_vec()]
}

pub fn decompose_symmetric_ne<S: Scalar>(
    sym: &Game,
    layout: &GhrLayout,
    phi: &MixedProfile<S>,
) -> Result<Decomposition<S>> {
    if !is_nash(sym, phi)?.nash {
        return Err(Error::invalid("profile is not a Nash equilibrium of the symmetrized game"));
    }
    let [l1, r1, l2, r2] = halves(layout, phi);
    let zero = |v: &[S]| v.iter().all(|x| x.is_zero());
    let pair = |a: &[S], b: &[S]| MixedProfile::new(vec![normalized(a), normalized(b)]);
    match (zero(&l1), zero(&r1), zero(&l2), zero(&r2)) {
        (false, false, false, false) => Ok(Decomposition {
            case: GhrCase::C1,
            first: Some(pair(&l1, &r2)?),
            second: Some(pair(&l2, &r1)?),
        }),
        (true, false, false, true) => Ok(Decomposition { case: GhrCase::C2, first: None, second: Some(pair(&l2, &r1)?) }),
        (false, true, true, false) => Ok(Decomposition { case: GhrCase::C3, first: Some(pair(&l1, &r2)?), second: None }),
        pattern => Err(Error::invalid(format!("half-component zero pattern {pattern:?} fits no case"))),
    }
}

/// One base equilibrium per symmetric one: ⟨←φ̂₂, →φ̂₁⟩ in cases C′1 and
/// C′2, ⟨←φ̂₁, →φ̂₂⟩ in case C′3.
pub fn recover_base_ne<S: Scalar>(base: &Game, sym: &Game, layout: &GhrLayout, phi: &MixedProfile<S>) -> Result<MixedProfile<S>> {
    let d = decompose_symmetric_ne(sym, layout, phi)?;
    let out = match d.case {
        GhrCase::C1 | GhrCase::C2 => d.second.expect("set in these cases"),
        GhrCase::C3 => d.first.expect("set in this case"),
    };
    if !is_nash(base, &out)?.nash {
        return Err(Error::invalid(format!("recovered profile in case {} is not an equilibrium", d.case)));
    }
    Ok(out)
}

/// All balanced mixtures of the given base equilibria: ρ∗τ for every pair,
/// plus null∗τ and τ∗null.
pub fn all_mixtures<S: Scalar>(base: &Game, ne: &[MixedProfile<S>]) -> Result<Vec<MixedProfile<S>>> {
    let mut out = Vec::with_capacity(ne.len() * (ne.len() + 2));
    for rho in ne {
        for tau in ne {
            out.push(balanced_mixture(base, Some(rho), tau)?.0);
        }
    }
    for tau in ne {
        let (a, b) = balanced_mixture(base, None, tau)?;
        out.push(a);
        out.push(b);
    }
    Ok(out)
}

/// Counts and bijection between NE(g) and NE(GHR(g)), plus the inverse
/// decomposition of every oracle equilibrium of the image.
pub fn ghr_count_identity_check(g: &Game) -> Result<Report> {
    let mut rep = Report::new(format!("GHR counting identity on a {}x{} game", g.num_strategies(0), g.num_strategies(1)));
    let st = check_structure(g);
    if !st.win_lose || !st.pup {
        return Err(Error::invalid("the counting identity needs a win-lose game with PUP"));
    }
    let base = enumerate_ne_bimatrix(g)?;
    if base.degenerate {
        rep.skipped = Some("degenerate".into());
        return Ok(rep);
    }
    let (sym, layout) = ghr_symmetrize(g)?;
    let image = enumerate_ne_bimatrix(&sym)?;
    if image.degenerate {
        rep.skipped = Some("degenerate".into());
        return Ok(rep);
    }
    let n = base.equilibria.len();
    let m = image.equilibria.len();
    rep.claim("count", m == n * (n + 2), format!("|NE(g)|={n}, |NE(GHR(g))|={m}, expected {}", n * (n + 2)));

    let mix = all_mixtures(g, &base.equilibria)?;
    let not_nash = mix.iter().filter(|p| !is_nash(&sym, p).map(|c| c.nash).unwrap_or(false)).count();
    rep.claim("mixtures are equilibria", not_nash == 0, format!("{} of {} pass", mix.len() - not_nash, mix.len()));
    let mut sorted = mix.clone();
    sorted.sort();
    sorted.dedup();
    let hits = image.equilibria.iter().filter(|p| mix.contains(p)).count();
    rep.claim(
        "bijection onto the image",
        sorted.len() == mix.len() && hits == m && mix.len() == m,
        format!("{} distinct mixtures, {hits} of {m} image equilibria hit", sorted.len()),
    );

    let mut failures = Vec::new();
    for (k, phi) in image.equilibria.iter().enumerate() {
        let ok = decompose_symmetric_ne(&sym, &layout, phi).and_then(|d| {
            let rec_ok = d.recovered().iter().all(|p| is_nash(g, p).map(|c| c.nash).unwrap_or(false));
            let round = d.compose(g)? == *phi;
            let rec = recover_base_ne(g, &sym, &layout, phi).is_ok();
            Ok(rec_ok && round && rec)
        });
        if !matches!(ok, Ok(true)) {
            failures.push(k);
        }
    }
    rep.claim(
        "decompose and recover",
        failures.is_empty(),
        match failures.first() {
            None => format!("{m} image equilibria decompose and round-trip"),
            Some(k) => format!("image equilibrium #{k} fails"),
        },
    );
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PupCompletion {
    PureNe(Vec<usize>),
    Completed(Game),
}

/// Either a pure equilibrium, or an equivalent game with PUP.
pub fn pup_complete(g: &Game) -> Result<PupCompletion> {
    if !g.is_bimatrix() || !g.is_win_lose() {
        return Err(Error::invalid("PUP completion needs a win-lose bimatrix game"));
    }
    if let Some(s) = enumerate_pure_ne(g).into_iter().next() {
        return Ok(PupCompletion::PureNe(s));
    }
    if check_structure(g).pup {
        return Ok(PupCompletion::Completed(g.clone()));
    }
    let (m, n) = (g.num_strategies(0), g.num_strategies(1));
    let fresh = |labels: &[String]| {
        let mut name = "new".to_string();
        while labels.contains(&name) {
            name.push('\'');
        }
        name
    };
    let mut rows = g.labels(0).to_vec();
    rows.push(fresh(&rows));
    let mut cols = g.labels(1).to_vec();
    cols.push(fresh(&cols));
    let col_of_r_zero: Vec<bool> = (0..n).map(|j| (0..m).all(|i| g.utility(&[i, j], 0).is_zero())).collect();
    let row_of_c_zero: Vec<bool> = (0..m).map(|i| (0..n).all(|j| g.utility(&[i, j], 1).is_zero())).collect();
    let (zero, one) = (Rational::zero(), Rational::one());
    let game = Game::from_fn(vec![rows, cols], |s| match (s[0] == m, s[1] == n) {
        (false, false) => g.utilities(s).to_vec(),
        (true, true) => vec![zero.clone(), zero.clone()],
        (true, false) if col_of_r_zero[s[1]] => vec![one.clone(), zero.clone()],
        (true, false) => vec![zero.clone(), one.clone()],
        (false, true) if row_of_c_zero[s[0]] => vec![zero.clone(), one.clone()],
        (false, true) => vec![one.clone(), zero.clone()],
    })?;
    Ok(PupCompletion::Completed(game))
}

/// Pads a profile of the original game with zero on the completion's new
/// strategies.
pub fn pad_profile(p: &MixedProfile<Rational>) -> MixedProfile<Rational> {
    MixedProfile::new(p.dists().iter().map(|d| d.iter().cloned().chain([Rational::zero()]).collect()).collect())
        .expect("padding keeps a profile")
}

/// Appends k diagonal strategies "diag:1..k" to a symmetrized reduction game.
pub fn diagonal_embed(sym: &Game, layout: &GhrLayout, k: usize) -> Result<Game> {
    if !sym.is_symmetric() {
        return Err(Error::invalid("diagonal embedding needs a symmetric game"));
    }
    if layout.literals.is_empty() {
        return Err(Error::invalid("layout has no literal roles"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let size = sym.num_strategies(0);
    if size != layout.size() {
        return Err(Error::invalid("layout does not match the game"));
    }
    let mut labels = sym.labels(0).to_vec();
    labels.extend((1..=k).map(|j| format!("diag:{j}")));
    let lit: Vec<bool> = (0..size).map(|t| layout.literals.contains(&t)).collect();
    let b = |x: bool| int(x as i64);
    Game::from_fn(vec![labels.clone(), labels], |s| {
        let (a, c) = (s[0], s[1]);
        match (a < size, c < size) {
            (true, true) => sym.utilities(s).to_vec(),
            (true, false) => vec![b(false), b(!lit[a])],
            (false, true) => vec![b(!lit[c]), b(false)],
            (false, false) => {
                let (j, l) = (a - size, c - size);
                vec![b(j <= l), b(l <= j)]
            }
        }
    })
}
