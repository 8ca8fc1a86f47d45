//! Prebuilt scenarios on G = G(Ĝ, φ) and its symmetrization G̃.
//!
//! Each scenario constructs the candidate equilibria explicitly (gadget
//! embeddings, literal equilibria, balanced mixtures, diagonal profiles),
//! checks them with the exact Nash test and asserts the exact utilities,
//! supports and probabilities. Nothing here enumerates G or G̃.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{rat, Rational};
use crate::enumerate::{enumerate_ne_bimatrix, find_symmetric_ne_lp};
use crate::error::{Error, Result};
use crate::gadgets::{build_gadget, g2_equilibrium, GadgetId};
use crate::game::{expected_utilities, is_nash, pure_dominator, Game, MixedProfile};
use crate::ghr::{balanced_mixture, diagonal_embed, ghr_symmetrize, GhrLayout};
use crate::reduction::{build_reduction, embed_gadget_profile, literal_equilibrium, ReductionLayout};
use crate::report::Report;
use crate::sat::{count_sat, Assignment, CnfFormula};

type Profile = MixedProfile<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioId {
    Group1,
    Group2,
    /// `None` picks the smallest h > 2n.
    Group3(Option<usize>),
    Group4(usize),
    SymmetricNashWitness,
    RationalNashWitness,
}

impl ScenarioId {
    pub fn parse(name: &str, h: Option<usize>, k: Option<usize>) -> Result<Self> {
        Ok(match name.to_ascii_lowercase().replace('-', "_").as_str() {
            "group1" => ScenarioId::Group1,
            "group2" => ScenarioId::Group2,
            "group3" => ScenarioId::Group3(h),
            "group4" => match k.unwrap_or(1) {
                0 => return Err(Error::invalid("group4 needs k >= 1")),
                k => ScenarioId::Group4(k),
            },
            "symmetric_nash_witness" => ScenarioId::SymmetricNashWitness,
            "rational_nash_witness" => ScenarioId::RationalNashWitness,
            other => return Err(Error::invalid(format!("unknown scenario {other:?}"))),
        })
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioId::Group1 => write!(f, "group1"),
            ScenarioId::Group2 => write!(f, "group2"),
            ScenarioId::Group3(Some(h)) => write!(f, "group3(h={h})"),
            ScenarioId::Group3(None) => write!(f, "group3"),
            ScenarioId::Group4(k) => write!(f, "group4(k={k})"),
            ScenarioId::SymmetricNashWitness => write!(f, "symmetric_nash_witness"),
            ScenarioId::RationalNashWitness => write!(f, "rational_nash_witness"),
        }
    }
}

pub fn run_scenario(id: ScenarioId, formula: &CnfFormula) -> Result<Report> {
    if formula.var_count > 14 {
        return Err(Error::invalid("scenarios sweep assignments and allow at most 14 variables"));
    }
    match id {
        ScenarioId::Group1 => group1(formula),
        ScenarioId::Group2 => group2(formula),
        ScenarioId::Group3(h) => group3(formula, h.unwrap_or(2 * formula.var_count + 1)),
        ScenarioId::Group4(k) => group4(formula, k),
        ScenarioId::SymmetricNashWitness => symmetric_nash_witness(formula),
        ScenarioId::RationalNashWitness => rational_nash_witness(formula),
    }
}

/// Rational equilibria of a bimatrix gadget: the closed form for G1[h],
/// the oracle's list otherwise.
fn gadget_equilibria(id: GadgetId, gadget: &Game) -> Result<Vec<Profile>> {
    let list = match id {
        GadgetId::G1(h) => {
            let all: Vec<usize> = (0..h).collect();
            vec![MixedProfile::uniform(&[h, h], &[all.clone(), all])]
        }
        _ => enumerate_ne_bimatrix(gadget)?.equilibria,
    };
    for p in &list {
        if !is_nash(gadget, p)?.nash {
            return Err(Error::invalid(format!("gadget {id} equilibrium fails the Nash test")));
        }
    }
    Ok(list)
}

struct Base {
    n: usize,
    game: Game,
    layout: ReductionLayout,
    gadget_ne: Vec<Profile>,
    literal_ne: Vec<Profile>,
    sat: u64,
}

fn satisfying(formula: &CnfFormula) -> Result<Vec<Assignment>> {
    Ok(count_sat(formula, true)?.witnesses.unwrap_or_default())
}

fn base(id: GadgetId, formula: &CnfFormula) -> Result<Base> {
    let gadget = build_gadget(id)?;
    let (game, layout) = build_reduction(&gadget, formula)?;
    let gadget_ne = gadget_equilibria(id, &gadget)?
        .iter()
        .map(|p| embed_gadget_profile(&layout, p))
        .collect::<Result<Vec<_>>>()?;
    let gammas = satisfying(formula)?;
    let literal_ne = gammas.iter().map(|g| literal_equilibrium(&layout, g)).collect::<Result<Vec<_>>>()?;
    Ok(Base { n: formula.var_count, game, layout, gadget_ne, literal_ne, sat: gammas.len() as u64 })
}

/// Balanced mixtures grouped by the kind of their inputs.
struct Families {
    gadget_gadget: Vec<Profile>,
    null_gadget: Vec<Profile>,
    literal_same: Vec<Profile>,
    literal_diff: Vec<Profile>,
    null_literal: Vec<Profile>,
    gadget_literal: Vec<Profile>,
}

impl Families {
    fn build(g: &Game, gadget: &[Profile], literal: &[Profile]) -> Result<Self> {
        let pairs = |xs: &[Profile], ys: &[Profile]| -> Result<Vec<Profile>> {
            let mut out = Vec::new();
            for x in xs {
                for y in ys {
                    out.push(balanced_mixture(g, Some(x), y)?.0);
                }
            }
            Ok(out)
        };
        let nulls = |xs: &[Profile]| -> Result<Vec<Profile>> {
            let mut out = Vec::new();
            for x in xs {
                let (a, b) = balanced_mixture(g, None, x)?;
                out.push(a);
                out.push(b);
            }
            Ok(out)
        };
        let mut literal_same = Vec::new();
        let mut literal_diff = Vec::new();
        for (i, x) in literal.iter().enumerate() {
            for (j, y) in literal.iter().enumerate() {
                let m = balanced_mixture(g, Some(x), y)?.0;
                if i == j {
                    literal_same.push(m);
                } else {
                    literal_diff.push(m);
                }
            }
        }
        let mut gadget_literal = pairs(gadget, literal)?;
        gadget_literal.extend(pairs(literal, gadget)?);
        Ok(Families {
            gadget_gadget: pairs(gadget, gadget)?,
            null_gadget: nulls(gadget)?,
            literal_same,
            literal_diff,
            null_literal: nulls(literal)?,
            gadget_literal,
        })
    }

    fn literal_literal(&self) -> Vec<Profile> {
        self.literal_same.iter().chain(&self.literal_diff).cloned().collect()
    }

    fn all(&self) -> Vec<Profile> {
        [&self.gadget_gadget, &self.null_gadget, &self.literal_same, &self.literal_diff, &self.null_literal, &self.gadget_literal]
            .into_iter()
            .flatten()
            .cloned()
            .collect()
    }
}

/// Per-profile numbers the property checks look at.
struct Stats {
    nash: bool,
    utilities: Vec<Rational>,
    supports: Vec<Vec<usize>>,
    max_prob: Rational,
    min_prob: Rational,
    uniform: bool,
    symmetric: bool,
}

fn stats(g: &Game, p: &Profile) -> Result<Stats> {
    let positive: Vec<&Rational> = p.dists().iter().flatten().filter(|x| !x.is_zero()).collect();
    Ok(Stats {
        nash: is_nash(g, p)?.nash,
        utilities: expected_utilities(g, p)?,
        supports: p.supports(),
        max_prob: positive.iter().map(|x| (*x).clone()).max().unwrap_or_else(Rational::zero),
        min_prob: positive.iter().map(|x| (*x).clone()).min().unwrap_or_else(Rational::zero),
        uniform: p.is_uniform(),
        symmetric: p.is_symmetric(),
    })
}

fn all_stats(g: &Game, ps: &[Profile]) -> Result<Vec<Stats>> {
    ps.par_iter().map(|p| stats(g, p)).collect()
}

fn summary(st: &[Stats]) -> String {
    let set = |f: &dyn Fn(&Stats) -> Vec<String>| -> String {
        let s: BTreeSet<String> = st.iter().flat_map(f).collect();
        s.into_iter().collect::<Vec<_>>().join(",")
    };
    format!(
        "{} profiles; U {{{}}}; |Supp| {{{}}}; p in [{{{}}}, {{{}}}]",
        st.len(),
        set(&|s| s.utilities.iter().map(|u| u.to_string()).collect()),
        set(&|s| s.supports.iter().map(|x| x.len().to_string()).collect()),
        set(&|s| vec![s.min_prob.to_string()]),
        set(&|s| vec![s.max_prob.to_string()]),
    )
}

/// Claims that `pred` holds for every member; an empty family fails when
/// `nonempty` is set.
fn claim_all(rep: &mut Report, name: &str, st: &[Stats], nonempty: bool, pred: impl Fn(&Stats) -> bool) -> bool {
    let bad = st.iter().position(|s| !pred(s));
    let ok = bad.is_none() && (!nonempty || !st.is_empty());
    let detail = match bad {
        Some(k) => format!("profile #{k} violates it; {}", summary(st)),
        None if st.is_empty() => "no profiles".to_string(),
        None => summary(st),
    };
    rep.claim(name, ok, detail)
}

fn each_player(s: &Stats, f: impl Fn(&Rational, usize) -> bool) -> bool {
    s.utilities.iter().zip(&s.supports).all(|(u, sup)| f(u, sup.len()))
}

fn within(s: &Stats, set: &[usize]) -> bool {
    s.supports.iter().all(|sup| sup.iter().all(|t| set.contains(t)))
}

fn sum(s: &Stats) -> Rational {
    s.utilities.iter().fold(Rational::zero(), |a, b| a + b)
}

fn inv(n: usize) -> Rational {
    rat(1, n as i64)
}

struct Symmetrized {
    b: Base,
    sym: Game,
    glayout: GhrLayout,
    fam: Families,
    gadget_sym: Vec<usize>,
}

fn symmetrized(id: GadgetId, formula: &CnfFormula) -> Result<Symmetrized> {
    let b = base(id, formula)?;
    let (sym, glayout) = ghr_symmetrize(&b.game)?;
    let fam = Families::build(&b.game, &b.gadget_ne, &b.literal_ne)?;
    let m = b.game.num_strategies(0);
    let gadget_sym: Vec<usize> = b.layout.gadget_range(0).chain(b.layout.gadget_range(1).map(|t| m + t)).collect();
    Ok(Symmetrized { b, sym, glayout, fam, gadget_sym })
}

fn header(name: &str, id: GadgetId, formula: &CnfFormula, sat: u64) -> Report {
    Report::new(format!(
        "scenario {name}: gadget {id}, n={}, {} clauses, #phi={sat} (constructive verification)",
        formula.var_count,
        formula.clauses.len()
    ))
}

fn base_claims(rep: &mut Report, b: &Base) -> Result<()> {
    let gad = all_stats(&b.game, &b.gadget_ne)?;
    claim_all(rep, "gadget equilibria are equilibria of G", &gad, true, |s| s.nash);
    let lit = all_stats(&b.game, &b.literal_ne)?;
    claim_all(rep, "literal equilibria are equilibria of G", &lit, b.sat > 0, |s| {
        s.nash && s.utilities[..2].iter().all(|u| *u == rat(2, b.n as i64))
    });
    Ok(())
}

pub fn group1(formula: &CnfFormula) -> Result<Report> {
    let id = GadgetId::G1(1);
    let s = symmetrized(id, formula)?;
    let n = s.b.n;
    let mut rep = header("group1", id, formula, s.b.sat);
    base_claims(&mut rep, &s.b)?;
    let lits = &s.glayout.literals;

    let gg = all_stats(&s.sym, &s.fam.gadget_gadget)?;
    let ng = all_stats(&s.sym, &s.fam.null_gadget)?;
    claim_all(&mut rep, "sigma1 gadget*gadget: NE, U=1/2, |Supp|=2, p=1/2", &gg, true, |x| {
        x.nash && each_player(x, |u, k| *u == rat(1, 2) && k == 2) && x.max_prob == rat(1, 2) && x.min_prob == rat(1, 2)
    });
    claim_all(&mut rep, "sigma2/3 null with gadget: NE, U=1, |Supp|=1", &ng, true, |x| {
        x.nash && each_player(x, |u, k| u.is_one() && k == 1)
    });
    let gadget_side: Vec<&Stats> = gg.iter().chain(&ng).collect();
    let p_props = gadget_side.iter().all(|x| {
        each_player(x, |u, k| *u >= rat(1, 2) && k <= 2)
            && sum(x) >= Rational::one()
            && within(x, &s.gadget_sym)
            && x.min_prob >= rat(1, 2)
            && x.uniform
    });
    rep.claim("P.1-P.6 on gadget mixtures", p_props, format!("{} profiles", gadget_side.len()));

    let sat = s.b.sat > 0;
    let ll = all_stats(&s.sym, &s.fam.literal_literal())?;
    let nl = all_stats(&s.sym, &s.fam.null_literal)?;
    let gl = all_stats(&s.sym, &s.fam.gadget_literal)?;
    if !sat {
        rep.claim("no literal candidates when unsatisfiable", ll.is_empty() && nl.is_empty() && gl.is_empty(), "");
        return Ok(rep);
    }
    claim_all(&mut rep, "sigma4 literal*literal: NE, U=1/n, |Supp|=2n, p=1/(2n), uniform, in L+L'", &ll, true, |x| {
        x.nash
            && each_player(x, |u, k| *u == inv(n) && k == 2 * n)
            && x.max_prob == inv(2 * n)
            && x.uniform
            && within(x, lits)
    });
    claim_all(&mut rep, "sigma5/6 null with literal: NE, U=2/n, |Supp|=n, p=1/n, uniform", &nl, true, |x| {
        x.nash && each_player(x, |u, k| *u == rat(2, n as i64) && k == n) && x.max_prob == inv(n) && x.uniform && within(x, lits)
    });
    let q_lit: Vec<&Stats> = ll.iter().chain(&nl).collect();
    let q1_6 = q_lit.iter().all(|x| {
        each_player(x, |u, k| *u <= rat(2, n as i64) && k >= n)
            && sum(x) <= rat(4, n as i64)
            && within(x, lits)
            && x.max_prob < rat(2, n as i64 + 2)
            && x.uniform
    });
    rep.claim("Q.1-Q.6 on literal mixtures", q1_6, format!("{} profiles, expected #phi(#phi+2)={}", q_lit.len(), s.b.sat * (s.b.sat + 2)));
    let two_over = rat(2, n as i64 + 2);
    claim_all(&mut rep, "sigma7/8 gadget with literal: NE, U=2/(n+2), |Supp|=n+1, p<=2/(n+2), non-uniform", &gl, true, |x| {
        x.nash && each_player(x, |u, k| *u == two_over && k == n + 1) && x.max_prob == two_over && !x.uniform
    });
    let mut allowed = lits.clone();
    allowed.extend(&s.gadget_sym);
    let q7_12 = gl.iter().all(|x| {
        each_player(x, |u, k| *u < rat(2, n as i64) && k > n)
            && sum(x) < rat(4, n as i64)
            && within(x, &allowed)
            && x.max_prob <= two_over
            && !x.uniform
    });
    rep.claim("Q.7-Q.12 on gadget-literal mixtures", q7_12, format!("{} profiles, expected 2#phi={}", gl.len(), 2 * s.b.sat));
    Ok(rep)
}

pub fn group2(formula: &CnfFormula) -> Result<Report> {
    let id = GadgetId::G3;
    let s = symmetrized(id, formula)?;
    let mut rep = header("group2", id, formula, s.b.sat);
    base_claims(&mut rep, &s.b)?;
    let gadget_side: Vec<Profile> = s.fam.gadget_gadget.iter().chain(&s.fam.null_gadget).cloned().collect();
    let gs = all_stats(&s.sym, &gadget_side)?;
    claim_all(&mut rep, "gadget mixtures: NE and non-uniform (P.1 candidates)", &gs, true, |x| x.nash && !x.uniform);
    if s.b.sat == 0 {
        let all = all_stats(&s.sym, &s.fam.all())?;
        claim_all(&mut rep, "P.1 no uniform candidate", &all, true, |x| !x.uniform);
        return Ok(rep);
    }
    let ll = all_stats(&s.sym, &s.fam.literal_literal())?;
    claim_all(&mut rep, "Q.1 sigma4 literal*literal: NE and uniform", &ll, true, |x| x.nash && x.uniform);
    let gl = all_stats(&s.sym, &s.fam.gadget_literal)?;
    claim_all(&mut rep, "Q.2 sigma7/8 gadget with literal: NE and non-uniform", &gl, true, |x| x.nash && !x.uniform);
    let nl = all_stats(&s.sym, &s.fam.null_literal)?;
    claim_all(&mut rep, "sigma5/6 null with literal: NE, uniform (null*uniform stays uniform)", &nl, true, |x| x.nash && x.uniform);
    Ok(rep)
}

pub fn group3(formula: &CnfFormula, h: usize) -> Result<Report> {
    let n = formula.var_count;
    if h <= 2 * n {
        return Err(Error::invalid(format!("group3 needs h > 2n = {}, got {h}", 2 * n)));
    }
    let id = GadgetId::G1(h);
    let s = symmetrized(id, formula)?;
    let mut rep = header("group3", id, formula, s.b.sat);
    base_claims(&mut rep, &s.b)?;
    let gg = all_stats(&s.sym, &s.fam.gadget_gadget)?;
    let ng = all_stats(&s.sym, &s.fam.null_gadget)?;
    claim_all(&mut rep, "sigma1 gadget*gadget: NE, U=1/(2h), |Supp|=2h", &gg, true, |x| {
        x.nash && each_player(x, |u, k| *u == inv(2 * h) && k == 2 * h)
    });
    claim_all(&mut rep, "sigma2/3 null with gadget: NE, U=1/h, |Supp|=h", &ng, true, |x| {
        x.nash && each_player(x, |u, k| *u == inv(h) && k == h)
    });
    let p_ok = gg.iter().chain(&ng).all(|x| {
        each_player(x, |u, k| *u <= inv(h) && *u < inv(2 * n) && k >= h && k > 2 * n) && sum(x) <= rat(2, h as i64)
    });
    rep.claim("P.1-P.3 on gadget mixtures", p_ok, format!("{} profiles", gg.len() + ng.len()));
    if s.b.sat == 0 {
        return Ok(rep);
    }
    let ll = all_stats(&s.sym, &s.fam.literal_literal())?;
    claim_all(&mut rep, "sigma4 literal*literal: NE, U=1/n, |Supp|=2n", &ll, true, |x| {
        x.nash && each_player(x, |u, k| *u == inv(n) && k == 2 * n)
    });
    claim_all(&mut rep, "Q.1-Q.3 on literal*literal mixtures", &ll, true, |x| {
        each_player(x, |u, k| *u >= inv(n) && k <= 2 * n && k < h) && sum(x) >= rat(2, n as i64)
    });
    let nl = all_stats(&s.sym, &s.fam.null_literal)?;
    claim_all(&mut rep, "sigma5/6 null with literal: NE, U=2/n, |Supp|=n", &nl, true, |x| {
        x.nash && each_player(x, |u, k| *u == rat(2, n as i64) && k == n)
    });
    let gl = all_stats(&s.sym, &s.fam.gadget_literal)?;
    let u = rat(2, (n + 2 * h) as i64);
    claim_all(&mut rep, "Q.4-Q.6 sigma7/8 gadget with literal: NE, U=2/(n+2h), |Supp|=n+h", &gl, true, |x| {
        x.nash && each_player(x, |v, k| *v == u && k == n + h) && sum(x) == rat(4, (n + 2 * h) as i64)
    });
    Ok(rep)
}

fn pad(p: &Profile, extra: usize) -> Profile {
    MixedProfile::new(p.dists().iter().map(|d| d.iter().cloned().chain(vec![Rational::zero(); extra]).collect()).collect())
        .expect("padding keeps a profile")
}

pub fn group4(formula: &CnfFormula, k: usize) -> Result<Report> {
    let id = GadgetId::G1(2);
    let s = symmetrized(id, formula)?;
    let mut rep = header(&format!("group4(k={k})"), id, formula, s.b.sat);
    base_claims(&mut rep, &s.b)?;
    let d = diagonal_embed(&s.sym, &s.glayout, k)?;
    let size = s.sym.num_strategies(0);
    let sizes = d.sizes();
    let diag: Vec<Profile> = (0..k).map(|t| MixedProfile::pure(&sizes, &[size + t, size + t])).collect();
    let ds = all_stats(&d, &diag)?;
    claim_all(&mut rep, "diagonal profiles: NE, symmetric, U=(1,1)", &ds, true, |x| {
        x.nash && x.symmetric && x.utilities.iter().all(|u| u.is_one())
    });

    let gadget_side: Vec<Profile> =
        s.fam.gadget_gadget.iter().chain(&s.fam.null_gadget).chain(&s.fam.gadget_literal).map(|p| pad(p, k)).collect();
    let gs = all_stats(&d, &gadget_side)?;
    claim_all(&mut rep, "mixtures involving the gadget are not equilibria after embedding", &gs, true, |x| !x.nash);

    if s.b.sat == 0 {
        // Utility 1 is the maximum of a win-lose game, so (1,1) admits no
        // Pareto improvement at all; the pure scan double-checks it.
        let mut undominated = true;
        for p in &diag {
            undominated &= pure_dominator(&d, p, false)?.is_none() && pure_dominator(&d, p, true)?.is_none();
        }
        rep.claim("diagonal equilibria are Pareto-optimal and strongly Pareto-optimal", undominated, format!("{k} equilibria"));
        return Ok(rep);
    }
    let same: Vec<Profile> = s.fam.literal_same.iter().map(|p| pad(p, k)).collect();
    let diff: Vec<Profile> = s.fam.literal_diff.iter().chain(&s.fam.null_literal).map(|p| pad(p, k)).collect();
    let ss = all_stats(&d, &same)?;
    let sd = all_stats(&d, &diff)?;
    let phi = s.b.sat as usize;
    claim_all(&mut rep, "symmetric literal mixtures: NE", &ss, true, |x| x.nash && x.symmetric);
    rep.claim("symmetric count is #phi", ss.len() == phi, format!("{} constructed, #phi={phi}", ss.len()));
    claim_all(&mut rep, "non-symmetric literal mixtures: NE", &sd, true, |x| x.nash && !x.symmetric);
    let mut distinct = diff.clone();
    distinct.sort();
    distinct.dedup();
    rep.claim(
        "non-symmetric count is #phi(#phi+1)",
        sd.len() == phi * (phi + 1) && distinct.len() == diff.len(),
        format!("{} constructed, {} distinct, #phi(#phi+1)={}", sd.len(), distinct.len(), phi * (phi + 1)),
    );
    let mut refuted = true;
    let witness = [size, size];
    for (p, x) in same.iter().chain(&diff).zip(ss.iter().chain(&sd)) {
        refuted &= x.utilities.iter().all(|u| *u < Rational::one());
        refuted &= pure_dominator(&d, p, false)?.is_some() && pure_dominator(&d, p, true)?.is_some();
    }
    rep.claim(
        "literal mixtures are Pareto-dominated by a diagonal profile",
        refuted,
        format!("{:?} pays (1,1) against utilities below 1", witness.map(|t| d.labels(0)[t].clone())),
    );
    Ok(rep)
}

pub fn symmetric_nash_witness(formula: &CnfFormula) -> Result<Report> {
    let id = GadgetId::G4;
    let gadget = build_gadget(id)?;
    let (game, layout) = build_reduction(&gadget, formula)?;
    let gammas = satisfying(formula)?;
    let mut rep = header("symmetric_nash_witness", id, formula, gammas.len() as u64);
    rep.claim(
        "gadget has no symmetric equilibrium",
        find_symmetric_ne_lp(&gadget)?.is_none(),
        "LP search over all supports",
    );
    let oracle = enumerate_ne_bimatrix(&gadget)?;
    let embedded = oracle.equilibria.iter().map(|p| embed_gadget_profile(&layout, p)).collect::<Result<Vec<_>>>()?;
    let es = all_stats(&game, &embedded)?;
    claim_all(&mut rep, "embedded gadget equilibria: NE and non-symmetric", &es, true, |x| x.nash && !x.symmetric);
    let n = formula.var_count;
    let outcomes: Vec<(bool, bool, bool)> = (0..1u64 << n)
        .into_par_iter()
        .map(|bits| {
            let g = Assignment::from_bits(n, bits);
            let p = literal_equilibrium(&layout, &g)?;
            Ok((formula.eval(&g), is_nash(&game, &p)?.nash, p.is_symmetric()))
        })
        .collect::<Result<_>>()?;
    let found = outcomes.iter().filter(|o| o.1 && o.2).count();
    let matches = outcomes.iter().all(|&(sat, nash, symmetric)| symmetric && nash == sat);
    rep.claim(
        "symmetric literal equilibrium exists iff satisfiable",
        matches && (found > 0) == !gammas.is_empty(),
        format!("{found} symmetric literal equilibria over {} assignments", outcomes.len()),
    );
    Ok(rep)
}

pub fn rational_nash_witness(formula: &CnfFormula) -> Result<Report> {
    let id = GadgetId::G2;
    let gadget = build_gadget(id)?;
    let (game, layout) = build_reduction(&gadget, formula)?;
    let sat = count_sat(formula, false)?.count;
    let mut rep = header("rational_nash_witness", id, formula, sat);
    let emb = embed_gadget_profile(&layout, &g2_equilibrium())?;
    let nash = is_nash(&game, &emb)?.nash;
    rep.claim("embedded gadget equilibrium: NE over Q(sqrt5), irrational", nash && !emb.is_rational(), format!("nash={nash}"));
    let n = formula.var_count;
    let outcomes: Vec<(bool, bool, bool)> = (0..1u64 << n)
        .into_par_iter()
        .map(|bits| {
            let g = Assignment::from_bits(n, bits);
            let p = literal_equilibrium(&layout, &g)?;
            Ok((formula.eval(&g), is_nash(&game, &p)?.nash, p.is_rational()))
        })
        .collect::<Result<_>>()?;
    let accepted = outcomes.iter().filter(|o| o.1).count();
    let exact = outcomes.iter().all(|&(s, nash, rational)| rational && nash == s);
    rep.claim(
        "rational literal equilibria in bijection with satisfying assignments",
        exact && accepted as u64 == sat,
        format!("{accepted} accepted, #phi={sat}"),
    );
    let delta = (0..1u64 << n).filter(|&b| outcomes[b as usize].1).all(|b| {
            let p = literal_equilibrium(&layout, &Assignment::from_bits(n, b)).expect("same shape");
            (2..layout.players).all(|i| p.support(i) == vec![layout.delta_index(i)])
        });
    rep.claim("non-special players pure on delta", delta, "");
    Ok(rep)
}

/// Constructed equilibria of G = G(G1[1], φ) and of its symmetrization:
/// |NE(Ĝ)| + #φ and (|NE(Ĝ)|+#φ)(|NE(Ĝ)|+#φ+2) pairwise distinct profiles,
/// each checked with the Nash test.
pub fn counting_lower_bound(formula: &CnfFormula) -> Result<Report> {
    let id = GadgetId::G1(1);
    let s = symmetrized(id, formula)?;
    let mut rep = header("counting lower bound", id, formula, s.b.sat);
    let base_ne: Vec<Profile> = s.b.gadget_ne.iter().chain(&s.b.literal_ne).cloned().collect();
    let want = s.b.gadget_ne.len() + s.b.sat as usize;
    let bs = all_stats(&s.b.game, &base_ne)?;
    let mut d = base_ne.clone();
    d.sort();
    d.dedup();
    rep.claim(
        "equilibria of G",
        bs.iter().all(|x| x.nash) && d.len() == want,
        format!("{} distinct, |NE(G^)|+#phi={want}", d.len()),
    );
    let mix = s.fam.all();
    let ms = all_stats(&s.sym, &mix)?;
    let mut d = mix.clone();
    d.sort();
    d.dedup();
    rep.claim(
        "equilibria of the symmetrization",
        ms.iter().all(|x| x.nash) && d.len() == want * (want + 2),
        format!("{} distinct, expected {}", d.len(), want * (want + 2)),
    );
    Ok(rep)
}
