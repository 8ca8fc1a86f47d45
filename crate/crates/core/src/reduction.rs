//! The win-lose reduction G(Ĝ, φ) from a gadget game and a 3SAT formula.
//!
//! Players 1 and 2 are special: besides their gadget strategies they get the
//! literals, the clauses and the ordered pair variables of φ. Every other
//! player gets its gadget strategies plus δ.

use std::fmt;
use std::ops::Range;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{rat, QuadExt, Rational, Scalar};
use crate::enumerate::{enumerate_ne_bimatrix, enumerate_pure_ne};
use crate::error::{Error, Result};
use crate::gadgets::{build_gadget, g2_equilibrium, GadgetId};
use crate::game::{check_structure, conditional_utilities, is_nash, Game, MixedProfile};
use crate::report::Report;
use crate::sample::weights_are_nash;
use crate::sat::{count_sat, Assignment, CnfFormula, Lit};

pub const REFUTATION_SAMPLES: usize = 10_000;

/// What a strategy of the reduction game stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Gadget(usize),
    Literal(Lit),
    Clause(usize),
    /// v_{i,j}, i ≠ j.
    Pair(usize, usize),
    Delta,
}

impl Role {
    /// Labels for all roles but `Gadget`, which carries the gadget's own label.
    pub fn label(&self) -> String {
        match self {
            Role::Gadget(t) => format!("gad:{t}"),
            Role::Literal(l) => format!("lit:{}{}", if l.negated { '-' } else { '+' }, l.var),
            Role::Clause(k) => format!("cls:{k}"),
            Role::Pair(i, j) => format!("var:{i},{j}"),
            Role::Delta => "delta".to_string(),
        }
    }

    /// Inverse of `label`; gadget labels map to `Gadget(0)` since their
    /// index is positional.
    pub fn parse_label(s: &str) -> Option<Role> {
        let bad = || None;
        if s.starts_with("gad:") {
            return Some(Role::Gadget(0));
        }
        if s == "delta" {
            return Some(Role::Delta);
        }
        if let Some(rest) = s.strip_prefix("lit:") {
            let (neg, num) = match rest.as_bytes().first() {
                Some(b'+') => (false, &rest[1..]),
                Some(b'-') => (true, &rest[1..]),
                _ => return bad(),
            };
            let var = num.parse().ok()?;
            return Some(Role::Literal(Lit { var, negated: neg }));
        }
        if let Some(rest) = s.strip_prefix("cls:") {
            return rest.parse().ok().map(Role::Clause);
        }
        if let Some(rest) = s.strip_prefix("var:") {
            let (a, b) = rest.split_once(',')?;
            return Some(Role::Pair(a.parse().ok()?, b.parse().ok()?));
        }
        bad()
    }
}

/// Index arithmetic for the strategy lists of G(Ĝ, φ).
///
/// Special players: gadget strategies, then ℓ₀, ℓ̄₀, …, ℓ_{n−1}, ℓ̄_{n−1},
/// then clauses, then v_{i,j} in lexicographic (i, j) order. Others:
/// gadget strategies, then δ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionLayout {
    pub players: usize,
    pub vars: usize,
    pub clauses: usize,
    pub gadget_sizes: Vec<usize>,
}

impl ReductionLayout {
    pub fn new(gadget_sizes: Vec<usize>, vars: usize, clauses: usize) -> Self {
        ReductionLayout { players: gadget_sizes.len(), vars, clauses, gadget_sizes }
    }

    pub fn is_special(&self, i: usize) -> bool {
        i < 2
    }

    pub fn gadget_range(&self, i: usize) -> Range<usize> {
        0..self.gadget_sizes[i]
    }

    pub fn literal_range(&self, i: usize) -> Range<usize> {
        assert!(self.is_special(i));
        let g = self.gadget_sizes[i];
        g..g + 2 * self.vars
    }

    pub fn clause_range(&self, i: usize) -> Range<usize> {
        let l = self.literal_range(i);
        l.end..l.end + self.clauses
    }

    pub fn pair_range(&self, i: usize) -> Range<usize> {
        let c = self.clause_range(i);
        c.end..c.end + self.vars * (self.vars - 1)
    }

    pub fn delta_index(&self, i: usize) -> usize {
        assert!(!self.is_special(i));
        self.gadget_sizes[i]
    }

    pub fn num_strategies(&self, i: usize) -> usize {
        if self.is_special(i) {
            self.pair_range(i).end
        } else {
            self.gadget_sizes[i] + 1
        }
    }

    pub fn sizes(&self) -> Vec<usize> {
        (0..self.players).map(|i| self.num_strategies(i)).collect()
    }

    pub fn literal_index(&self, i: usize, l: Lit) -> usize {
        self.literal_range(i).start + 2 * l.var + l.negated as usize
    }

    pub fn clause_index(&self, i: usize, k: usize) -> usize {
        self.clause_range(i).start + k
    }

    pub fn pair_index(&self, i: usize, a: usize, b: usize) -> usize {
        assert!(a != b);
        self.pair_range(i).start + a * (self.vars - 1) + if b < a { b } else { b - 1 }
    }

    pub fn role(&self, i: usize, t: usize) -> Role {
        let g = self.gadget_sizes[i];
        if t < g {
            return Role::Gadget(t);
        }
        if !self.is_special(i) {
            assert_eq!(t, g, "strategy {t} out of range for player {}", i + 1);
            return Role::Delta;
        }
        let t = t - g;
        let n = self.vars;
        if t < 2 * n {
            return Role::Literal(Lit { var: t / 2, negated: t % 2 == 1 });
        }
        let t = t - 2 * n;
        if t < self.clauses {
            return Role::Clause(t);
        }
        let t = t - self.clauses;
        assert!(t < n * (n - 1), "strategy out of range for player {}", i + 1);
        let a = t / (n - 1);
        let b = t % (n - 1);
        Role::Pair(a, if b < a { b } else { b + 1 })
    }

    pub fn labels(&self, gadget: &Game) -> Vec<Vec<String>> {
        (0..self.players)
            .map(|i| {
                (0..self.num_strategies(i))
                    .map(|t| match self.role(i, t) {
                        Role::Gadget(t) => format!("gad:{}", gadget.labels(i)[t]),
                        role => role.label(),
                    })
                    .collect()
            })
            .collect()
    }

    /// Recovers the layout from role-carrying labels.
    pub fn from_labels(labels: &[Vec<String>]) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::invalid("a reduction game has at least two players"));
        }
        let gadget_sizes: Vec<usize> =
            labels.iter().map(|l| l.iter().take_while(|s| s.starts_with("gad:")).count()).collect();
        let lits = labels[0].iter().filter(|s| s.starts_with("lit:")).count();
        if lits % 2 != 0 || lits == 0 {
            return Err(Error::invalid("labels do not describe a literal block"));
        }
        let clauses = labels[0].iter().filter(|s| s.starts_with("cls:")).count();
        let layout = ReductionLayout::new(gadget_sizes, lits / 2, clauses);
        for (i, ls) in labels.iter().enumerate() {
            if ls.len() != layout.num_strategies(i) {
                return Err(Error::invalid(format!("player {} has an unexpected strategy count", i + 1)));
            }
            for (t, s) in ls.iter().enumerate() {
                let want = layout.role(i, t);
                let ok = match want {
                    Role::Gadget(_) => s.starts_with("gad:"),
                    other => s == &other.label(),
                };
                if !ok {
                    return Err(Error::invalid(format!("label {s:?} out of place for player {}", i + 1)));
                }
            }
        }
        Ok(layout)
    }
}

/// (to − from) mod n.
pub fn cyclic_index_diff(from: usize, to: usize, n: usize) -> usize {
    assert!(n >= 1 && from < n && to < n);
    (to + n - from) % n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ReductionCase {
    Complementary,
    NearAhead,
    FarAhead,
    Distant,
    PairHit,
    PairHitMirror,
    ClauseHit,
    ClauseHitMirror,
    AllGadget,
    SeveralGadget,
    LoneNonSpecial,
    LoneSpecial,
    Other,
}

impl ReductionCase {
    pub const ALL: [ReductionCase; 13] = [
        ReductionCase::Complementary,
        ReductionCase::NearAhead,
        ReductionCase::FarAhead,
        ReductionCase::Distant,
        ReductionCase::PairHit,
        ReductionCase::PairHitMirror,
        ReductionCase::ClauseHit,
        ReductionCase::ClauseHitMirror,
        ReductionCase::AllGadget,
        ReductionCase::SeveralGadget,
        ReductionCase::LoneNonSpecial,
        ReductionCase::LoneSpecial,
        ReductionCase::Other,
    ];

    pub fn tag(&self) -> &'static str {
        use ReductionCase::*;
        match self {
            Complementary => "1",
            NearAhead => "2",
            FarAhead => "3",
            Distant => "4",
            PairHit => "5/a",
            PairHitMirror => "5/b",
            ClauseHit => "6/a",
            ClauseHitMirror => "6/b",
            AllGadget => "7",
            SeveralGadget => "8",
            LoneNonSpecial => "9",
            LoneSpecial => "10",
            Other => "11",
        }
    }
}

impl fmt::Display for ReductionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.tag())
    }
}

/// Utility vector of pure profile `s` and the case that produced it.
pub fn reduction_utility(
    layout: &ReductionLayout,
    gadget: &Game,
    formula: &CnfFormula,
    s: &[usize],
) -> (Vec<Rational>, ReductionCase) {
    use ReductionCase::*;
    let r = layout.players;
    let n = layout.vars;
    let roles: Vec<Role> = (0..r).map(|i| layout.role(i, s[i])).collect();
    let on_gadget: Vec<usize> = (0..r).filter(|&i| matches!(roles[i], Role::Gadget(_))).collect();
    let bit = |b: bool| if b { Rational::one() } else { Rational::zero() };
    let with_rest = |u1: bool, u2: bool, rest: bool| {
        let mut v = vec![bit(u1), bit(u2)];
        v.extend((2..r).map(|_| bit(rest)));
        v
    };

    if on_gadget.len() == r {
        let gs: Vec<usize> = roles
            .iter()
            .map(|x| match x {
                Role::Gadget(t) => *t,
                _ => unreachable!(),
            })
            .collect();
        return (gadget.utilities(&gs).to_vec(), AllGadget);
    }
    if on_gadget.len() > 1 {
        return ((0..r).map(|i| bit(on_gadget.contains(&i))).collect(), SeveralGadget);
    }
    if let [i] = on_gadget[..] {
        let kronecker = (0..r).map(|j| bit(j == i)).collect();
        if i >= 2 {
            return (kronecker, LoneNonSpecial);
        }
        let gated = match roles[1 - i] {
            Role::Literal(l) => l.var < 2,
            Role::Clause(_) | Role::Pair(..) => true,
            _ => false,
        };
        return if gated { (kronecker, LoneSpecial) } else { (vec![Rational::zero(); r], Other) };
    }

    // Nobody on a gadget strategy, so every non-special player is on δ.
    let in_clause = |k: usize, l: Lit| formula.clauses[k].contains(&l.complement());
    let hit = match (roles[0], roles[1]) {
        (Role::Literal(a), Role::Literal(b)) => {
            if b == a.complement() {
                Some((false, false, Complementary))
            } else {
                match cyclic_index_diff(a.var, b.var, n) {
                    0 | 1 => Some((true, false, NearAhead)),
                    2 | 3 => Some((false, true, FarAhead)),
                    _ => Some((false, false, Distant)),
                }
            }
        }
        (Role::Pair(i, j), Role::Literal(l)) if l.var == i || l.var == j => Some((true, false, PairHit)),
        (Role::Literal(l), Role::Pair(i, j)) if l.var == i || l.var == j => Some((false, true, PairHitMirror)),
        (Role::Clause(k), Role::Literal(l)) if in_clause(k, l) => Some((true, false, ClauseHit)),
        (Role::Literal(l), Role::Clause(k)) if in_clause(k, l) => Some((false, true, ClauseHitMirror)),
        _ => None,
    };
    match hit {
        Some((u1, u2, case)) => (with_rest(u1, u2, true), case),
        None => (vec![Rational::zero(); r], Other),
    }
}

/// Checks the reduction's preconditions on the gadget and the formula.
pub fn validate_inputs(gadget: &Game, formula: &CnfFormula) -> Result<()> {
    if !gadget.is_win_lose() {
        return Err(Error::invalid("gadget is not win-lose"));
    }
    if !check_structure(gadget).pup {
        return Err(Error::invalid("gadget lacks the positive utility property"));
    }
    if formula.var_count < 4 {
        return Err(Error::invalid(format!("the reduction needs n >= 4 variables, got {}", formula.var_count)));
    }
    let warnings = formula.validate_3sat()?;
    if let Some(w) = warnings.first() {
        return Err(Error::invalid(format!("{w}; clauses need three distinct literals")));
    }
    Ok(())
}

pub fn build_reduction(gadget: &Game, formula: &CnfFormula) -> Result<(Game, ReductionLayout)> {
    validate_inputs(gadget, formula)?;
    let layout = ReductionLayout::new(gadget.sizes(), formula.var_count, formula.clauses.len());
    let game = Game::from_fn(layout.labels(gadget), |s| reduction_utility(&layout, gadget, formula, s).0)?;
    Ok((game, layout))
}

/// Special players uniform on γ's true literals, everyone else on δ.
pub fn literal_equilibrium(layout: &ReductionLayout, gamma: &Assignment) -> Result<MixedProfile<Rational>> {
    if gamma.values.len() != layout.vars {
        return Err(Error::invalid(format!(
            "assignment over {} variables, layout has {}",
            gamma.values.len(),
            layout.vars
        )));
    }
    let sizes = layout.sizes();
    let supports: Vec<Vec<usize>> = (0..layout.players)
        .map(|i| {
            if layout.is_special(i) {
                gamma.true_literals().into_iter().map(|l| layout.literal_index(i, l)).collect()
            } else {
                vec![layout.delta_index(i)]
            }
        })
        .collect();
    Ok(MixedProfile::uniform(&sizes, &supports))
}

/// Places a gadget profile on the gadget block, zero elsewhere.
pub fn embed_gadget_profile<S: Scalar>(layout: &ReductionLayout, sigma: &MixedProfile<S>) -> Result<MixedProfile<S>> {
    if sigma.sizes() != layout.gadget_sizes {
        return Err(Error::invalid("profile does not match the gadget's shape"));
    }
    let dists = sigma
        .dists()
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let mut out = vec![S::zero(); layout.num_strategies(i)];
            out[..d.len()].clone_from_slice(d);
            out
        })
        .collect();
    MixedProfile::new(dists)
}

/// Equilibria of a gadget that the tool knows how to produce: the oracle's
/// list for bimatrix gadgets, pure equilibria otherwise, plus the closed
/// form when the gadget is G2. The flag reports a degenerate oracle run.
pub fn known_gadget_equilibria(gadget: &Game) -> Result<(Vec<MixedProfile<QuadExt>>, bool)> {
    if gadget.is_bimatrix() {
        let res = enumerate_ne_bimatrix(gadget)?;
        return Ok((res.equilibria.iter().map(|p| p.to_quad()).collect(), res.degenerate));
    }
    let sizes = gadget.sizes();
    let mut out: Vec<MixedProfile<QuadExt>> =
        enumerate_pure_ne(gadget).iter().map(|s| MixedProfile::pure(&sizes, s)).collect();
    if *gadget == build_gadget(GadgetId::G2)? {
        out.push(g2_equilibrium());
    }
    Ok((out, false))
}

fn describe_assignment(g: &Assignment) -> String {
    g.values.iter().map(|&v| if v { '1' } else { '0' }).collect()
}

struct AssignmentOutcome {
    satisfied: bool,
    accepted: bool,
    // Deviation utility of player 1 and whether it is an unsatisfied clause.
    deviation: Option<(Rational, Option<usize>)>,
}

fn assess_assignment(
    game: &Game,
    layout: &ReductionLayout,
    formula: &CnfFormula,
    gamma: &Assignment,
) -> Result<AssignmentOutcome> {
    let sigma = literal_equilibrium(layout, gamma)?;
    let check = is_nash(game, &sigma)?;
    let deviation = match &check.witness {
        Some(w) => {
            let clause = match layout.role(w.player, w.better) {
                Role::Clause(k) if !formula.clauses[k].iter().any(|l| l.holds(gamma)) => Some(k),
                _ => None,
            };
            Some((w.better_utility.clone(), clause))
        }
        None => None,
    };
    Ok(AssignmentOutcome { satisfied: formula.eval(gamma), accepted: check.nash, deviation })
}

/// Random weights biased toward the literal block: special players draw a
/// random set of literals, other players sit on δ.
fn literal_biased_weights(rng: &mut ChaCha8Rng, layout: &ReductionLayout) -> Vec<Vec<u64>> {
    let uniform = rng.gen_bool(0.5);
    (0..layout.players)
        .map(|i| {
            let mut w = vec![0u64; layout.num_strategies(i)];
            if layout.is_special(i) {
                let lits = layout.literal_range(i);
                let want = rng.gen_range(1..=lits.len());
                for _ in 0..want {
                    let t = rng.gen_range(lits.clone());
                    w[t] = if uniform { 1 } else { rng.gen_range(1..=4) };
                }
            } else {
                w[layout.delta_index(i)] = 1;
            }
            w
        })
        .collect()
}

fn random_support_weights(rng: &mut ChaCha8Rng, sizes: &[usize]) -> Vec<Vec<u64>> {
    crate::sample::random_weights(rng, sizes, 4)
}

/// Satisfiability equivalence of G(Ĝ, φ): gadget equilibria embed, literal
/// equilibria are accepted exactly for satisfying assignments, rejected ones
/// are broken by an unsatisfied clause at 3/n, and random profiles outside
/// both families are refuted.
pub fn reduction_equivalence_check(gadget: &Game, formula: &CnfFormula, seed: u64, samples: usize) -> Result<Report> {
    let n = formula.var_count;
    if n > 14 {
        return Err(Error::invalid(format!("assignment sweep limited to 14 variables, got {n}")));
    }
    let (game, layout) = build_reduction(gadget, formula)?;
    let mut rep = Report::new(format!("reduction check: n={n}, {} clauses, {} players", formula.clauses.len(), layout.players));

    let st = check_structure(&game);
    rep.claim("win-lose with PUP", st.win_lose && st.pup, format!("win_lose={} pup={}", st.win_lose, st.pup));

    let (gadget_ne, degenerate) = known_gadget_equilibria(gadget)?;
    let mut bad = Vec::new();
    for (k, sigma) in gadget_ne.iter().enumerate() {
        let emb = embed_gadget_profile(&layout, sigma)?;
        if !is_nash(&game, &emb)?.nash {
            bad.push(k);
        }
    }
    let note = if degenerate { " (oracle degenerate, partial list)" } else { "" };
    rep.claim(
        "gadget equilibria embed",
        bad.is_empty() && !gadget_ne.is_empty(),
        format!("{} of {} embed{note}{}", gadget_ne.len() - bad.len(), gadget_ne.len(), first_bad(&bad)),
    );

    let outcomes: Vec<AssignmentOutcome> = (0..1u64 << n)
        .into_par_iter()
        .map(|bits| assess_assignment(&game, &layout, formula, &Assignment::from_bits(n, bits)))
        .collect::<Result<_>>()?;
    let gamma = |bits: usize| describe_assignment(&Assignment::from_bits(n, bits as u64));
    let mismatch = outcomes.iter().position(|o| o.accepted != o.satisfied);
    let accepted = outcomes.iter().filter(|o| o.accepted).count();
    let sat = count_sat(formula, false)?.count;
    rep.claim(
        "literal equilibria match satisfiability",
        mismatch.is_none(),
        match mismatch {
            None => format!("{accepted} accepted, #phi={sat}"),
            Some(b) => format!("assignment {} accepted={} satisfied={}", gamma(b), outcomes[b].accepted, outcomes[b].satisfied),
        },
    );
    let three = rat(3, n as i64);
    let bad_dev = outcomes.iter().position(|o| {
        !o.satisfied && !matches!(&o.deviation, Some((u, Some(_))) if *u == three)
    });
    rep.claim(
        "unsatisfied clause deviation at 3/n",
        bad_dev.is_none(),
        match bad_dev {
            None => format!("{} rejected assignments, each broken by a clause at {three}", outcomes.len() - accepted),
            Some(b) => format!("assignment {}: deviation {:?}", gamma(b), outcomes[b].deviation),
        },
    );

    // Refutation sampling outside the two families.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes = layout.sizes();
    let family: Vec<MixedProfile<QuadExt>> = gadget_ne
        .iter()
        .map(|s| embed_gadget_profile(&layout, s))
        .chain((0..1u64 << n).filter(|&b| outcomes[b as usize].accepted).map(|b| {
            literal_equilibrium(&layout, &Assignment::from_bits(n, b)).map(|p| p.to_quad())
        }))
        .collect::<Result<_>>()?;
    let mut tested = 0;
    let mut counterexample = None;
    for k in 0..samples {
        let w = if k % 2 == 0 { literal_biased_weights(&mut rng, &layout) } else { random_support_weights(&mut rng, &sizes) };
        if !weights_are_nash(&game, &w) {
            tested += 1;
            continue;
        }
        let p = crate::sample::weights_to_profile(&w).to_quad();
        if family.contains(&p) {
            continue;
        }
        tested += 1;
        counterexample = Some(format!("{:?}", w));
        break;
    }
    rep.claim(
        "refutation sampling",
        counterexample.is_none(),
        match counterexample {
            None => format!("{tested} profiles outside both families refuted"),
            Some(w) => format!("weights {w} pass the Nash test"),
        },
    );
    Ok(rep)
}

fn first_bad(bad: &[usize]) -> String {
    bad.first().map(|k| format!(", first failure at #{k}")).unwrap_or_default()
}

/// Expected utilities of the special players against γ, per strategy, used
/// for the per-strategy bound under a satisfying assignment.
pub fn special_conditional_utilities(game: &Game, layout: &ReductionLayout, gamma: &Assignment) -> Result<[Vec<Rational>; 2]> {
    let sigma = literal_equilibrium(layout, gamma)?;
    Ok([conditional_utilities(game, &sigma, 0)?, conditional_utilities(game, &sigma, 1)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{expected_utilities, for_each_profile};
    use crate::sat::parse_dimacs;

    fn f4() -> CnfFormula {
        parse_dimacs("p cnf 4 2\n1 2 3 0\n-1 -2 4 0\n").unwrap()
    }

    #[test]
    fn cyclic_diff() {
        assert_eq!(cyclic_index_diff(0, 1, 4), 1);
        assert_eq!(cyclic_index_diff(3, 1, 4), 2);
        assert_eq!(cyclic_index_diff(2, 2, 4), 0);
    }

    #[test]
    fn layout_sizes_and_roles() {
        let g = build_gadget(GadgetId::G1(1)).unwrap();
        let (game, layout) = build_reduction(&g, &f4()).unwrap();
        assert_eq!(game.sizes(), vec![23, 23]);
        for i in 0..2 {
            for t in 0..23 {
                let role = layout.role(i, t);
                let back = match role {
                    Role::Gadget(k) => k,
                    Role::Literal(l) => layout.literal_index(i, l),
                    Role::Clause(k) => layout.clause_index(i, k),
                    Role::Pair(a, b) => layout.pair_index(i, a, b),
                    Role::Delta => unreachable!(),
                };
                assert_eq!(back, t);
            }
        }
        assert_eq!(ReductionLayout::from_labels(game.all_labels()).unwrap(), layout);

        let g2 = build_gadget(GadgetId::G2).unwrap();
        let f = parse_dimacs("p cnf 4 1\n1 2 3 0\n").unwrap();
        let (game, _) = build_reduction(&g2, &f).unwrap();
        assert_eq!(game.sizes(), vec![2 + 21, 2 + 21, 4]);
    }

    #[test]
    fn figure_cases() {
        let g = build_gadget(GadgetId::G1(1)).unwrap();
        let f = parse_dimacs("p cnf 5 1\n1 2 3 0\n").unwrap();
        let (_, layout) = build_reduction(&g, &f).unwrap();
        let u = |a: usize, b: usize| reduction_utility(&layout, &g, &f, &[a, b]);
        let lit = |l: Lit| layout.literal_index(0, l);
        assert_eq!(u(lit(Lit::pos(0)), lit(Lit::neg(0))), (vec![rat(0, 1), rat(0, 1)], ReductionCase::Complementary));
        assert_eq!(u(layout.pair_index(0, 0, 2), lit(Lit::pos(2))), (vec![rat(1, 1), rat(0, 1)], ReductionCase::PairHit));
        assert_eq!(u(0, lit(Lit::pos(2))), (vec![rat(0, 1), rat(0, 1)], ReductionCase::Other));
        assert_eq!(u(0, lit(Lit::pos(1))).1, ReductionCase::LoneSpecial);
        assert_eq!(u(lit(Lit::pos(4)), lit(Lit::pos(0))).1, ReductionCase::NearAhead);
        assert_eq!(u(lit(Lit::pos(0)), lit(Lit::pos(3))).1, ReductionCase::FarAhead);
        assert_eq!(u(lit(Lit::pos(0)), lit(Lit::pos(4))).1, ReductionCase::Distant);
        assert_eq!(u(layout.clause_index(0, 0), lit(Lit::neg(1))).1, ReductionCase::ClauseHit);
        assert_eq!(u(layout.clause_index(0, 0), lit(Lit::pos(1))).1, ReductionCase::Other);
        assert_eq!(u(0, 0), (vec![rat(1, 1), rat(1, 1)], ReductionCase::AllGadget));
    }

    #[test]
    fn every_case_fires_with_three_players() {
        let g = build_gadget(GadgetId::G2).unwrap();
        let f = parse_dimacs("p cnf 5 2\n1 2 3 0\n-3 4 5 0\n").unwrap();
        let (game, layout) = build_reduction(&g, &f).unwrap();
        let mut seen = std::collections::HashSet::new();
        for_each_profile(&game.sizes(), |s| {
            seen.insert(reduction_utility(&layout, &g, &f, s).1);
        });
        assert_eq!(seen.len(), ReductionCase::ALL.len());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = build_gadget(GadgetId::G1(1)).unwrap();
        let short = parse_dimacs("p cnf 4 1\n1 2 0\n").unwrap();
        assert!(build_reduction(&g, &short).is_err());
        let small = parse_dimacs("p cnf 3 1\n1 2 3 0\n").unwrap();
        assert!(build_reduction(&g, &small).is_err());
        let rep = parse_dimacs("p cnf 4 1\n1 1 2 0\n").unwrap();
        assert!(build_reduction(&g, &rep).is_err());
        let no_pup = Game::from_int_matrices(&[vec![0, 1], vec![0, 1]], &[vec![1, 0], vec![1, 0]]).unwrap();
        assert!(build_reduction(&no_pup, &f4()).is_err());
    }

    #[test]
    fn literal_equilibrium_values() {
        let g = build_gadget(GadgetId::G1(1)).unwrap();
        let f = f4();
        let (game, layout) = build_reduction(&g, &f).unwrap();
        let all_true = Assignment { values: vec![true; 4] };
        let sigma = literal_equilibrium(&layout, &all_true).unwrap();
        assert_eq!(sigma.support(0).len(), 4);
        assert!(sigma.is_symmetric());
        assert_eq!(expected_utilities(&game, &sigma).unwrap(), vec![rat(1, 2), rat(1, 2)]);
        assert!(is_nash(&game, &sigma).unwrap().nash);
    }

    #[test]
    fn three_player_delta_and_irrational_embedding() {
        let g = build_gadget(GadgetId::G2).unwrap();
        let f = parse_dimacs("p cnf 4 1\n1 2 3 0\n").unwrap();
        let (game, layout) = build_reduction(&g, &f).unwrap();
        let sigma = literal_equilibrium(&layout, &Assignment { values: vec![true; 4] }).unwrap();
        assert_eq!(expected_utilities(&game, &sigma).unwrap()[2], rat(1, 1));
        let emb = embed_gadget_profile(&layout, &g2_equilibrium()).unwrap();
        assert!(is_nash(&game, &emb).unwrap().nash);
        assert!(!emb.is_rational());
    }

    #[test]
    fn equivalence_check_small() {
        let g = build_gadget(GadgetId::G1(1)).unwrap();
        let rep = reduction_equivalence_check(&g, &f4(), 1, 500).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}
