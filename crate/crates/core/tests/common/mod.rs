//! Randomized invariants shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use winlose_core::arith::{format_rational, parse_rational, rat, sign_quadext, QuadExt, Rational};
use winlose_core::enumerate::{enumerate_ne_bimatrix, EnumerationResult};
use winlose_core::gadgets::{build_gadget, GadgetId};
use winlose_core::game::{
    check_structure, conditional_utilities, expected_utilities, is_nash, Game,
    MixedProfile,
};
use winlose_core::ghr::{
    all_mixtures, balanced_mixture, decompose_symmetric_ne, ghr_symmetrize, pad_profile, pup_complete, recover_base_ne,
    PupCompletion,
};
use winlose_core::io::{game_from_json, game_to_json, profile_from_json, profile_to_json, AnyProfile};
use winlose_core::reduction::{
    build_reduction, cyclic_index_diff, literal_equilibrium, reduction_utility, special_conditional_utilities,
    ReductionCase, ReductionLayout, Role,
};
use winlose_core::sample::weights_to_profile;
use winlose_core::sat::{count_sat, Assignment, CnfFormula, Lit};
use winlose_core::Scalar;

/// Runs one property under the fixed seed.
pub fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    TestRunner::new(config(cases)).run(&strategy, test).map_err(|e| e.to_string())
}

/// Each entry becomes a `#[test]` and a row of `run_all`.
macro_rules! suite {
    ($($cases:literal => fn $name:ident($($pat:pat in $strat:expr),+ $(,)?) $body:block)*) => {
        $(
            #[test]
            fn $name() {
                if let Err(e) = check($cases, ($($strat,)+), |($($pat,)+)| { $body Ok(()) }) {
                    panic!("{e}");
                }
            }
        )*

        pub fn run_all() -> Vec<(&'static str, Result<(), String>)> {
            vec![$((stringify!($name), check($cases, ($($strat,)+), |($($pat,)+)| { $body Ok(()) }))),*]
        }
    };
}

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x57a7_e5ee_d), failure_persistence: None, ..Config::default() }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn quad() -> impl Strategy<Value = QuadExt> {
    (small_rational(), small_rational()).prop_map(|(a, b)| QuadExt::new(a, b))
}

fn win_lose(m: usize, n: usize) -> impl Strategy<Value = Game> {
    (proptest::collection::vec(0i64..=1, m * n), proptest::collection::vec(0i64..=1, m * n)).prop_map(move |(r, c)| {
        let rows = |v: &[i64]| v.chunks(n).map(<[i64]>::to_vec).collect::<Vec<_>>();
        Game::from_int_matrices(&rows(&r), &rows(&c)).unwrap()
    })
}

fn sized_win_lose(max: usize) -> impl Strategy<Value = Game> {
    (2..=max, 2..=max).prop_flat_map(|(m, n)| win_lose(m, n))
}

fn pup_win_lose(max: usize) -> impl Strategy<Value = Game> {
    sized_win_lose(max).prop_filter("needs PUP", |g| check_structure(g).pup)
}

fn symmetric_win_lose(max: usize) -> impl Strategy<Value = Game> {
    (2..=max).prop_flat_map(|n| proptest::collection::vec(0i64..=1, n * n)).prop_map(|bits| {
        let n = (bits.len() as f64).sqrt() as usize;
        let r: Vec<Vec<i64>> = bits.chunks(n).map(<[i64]>::to_vec).collect();
        let c: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| r[j][i]).collect()).collect();
        Game::from_int_matrices(&r, &c).unwrap()
    })
}

fn weights(sizes: Vec<usize>) -> impl Strategy<Value = Vec<Vec<u64>>> {
    sizes
        .into_iter()
        .map(|n| proptest::collection::vec(0u64..=3, n).prop_filter("nonzero", |w| w.iter().any(|&x| x > 0)))
        .collect::<Vec<_>>()
}

fn game_and_profile(g: impl Strategy<Value = Game>) -> impl Strategy<Value = (Game, MixedProfile<Rational>)> {
    g.prop_flat_map(|g| {
        let sizes = g.sizes();
        (Just(g), weights(sizes).prop_map(|w| weights_to_profile(&w)))
    })
}

fn enumerate(g: &Game) -> EnumerationResult {
    enumerate_ne_bimatrix(g).unwrap()
}

fn three_sat(n_range: std::ops::RangeInclusive<usize>, max_clauses: usize) -> impl Strategy<Value = CnfFormula> {
    n_range.prop_flat_map(move |n| {
        let clause = (proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 3), proptest::collection::vec(any::<bool>(), 3))
            .prop_map(|(vars, neg)| vars.into_iter().zip(neg).map(|(v, s)| if s { Lit::neg(v) } else { Lit::pos(v) }).collect());
        proptest::collection::vec(clause, 1..=max_clauses).prop_map(move |cs| CnfFormula::new(n, cs).unwrap())
    })
}




fn satisfying(f: &CnfFormula) -> BTreeSet<Vec<bool>> {
    (0..1u64 << f.var_count).map(|b| Assignment::from_bits(f.var_count, b)).filter(|a| f.eval(a)).map(|a| a.values).collect()
}



/// Every case whose defining condition holds, evaluated independently.
fn matching_cases(layout: &ReductionLayout, f: &CnfFormula, s: &[usize]) -> Vec<ReductionCase> {
    use ReductionCase::*;
    let r = layout.players;
    let n = layout.vars;
    let roles: Vec<Role> = (0..r).map(|i| layout.role(i, s[i])).collect();
    let gad: Vec<bool> = roles.iter().map(|x| matches!(x, Role::Gadget(_))).collect();
    let count = gad.iter().filter(|&&b| b).count();
    let mut out = Vec::new();
    if count == r {
        out.push(AllGadget);
    }
    if count > 1 && count < r {
        out.push(SeveralGadget);
    }
    if count == 1 && gad[2..].iter().any(|&b| b) {
        out.push(LoneNonSpecial);
    }
    let low = |x: &Role| match x {
        Role::Literal(l) => l.var <= 1,
        Role::Clause(_) | Role::Pair(..) => true,
        _ => false,
    };
    if count == 1 && ((gad[0] && low(&roles[1])) || (gad[1] && low(&roles[0]))) {
        out.push(LoneSpecial);
    }
    if count == 0 {
        match (roles[0], roles[1]) {
            (Role::Literal(a), Role::Literal(b)) => {
                let d = cyclic_index_diff(a.var, b.var, n);
                if a.var == b.var && a.negated != b.negated {
                    out.push(Complementary);
                }
                if !(a.var == b.var && a.negated != b.negated) && d <= 1 {
                    out.push(NearAhead);
                }
                if (2..=3).contains(&d) {
                    out.push(FarAhead);
                }
                if d > 3 {
                    out.push(Distant);
                }
            }
            (Role::Pair(i, j), Role::Literal(l)) if [i, j].contains(&l.var) => out.push(PairHit),
            (Role::Literal(l), Role::Pair(i, j)) if [i, j].contains(&l.var) => out.push(PairHitMirror),
            (Role::Clause(k), Role::Literal(l)) if f.clauses[k].iter().any(|c| c.var == l.var && c.negated != l.negated) => {
                out.push(ClauseHit)
            }
            (Role::Literal(l), Role::Clause(k)) if f.clauses[k].iter().any(|c| c.var == l.var && c.negated != l.negated) => {
                out.push(ClauseHitMirror)
            }
            _ => {}
        }
    }
    if out.is_empty() {
        out.push(Other);
    }
    out
}

suite! {
    256 => fn rational_field_laws(x in small_rational(), y in small_rational(), z in small_rational()) {
        prop_assert_eq!((x.clone() + &y) + &z, x.clone() + (y.clone() + &z));
        prop_assert_eq!(x.clone() * (y.clone() + &z), x.clone() * &y + x.clone() * &z);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    256 => fn quad_field_laws(x in quad(), y in quad(), z in quad()) {
        prop_assert_eq!((x.clone() + &y) + &z, x.clone() + (y.clone() + &z));
        prop_assert_eq!(x.clone() * (y.clone() + &z), x.clone() * &y + x.clone() * &z);
        prop_assert_eq!((x.clone() * &y) * &z, x.clone() * (y.clone() * &z));
        if !x.is_zero() {
            prop_assert_eq!(x.clone() * (QuadExt::one() / &x), QuadExt::one());
        }
    }

    256 => fn quad_signs(x in quad()) {
        let p = sign_quadext(&x) * sign_quadext(&-x.clone());
        prop_assert!(p == 0 || p == -1);
        prop_assert!(sign_quadext(&(x.clone() * &x)) >= 0);
        // cross-check against a float evaluation away from zero
        let f = |r: &Rational| r.numer().to_string().parse::<f64>().unwrap() / r.denom().to_string().parse::<f64>().unwrap();
        let approx = f(&x.a) + f(&x.b) * 5f64.sqrt();
        if approx.abs() > 1e-6 {
            prop_assert_eq!(sign_quadext(&x), if approx > 0.0 { 1 } else { -1 });
        }
    }

    128 => fn multilinear_in_each_player((g, p) in game_and_profile(sized_win_lose(4)), w in proptest::collection::vec(0u64..=3, 4)) {
        for i in 0..2 {
            let n = g.num_strategies(i);
            let mut w = w[..n].to_vec();
            if w.iter().all(|&x| x == 0) { w[0] = 1; }
            let q = weights_to_profile(&[w.clone(), w.clone()]).dist(0).to_vec();
            let at = |t: Rational| {
                let d: Vec<Rational> = (0..n).map(|k| (Rational::one() - &t) * &p.dist(i)[k] + t.clone() * &q[k]).collect();
                let mut dists = p.dists().to_vec();
                dists[i] = d;
                expected_utilities(&g, &MixedProfile::new(dists).unwrap()).unwrap()
            };
            let (u0, uh, u1) = (at(rat(0, 1)), at(rat(1, 2)), at(rat(1, 1)));
            for j in 0..2 {
                prop_assert_eq!(uh[j].clone(), (u0[j].clone() + &u1[j]) / rat(2, 1));
            }
        }
    }

    128 => fn nash_witness_is_sound((g, p) in game_and_profile(sized_win_lose(4))) {
        let check = is_nash(&g, &p).unwrap();
        match check.witness {
            None => prop_assert!(check.nash),
            Some(d) => {
                prop_assert!(!check.nash);
                let cond = conditional_utilities(&g, &p, d.player).unwrap();
                prop_assert!(cond[d.better] > cond[d.worse]);
                prop_assert!(p.prob(d.player, d.worse).is_pos());
            }
        }
    }

    128 => fn exchangeability((g, p) in game_and_profile(symmetric_win_lose(4))) {
        let swapped = MixedProfile::new(vec![p.dist(1).to_vec(), p.dist(0).to_vec()]).unwrap();
        prop_assert_eq!(is_nash(&g, &p).unwrap().nash, is_nash(&g, &swapped).unwrap().nash);
        let res = enumerate(&g);
        for e in &res.equilibria {
            let s = MixedProfile::new(vec![e.dist(1).to_vec(), e.dist(0).to_vec()]).unwrap();
            prop_assert!(is_nash(&g, &s).unwrap().nash);
        }
    }

    128 => fn symmetric_games_have_even_asymmetric_counts(g in symmetric_win_lose(4)) {
        let res = enumerate(&g);
        prop_assume!(!res.degenerate);
        let asym = res.equilibria.iter().filter(|e| !e.is_symmetric()).count();
        prop_assert_eq!(asym % 2, 0);
    }

    128 => fn oracle_is_sound_and_nonempty(g in sized_win_lose(4)) {
        let res = enumerate(&g);
        prop_assert!(res.degenerate || !res.equilibria.is_empty());
        for e in &res.equilibria {
            prop_assert!(is_nash(&g, e).unwrap().nash);
        }
        let mut sorted = res.equilibria.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), res.equilibria.len());
    }

    128 => fn sampled_equilibria_are_listed((g, samples) in sized_win_lose(3).prop_flat_map(|g| {
        let sizes = g.sizes();
        (Just(g), proptest::collection::vec(weights(sizes), 200))
    })) {
        let res = enumerate(&g);
        prop_assume!(!res.degenerate);
        for w in samples {
            let p = weights_to_profile(&w);
            if is_nash(&g, &p).unwrap().nash {
                prop_assert!(res.equilibria.contains(&p), "missing {:?}", p);
            }
        }
    }

    128 => fn positive_utility_at_equilibria(g in pup_win_lose(4)) {
        let res = enumerate(&g);
        for e in &res.equilibria {
            for u in expected_utilities(&g, e).unwrap() {
                prop_assert!(u.is_pos());
            }
        }
    }

    128 => fn enumeration_is_deterministic(g in sized_win_lose(4)) {
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| enumerate(&g))
        };
        let (a, b) = (run(1), run(4));
        prop_assert_eq!(a.equilibria, b.equilibria);
        prop_assert_eq!(a.degenerate, b.degenerate);
    }

    128 => fn json_round_trip((g, p) in game_and_profile(sized_win_lose(4))) {
        prop_assert_eq!(game_from_json(&game_to_json(&g)).unwrap(), g.clone());
        let v = profile_to_json(&g, &p).unwrap();
        prop_assert_eq!(profile_from_json(&g, &v).unwrap(), AnyProfile::Rational(p.clone()));
        let q = p.to_quad();
        let v = profile_to_json(&g, &q).unwrap();
        prop_assert_eq!(profile_from_json(&g, &v).unwrap(), AnyProfile::QuadExt(q));
    }

    128 => fn sat_count_matches_truth_table(f in three_sat(3..=8, 8)) {
        let c = count_sat(&f, true).unwrap();
        let direct = satisfying(&f);
        prop_assert_eq!(c.count as usize, direct.len());
        prop_assert_eq!(c.parity as usize, direct.len() % 2);
        let listed: BTreeSet<Vec<bool>> = c.witnesses.unwrap().into_iter().map(|a| a.values).collect();
        prop_assert_eq!(listed, direct);
    }

    128 => fn sat_count_invariant_under_renaming(f in three_sat(3..=8, 8), perm in any::<u64>()) {
        let n = f.var_count;
        let mut order: Vec<usize> = (0..n).collect();
        let mut state = perm;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let renamed = CnfFormula::new(
            n,
            f.clauses.iter().map(|c| c.iter().map(|l| Lit { var: order[l.var], negated: l.negated }).collect()).collect(),
        ).unwrap();
        prop_assert_eq!(count_sat(&f, false).unwrap().count, count_sat(&renamed, false).unwrap().count);
    }

    24 => fn exactly_one_case_fires(f in three_sat(4..=6, 4), three in any::<bool>(), picks in proptest::collection::vec(any::<prop::sample::Index>(), 400)) {
        let gadget = build_gadget(if three { GadgetId::G2 } else { GadgetId::G1(2) }).unwrap();
        let (game, layout) = build_reduction(&gadget, &f).unwrap();
        let sizes = game.sizes();
        for chunk in picks.chunks_exact(sizes.len()) {
            let s: Vec<usize> = chunk.iter().zip(&sizes).map(|(ix, &n)| ix.index(n)).collect();
            let (u, case) = reduction_utility(&layout, &gadget, &f, &s);
            prop_assert_eq!(matching_cases(&layout, &f, &s), vec![case]);
            prop_assert_eq!(game.utilities(&s), &u[..]);
        }
    }

    24 => fn reduction_preserves_win_lose_and_pup(f in three_sat(4..=5, 4), id in prop::sample::select(vec![GadgetId::G1(1), GadgetId::G1(3), GadgetId::G2, GadgetId::G3, GadgetId::G4])) {
        let gadget = build_gadget(id).unwrap();
        let (game, _) = build_reduction(&gadget, &f).unwrap();
        let st = check_structure(&game);
        prop_assert!(st.win_lose);
        prop_assert!(st.pup);
    }

    24 => fn satisfying_literal_profiles_bound_deviations(f in three_sat(4..=5, 5)) {
        let gadget = build_gadget(GadgetId::G1(1)).unwrap();
        let (game, layout) = build_reduction(&gadget, &f).unwrap();
        let n = f.var_count;
        for values in satisfying(&f) {
            let gamma = Assignment { values };
            let sigma = literal_equilibrium(&layout, &gamma).unwrap();
            let bound = rat(2, n as i64);
            for (i, cond) in special_conditional_utilities(&game, &layout, &gamma).unwrap().iter().enumerate() {
                for (t, u) in cond.iter().enumerate() {
                    prop_assert!(u <= &bound);
                    if sigma.prob(i, t).is_pos() {
                        prop_assert_eq!(u, &bound);
                    }
                }
            }
        }
    }

    24 => fn accepted_literal_profiles_put_others_on_delta(f in three_sat(4..=5, 4)) {
        let gadget = build_gadget(GadgetId::G2).unwrap();
        let (game, layout) = build_reduction(&gadget, &f).unwrap();
        for bits in 0..1u64 << f.var_count {
            let gamma = Assignment::from_bits(f.var_count, bits);
            let sigma = literal_equilibrium(&layout, &gamma).unwrap();
            if is_nash(&game, &sigma).unwrap().nash {
                prop_assert!(f.eval(&gamma));
                prop_assert_eq!(sigma.support(2), vec![layout.delta_index(2)]);
            }
        }
    }

    48 => fn ghr_forward_and_inverse(g in pup_win_lose(3)) {
        let res = enumerate(&g);
        prop_assume!(!res.degenerate);
        let (sym, layout) = ghr_symmetrize(&g).unwrap();
        prop_assert!(sym.is_symmetric());
        let ne = res.equilibria;
        let mut images = Vec::new();
        for tau in &ne {
            let (a, b) = balanced_mixture(&g, None, tau).unwrap();
            for phi in [a, b] {
                prop_assert!(is_nash(&sym, &phi).unwrap().nash);
                prop_assert!(!phi.is_symmetric());
                prop_assert_eq!(phi.is_uniform(), tau.is_uniform());
                images.push(phi);
            }
            for rho in &ne {
                let (a, b) = balanced_mixture(&g, Some(rho), tau).unwrap();
                let top = expected_utilities(&g, rho).unwrap().into_iter().chain(expected_utilities(&g, tau).unwrap()).max().unwrap();
                for phi in [a, b] {
                    prop_assert!(is_nash(&sym, &phi).unwrap().nash);
                    prop_assert_eq!(phi.is_symmetric(), rho == tau);
                    if !rho.is_uniform() || !tau.is_uniform() {
                        prop_assert!(!phi.is_uniform());
                    }
                    for u in expected_utilities(&sym, &phi).unwrap() {
                        prop_assert!(u < top);
                    }
                    images.push(phi);
                }
            }
        }
        let mut dedup = images.clone();
        dedup.sort();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), ne.len() * (ne.len() + 2));
        let mixtures = all_mixtures(&g, &ne).unwrap();
        prop_assert_eq!(mixtures.len(), dedup.len());
        for phi in &dedup {
            let d = decompose_symmetric_ne(&sym, &layout, phi).unwrap();
            prop_assert_eq!(&d.compose(&g).unwrap(), phi);
            for base in d.recovered() {
                prop_assert!(ne.contains(base));
            }
            prop_assert!(ne.contains(&recover_base_ne(&g, &sym, &layout, phi).unwrap()));
        }
    }

    48 => fn pup_completion_keeps_equilibria(g in sized_win_lose(3)) {
        match pup_complete(&g).unwrap() {
            PupCompletion::PureNe(s) => {
                let p = MixedProfile::<Rational>::pure(&g.sizes(), &s);
                prop_assert!(is_nash(&g, &p).unwrap().nash);
            }
            PupCompletion::Completed(h) => {
                prop_assert!(check_structure(&h).pup);
                let (a, b) = (enumerate(&g), enumerate(&h));
                prop_assume!(!a.degenerate && !b.degenerate);
                let padded: Vec<_> = if h.sizes() == g.sizes() {
                    a.equilibria
                } else {
                    a.equilibria.iter().map(pad_profile).collect()
                };
                prop_assert_eq!(padded, b.equilibria);
            }
        }
    }
}
