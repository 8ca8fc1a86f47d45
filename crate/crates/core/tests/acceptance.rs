//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use winlose_core::arith::{rat, Rational};
use winlose_core::enumerate::{enumerate_ne_bimatrix, enumerate_pure_ne};
use winlose_core::gadgets::{build_gadget, g2_equilibrium, verify_gadget, GadgetId};
use winlose_core::game::{check_structure, expected_utilities, is_nash, Game, MixedProfile};
use winlose_core::ghr::{
    balanced_mixture, decompose_symmetric_ne, diagonal_embed, ghr_count_identity_check, ghr_symmetrize, pad_profile,
    pup_complete, recover_base_ne, PupCompletion,
};
use winlose_core::reduction::{
    build_reduction, embed_gadget_profile, literal_equilibrium, reduction_equivalence_check, REFUTATION_SAMPLES,
};
use winlose_core::report::Report;
use winlose_core::sat::{count_sat, parse_dimacs, Assignment, CnfFormula, Lit};
use winlose_core::scenario::{counting_lower_bound, run_scenario, ScenarioId};

const SEED: u64 = 20_240_917;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn sat5() -> CnfFormula {
    parse_dimacs("p cnf 5 4\n1 2 3 0\n-1 4 5 0\n-2 -3 -4 0\n1 -4 5 0\n").unwrap()
}

/// All eight sign patterns over x1, x2, x3, with x4 and x5 free.
fn unsat5() -> CnfFormula {
    let clauses = (0..8)
        .map(|bits| (0..3).map(|v| if bits >> v & 1 == 1 { Lit::neg(v) } else { Lit::pos(v) }).collect())
        .collect();
    CnfFormula::new(5, clauses).unwrap()
}

fn random_3sat(rng: &mut ChaCha8Rng, n: usize, m: usize) -> CnfFormula {
    let clauses = (0..m)
        .map(|_| {
            let mut vars: Vec<usize> = (0..n).collect();
            for i in 0..3 {
                let j = rng.gen_range(i..n);
                vars.swap(i, j);
            }
            vars[..3].iter().map(|&v| Lit { var: v, negated: rng.gen_bool(0.5) }).collect()
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}

fn random_win_lose(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Game {
    let mut mat = || (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..=1)).collect()).collect::<Vec<Vec<i64>>>();
    let r = mat();
    let c = mat();
    Game::from_int_matrices(&r, &c).unwrap()
}

fn first_failure(rep: &Report) -> String {
    match rep.failures().next() {
        Some(c) => format!("{}: {} [{}]", rep.title, c.name, c.detail),
        None => rep.title.clone(),
    }
}

fn within(elapsed: Duration, budget: Duration) -> bool {
    elapsed <= budget
}

fn gadget_suite() -> Outcome {
    let ids = [
        GadgetId::G1(1),
        GadgetId::G1(2),
        GadgetId::G1(3),
        GadgetId::G1(5),
        GadgetId::G2,
        GadgetId::G3,
        GadgetId::G4,
        GadgetId::G5(1),
        GadgetId::G5(2),
        GadgetId::G5(3),
        GadgetId::G5(4),
    ];
    let start = Instant::now();
    for id in ids {
        let rep = verify_gadget(id, SEED).unwrap();
        if !rep.passed() {
            return outcome(false, first_failure(&rep));
        }
    }
    let t = start.elapsed();
    outcome(within(t, Duration::from_secs(5)), format!("{} gadgets verified in {t:.2?} (budget 5s)", ids.len()))
}

fn reduction_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let gadget = build_gadget(GadgetId::G1(1)).unwrap();
    let mut formulas: Vec<CnfFormula> = (0..24)
        .map(|k| {
            let n = 4 + k % 2;
            let m = rng.gen_range(1..=6);
            random_3sat(&mut rng, n, m)
        })
        .collect();
    // every 3-CNF with at most 6 clauses is satisfiable, so add refuted ones too
    formulas.push(unsat5());
    let mut four = unsat5();
    four.var_count = 4;
    formulas.push(four);
    let start = Instant::now();
    let mut total_sat = 0;
    for (k, f) in formulas.iter().enumerate() {
        let rep = reduction_equivalence_check(&gadget, f, SEED + k as u64, REFUTATION_SAMPLES).unwrap();
        if !rep.passed() {
            return outcome(false, format!("formula #{k}: {}", first_failure(&rep)));
        }
        total_sat += count_sat(f, false).unwrap().count;
    }
    let t = start.elapsed();
    outcome(
        within(t, Duration::from_secs(60)),
        format!("{} formulas, {total_sat} satisfying assignments in total, {REFUTATION_SAMPLES} samples each, {t:.2?} (budget 60s)", formulas.len()),
    )
}

/// Random non-degenerate PUP win-lose games of size at most 4x4.
fn ghr_games(count: usize) -> (Vec<Game>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x9e37);
    let mut games = Vec::new();
    let mut skipped = 0;
    while games.len() < count {
        let (m, n) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let g = random_win_lose(&mut rng, m, n);
        if !check_structure(&g).pup {
            continue;
        }
        let base = enumerate_ne_bimatrix(&g).unwrap();
        let image = enumerate_ne_bimatrix(&ghr_symmetrize(&g).unwrap().0).unwrap();
        if base.degenerate || image.degenerate {
            skipped += 1;
            continue;
        }
        games.push(g);
    }
    (games, skipped)
}

fn ghr_counting(games: &[Game], skipped: usize) -> Outcome {
    let start = Instant::now();
    let mut sizes = std::collections::BTreeMap::new();
    for g in games {
        let rep = ghr_count_identity_check(g).unwrap();
        if rep.skipped.is_some() || !rep.passed() {
            return outcome(false, first_failure(&rep));
        }
        let n = enumerate_ne_bimatrix(g).unwrap().equilibria.len();
        *sizes.entry(n).or_insert(0) += 1;
    }
    let t = start.elapsed();
    outcome(
        games.len() >= 100 && within(t, Duration::from_secs(300)),
        format!("{} games ({skipped} degenerate skipped), games by |NE(g)|: {sizes:?}, {t:.2?} (budget 5min)", games.len()),
    )
}

fn ghr_inverse(games: &[Game]) -> Outcome {
    let mut cases = [0usize; 3];
    let mut total = 0;
    for (k, g) in games.iter().enumerate() {
        let base = enumerate_ne_bimatrix(g).unwrap().equilibria;
        let (sym, layout) = ghr_symmetrize(g).unwrap();
        for phi in enumerate_ne_bimatrix(&sym).unwrap().equilibria {
            total += 1;
            let d = match decompose_symmetric_ne(&sym, &layout, &phi) {
                Ok(d) => d,
                Err(e) => return outcome(false, format!("game #{k}: {e}")),
            };
            cases[d.case as usize] += 1;
            let recovered_ok = d.recovered().iter().all(|p| is_nash(g, p).unwrap().nash && base.contains(p));
            if !recovered_ok || d.compose(g).unwrap() != phi {
                return outcome(false, format!("game #{k}: case {} fails to round-trip", d.case));
            }
            match recover_base_ne(g, &sym, &layout, &phi) {
                Ok(p) if base.contains(&p) => {}
                _ => return outcome(false, format!("game #{k}: recover_base_ne failed")),
            }
        }
    }
    outcome(true, format!("{total} symmetrized equilibria: C'1 {}, C'2 {}, C'3 {}", cases[0], cases[1], cases[2]))
}

fn pup_completion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x51);
    let (mut pure, mut completed, mut degenerate) = (0, 0, 0);
    let start = Instant::now();
    let mut tries = 0;
    while pure + completed < 50 || completed < 10 {
        tries += 1;
        if tries > 200_000 {
            return outcome(false, format!("ran out of candidates: {pure} pure, {completed} completed"));
        }
        let size = if rng.gen_bool(0.5) { 3 } else { 4 };
        let g = random_win_lose(&mut rng, size, size);
        if check_structure(&g).pup {
            continue;
        }
        match pup_complete(&g).unwrap() {
            PupCompletion::PureNe(s) => {
                if pure >= 40 {
                    continue;
                }
                if !is_nash(&g, &MixedProfile::<Rational>::pure(&g.sizes(), &s)).unwrap().nash {
                    return outcome(false, format!("returned pure profile {s:?} is not an equilibrium"));
                }
                pure += 1;
            }
            PupCompletion::Completed(h) => {
                if !check_structure(&h).pup {
                    return outcome(false, "completed game lacks PUP");
                }
                let (a, b) = (enumerate_ne_bimatrix(&g).unwrap(), enumerate_ne_bimatrix(&h).unwrap());
                if a.degenerate || b.degenerate {
                    degenerate += 1;
                    continue;
                }
                let padded: Vec<_> = a.equilibria.iter().map(pad_profile).collect();
                if padded != b.equilibria {
                    return outcome(false, "completed game changes the equilibrium set");
                }
                completed += 1;
            }
        }
    }
    let t = start.elapsed();
    outcome(
        within(t, Duration::from_secs(120)),
        format!("{} games without PUP: {pure} pure equilibria, {completed} completions with equal NE sets ({degenerate} degenerate skipped), {t:.2?} (budget 2min)", pure + completed),
    )
}

fn counting_bound() -> Outcome {
    let rep = counting_lower_bound(&sat5()).unwrap();
    outcome(rep.passed(), if rep.passed() { rep.claims.iter().map(|c| c.detail.clone()).collect::<Vec<_>>().join("; ") } else { first_failure(&rep) })
}

/// Mixture utilities recomputed from the primitives.
fn mixture_values(gadget: GadgetId, gadget_ne: MixedProfile<Rational>) -> Result<(Vec<Rational>, Vec<Rational>), String> {
    let f = sat5();
    let gad = build_gadget(gadget).unwrap();
    let (game, layout) = build_reduction(&gad, &f).unwrap();
    let (sym, _) = ghr_symmetrize(&game).unwrap();
    let sat: Vec<Assignment> = count_sat(&f, true).unwrap().witnesses.unwrap();
    let rho = literal_equilibrium(&layout, &sat[0]).unwrap();
    let tau = literal_equilibrium(&layout, &sat[1]).unwrap();
    let (lit, _) = balanced_mixture(&game, Some(&rho), &tau).unwrap();
    let sup: Vec<usize> = lit.supports().iter().map(Vec::len).collect();
    if !is_nash(&sym, &lit).unwrap().nash || sup != [10, 10] {
        return Err(format!("literal mixture: supports {sup:?}"));
    }
    let g = embed_gadget_profile(&layout, &gadget_ne).unwrap();
    let (mixed, _) = balanced_mixture(&game, Some(&g), &tau).unwrap();
    if !is_nash(&sym, &mixed).unwrap().nash {
        return Err("gadget-literal mixture is not an equilibrium".into());
    }
    Ok((expected_utilities(&sym, &lit).unwrap(), expected_utilities(&sym, &mixed).unwrap()))
}

fn scenario_tables() -> Outcome {
    let start = Instant::now();
    let mut ids = vec![ScenarioId::Group1, ScenarioId::Group2, ScenarioId::Group3(Some(11))];
    ids.extend((1..=3).map(ScenarioId::Group4));
    for f in [sat5(), unsat5()] {
        for &id in &ids {
            let rep = run_scenario(id, &f).unwrap();
            if !rep.passed() {
                return outcome(false, first_failure(&rep));
            }
        }
    }
    let n = 5;
    let g1 = mixture_values(GadgetId::G1(1), MixedProfile::pure(&[1, 1], &[0, 0]));
    let all11: Vec<usize> = (0..11).collect();
    let g3 = mixture_values(GadgetId::G1(11), MixedProfile::uniform(&[11, 11], &[all11.clone(), all11]));
    let (Ok((lit1, gl1)), Ok((lit3, gl3))) = (g1, g3) else {
        return outcome(false, "recomputed mixtures are not equilibria");
    };
    let each = |v: &[Rational], x: Rational| v.iter().all(|u| *u == x);
    let values_ok = each(&lit1, rat(1, n)) && each(&lit3, rat(1, n)) && each(&gl1, rat(2, n + 2)) && each(&gl3, rat(2, n + 22));

    // diagonal pure equilibria of the embedded game, found by exhaustive pure search
    let mut diag_ok = true;
    for f in [sat5(), unsat5()] {
        let (game, _) = build_reduction(&build_gadget(GadgetId::G1(2)).unwrap(), &f).unwrap();
        let (sym, layout) = ghr_symmetrize(&game).unwrap();
        for k in 1..=3 {
            let emb = diagonal_embed(&sym, &layout, k).unwrap();
            let diag = enumerate_pure_ne(&emb)
                .into_iter()
                .filter(|s| s.iter().all(|&t| emb.labels(0)[t].starts_with("diag:")))
                .filter(|s| s[0] == s[1] && emb.utilities(s).iter().all(|u| *u == rat(1, 1)))
                .count();
            diag_ok &= diag == k;
        }
    }
    let t = start.elapsed();
    outcome(
        values_ok && diag_ok && within(t, Duration::from_secs(180)),
        format!(
            "groups 1-4 clean on satisfiable and unsatisfiable n=5 formulas; literal mixture U={}, gadget-literal U={} (h=1) and {} (h=11); k diagonal pure NE for k=1..3: {diag_ok}; {t:.2?} (budget 3min)",
            lit1[0], gl1[0], gl3[0]
        ),
    )
}

fn witnesses() -> Outcome {
    let start = Instant::now();
    for f in [sat5(), unsat5()] {
        for id in [ScenarioId::SymmetricNashWitness, ScenarioId::RationalNashWitness] {
            let rep = run_scenario(id, &f).unwrap();
            if !rep.passed() {
                return outcome(false, first_failure(&rep));
            }
        }
        let count = count_sat(&f, false).unwrap().count;
        // G4 base: symmetric literal equilibria, one per satisfying assignment
        let (game, layout) = build_reduction(&build_gadget(GadgetId::G4).unwrap(), &f).unwrap();
        let sym_count = (0..1u64 << f.var_count)
            .map(|b| literal_equilibrium(&layout, &Assignment::from_bits(f.var_count, b)).unwrap())
            .filter(|p| p.is_symmetric() && is_nash(&game, p).unwrap().nash)
            .count() as u64;
        // G2 base: the irrational gadget equilibrium plus rational literal ones
        let (game, layout) = build_reduction(&build_gadget(GadgetId::G2).unwrap(), &f).unwrap();
        let irr = embed_gadget_profile(&layout, &g2_equilibrium()).unwrap();
        let rational = (0..1u64 << f.var_count)
            .filter(|&b| is_nash(&game, &literal_equilibrium(&layout, &Assignment::from_bits(f.var_count, b)).unwrap()).unwrap().nash)
            .count() as u64;
        if sym_count != count || rational != count || irr.is_rational() || !is_nash(&game, &irr).unwrap().nash {
            return outcome(false, format!("#phi={count}, symmetric {sym_count}, rational {rational}"));
        }
    }
    let t = start.elapsed();
    outcome(within(t, Duration::from_secs(60)), format!("both witnesses match count_sat on satisfiable and unsatisfiable formulas, {t:.2?} (budget 60s)"))
}

fn property_suites() -> Outcome {
    let results = common::run_all();
    let failed: Vec<String> = results.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}"))).collect();
    outcome(failed.is_empty(), if failed.is_empty() { format!("{} properties green", results.len()) } else { failed.join("; ") })
}

fn main() {
    let (games, skipped) = ghr_games(100);
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(gadget_suite)),
        (2, Box::new(reduction_equivalence)),
        (3, Box::new(|| ghr_counting(&games, skipped))),
        (4, Box::new(|| ghr_inverse(&games))),
        (5, Box::new(pup_completion)),
        (6, Box::new(counting_bound)),
        (7, Box::new(scenario_tables)),
        (8, Box::new(witnesses)),
        (9, Box::new(property_suites)),
    ];
    let mut failed = 0;
    for (k, run) in criteria {
        let o = run();
        println!("criterion {k} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.passed);
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
