//! The five gadget games and machine checks of their claimed properties.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, rat, QuadExt, Rational};
use crate::enumerate::{enumerate_ne_bimatrix, enumerate_pure_ne, enumerate_symmetric_ne, enumerate_symmetric_profiles, enumerate_uniform_ne, find_symmetric_ne_lp, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::game::{check_structure, expected_utilities, for_each_profile, is_nash, numbered, pure_dominator, Game, MixedProfile};
use crate::report::Report;
use crate::sample::{random_weights, weights_are_nash};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetId {
    G1(usize),
    G2,
    G3,
    G4,
    G5(usize),
}

impl fmt::Display for GadgetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetId::G1(h) => write!(f, "G1[{h}]"),
            GadgetId::G2 => write!(f, "G2"),
            GadgetId::G3 => write!(f, "G3"),
            GadgetId::G4 => write!(f, "G4"),
            GadgetId::G5(k) => write!(f, "G5[{k}]"),
        }
    }
}

impl GadgetId {
    /// "g1".."g5" (case-insensitive); h and k default to 1.
    pub fn parse(name: &str, h: Option<usize>, k: Option<usize>) -> Result<Self> {
        let id = match name.to_ascii_lowercase().as_str() {
            "g1" => GadgetId::G1(h.unwrap_or(1)),
            "g2" => GadgetId::G2,
            "g3" => GadgetId::G3,
            "g4" => GadgetId::G4,
            "g5" => GadgetId::G5(k.unwrap_or(1)),
            other => return Err(Error::invalid(format!("unknown gadget {other:?}"))),
        };
        match id {
            GadgetId::G1(0) | GadgetId::G5(0) => Err(Error::invalid("gadget parameter must be at least 1")),
            id => Ok(id),
        }
    }
}

const G2_TABLE: [([usize; 3], [i64; 3]); 12] = [
    ([0, 0, 0], [1, 0, 1]),
    ([0, 0, 1], [1, 1, 0]),
    ([0, 0, 2], [0, 1, 0]),
    ([0, 1, 0], [0, 1, 0]),
    ([0, 1, 1], [1, 0, 0]),
    ([0, 1, 2], [0, 0, 1]),
    ([1, 0, 0], [0, 0, 1]),
    ([1, 0, 1], [0, 1, 1]),
    ([1, 0, 2], [1, 0, 0]),
    ([1, 1, 0], [1, 1, 0]),
    ([1, 1, 1], [0, 0, 1]),
    ([1, 1, 2], [1, 1, 0]),
];

const G3_ROW: [[i64; 4]; 4] = [[0, 0, 1, 1], [0, 1, 1, 0], [0, 1, 0, 1], [1, 0, 0, 0]];

pub fn build_gadget(id: GadgetId) -> Result<Game> {
    let ints = |a: Vec<Vec<i64>>| -> Vec<Vec<Rational>> { a.into_iter().map(|r| r.into_iter().map(int).collect()).collect() };
    match id {
        GadgetId::G1(h) | GadgetId::G5(h) if h == 0 => Err(Error::invalid("gadget parameter must be at least 1")),
        GadgetId::G1(h) => {
            let r = (0..h).map(|i| (0..h).map(|j| (i == j) as i64).collect()).collect();
            let c = (0..h).map(|i| (0..h).map(|j| (j == (i + 1) % h) as i64).collect()).collect();
            Game::bimatrix(numbered(h, 0), numbered(h, 0), &ints(r), &ints(c))
        }
        GadgetId::G2 => {
            let labels = vec![numbered(2, 0), numbered(2, 0), numbered(3, 0)];
            Game::from_fn(labels, |s| {
                let (_, u) = G2_TABLE.iter().find(|(p, _)| p[..] == s[..]).expect("table covers every profile");
                u.iter().map(|&x| int(x)).collect()
            })
        }
        GadgetId::G3 => {
            let r: Vec<Vec<i64>> = G3_ROW.iter().map(|row| row.to_vec()).collect();
            let c = r.iter().map(|row| row.iter().map(|x| 1 - x).collect()).collect();
            Game::bimatrix(numbered(4, 1), numbered(4, 1), &ints(r), &ints(c))
        }
        GadgetId::G4 => {
            let r = vec![vec![1, 0, 1], vec![0, 0, 1], vec![0, 1, 0]];
            let c = vec![vec![0, 1, 0], vec![1, 0, 0], vec![1, 0, 1]];
            Game::bimatrix(numbered(3, 1), numbered(3, 1), &ints(r), &ints(c))
        }
        GadgetId::G5(k) => {
            let d: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| (i <= j) as i64).collect()).collect();
            let dt = (0..k).map(|i| (0..k).map(|j| d[j][i]).collect()).collect();
            Game::bimatrix(numbered(k, 1), numbered(k, 1), &ints(d), &ints(dt))
        }
    }
}

/// The irrational equilibrium of G2.
pub fn g2_equilibrium() -> MixedProfile<QuadExt> {
    let q = |a: (i64, i64), b: (i64, i64)| QuadExt::new(rat(a.0, a.1), rat(b.0, b.1));
    MixedProfile::new(vec![
        vec![q((-1, 2), (1, 2)), q((3, 2), (-1, 2))],
        vec![q((3, 2), (-1, 2)), q((-1, 2), (1, 2))],
        vec![q((1, 8), (1, 8)), q((5, 8), (-1, 8)), q((1, 4), (0, 1))],
    ])
    .expect("closed form is a probability profile")
}

pub type GadgetReport = Report;

pub const G2_SAMPLES: usize = 100_000;

pub fn verify_gadget(id: GadgetId, seed: u64) -> Result<GadgetReport> {
    let g = build_gadget(id)?;
    let mut rep = Report::new(format!("gadget {id}"));
    let st = check_structure(&g);
    rep.claim("win-lose and positive utility property", st.win_lose && st.pup, format!("win_lose={} pup={}", st.win_lose, st.pup));
    match id {
        GadgetId::G1(h) => {
            if h > DEFAULT_CAP {
                return Err(Error::invalid(format!("h = {h} exceeds the oracle cap {DEFAULT_CAP}")));
            }
            let res = enumerate_ne_bimatrix(&g)?;
            let one = !res.degenerate && res.equilibria.len() == 1;
            rep.claim("exactly one equilibrium", one, format!("{} found, degenerate={}", res.equilibria.len(), res.degenerate));
            if let Some(e) = res.equilibria.first() {
                let full = e.support(0).len() == h && e.support(1).len() == h;
                rep.claim("fully mixed and uniform", full && e.is_uniform(), format!("supports {:?}", e.supports()));
                let u = expected_utilities(&g, e)?;
                let want = rat(1, h as i64);
                rep.claim("utility 1/h for both players", u.iter().all(|x| x == &want), format!("utilities {}, {}", u[0], u[1]));
                if h == 1 {
                    let weak = pure_dominator(&g, e, false)?;
                    let strong = pure_dominator(&g, e, true)?;
                    rep.claim(
                        "Pareto-optimal and strongly Pareto-optimal",
                        weak.is_none() && strong.is_none(),
                        "no pure dominator",
                    );
                }
            }
        }
        GadgetId::G2 => {
            let pure = enumerate_pure_ne(&g);
            rep.claim("no pure equilibrium", pure.is_empty(), format!("{} pure profiles are equilibria", pure.len()));
            let sigma = g2_equilibrium();
            let check = is_nash(&g, &sigma)?;
            rep.claim("closed-form profile over Q(sqrt5) is an equilibrium", check.nash, format!("{check:?}").chars().take(120).collect::<String>());
            rep.claim("equilibrium is irrational", !sigma.is_rational(), "sigma_1(0) = (sqrt5-1)/2");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sizes = g.sizes();
            let hits = (0..G2_SAMPLES).filter(|_| weights_are_nash(&g, &random_weights(&mut rng, &sizes, 9))).count();
            rep.claim("random rational profiles are refuted", hits == 0, format!("{hits} of {G2_SAMPLES} samples passed"));
        }
        GadgetId::G3 => {
            let (uni, scanned) = enumerate_uniform_ne(&g)?;
            rep.claim("no uniform equilibrium", uni.is_empty(), format!("{} found over {scanned} support pairs", uni.len()));
            let res = enumerate_ne_bimatrix(&g)?;
            rep.claim(
                "oracle finds equilibria",
                !res.equilibria.is_empty(),
                format!("{} equilibria, degenerate={}", res.equilibria.len(), res.degenerate),
            );
            let mut one_sum = true;
            for_each_profile(&g.sizes(), |s| {
                let u = g.utilities(s);
                one_sum &= &u[0] + &u[1] == int(1);
            });
            rep.claim("1-sum", one_sum, "exactly one player wins at every profile");
        }
        GadgetId::G4 => {
            // The equilibrium set contains a segment, so the scan may stop early.
            let res = enumerate_ne_bimatrix(&g)?;
            rep.claim(
                "oracle finds equilibria",
                !res.equilibria.is_empty(),
                format!("{} equilibria, degenerate={}", res.equilibria.len(), res.degenerate),
            );
            let sym_in_full = res.equilibria.iter().filter(|e| e.is_symmetric()).count();
            let sym_scan = enumerate_symmetric_profiles(&g, DEFAULT_CAP)?;
            let sym_lp = find_symmetric_ne_lp(&g)?;
            rep.claim(
                "no symmetric equilibrium",
                sym_in_full == 0 && sym_scan.equilibria.is_empty() && !sym_scan.degenerate && sym_lp.is_none(),
                format!(
                    "{sym_in_full} in full list, {} in symmetric scan, LP search found {}",
                    sym_scan.equilibria.len(),
                    if sym_lp.is_some() { "one" } else { "none" }
                ),
            );
            rep.claim("not a symmetric game", !g.is_symmetric(), "R != C transposed");
        }
        GadgetId::G5(k) => {
            if k > DEFAULT_CAP {
                return Err(Error::invalid(format!("k = {k} exceeds the oracle cap {DEFAULT_CAP}")));
            }
            let res = enumerate_ne_bimatrix(&g)?;
            rep.claim(
                "exactly k equilibria",
                !res.degenerate && res.equilibria.len() == k,
                format!("{} found, degenerate={}", res.equilibria.len(), res.degenerate),
            );
            let pure_sym = res.equilibria.iter().all(|e| e.is_pure() && e.is_symmetric());
            rep.claim("all pure and symmetric", pure_sym, "");
            let mut ones = true;
            let mut undominated = true;
            for e in &res.equilibria {
                ones &= expected_utilities(&g, e)? == vec![int(1), int(1)];
                undominated &= pure_dominator(&g, e, false)?.is_none() && pure_dominator(&g, e, true)?.is_none();
            }
            rep.claim("utility vector (1,1)", ones, "");
            rep.claim("no pure Pareto dominator", undominated, "");
            let sym = enumerate_symmetric_ne(&g)?;
            rep.claim("symmetric enumeration agrees", sym.equilibria.len() == k, format!("{} symmetric", sym.equilibria.len()));
        }
    }
    Ok(rep)
}
