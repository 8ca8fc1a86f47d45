//! Random integer-weighted profiles and a fast equilibrium test for them.
//!
//! Used for refutation sampling: a profile with weights w is the mixed
//! profile w / Σw. For win-lose games all comparisons reduce to integers.

use rand::Rng;

use crate::arith::Rational;
use crate::game::{Game, MixedProfile};

/// Random nonempty support per player, weights in 1..=max_weight.
/// About one profile in four is uniform on its support.
pub fn random_weights<R: Rng>(rng: &mut R, sizes: &[usize], max_weight: u64) -> Vec<Vec<u64>> {
    let uniform = rng.gen_ratio(1, 4);
    sizes
        .iter()
        .map(|&n| {
            let mut w: Vec<u64> = (0..n)
                .map(|_| if rng.gen_bool(0.5) { if uniform { 1 } else { rng.gen_range(1..=max_weight) } } else { 0 })
                .collect();
            if w.iter().all(|&x| x == 0) {
                let k = rng.gen_range(0..n);
                w[k] = if uniform { 1 } else { rng.gen_range(1..=max_weight) };
            }
            w
        })
        .collect()
}

pub fn weights_to_profile(w: &[Vec<u64>]) -> MixedProfile<Rational> {
    let dists = w
        .iter()
        .map(|d| {
            let total: u64 = d.iter().sum();
            d.iter().map(|&x| Rational::new(x.into(), total.into())).collect()
        })
        .collect();
    MixedProfile::new_unchecked(dists)
}

/// Exact equilibrium test for a weighted profile of a win-lose game.
pub fn weights_are_nash(g: &Game, w: &[Vec<u64>]) -> bool {
    assert!(g.is_win_lose(), "weighted test needs a win-lose game");
    let r = g.players();
    let supports: Vec<Vec<usize>> = w.iter().map(|d| (0..d.len()).filter(|&t| d[t] > 0).collect()).collect();
    for i in 0..r {
        let n_i = g.num_strategies(i);
        let mut cond = vec![0u128; n_i];
        let mut pos = vec![0usize; r];
        let mut s = vec![0usize; r];
        'outer: loop {
            let mut p: u128 = 1;
            for j in 0..r {
                if j != i {
                    s[j] = supports[j][pos[j]];
                    p *= w[j][s[j]] as u128;
                }
            }
            for (t, c) in cond.iter_mut().enumerate() {
                s[i] = t;
                if !num_traits::Zero::is_zero(g.utility(&s, i)) {
                    *c += p;
                }
            }
            let mut k = r;
            loop {
                if k == 0 {
                    break 'outer;
                }
                k -= 1;
                if k == i {
                    continue;
                }
                pos[k] += 1;
                if pos[k] < supports[k].len() {
                    break;
                }
                pos[k] = 0;
            }
        }
        let best = *cond.iter().max().unwrap();
        if supports[i].iter().any(|&t| cond[t] < best) {
            return false;
        }
    }
    true
}
