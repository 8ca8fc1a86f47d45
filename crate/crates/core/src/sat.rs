//! CNF formulas, DIMACS input and brute-force model counting.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Literal over 0-based variable `var`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, negated: false }
    }
    pub fn neg(var: usize) -> Self {
        Lit { var, negated: true }
    }
    pub fn complement(self) -> Self {
        Lit { var: self.var, negated: !self.negated }
    }
    /// DIMACS form: 1-based, sign for polarity.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
    pub fn holds(self, a: &Assignment) -> bool {
        a.values[self.var] != self.negated
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnfFormula {
    pub var_count: usize,
    pub clauses: Vec<Vec<Lit>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Assignment { values: (0..n).map(|j| bits >> j & 1 == 1).collect() }
    }

    /// The n literals made true, in variable order.
    pub fn true_literals(&self) -> Vec<Lit> {
        self.values.iter().enumerate().map(|(j, &v)| Lit { var: j, negated: !v }).collect()
    }
}

impl CnfFormula {
    pub fn new(var_count: usize, clauses: Vec<Vec<Lit>>) -> Result<Self> {
        for c in &clauses {
            if let Some(l) = c.iter().find(|l| l.var >= var_count) {
                return Err(Error::invalid(format!("literal {} out of range", l.to_dimacs())));
            }
        }
        Ok(CnfFormula { var_count, clauses })
    }

    /// From DIMACS-style signed integers.
    pub fn from_dimacs_clauses(var_count: usize, clauses: &[Vec<i64>]) -> Result<Self> {
        let mut out = Vec::with_capacity(clauses.len());
        for c in clauses {
            let mut lits = Vec::with_capacity(c.len());
            for &x in c {
                if x == 0 || x.unsigned_abs() as usize > var_count {
                    return Err(Error::invalid(format!("literal {x} out of range")));
                }
                lits.push(Lit { var: x.unsigned_abs() as usize - 1, negated: x < 0 });
            }
            out.push(lits);
        }
        CnfFormula::new(var_count, out)
    }

    pub fn eval(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(a)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.var_count, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                s.push_str(&format!("{} ", l.to_dimacs()));
            }
            s.push_str("0\n");
        }
        s
    }

    /// Checks the 3SAT shape. Returns warnings for repeated literals.
    pub fn validate_3sat(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        for (k, c) in self.clauses.iter().enumerate() {
            if c.len() != 3 {
                return Err(Error::invalid(format!("clause {} width {} != 3", k + 1, c.len())));
            }
            if distinct_literals(c) < 3 {
                warnings.push(format!("clause {} repeats a literal", k + 1));
            }
        }
        Ok(warnings)
    }
}

pub fn distinct_literals(c: &[Lit]) -> usize {
    let mut v = c.to_vec();
    v.sort();
    v.dedup();
    v.len()
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(err(line, "duplicate header"));
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(err(line, "malformed header, expected \"p cnf <vars> <clauses>\""));
            }
            let n = parts[2].parse().map_err(|_| err(line, "malformed variable count"))?;
            let m = parts[3].parse().map_err(|_| err(line, "malformed clause count"))?;
            header = Some((n, m, line));
            continue;
        }
        let Some((n, _, _)) = header else {
            return Err(err(line, "clause before header"));
        };
        for tok in t.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| err(line, &format!("bad literal {tok:?}")))?;
            if x == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if x.unsigned_abs() as usize > n {
                    return Err(err(line, &format!("literal {x} out of range 1..={n}")));
                }
                current.push(x);
            }
        }
        last_line = line;
    }
    let Some((n, m, hline)) = header else {
        return Err(err(1, "missing header"));
    };
    if !current.is_empty() {
        return Err(err(last_line, "clause not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(err(hline, &format!("header declares {m} clauses, found {}", clauses.len())));
    }
    CnfFormula::from_dimacs_clauses(n, &clauses)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatCount {
    pub count: u64,
    pub parity: u8,
    pub witnesses: Option<Vec<Assignment>>,
}

pub const MAX_COUNT_VARS: usize = 24;

pub fn count_sat(f: &CnfFormula, with_witnesses: bool) -> Result<SatCount> {
    let n = f.var_count;
    if n > MAX_COUNT_VARS {
        return Err(Error::invalid(format!("{n} variables exceeds the limit of {MAX_COUNT_VARS}")));
    }
    let masks: Vec<(u64, u64)> = f
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(p, q), l| if l.negated { (p, q | 1 << l.var) } else { (p | 1 << l.var, q) })
        })
        .collect();
    let sat = |a: u64| masks.iter().all(|&(p, q)| a & p != 0 || !a & q != 0);
    let total = 1u64 << n;
    let chunk = 1u64 << 12;
    let per_chunk: Vec<(u64, Vec<u64>)> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|k| {
            let lo = k * chunk;
            let hi = (lo + chunk).min(total);
            let mut count = 0;
            let mut list = Vec::new();
            for a in lo..hi {
                if sat(a) {
                    count += 1;
                    if with_witnesses {
                        list.push(a);
                    }
                }
            }
            (count, list)
        })
        .collect();
    let count = per_chunk.iter().map(|c| c.0).sum::<u64>();
    let witnesses = with_witnesses
        .then(|| per_chunk.into_iter().flat_map(|c| c.1).map(|a| Assignment::from_bits(n, a)).collect());
    Ok(SatCount { count, parity: (count % 2) as u8, witnesses })
}
