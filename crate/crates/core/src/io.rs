//! JSON forms of games and profiles.
//!
//! Game: `{"players": r, "strategies": [[label, ...], ...], "utilities": U}`
//! where U nests r levels deep (player 1 outermost) and each leaf is an array
//! of r rational strings. Profile: `{"field": "rational" | "quad_ext",
//! "distributions": [{label: p, ...}, ...]}` listing only positive entries.
//! A Q(√5) probability is `{"a": "p/q", "b": "r/s"}` meaning a + b√5.

use serde_json::{json, Map, Value};

use crate::arith::{format_rational, parse_rational, Field, QuadExt, Rational, Scalar};
use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile};

pub fn game_to_json(g: &Game) -> Value {
    fn nest(g: &Game, prefix: &mut Vec<usize>) -> Value {
        let r = g.players();
        if prefix.len() == r {
            return Value::Array(g.utilities(prefix).iter().map(|u| Value::String(format_rational(u))).collect());
        }
        let n = g.num_strategies(prefix.len());
        let mut out = Vec::with_capacity(n);
        for t in 0..n {
            prefix.push(t);
            out.push(nest(g, prefix));
            prefix.pop();
        }
        Value::Array(out)
    }
    json!({
        "players": g.players(),
        "strategies": g.all_labels(),
        "utilities": nest(g, &mut Vec::new()),
    })
}

pub fn game_from_json(v: &Value) -> Result<Game> {
    let obj = v.as_object().ok_or_else(|| Error::invalid("game must be a JSON object"))?;
    let r = obj
        .get("players")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::invalid("missing integer field \"players\""))? as usize;
    let labels: Vec<Vec<String>> = serde_json::from_value(
        obj.get("strategies").cloned().ok_or_else(|| Error::invalid("missing field \"strategies\""))?,
    )?;
    if labels.len() != r {
        return Err(Error::invalid(format!("{r} players but {} strategy lists", labels.len())));
    }
    for (i, ls) in labels.iter().enumerate() {
        let mut sorted = ls.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != ls.len() {
            return Err(Error::invalid(format!("player {} has duplicate strategy labels", i + 1)));
        }
    }
    let mut utilities = Vec::new();
    fn walk(v: &Value, depth: usize, labels: &[Vec<String>], out: &mut Vec<Vec<Rational>>) -> Result<()> {
        let r = labels.len();
        let arr = v.as_array().ok_or_else(|| Error::invalid("utilities must be nested arrays"))?;
        if depth == r {
            if arr.len() != r {
                return Err(Error::invalid(format!("utility leaf of length {} for {r} players", arr.len())));
            }
            let leaf = arr.iter().map(scalar_rational).collect::<Result<Vec<_>>>()?;
            out.push(leaf);
            return Ok(());
        }
        if arr.len() != labels[depth].len() {
            return Err(Error::invalid(format!(
                "utilities level {} has {} entries, player {} has {} strategies",
                depth + 1,
                arr.len(),
                depth + 1,
                labels[depth].len()
            )));
        }
        arr.iter().try_for_each(|x| walk(x, depth + 1, labels, out))
    }
    walk(obj.get("utilities").ok_or_else(|| Error::invalid("missing field \"utilities\""))?, 0, &labels, &mut utilities)?;
    Game::new(labels, utilities)
}

fn scalar_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(Error::invalid(format!("expected a rational string, got {v}"))),
    }
}

fn scalar_to_json<S: Scalar>(x: &S) -> Value {
    match S::FIELD {
        Field::Rational => Value::String(format_rational(&x.as_rational().expect("rational field"))),
        Field::QuadExt => {
            let q = x.to_quad();
            json!({"a": format_rational(&q.a), "b": format_rational(&q.b)})
        }
    }
}

fn quad_from_json(v: &Value) -> Result<QuadExt> {
    match v {
        Value::Object(m) => {
            let get = |k: &str| m.get(k).map(scalar_rational).unwrap_or_else(|| Ok(Rational::from_integer(0.into())));
            Ok(QuadExt::new(get("a")?, get("b")?))
        }
        other => Ok(QuadExt::from_rational(scalar_rational(other)?)),
    }
}

pub fn profile_to_json<S: Scalar>(g: &Game, sigma: &MixedProfile<S>) -> Result<Value> {
    g.check_profile(sigma)?;
    let dists: Vec<Value> = (0..g.players())
        .map(|i| {
            let mut m = Map::new();
            for t in sigma.support(i) {
                m.insert(g.labels(i)[t].clone(), scalar_to_json(sigma.prob(i, t)));
            }
            Value::Object(m)
        })
        .collect();
    Ok(json!({"field": S::FIELD.to_string(), "distributions": dists}))
}

/// A profile read from JSON, in whichever field it declares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyProfile {
    Rational(MixedProfile<Rational>),
    QuadExt(MixedProfile<QuadExt>),
}

impl AnyProfile {
    pub fn field(&self) -> Field {
        match self {
            AnyProfile::Rational(_) => Field::Rational,
            AnyProfile::QuadExt(_) => Field::QuadExt,
        }
    }

    pub fn to_quad(&self) -> MixedProfile<QuadExt> {
        match self {
            AnyProfile::Rational(p) => p.to_quad(),
            AnyProfile::QuadExt(p) => p.clone(),
        }
    }

    pub fn to_json(&self, g: &Game) -> Result<Value> {
        match self {
            AnyProfile::Rational(p) => profile_to_json(g, p),
            AnyProfile::QuadExt(p) => profile_to_json(g, p),
        }
    }
}

pub fn profile_from_json(g: &Game, v: &Value) -> Result<AnyProfile> {
    let obj = v.as_object().ok_or_else(|| Error::invalid("profile must be a JSON object"))?;
    let field: Field = match obj.get("field") {
        None => Field::Rational,
        Some(Value::String(s)) => s.parse()?,
        Some(other) => return Err(Error::invalid(format!("bad field {other}"))),
    };
    let dists = obj
        .get("distributions")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::invalid("missing array field \"distributions\""))?;
    if dists.len() != g.players() {
        return Err(Error::invalid(format!("{} distributions for {} players", dists.len(), g.players())));
    }
    let mut quads: Vec<Vec<QuadExt>> = Vec::with_capacity(dists.len());
    for (i, d) in dists.iter().enumerate() {
        let m = d.as_object().ok_or_else(|| Error::invalid("each distribution must be an object"))?;
        let mut row = vec![QuadExt::from_rational(Rational::from_integer(0.into())); g.num_strategies(i)];
        for (label, p) in m {
            let t = g
                .strategy_index(i, label)
                .ok_or_else(|| Error::invalid(format!("player {} has no strategy {label:?}", i + 1)))?;
            row[t] = quad_from_json(p)?;
        }
        quads.push(row);
    }
    match field {
        Field::QuadExt => Ok(AnyProfile::QuadExt(MixedProfile::new(quads)?)),
        Field::Rational => {
            let rats = quads
                .into_iter()
                .map(|d| {
                    d.into_iter()
                        .map(|q| q.as_rational().ok_or_else(|| Error::invalid("irrational entry in a rational profile")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyProfile::Rational(MixedProfile::new(rats)?))
        }
    }
}

pub fn read_json_file(path: &std::path::Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json_file(path: &std::path::Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}
