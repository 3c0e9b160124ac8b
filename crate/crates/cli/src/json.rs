//! JSON documents for groups, calculi, connections and tensor fields.
//!
//! Every top-level document carries `"schema": 1`. Rationals are strings `"p/q"` or `"p"`;
//! integers are also accepted on input.

use std::path::Path;
use std::sync::Arc;

use finitegeo_core::connection::Connection;
use finitegeo_core::dual::metric_from_right;
use finitegeo_core::linalg::parse_rational;
use finitegeo_core::{DifferentialCalculus, FiniteGroup, GroupFunction, Rational, Tensor};
use serde_json::{json, Map, Value};

use crate::error::{usage, CliError, Result};
use crate::spec::{self, split_top};

pub const SCHEMA: u64 = 1;

pub fn read_file(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    let value: Value = serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })?;
    check_schema(&value)?;
    Ok(value)
}

/// Adds the schema field to an object.
pub fn document(mut value: Value) -> Value {
    if let Value::Object(m) = &mut value {
        m.insert("schema".into(), json!(SCHEMA));
    }
    value
}

fn check_schema(v: &Value) -> Result<()> {
    match v.get("schema") {
        None => Ok(()),
        Some(s) if s.as_u64() == Some(SCHEMA) => Ok(()),
        Some(s) => Err(usage(format!("unsupported schema {s}; this build reads schema {SCHEMA}"))),
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn parse_rat(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| usage(format!("`{s}` is not a rational"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| usage(format!("{n} is not an integer; write fractions as \"p/q\""))),
        other => Err(usage(format!("expected a rational, got {other}"))),
    }
}

/// A scalar is a constant function; an array lists the values at each element.
fn parse_function(v: &Value, n: usize) -> Result<GroupFunction> {
    match v {
        Value::Array(items) => {
            if items.len() != n {
                return Err(usage(format!("expected {n} values per function, got {}", items.len())));
            }
            Ok(GroupFunction::new(items.iter().map(parse_rat).collect::<Result<_>>()?))
        }
        other => Ok(GroupFunction::constant(n, parse_rat(other)?)),
    }
}

fn function_value(f: &GroupFunction) -> Value {
    match f.constant_value() {
        Some(c) => rational(c),
        None => rationals(f.values()),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| usage(format!("missing field `{key}`")))
}

fn index(v: &Value) -> Result<usize> {
    v.as_u64().map(|i| i as usize).ok_or_else(|| usage(format!("expected an element index, got {v}")))
}

pub fn group_value(g: &FiniteGroup) -> Value {
    let aliases: Map<String, Value> = g.aliases().iter().map(|(a, i)| (a.clone(), json!(i))).collect();
    json!({
        "order": g.order(),
        "mul": g.table(),
        "names": g.names(),
        "aliases": aliases,
    })
}

/// Reads `{"order", "mul"}` with optional `names` and `aliases`.
pub fn group_from_value(v: &Value) -> Result<FiniteGroup> {
    if let Value::String(s) = v {
        return spec::parse_group(s, spec::max_order()?);
    }
    let rows = field(v, "mul")?.as_array().ok_or_else(|| usage("`mul` must be an array of rows"))?;
    let table = rows
        .iter()
        .map(|r| r.as_array().ok_or_else(|| usage("`mul` rows must be arrays"))?.iter().map(index).collect())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    if let Some(order) = v.get("order") {
        if index(order)? != table.len() {
            return Err(usage(format!("`order` is {order} but `mul` has {} rows", table.len())));
        }
    }
    let mut g = FiniteGroup::from_cayley_table(&table)?;
    // the table loader moves the identity to index 0; names follow
    let e = (0..table.len()).find(|&e| (0..table.len()).all(|x| table[e][x] == x)).unwrap_or(0);
    let relabel = |x: usize| {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    if let Some(names) = v.get("names") {
        let names = names.as_array().ok_or_else(|| usage("`names` must be an array"))?;
        if names.len() != table.len() {
            return Err(usage(format!("expected {} names, got {}", table.len(), names.len())));
        }
        let mut out = vec![String::new(); names.len()];
        for (i, n) in names.iter().enumerate() {
            out[relabel(i)] = n.as_str().ok_or_else(|| usage("names must be strings"))?.to_string();
        }
        g = g.with_names(out);
    }
    if let Some(aliases) = v.get("aliases") {
        let aliases = aliases.as_object().ok_or_else(|| usage("`aliases` must be an object"))?;
        let list = aliases.iter().map(|(a, i)| Ok((a.clone(), relabel(index(i)?)))).collect::<Result<Vec<_>>>()?;
        g = g.with_aliases(list)?;
    }
    Ok(g)
}

pub fn calculus_value(c: &DifferentialCalculus) -> Value {
    json!({ "group": group_value(c.group()), "hatG": c.hat() })
}

/// Reads `{"group", "hatG"}`; `hatG` lists indices or element names.
pub fn calculus_from_value(v: &Value) -> Result<DifferentialCalculus> {
    let g = Arc::new(group_from_value(field(v, "group")?)?);
    let hat = field(v, "hatG")?.as_array().ok_or_else(|| usage("`hatG` must be an array"))?;
    let hat = hat
        .iter()
        .map(|x| match x {
            Value::String(s) => Ok(g.element(s)?),
            other => index(other),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DifferentialCalculus::from_hat(g, &hat)?)
}

fn hat_name(c: &DifferentialCalculus, p: usize) -> &str {
    c.group().display_name(c.hat()[p])
}

fn hat_position(c: &DifferentialCalculus, name: &str) -> Result<usize> {
    let g = c.group().element(name)?;
    Ok(c.try_position(g)?)
}

/// Nonzero coefficients keyed `h|g|g'`.
pub fn gamma_value(conn: &Connection) -> Value {
    let c = conn.calculus();
    let k = c.dim();
    let mut m = Map::new();
    for h in 0..k {
        for j in 0..k {
            for l in 0..k {
                let f = conn.gamma(h, j, l);
                if !f.is_zero() {
                    let key = format!("{}|{}|{}", hat_name(c, h), hat_name(c, j), hat_name(c, l));
                    m.insert(key, function_value(f));
                }
            }
        }
    }
    Value::Object(m)
}

pub fn connection_value(conn: &Connection) -> Value {
    json!({ "calculus": calculus_value(conn.calculus()), "gamma": gamma_value(conn) })
}

/// Reads `{"calculus", "gamma"}`; absent coefficients are zero.
pub fn connection_from_value(v: &Value) -> Result<Connection> {
    let c = calculus_from_value(field(v, "calculus")?)?;
    let k = c.dim();
    let n = c.n();
    let mut gamma = vec![GroupFunction::zero(n); k * k * k];
    let entries = field(v, "gamma")?.as_object().ok_or_else(|| usage("`gamma` must be an object"))?;
    for (key, value) in entries {
        let parts: Vec<&str> = key.split('|').collect();
        if parts.len() != 3 {
            return Err(usage(format!("gamma key `{key}` must read `h|g|g'`")));
        }
        let (h, j, l) = (hat_position(&c, parts[0])?, hat_position(&c, parts[1])?, hat_position(&c, parts[2])?);
        gamma[(h * k + j) * k + l] = parse_function(value, n)?;
    }
    Ok(Connection::from_functions(&c, gamma)?)
}

/// Coefficient functions of a rank 2 tensor keyed `g,g'`, zeros omitted.
pub fn coeffs_value(c: &DifferentialCalculus, fs: &[GroupFunction]) -> Value {
    let k = c.dim();
    let mut m = Map::new();
    for (i, f) in fs.iter().enumerate() {
        if !f.is_zero() {
            m.insert(format!("{},{}", hat_name(c, i / k), hat_name(c, i % k)), function_value(f));
        }
    }
    json!({ "coeffs": m })
}

/// Constant rank 2 coefficients in pair order.
pub fn constant_coeffs_value(c: &DifferentialCalculus, values: &[Rational]) -> Value {
    let fs: Vec<GroupFunction> = values.iter().map(|v| GroupFunction::constant(c.n(), v.clone())).collect();
    coeffs_value(c, &fs)
}

fn coeffs_from_value(c: &DifferentialCalculus, v: &Value) -> Result<Vec<GroupFunction>> {
    let k = c.dim();
    let n = c.n();
    let mut fs = vec![GroupFunction::zero(n); k * k];
    let entries = field(v, "coeffs")?.as_object().ok_or_else(|| usage("`coeffs` must be an object"))?;
    for (key, value) in entries {
        let parts = split_top(key, ',');
        if parts.len() != 2 {
            return Err(usage(format!("coefficient key `{key}` must read `g,g'`")));
        }
        let (p, q) = (hat_position(c, parts[0])?, hat_position(c, parts[1])?);
        fs[p * k + q] = parse_function(value, n)?;
    }
    Ok(fs)
}

/// Metric `l_g (x) l_g' g^{g,g'}` from right coefficients.
pub fn metric_from_value(c: &DifferentialCalculus, v: &Value) -> Result<Tensor> {
    Ok(metric_from_right(c, coeffs_from_value(c, v)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use finitegeo_core::connection::{c_connection, nabla_sigma};

    fn metric_value(metric: &Tensor) -> Value {
        coeffs_value(metric.calculus(), &metric.right_coefficients())
    }

    fn s3_transpositions() -> DifferentialCalculus {
        let g = FiniteGroup::symmetric(3).unwrap();
        let hat: Vec<usize> = ["a", "b", "c"].iter().map(|n| g.element(n).unwrap()).collect();
        DifferentialCalculus::from_hat(g, &hat).unwrap()
    }

    #[test]
    fn group_round_trip_keeps_names() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let back = group_from_value(&group_value(&g)).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.element("ab").unwrap(), g.element("ab").unwrap());
        assert_eq!(back.names(), g.names());
    }

    #[test]
    fn identity_is_moved_to_index_zero() {
        let v = json!({"order": 2, "mul": [[1, 0], [0, 1]], "names": ["t", "one"]});
        let g = group_from_value(&v).unwrap();
        assert_eq!(g.name(0), "one");
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn connection_round_trip() {
        let c = s3_transpositions();
        for conn in [c_connection(&c), nabla_sigma(&c).unwrap()] {
            let back = connection_from_value(&connection_value(&conn)).unwrap();
            assert_eq!(back, conn);
        }
    }

    #[test]
    fn metric_round_trip() {
        let c = s3_transpositions();
        let fs: Vec<GroupFunction> = (0..9).map(|i| GroupFunction::from_i64(&[i, 0, 1, 2, 3, i % 2])).collect();
        let m = metric_from_right(&c, fs).unwrap();
        assert_eq!(metric_from_value(&c, &metric_value(&m)).unwrap(), m);
    }

    #[test]
    fn rationals_accept_strings_and_integers() {
        assert_eq!(parse_rat(&json!("-3/6")).unwrap(), Rational::new((-1).into(), 2.into()));
        assert_eq!(parse_rat(&json!(4)).unwrap(), Rational::from_integer(4.into()));
        assert!(parse_rat(&json!(0.5)).is_err());
    }
}
