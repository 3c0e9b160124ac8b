//! Parsing of group, generating set and generator arguments.

use std::path::Path;

use finitegeo_core::group::{parse_cycles, FiniteGroup, DEFAULT_MAX_ORDER};
use finitegeo_core::Error;

use crate::error::{usage, Result};
use crate::json;

pub const MAX_ORDER_VAR: &str = "FINITEGEO_MAX_ORDER";

/// Size bound from the environment, or the library default.
pub fn max_order() -> Result<usize> {
    match std::env::var(MAX_ORDER_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| usage(format!("{MAX_ORDER_VAR} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

/// Splits at `sep` outside parentheses, trimming the pieces.
pub fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(s[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// `Zn`, `Cn`, `Sn`, `An`, `Dn` (order 2n), `Dicn` (order 4n), `Q8`, products with `x`,
/// or `@file.json` holding a group document.
pub fn parse_group(spec: &str, bound: usize) -> Result<FiniteGroup> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix('@') {
        let g = json::group_from_value(&json::read_file(Path::new(path))?)?;
        if g.order() > bound {
            return Err(Error::TooLarge { size: g.order(), bound }.into());
        }
        return Ok(g);
    }
    let mut factors = spec.split(['x', '×']).map(|f| parse_factor(f.trim(), bound));
    let mut g = factors.next().expect("split yields one piece")?;
    for f in factors {
        g = FiniteGroup::direct_product_bounded(&g, &f?, bound)?;
    }
    Ok(g)
}

fn parse_factor(f: &str, bound: usize) -> Result<FiniteGroup> {
    let bad = || usage(format!("unknown group `{f}`; expected Zn, Sn, An, Dn, Dicn, Q8 or @file.json"));
    let (family, digits) = ["Dic", "Z", "C", "S", "A", "D", "Q"]
        .iter()
        .find_map(|p| f.strip_prefix(p).map(|rest| (*p, rest)))
        .ok_or_else(bad)?;
    let n: usize = digits.parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(usage(format!("group `{f}` needs a positive index")));
    }
    let check = |size: usize| -> Result<()> {
        if size > bound {
            return Err(Error::TooLarge { size, bound }.into());
        }
        Ok(())
    };
    Ok(match family {
        "Z" | "C" => {
            check(n)?;
            FiniteGroup::cyclic(n)
        }
        "S" => FiniteGroup::symmetric_bounded(n, bound)?,
        "A" => FiniteGroup::alternating_bounded(n, bound)?,
        "D" => {
            check(n.saturating_mul(2))?;
            FiniteGroup::dihedral(n)
        }
        "Dic" => {
            check(n.saturating_mul(4))?;
            FiniteGroup::dicyclic(n)
        }
        "Q" if n == 8 => FiniteGroup::dicyclic(2),
        _ => return Err(bad()),
    })
}

/// Permutations in cycle notation separated by commas, semicolons or spaces outside
/// parentheses, e.g. `(12),(123)`. The degree defaults to the largest point named.
pub fn parse_generators(spec: &str, degree: Option<usize>) -> Result<(usize, Vec<Vec<usize>>)> {
    let spec = spec.replace(';', ",");
    let items: Vec<&str> =
        split_top(&spec, ',').into_iter().flat_map(|s| split_top(s, ' ')).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(usage("--group-generators needs at least one permutation"));
    }
    let largest = items
        .iter()
        .flat_map(|s| {
            let sep = s.contains(',');
            let pts: Vec<usize> = if sep {
                s.split(|c: char| !c.is_ascii_digit()).filter_map(|t| t.parse().ok()).collect()
            } else {
                s.chars().filter_map(|c| c.to_digit(10).map(|d| d as usize)).collect()
            };
            pts
        })
        .max()
        .unwrap_or(1);
    let degree = degree.unwrap_or(largest);
    if largest > degree {
        return Err(usage(format!("point {largest} exceeds the degree {degree}")));
    }
    let perms = items
        .iter()
        .map(|s| parse_cycles(degree, s).ok_or_else(|| usage(format!("cannot parse permutation `{s}`"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((degree, perms))
}

/// `all`, comma separated element names, or `class:x` for the conjugacy class of `x`.
/// Items may be mixed; duplicates are ignored.
pub fn parse_hat(g: &FiniteGroup, spec: &str) -> Result<Vec<usize>> {
    let spec = spec.trim();
    if spec == "all" {
        return Ok((1..g.order()).collect());
    }
    let mut hat = Vec::new();
    for item in split_top(spec, ',') {
        if item.is_empty() {
            return Err(usage(format!("empty element name in `{spec}`")));
        }
        if let Some(rep) = item.strip_prefix("class:") {
            let x = g.element(rep)?;
            let data = g.conjugacy();
            hat.extend(data.classes[data.class_of[x]].iter().copied());
        } else {
            hat.push(g.element(item)?);
        }
    }
    hat.sort_unstable();
    hat.dedup();
    Ok(hat)
}

/// Comma separated rationals such as `1,-1/2,0`.
pub fn parse_rationals(spec: &str) -> Result<Vec<finitegeo_core::Rational>> {
    spec.split(',')
        .map(|s| finitegeo_core::linalg::parse_rational(s).ok_or_else(|| usage(format!("`{s}` is not a rational"))))
        .collect()
}
