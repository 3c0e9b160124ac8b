//! Finite groups as Cayley tables with the identity at index 0.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default bound on group orders built by the named constructors.
pub const DEFAULT_MAX_ORDER: usize = 1024;

/// A finite group on elements `0..order`, identity `0`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    names: Vec<String>,
    aliases: Vec<(String, usize)>,
}

/// Equality compares the multiplication table only.
impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl Eq for FiniteGroup {}

/// Conjugacy classes, center and the order of the inner automorphism group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyData {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub center: Vec<usize>,
    pub ad_order: usize,
}

impl FiniteGroup {
    /// Validates a Cayley table and relabels its identity to index 0.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::MalformedTable);
        }
        let e = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)).ok_or(Error::NoIdentity)?;
        for x in 0..n {
            if !(0..n).any(|y| table[x][y] == e && table[y][x] == e) {
                return Err(Error::NoInverse(x));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
        // swap labels e <-> 0
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[relabel(a) * n + relabel(b)] = relabel(table[a][b]);
            }
        }
        let names = (0..n).map(|i| if i == 0 { "e".to_string() } else { format!("g{i}") }).collect();
        Ok(Self::from_parts(n, mul, names))
    }

    fn from_parts(order: usize, mul: Vec<usize>, names: Vec<String>) -> Self {
        let inv = (0..order).map(|x| (0..order).find(|&y| mul[x * order + y] == 0).expect("inverse")).collect();
        FiniteGroup { order, mul, inv, names, aliases: Vec::new() }
    }

    /// Z_n with generator `a`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        let mut mul = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = (i + j) % n;
            }
        }
        let names = (0..n).map(|i| power_name("a", i)).collect();
        Self::from_parts(n, mul, names)
    }

    /// S_n with the default size bound.
    pub fn symmetric(n: usize) -> Result<Self> {
        Self::symmetric_bounded(n, DEFAULT_MAX_ORDER)
    }

    /// S_n on {1..n}; elements in lexicographic order of their one-line words.
    /// The product is composition, `(st)(i) = s(t(i))`. For n = 3 the
    /// transpositions (12), (23), (13) are also called a, b, c.
    pub fn symmetric_bounded(n: usize, bound: usize) -> Result<Self> {
        assert!(n >= 1, "symmetric group needs n >= 1");
        let mut size: usize = 1;
        for k in 2..=n {
            size = size.saturating_mul(k);
            if size > bound {
                return Err(Error::TooLarge { size, bound });
            }
        }
        let mut perms = Vec::with_capacity(size);
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            perms.push(p.clone());
            if !next_permutation(&mut p) {
                break;
            }
        }
        let mut g = Self::from_permutations(n, perms);
        if n == 3 {
            let a = g.element("(12)").unwrap();
            let b = g.element("(23)").unwrap();
            let c = g.element("(13)").unwrap();
            let ab = g.mul(a, b);
            let ba = g.mul(b, a);
            g.aliases = vec![("a".into(), a), ("b".into(), b), ("c".into(), c), ("ab".into(), ab), ("ba".into(), ba)];
        }
        Ok(g)
    }

    /// Alternating group A_n (even permutations, lexicographic order).
    pub fn alternating(n: usize) -> Result<Self> {
        Self::alternating_bounded(n, DEFAULT_MAX_ORDER)
    }

    pub fn alternating_bounded(n: usize, bound: usize) -> Result<Self> {
        let half = (2..=n).try_fold(1usize, |acc, k| acc.checked_mul(k)).map_or(usize::MAX, |f| f / 2);
        if n >= 2 && half > bound {
            return Err(Error::TooLarge { size: half, bound });
        }
        let s = Self::symmetric_bounded(n, bound.saturating_mul(2))?;
        let perms: Vec<Vec<usize>> =
            (0..s.order()).map(|i| parse_cycles(n, s.name(i)).expect("own name")).filter(|p| parity(p) == 0).collect();
        Ok(Self::from_permutations(n, perms))
    }

    /// Dihedral group of order 2n: elements r^k and r^k s, with s r s = r^-1.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1, "dihedral group needs n >= 1");
        let order = 2 * n;
        let idx = |k: usize, j: usize| j * n + k;
        let mut mul = vec![0; order * order];
        for j1 in 0..2 {
            for k1 in 0..n {
                for j2 in 0..2 {
                    for k2 in 0..n {
                        let k = if j1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
                        mul[idx(k1, j1) * order + idx(k2, j2)] = idx(k, (j1 + j2) % 2);
                    }
                }
            }
        }
        let names = (0..order)
            .map(|i| {
                let (k, j) = (i % n, i / n);
                match (k, j) {
                    (0, 1) => "s".to_string(),
                    (_, 1) => format!("{}s", power_name("r", k)),
                    _ => power_name("r", k),
                }
            })
            .collect();
        Self::from_parts(order, mul, names)
    }

    /// Dicyclic group of order 4n: elements a^k x^j with x^2 = a^n, x a x^-1 = a^-1.
    /// `dicyclic(2)` is the quaternion group.
    pub fn dicyclic(n: usize) -> Self {
        assert!(n >= 1, "dicyclic group needs n >= 1");
        let m = 2 * n;
        let order = 2 * m;
        let idx = |k: usize, j: usize| j * m + k;
        let mut mul = vec![0; order * order];
        for j1 in 0..2 {
            for k1 in 0..m {
                for j2 in 0..2 {
                    for k2 in 0..m {
                        let (k, j) = if j1 == 0 {
                            ((k1 + k2) % m, j2)
                        } else if j2 == 0 {
                            ((k1 + m - k2) % m, 1)
                        } else {
                            ((k1 + m - k2 + n) % m, 0)
                        };
                        mul[idx(k1, j1) * order + idx(k2, j2)] = idx(k, j);
                    }
                }
            }
        }
        let names = (0..order)
            .map(|i| {
                let (k, j) = (i % m, i / m);
                match (k, j) {
                    (0, 1) => "x".to_string(),
                    (_, 1) => format!("{}x", power_name("a", k)),
                    _ => power_name("a", k),
                }
            })
            .collect();
        Self::from_parts(order, mul, names)
    }

    /// Subgroup of S_degree generated by the given permutations (0-based one-line form).
    pub fn permutation_group(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        Self::permutation_group_bounded(degree, generators, DEFAULT_MAX_ORDER)
    }

    pub fn permutation_group_bounded(degree: usize, generators: &[Vec<usize>], bound: usize) -> Result<Self> {
        Ok(Self::from_permutations(degree, permutation_closure_bounded(degree, generators, bound)?))
    }

    /// Group of the given permutations, which must be closed under composition;
    /// element order is the order of `perms` sorted lexicographically.
    pub(crate) fn from_permutations(degree: usize, mut perms: Vec<Vec<usize>>) -> Self {
        perms.sort();
        let index: BTreeMap<Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let n = perms.len();
        let mut mul = vec![0; n * n];
        for (i, s) in perms.iter().enumerate() {
            for (j, t) in perms.iter().enumerate() {
                mul[i * n + j] = index[&compose(s, t)];
            }
        }
        let names = perms.iter().map(|p| cycle_name(p, degree)).collect();
        Self::from_parts(n, mul, names)
    }

    /// Direct product with row-major indexing `(i, j) -> i * |g2| + j`.
    pub fn direct_product(g1: &Self, g2: &Self) -> Result<Self> {
        Self::direct_product_bounded(g1, g2, DEFAULT_MAX_ORDER)
    }

    pub fn direct_product_bounded(g1: &Self, g2: &Self, bound: usize) -> Result<Self> {
        let (n1, n2) = (g1.order, g2.order);
        let n = n1 * n2;
        if n > bound {
            return Err(Error::TooLarge { size: n, bound });
        }
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let (a1, a2) = (a / n2, a % n2);
                let (b1, b2) = (b / n2, b % n2);
                mul[a * n + b] = g1.mul(a1, b1) * n2 + g2.mul(a2, b2);
            }
        }
        let names = (0..n)
            .map(|i| if i == 0 { "e".to_string() } else { format!("({},{})", g1.name(i / n2), g2.name(i % n2)) })
            .collect();
        Ok(Self::from_parts(n, mul, names))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// The Cayley table as rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// `h x h^-1`.
    pub fn adjoint(&self, h: usize, x: usize) -> usize {
        self.mul(self.mul(h, x), self.inv(h))
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Replaces element names; `names` must have one entry per element.
    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.order, "one name per element");
        self.names = names;
        self.aliases.clear();
        self
    }

    /// Short alternative names such as `a` for `(12)` in S3.
    pub fn aliases(&self) -> &[(String, usize)] {
        &self.aliases
    }

    /// Replaces the aliases; every index must be in range.
    pub fn with_aliases(mut self, aliases: Vec<(String, usize)>) -> Result<Self> {
        if let Some((_, i)) = aliases.iter().find(|(_, i)| *i >= self.order) {
            return Err(Error::ElementOutOfRange(*i));
        }
        self.aliases = aliases;
        Ok(self)
    }

    /// Looks an element up by name, alias, cycle notation or decimal index.
    pub fn element(&self, name: &str) -> Result<usize> {
        let key: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let plain = |s: &str| s.replace('^', "");
        if let Some(i) = self.names.iter().position(|n| *n == key || plain(n) == plain(&key)) {
            return Ok(i);
        }
        if let Some((_, i)) = self.aliases.iter().find(|(a, _)| *a == key) {
            return Ok(*i);
        }
        if let Ok(i) = key.parse::<usize>() {
            if i < self.order {
                return Ok(i);
            }
        }
        Err(Error::UnknownElement(name.to_string()))
    }

    /// Conventional short name if one exists, else the canonical name.
    pub fn display_name(&self, g: usize) -> &str {
        self.aliases.iter().find(|(_, i)| *i == g).map_or(self.name(g), |(a, _)| a.as_str())
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugacy(&self) -> ConjugacyData {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|h| self.adjoint(h, x)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &y in &cls {
                class_of[y] = classes.len();
            }
            classes.push(cls);
        }
        let center: Vec<usize> = (0..n).filter(|&x| classes[class_of[x]].len() == 1).collect();
        let ad_order = n / center.len();
        ConjugacyData { classes, class_of, center, ad_order }
    }
}

/// Orbits of a left action of `g` on `0..points`, checked against the group law.
/// Orbits are sorted internally and listed by smallest member.
pub fn orbits(g: &FiniteGroup, points: usize, act: impl Fn(usize, usize) -> usize) -> Result<Vec<Vec<usize>>> {
    let n = g.order();
    let table: Vec<usize> = (0..n).flat_map(|a| (0..points).map(move |x| (a, x))).map(|(a, x)| act(a, x)).collect();
    let at = |a: usize, x: usize| table[a * points + x];
    for x in 0..points {
        if at(0, x) != x {
            return Err(Error::IdentityActsNontrivially(x));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = g.mul(a, b);
            for x in 0..points {
                if at(ab, x) != at(a, at(b, x)) {
                    return Err(Error::NotAnAction(a, b, x));
                }
            }
        }
    }
    let mut assigned = vec![false; points];
    let mut out = Vec::new();
    for x in 0..points {
        if assigned[x] {
            continue;
        }
        let mut orb: Vec<usize> = (0..n).map(|a| at(a, x)).collect();
        orb.sort_unstable();
        orb.dedup();
        for &y in &orb {
            assigned[y] = true;
        }
        out.push(orb);
    }
    Ok(out)
}

fn power_name(base: &str, k: usize) -> String {
    match k {
        0 => "e".to_string(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !core::mem::replace(&mut seen[x], true))
}

/// All products of the generators, sorted lexicographically (identity first).
pub fn permutation_closure(degree: usize, generators: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    permutation_closure_bounded(degree, generators, DEFAULT_MAX_ORDER)
}

pub fn permutation_closure_bounded(degree: usize, generators: &[Vec<usize>], bound: usize) -> Result<Vec<Vec<usize>>> {
    for g in generators {
        if g.len() != degree || !is_permutation(g) {
            return Err(Error::MalformedTable);
        }
    }
    let id: Vec<usize> = (0..degree).collect();
    let mut seen = BTreeMap::new();
    seen.insert(id.clone(), ());
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = compose(g, &p);
            if !seen.contains_key(&q) {
                if seen.len() >= bound {
                    return Err(Error::TooLarge { size: seen.len() + 1, bound });
                }
                seen.insert(q.clone(), ());
                frontier.push(q);
            }
        }
    }
    Ok(seen.into_keys().collect())
}

/// `(s t)(i) = s(t(i))`.
pub fn compose(s: &[usize], t: &[usize]) -> Vec<usize> {
    t.iter().map(|&i| s[i]).collect()
}

fn parity(p: &[usize]) -> usize {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// Cycle notation with 1-based points, e.g. `(12)(34)`; `e` for the identity.
/// Points are separated by commas when the degree exceeds 9.
pub fn cycle_name(p: &[usize], degree: usize) -> String {
    let mut out = String::new();
    let mut seen = vec![false; p.len()];
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push((x + 1).to_string());
            x = p[x];
        }
        let sep = if degree > 9 { "," } else { "" };
        out.push('(');
        out.push_str(&cyc.join(sep));
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// Parses cycle notation such as `(12)(34)`, `(1,2)` or `e` into a 0-based permutation.
pub fn parse_cycles(degree: usize, s: &str) -> Option<Vec<usize>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p: Vec<usize> = (0..degree).collect();
    if s == "e" || s == "()" || s.is_empty() {
        return Some(p);
    }
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(')?;
        let close = body.find(')')?;
        let inner = &body[..close];
        rest = &body[close + 1..];
        let pts: Vec<usize> = if inner.contains(',') {
            inner.split(',').map(|t| t.parse::<usize>().ok()).collect::<Option<_>>()?
        } else {
            inner.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()?
        };
        if pts.iter().any(|&x| x == 0 || x > degree) {
            return None;
        }
        // apply this cycle after the ones parsed so far (rightmost acts first)
        let mut cyc: Vec<usize> = (0..degree).collect();
        for w in 0..pts.len() {
            cyc[pts[w] - 1] = pts[(w + 1) % pts.len()] - 1;
        }
        p = compose(&p, &cyc);
    }
    if is_permutation(&p) {
        Some(p)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_table_examples() {
        let g = FiniteGroup::from_cayley_table(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        let z2 = FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.inv(1), 1);
        let bad = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(matches!(FiniteGroup::from_cayley_table(&bad), Err(Error::NoInverse(_) | Error::NotAssociative(..))));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // a loop of order 5 that is not a group
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_cayley_table(&t), Err(Error::NotAssociative(..))));
    }

    #[test]
    fn identity_is_relabeled() {
        // Z2 with identity stored at index 1
        let g = FiniteGroup::from_cayley_table(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn cyclic_examples() {
        let z3 = FiniteGroup::cyclic(3);
        assert!(z3.conjugacy().classes.iter().all(|c| c.len() == 1));
        assert_eq!(FiniteGroup::cyclic(4).inv(1), 3);
        assert_eq!(FiniteGroup::cyclic(1).order(), 1);
    }

    #[test]
    fn symmetric_examples() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        let cd = s3.conjugacy();
        let mut sizes: Vec<usize> = cd.classes.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(cd.center, vec![0]);
        assert_eq!(cd.ad_order, 6);
        let s2 = FiniteGroup::symmetric(2).unwrap();
        assert!(s2.is_abelian());
        assert!(matches!(FiniteGroup::symmetric_bounded(5, 100), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn s3_letters() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let el = |s: &str| s3.element(s).unwrap();
        assert_eq!(s3.adjoint(el("a"), el("b")), el("c"));
        assert_eq!(s3.mul(el("b"), el("c")), el("ab"));
        assert_eq!(s3.mul(el("c"), el("a")), el("ab"));
        assert_eq!(s3.inv(el("ab")), el("ba"));
    }

    #[test]
    fn products() {
        let z2 = FiniteGroup::cyclic(2);
        let k = FiniteGroup::direct_product(&z2, &z2).unwrap();
        assert!((0..4).all(|x| k.inv(x) == x));
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let p = FiniteGroup::direct_product(&FiniteGroup::cyclic(1), &s3).unwrap();
        assert_eq!(p, s3);
    }

    #[test]
    fn named_families() {
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert!(!FiniteGroup::dihedral(4).is_abelian());
        let q8 = FiniteGroup::dicyclic(2);
        assert_eq!(q8.order(), 8);
        // exactly one involution in the quaternion group
        assert_eq!((1..8).filter(|&g| q8.element_order(g) == 2).count(), 1);
        let a4 = FiniteGroup::alternating(4).unwrap();
        assert_eq!(a4.order(), 12);
        assert_eq!(a4.conjugacy().classes.len(), 4);
    }

    #[test]
    fn cycles_round_trip() {
        for p in [vec![1, 0, 2], vec![1, 2, 0], vec![0, 1, 2], vec![1, 0, 3, 2]] {
            let s = cycle_name(&p, p.len());
            assert_eq!(parse_cycles(p.len(), &s), Some(p));
        }
        assert_eq!(parse_cycles(3, "(1,2)"), Some(vec![1, 0, 2]));
    }

    #[test]
    fn generated_subgroups() {
        let g = FiniteGroup::permutation_group(3, &[parse_cycles(3, "(123)").unwrap()]).unwrap();
        assert_eq!(g.order(), 3);
        let s4 =
            FiniteGroup::permutation_group(4, &[parse_cycles(4, "(12)").unwrap(), parse_cycles(4, "(1234)").unwrap()])
                .unwrap();
        assert_eq!(s4, FiniteGroup::symmetric(4).unwrap());
    }

    #[test]
    fn orbit_examples() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let triv = orbits(&FiniteGroup::cyclic(1), 4, |_, x| x).unwrap();
        assert_eq!(triv.len(), 4);
        let conj = orbits(&s3, 6, |h, x| s3.adjoint(h, x)).unwrap();
        assert_eq!(conj.len(), 3);
        assert!(matches!(orbits(&s3, 6, |h, x| s3.mul(x, h)), Err(Error::NotAnAction(..))));
    }
}
