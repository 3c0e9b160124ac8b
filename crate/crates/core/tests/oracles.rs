//! Independent oracles for S3: the published braid table and permutation arithmetic.

use std::sync::Arc;

use finitegeo_core::braid::SigmaOperator;
use finitegeo_core::dual::sigma_prime;
use finitegeo_core::{DifferentialCalculus, FiniteGroup, Slot, Tensor};

const NAMES: [&str; 5] = ["a", "b", "c", "ab", "ba"];

/// Braid images on the universal calculus as tabulated by conjugacy class.
fn table(x: &str, y: &str) -> (&'static str, &'static str) {
    let trans = ["a", "b", "c"];
    let name = |s: &str| *NAMES.iter().find(|n| **n == s).unwrap();
    if x == y {
        return (name(x), name(x));
    }
    match (trans.contains(&x), trans.contains(&y)) {
        (true, true) => (*trans.iter().find(|z| **z != x && **z != y).unwrap(), name(x)),
        (false, false) => (name(y), name(x)),
        (true, false) => (if y == "ab" { "ba" } else { "ab" }, name(x)),
        (false, true) => {
            let pairs: &[(&str, &str)] =
                if x == "ab" { &[("a", "c"), ("b", "a"), ("c", "b")] } else { &[("a", "b"), ("b", "c"), ("c", "a")] };
            (pairs.iter().find(|p| p.0 == y).unwrap().1, name(x))
        }
    }
}

#[test]
fn braid_table_on_universal_calculus() {
    let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let c = DifferentialCalculus::universal(g.clone());
    let sigma = SigmaOperator::new(&c).unwrap();
    let pos = |n: &str| c.position(g.element(n).unwrap()).unwrap();
    for x in NAMES {
        for y in NAMES {
            let (p, q) = table(x, y);
            assert_eq!(sigma.image(pos(x), pos(y), 1), (pos(p), pos(q)), "sigma({x}, {y})");
        }
    }
}

/// One-line permutations of {0, 1, 2} composed as functions.
fn perm(name: &str) -> [usize; 3] {
    let t = |i: usize, j: usize| {
        let mut p = [0, 1, 2];
        p.swap(i, j);
        p
    };
    let mul = |s: [usize; 3], r: [usize; 3]| [s[r[0]], s[r[1]], s[r[2]]];
    match name {
        "a" => t(0, 1),
        "b" => t(1, 2),
        "c" => t(0, 2),
        "ab" => mul(t(0, 1), t(1, 2)),
        "ba" => mul(t(1, 2), t(0, 1)),
        _ => [0, 1, 2],
    }
}

#[test]
fn sigma_prime_by_permutation_arithmetic() {
    let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let c = DifferentialCalculus::universal(g.clone());
    let pos = |n: &str| c.position(g.element(n).unwrap()).unwrap();
    let mul = |s: [usize; 3], r: [usize; 3]| [s[r[0]], s[r[1]], s[r[2]]];
    let inv = |s: [usize; 3]| {
        let mut out = [0; 3];
        for (i, &v) in s.iter().enumerate() {
            out[v] = i;
        }
        out
    };
    for h in NAMES {
        for gg in NAMES {
            // theta^h (x) l_g -> l_g (x) theta^{g^-1 h g}
            let conj = mul(mul(inv(perm(gg)), perm(h)), perm(gg));
            let target = NAMES.iter().find(|n| perm(n) == conj).unwrap();
            let t = Tensor::basis(&c, &[Slot::Form, Slot::Field], &[pos(h), pos(gg)]).unwrap();
            let expected = Tensor::basis(&c, &[Slot::Field, Slot::Form], &[pos(gg), pos(target)]).unwrap();
            assert_eq!(sigma_prime(&t, 0).unwrap(), expected, "sigma'({h}, {gg})");
        }
    }
}
