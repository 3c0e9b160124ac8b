//! Finite groups acting on finite sets and the covariant calculi on the set.
//!
//! A calculus on a finite set `M` is a digraph without loops; it is covariant
//! when its edge set is a union of orbits of the diagonal action on `(M x M)'`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::calculus::dot_digraph;
use crate::error::{Error, Result};
use crate::group::{orbits, permutation_closure_bounded, FiniteGroup, DEFAULT_MAX_ORDER};

/// Largest number of orbits for which all unions are enumerated.
pub const MAX_ORBIT_UNION_BITS: usize = 20;

/// A finite group acting from the left on the points `0 .. size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    group: Arc<FiniteGroup>,
    size: usize,
    /// `act[g * size + x] = g . x`.
    act: Vec<usize>,
}

impl GSet {
    /// Validates `e . x = x` and `(g g') . x = g . (g' . x)` exhaustively.
    pub fn new(group: impl Into<Arc<FiniteGroup>>, size: usize, act: Vec<usize>) -> Result<Self> {
        let group = group.into();
        let n = group.order();
        if act.len() != n * size {
            return Err(Error::DimensionMismatch { expected: n * size, got: act.len() });
        }
        if let Some(&p) = act.iter().find(|&&p| p >= size) {
            return Err(Error::ElementOutOfRange(p));
        }
        for x in 0..size {
            if act[group.identity() * size + x] != x {
                return Err(Error::IdentityActsNontrivially(x));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for x in 0..size {
                    if act[group.mul(a, b) * size + x] != act[a * size + act[b * size + x]] {
                        return Err(Error::NotAnAction(a, b, x));
                    }
                }
            }
        }
        Ok(GSet { group, size, act })
    }

    pub fn from_fn(group: impl Into<Arc<FiniteGroup>>, size: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let group = group.into();
        let act = (0..group.order() * size).map(|i| f(i / size, i % size)).collect();
        Self::new(group, size, act)
    }

    /// The permutation group generated by `generators` (0-based images) acting on `0 .. degree`.
    pub fn from_generators(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        Self::from_generators_bounded(degree, generators, DEFAULT_MAX_ORDER)
    }

    pub fn from_generators_bounded(degree: usize, generators: &[Vec<usize>], bound: usize) -> Result<Self> {
        let perms = permutation_closure_bounded(degree, generators, bound)?;
        let group = FiniteGroup::from_permutations(degree, perms.clone());
        let act = perms.iter().flat_map(|p| p.iter().copied()).collect();
        Self::new(group, degree, act)
    }

    /// The group acting on itself by left translation.
    pub fn left_translation(group: impl Into<Arc<FiniteGroup>>) -> Self {
        let group = group.into();
        let n = group.order();
        let act = (0..n * n).map(|i| group.mul(i / n, i % n)).collect();
        GSet { group, size: n, act }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `g . x`.
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.act[g * self.size + x]
    }
}

/// Orbits of the diagonal action on ordered pairs of distinct points.
pub fn pair_orbits(gs: &GSet) -> Vec<Vec<(usize, usize)>> {
    let m = gs.size;
    let pairs: Vec<(usize, usize)> =
        (0..m).flat_map(|x| (0..m).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let index = |(x, y): (usize, usize)| x * m + y;
    let mut slot = alloc::vec![usize::MAX; m * m];
    for (i, &p) in pairs.iter().enumerate() {
        slot[index(p)] = i;
    }
    let parts = orbits(gs.group(), pairs.len(), |g, i| {
        let (x, y) = pairs[i];
        slot[index((gs.act(g, x), gs.act(g, y)))]
    })
    .expect("validated action");
    parts.into_iter().map(|o| o.into_iter().map(|i| pairs[i]).collect()).collect()
}

/// A calculus on a finite set given by its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCalculus {
    pub size: usize,
    /// Sorted edges `(x, y)`.
    pub edges: Vec<(usize, usize)>,
    /// Indices of the pair orbits whose union this is.
    pub orbits: Vec<usize>,
}

impl SetCalculus {
    /// DOT digraph with 1-based point labels.
    pub fn to_dot(&self) -> String {
        let names: Vec<String> = (1..=self.size).map(|i| i.to_string()).collect();
        dot_digraph(&names, &self.edges)
    }
}

fn union_of(size: usize, orbit_list: &[Vec<(usize, usize)>], chosen: Vec<usize>) -> SetCalculus {
    let mut edges: Vec<(usize, usize)> = chosen.iter().flat_map(|&i| orbit_list[i].iter().copied()).collect();
    edges.sort_unstable();
    SetCalculus { size, edges, orbits: chosen }
}

/// All covariant calculi, from the trivial one to the universal one, ordered by orbit subsets.
pub fn covariant_calculi(gs: &GSet) -> Result<Vec<SetCalculus>> {
    let orbit_list = pair_orbits(gs);
    let k = orbit_list.len();
    if k > MAX_ORBIT_UNION_BITS {
        return Err(Error::TooLarge { size: k, bound: MAX_ORBIT_UNION_BITS });
    }
    let mut out: Vec<SetCalculus> = (0..1usize << k)
        .map(|mask| union_of(gs.size, &orbit_list, (0..k).filter(|i| mask >> i & 1 == 1).collect()))
        .collect();
    out.sort_by(|a, b| (a.orbits.len(), &a.orbits).cmp(&(b.orbits.len(), &b.orbits)));
    Ok(out)
}

/// The single-orbit calculi.
pub fn irreducible(gs: &GSet) -> Vec<SetCalculus> {
    let orbit_list = pair_orbits(gs);
    (0..orbit_list.len()).map(|i| union_of(gs.size, &orbit_list, alloc::vec![i])).collect()
}

/// Whether an edge set is mapped to itself by every group element.
pub fn is_invariant(gs: &GSet, edges: &[(usize, usize)]) -> bool {
    let mut set: Vec<(usize, usize)> = edges.to_vec();
    set.sort_unstable();
    (0..gs.group().order()).all(|g| {
        let mut img: Vec<(usize, usize)> = edges.iter().map(|&(x, y)| (gs.act(g, x), gs.act(g, y))).collect();
        img.sort_unstable();
        img == set
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::left_orbits;

    #[test]
    fn transposition_subgroup_orbits() {
        let gs = GSet::from_generators(3, &[alloc::vec![1, 0, 2]]).unwrap();
        assert_eq!(gs.group().order(), 2);
        let o = pair_orbits(&gs);
        assert_eq!(
            o,
            alloc::vec![alloc::vec![(0, 1), (1, 0)], alloc::vec![(0, 2), (1, 2)], alloc::vec![(2, 0), (2, 1)]]
        );
        assert_eq!(covariant_calculi(&gs).unwrap().len(), 8);
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(GSet::new(z2.clone(), 2, alloc::vec![1, 0, 1, 0]), Err(Error::IdentityActsNontrivially(0)));
        let z3 = FiniteGroup::cyclic(3);
        // generator swapping two points has order 2, not 3
        let bad = GSet::from_fn(z3, 2, |g, x| if g == 0 { x } else { 1 - x });
        assert!(matches!(bad, Err(Error::NotAnAction(..))));
    }

    #[test]
    fn left_translation_matches_left_covariant_orbits() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let gs = GSet::left_translation(g.clone());
        assert_eq!(pair_orbits(&gs).len(), g.order() - 1);
        let mut a: Vec<Vec<(usize, usize)>> = pair_orbits(&gs);
        let mut b = left_orbits(&g);
        for o in a.iter_mut().chain(b.iter_mut()) {
            o.sort_unstable();
        }
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
