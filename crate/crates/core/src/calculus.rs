//! Left-covariant first order differential calculi on a finite group.
//!
//! A calculus is fixed by the set `hat` of group elements whose left-invariant
//! Maurer-Cartan form `theta^g` is nonzero. Its digraph has an arrow `x -> y`
//! exactly when `y^-1 x` lies in `hat`; in particular `theta^g` is the sum of
//! the arrows `h g -> h`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::function::{structure_constant, GroupFunction};
use crate::group::{orbits, FiniteGroup};
use crate::tensor::Tensor;

/// Largest number of generating elements for which all subsets are enumerated.
pub const MAX_ENUMERATION_BITS: usize = 20;

#[derive(Debug)]
struct Inner {
    group: Arc<FiniteGroup>,
    hat: Vec<usize>,
    pos: Vec<Option<usize>>,
    bicovariant: bool,
}

/// A left-covariant calculus; cloning is cheap.
#[derive(Clone, Debug)]
pub struct DifferentialCalculus(Arc<Inner>);

impl PartialEq for DifferentialCalculus {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hat == other.0.hat && self.0.group == other.0.group)
    }
}

impl Eq for DifferentialCalculus {}

/// Covariance of a calculus under left and right translations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Covariance {
    pub left: bool,
    pub right: bool,
    pub bi: bool,
}

impl DifferentialCalculus {
    /// Calculus generated by the given elements (duplicates are ignored).
    pub fn from_hat(group: impl Into<Arc<FiniteGroup>>, hat: &[usize]) -> Result<Self> {
        let group = group.into();
        let n = group.order();
        let mut set = BTreeSet::new();
        for &g in hat {
            if g >= n {
                return Err(Error::ElementOutOfRange(g));
            }
            if g == 0 {
                return Err(Error::IdentityInHatG);
            }
            set.insert(g);
        }
        let hat: Vec<usize> = set.into_iter().collect();
        let mut pos = vec![None; n];
        for (i, &g) in hat.iter().enumerate() {
            pos[g] = Some(i);
        }
        let bicovariant = hat.iter().all(|&g| (0..n).all(|h| pos[group.adjoint(h, g)].is_some()));
        Ok(DifferentialCalculus(Arc::new(Inner { group, hat, pos, bicovariant })))
    }

    /// All arrows between distinct elements.
    pub fn universal(group: impl Into<Arc<FiniteGroup>>) -> Self {
        let group = group.into();
        let hat: Vec<usize> = (1..group.order()).collect();
        Self::from_hat(group, &hat).expect("universal calculus")
    }

    /// Calculus with the given arrows, which must form a left-covariant digraph.
    pub fn from_edges(group: impl Into<Arc<FiniteGroup>>, edges: &[(usize, usize)]) -> Result<Self> {
        let group = group.into();
        let n = group.order();
        let mut hat = BTreeSet::new();
        for &(x, y) in edges {
            if x >= n || y >= n {
                return Err(Error::ElementOutOfRange(x.max(y)));
            }
            if x == y {
                return Err(Error::IdentityInHatG);
            }
            hat.insert(group.mul(group.inv(y), x));
        }
        let hat: Vec<usize> = hat.into_iter().collect();
        let c = Self::from_hat(group, &hat)?;
        let given: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
        if given != c.edges().into_iter().collect() {
            return Err(Error::NotLeftCovariant);
        }
        Ok(c)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.0.group
    }

    pub fn group_arc(&self) -> Arc<FiniteGroup> {
        self.0.group.clone()
    }

    /// Order of the group.
    pub fn n(&self) -> usize {
        self.0.group.order()
    }

    /// Generating elements, sorted.
    pub fn hat(&self) -> &[usize] {
        &self.0.hat
    }

    /// Number of generating elements, the rank of the module of 1-forms.
    pub fn dim(&self) -> usize {
        self.0.hat.len()
    }

    /// Position of `g` in `hat`.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.0.pos.get(g).copied().flatten()
    }

    pub fn try_position(&self, g: usize) -> Result<usize> {
        self.position(g).ok_or(Error::NotInHatG(g))
    }

    pub fn is_bicovariant(&self) -> bool {
        self.0.bicovariant
    }

    pub fn is_universal(&self) -> bool {
        self.dim() + 1 == self.n()
    }

    pub fn covariance(&self) -> Covariance {
        let bi = self.is_bicovariant();
        Covariance { left: true, right: bi, bi }
    }

    pub fn require_bicovariant(&self) -> Result<()> {
        if self.is_bicovariant() {
            Ok(())
        } else {
            Err(Error::NotBicovariant)
        }
    }

    /// Arrows `(x, y)` with `y^-1 x` in `hat`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let g = self.group();
        let mut e: Vec<(usize, usize)> =
            (0..g.order()).flat_map(|h| self.hat().iter().map(move |&s| (g.mul(h, s), h))).collect();
        e.sort_unstable();
        e
    }

    /// The 1-form `e_x d e_y = e_x theta^{y^-1 x}` for an arrow `x -> y`.
    pub fn edge_form(&self, x: usize, y: usize) -> Result<Tensor> {
        let g = self.group();
        let s = g.mul(g.inv(y), x);
        let p = self.try_position(s)?;
        let mut coeffs = vec![GroupFunction::zero(self.n()); self.dim()];
        coeffs[p] = GroupFunction::delta(self.n(), x);
        Ok(Tensor::one_form(self, coeffs))
    }

    /// Expansion of a 1-form in the arrow basis `e_x d e_y`, zero terms omitted.
    pub fn edge_coefficients(&self, form: &Tensor) -> Vec<((usize, usize), crate::linalg::Rational)> {
        let g = self.group();
        let mut out = Vec::new();
        for (p, &s) in self.hat().iter().enumerate() {
            for x in 0..self.n() {
                let v = form.coeff_at(p, x);
                if !num_traits::Zero::is_zero(v) {
                    out.push(((x, g.mul(x, g.inv(s))), v.clone()));
                }
            }
        }
        out.sort_by_key(|e| e.0);
        out
    }

    /// `df = (l_g f) theta^g`.
    pub fn differential(&self, f: &GroupFunction) -> Tensor {
        let g = self.group();
        Tensor::one_form(self, self.hat().iter().map(|&s| f.ell(g, s)).collect())
    }

    /// `rho = sum_g theta^g`.
    pub fn rho(&self) -> Tensor {
        Tensor::one_form(self, vec![GroupFunction::one(self.n()); self.dim()])
    }

    /// `theta^g`.
    pub fn theta(&self, g: usize) -> Result<Tensor> {
        let p = self.try_position(g)?;
        let mut coeffs = vec![GroupFunction::zero(self.n()); self.dim()];
        coeffs[p] = GroupFunction::one(self.n());
        Ok(Tensor::one_form(self, coeffs))
    }

    /// `R_g f`, so that `f theta^g = theta^g (R_g f)`.
    pub fn theta_commute(&self, f: &GroupFunction, g: usize) -> Result<GroupFunction> {
        self.try_position(g)?;
        Ok(f.right_translate(self.group(), g))
    }

    /// Right-invariant form `omega^g = sum_h e_h theta^{h^-1 g h}` in the theta basis.
    pub fn omega(&self, g: usize) -> Result<Tensor> {
        self.require_bicovariant()?;
        let p = self.try_position(g)?;
        let mut basis = vec![GroupFunction::zero(self.n()); self.dim()];
        basis[p] = GroupFunction::one(self.n());
        Ok(Tensor::one_form(self, self.omega_to_theta(&basis)?))
    }

    /// Coefficients with respect to the omega basis from theta-basis coefficients.
    pub fn theta_to_omega(&self, theta: &[GroupFunction]) -> Result<Vec<GroupFunction>> {
        self.convert_basis(theta, true)
    }

    /// Coefficients with respect to the theta basis from omega-basis coefficients.
    pub fn omega_to_theta(&self, omega: &[GroupFunction]) -> Result<Vec<GroupFunction>> {
        self.convert_basis(omega, false)
    }

    fn convert_basis(&self, coeffs: &[GroupFunction], to_omega: bool) -> Result<Vec<GroupFunction>> {
        self.require_bicovariant()?;
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coeffs.len() });
        }
        let g = self.group();
        let n = self.n();
        let mut out = vec![Vec::with_capacity(n); self.dim()];
        for (p, &y) in self.hat().iter().enumerate() {
            for x in 0..n {
                // theta^s = e_x omega^{x s x^-1} at the point x
                let s = if to_omega { g.adjoint(g.inv(x), y) } else { g.adjoint(x, y) };
                let q = self.position(s).expect("ad-closed");
                out[p].push(coeffs[q].at(x).clone());
            }
        }
        Ok(out.into_iter().map(GroupFunction::new).collect())
    }

    /// Structure constants over `hat`.
    pub fn structure_constants(&self) -> StructureConstants {
        let k = self.dim();
        let mut table = Vec::with_capacity(k * k * k);
        for &h in self.hat() {
            for &a in self.hat() {
                for &b in self.hat() {
                    table.push(structure_constant(self.group(), h, a, b) as i8);
                }
            }
        }
        StructureConstants { k, table }
    }

    /// Digraph in DOT format, nodes named after group elements.
    pub fn to_dot(&self) -> String {
        let g = self.group();
        let names: Vec<String> = (0..g.order()).map(|i| String::from(g.display_name(i))).collect();
        dot_digraph(&names, &self.edges())
    }
}

/// Structure constants `C^h_{g,g'}` indexed by positions in `hat`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    k: usize,
    table: Vec<i8>,
}

impl StructureConstants {
    pub fn get(&self, h: usize, g: usize, gp: usize) -> i64 {
        self.table[(h * self.k + g) * self.k + gp] as i64
    }
}

/// Off-diagonal pairs of the group under left multiplication `(g, g') -> (hg, hg')`.
pub fn left_orbits(group: &FiniteGroup) -> Vec<Vec<(usize, usize)>> {
    let n = group.order();
    let orbs = orbits(group, n * n, |h, p| group.mul(h, p / n) * n + group.mul(h, p % n)).expect("left action");
    orbs.into_iter().filter(|o| o[0] / n != o[0] % n).map(|o| o.into_iter().map(|p| (p / n, p % n)).collect()).collect()
}

/// All left-covariant calculi, trivial first, ordered by size then generating set.
pub fn enumerate_left_covariant(group: impl Into<Arc<FiniteGroup>>) -> Result<Vec<DifferentialCalculus>> {
    let group = group.into();
    let cands: Vec<Vec<usize>> = (1..group.order()).map(|g| vec![g]).collect();
    enumerate_unions(group, &cands)
}

/// All bicovariant calculi: unions of nontrivial conjugacy classes.
pub fn enumerate_bicovariant(group: impl Into<Arc<FiniteGroup>>) -> Result<Vec<DifferentialCalculus>> {
    let group = group.into();
    let classes: Vec<Vec<usize>> = group.conjugacy().classes.into_iter().filter(|c| c[0] != 0).collect();
    enumerate_unions(group, &classes)
}

fn enumerate_unions(group: Arc<FiniteGroup>, blocks: &[Vec<usize>]) -> Result<Vec<DifferentialCalculus>> {
    if blocks.len() > MAX_ENUMERATION_BITS {
        return Err(Error::TooLarge { size: blocks.len(), bound: MAX_ENUMERATION_BITS });
    }
    let mut out = Vec::with_capacity(1 << blocks.len());
    for mask in 0u64..(1u64 << blocks.len()) {
        let hat: Vec<usize> = blocks
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .flat_map(|(_, b)| b.iter().copied())
            .collect();
        out.push(DifferentialCalculus::from_hat(group.clone(), &hat)?);
    }
    out.sort_by(|a, b| (a.dim(), a.hat()).cmp(&(b.dim(), b.hat())));
    Ok(out)
}

/// DOT digraph; mutual arrows are drawn once with `dir=both`.
pub fn dot_digraph(names: &[String], edges: &[(usize, usize)]) -> String {
    let set: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let mut s = String::from("digraph calculus {\n");
    for name in names {
        let _ = writeln!(s, "  \"{name}\";");
    }
    for &(x, y) in &set {
        if set.contains(&(y, x)) {
            if x < y {
                let _ = writeln!(s, "  \"{}\" -> \"{}\" [dir=both];", names[x], names[y]);
            }
        } else {
            let _ = writeln!(s, "  \"{}\" -> \"{}\";", names[x], names[y]);
        }
    }
    s.push_str("}\n");
    s
}

/// Comma separated element names of a calculus, for messages.
pub fn describe_hat(c: &DifferentialCalculus) -> String {
    let g = c.group();
    let names: Vec<&str> = c.hat().iter().map(|&x| g.display_name(x)).collect();
    format!("{{{}}}", names.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3).unwrap())
    }

    fn els(g: &FiniteGroup, names: &[&str]) -> Vec<usize> {
        names.iter().map(|n| g.element(n).unwrap()).collect()
    }

    #[test]
    fn universal_examples() {
        let z2 = DifferentialCalculus::universal(FiniteGroup::cyclic(2));
        assert_eq!(z2.edges().len(), 2);
        assert_eq!(z2.hat(), &[1]);
        let u = DifferentialCalculus::universal(s3());
        assert_eq!(u.edges().len(), 30);
        assert_eq!(u.dim(), 5);
        assert!(DifferentialCalculus::universal(FiniteGroup::cyclic(1)).edges().is_empty());
    }

    #[test]
    fn from_hat_examples() {
        let g = s3();
        let t = DifferentialCalculus::from_hat(g.clone(), &[]).unwrap();
        let f = GroupFunction::from_i64(&[1, 2, 3, 4, 5, 6]);
        assert!(t.differential(&f).is_zero());
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(DifferentialCalculus::from_hat(z4, &[1, 2]).unwrap().edges().len(), 8);
        let two = DifferentialCalculus::from_hat(g.clone(), &els(&g, &["a", "b", "c"])).unwrap();
        assert!(two.is_bicovariant());
        assert_eq!(two.edges().len(), 18);
        assert_eq!(DifferentialCalculus::from_hat(g, &[0]), Err(Error::IdentityInHatG));
    }

    #[test]
    fn edges_round_trip() {
        let g = s3();
        for c in enumerate_left_covariant(g.clone()).unwrap() {
            let back = DifferentialCalculus::from_edges(g.clone(), &c.edges()).unwrap();
            assert_eq!(back, c);
        }
        // a single arrow is not left-covariant
        assert_eq!(DifferentialCalculus::from_edges(g, &[(0, 1)]), Err(Error::NotLeftCovariant));
    }

    #[test]
    fn edge_basis_round_trip() {
        let g = s3();
        let c = DifferentialCalculus::from_hat(g.clone(), &els(&g, &["a", "ab"])).unwrap();
        for (x, y) in c.edges() {
            let form = c.edge_form(x, y).unwrap();
            assert_eq!(c.edge_coefficients(&form), vec![((x, y), int(1))]);
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_left_covariant(FiniteGroup::cyclic(3)).unwrap().len(), 4);
        assert_eq!(enumerate_left_covariant(s3()).unwrap().len(), 32);
        assert_eq!(enumerate_left_covariant(FiniteGroup::cyclic(2)).unwrap().len(), 2);
        assert_eq!(enumerate_bicovariant(s3()).unwrap().len(), 4);
        assert_eq!(enumerate_bicovariant(FiniteGroup::cyclic(3)).unwrap().len(), 4);
        assert_eq!(enumerate_bicovariant(FiniteGroup::cyclic(1)).unwrap().len(), 1);
        assert_eq!(left_orbits(&s3()).len(), 5);
    }

    #[test]
    fn structure_constant_examples() {
        let g = s3();
        let u = DifferentialCalculus::universal(g.clone());
        let sc = u.structure_constants();
        let a = u.position(g.element("a").unwrap()).unwrap();
        assert_eq!(sc.get(a, a, a), -2);
        let z3 = DifferentialCalculus::from_hat(FiniteGroup::cyclic(3), &[1, 2]).unwrap();
        let sc = z3.structure_constants();
        assert_eq!(sc.get(1, 0, 0), 1);
    }

    #[test]
    fn differential_and_rho() {
        let g = s3();
        for c in enumerate_bicovariant(g.clone()).unwrap() {
            assert!(c.differential(&GroupFunction::one(6)).is_zero());
            for y in 0..6 {
                let f = GroupFunction::delta(6, y);
                let comm = &c.rho().right_mul(&f) - &c.rho().left_mul(&f);
                assert_eq!(comm, c.differential(&f));
            }
        }
        let t = DifferentialCalculus::from_hat(g, &[]).unwrap();
        assert!(t.rho().is_zero());
    }

    #[test]
    fn theta_commute_examples() {
        let g = s3();
        let c = DifferentialCalculus::universal(g.clone());
        let a = g.element("a").unwrap();
        let ab = g.element("ab").unwrap();
        assert_eq!(c.theta_commute(&GroupFunction::one(6), a).unwrap(), GroupFunction::one(6));
        let e2 = GroupFunction::delta(6, 2);
        assert_eq!(c.theta_commute(&e2, ab).unwrap(), GroupFunction::delta(6, g.mul(2, g.inv(ab))));
        let f = GroupFunction::from_i64(&[1, -2, 3, 0, 5, 7]);
        let there = c.theta_commute(&f, ab).unwrap();
        assert_eq!(c.theta_commute(&there, g.inv(ab)).unwrap(), f);
    }

    #[test]
    fn omega_conversion() {
        let z4 = DifferentialCalculus::universal(FiniteGroup::cyclic(4));
        for &x in z4.hat() {
            assert_eq!(z4.omega(x).unwrap(), z4.theta(x).unwrap());
        }
        let g = s3();
        let c = DifferentialCalculus::from_hat(g.clone(), &els(&g, &["a", "b", "c"])).unwrap();
        let coeffs: Vec<GroupFunction> =
            (0..3).map(|i| GroupFunction::from_i64(&[i, 2 * i - 1, 3, -i, 1, 0])).collect();
        let back = c.omega_to_theta(&c.theta_to_omega(&coeffs).unwrap()).unwrap();
        assert_eq!(back, coeffs);
        // theta^a = sum_h e_h omega^{ad(h) a}
        let a = g.element("a").unwrap();
        let theta_a = c.theta(a).unwrap();
        let om = c.theta_to_omega(&theta_a.coefficients()).unwrap();
        for h in 0..6 {
            let target = c.position(g.adjoint(h, a)).unwrap();
            for (p, f) in om.iter().enumerate() {
                assert_eq!(*f.at(h), int((p == target) as i64));
            }
        }
        let z = DifferentialCalculus::from_hat(g.clone(), &els(&g, &["a"])).unwrap();
        assert_eq!(z.omega(a), Err(Error::NotBicovariant));
    }

    #[test]
    fn dot_export() {
        let z3 = DifferentialCalculus::universal(FiniteGroup::cyclic(3));
        let dot = z3.to_dot();
        assert_eq!(dot.matches("dir=both").count(), 3);
        let g = s3();
        let one = DifferentialCalculus::from_hat(g.clone(), &els(&g, &["ab", "ba"])).unwrap();
        assert_eq!(one.to_dot().matches("dir=both").count(), 6);
        let t = DifferentialCalculus::from_hat(g, &[]).unwrap();
        assert!(!t.to_dot().contains("->"));
    }

    #[test]
    fn kernel_of_d_counts_components() {
        use crate::linalg::{kernel_basis, RationalMatrix};
        let g = s3();
        for c in enumerate_left_covariant(g.clone()).unwrap() {
            // matrix of f -> df on the delta basis
            let n = 6;
            let k = c.dim();
            let mut m = RationalMatrix::zeros(k * n, n);
            for y in 0..n {
                let df = c.differential(&GroupFunction::delta(n, y));
                for p in 0..k {
                    for x in 0..n {
                        m.set(p * n + x, y, df.coeff_at(p, x).clone());
                    }
                }
            }
            let comps = weak_components(n, &c.edges());
            assert_eq!(kernel_basis(&m).len(), comps, "{}", describe_hat(&c));
        }
    }

    fn weak_components(n: usize, edges: &[(usize, usize)]) -> usize {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(x, y) in edges {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            parent[a] = b;
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    }
}
