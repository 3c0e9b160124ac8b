//! The algebra of rational functions on a finite group.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::group::FiniteGroup;
use crate::linalg::{int, Rational};

/// A function G -> Q stored densely in element order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupFunction {
    values: Vec<Rational>,
}

impl GroupFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        GroupFunction { values }
    }

    pub fn zero(n: usize) -> Self {
        GroupFunction { values: vec![Rational::zero(); n] }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        GroupFunction { values: vec![c; n] }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    /// The indicator `e_g`.
    pub fn delta(n: usize, g: usize) -> Self {
        let mut f = Self::zero(n);
        f.values[g] = Rational::one();
        f
    }

    pub fn from_i64(values: &[i64]) -> Self {
        GroupFunction { values: values.iter().map(|&v| int(v)).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn at(&self, g: usize) -> &Rational {
        &self.values[g]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// The common value if the function is constant.
    pub fn constant_value(&self) -> Option<&Rational> {
        let first = self.values.first()?;
        self.values.iter().all(|v| v == first).then_some(first)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GroupFunction { values: self.values.iter().map(|v| v * c).collect() }
    }

    /// `(R_g f)(h) = f(hg)`.
    pub fn right_translate(&self, group: &FiniteGroup, g: usize) -> Self {
        GroupFunction { values: (0..group.order()).map(|h| self.values[group.mul(h, g)].clone()).collect() }
    }

    /// `(L_g f)(h) = f(gh)`.
    pub fn left_translate(&self, group: &FiniteGroup, g: usize) -> Self {
        GroupFunction { values: (0..group.order()).map(|h| self.values[group.mul(g, h)].clone()).collect() }
    }

    /// `l_g f = R_{g^-1} f - f`.
    pub fn ell(&self, group: &FiniteGroup, g: usize) -> Self {
        &self.right_translate(group, group.inv(g)) - self
    }

    /// `r_g f = L_{g^-1} f - f`.
    pub fn r_op(&self, group: &FiniteGroup, g: usize) -> Self {
        &self.left_translate(group, group.inv(g)) - self
    }
}

impl Add for &GroupFunction {
    type Output = GroupFunction;
    fn add(self, o: &GroupFunction) -> GroupFunction {
        GroupFunction { values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &GroupFunction {
    type Output = GroupFunction;
    fn sub(self, o: &GroupFunction) -> GroupFunction {
        GroupFunction { values: self.values.iter().zip(&o.values).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &GroupFunction {
    type Output = GroupFunction;
    fn mul(self, o: &GroupFunction) -> GroupFunction {
        GroupFunction { values: self.values.iter().zip(&o.values).map(|(a, b)| a * b).collect() }
    }
}

impl Neg for &GroupFunction {
    type Output = GroupFunction;
    fn neg(self) -> GroupFunction {
        GroupFunction { values: self.values.iter().map(|a| -a).collect() }
    }
}

/// Structure constant `C^h_{g,g'} = -d(h,g) - d(h,g') + d(h,gg')`.
pub fn structure_constant(group: &FiniteGroup, h: usize, g: usize, gp: usize) -> i64 {
    -((h == g) as i64) - ((h == gp) as i64) + ((h == group.mul(g, gp)) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_examples() {
        let n = 6;
        let e1 = GroupFunction::delta(n, 1);
        let e2 = GroupFunction::delta(n, 2);
        assert!((&e1 * &e2).is_zero());
        assert_eq!(&e1 * &e1, e1);
        let mut sum = GroupFunction::zero(n);
        for g in 0..n {
            sum = &sum + &GroupFunction::delta(n, g);
        }
        assert_eq!(sum, GroupFunction::one(n));
        assert_eq!(*e1.at(1), Rational::one());
    }

    #[test]
    fn translations_compose() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let f = GroupFunction::from_i64(&[3, -1, 4, 1, -5, 9]);
        assert_eq!(f.left_translate(&g, 0), f);
        assert_eq!(f.right_translate(&g, 0), f);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(f.left_translate(&g, b).left_translate(&g, a), f.left_translate(&g, g.mul(b, a)));
                assert_eq!(f.right_translate(&g, b).right_translate(&g, a), f.right_translate(&g, g.mul(a, b)));
            }
        }
    }

    #[test]
    fn ell_examples() {
        let z2 = FiniteGroup::cyclic(2);
        assert!(GroupFunction::one(2).ell(&z2, 1).is_zero());
        let e0 = GroupFunction::delta(2, 0);
        assert_eq!(e0.ell(&z2, 1), GroupFunction::from_i64(&[-1, 1]));
    }

    #[test]
    fn ell_composition_law() {
        // l_g l_g' = sum_h C^h_{g',g} l_h
        let g = FiniteGroup::symmetric(3).unwrap();
        for y in 0..6 {
            let f = GroupFunction::delta(6, y);
            for a in 0..6 {
                for b in 0..6 {
                    let lhs = f.ell(&g, b).ell(&g, a);
                    let mut rhs = GroupFunction::zero(6);
                    for h in 0..6 {
                        let c = structure_constant(&g, h, b, a);
                        if c != 0 {
                            rhs = &rhs + &f.ell(&g, h).scale(&int(c));
                        }
                    }
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
