//! Tensor products of 1-forms and vector fields over the function algebra.
//!
//! A tensor with slots `s_1 .. s_r` is stored with its coefficients on the
//! left: `t = sum_I t_I x^{i_1} (x) .. (x) x^{i_r}` where a `Form` slot carries
//! `theta^g` and a `Field` slot carries `l_g`, both indexed by positions in
//! `hat`. Pushing a function `f` from the right through the basis word `x_I`
//! gives `x_I f = (R_{w_I} f) x_I`, with `w_I` the product of `g^-1` for form
//! slots and `g` for field slots.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::calculus::DifferentialCalculus;
use crate::error::{Error, Result};
use crate::function::GroupFunction;
use crate::linalg::Rational;

/// Kind of a tensor slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// A left-invariant 1-form `theta^g`.
    Form,
    /// A left-invariant vector field `l_g`.
    Field,
}

/// An element of a tensor product of copies of the 1-forms and the vector fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    calc: DifferentialCalculus,
    slots: Vec<Slot>,
    coeffs: Vec<Rational>,
}

pub type OneForm = Tensor;
pub type TensorField = Tensor;
pub type VectorField = Tensor;
pub type Metric = Tensor;

impl Tensor {
    pub fn zeros(calc: &DifferentialCalculus, slots: &[Slot]) -> Self {
        let len = calc.dim().pow(slots.len() as u32) * calc.n();
        Tensor { calc: calc.clone(), slots: slots.to_vec(), coeffs: vec![Rational::zero(); len] }
    }

    /// A function regarded as a rank 0 tensor.
    pub fn scalar(calc: &DifferentialCalculus, f: &GroupFunction) -> Self {
        Tensor { calc: calc.clone(), slots: Vec::new(), coeffs: f.values().to_vec() }
    }

    /// Tensor with left coefficient functions listed in multi-index order.
    pub fn from_functions(calc: &DifferentialCalculus, slots: &[Slot], fs: Vec<GroupFunction>) -> Result<Self> {
        let mut t = Self::zeros(calc, slots);
        if fs.len() != t.num_indices() {
            return Err(Error::DimensionMismatch { expected: t.num_indices(), got: fs.len() });
        }
        let n = calc.n();
        for (i, f) in fs.into_iter().enumerate() {
            if f.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: f.len() });
            }
            for (x, v) in f.values().iter().enumerate() {
                t.coeffs[i * n + x] = v.clone();
            }
        }
        Ok(t)
    }

    /// Tensor with right coefficient functions listed in multi-index order.
    pub fn from_right_functions(calc: &DifferentialCalculus, slots: &[Slot], fs: Vec<GroupFunction>) -> Result<Self> {
        let t = Self::from_functions(calc, slots, fs)?;
        let g = calc.group();
        let n = calc.n();
        let mut out = Self::zeros(calc, slots);
        for mi in 0..t.num_indices() {
            let w = t.shift(mi);
            for x in 0..n {
                out.coeffs[mi * n + x] = t.coeffs[mi * n + g.mul(x, w)].clone();
            }
        }
        Ok(out)
    }

    /// The 1-form `phi_g theta^g`.
    pub fn one_form(calc: &DifferentialCalculus, coeffs: Vec<GroupFunction>) -> Self {
        Self::from_functions(calc, &[Slot::Form], coeffs).expect("one coefficient per generator")
    }

    /// The vector field `l_g X^g`.
    pub fn vector_field(calc: &DifferentialCalculus, right_coeffs: Vec<GroupFunction>) -> Self {
        Self::from_right_functions(calc, &[Slot::Field], right_coeffs).expect("one coefficient per generator")
    }

    /// Basis word with unit coefficient.
    pub fn basis(calc: &DifferentialCalculus, slots: &[Slot], positions: &[usize]) -> Result<Self> {
        if positions.len() != slots.len() {
            return Err(Error::SlotMismatch);
        }
        if let Some(&p) = positions.iter().find(|&&p| p >= calc.dim()) {
            return Err(Error::DimensionMismatch { expected: calc.dim(), got: p + 1 });
        }
        let mut t = Self::zeros(calc, slots);
        let mi = t.index(positions);
        let n = calc.n();
        for x in 0..n {
            t.coeffs[mi * n + x] = Rational::one();
        }
        Ok(t)
    }

    /// Tensor with the same constant coefficient vector at every point.
    pub fn constant(calc: &DifferentialCalculus, slots: &[Slot], values: &[Rational]) -> Result<Self> {
        let mut t = Self::zeros(calc, slots);
        if values.len() != t.num_indices() {
            return Err(Error::DimensionMismatch { expected: t.num_indices(), got: values.len() });
        }
        let n = calc.n();
        for (mi, v) in values.iter().enumerate() {
            for x in 0..n {
                t.coeffs[mi * n + x] = v.clone();
            }
        }
        Ok(t)
    }

    pub fn calculus(&self) -> &DifferentialCalculus {
        &self.calc
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    /// Number of basis words.
    pub fn num_indices(&self) -> usize {
        self.calc.dim().pow(self.slots.len() as u32)
    }

    /// Multi-index of hat positions to flat index, first slot most significant.
    pub fn index(&self, positions: &[usize]) -> usize {
        positions.iter().fold(0, |acc, &p| acc * self.calc.dim() + p)
    }

    /// Flat index to multi-index.
    pub fn positions(&self, mut mi: usize) -> Vec<usize> {
        let k = self.calc.dim();
        let mut out = vec![0; self.rank()];
        for slot in (0..self.rank()).rev() {
            out[slot] = mi % k;
            mi /= k;
        }
        out
    }

    /// `w_I` with `x_I f = (R_{w_I} f) x_I`.
    pub fn shift(&self, mi: usize) -> usize {
        shift_of(&self.calc, &self.slots, &self.positions(mi))
    }

    /// Left coefficient of word `mi` at point `x`.
    pub fn coeff_at(&self, mi: usize, x: usize) -> &Rational {
        &self.coeffs[mi * self.calc.n() + x]
    }

    pub fn set_coeff(&mut self, mi: usize, x: usize, v: Rational) {
        let n = self.calc.n();
        self.coeffs[mi * n + x] = v;
    }

    /// Left coefficient function of the word with the given positions.
    pub fn coefficient(&self, positions: &[usize]) -> GroupFunction {
        self.function(self.index(positions))
    }

    /// Left coefficient function of word `mi`.
    pub fn function(&self, mi: usize) -> GroupFunction {
        let n = self.calc.n();
        GroupFunction::new(self.coeffs[mi * n..(mi + 1) * n].to_vec())
    }

    /// All left coefficient functions in multi-index order.
    pub fn coefficients(&self) -> Vec<GroupFunction> {
        (0..self.num_indices()).map(|mi| self.function(mi)).collect()
    }

    /// Right coefficient functions: `t = sum_I x_I t'_I`.
    pub fn right_coefficients(&self) -> Vec<GroupFunction> {
        let g = self.calc.group();
        let n = self.calc.n();
        (0..self.num_indices())
            .map(|mi| {
                let w = g.inv(self.shift(mi));
                GroupFunction::new((0..n).map(|x| self.coeffs[mi * n + g.mul(x, w)].clone()).collect())
            })
            .collect()
    }

    /// Raw coefficient storage, word-major.
    pub fn raw(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficients at a single point, one per word.
    pub fn fiber(&self, x: usize) -> Vec<Rational> {
        let n = self.calc.n();
        (0..self.num_indices()).map(|mi| self.coeffs[mi * n + x].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// All coefficient functions are constant.
    pub fn is_constant(&self) -> bool {
        let n = self.calc.n();
        self.coeffs.chunks(n.max(1)).all(|c| c.iter().all(|v| *v == c[0]))
    }

    /// Constant coefficient vector if every coefficient function is constant.
    pub fn constant_values(&self) -> Option<Vec<Rational>> {
        let n = self.calc.n();
        if !self.is_constant() || n == 0 {
            return None;
        }
        Some((0..self.num_indices()).map(|mi| self.coeffs[mi * n].clone()).collect())
    }

    fn check_same(&self, other: &Tensor) -> Result<()> {
        if self.calc != other.calc {
            return Err(Error::CalculusMismatch);
        }
        if self.slots != other.slots {
            return Err(Error::SlotMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &Tensor, f: impl Fn(&Rational, &Rational) -> Rational) -> Tensor {
        Tensor {
            calc: self.calc.clone(),
            slots: self.slots.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Tensor {
        Tensor {
            calc: self.calc.clone(),
            slots: self.slots.clone(),
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    /// `f t`.
    pub fn left_mul(&self, f: &GroupFunction) -> Tensor {
        let n = self.calc.n();
        let coeffs = self.coeffs.iter().enumerate().map(|(i, v)| v * f.at(i % n)).collect();
        Tensor { calc: self.calc.clone(), slots: self.slots.clone(), coeffs }
    }

    /// `t f`.
    pub fn right_mul(&self, f: &GroupFunction) -> Tensor {
        let g = self.calc.group();
        let n = self.calc.n();
        let mut out = self.clone();
        for mi in 0..self.num_indices() {
            let w = self.shift(mi);
            for x in 0..n {
                out.coeffs[mi * n + x] = &self.coeffs[mi * n + x] * f.at(g.mul(x, w));
            }
        }
        out
    }

    /// `self (x) other` over the function algebra.
    pub fn tensor(&self, other: &Tensor) -> Result<Tensor> {
        if self.calc != other.calc {
            return Err(Error::CalculusMismatch);
        }
        let g = self.calc.group();
        let n = self.calc.n();
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        let mut out = Tensor::zeros(&self.calc, &slots);
        let nb = other.num_indices();
        for i in 0..self.num_indices() {
            let w = self.shift(i);
            for x in 0..n {
                let a = &self.coeffs[i * n + x];
                if a.is_zero() {
                    continue;
                }
                let y = g.mul(x, w);
                for j in 0..nb {
                    let b = &other.coeffs[j * n + y];
                    if !b.is_zero() {
                        out.coeffs[(i * nb + j) * n + x] = a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Pairs slot `i` (a form) with slot `i + 1` (a field) via `<theta^g, l_h> = delta`.
    pub fn contract(&self, i: usize) -> Result<Tensor> {
        if i + 1 >= self.rank() || self.slots[i] != Slot::Form || self.slots[i + 1] != Slot::Field {
            return Err(Error::SlotMismatch);
        }
        let k = self.calc.dim();
        let n = self.calc.n();
        let mut slots = self.slots.clone();
        slots.drain(i..i + 2);
        let mut out = Tensor::zeros(&self.calc, &slots);
        let suffix = k.pow((self.rank() - i - 2) as u32);
        for mi in 0..self.num_indices() {
            let pre = mi / (suffix * k * k);
            let a = (mi / (suffix * k)) % k;
            let b = (mi / suffix) % k;
            if a != b {
                continue;
            }
            let target = pre * suffix + mi % suffix;
            for x in 0..n {
                let v = &self.coeffs[mi * n + x];
                if !v.is_zero() {
                    out.coeffs[target * n + x] += v;
                }
            }
        }
        Ok(out)
    }

    /// Applies a bimodule map on slots `i, i + 1` that sends basis words to basis words.
    pub fn permute_pair(
        &self,
        i: usize,
        new_slots: [Slot; 2],
        map: impl Fn(usize, usize) -> (usize, usize),
    ) -> Result<Tensor> {
        if i + 1 >= self.rank() {
            return Err(Error::SlotMismatch);
        }
        let k = self.calc.dim();
        let n = self.calc.n();
        let mut slots = self.slots.clone();
        slots[i] = new_slots[0];
        slots[i + 1] = new_slots[1];
        let mut out = Tensor::zeros(&self.calc, &slots);
        let suffix = k.pow((self.rank() - i - 2) as u32);
        for mi in 0..self.num_indices() {
            let pre = mi / (suffix * k * k);
            let a = (mi / (suffix * k)) % k;
            let b = (mi / suffix) % k;
            let (a2, b2) = map(a, b);
            let target = ((pre * k + a2) * k + b2) * suffix + mi % suffix;
            for x in 0..n {
                let v = &self.coeffs[mi * n + x];
                if !v.is_zero() {
                    out.coeffs[target * n + x] += v;
                }
            }
        }
        Ok(out)
    }

    /// Applies a bimodule map on slots `i, i + 1` given by its values on basis pairs.
    pub fn map_pair(&self, i: usize, map: impl Fn(usize, usize) -> Tensor) -> Result<Tensor> {
        if i + 1 >= self.rank() {
            return Err(Error::SlotMismatch);
        }
        let k = self.calc.dim();
        let n = self.calc.n();
        let g = self.calc.group();
        let images: Vec<Tensor> = (0..k * k).map(|p| map(p / k, p % k)).collect();
        let mid_slots = match images.first() {
            Some(t) => t.slots.clone(),
            None => Vec::new(),
        };
        if images.iter().any(|t| t.slots != mid_slots || t.calc != self.calc) {
            return Err(Error::SlotMismatch);
        }
        let mut slots = self.slots[..i].to_vec();
        slots.extend_from_slice(&mid_slots);
        slots.extend_from_slice(&self.slots[i + 2..]);
        let mut out = Tensor::zeros(&self.calc, &slots);
        let suffix = k.pow((self.rank() - i - 2) as u32);
        let mid = k.pow(mid_slots.len() as u32);
        for mi in 0..self.num_indices() {
            let pre = mi / (suffix * k * k);
            let ab = (mi / suffix) % (k * k);
            let suf = mi % suffix;
            let img = &images[ab];
            let w = shift_of(&self.calc, &self.slots[..i], &self.positions(mi)[..i]);
            for x in 0..n {
                let c = &self.coeffs[mi * n + x];
                if c.is_zero() {
                    continue;
                }
                let y = g.mul(x, w);
                for m in 0..mid {
                    let v = &img.coeffs[m * n + y];
                    if !v.is_zero() {
                        let target = (pre * mid + m) * suffix + suf;
                        out.coeffs[target * n + x] += c * v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reorders nothing but relabels slot kinds; used for identifications such as 2-forms.
    pub fn with_slots(mut self, slots: &[Slot]) -> Result<Tensor> {
        if slots.len() != self.slots.len() {
            return Err(Error::SlotMismatch);
        }
        self.slots = slots.to_vec();
        Ok(self)
    }
}

/// `w_I` for a word with the given slot kinds and positions.
pub fn shift_of(calc: &DifferentialCalculus, slots: &[Slot], positions: &[usize]) -> usize {
    let g = calc.group();
    let hat = calc.hat();
    slots.iter().zip(positions).fold(g.identity(), |acc, (s, &p)| {
        let a = hat[p];
        let step = match s {
            Slot::Form => g.inv(a),
            Slot::Field => a,
        };
        g.mul(acc, step)
    })
}

impl Add for &Tensor {
    type Output = Tensor;
    fn add(self, o: &Tensor) -> Tensor {
        self.try_add(o).expect("compatible tensors")
    }
}

impl Sub for &Tensor {
    type Output = Tensor;
    fn sub(self, o: &Tensor) -> Tensor {
        self.try_sub(o).expect("compatible tensors")
    }
}

impl Neg for &Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        Tensor { calc: self.calc.clone(), slots: self.slots.clone(), coeffs: self.coeffs.iter().map(|v| -v).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use alloc::sync::Arc;

    fn s3_universal() -> DifferentialCalculus {
        DifferentialCalculus::universal(Arc::new(FiniteGroup::symmetric(3).unwrap()))
    }

    #[test]
    fn tensor_of_basis_forms() {
        let c = s3_universal();
        let t = c.theta(1).unwrap().tensor(&c.theta(2).unwrap()).unwrap();
        assert_eq!(t, Tensor::basis(&c, &[Slot::Form, Slot::Form], &[0, 1]).unwrap());
    }

    #[test]
    fn tensor_moves_coefficients_left() {
        let c = s3_universal();
        let g = c.group();
        let f = GroupFunction::from_i64(&[1, 2, 3, 4, 5, 6]);
        let left = c.theta(3).unwrap().left_mul(&f).tensor(&c.theta(4).unwrap()).unwrap();
        assert_eq!(left.coefficient(&[2, 3]), f);
        let right = c.theta(3).unwrap().tensor(&c.theta(4).unwrap().left_mul(&f)).unwrap();
        assert_eq!(right.coefficient(&[2, 3]), f.right_translate(g, g.inv(3)));
    }

    #[test]
    fn module_laws() {
        let c = s3_universal();
        let f = GroupFunction::from_i64(&[2, -1, 0, 3, 1, 5]);
        let h = GroupFunction::from_i64(&[0, 1, 1, -2, 4, 1]);
        let a = c.differential(&f);
        let b = c.differential(&h).right_mul(&f);
        // (a f) (x) b = a (x) (f b)
        assert_eq!(a.right_mul(&h).tensor(&b).unwrap(), a.tensor(&b.left_mul(&h)).unwrap());
        // (a (x) b) f = a (x) (b f)
        assert_eq!(a.tensor(&b).unwrap().right_mul(&h), a.tensor(&b.right_mul(&h)).unwrap());
        // right multiplication is associative
        assert_eq!(a.right_mul(&f).right_mul(&h), a.right_mul(&(&f * &h)));
    }

    #[test]
    fn right_coefficients_round_trip() {
        let c = s3_universal();
        let fs: Vec<GroupFunction> = (0..5).map(|i| GroupFunction::from_i64(&[i, 1, -i, 2, 0, 7])).collect();
        let x = Tensor::vector_field(&c, fs.clone());
        assert_eq!(x.right_coefficients(), fs);
        // l_g f = (R_g f) l_g
        let f = GroupFunction::from_i64(&[1, 2, 3, 4, 5, 6]);
        let l = Tensor::basis(&c, &[Slot::Field], &[2]).unwrap();
        assert_eq!(l.right_mul(&f).coefficient(&[2]), f.right_translate(c.group(), c.hat()[2]));
    }

    #[test]
    fn contraction_of_dual_bases() {
        let c = s3_universal();
        for a in 0..5 {
            for b in 0..5 {
                let t = c.theta(c.hat()[a]).unwrap().tensor(&Tensor::basis(&c, &[Slot::Field], &[b]).unwrap()).unwrap();
                let s = t.contract(0).unwrap();
                assert_eq!(s.function(0), GroupFunction::constant(6, Rational::from_integer(((a == b) as i64).into())));
            }
        }
    }

    #[test]
    fn map_pair_agrees_with_permute_pair() {
        let c = s3_universal();
        let f = GroupFunction::from_i64(&[3, 0, -1, 2, 2, 1]);
        let t = c.differential(&f).tensor(&c.rho().right_mul(&f)).unwrap().tensor(&c.differential(&f)).unwrap();
        let swap = |a: usize, b: usize| (b, a);
        let direct = t.permute_pair(1, [Slot::Form, Slot::Form], swap).unwrap();
        let general = t.map_pair(1, |a, b| Tensor::basis(&c, &[Slot::Form, Slot::Form], &[b, a]).unwrap()).unwrap();
        assert_eq!(direct, general);
    }
}
