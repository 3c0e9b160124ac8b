//! Two-sided connections `nabla: Gamma -> (1-forms (x) Gamma) + (Gamma (x) 1-forms)` on the 1-forms,
//! obeying `nabla(f g f') = df (x) g f' + f g (x) df' + f (nabla g) f'`.
//!
//! The two components are stored separately as rank 2 form tensors on the basis
//! forms: `left[b]` has the module factor in slot 1, `right[b]` in slot 0.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::braid::{d_raw, SigmaOperator};
use crate::calculus::DifferentialCalculus;
use crate::error::{Error, Result};
use crate::function::GroupFunction;
use crate::linalg::{solve_affine, AffineSolution, Rational, RationalMatrix};
use crate::tensor::{Slot, Tensor};

const FF: [Slot; 2] = [Slot::Form, Slot::Form];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSidedConnection {
    calc: DifferentialCalculus,
    left: Vec<Tensor>,
    right: Vec<Tensor>,
}

/// The three components of the curvature, form slots antisymmetrized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSidedCurvature {
    /// 2-forms (x) module, module factor in slot 2.
    pub left: Tensor,
    /// 1-forms (x) module (x) 1-forms, module factor in slot 1.
    pub middle: Tensor,
    /// module (x) 2-forms, module factor in slot 0.
    pub right: Tensor,
}

impl TwoSidedConnection {
    /// Components on each basis form `theta^b`.
    pub fn from_parts(calc: &DifferentialCalculus, left: Vec<Tensor>, right: Vec<Tensor>) -> Result<Self> {
        let k = calc.dim();
        for parts in [&left, &right] {
            if parts.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: parts.len() });
            }
            if parts.iter().any(|t| t.calculus() != calc) {
                return Err(Error::CalculusMismatch);
            }
            if parts.iter().any(|t| t.slots() != FF) {
                return Err(Error::SlotMismatch);
            }
        }
        Ok(TwoSidedConnection { calc: calc.clone(), left, right })
    }

    /// `nabla phi = rho (x) phi - phi (x) rho`.
    pub fn inner(calc: &DifferentialCalculus) -> Self {
        let rho = calc.rho();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for b in 0..calc.dim() {
            let th = Tensor::basis(calc, &[Slot::Form], &[b]).expect("position in range");
            left.push(rho.tensor(&th).expect("same calculus"));
            right.push(-&th.tensor(&rho).expect("same calculus"));
        }
        TwoSidedConnection { calc: calc.clone(), left, right }
    }

    pub fn calculus(&self) -> &DifferentialCalculus {
        &self.calc
    }

    /// Both components of `nabla phi` for `phi = c_b theta^b`:
    /// `dc_b (x) theta^b + c_b L(theta^b)` and `c_b R(theta^b)`.
    pub fn apply(&self, phi: &Tensor) -> Result<(Tensor, Tensor)> {
        if phi.calculus() != &self.calc {
            return Err(Error::CalculusMismatch);
        }
        if phi.slots() != [Slot::Form] {
            return Err(Error::SlotMismatch);
        }
        let mut l = Tensor::zeros(&self.calc, &FF);
        let mut r = Tensor::zeros(&self.calc, &FF);
        for (b, c) in phi.coefficients().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let th = Tensor::basis(&self.calc, &[Slot::Form], &[b])?;
            l = &(&l + &self.calc.differential(c).tensor(&th)?) + &self.left[b].left_mul(c);
            r = &r + &self.right[b].left_mul(c);
        }
        Ok((l, r))
    }

    /// Residual of the right half of the Leibniz rule on `theta^b e_z`; the left half
    /// holds by construction.
    fn right_defects(&self) -> Result<Vec<Rational>> {
        let n = self.calc.n();
        let mut out = Vec::new();
        for b in 0..self.calc.dim() {
            let th = Tensor::basis(&self.calc, &[Slot::Form], &[b])?;
            for z in 0..n {
                let f = GroupFunction::delta(n, z);
                let (l, r) = self.apply(&th.right_mul(&f))?;
                let dl = &l - &self.left[b].right_mul(&f);
                let dr = &(&r - &self.right[b].right_mul(&f)) - &th.tensor(&self.calc.differential(&f))?;
                out.extend_from_slice(dl.raw());
                out.extend_from_slice(dr.raw());
            }
        }
        Ok(out)
    }

    /// The two-sided Leibniz rule for all basis forms and delta functions `f, f'`.
    pub fn check_leibniz(&self) -> Result<bool> {
        let n = self.calc.n();
        for b in 0..self.calc.dim() {
            let th = Tensor::basis(&self.calc, &[Slot::Form], &[b])?;
            for z in 0..n {
                let f = GroupFunction::delta(n, z);
                let df = self.calc.differential(&f);
                for w in 0..n {
                    let fp = GroupFunction::delta(n, w);
                    let dfp = self.calc.differential(&fp);
                    let (l, r) = self.apply(&th.left_mul(&f).right_mul(&fp))?;
                    let el = &df.tensor(&th.right_mul(&fp))? + &self.left[b].left_mul(&f).right_mul(&fp);
                    let er = &th.left_mul(&f).tensor(&dfp)? + &self.right[b].left_mul(&f).right_mul(&fp);
                    if l != el || r != er {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// `nabla^2 gamma` through the extension
    /// `nabla(phi g phi') = (d phi) g phi' + (-1)^r phi (nabla g) phi' + (-1)^(r+s) phi g d phi'`.
    pub fn curvature(&self, gamma: &Tensor) -> Result<TwoSidedCurvature> {
        let sigma = SigmaOperator::new(&self.calc)?;
        let k = self.calc.dim();
        let (l, r) = self.apply(gamma)?;
        let f3 = [Slot::Form; 3];
        let mut left = Tensor::zeros(&self.calc, &f3);
        let mut middle = Tensor::zeros(&self.calc, &f3);
        let mut right = Tensor::zeros(&self.calc, &f3);
        for b in 0..k {
            let th = Tensor::basis(&self.calc, &[Slot::Form], &[b])?;
            // l = alpha_b (x) theta^b, r = gamma'_b (x) theta^b
            let alpha = Tensor::one_form(&self.calc, (0..k).map(|a| l.function(a * k + b)).collect());
            let gp = Tensor::one_form(&self.calc, (0..k).map(|a| r.function(a * k + b)).collect());
            left = &(&left + &d_raw(&alpha)?.tensor(&th)?) - &alpha.tensor(&self.left[b])?;
            middle = &middle - &alpha.tensor(&self.right[b])?;
            let (lg, rg) = self.apply(&gp)?;
            middle = &middle + &lg.tensor(&th)?;
            right = &(&right + &rg.tensor(&th)?) + &gp.tensor(&d_raw(&th)?)?;
        }
        Ok(TwoSidedCurvature { left: sigma.antisymmetrize(&left, 0)?, middle, right: sigma.antisymmetrize(&right, 1)? })
    }

    /// `nabla^2(f gamma f') = f (nabla^2 gamma) f'` for basis forms and delta functions.
    pub fn curvature_is_bimodule_map(&self) -> Result<bool> {
        let n = self.calc.n();
        for b in 0..self.calc.dim() {
            let th = Tensor::basis(&self.calc, &[Slot::Form], &[b])?;
            let base = self.curvature(&th)?;
            for z in 0..n {
                let f = GroupFunction::delta(n, z);
                for w in 0..n {
                    let fp = GroupFunction::delta(n, w);
                    let c = self.curvature(&th.left_mul(&f).right_mul(&fp))?;
                    let sides = |t: &Tensor| t.left_mul(&f).right_mul(&fp);
                    if c.left != sides(&base.left) || c.middle != sides(&base.middle) || c.right != sides(&base.right) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// All two-sided connections as an affine space over the coefficient values of
/// `left[b]` then `right[b]`, word-major with points fastest.
pub fn two_sided_space(calc: &DifferentialCalculus) -> Result<AffineSolution> {
    let k = calc.dim();
    let n = calc.n();
    let per = k * k * k * n;
    let build = |values: &[Rational]| -> Result<TwoSidedConnection> {
        let parts = |offset: usize| -> Result<Vec<Tensor>> {
            (0..k)
                .map(|b| {
                    let start = offset + b * k * k * n;
                    let fs = values[start..start + k * k * n].chunks(n.max(1)).map(|c| GroupFunction::new(c.to_vec()));
                    Tensor::from_functions(calc, &FF, fs.collect())
                })
                .collect()
        };
        TwoSidedConnection::from_parts(calc, parts(0)?, parts(per)?)
    };
    let zero = vec![Rational::zero(); 2 * per];
    let base = build(&zero)?.right_defects()?;
    let mut m = RationalMatrix::zeros(base.len(), 2 * per);
    for u in 0..2 * per {
        let mut values = zero.clone();
        values[u] = Rational::one();
        let col = build(&values)?.right_defects()?;
        for (r, (a, b)) in col.iter().zip(&base).enumerate() {
            if a != b {
                m.set(r, u, a - b);
            }
        }
    }
    let rhs: Vec<Rational> = base.iter().map(|v| -v).collect();
    solve_affine(&m, &rhs)
}

/// Coefficient vector of a two-sided connection in the layout of [`two_sided_space`].
pub fn two_sided_values(conn: &TwoSidedConnection) -> Vec<Rational> {
    let mut out = Vec::new();
    for t in conn.left.iter().chain(&conn.right) {
        out.extend_from_slice(t.raw());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::bimodule_hom_dimension;
    use crate::group::FiniteGroup;
    use crate::linalg::in_span;

    fn omega2() -> DifferentialCalculus {
        let g = FiniteGroup::symmetric(3).unwrap();
        let hat: Vec<usize> = ["a", "b", "c"].iter().map(|n| g.element(n).unwrap()).collect();
        DifferentialCalculus::from_hat(g, &hat).unwrap()
    }

    #[test]
    fn inner_connection_is_two_sided() {
        let c = omega2();
        let conn = TwoSidedConnection::inner(&c);
        assert!(conn.check_leibniz().unwrap());
        assert!(conn.curvature_is_bimodule_map().unwrap());
    }

    #[test]
    fn unique_on_transposition_calculus() {
        let c = omega2();
        let space = two_sided_space(&c).unwrap();
        assert!(space.kernel.is_empty());
        assert_eq!(space.particular, two_sided_values(&TwoSidedConnection::inner(&c)));
    }

    #[test]
    fn space_dimension_is_twice_the_homomorphisms() {
        let c = DifferentialCalculus::universal(FiniteGroup::cyclic(3));
        let space = two_sided_space(&c).unwrap();
        assert_eq!(space.kernel.len(), 2 * bimodule_hom_dimension(&c));
        let diff: Vec<Rational> = two_sided_values(&TwoSidedConnection::inner(&c))
            .iter()
            .zip(&space.particular)
            .map(|(a, b)| a - b)
            .collect();
        assert!(in_span(&space.kernel, &diff));
    }
}
