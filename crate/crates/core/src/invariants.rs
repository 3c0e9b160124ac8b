//! Invariant and (anti)symmetric tensor fields in the tensor square of the 1-forms.
//!
//! Solutions are computed on the constant fiber, a coefficient vector
//! `alpha_{g,g'}` in pair order `p * k + q`. Since the defining operators are
//! bimodule maps given by permutations of basis words, the function-valued
//! solutions are exactly the fiber solutions with free function coefficients.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::braid::SigmaOperator;
use crate::calculus::DifferentialCalculus;
use crate::error::{Error, Result};
use crate::group::orbits;
use crate::linalg::{image_basis, in_span, kernel_basis, rref, span_basis, Rational, RationalMatrix};
use crate::tensor::{Slot, Tensor};

/// Symmetry conditions relative to the braid operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryKind {
    /// Fixed by `sigma`, the kernel of `A`.
    StrongSymmetric,
    /// Negated by `sigma`, the kernel of `S`.
    StrongAntisymmetric,
    /// The image of `S`.
    WeakSymmetric,
    /// The image of `A`.
    WeakAntisymmetric,
}

impl SymmetryKind {
    pub const ALL: [SymmetryKind; 4] = [
        SymmetryKind::StrongSymmetric,
        SymmetryKind::StrongAntisymmetric,
        SymmetryKind::WeakSymmetric,
        SymmetryKind::WeakAntisymmetric,
    ];

    /// Short name: `s-sym`, `s-antisym`, `w-sym` or `w-antisym`.
    pub fn name(self) -> &'static str {
        match self {
            SymmetryKind::StrongSymmetric => "s-sym",
            SymmetryKind::StrongAntisymmetric => "s-antisym",
            SymmetryKind::WeakSymmetric => "w-sym",
            SymmetryKind::WeakAntisymmetric => "w-antisym",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// What a solution space solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Symmetry(SymmetryKind),
    BiInvariant,
}

/// A subspace of constant coefficient vectors with an echelonized basis.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    calc: DifferentialCalculus,
    kind: SpaceKind,
    basis: Vec<Vec<Rational>>,
}

impl SolutionSpace {
    pub fn calculus(&self) -> &DifferentialCalculus {
        &self.calc
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Echelonized basis vectors in pair order.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Basis elements as constant tensors.
    pub fn tensors(&self) -> Vec<Tensor> {
        self.basis
            .iter()
            .map(|v| Tensor::constant(&self.calc, &[Slot::Form, Slot::Form], v).expect("fiber length"))
            .collect()
    }

    pub fn contains(&self, values: &[Rational]) -> bool {
        values.len() == self.calc.dim().pow(2) && in_span(&self.basis, values)
    }

    /// Re-tests every basis vector against the defining condition.
    pub fn verify(&self) -> Result<bool> {
        let sigma = SigmaOperator::new(&self.calc)?;
        let (a, s) = sigma.a_s_matrices();
        let ok = match self.kind {
            SpaceKind::Symmetry(SymmetryKind::StrongSymmetric) => self.basis.iter().all(|v| is_zero(&a.mul_vec(v))),
            SpaceKind::Symmetry(SymmetryKind::StrongAntisymmetric) => self.basis.iter().all(|v| is_zero(&s.mul_vec(v))),
            SpaceKind::Symmetry(SymmetryKind::WeakSymmetric) => {
                let im = image_basis(&s);
                self.basis.iter().all(|v| in_span(&im, v))
            }
            SpaceKind::Symmetry(SymmetryKind::WeakAntisymmetric) => {
                let im = image_basis(&a);
                self.basis.iter().all(|v| in_span(&im, v))
            }
            SpaceKind::BiInvariant => {
                let k = self.calc.dim();
                let g = self.calc.group();
                let hat = self.calc.hat();
                let pos = |x: usize| self.calc.position(x).expect("ad-closed");
                self.basis.iter().all(|v| {
                    (0..g.order()).all(|h| {
                        (0..k * k).all(|i| {
                            let (p, q) = (i / k, i % k);
                            v[pos(g.adjoint(h, hat[p])) * k + pos(g.adjoint(h, hat[q]))] == v[i]
                        })
                    })
                })
            }
        };
        Ok(ok)
    }
}

fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Tensors of the given symmetry kind.
pub fn solve_symmetry(calc: &DifferentialCalculus, kind: SymmetryKind) -> Result<SolutionSpace> {
    let sigma = SigmaOperator::new(calc)?;
    let (a, s) = sigma.a_s_matrices();
    let n = calc.dim().pow(2);
    let vectors = match kind {
        SymmetryKind::StrongSymmetric => kernel_basis(&a),
        SymmetryKind::StrongAntisymmetric => kernel_basis(&s),
        SymmetryKind::WeakSymmetric => image_basis(&s),
        SymmetryKind::WeakAntisymmetric => image_basis(&a),
    };
    Ok(SolutionSpace { calc: calc.clone(), kind: SpaceKind::Symmetry(kind), basis: span_basis(n, &vectors) })
}

/// Constant tensors invariant under the diagonal adjoint action, one parameter per orbit of pairs.
pub fn solve_bi_invariant(calc: &DifferentialCalculus) -> Result<SolutionSpace> {
    calc.require_bicovariant()?;
    let g = calc.group();
    let k = calc.dim();
    let hat = calc.hat();
    let pos = |x: usize| calc.position(x).expect("ad-closed");
    let blocks = orbits(g, k * k, |h, i| pos(g.adjoint(h, hat[i / k])) * k + pos(g.adjoint(h, hat[i % k])))?;
    let vectors: Vec<Vec<Rational>> = blocks
        .iter()
        .map(|b| {
            let mut v = vec![Rational::zero(); k * k];
            for &i in b {
                v[i] = Rational::one();
            }
            v
        })
        .collect();
    Ok(SolutionSpace { calc: calc.clone(), kind: SpaceKind::BiInvariant, basis: span_basis(k * k, &vectors) })
}

/// Cell expressions of a solution space in free parameters.
///
/// Free parameters are the values of the cells where the parameters first occur in
/// row-major order of the displayed matrix; every cell is a linear form in them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMatrix {
    /// Hat positions labelling rows and columns.
    pub order: Vec<usize>,
    /// Displayed `(row, column)` of each free parameter.
    pub params: Vec<(usize, usize)>,
    /// Row-major cells, each a coefficient vector over the parameters.
    pub cells: Vec<Vec<Rational>>,
}

impl PatternMatrix {
    pub fn size(&self) -> usize {
        self.order.len()
    }

    /// Coefficients of the displayed cell `(r, c)`.
    pub fn entry(&self, r: usize, c: usize) -> &[Rational] {
        &self.cells[r * self.size() + c]
    }

    /// The cell as text, parameters named `p1, p2, ..`.
    pub fn render_entry(&self, r: usize, c: usize) -> String {
        render_linear(self.entry(r, c))
    }
}

fn render_linear(coeffs: &[Rational]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = *c < Rational::zero();
        let mag = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            let _ = write!(out, "{}*", mag);
        }
        let _ = write!(out, "p{}", i + 1);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for PatternMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.size();
        let texts: Vec<String> = (0..m * m).map(|i| self.render_entry(i / m, i % m)).collect();
        let width = texts.iter().map(|t| t.chars().count()).max().unwrap_or(1);
        for r in 0..m {
            let row: Vec<String> = (0..m).map(|c| alloc::format!("{:>width$}", texts[r * m + c])).collect();
            writeln!(f, "{}", row.join("  "))?;
        }
        Ok(())
    }
}

/// Pattern of a space with rows and columns in the given order of hat positions
/// (all positions in increasing order when `None`).
pub fn pattern_matrix(space: &SolutionSpace, order: Option<&[usize]>) -> Result<PatternMatrix> {
    let k = space.calc.dim();
    let order: Vec<usize> = match order {
        Some(o) => o.to_vec(),
        None => (0..k).collect(),
    };
    let mut sorted = order.clone();
    sorted.sort_unstable();
    if sorted != (0..k).collect::<Vec<_>>() {
        return Err(Error::DimensionMismatch { expected: k, got: order.len() });
    }
    let m = k * k;
    // columns permuted to displayed row-major order
    let displayed = |d: usize| order[d / k] * k + order[d % k];
    let mut mat = RationalMatrix::zeros(0, m);
    for v in &space.basis {
        mat.push_row((0..m).map(|d| v[displayed(d)].clone()).collect());
    }
    let red = rref(&mat);
    let r = red.rank();
    let params = red.pivots.iter().map(|&d| (d / k, d % k)).collect();
    let cells = (0..m).map(|d| (0..r).map(|i| red.matrix.get(i, d).clone()).collect()).collect();
    Ok(PatternMatrix { order, params, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn s3_universal_dimensions() {
        let c = DifferentialCalculus::universal(FiniteGroup::symmetric(3).unwrap());
        let dims: Vec<usize> = SymmetryKind::ALL.iter().map(|&k| solve_symmetry(&c, k).unwrap().dim()).collect();
        assert_eq!(dims, vec![11, 4, 21, 14]);
        for k in SymmetryKind::ALL {
            assert!(solve_symmetry(&c, k).unwrap().verify().unwrap());
        }
        let bi = solve_bi_invariant(&c).unwrap();
        assert_eq!(bi.dim(), 6);
        assert!(bi.verify().unwrap());
    }

    #[test]
    fn abelian_cases() {
        let c = DifferentialCalculus::universal(FiniteGroup::cyclic(4));
        assert_eq!(solve_symmetry(&c, SymmetryKind::StrongSymmetric).unwrap().dim(), 6);
        assert_eq!(solve_bi_invariant(&c).unwrap().dim(), 9);
    }

    #[test]
    fn pattern_of_trivial_calculus_is_empty() {
        let c = DifferentialCalculus::from_hat(FiniteGroup::cyclic(3), &[]).unwrap();
        let p = pattern_matrix(&solve_symmetry(&c, SymmetryKind::StrongSymmetric).unwrap(), None).unwrap();
        assert_eq!(p.size(), 0);
        assert!(p.params.is_empty());
    }

    #[test]
    fn pattern_rendering() {
        let c = DifferentialCalculus::universal(FiniteGroup::cyclic(3));
        let p = pattern_matrix(&solve_symmetry(&c, SymmetryKind::StrongAntisymmetric).unwrap(), None).unwrap();
        assert_eq!(p.render_entry(0, 0), "0");
        assert_eq!(p.render_entry(0, 1), "p1");
        assert_eq!(p.render_entry(1, 0), "-p1");
    }
}
