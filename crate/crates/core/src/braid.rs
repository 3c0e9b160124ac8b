//! The braid operator `sigma(theta^g (x) theta^g') = theta^{ad(g^-1) g'} (x) theta^g`,
//! symmetrizers, 2-forms and the exterior derivative.
//!
//! 2-forms are realized as the image of `A = (id - sigma) / 2`. Inside each
//! sigma-cycle of basis words the wedge words `A(theta^p (x) theta^q)` sum to
//! zero, so the words other than the largest one in the cycle form a basis.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::calculus::DifferentialCalculus;
use crate::error::{Error, Result};
use crate::function::GroupFunction;
use crate::group::FiniteGroup;
use crate::linalg::{frac, image_basis, int, kernel_basis, Rational, RationalMatrix};
use crate::tensor::{Slot, Tensor};

/// Sigma as a permutation of pairs of generator positions, `p * k + q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaOperator {
    calc: DifferentialCalculus,
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

/// Bases of the four subspaces of the constant fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub ker_a: Vec<Vec<Rational>>,
    pub im_a: Vec<Vec<Rational>>,
    pub ker_s: Vec<Vec<Rational>>,
    pub im_s: Vec<Vec<Rational>>,
}

/// Symmetry flags of a tensor in the two form slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub s_symmetric: bool,
    pub s_antisymmetric: bool,
    pub w_symmetric: bool,
    pub w_antisymmetric: bool,
}

impl SigmaOperator {
    pub fn new(calc: &DifferentialCalculus) -> Result<Self> {
        calc.require_bicovariant()?;
        let g = calc.group();
        let k = calc.dim();
        let hat = calc.hat();
        let mut perm = vec![0; k * k];
        let mut inverse = vec![0; k * k];
        for p in 0..k {
            for q in 0..k {
                let a = calc.position(g.adjoint(g.inv(hat[p]), hat[q])).expect("ad-closed");
                perm[p * k + q] = a * k + p;
                inverse[a * k + p] = p * k + q;
            }
        }
        Ok(SigmaOperator { calc: calc.clone(), perm, inverse })
    }

    pub fn calculus(&self) -> &DifferentialCalculus {
        &self.calc
    }

    /// The permutation of flat pair indices.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Image of the pair of positions `(p, q)` under `sigma^power`.
    pub fn image(&self, p: usize, q: usize, power: i64) -> (usize, usize) {
        let k = self.calc.dim();
        let mut i = p * k + q;
        let table = if power >= 0 { &self.perm } else { &self.inverse };
        for _ in 0..power.unsigned_abs() {
            i = table[i];
        }
        (i / k, i % k)
    }

    /// `sigma^power` as a permutation, reduced modulo the order.
    pub fn power_permutation(&self, power: i64) -> Vec<usize> {
        let m = self.order() as i64;
        let e = power.rem_euclid(m);
        (0..self.perm.len())
            .map(|i| {
                let mut j = i;
                for _ in 0..e {
                    j = self.perm[j];
                }
                j
            })
            .collect()
    }

    /// Applies `sigma^power` on form slots `slot, slot + 1`.
    pub fn apply(&self, t: &Tensor, slot: usize, power: i64) -> Result<Tensor> {
        self.check(t, slot, 2)?;
        let k = self.calc.dim();
        let p = self.power_permutation(power);
        t.permute_pair(slot, [Slot::Form, Slot::Form], |a, b| {
            let i = p[a * k + b];
            (i / k, i % k)
        })
    }

    fn check(&self, t: &Tensor, slot: usize, width: usize) -> Result<()> {
        if *t.calculus() != self.calc {
            return Err(Error::CalculusMismatch);
        }
        if slot + width > t.rank() || t.slots()[slot..slot + width].iter().any(|s| *s != Slot::Form) {
            return Err(Error::SlotMismatch);
        }
        Ok(())
    }

    /// Cycles of the permutation in order of their smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = Vec::new();
        for start in 0..self.perm.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.perm[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Smallest positive `m` with `sigma^m = id`.
    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1usize, |acc, c| acc.lcm(&c.len()))
    }

    /// Order by iterating the permutation until it returns to the identity.
    pub fn order_by_iteration(&self) -> usize {
        let mut cur = self.perm.clone();
        let mut m = 1;
        while cur.iter().enumerate().any(|(i, &j)| i != j) {
            cur = cur.iter().map(|&j| self.perm[j]).collect();
            m += 1;
        }
        m
    }

    /// `sigma^m` on `(g, h)` from the closed formulas in terms of `ad(g^-1 h^-1)`.
    pub fn closed_form_power(&self, g: usize, h: usize, m: u64) -> (usize, usize) {
        let grp = self.calc.group();
        if m == 0 {
            return (g, h);
        }
        let x = grp.mul(grp.inv(g), grp.inv(h));
        let ad_pow = |e: u64, y: usize| (0..e).fold(y, |acc, _| grp.adjoint(x, acc));
        if m.is_multiple_of(2) {
            let n = m / 2;
            (ad_pow(n, g), ad_pow(n, h))
        } else {
            let n = m.div_ceil(2);
            (ad_pow(n, h), ad_pow(n - 1, g))
        }
    }

    /// `(id (x) sigma)(sigma (x) id)(id (x) sigma) = (sigma (x) id)(id (x) sigma)(sigma (x) id)` on all triples.
    pub fn braid_check(&self) -> bool {
        let k = self.calc.dim();
        let s1 = |t: [usize; 3]| {
            let i = self.perm[t[0] * k + t[1]];
            [i / k, i % k, t[2]]
        };
        let s2 = |t: [usize; 3]| {
            let i = self.perm[t[1] * k + t[2]];
            [t[0], i / k, i % k]
        };
        (0..k * k * k).all(|i| {
            let t = [i / (k * k), (i / k) % k, i % k];
            s2(s1(s2(t))) == s1(s2(s1(t)))
        })
    }

    /// `S t = (t + sigma t) / 2` on slots `slot, slot + 1`.
    pub fn symmetrize(&self, t: &Tensor, slot: usize) -> Result<Tensor> {
        Ok((t + &self.apply(t, slot, 1)?).scale(&frac(1, 2)))
    }

    /// `A t = (t - sigma t) / 2` on slots `slot, slot + 1`.
    pub fn antisymmetrize(&self, t: &Tensor, slot: usize) -> Result<Tensor> {
        Ok((t - &self.apply(t, slot, 1)?).scale(&frac(1, 2)))
    }

    /// Matrix of sigma on the constant fiber, acting on column vectors.
    pub fn matrix(&self) -> RationalMatrix {
        let m = self.perm.len();
        let mut out = RationalMatrix::zeros(m, m);
        for (i, &j) in self.perm.iter().enumerate() {
            out.set(j, i, Rational::one());
        }
        out
    }

    /// Matrices of `A` and `S` on the constant fiber.
    pub fn a_s_matrices(&self) -> (RationalMatrix, RationalMatrix) {
        let m = self.perm.len();
        let mut a = RationalMatrix::zeros(m, m);
        let mut s = RationalMatrix::zeros(m, m);
        let half = frac(1, 2);
        for (i, &j) in self.perm.iter().enumerate() {
            if i == j {
                s.set(i, i, Rational::one());
            } else {
                a.set(i, i, half.clone());
                a.set(j, i, -half.clone());
                s.set(i, i, half.clone());
                s.set(j, i, half.clone());
            }
        }
        (a, s)
    }

    /// Kernels and images of `A` and `S` by exact elimination.
    pub fn decompose(&self) -> Decomposition {
        let (a, s) = self.a_s_matrices();
        Decomposition { ker_a: kernel_basis(&a), im_a: image_basis(&a), ker_s: kernel_basis(&s), im_s: image_basis(&s) }
    }

    /// Symmetry flags of a tensor with exactly two form slots.
    pub fn classify(&self, t: &Tensor) -> Result<Classification> {
        self.check(t, 0, 2)?;
        if t.rank() != 2 {
            return Err(Error::SlotMismatch);
        }
        let n = self.calc.n();
        let cycles = self.cycles();
        let mut w_sym = true;
        let mut w_anti = true;
        for x in 0..n {
            let v = t.fiber(x);
            for c in &cycles {
                if !c.iter().fold(Rational::zero(), |acc, &i| acc + &v[i]).is_zero() {
                    w_anti = false;
                }
                if c.len() % 2 == 0 {
                    let alt =
                        c.iter().enumerate().fold(
                            Rational::zero(),
                            |acc, (j, &i)| {
                                if j % 2 == 0 {
                                    acc + &v[i]
                                } else {
                                    acc - &v[i]
                                }
                            },
                        );
                    if !alt.is_zero() {
                        w_sym = false;
                    }
                }
            }
        }
        Ok(Classification {
            s_symmetric: self.antisymmetrize(t, 0)?.is_zero(),
            s_antisymmetric: self.symmetrize(t, 0)?.is_zero(),
            w_symmetric: w_sym,
            w_antisymmetric: w_anti,
        })
    }

    /// Basis of 2-forms by wedge words.
    pub fn two_form_basis(&self) -> TwoFormBasis {
        let mut top = vec![0; self.perm.len()];
        let mut words = Vec::new();
        for c in self.cycles() {
            let m = *c.iter().max().expect("nonempty cycle");
            for &i in &c {
                top[i] = m;
                if i != m {
                    words.push(i);
                }
            }
        }
        words.sort_unstable();
        TwoFormBasis { sigma: self.clone(), words, top }
    }

    /// `phi ^ psi = A(phi (x) psi)`.
    pub fn wedge(&self, phi: &Tensor, psi: &Tensor) -> Result<Tensor> {
        self.antisymmetrize(&phi.tensor(psi)?, 0)
    }

    /// Projection of a rank 2 form tensor to 2-forms.
    pub fn project(&self, t: &Tensor) -> Result<Tensor> {
        self.antisymmetrize(t, 0)
    }

    /// `d phi` for a 1-form, as a 2-form.
    pub fn d_one_form(&self, phi: &Tensor) -> Result<Tensor> {
        self.project(&d_raw(phi)?)
    }

    /// Antisymmetrizer on slots `slot .. slot + 3`:
    /// `1 - s1 - s2 + s1 s2 + s2 s1 - s1 s2 s1`.
    pub fn antisymmetrize3(&self, t: &Tensor, slot: usize) -> Result<Tensor> {
        self.check(t, slot, 3)?;
        let s1 = |x: &Tensor| self.apply(x, slot, 1);
        let s2 = |x: &Tensor| self.apply(x, slot + 1, 1);
        let a = s1(t)?;
        let b = s2(t)?;
        let ab = s1(&b)?;
        let ba = s2(&a)?;
        let aba = s1(&s2(&a)?)?;
        Ok(&(&(&(&(t - &a) - &b) + &ab) + &ba) - &aba)
    }
}

/// 2-forms expressed in wedge words `theta^p theta^q` for the non-maximal words of each sigma-cycle.
#[derive(Clone, Debug)]
pub struct TwoFormBasis {
    sigma: SigmaOperator,
    words: Vec<usize>,
    top: Vec<usize>,
}

impl TwoFormBasis {
    /// Flat pair indices of the basis words.
    pub fn words(&self) -> &[usize] {
        &self.words
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// Coordinates of `A t` for a raw rank 2 form tensor `t`.
    pub fn reduce(&self, t: &Tensor) -> Result<Vec<GroupFunction>> {
        self.coordinates(&self.sigma.project(t)?)
    }

    /// Coordinates of a 2-form, which must lie in the image of `A`.
    pub fn coordinates(&self, form: &Tensor) -> Result<Vec<GroupFunction>> {
        self.sigma.check(form, 0, 2)?;
        let n = self.sigma.calc.n();
        let perm = &self.sigma.perm;
        let mut y = vec![vec![Rational::zero(); n]; perm.len()];
        for x in 0..n {
            let v = form.fiber(x);
            for c in self.sigma.cycles() {
                let m = self.top[c[0]];
                if !c.iter().fold(Rational::zero(), |acc, &i| acc + &v[i]).is_zero() {
                    return Err(Error::Infeasible);
                }
                // (A y)_q = (y_q - y_{sigma^-1 q}) / 2 with y_m = 0
                let mut prev = m;
                let mut q = perm[m];
                while q != m {
                    y[q][x] = int(2) * &v[q] + &y[prev][x];
                    prev = q;
                    q = perm[q];
                }
            }
        }
        Ok(self.words.iter().map(|&w| GroupFunction::new(core::mem::take(&mut y[w]))).collect())
    }

    /// The 2-form with the given coordinates.
    pub fn form(&self, coords: &[GroupFunction]) -> Result<Tensor> {
        if coords.len() != self.words.len() {
            return Err(Error::DimensionMismatch { expected: self.words.len(), got: coords.len() });
        }
        let calc = &self.sigma.calc;
        let k = calc.dim();
        let mut t = Tensor::zeros(calc, &[Slot::Form, Slot::Form]);
        for (&w, f) in self.words.iter().zip(coords) {
            let word = Tensor::basis(calc, &[Slot::Form, Slot::Form], &[w / k, w % k])?;
            t = &t + &word.left_mul(f);
        }
        self.sigma.project(&t)
    }
}

/// Raw Maurer-Cartan tensor `-C^h_{g,g'} theta^g' (x) theta^g`.
pub fn maurer_cartan_raw(calc: &DifferentialCalculus, h: usize) -> Result<Tensor> {
    let p = calc.try_position(h)?;
    let k = calc.dim();
    let sc = calc.structure_constants();
    let values: Vec<Rational> = (0..k * k).map(|i| int(-sc.get(p, i % k, i / k))).collect();
    Tensor::constant(calc, &[Slot::Form, Slot::Form], &values)
}

/// Exterior derivative on tensor representatives of forms, before projection.
pub fn d_raw(t: &Tensor) -> Result<Tensor> {
    if t.slots().iter().any(|s| *s != Slot::Form) {
        return Err(Error::SlotMismatch);
    }
    let calc = t.calculus();
    let g = calc.group();
    let k = calc.dim();
    let n = calc.n();
    let r = t.rank();
    let sc = calc.structure_constants();
    let mut slots = t.slots().to_vec();
    slots.push(Slot::Form);
    let mut out = Tensor::zeros(calc, &slots);
    let hat = calc.hat();
    let kr = t.num_indices();
    let mut acc = vec![Rational::zero(); k * kr * n];
    for mi in 0..kr {
        let f = t.function(mi);
        if f.is_zero() {
            continue;
        }
        // d(alpha_I) (x) theta^I
        for (p, &s) in hat.iter().enumerate() {
            let lf = f.ell(g, s);
            for x in 0..n {
                acc[(p * kr + mi) * n + x] += lf.at(x);
            }
        }
        // alpha_I times the Maurer-Cartan tensor inserted at each slot
        let pos = t.positions(mi);
        for m in 0..r {
            let sign = if m % 2 == 0 { int(1) } else { int(-1) };
            let h = pos[m];
            for a in 0..k {
                for b in 0..k {
                    let c = sc.get(h, b, a);
                    if c == 0 {
                        continue;
                    }
                    let coef = -(&sign * int(c));
                    let mut word = Vec::with_capacity(r + 1);
                    word.extend_from_slice(&pos[..m]);
                    word.push(a);
                    word.push(b);
                    word.extend_from_slice(&pos[m + 1..]);
                    let target = out.index(&word);
                    for x in 0..n {
                        acc[target * n + x] += f.at(x) * &coef;
                    }
                }
            }
        }
    }
    for (i, v) in acc.into_iter().enumerate() {
        out.set_coeff(i / n, i % n, v);
    }
    Ok(out)
}

/// Number of inner automorphisms, `|G| / |Z(G)|`.
pub fn inner_automorphism_count(group: &FiniteGroup) -> usize {
    group.order() / group.conjugacy().center.len()
}

/// Sigma order on the universal calculus of the symmetric group of degree `n >= 3`:
/// `2 n prod_{k=1}^{n-2} (n-k) / gcd(n (n-1) .. (n-k+1), n-k)`.
pub fn symmetric_sigma_order(n: u64) -> u64 {
    let mut out = 2 * n;
    let mut falling = 1u64;
    for k in 1..=n.saturating_sub(2) {
        falling *= n - k + 1;
        out *= (n - k) / falling.gcd(&(n - k));
    }
    out
}
