//! Linear connections on the 1-forms of a left-covariant calculus.
//!
//! A connection is stored through its coefficients `Gamma^h_{j,l}`, indexed by
//! positions in `hat`, with
//!
//! | quantity | expression |
//! |---|---|
//! | connection forms | `omega^h_j = Gamma^h_{j,l} theta^l` |
//! | basis forms | `nabla theta^h = -omega^h_j (x) theta^j = -Gamma^h_{j,l} theta^l (x) theta^j` |
//! | general form | `nabla phi` at `theta^g (x) theta^g'` is `R_{g^-1} phi_g' - phi_g' - phi_h Gamma^h_{g',g}` |
//!
//! Coefficients may be arbitrary functions; left-invariant connections have
//! constant coefficients.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::braid::{d_raw, maurer_cartan_raw, SigmaOperator};
use crate::calculus::DifferentialCalculus;
use crate::error::{Error, Result};
use crate::function::GroupFunction;
use crate::group::orbits;
use crate::linalg::{frac, int, kernel_basis, solve_affine, AffineSolution, Rational, RationalMatrix};
use crate::tensor::{Slot, Tensor};

const FF: [Slot; 2] = [Slot::Form, Slot::Form];

/// A linear left module connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    calc: DifferentialCalculus,
    gamma: Vec<GroupFunction>,
}

/// Support analysis of a connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extensibility {
    pub extensible: bool,
    /// Element triples `(g, h, h')` with `Gamma^g_{h,h'} != 0` although `h h' g^-1` is outside `hat` and the identity.
    pub violations: Vec<(usize, usize, usize)>,
    /// `V^{g,g'}_{h,h'}` on element tuples with `h h' = g' g`, nonzero entries only.
    pub v: Vec<((usize, usize, usize, usize), GroupFunction)>,
    /// `W^g_{h,h'}` on element tuples with `h h' = g`, nonzero entries only.
    pub w: Vec<((usize, usize, usize), GroupFunction)>,
}

/// The bimodule map `Psi` with `nabla(phi f) = (nabla phi) f + Psi(phi (x) df)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Psi {
    calc: DifferentialCalculus,
    images: Vec<Tensor>,
}

/// Kinds of bimodule homomorphism tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomKind {
    V,
    W,
}

impl Connection {
    /// Connection with coefficient functions in `(h, j, l)` order.
    pub fn from_functions(calc: &DifferentialCalculus, gamma: Vec<GroupFunction>) -> Result<Self> {
        let k = calc.dim();
        if gamma.len() != k * k * k {
            return Err(Error::DimensionMismatch { expected: k * k * k, got: gamma.len() });
        }
        if let Some(f) = gamma.iter().find(|f| f.len() != calc.n()) {
            return Err(Error::DimensionMismatch { expected: calc.n(), got: f.len() });
        }
        Ok(Connection { calc: calc.clone(), gamma })
    }

    /// Left-invariant connection with constant coefficients in `(h, j, l)` order.
    pub fn from_constants(calc: &DifferentialCalculus, values: &[Rational]) -> Result<Self> {
        let n = calc.n();
        Self::from_functions(calc, values.iter().map(|v| GroupFunction::constant(n, v.clone())).collect())
    }

    /// Left-invariant connection from a rule on positions `(h, j, l)`.
    pub fn from_rule(calc: &DifferentialCalculus, rule: impl Fn(usize, usize, usize) -> Rational) -> Self {
        let k = calc.dim();
        let values: Vec<Rational> = (0..k * k * k).map(|i| rule(i / (k * k), (i / k) % k, i % k)).collect();
        Self::from_constants(calc, &values).expect("sizes agree")
    }

    /// Connection with prescribed `nabla theta^h` for each generator position `h`.
    pub fn from_basis_images(calc: &DifferentialCalculus, images: &[Tensor]) -> Result<Self> {
        let k = calc.dim();
        if images.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: images.len() });
        }
        let mut gamma = Vec::with_capacity(k * k * k);
        for t in images {
            if t.calculus() != calc {
                return Err(Error::CalculusMismatch);
            }
            if t.slots() != FF {
                return Err(Error::SlotMismatch);
            }
            for j in 0..k {
                for l in 0..k {
                    gamma.push(-&t.coefficient(&[l, j]));
                }
            }
        }
        Self::from_functions(calc, gamma)
    }

    pub fn calculus(&self) -> &DifferentialCalculus {
        &self.calc
    }

    fn idx(&self, h: usize, j: usize, l: usize) -> usize {
        let k = self.calc.dim();
        (h * k + j) * k + l
    }

    /// `Gamma^h_{j,l}` for positions.
    pub fn gamma(&self, h: usize, j: usize, l: usize) -> &GroupFunction {
        &self.gamma[self.idx(h, j, l)]
    }

    pub fn gamma_functions(&self) -> &[GroupFunction] {
        &self.gamma
    }

    /// Constant coefficients, if the connection is left-invariant.
    pub fn constants(&self) -> Option<Vec<Rational>> {
        self.gamma.iter().map(|f| f.constant_value().cloned()).collect()
    }

    fn require_constants(&self) -> Result<Vec<Rational>> {
        self.constants().ok_or(Error::NotLeftInvariant)
    }

    pub fn is_left_invariant(&self) -> bool {
        self.n_points() == 0 || self.gamma.iter().all(|f| f.constant_value().is_some())
    }

    fn n_points(&self) -> usize {
        self.calc.n()
    }

    /// Constant coefficients that agree along diagonal adjoint orbits of triples.
    pub fn is_bi_invariant(&self) -> Result<bool> {
        let blocks = ad_orbits(&self.calc)?;
        let Some(c) = self.constants() else { return Ok(false) };
        Ok(blocks.iter().all(|b| b.iter().all(|&i| c[i] == c[b[0]])))
    }

    /// `omega^i_j = Gamma^i_{j,l} theta^l`.
    pub fn connection_form(&self, i: usize, j: usize) -> Tensor {
        let k = self.calc.dim();
        Tensor::one_form(&self.calc, (0..k).map(|l| self.gamma(i, j, l).clone()).collect())
    }

    /// Covariant derivative of a 1-form.
    pub fn nabla(&self, phi: &Tensor) -> Result<Tensor> {
        if phi.calculus() != &self.calc {
            return Err(Error::CalculusMismatch);
        }
        if phi.slots() != [Slot::Form] {
            return Err(Error::SlotMismatch);
        }
        let k = self.calc.dim();
        let n = self.calc.n();
        let g = self.calc.group();
        let hat = self.calc.hat();
        let coeffs = phi.coefficients();
        let mut out = Tensor::zeros(&self.calc, &FF);
        for a in 0..k {
            let ginv = g.inv(hat[a]);
            for b in 0..k {
                let mi = a * k + b;
                for x in 0..n {
                    let mut v = coeffs[b].at(g.mul(x, ginv)) - coeffs[b].at(x);
                    for (h, f) in coeffs.iter().enumerate() {
                        let gam = self.gamma(h, b, a).at(x);
                        if !gam.is_zero() && !f.at(x).is_zero() {
                            v -= f.at(x) * gam;
                        }
                    }
                    out.set_coeff(mi, x, v);
                }
            }
        }
        Ok(out)
    }

    /// `nabla theta^h` for a generator position.
    pub fn nabla_basis(&self, h: usize) -> Tensor {
        let k = self.calc.dim();
        let fs = (0..k * k).map(|i| -self.gamma(h, i % k, i / k)).collect();
        Tensor::from_functions(&self.calc, &FF, fs).expect("sizes agree")
    }

    /// `T(theta^h) = (Gamma^h_{g',g} - C^h_{g',g}) theta^g (x) theta^g'` before projection.
    pub fn torsion_raw(&self, h: usize) -> Result<Tensor> {
        let mc = maurer_cartan_raw(&self.calc, self.calc.hat()[h])?;
        Ok(&mc - &self.nabla_basis(h))
    }

    /// Torsion of `theta^h` as a 2-form.
    pub fn torsion(&self, h: usize) -> Result<Tensor> {
        SigmaOperator::new(&self.calc)?.project(&self.torsion_raw(h)?)
    }

    /// Torsion of a general 1-form, `T(phi) = phi_h T(theta^h)`.
    pub fn torsion_of(&self, phi: &Tensor) -> Result<Tensor> {
        let sigma = SigmaOperator::new(&self.calc)?;
        let d = sigma.d_one_form(phi)?;
        Ok(&d - &sigma.project(&self.nabla(phi)?)?)
    }

    /// Explicit antisymmetrized torsion of a left-invariant connection:
    /// at `theta^g' (x) theta^g` the coefficient is
    /// `(Gamma^h_{g,g'} - Gamma^h_{ad(g)g',g} - C^h_{g,g'} + C^h_{ad(g)g',g}) / 2`.
    pub fn torsion_closed_form(&self, h: usize) -> Result<Tensor> {
        self.calc.require_bicovariant()?;
        let c = self.require_constants()?;
        let k = self.calc.dim();
        let g = self.calc.group();
        let hat = self.calc.hat();
        let sc = self.calc.structure_constants();
        let mut values = vec![Rational::zero(); k * k];
        for a in 0..k {
            for b in 0..k {
                let ad = self.calc.position(g.adjoint(hat[a], hat[b])).expect("ad-closed");
                let v = &c[self.idx(h, a, b)] - &c[self.idx(h, ad, a)] - int(sc.get(h, a, b)) + int(sc.get(h, ad, a));
                values[b * k + a] = v * frac(1, 2);
            }
        }
        Tensor::constant(&self.calc, &FF, &values)
    }

    /// `d omega^i_j + omega^i_l (x) omega^l_j` before projection.
    pub fn curvature_raw(&self, i: usize, j: usize) -> Result<Tensor> {
        let mut t = d_raw(&self.connection_form(i, j))?;
        for l in 0..self.calc.dim() {
            t = &t + &self.connection_form(i, l).tensor(&self.connection_form(l, j))?;
        }
        Ok(t)
    }

    /// Curvature 2-form `Omega^i_j`.
    pub fn curvature(&self, i: usize, j: usize) -> Result<Tensor> {
        SigmaOperator::new(&self.calc)?.project(&self.curvature_raw(i, j)?)
    }

    /// Raw curvature of a left-invariant connection from the coefficient formula:
    /// at `theta^h (x) theta^h'` it is `Gamma^i_{l,h} Gamma^l_{j,h'} - C^l_{h',h} Gamma^i_{j,l}`.
    pub fn curvature_closed_form(&self, i: usize, j: usize) -> Result<Tensor> {
        let c = self.require_constants()?;
        let k = self.calc.dim();
        let sc = self.calc.structure_constants();
        let mut values = vec![Rational::zero(); k * k];
        for h in 0..k {
            for hp in 0..k {
                let mut v = Rational::zero();
                for l in 0..k {
                    v += &c[self.idx(i, l, h)] * &c[self.idx(l, j, hp)];
                    v -= int(sc.get(l, hp, h)) * &c[self.idx(i, j, l)];
                }
                values[h * k + hp] = v;
            }
        }
        Tensor::constant(&self.calc, &FF, &values)
    }

    /// All curvature 2-forms vanish.
    pub fn is_flat(&self) -> Result<bool> {
        let sigma = SigmaOperator::new(&self.calc)?;
        let k = self.calc.dim();
        for i in 0..k {
            for j in 0..k {
                if !sigma.project(&self.curvature_raw(i, j)?)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All curvature tensors vanish before projection, i.e. as elements of the tensor square.
    pub fn is_flat_raw(&self) -> Result<bool> {
        let k = self.calc.dim();
        for i in 0..k {
            for j in 0..k {
                if !self.curvature_raw(i, j)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Matrices `U_g` with entry `(h', h)` equal to `delta^h_h' + Gamma^h_{h',g}`, and `U_e = 1`.
    pub fn u_matrices(&self) -> Result<Vec<RationalMatrix>> {
        if !self.calc.is_universal() {
            return Err(Error::NotUniversal);
        }
        let c = self.require_constants()?;
        let k = self.calc.dim();
        let mut out = vec![RationalMatrix::identity(k)];
        for g in 0..k {
            let mut m = RationalMatrix::identity(k);
            for hp in 0..k {
                for h in 0..k {
                    let v = m.get(hp, h) + &c[self.idx(h, hp, g)];
                    m.set(hp, h, v);
                }
            }
            out.push(m);
        }
        Ok(out)
    }

    /// On the universal calculus: `U_g U_g' = U_{gg'}` for all group elements.
    /// This is equivalent to [`Connection::is_flat_raw`]; vanishing of the projected
    /// curvature is weaker in general.
    pub fn flatness_representation(&self) -> Result<bool> {
        let us = self.u_matrices()?;
        let g = self.calc.group();
        let n = g.order();
        Ok((0..n).all(|a| (0..n).all(|b| us[a].mul(&us[b]) == us[g.mul(a, b)])))
    }

    /// Support condition for extensibility and the induced `V`, `W` data.
    pub fn extensibility(&self) -> Extensibility {
        let g = self.calc.group();
        let hat = self.calc.hat();
        let k = self.calc.dim();
        let mut out = Extensibility { extensible: true, violations: Vec::new(), v: Vec::new(), w: Vec::new() };
        for gi in 0..k {
            for h in 0..k {
                for hp in 0..k {
                    let f = self.gamma(gi, h, hp);
                    if f.is_zero() {
                        continue;
                    }
                    let (eg, eh, ehp) = (hat[gi], hat[h], hat[hp]);
                    let prod = g.mul(eh, ehp);
                    let rest = g.mul(prod, g.inv(eg));
                    if rest == 0 {
                        out.w.push(((eg, eh, ehp), -f));
                    } else if self.calc.position(rest).is_some() {
                        out.v.push(((eg, rest, eh, ehp), -f));
                    } else {
                        out.extensible = false;
                        out.violations.push((eg, eh, ehp));
                    }
                }
            }
        }
        out
    }

    /// `nabla(theta^g e_z) - (nabla theta^g) e_z`.
    fn leibniz_defect(&self, g: usize, z: usize) -> Result<Tensor> {
        let ez = GroupFunction::delta(self.calc.n(), z);
        let form = self.calc.theta(self.calc.hat()[g])?.right_mul(&ez);
        Ok(&self.nabla(&form)? - &self.nabla_basis(g).right_mul(&ez))
    }

    /// `Psi` read off pointwise from the Leibniz defect; fails unless extensible.
    pub fn psi(&self) -> Result<Psi> {
        let ext = self.extensibility();
        if !ext.extensible {
            return Err(Error::NotExtensible(ext.violations));
        }
        Ok(Psi { calc: self.calc.clone(), images: self.psi_images()? })
    }

    /// Exhaustive check of `nabla(phi f) = (nabla phi) f + Psi(phi (x) df)` on basis forms and delta functions.
    pub fn extensible_by_leibniz(&self) -> Result<bool> {
        let k = self.calc.dim();
        let n = self.calc.n();
        // the pointwise reading is always defined; test it against every defect
        let psi = Psi { calc: self.calc.clone(), images: self.psi_images()? };
        if !psi.is_right_linear() {
            return Ok(false);
        }
        for a in 0..k {
            let theta = self.calc.theta(self.calc.hat()[a])?;
            for z in 0..n {
                let df = self.calc.differential(&GroupFunction::delta(n, z));
                if self.leibniz_defect(a, z)? != psi.apply(&theta.tensor(&df)?, 0)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Images of basis pairs: `theta^a (x) d e_z` has coefficient 1 at `(a, b)` and point `x`
    /// for exactly one `z = x a^-1 b^-1`, so the defect at that `z` reads off `Psi` there.
    fn psi_images(&self) -> Result<Vec<Tensor>> {
        let k = self.calc.dim();
        let n = self.calc.n();
        let grp = self.calc.group();
        let hat = self.calc.hat();
        let mut images = vec![Tensor::zeros(&self.calc, &FF); k * k];
        for a in 0..k {
            let defects: Vec<Tensor> = (0..n).map(|z| self.leibniz_defect(a, z)).collect::<Result<_>>()?;
            for b in 0..k {
                for x in 0..n {
                    let z = grp.mul(grp.mul(x, grp.inv(hat[a])), grp.inv(hat[b]));
                    for mi in 0..k * k {
                        images[a * k + b].set_coeff(mi, x, defects[z].coeff_at(mi, x).clone());
                    }
                }
            }
        }
        Ok(images)
    }

    /// Product connection on tensors of 1-forms:
    /// `nabla(phi (x) T) = nabla phi (x) T + (Psi (x) id)(phi (x) nabla T)`.
    pub fn extend_to_tensor(&self, t: &Tensor) -> Result<Tensor> {
        let psi = self.psi()?;
        self.extend_with(&psi, t)
    }

    fn extend_with(&self, psi: &Psi, t: &Tensor) -> Result<Tensor> {
        if t.calculus() != &self.calc {
            return Err(Error::CalculusMismatch);
        }
        if t.rank() == 0 || t.slots().iter().any(|s| *s != Slot::Form) {
            return Err(Error::SlotMismatch);
        }
        if t.rank() == 1 {
            return self.nabla(t);
        }
        let k = self.calc.dim();
        let rest_slots = vec![Slot::Form; t.rank() - 1];
        let rest_count = k.pow(rest_slots.len() as u32);
        let mut out = Tensor::zeros(&self.calc, &vec![Slot::Form; t.rank() + 1]);
        for j in 0..rest_count {
            let phi = Tensor::one_form(&self.calc, (0..k).map(|a| t.function(a * rest_count + j)).collect());
            if phi.is_zero() {
                continue;
            }
            let word = Tensor::basis(&self.calc, &rest_slots, &positions_of(j, k, rest_slots.len()))?;
            let first = self.nabla(&phi)?.tensor(&word)?;
            let second = psi.apply(&phi.tensor(&self.extend_with(psi, &word)?)?, 0)?;
            out = &(&out + &first) + &second;
        }
        Ok(out)
    }

    /// `Psi` and the product connection map constant tensors to constant tensors.
    pub fn verify_invariance_transport(&self) -> Result<bool> {
        let psi = self.psi()?;
        if !psi.images.iter().all(Tensor::is_constant) {
            return Ok(false);
        }
        let k = self.calc.dim();
        for a in 0..k {
            for b in 0..k {
                let word = Tensor::basis(&self.calc, &FF, &[a, b])?;
                if !self.extend_with(&psi, &word)?.is_constant() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn positions_of(mut mi: usize, k: usize, r: usize) -> Vec<usize> {
    let mut out = vec![0; r];
    for slot in (0..r).rev() {
        out[slot] = mi % k;
        mi /= k;
    }
    out
}

impl Psi {
    pub fn calculus(&self) -> &DifferentialCalculus {
        &self.calc
    }

    /// `Psi(theta^a (x) theta^b)` for positions.
    pub fn image(&self, a: usize, b: usize) -> &Tensor {
        &self.images[a * self.calc.dim() + b]
    }

    /// Applies `Psi` on form slots `slot, slot + 1`.
    pub fn apply(&self, t: &Tensor, slot: usize) -> Result<Tensor> {
        if slot + 2 > t.rank() || t.slots()[slot..slot + 2] != FF {
            return Err(Error::SlotMismatch);
        }
        t.map_pair(slot, |a, b| self.image(a, b).clone())
    }

    /// `Psi(t f) = Psi(t) f`: each image is supported on words with the same right shift.
    pub fn is_right_linear(&self) -> bool {
        let k = self.calc.dim();
        (0..k * k).all(|ab| {
            let img = &self.images[ab];
            let w = img.shift(ab);
            (0..k * k).all(|mi| img.shift(mi) == w || img.function(mi).is_zero())
        })
    }

    /// `sigma - V` assembled from extracted `V` data of a left-invariant connection.
    pub fn from_sigma_minus_v(calc: &DifferentialCalculus, ext: &Extensibility) -> Result<Psi> {
        let sigma = SigmaOperator::new(calc)?;
        let k = calc.dim();
        let mut images = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                let (p, q) = sigma.image(a, b, 1);
                images.push(Tensor::basis(calc, &FF, &[p, q])?);
            }
        }
        for ((g, gp, h, hp), f) in &ext.v {
            let (a, b) = (calc.try_position(*g)?, calc.try_position(*gp)?);
            let (ph, php) = (calc.try_position(*h)?, calc.try_position(*hp)?);
            let term = Tensor::basis(calc, &FF, &[php, ph])?.left_mul(f);
            images[a * k + b] = &images[a * k + b] - &term;
        }
        Ok(Psi { calc: calc.clone(), images })
    }
}

/// The connection with `Gamma = C`.
pub fn c_connection(calc: &DifferentialCalculus) -> Connection {
    let sc = calc.structure_constants();
    Connection::from_rule(calc, |h, j, l| int(sc.get(h, j, l)))
}

/// `nabla phi = rho (x) phi - sigma(phi (x) rho)`.
pub fn nabla_sigma(calc: &DifferentialCalculus) -> Result<Connection> {
    let sigma = SigmaOperator::new(calc)?;
    let rho = calc.rho();
    let images: Vec<Tensor> = calc
        .hat()
        .iter()
        .map(|&g| {
            let th = calc.theta(g)?;
            Ok(&rho.tensor(&th)? - &sigma.apply(&th.tensor(&rho)?, 0, 1)?)
        })
        .collect::<Result<_>>()?;
    Connection::from_basis_images(calc, &images)
}

/// `nabla phi = rho (x) phi - sum_n lambda_n sigma^n(phi (x) rho)` for `n = 0 .. order - 1`.
pub fn sigma_family(calc: &DifferentialCalculus, lambda: &[Rational]) -> Result<Connection> {
    let sigma = SigmaOperator::new(calc)?;
    let order = sigma.order();
    if lambda.len() != order {
        return Err(Error::BadLambdaLength { expected: order, got: lambda.len() });
    }
    let rho = calc.rho();
    let images: Vec<Tensor> = calc
        .hat()
        .iter()
        .map(|&g| {
            let th = calc.theta(g)?;
            let base = th.tensor(&rho)?;
            let mut t = rho.tensor(&th)?;
            for (n, l) in lambda.iter().enumerate() {
                if !l.is_zero() {
                    t = &t - &sigma.apply(&base, 0, n as i64)?.scale(l);
                }
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    Connection::from_basis_images(calc, &images)
}

/// `nabla phi = rho (x) phi`, so `Gamma^g_{g',h} = -delta^g_{g'}`.
pub fn canonical_connection(calc: &DifferentialCalculus) -> Connection {
    Connection::from_rule(calc, |h, j, _| if h == j { int(-1) } else { Rational::zero() })
}

/// Orbits of the diagonal adjoint action on triples of positions, flat indices `(h k + j) k + l`.
pub fn ad_orbits(calc: &DifferentialCalculus) -> Result<Vec<Vec<usize>>> {
    calc.require_bicovariant()?;
    let g = calc.group();
    let k = calc.dim();
    let hat = calc.hat();
    let ad = |x: usize, p: usize| calc.position(g.adjoint(x, hat[p])).expect("ad-closed");
    orbits(g, k * k * k, |x, i| {
        let (a, b, c) = (i / (k * k), (i / k) % k, i % k);
        (ad(x, a) * k + ad(x, b)) * k + ad(x, c)
    })
}

/// Affine family of left-invariant connections, one unknown per block of equal coefficients.
#[derive(Clone, Debug)]
pub struct ConnectionFamily {
    calc: DifferentialCalculus,
    blocks: Vec<Vec<usize>>,
    solution: AffineSolution,
}

impl ConnectionFamily {
    /// Number of free parameters.
    pub fn dim(&self) -> usize {
        self.solution.kernel.len()
    }

    /// Blocks of coefficient triples sharing one unknown.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn solution(&self) -> &AffineSolution {
        &self.solution
    }

    /// Member at the given parameters.
    pub fn connection(&self, params: &[Rational]) -> Connection {
        let block_values = self.solution.point(params);
        let k = self.calc.dim();
        let mut values = vec![Rational::zero(); k * k * k];
        for (b, v) in self.blocks.iter().zip(block_values) {
            for &i in b {
                values[i] = v.clone();
            }
        }
        Connection::from_constants(&self.calc, &values).expect("sizes agree")
    }

    /// Member for the particular solution.
    pub fn particular(&self) -> Connection {
        self.connection(&vec![Rational::zero(); self.dim()])
    }

    /// Whether a connection belongs to the family.
    pub fn contains(&self, conn: &Connection) -> bool {
        let Some(c) = conn.constants() else { return false };
        if self.blocks.iter().any(|b| b.iter().any(|&i| c[i] != c[b[0]])) {
            return false;
        }
        let diff: Vec<Rational> =
            self.blocks.iter().enumerate().map(|(i, b)| &c[b[0]] - &self.solution.particular[i]).collect();
        crate::linalg::in_span(&self.solution.kernel, &diff)
    }
}

/// Left- or bi-invariant connections, optionally torsion-free, as an exact affine family.
pub fn solve_invariant(
    calc: &DifferentialCalculus,
    bi_invariant: bool,
    torsion_free: bool,
) -> Result<ConnectionFamily> {
    let k = calc.dim();
    let blocks: Vec<Vec<usize>> =
        if bi_invariant { ad_orbits(calc)? } else { (0..k * k * k).map(|i| vec![i]).collect() };
    let mut block_of = vec![0; k * k * k];
    for (b, members) in blocks.iter().enumerate() {
        for &i in members {
            block_of[i] = b;
        }
    }
    let mut m = RationalMatrix::zeros(0, blocks.len());
    let mut rhs = Vec::new();
    if torsion_free {
        let sigma = SigmaOperator::new(calc)?;
        let sc = calc.structure_constants();
        let gi = |h: usize, j: usize, l: usize| (h * k + j) * k + l;
        // raw torsion t_(a,b) = Gamma^h_{b,a} - C^h_{b,a} must satisfy t_q = t_{sigma^-1 q}
        for h in 0..k {
            for a in 0..k {
                for b in 0..k {
                    let (a2, b2) = sigma.image(a, b, -1);
                    if (a2, b2) == (a, b) {
                        continue;
                    }
                    let mut row = vec![Rational::zero(); blocks.len()];
                    row[block_of[gi(h, b, a)]] += int(1);
                    row[block_of[gi(h, b2, a2)]] -= int(1);
                    if row.iter().all(Zero::is_zero) && sc.get(h, b, a) == sc.get(h, b2, a2) {
                        continue;
                    }
                    m.push_row(row);
                    rhs.push(int(sc.get(h, b, a) - sc.get(h, b2, a2)));
                }
            }
        }
    }
    let solution = if m.rows() == 0 {
        AffineSolution {
            particular: vec![Rational::zero(); blocks.len()],
            kernel: (0..blocks.len())
                .map(|i| {
                    let mut v = vec![Rational::zero(); blocks.len()];
                    v[i] = Rational::one();
                    v
                })
                .collect(),
        }
    } else {
        solve_affine(&m, &rhs)?
    };
    Ok(ConnectionFamily { calc: calc.clone(), blocks, solution })
}

/// Element triples `(g, h, h')` whose coefficient `Gamma^g_{h,h'}` must vanish for extensibility:
/// `h h' g^-1` is neither in `hat` nor the identity.
pub fn restricted_triples(calc: &DifferentialCalculus) -> Vec<(usize, usize, usize)> {
    let g = calc.group();
    let hat = calc.hat();
    let mut out = Vec::new();
    for &a in hat {
        for &h in hat {
            for &hp in hat {
                let rest = g.mul(g.mul(h, hp), g.inv(a));
                if rest != 0 && calc.position(rest).is_none() {
                    out.push((a, h, hp));
                }
            }
        }
    }
    out
}

/// Admissible index tuples of bimodule homomorphisms, as group elements:
/// `W`: `(g, h, h')` with `h h' = g`; `V`: `(g, g', h, h')` with `h h' = g' g`.
pub fn bimodule_hom_space(calc: &DifferentialCalculus, kind: HomKind) -> Vec<Vec<usize>> {
    let g = calc.group();
    let hat = calc.hat();
    let mut out = Vec::new();
    match kind {
        HomKind::W => {
            for &a in hat {
                for &h in hat {
                    for &hp in hat {
                        if g.mul(h, hp) == a {
                            out.push(vec![a, h, hp]);
                        }
                    }
                }
            }
        }
        HomKind::V => {
            for &a in hat {
                for &ap in hat {
                    for &h in hat {
                        for &hp in hat {
                            if g.mul(h, hp) == g.mul(ap, a) {
                                out.push(vec![a, ap, h, hp]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Connections (with function coefficients) satisfying `nabla(phi f) = (nabla phi) f`.
/// Returns the solution over the coefficient values `Gamma^h_{j,l}(x)` in `((h k + j) k + l) n + x` order.
pub fn solve_right_linear(calc: &DifferentialCalculus) -> Result<AffineSolution> {
    let k = calc.dim();
    let n = calc.n();
    let unknowns = k * k * k * n;
    let zero = Connection::from_functions(calc, vec![GroupFunction::zero(n); k * k * k])?;
    let residual = |conn: &Connection| -> Result<Vec<Rational>> {
        let mut out = Vec::new();
        for a in 0..k {
            for z in 0..n {
                out.extend_from_slice(conn.leibniz_defect(a, z)?.raw());
            }
        }
        Ok(out)
    };
    let base = residual(&zero)?;
    let mut columns = Vec::with_capacity(unknowns);
    for u in 0..unknowns {
        let mut gamma = vec![GroupFunction::zero(n); k * k * k];
        let mut vals = gamma[u / n].values().to_vec();
        vals[u % n] = Rational::one();
        gamma[u / n] = GroupFunction::new(vals);
        let r = residual(&Connection::from_functions(calc, gamma)?)?;
        columns.push(r.iter().zip(&base).map(|(a, b)| a - b).collect::<Vec<_>>());
    }
    let rows = base.len();
    let mut m = RationalMatrix::zeros(rows, unknowns);
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            if !v.is_zero() {
                m.set(r, c, v.clone());
            }
        }
    }
    let rhs: Vec<Rational> = base.iter().map(|v| -v).collect();
    solve_affine(&m, &rhs)
}

/// Connection from a flat vector of coefficient values as returned by [`solve_right_linear`].
pub fn connection_from_values(calc: &DifferentialCalculus, values: &[Rational]) -> Result<Connection> {
    let n = calc.n();
    let fs = values.chunks(n.max(1)).map(|c| GroupFunction::new(c.to_vec())).collect();
    Connection::from_functions(calc, fs)
}

/// Dimension over the rationals of the bimodule homomorphisms from 1-forms to rank 2 form tensors,
/// by direct solution of `D(theta^b f) = D(theta^b) f` for all delta functions.
pub fn bimodule_hom_dimension(calc: &DifferentialCalculus) -> usize {
    let k = calc.dim();
    let n = calc.n();
    let g = calc.group();
    let hat = calc.hat();
    let probe = Tensor::zeros(calc, &FF);
    let unknowns = k * k * k * n;
    let mut m = RationalMatrix::zeros(0, unknowns);
    for b in 0..k {
        let binv = g.inv(hat[b]);
        for mi in 0..k * k {
            let w = probe.shift(mi);
            for x in 0..n {
                let col = (b * k * k + mi) * n + x;
                for z in 0..n {
                    // (R_{b^-1} e_z)(x) d - d (R_w e_z)(x)
                    let v = int((g.mul(x, binv) == z) as i64) - int((g.mul(x, w) == z) as i64);
                    if !v.is_zero() {
                        let mut row = vec![Rational::zero(); unknowns];
                        row[col] = v;
                        m.push_row(row);
                    }
                }
            }
        }
    }
    kernel_basis(&m).len()
}
