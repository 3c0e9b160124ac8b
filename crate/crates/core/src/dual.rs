//! Vector fields, the duality pairing, dual connections and metrics.
//!
//! Vector fields live in `Field` slots of [`Tensor`]. The pairing contracts a
//! form slot with the adjacent field slot, `<theta^h, l_g> = delta^h_g`, and is
//! nested for higher ranks: `<a (x) b, u (x) v> = <a <b, u>, v>`.

use alloc::vec::Vec;

use crate::braid::{d_raw, SigmaOperator};
use crate::calculus::DifferentialCalculus;
use crate::connection::{Connection, Psi};
use crate::error::{Error, Result};
use crate::function::GroupFunction;
use crate::tensor::{Slot, Tensor};

const FX: [Slot; 2] = [Slot::Form, Slot::Field];
const XF: [Slot; 2] = [Slot::Field, Slot::Form];
const XX: [Slot; 2] = [Slot::Field, Slot::Field];

/// `<phi, X>` for a 1-form and a vector field.
pub fn pair(phi: &Tensor, x: &Tensor) -> Result<GroupFunction> {
    if phi.slots() != [Slot::Form] || x.slots() != [Slot::Field] {
        return Err(Error::SlotMismatch);
    }
    Ok(pairing(phi, x, 1)?.function(0))
}

/// Contracts the last `m` slots of `a` (forms) with the first `m` slots of `b` (fields),
/// innermost pair first.
pub fn pairing(a: &Tensor, b: &Tensor, m: usize) -> Result<Tensor> {
    if m > a.rank() || m > b.rank() {
        return Err(Error::SlotMismatch);
    }
    let mut t = a.tensor(b)?;
    let r = a.rank();
    for j in 0..m {
        t = t.contract(r - 1 - j)?;
    }
    Ok(t)
}

fn require_bicovariant(calc: &DifferentialCalculus) -> Result<()> {
    calc.require_bicovariant()
}

/// `sigma'(theta^h (x) l_g) = l_g (x) theta^{g^-1 h g}` on slots `slot, slot + 1`.
pub fn sigma_prime(t: &Tensor, slot: usize) -> Result<Tensor> {
    let calc = t.calculus();
    require_bicovariant(calc)?;
    if slot + 2 > t.rank() || t.slots()[slot..slot + 2] != FX {
        return Err(Error::SlotMismatch);
    }
    let g = calc.group();
    let hat = calc.hat();
    t.permute_pair(slot, XF, |h, gp| {
        let x = g.adjoint(g.inv(hat[gp]), hat[h]);
        (gp, calc.position(x).expect("ad-closed"))
    })
}

/// `sigma_X(l_g (x) l_g') = l_{ad(g) g'} (x) l_g` on slots `slot, slot + 1`.
pub fn sigma_x(t: &Tensor, slot: usize) -> Result<Tensor> {
    let calc = t.calculus();
    require_bicovariant(calc)?;
    if slot + 2 > t.rank() || t.slots()[slot..slot + 2] != XX {
        return Err(Error::SlotMismatch);
    }
    let g = calc.group();
    let hat = calc.hat();
    t.permute_pair(slot, XX, |a, b| (calc.position(g.adjoint(hat[a], hat[b])).expect("ad-closed"), a))
}

/// Permutation of flat index pairs induced by `sigma_X`.
pub fn sigma_x_permutation(calc: &DifferentialCalculus) -> Result<Vec<usize>> {
    require_bicovariant(calc)?;
    let g = calc.group();
    let hat = calc.hat();
    let k = calc.dim();
    Ok((0..k * k)
        .map(|i| {
            let (a, b) = (i / k, i % k);
            calc.position(g.adjoint(hat[a], hat[b])).expect("ad-closed") * k + a
        })
        .collect())
}

/// The canonical form `Xi = l_g (x) theta^g`.
pub fn canonical_form(calc: &DifferentialCalculus) -> Tensor {
    let k = calc.dim();
    let mut t = Tensor::zeros(calc, &XF);
    for g in 0..k {
        t = &t + &Tensor::basis(calc, &XF, &[g, g]).expect("positions in range");
    }
    t
}

/// Splits `t = sum_a l_a (x) beta_a` for a tensor whose first slot is a field.
fn split_field(t: &Tensor) -> Vec<Tensor> {
    let calc = t.calculus();
    let g = calc.group();
    let hat = calc.hat();
    let k = calc.dim();
    let rest_slots = &t.slots()[1..];
    let kr = k.pow(rest_slots.len() as u32);
    (0..k)
        .map(|a| {
            // l_a b = (R_a b) l_a
            let fs = (0..kr).map(|j| t.function(a * kr + j).right_translate(g, g.inv(hat[a]))).collect();
            Tensor::from_functions(calc, rest_slots, fs).expect("sizes agree")
        })
        .collect()
}

/// The right module connection on vector fields dual to a connection on 1-forms.
#[derive(Clone, Debug)]
pub struct DualConnection {
    conn: Connection,
    images: Vec<Tensor>,
}

impl DualConnection {
    pub fn new(conn: &Connection) -> Self {
        let calc = conn.calculus();
        let k = calc.dim();
        let images = (0..k)
            .map(|g| {
                let mut t = Tensor::zeros(calc, &XF);
                for h in 0..k {
                    let l = Tensor::basis(calc, &[Slot::Field], &[h]).expect("positions in range");
                    t = &t + &l.tensor(&conn.connection_form(h, g)).expect("same calculus");
                }
                t
            })
            .collect();
        DualConnection { conn: conn.clone(), images }
    }

    pub fn connection(&self) -> &Connection {
        &self.conn
    }

    /// `nabla* l_g = l_h (x) omega^h_g`.
    pub fn basis_image(&self, g: usize) -> &Tensor {
        &self.images[g]
    }

    /// `nabla*` on vector fields and on vector-field valued forms (slots `Field, Form, ..`),
    /// via `nabla*(l_a (x) beta) = nabla* l_a (x) beta + l_a (x) d beta`. Form parts are
    /// raw tensor representatives.
    pub fn apply(&self, t: &Tensor) -> Result<Tensor> {
        let calc = self.conn.calculus();
        if t.calculus() != calc {
            return Err(Error::CalculusMismatch);
        }
        if t.rank() == 0 || t.slots()[0] != Slot::Field || t.slots()[1..].iter().any(|s| *s != Slot::Form) {
            return Err(Error::SlotMismatch);
        }
        let mut slots = t.slots().to_vec();
        slots.push(Slot::Form);
        let mut out = Tensor::zeros(calc, &slots);
        for (a, beta) in split_field(t).into_iter().enumerate() {
            if beta.is_zero() {
                continue;
            }
            let first = self.images[a].tensor(&beta)?;
            let d = if beta.rank() == 0 { calc.differential(&beta.function(0)) } else { d_raw(&beta)? };
            let second = Tensor::basis(calc, &[Slot::Field], &[a])?.tensor(&d)?;
            out = &(&out + &first) + &second;
        }
        Ok(out)
    }

    /// `<gamma, nabla* mu> = d<gamma, mu> - <nabla gamma, mu>` for `gamma = e_z theta^h`
    /// and `mu = l_g e_w` over all generators and points.
    pub fn check_defining_identity(&self) -> Result<bool> {
        let calc = self.conn.calculus();
        let k = calc.dim();
        let n = calc.n();
        for h in 0..k {
            for z in 0..n {
                let gamma = Tensor::basis(calc, &[Slot::Form], &[h])?.left_mul(&GroupFunction::delta(n, z));
                let ngamma = self.conn.nabla(&gamma)?;
                for g in 0..k {
                    for w in 0..n {
                        let mu = Tensor::basis(calc, &[Slot::Field], &[g])?.right_mul(&GroupFunction::delta(n, w));
                        let lhs = pairing(&gamma, &self.apply(&mu)?, 1)?;
                        let scalar = pairing(&gamma, &mu, 1)?.function(0);
                        let rhs = &calc.differential(&scalar) - &pairing(&ngamma, &mu, 1)?;
                        if lhs != rhs {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// `nabla*(mu f) = (nabla* mu) f + mu (x) df` for basis fields and delta functions.
    pub fn check_right_leibniz(&self) -> Result<bool> {
        let calc = self.conn.calculus();
        let n = calc.n();
        for g in 0..calc.dim() {
            let mu = Tensor::basis(calc, &[Slot::Field], &[g])?;
            let nmu = self.apply(&mu)?;
            for z in 0..n {
                let f = GroupFunction::delta(n, z);
                let lhs = self.apply(&mu.right_mul(&f))?;
                let rhs = &nmu.right_mul(&f) + &mu.tensor(&calc.differential(&f))?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The transpose of `Psi`, characterized by `<gamma, Psi*(a (x) mu)> = <Psi(gamma (x) a), mu>`.
    pub fn psi_star(&self) -> Result<PsiStar> {
        PsiStar::from_psi(&self.conn.psi()?)
    }

    /// Product connection on `X (x) X`: `(id (x) Psi*)(nabla* u (x) v) + u (x) nabla* v`.
    pub fn extend_to_fields(&self, t: &Tensor) -> Result<Tensor> {
        let psi_star = self.psi_star()?;
        self.extend_with(&psi_star, t)
    }

    fn extend_with(&self, psi_star: &PsiStar, t: &Tensor) -> Result<Tensor> {
        let calc = self.conn.calculus();
        if t.calculus() != calc {
            return Err(Error::CalculusMismatch);
        }
        if t.slots() != XX {
            return Err(Error::SlotMismatch);
        }
        let mut out = Tensor::zeros(calc, &[Slot::Field, Slot::Field, Slot::Form]);
        for (a, beta) in split_field(t).into_iter().enumerate() {
            if beta.is_zero() {
                continue;
            }
            let la = Tensor::basis(calc, &[Slot::Field], &[a])?;
            let first = psi_star.apply(&self.images[a].tensor(&beta)?, 1)?;
            let second = la.tensor(&self.apply(&beta)?)?;
            out = &(&out + &first) + &second;
        }
        Ok(out)
    }

    /// `nabla*` and its product extension map constant tensors to constant tensors.
    pub fn preserves_constancy(&self) -> Result<bool> {
        if !self.images.iter().all(Tensor::is_constant) {
            return Ok(false);
        }
        let calc = self.conn.calculus();
        let k = calc.dim();
        let psi_star = self.psi_star()?;
        for a in 0..k {
            for b in 0..k {
                let word = Tensor::basis(calc, &XX, &[a, b])?;
                if !self.extend_with(&psi_star, &word)?.is_constant() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Bimodule map `1-forms (x) fields -> fields (x) 1-forms` dual to `Psi`.
#[derive(Clone, Debug)]
pub struct PsiStar {
    k: usize,
    images: Vec<Tensor>,
}

impl PsiStar {
    /// `Psi*(theta^h (x) l_g) = sum_p l_p (x) <Psi(theta^p (x) theta^h), l_g>`.
    pub fn from_psi(psi: &Psi) -> Result<Self> {
        let calc = psi.calculus();
        let k = calc.dim();
        let mut images = Vec::with_capacity(k * k);
        for h in 0..k {
            for g in 0..k {
                let lg = Tensor::basis(calc, &[Slot::Field], &[g])?;
                let mut t = Tensor::zeros(calc, &XF);
                for p in 0..k {
                    let inner = pairing(psi.image(p, h), &lg, 1)?;
                    t = &t + &Tensor::basis(calc, &[Slot::Field], &[p])?.tensor(&inner)?;
                }
                images.push(t);
            }
        }
        Ok(PsiStar { k, images })
    }

    /// Image of `theta^h (x) l_g` for positions.
    pub fn image(&self, h: usize, g: usize) -> &Tensor {
        &self.images[h * self.k + g]
    }

    /// Applies the map on slots `slot, slot + 1`.
    pub fn apply(&self, t: &Tensor, slot: usize) -> Result<Tensor> {
        if slot + 2 > t.rank() || t.slots()[slot..slot + 2] != FX {
            return Err(Error::SlotMismatch);
        }
        t.map_pair(slot, |h, g| self.image(h, g).clone())
    }
}

/// Torsion and first Bianchi identity read off the canonical form.
#[derive(Clone, Debug)]
pub struct CanonicalFormReport {
    /// `Theta^g` as 2-forms, from `nabla* Xi = l_g (x) Theta^g`.
    pub theta: Vec<Tensor>,
    /// `D Theta^g` as antisymmetrized rank 3 tensors, from `(nabla*)^2 Xi`.
    pub d_theta: Vec<Tensor>,
    /// `Omega^g_g' theta^g'`, antisymmetrized.
    pub curvature_theta: Vec<Tensor>,
    /// `D Theta^g = Omega^g_g' theta^g'` for every `g`.
    pub bianchi: bool,
}

/// Applies `nabla*` to `Xi` once and twice and compares with torsion and curvature.
pub fn canonical_form_and_torsion(conn: &Connection) -> Result<CanonicalFormReport> {
    let calc = conn.calculus();
    let sigma = SigmaOperator::new(calc)?;
    let dual = DualConnection::new(conn);
    let xi = canonical_form(calc);
    let once = dual.apply(&xi)?;
    let twice = dual.apply(&once)?;
    let k = calc.dim();
    let theta = split_field(&once).iter().map(|t| sigma.project(t)).collect::<Result<Vec<_>>>()?;
    let d_theta = split_field(&twice).iter().map(|t| sigma.antisymmetrize3(t, 0)).collect::<Result<Vec<_>>>()?;
    let mut curvature_theta = Vec::with_capacity(k);
    for g in 0..k {
        let mut t = Tensor::zeros(calc, &[Slot::Form; 3]);
        for gp in 0..k {
            let th = Tensor::basis(calc, &[Slot::Form], &[gp])?;
            t = &t + &conn.curvature_raw(g, gp)?.tensor(&th)?;
        }
        curvature_theta.push(sigma.antisymmetrize3(&t, 0)?);
    }
    let bianchi = d_theta == curvature_theta;
    Ok(CanonicalFormReport { theta, d_theta, curvature_theta, bianchi })
}

/// Both ways of differentiating a metric.
#[derive(Clone, Debug)]
pub struct MetricCompatibility {
    /// The product connection applied to the metric, slots `Field, Field, Form`.
    pub derivative: Tensor,
    /// `<theta^p (x) theta^q, derivative>` for each pair of positions.
    pub paired: Vec<Tensor>,
    /// `d<theta^p (x) theta^q, g> - <nabla(theta^p (x) theta^q), g>` for each pair.
    pub by_duality: Vec<Tensor>,
    /// The two computations coincide.
    pub routes_agree: bool,
    /// The derivative vanishes.
    pub compatible: bool,
}

/// Differentiates a metric with the product of dual connections and through the pairing.
pub fn metric_compatibility(conn: &Connection, metric: &Tensor) -> Result<MetricCompatibility> {
    let calc = conn.calculus();
    if metric.calculus() != calc {
        return Err(Error::CalculusMismatch);
    }
    if metric.slots() != XX {
        return Err(Error::SlotMismatch);
    }
    let dual = DualConnection::new(conn);
    let derivative = dual.extend_to_fields(metric)?;
    let k = calc.dim();
    let mut paired = Vec::with_capacity(k * k);
    let mut by_duality = Vec::with_capacity(k * k);
    for p in 0..k {
        for q in 0..k {
            let word = Tensor::basis(calc, &[Slot::Form, Slot::Form], &[p, q])?;
            paired.push(pairing(&word, &derivative, 2)?);
            let scalar = pairing(&word, metric, 2)?.function(0);
            let nw = conn.extend_to_tensor(&word)?;
            by_duality.push(&calc.differential(&scalar) - &pairing(&nw, metric, 2)?);
        }
    }
    let routes_agree = paired == by_duality;
    let compatible = derivative.is_zero();
    Ok(MetricCompatibility { derivative, paired, by_duality, routes_agree, compatible })
}

/// Metric `l_g (x) l_g' g^{g,g'}` from right coefficient functions in pair order.
pub fn metric_from_right(calc: &DifferentialCalculus, coeffs: Vec<GroupFunction>) -> Result<Tensor> {
    Tensor::from_right_functions(calc, &XX, coeffs)
}

/// Symmetry flags of a metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetricSymmetry {
    /// `sigma_X g = g`; `None` when the calculus is not bicovariant.
    pub s_symmetric: Option<bool>,
    /// Constant coefficients.
    pub left_invariant: bool,
}

pub fn metric_symmetry(metric: &Tensor) -> Result<MetricSymmetry> {
    if metric.slots() != XX {
        return Err(Error::SlotMismatch);
    }
    let s_symmetric = if metric.calculus().is_bicovariant() { Some(sigma_x(metric, 0)? == *metric) } else { None };
    Ok(MetricSymmetry { s_symmetric, left_invariant: metric.is_constant() })
}

/// The dual connection forms `omega^h_g` have constant coefficients.
pub fn verify_dual_invariance(conn: &Connection) -> bool {
    let dual = DualConnection::new(conn);
    (0..conn.calculus().dim()).all(|g| dual.basis_image(g).is_constant())
}

/// Dual of the connection with `Gamma = 0`: `sigma'(rho (x) X) - X (x) rho`.
/// The opposite sign would give `nabla(X f) = (nabla X) f - X (x) df`.
pub fn nabla_sigma_prime(x: &Tensor) -> Result<Tensor> {
    let calc = x.calculus();
    if x.slots() != [Slot::Field] {
        return Err(Error::SlotMismatch);
    }
    let rho = calc.rho();
    Ok(&sigma_prime(&rho.tensor(x)?, 0)? - &x.tensor(&rho)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{c_connection, nabla_sigma};
    use crate::group::FiniteGroup;
    use crate::linalg::int;

    fn s3(hat: &[&str]) -> DifferentialCalculus {
        let g = FiniteGroup::symmetric(3).unwrap();
        let h: Vec<usize> = hat.iter().map(|n| g.element(n).unwrap()).collect();
        DifferentialCalculus::from_hat(g, &h).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let c = s3(&["a", "b", "c"]);
        for h in 0..3 {
            for g in 0..3 {
                let th = Tensor::basis(&c, &[Slot::Form], &[h]).unwrap();
                let l = Tensor::basis(&c, &[Slot::Field], &[g]).unwrap();
                assert_eq!(pair(&th, &l).unwrap(), GroupFunction::constant(6, int((h == g) as i64)));
            }
        }
        let f = GroupFunction::from_i64(&[3, -1, 4, 1, -5, 9]);
        let grp = c.group();
        for g in 0..3 {
            let l = Tensor::basis(&c, &[Slot::Field], &[g]).unwrap();
            assert_eq!(pair(&c.differential(&f), &l).unwrap(), f.ell(grp, c.hat()[g]));
            let shifted = l.left_mul(&f.right_translate(grp, c.hat()[g]));
            assert_eq!(shifted, l.right_mul(&f));
        }
    }

    #[test]
    fn sigma_prime_examples() {
        let c = s3(&["a", "b", "c"]);
        let g = c.group();
        let (a, b) = (g.element("a").unwrap(), g.element("b").unwrap());
        let (pa, pb) = (c.position(a).unwrap(), c.position(b).unwrap());
        let t = Tensor::basis(&c, &FX, &[pa, pb]).unwrap();
        let conj = c.position(g.mul(g.mul(g.inv(b), a), b)).unwrap();
        assert_eq!(sigma_prime(&t, 0).unwrap(), Tensor::basis(&c, &XF, &[pb, conj]).unwrap());
        let z3 = DifferentialCalculus::universal(FiniteGroup::cyclic(3));
        let t = Tensor::basis(&z3, &FX, &[0, 1]).unwrap();
        assert_eq!(sigma_prime(&t, 0).unwrap(), Tensor::basis(&z3, &XF, &[1, 0]).unwrap());
    }

    #[test]
    fn dual_of_nabla_sigma_vanishes_on_basis() {
        let c = s3(&["a", "b", "c"]);
        let dual = DualConnection::new(&nabla_sigma(&c).unwrap());
        for g in 0..3 {
            assert!(dual.basis_image(g).is_zero());
            let l = Tensor::basis(&c, &[Slot::Field], &[g]).unwrap();
            assert!(nabla_sigma_prime(&l).unwrap().is_zero());
        }
        let x = Tensor::vector_field(&c, vec![GroupFunction::from_i64(&[1, 2, 3, 4, 5, 6]); 3]);
        assert_eq!(dual.apply(&x).unwrap(), nabla_sigma_prime(&x).unwrap());
        let rho = c.rho();
        let swapped = &x.tensor(&rho).unwrap() - &sigma_prime(&rho.tensor(&x).unwrap(), 0).unwrap();
        assert_eq!(swapped, -&nabla_sigma_prime(&x).unwrap());
        assert!(!swapped.is_zero());
    }

    #[test]
    fn dual_identities_for_c_connection() {
        let c = s3(&["a", "b", "c"]);
        let dual = DualConnection::new(&c_connection(&c));
        assert!(dual.check_defining_identity().unwrap());
        assert!(dual.check_right_leibniz().unwrap());
        let report = canonical_form_and_torsion(&c_connection(&c)).unwrap();
        assert!(report.theta.iter().all(Tensor::is_zero));
        assert!(report.bianchi);
    }

    #[test]
    fn metric_routes() {
        let c = s3(&["a", "b", "c"]);
        let conn = nabla_sigma(&c).unwrap();
        let constant = metric_from_right(&c, (0..9).map(|i| GroupFunction::constant(6, int(i))).collect()).unwrap();
        let r = metric_compatibility(&conn, &constant).unwrap();
        assert!(r.routes_agree && r.compatible);
        let mut fs = vec![GroupFunction::zero(6); 9];
        fs[0] = GroupFunction::delta(6, 2);
        let delta = metric_from_right(&c, fs).unwrap();
        let r = metric_compatibility(&conn, &delta).unwrap();
        assert!(r.routes_agree && !r.compatible);
    }
}
