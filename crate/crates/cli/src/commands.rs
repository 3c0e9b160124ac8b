//! Subcommand implementations. Each returns a JSON payload, a plain text rendering
//! and optionally DOT documents.

use std::fmt::Write;
use std::path::Path;
use std::sync::Arc;

use finitegeo_core::action::{covariant_calculi, irreducible, pair_orbits, GSet, SetCalculus};
use finitegeo_core::braid::{inner_automorphism_count, SigmaOperator};
use finitegeo_core::calculus::{describe_hat, enumerate_bicovariant, enumerate_left_covariant};
use finitegeo_core::connection::{
    c_connection, canonical_connection, nabla_sigma, restricted_triples, sigma_family, solve_invariant, Connection,
};
use finitegeo_core::dual::{metric_compatibility, metric_symmetry};
use finitegeo_core::invariants::{pattern_matrix, solve_bi_invariant, solve_symmetry, SymmetryKind};
use finitegeo_core::{DifferentialCalculus, FiniteGroup, Rational};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{usage, Result};
use crate::json::{self, document};
use crate::spec;

/// Outcome of a successful command.
pub struct Report {
    pub payload: Value,
    pub text: String,
    pub dot: Option<String>,
}

impl Report {
    fn new(payload: Value, text: String) -> Self {
        Report { payload: document(payload), text, dot: None }
    }

    fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }
}

/// How a command names its group.
#[derive(Clone, Debug, Default)]
pub struct GroupSource {
    pub spec: Option<String>,
    pub generators: Option<String>,
    pub degree: Option<usize>,
}

impl GroupSource {
    pub fn resolve(&self) -> Result<FiniteGroup> {
        let bound = spec::max_order()?;
        match (&self.spec, &self.generators) {
            (Some(_), Some(_)) => Err(usage("give either a group spec or --group-generators, not both")),
            (Some(s), None) => spec::parse_group(s, bound),
            (None, Some(gens)) => {
                let (degree, perms) = spec::parse_generators(gens, self.degree)?;
                Ok(FiniteGroup::permutation_group_bounded(degree, &perms, bound)?)
            }
            (None, None) => Err(usage("a group is required; pass --group SPEC or --group-generators PERMS")),
        }
    }
}

/// How a command names its calculus.
#[derive(Clone, Debug, Default)]
pub struct CalculusSource {
    pub group: GroupSource,
    pub hat: String,
    pub file: Option<String>,
}

impl CalculusSource {
    pub fn resolve(&self) -> Result<DifferentialCalculus> {
        if let Some(path) = &self.file {
            if self.group.spec.is_some() || self.group.generators.is_some() {
                return Err(usage("--calculus already names the group; drop --group"));
            }
            return json::calculus_from_value(&json::read_file(Path::new(path))?);
        }
        let g = Arc::new(self.group.resolve()?);
        let hat = spec::parse_hat(&g, &self.hat)?;
        Ok(DifferentialCalculus::from_hat(g, &hat)?)
    }
}

fn names(g: &FiniteGroup, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| g.display_name(x).to_string()).collect()
}

fn hat_names(c: &DifferentialCalculus) -> Vec<String> {
    names(c.group(), c.hat())
}

pub fn group_info(src: &GroupSource) -> Result<Report> {
    let g = src.resolve()?;
    let conj = g.conjugacy();
    let classes: Vec<Vec<String>> = conj.classes.iter().map(|c| names(&g, c)).collect();
    let orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
    let mut payload = json::group_value(&g);
    let extra = json!({
        "abelian": g.is_abelian(),
        "classes": classes,
        "center": names(&g, &conj.center),
        "element_orders": orders,
        "inner_automorphisms": conj.ad_order,
    });
    payload.as_object_mut().expect("object").extend(extra.as_object().expect("object").clone());
    let mut text = String::new();
    let _ = writeln!(text, "order {}{}", g.order(), if g.is_abelian() { ", abelian" } else { "" });
    let _ = writeln!(text, "{} conjugacy classes", classes.len());
    for c in &classes {
        let _ = writeln!(text, "  {{{}}}", c.join(", "));
    }
    let _ = writeln!(text, "center {{{}}}", names(&g, &conj.center).join(", "));
    Ok(Report::new(payload, text))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Covariance {
    Left,
    Bi,
}

pub fn calculi_list(src: &GroupSource, covariance: Covariance) -> Result<Report> {
    let g = src.resolve()?;
    let list = match covariance {
        Covariance::Left => enumerate_left_covariant(g.clone())?,
        Covariance::Bi => enumerate_bicovariant(g.clone())?,
    };
    let mut text = String::new();
    let mut dot = String::new();
    let entries: Vec<Value> = list
        .iter()
        .map(|c| {
            let _ = writeln!(
                text,
                "dim {:>2}  {}{}",
                c.dim(),
                describe_hat(c),
                if c.is_bicovariant() { "  bicovariant" } else { "" }
            );
            dot.push_str(&c.to_dot());
            json!({ "hatG": c.hat(), "names": hat_names(c), "dim": c.dim(), "bicovariant": c.is_bicovariant() })
        })
        .collect();
    let kind = match covariance {
        Covariance::Left => "left",
        Covariance::Bi => "bi",
    };
    let label = if covariance == Covariance::Bi { "bicovariant" } else { "left-covariant" };
    let _ = writeln!(text, "{} {label} calculi", list.len());
    let payload =
        json!({ "group": json::group_value(&g), "covariance": kind, "count": list.len(), "calculi": entries });
    Ok(Report::new(payload, text).with_dot(dot))
}

pub fn calculus_show(src: &CalculusSource) -> Result<Report> {
    let c = src.resolve()?;
    let cov = c.covariance();
    let mut payload = json::calculus_value(&c);
    let extra = json!({
        "names": hat_names(&c),
        "dim": c.dim(),
        "edges": c.edges().len(),
        "left_covariant": cov.left,
        "right_covariant": cov.right,
        "bicovariant": cov.bi,
    });
    payload.as_object_mut().expect("object").extend(extra.as_object().expect("object").clone());
    let text = format!(
        "hatG {}\ndim {}, {} edges\nleft covariant {}, right covariant {}, bicovariant {}\n",
        describe_hat(&c),
        c.dim(),
        c.edges().len(),
        cov.left,
        cov.right,
        cov.bi
    );
    Ok(Report::new(payload, text).with_dot(c.to_dot()))
}

pub fn braid_order(src: &CalculusSource) -> Result<Report> {
    let c = src.resolve()?;
    let sigma = SigmaOperator::new(&c)?;
    let order = sigma.order();
    let ad = inner_automorphism_count(c.group());
    let payload = json!({ "order": order, "inner_automorphisms": ad });
    let text = format!("sigma has order {order}; the inner automorphism group has order {ad}\n");
    Ok(Report::new(payload, text))
}

pub fn braid_decompose(src: &CalculusSource) -> Result<Report> {
    let c = src.resolve()?;
    let sigma = SigmaOperator::new(&c)?;
    let d = sigma.decompose();
    let basis = |b: &[Vec<Rational>]| Value::Array(b.iter().map(|v| json::rationals(v)).collect());
    let payload = json!({
        "braid_relation": sigma.braid_check(),
        "dims": { "ker_a": d.ker_a.len(), "im_a": d.im_a.len(), "ker_s": d.ker_s.len(), "im_s": d.im_s.len() },
        "ker_a": basis(&d.ker_a),
        "im_a": basis(&d.im_a),
        "ker_s": basis(&d.ker_s),
        "im_s": basis(&d.im_s),
        "two_forms": sigma.two_form_basis().dim(),
    });
    let text = format!(
        "ker A {}, im A {}, ker S {}, im S {}\n2-forms per point {}\nbraid relation {}\n",
        d.ker_a.len(),
        d.im_a.len(),
        d.ker_s.len(),
        d.im_s.len(),
        sigma.two_form_basis().dim(),
        if sigma.braid_check() { "holds" } else { "fails" }
    );
    Ok(Report::new(payload, text))
}

pub fn connection_solve(
    src: &CalculusSource,
    bi_invariant: bool,
    torsion_free: bool,
    at: Option<&str>,
) -> Result<Report> {
    let c = src.resolve()?;
    let fam = solve_invariant(&c, bi_invariant, torsion_free)?;
    let dim = fam.dim();
    let particular = fam.particular();
    let directions: Vec<Value> = (0..dim)
        .map(|i| {
            let mut p = vec![Rational::zero(); dim];
            p[i] = Rational::one();
            let diff = Connection::from_functions(
                &c,
                fam.connection(&p)
                    .gamma_functions()
                    .iter()
                    .zip(particular.gamma_functions())
                    .map(|(a, b)| a - b)
                    .collect(),
            )
            .expect("same calculus");
            json::gamma_value(&diff)
        })
        .collect();
    let mut payload = json!({
        "parameters": dim,
        "bi_invariant": bi_invariant,
        "torsion_free": torsion_free,
        "particular": document(json::connection_value(&particular)),
        "directions": directions,
    });
    let mut text = format!("{dim} free parameters\n");
    if let Some(at) = at {
        let params = spec::parse_rationals(at)?;
        if params.len() != dim {
            return Err(usage(format!("--at needs {dim} values, got {}", params.len())));
        }
        payload["connection"] = document(json::connection_value(&fam.connection(&params)));
        let _ = writeln!(text, "member at ({at}) included as `connection`");
    }
    Ok(Report::new(payload, text))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum NamedConnection {
    /// Vanishing coefficients in the Maurer-Cartan basis.
    C,
    /// The connection built from the braid operator.
    Sigma,
    /// The canonical connection of a universal calculus.
    Canonical,
    /// The sigma family member with lambda one on the last power only.
    SigmaInverse,
}

pub fn connection_named(src: &CalculusSource, name: NamedConnection, lambda: Option<&str>) -> Result<Report> {
    let c = src.resolve()?;
    let conn = match (name, lambda) {
        (NamedConnection::Sigma, Some(l)) => sigma_family(&c, &spec::parse_rationals(l)?)?,
        (_, Some(_)) => return Err(usage("--lambda applies to the sigma connection only")),
        (NamedConnection::C, None) => c_connection(&c),
        (NamedConnection::Sigma, None) => nabla_sigma(&c)?,
        (NamedConnection::Canonical, None) => {
            if !c.is_universal() {
                return Err(finitegeo_core::Error::NotUniversal.into());
            }
            canonical_connection(&c)
        }
        (NamedConnection::SigmaInverse, None) => {
            let mut l = vec![Rational::zero(); SigmaOperator::new(&c)?.order()];
            *l.last_mut().expect("nonempty group") = Rational::one();
            sigma_family(&c, &l)?
        }
    };
    Ok(connection_report(&conn))
}

fn connection_report(conn: &Connection) -> Report {
    let payload = json::connection_value(conn);
    let text = serde_json::to_string_pretty(&document(payload.clone())).expect("serializable") + "\n";
    Report::new(payload, text)
}

pub fn connection_show(file: &str) -> Result<Report> {
    Ok(connection_report(&json::connection_from_value(&json::read_file(Path::new(file))?)?))
}

/// Which analyses to run; all of them when none is selected.
#[derive(Clone, Copy, Debug, Default)]
pub struct Analyses {
    pub torsion: bool,
    pub curvature: bool,
    pub extensible: bool,
}

pub fn connection_analyze(file: &str, which: Analyses) -> Result<Report> {
    let conn = json::connection_from_value(&json::read_file(Path::new(file))?)?;
    let c = conn.calculus();
    let all = !(which.torsion || which.curvature || which.extensible);
    let k = c.dim();
    let mut payload = json!({ "left_invariant": conn.is_left_invariant() });
    let mut text = format!("calculus {} on a group of order {}\n", describe_hat(c), c.n());
    let _ = writeln!(text, "left invariant {}", conn.is_left_invariant());
    if c.is_bicovariant() {
        let bi = conn.is_bi_invariant()?;
        payload["bi_invariant"] = json!(bi);
        let _ = writeln!(text, "bi-invariant {bi}");
    }
    if all || which.torsion {
        // projected torsion needs the braid operator
        let mut nonzero = Vec::new();
        for h in 0..k {
            let t = if c.is_bicovariant() { conn.torsion(h)? } else { conn.torsion_raw(h)? };
            if !t.is_zero() {
                nonzero.push(c.group().display_name(c.hat()[h]).to_string());
            }
        }
        payload["torsion_free"] = json!(nonzero.is_empty());
        payload["torsion_nonzero"] = json!(nonzero);
        payload["torsion_projected"] = json!(c.is_bicovariant());
        let _ = writeln!(text, "torsion free {}", nonzero.is_empty());
    }
    if all || which.curvature {
        let flat_raw = conn.is_flat_raw()?;
        payload["flat_raw"] = json!(flat_raw);
        let _ = writeln!(text, "flat before projection {flat_raw}");
        if c.is_bicovariant() {
            let flat = conn.is_flat()?;
            payload["flat"] = json!(flat);
            let _ = writeln!(text, "flat {flat}");
        }
        if conn.is_left_invariant() && c.is_universal() {
            let rep = conn.flatness_representation()?;
            payload["representation"] = json!(rep);
            let _ = writeln!(text, "coefficient matrices form a representation {rep}");
        }
    }
    if all || which.extensible {
        let ext = conn.extensibility();
        let g = c.group();
        let violations: Vec<Vec<String>> = ext.violations.iter().map(|&(a, b, d)| names(g, &[a, b, d])).collect();
        payload["extensible"] = json!(ext.extensible);
        payload["violations"] = json!(violations);
        let restricted: Vec<Vec<String>> =
            restricted_triples(c).iter().map(|&(h, j, l)| names(g, &[h, j, l])).collect();
        payload["restricted"] = json!(restricted);
        let _ = writeln!(text, "extensible {}", ext.extensible);
        for v in &violations {
            let _ = writeln!(text, "  nonzero Gamma^{}_{{{},{}}} outside the support", v[0], v[1], v[2]);
        }
    }
    Ok(Report::new(payload, text))
}

/// Tensor space to solve for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TensorKind {
    SSym,
    SAntisym,
    WSym,
    WAntisym,
    Bi,
}

pub fn tensors_invariant(src: &CalculusSource, kind: TensorKind, pattern: bool, order: Option<&str>) -> Result<Report> {
    let c = src.resolve()?;
    let space = match kind {
        TensorKind::Bi => solve_bi_invariant(&c)?,
        TensorKind::SSym => solve_symmetry(&c, SymmetryKind::StrongSymmetric)?,
        TensorKind::SAntisym => solve_symmetry(&c, SymmetryKind::StrongAntisymmetric)?,
        TensorKind::WSym => solve_symmetry(&c, SymmetryKind::WeakSymmetric)?,
        TensorKind::WAntisym => solve_symmetry(&c, SymmetryKind::WeakAntisymmetric)?,
    };
    let kind_name = match kind {
        TensorKind::Bi => "bi",
        TensorKind::SSym => "s-sym",
        TensorKind::SAntisym => "s-antisym",
        TensorKind::WSym => "w-sym",
        TensorKind::WAntisym => "w-antisym",
    };
    let basis: Vec<Value> = space.basis().iter().map(|v| json::constant_coeffs_value(&c, v)).collect();
    let mut payload = json!({ "kind": kind_name, "dim": space.dim(), "basis": basis });
    let mut text = format!("{} invariant tensors of kind {kind_name}: dimension {}\n", describe_hat(&c), space.dim());
    if pattern {
        let order = match order {
            Some(o) => Some(
                spec::split_top(o, ',')
                    .into_iter()
                    .map(|n| Ok(c.try_position(c.group().element(n)?)?))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        let pm = pattern_matrix(&space, order.as_deref())?;
        let m = pm.size();
        let cells: Vec<Vec<String>> = (0..m).map(|r| (0..m).map(|col| pm.render_entry(r, col)).collect()).collect();
        let labels = names(c.group(), &pm.order.iter().map(|&p| c.hat()[p]).collect::<Vec<_>>());
        payload["pattern"] = json!({ "order": labels, "cells": cells });
        let _ = writeln!(text, "rows and columns {}", labels.join(", "));
        text.push_str(&pm.to_string());
    }
    Ok(Report::new(payload, text))
}

pub fn metric_check(metric_file: &str, connection_file: &str) -> Result<Report> {
    let conn = json::connection_from_value(&json::read_file(Path::new(connection_file))?)?;
    let metric = json::metric_from_value(conn.calculus(), &json::read_file(Path::new(metric_file))?)?;
    let compat = metric_compatibility(&conn, &metric)?;
    let sym = metric_symmetry(&metric)?;
    let payload = json!({
        "compatible": compat.compatible,
        "routes_agree": compat.routes_agree,
        "s_symmetric": sym.s_symmetric,
        "left_invariant": sym.left_invariant,
    });
    let mut text = format!("compatible {}\nroutes agree {}\n", compat.compatible, compat.routes_agree);
    if let Some(s) = sym.s_symmetric {
        let _ = writeln!(text, "sigma symmetric {s}");
    }
    let _ = writeln!(text, "left invariant {}", sym.left_invariant);
    Ok(Report::new(payload, text))
}

/// Point set for the action commands: a permutation group on `size` points, or a
/// group acting on itself by left translation.
pub fn action_set(src: &GroupSource, size: Option<usize>) -> Result<GSet> {
    let bound = spec::max_order()?;
    if let Some(gens) = &src.generators {
        if src.spec.is_some() {
            return Err(usage("give either --group or --group-generators, not both"));
        }
        let degree = src.degree.or(size);
        let (degree, perms) = spec::parse_generators(gens, degree)?;
        if let Some(s) = size {
            if s != degree {
                return Err(usage(format!("--set {s} disagrees with --degree {degree}")));
            }
        }
        return Ok(GSet::from_generators_bounded(degree, &perms, bound)?);
    }
    let g = src.resolve()?;
    if let Some(s) = size {
        if s != g.order() {
            return Err(usage(format!("left translation acts on {} points, not {s}", g.order())));
        }
    }
    Ok(GSet::left_translation(g))
}

fn one_based(edges: &[(usize, usize)]) -> Vec<[usize; 2]> {
    edges.iter().map(|&(x, y)| [x + 1, y + 1]).collect()
}

fn render_edges(edges: &[(usize, usize)]) -> String {
    edges.iter().map(|&(x, y)| format!("{}->{}", x + 1, y + 1)).collect::<Vec<_>>().join(" ")
}

pub fn action_orbits(src: &GroupSource, size: Option<usize>) -> Result<Report> {
    let gs = action_set(src, size)?;
    let orbits = pair_orbits(&gs);
    let mut text =
        format!("group of order {} on {} points: {} orbits of pairs\n", gs.group().order(), gs.size(), orbits.len());
    for (i, o) in orbits.iter().enumerate() {
        let _ = writeln!(text, "  O{}: {}", i + 1, render_edges(o));
    }
    let list: Vec<Value> = orbits.iter().map(|o| json!(one_based(o))).collect();
    let payload = json!({ "group_order": gs.group().order(), "points": gs.size(), "orbits": list });
    Ok(Report::new(payload, text))
}

pub fn action_calculi(src: &GroupSource, size: Option<usize>, only_irreducible: bool) -> Result<Report> {
    let gs = action_set(src, size)?;
    let list: Vec<SetCalculus> = if only_irreducible { irreducible(&gs) } else { covariant_calculi(&gs)? };
    let mut text = String::new();
    let mut dot = String::new();
    let entries: Vec<Value> = list
        .iter()
        .map(|sc| {
            let orbit_ids: Vec<usize> = sc.orbits.iter().map(|i| i + 1).collect();
            let _ = writeln!(text, "orbits {:?}: {}", orbit_ids, render_edges(&sc.edges));
            dot.push_str(&sc.to_dot());
            json!({ "orbits": orbit_ids, "edges": one_based(&sc.edges) })
        })
        .collect();
    let _ = writeln!(text, "{} covariant calculi", list.len());
    let payload = json!({ "points": gs.size(), "count": list.len(), "calculi": entries });
    Ok(Report::new(payload, text).with_dot(dot))
}
