//! Sampled verification of the norm axioms and tensor identities.

use serde::{Deserialize, Serialize};

use super::linalg::Vector;
use super::norm::{DerivativeMode, MinkowskiNorm, NormSpec};
use super::sampling::directions;

/// Minimum number of sampled directions.
pub const MIN_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// An identity that holds exactly for any Minkowski norm.
    Identity,
    /// Agreement of the configured derivative route with an independent one.
    CrossCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub kind: CheckKind,
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub spec: NormSpec,
    pub sample_count: usize,
    /// Set when the parameters violate the norm axioms; no samples are run.
    pub params_error: Option<String>,
    pub min_eigenvalue: Option<f64>,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Validates a norm given by its JSON spec; construction errors land in the
/// report instead of failing the call.
pub fn validate_spec(spec: &NormSpec, sample_count: usize) -> ValidationReport {
    match spec.build() {
        Ok(norm) => validate_norm(&norm, sample_count),
        Err(e) => ValidationReport {
            spec: spec.clone(),
            sample_count: 0,
            params_error: Some(e.to_string()),
            min_eigenvalue: None,
            checks: Vec::new(),
            pass: false,
        },
    }
}

struct Acc {
    name: &'static str,
    kind: CheckKind,
    tol: f64,
    worst: f64,
}

impl Acc {
    fn new(name: &'static str, kind: CheckKind, tol: f64) -> Self {
        Self { name, kind, tol, worst: 0.0 }
    }

    fn push(&mut self, v: f64) {
        // NaN counts as an infinite violation
        self.worst = if v.is_nan() { f64::INFINITY } else { self.worst.max(v) };
    }

    fn fail(&mut self) {
        self.worst = f64::INFINITY;
    }

    fn finish(self) -> IdentityCheck {
        IdentityCheck {
            name: self.name.to_string(),
            kind: self.kind,
            max_violation: self.worst,
            tolerance: self.tol,
            pass: self.worst <= self.tol,
        }
    }
}

pub fn validate_norm(norm: &MinkowskiNorm, sample_count: usize) -> ValidationReport {
    let count = sample_count.max(MIN_SAMPLES);
    let fd = norm.mode() == DerivativeMode::FiniteDifference;
    let (t_f, t_id, t_c) = if fd { (1e-8, 1e-6, 1e-6) } else { (1e-12, 1e-10, 1e-10) };
    let reference =
        if fd { norm.with_mode(DerivativeMode::ForwardAd) } else { norm.with_mode(DerivativeMode::FiniteDifference) };

    let mut homog = Acc::new("homogeneity", CheckKind::Identity, t_f);
    let mut g_homog = Acc::new("metric_zero_homogeneity", CheckKind::Identity, t_id);
    let mut euler = Acc::new("euler_identity", CheckKind::Identity, t_id);
    let mut sym = Acc::new("tensor_symmetry", CheckKind::Identity, t_id);
    let mut pd = Acc::new("positive_definite", CheckKind::Identity, 0.0);
    let mut cy = Acc::new("cartan_contraction", CheckKind::Identity, t_c);
    let t_l = if fd { t_id } else { 1e-10 };
    let mut round = Acc::new("legendre_round_trip", CheckKind::Identity, t_l);
    let mut dual = Acc::new("dual_norm_of_legendre", CheckKind::Identity, t_l);
    let mut x_g = Acc::new("metric_crosscheck", CheckKind::CrossCheck, 1e-6);
    let mut x_c = Acc::new("cartan_crosscheck", CheckKind::CrossCheck, 1e-5);
    // closed forms are also compared with forward-mode jets, which agree to
    // rounding where the differenced route cannot
    let jets = (norm.mode() == DerivativeMode::Analytic).then(|| norm.with_mode(DerivativeMode::ForwardAd));
    let mut x_ad = Acc::new("forward_ad_crosscheck", CheckKind::CrossCheck, 1e-10);
    let mut min_eig = f64::INFINITY;

    for (k, u) in directions(norm.dim(), count).into_iter().enumerate() {
        let y: Vector = u.scale(0.5 + (k % 7) as f64 / 3.0);
        let Ok(f) = norm.eval(&y) else {
            homog.fail();
            continue;
        };
        for lambda in [0.5, 2.0, 10.0] {
            match norm.eval(&y.scale(lambda)) {
                Ok(fl) => homog.push((fl - lambda * f).abs() / (lambda * f)),
                Err(_) => homog.fail(),
            }
        }
        let g = match norm.metric(&y) {
            Ok(g) => g,
            Err(_) => {
                pd.fail();
                min_eig = min_eig.min(f64::NEG_INFINITY);
                continue;
            }
        };
        let ev = g.symmetric_eigenvalues();
        min_eig = min_eig.min(ev[0]);
        pd.push(if ev[0] > 0.0 { 0.0 } else { f64::INFINITY });
        sym.push(g.asymmetry() / g.max_abs());
        euler.push((g.bilinear(y.as_slice(), y.as_slice()) - f * f).abs() / (f * f));
        match norm.metric(&y.scale(3.0)) {
            Ok(g3) => g_homog.push(g3.max_abs_diff(&g) / g.max_abs()),
            Err(_) => g_homog.fail(),
        }
        match norm.cartan(&u) {
            Ok(c) => {
                sym.push(c.asymmetry());
                cy.push(c.contract_last(u.as_slice()).max_abs());
                if let Ok(cr) = reference.cartan(&u) {
                    x_c.push(c.max_abs_diff(&cr));
                } else {
                    x_c.fail();
                }
            }
            Err(_) => cy.fail(),
        }
        if let Some(jets) = &jets {
            match (jets.metric(&y), jets.cartan(&u), norm.cartan(&u)) {
                (Ok(ga), Ok(ca), Ok(c)) => x_ad.push((ga.max_abs_diff(&g) / g.max_abs()).max(ca.max_abs_diff(&c))),
                _ => x_ad.fail(),
            }
        }
        match reference.metric(&y) {
            Ok(gr) => x_g.push(gr.max_abs_diff(&g) / g.max_abs()),
            Err(_) => x_g.fail(),
        }
        match norm.legendre(&y) {
            Ok(l) => {
                match norm.legendre_inv(&l) {
                    Ok(back) => round.push((back - y).euclidean_norm() / y.euclidean_norm()),
                    Err(_) => round.fail(),
                }
                match norm.dual_norm(&l) {
                    Ok(fs) => dual.push((fs - f).abs() / f),
                    Err(_) => dual.fail(),
                }
            }
            Err(_) => {
                round.fail();
                dual.fail();
            }
        }
    }

    let mut accs = vec![homog, g_homog, euler, sym, pd, cy, round, dual, x_g, x_c];
    if jets.is_some() {
        accs.push(x_ad);
    }
    let checks: Vec<IdentityCheck> = accs.into_iter().map(Acc::finish).collect();
    let pass = checks.iter().all(|c| c.pass);
    ValidationReport {
        spec: norm.to_spec(),
        sample_count: count,
        params_error: None,
        min_eigenvalue: Some(min_eig),
        checks,
        pass,
    }
}
