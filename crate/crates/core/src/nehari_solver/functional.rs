use super::grid::{RadialPair, Stencil};
use crate::dimension::Dimension;
use crate::error::{Error, Result};

/// Which nonlinearity the energy uses: `|u|^(2*-1) v, |v|^(2*)` for `J`,
/// or `u₊^(2*-1) v, v₊^(2*)` for `J₊`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Signed,
    PositivePart,
}

/// Integrals entering the functionals, by trapezoid quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub dirichlet_u: f64,
    pub l2_u: f64,
    pub dirichlet_v: f64,
    /// `∫|v|^(2*)`
    pub critical_v: f64,
    /// `∫u₊^(2*-1) v`
    pub mixed_term: f64,
    /// `∫v₊^(2*)`
    pub critical_v_plus: f64,
    /// `∫|u|^(2*-1) v`
    pub mixed_abs: f64,
}

impl Norms {
    fn pick(&self, c: Convention) -> (f64, f64) {
        match c {
            Convention::Signed => (self.critical_v, self.mixed_abs),
            Convention::PositivePart => (self.critical_v_plus, self.mixed_term),
        }
    }

    /// `Q = ‖∇u‖² - λ‖u‖² + ‖∇v‖²/(2*-1)`, the quadratic part of `2J`.
    pub fn quadratic(&self, lambda: f64, dim: Dimension) -> f64 {
        self.dirichlet_u - lambda * self.l2_u + self.dirichlet_v / dim.p_minus_1().value()
    }

    /// `φ = μ ∫v^(2*) + 2* ∫u^(2*-1) v`, the admissibility mass.
    pub fn coupling_mass(&self, mu: f64, dim: Dimension, c: Convention) -> f64 {
        let (crit, mixed) = self.pick(c);
        mu * crit + dim.two_star().value() * mixed
    }

    /// `J = Q/2 - φ/(2*(2*-1))`.
    pub fn energy(&self, lambda: f64, mu: f64, dim: Dimension, c: Convention) -> f64 {
        let p = dim.two_star().value();
        0.5 * self.quadratic(lambda, dim) - self.coupling_mass(mu, dim, c) / (p * (p - 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalReport {
    pub j: f64,
    pub j_plus: f64,
    /// `H = G₁ + G₂/(2*-1)`
    pub h: f64,
    pub g: (f64, f64),
    pub admissible: bool,
    pub norms: Norms,
}

pub fn norms(pair: &RadialPair, st: &Stencil) -> Norms {
    let dim = pair.grid.dim;
    let p = dim.two_star();
    let pm1 = dim.p_minus_1();
    let n = pair.u.len();
    let mut l2 = Vec::with_capacity(n);
    let mut crit = Vec::with_capacity(n);
    let mut crit_plus = Vec::with_capacity(n);
    let mut mixed = Vec::with_capacity(n);
    let mut mixed_abs = Vec::with_capacity(n);
    for j in 0..n {
        let (u, v) = (pair.u[j], pair.v[j]);
        l2.push(u * u);
        let cv = p.pow(v.abs());
        crit.push(cv);
        crit_plus.push(if v > 0.0 { cv } else { 0.0 });
        let mu_abs = pm1.pow(u.abs());
        mixed_abs.push(mu_abs * v);
        mixed.push(if u > 0.0 { mu_abs * v } else { 0.0 });
    }
    Norms {
        dirichlet_u: st.dirichlet(&pair.u),
        l2_u: st.integral(l2.into_iter()),
        dirichlet_v: st.dirichlet(&pair.v),
        critical_v: st.integral(crit.into_iter()),
        mixed_term: st.integral(mixed.into_iter()),
        critical_v_plus: st.integral(crit_plus.into_iter()),
        mixed_abs: st.integral(mixed_abs.into_iter()),
    }
}

/// `J`, `J₊`, the Nehari constraints and admissibility of a pair.
pub fn evaluate(pair: &RadialPair, lambda: f64, mu: f64) -> FunctionalReport {
    let st = Stencil::new(&pair.grid);
    report_from(&norms(pair, &st), lambda, mu, pair.grid.dim)
}

pub(crate) fn report_from(nm: &Norms, lambda: f64, mu: f64, dim: Dimension) -> FunctionalReport {
    let pm1 = dim.p_minus_1().value();
    let g1 = nm.dirichlet_u - lambda * nm.l2_u - nm.mixed_abs;
    let g2 = nm.dirichlet_v - mu * nm.critical_v - nm.mixed_abs;
    FunctionalReport {
        j: nm.energy(lambda, mu, dim, Convention::Signed),
        j_plus: nm.energy(lambda, mu, dim, Convention::PositivePart),
        h: g1 + g2 / pm1,
        g: (g1, g2),
        admissible: nm.coupling_mass(mu, dim, Convention::Signed) > 0.0,
        norms: *nm,
    }
}

/// Nodal residual of the strong form, the weighted-`L²` representative of `J₊'`:
/// `(-Δu - λu - u₊^(2*-2) v, (-Δv - μ v₊^(2*-1) - u₊^(2*-1))/(2*-1))`.
pub fn gradient_jplus(pair: &RadialPair, lambda: f64, mu: f64) -> RadialPair {
    gradient_with(pair, lambda, mu, &Stencil::new(&pair.grid))
}

pub(crate) fn gradient_with(pair: &RadialPair, lambda: f64, mu: f64, st: &Stencil) -> RadialPair {
    let dim = pair.grid.dim;
    let pm1 = dim.p_minus_1();
    let pm2 = dim.p_minus_2();
    let lu = st.neg_laplacian(&pair.u);
    let lv = st.neg_laplacian(&pair.v);
    let inv = 1.0 / pm1.value();
    let n = pair.u.len();
    let mut gu = Vec::with_capacity(n);
    let mut gv = Vec::with_capacity(n);
    for j in 0..n {
        let (u, v) = (pair.u[j].max(0.0), pair.v[j].max(0.0));
        gu.push(lu[j] - lambda * pair.u[j] - pm2.pow(u) * pair.v[j]);
        gv.push(inv * (lv[j] - mu * pm1.pow(v) - pm1.pow(u)));
    }
    RadialPair {
        u: gu,
        v: gv,
        grid: pair.grid,
    }
}

/// Scaling factor `t̄` sending `pair` onto `{H = 0}`, or an error when the
/// fiber map has no positive maximum.
pub(crate) fn fiber_maximizer(nm: &Norms, lambda: f64, mu: f64, dim: Dimension, c: Convention) -> Result<f64> {
    let q = nm.quadratic(lambda, dim);
    let phi = nm.coupling_mass(mu, dim, c);
    if !(phi > 0.0) {
        return Err(Error::NotAdmissible(phi));
    }
    if !(q > 0.0) {
        return Err(Error::Regime(format!(
            "lambda = {lambda} is not below the first Dirichlet eigenvalue: \
             |grad u|^2 - lambda |u|^2 + |grad v|^2/(2*-1) = {q:e} <= 0"
        )));
    }
    let pm1 = dim.p_minus_1().value();
    Ok((q * pm1 / phi).powf(1.0 / dim.p_minus_2().value()))
}

/// Project an admissible pair onto `𝒩′ = {H = 0}` along its ray; `t̄`
/// maximizes `t ↦ J(tu, tv)`.
pub fn nehari_project(pair: &RadialPair, lambda: f64, mu: f64) -> Result<(f64, RadialPair)> {
    let st = Stencil::new(&pair.grid);
    let nm = norms(pair, &st);
    if nm.dirichlet_u + nm.dirichlet_v == 0.0 {
        return Err(Error::InvalidArgument("cannot project the zero pair".into()));
    }
    let t = fiber_maximizer(&nm, lambda, mu, pair.grid.dim, Convention::Signed)?;
    Ok((t, pair.scaled(t)))
}
