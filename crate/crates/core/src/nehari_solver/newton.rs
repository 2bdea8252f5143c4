//! Newton iteration on the discrete Euler-Lagrange system, used to finish a
//! descent run once the energy no longer resolves further progress.

use super::functional::gradient_with;
use super::grid::{RadialPair, Stencil};

type Mat2 = [[f64; 2]; 2];

fn inv2(m: Mat2) -> Option<Mat2> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    (det.abs() > 0.0 && det.is_finite()).then(|| {
        [
            [m[1][1] / det, -m[0][1] / det],
            [-m[1][0] / det, m[0][0] / det],
        ]
    })
}

fn mul2(m: Mat2, x: [f64; 2]) -> [f64; 2] {
    [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
}

/// Weighted residual `F = (W g_u, (2*-1) W g_v)` of the nodal gradient `g`.
fn weighted_residual(g: &RadialPair, st: &Stencil) -> Vec<[f64; 2]> {
    let pm1 = g.grid.dim.p_minus_1().value();
    (0..g.u.len())
        .map(|j| [st.w[j] * g.u[j], pm1 * st.w[j] * g.v[j]])
        .collect()
}

/// Newton increment `δ` solving `F'(pair) δ = -F(pair)` by block Thomas
/// elimination (2x2 blocks, one per node).
pub(crate) fn increment(pair: &RadialPair, lambda: f64, mu: f64, st: &Stencil) -> Option<RadialPair> {
    let dim = pair.grid.dim;
    let pm1 = dim.p_minus_1();
    let pm2 = dim.p_minus_2();
    let pm3 = dim.p_minus_3();
    let m = pair.u.len();
    let rhs = weighted_residual(&gradient_with(pair, lambda, mu, st), st);

    let diag = |j: usize| -> Mat2 {
        let k = st.c[j] + if j > 0 { st.c[j - 1] } else { 0.0 };
        let w = st.w[j];
        let (u, v) = (pair.u[j], pair.v[j]);
        let (du_self, du_cross) = if u > 0.0 {
            (pm2.value() * pm3.pow(u) * v, pm2.pow(u))
        } else {
            (0.0, 0.0)
        };
        let dv_self = if v > 0.0 { pm1.value() * pm2.pow(v) } else { 0.0 };
        [
            [k - lambda * w - w * du_self, -w * du_cross],
            [-pm1.value() * w * du_cross, k - mu * w * dv_self],
        ]
    };

    let mut minv: Vec<Mat2> = Vec::with_capacity(m);
    let mut z: Vec<[f64; 2]> = Vec::with_capacity(m);
    for j in 0..m {
        let mut d = diag(j);
        let mut b = [-rhs[j][0], -rhs[j][1]];
        if j > 0 {
            let c = st.c[j - 1];
            let prev = minv[j - 1];
            for r in 0..2 {
                for s in 0..2 {
                    d[r][s] -= c * c * prev[r][s];
                }
            }
            let carry = mul2(prev, z[j - 1]);
            b = [b[0] + c * carry[0], b[1] + c * carry[1]];
        }
        minv.push(inv2(d)?);
        z.push(b);
    }
    let mut x = vec![[0.0; 2]; m];
    x[m - 1] = mul2(minv[m - 1], z[m - 1]);
    for j in (0..m - 1).rev() {
        let c = st.c[j];
        x[j] = mul2(minv[j], [z[j][0] + c * x[j + 1][0], z[j][1] + c * x[j + 1][1]]);
    }
    if x.iter().flatten().any(|a| !a.is_finite()) {
        return None;
    }
    Some(RadialPair {
        u: x.iter().map(|a| a[0]).collect(),
        v: x.iter().map(|a| a[1]).collect(),
        grid: pair.grid,
    })
}

/// `Σ w |g|²`, the merit function of the damped iteration.
pub(crate) fn merit(pair: &RadialPair, lambda: f64, mu: f64, st: &Stencil) -> f64 {
    let g = gradient_with(pair, lambda, mu, st);
    (0..g.u.len())
        .map(|j| st.w[j] * (g.u[j] * g.u[j] + g.v[j] * g.v[j]))
        .sum()
}
