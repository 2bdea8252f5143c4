use std::fmt::Write as _;
use std::io;

use super::grid::RadialPair;

/// Profile table `r,u,v` including the origin (even extrapolation
/// `(4f₁ - f₂)/3`) and the boundary row of zeros.
pub fn profile_csv(pair: &RadialPair) -> String {
    let mut out = String::from("r,u,v\n");
    let origin = |f: &[f64]| (4.0 * f[0] - f[1]) / 3.0;
    let mut row = |r: f64, u: f64, v: f64| {
        writeln!(out, "{r:.16e},{u:.16e},{v:.16e}").expect("writing to a String cannot fail");
    };
    row(0.0, origin(&pair.u), origin(&pair.v));
    for (j, r) in pair.grid.radii().into_iter().enumerate() {
        row(r, pair.u[j], pair.v[j]);
    }
    row(pair.grid.radius, 0.0, 0.0);
    out
}

pub fn write_profile<W: io::Write>(pair: &RadialPair, mut out: W) -> io::Result<()> {
    out.write_all(profile_csv(pair).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::Dimension;
    use crate::nehari_solver::grid::RadialBall;

    #[test]
    fn rows_and_endpoints() {
        let g = RadialBall::new(Dimension::new(4).unwrap(), 1.0, 64).unwrap();
        let pair = RadialPair::from_fn(g, |r| 1.0 - r * r, |r| 2.0 - 2.0 * r * r);
        let csv = profile_csv(&pair);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "r,u,v");
        assert_eq!(lines.len(), 64 + 3);
        let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(first[0], 0.0);
        assert!((first[1] - 1.0).abs() < 1e-14);
        assert!(lines.last().unwrap().ends_with(",0.0000000000000000e0,0.0000000000000000e0"));
    }
}
