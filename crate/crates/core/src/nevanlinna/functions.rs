use num_complex::Complex64;
use rayon::prelude::*;

use super::curve::{wronskian, EntireCurve};
use super::expr::ExpPoly;
use super::quadrature::{circle_mean, QuadratureConfig};
use super::zeros::{zeros_in_disk, ZeroList};
use crate::algebra::{HomogeneousPolynomial, RationalMatrix};
use crate::error::{Error, Result};
use crate::variety::subsets;

/// Zeros closer than this fraction of `r` to the circle are subtracted from
/// the integrand and their exact circle averages added back.
const NEAR_BAND: f64 = 0.05;
/// Zero lists are computed on a disk this much larger than the largest radius.
const DISK_MARGIN: f64 = 1.06;
/// Relative tolerance for integrands with kinks (pointwise maxima).
pub const KINKED_TOLERANCE: f64 = 1e-6;

fn check_radius(r: f64) -> Result<()> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::InvalidInput(format!("radius {r} must be a finite value >= 1")));
    }
    Ok(())
}

/// Circle average of `log ||f||` at radius `r`.
pub fn mean_log_norm(f: &EntireCurve, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(circle_mean(|z| f.log_norm(z), r, cfg)?.value)
}

/// Circle average of `log |g|` at radius `r`; `zeros` must cover `|z| <= 1.05 r`.
///
/// Each zero `a` near the circle is removed as `log |z - a|` and replaced by
/// its exact mean `log max(r, |a|)`, which keeps the trapezoidal rule spectral.
pub fn mean_log_abs(g: &ExpPoly, zeros: &ZeroList, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let near: Vec<(Complex64, f64)> = zeros
        .entries
        .iter()
        .filter(|e| (e.location.norm() - r).abs() < NEAR_BAND * r)
        .map(|e| (e.location, e.multiplicity as f64))
        .collect();
    if near.is_empty() {
        return Ok(circle_mean(|z| g.log_abs(z), r, cfg)?.value);
    }
    let smooth = circle_mean(
        |z| g.log_abs(z) - near.iter().map(|(a, m)| m * (z - a).norm().ln()).sum::<f64>(),
        r,
        cfg,
    )?;
    Ok(smooth.value + near.iter().map(|(a, m)| m * r.max(a.norm()).ln()).sum::<f64>())
}

/// `T_f(r)`: mean of `log ||f||` on `|z| = r` minus that on `|z| = 1`.
pub fn characteristic_t(f: &EntireCurve, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_radius(r)?;
    Ok(mean_log_norm(f, r, cfg)? - mean_log_norm(f, 1.0, cfg)?)
}

/// `sum_{|a| <= r} min(mult, M) log(r / max(|a|, 1))`; `None` means no truncation.
pub fn counting_from_zeros(zeros: &ZeroList, r: f64, truncation: Option<u64>) -> f64 {
    zeros
        .within(r)
        .map(|e| {
            let m = truncation.map_or(e.multiplicity as u64, |t| t.min(e.multiplicity as u64));
            m as f64 * (r / e.location.norm().max(1.0)).ln()
        })
        .sum()
}

fn composed(f: &EntireCurve, q: &HomogeneousPolynomial) -> Result<ExpPoly> {
    let g = f.compose(q)?;
    if g.is_zero() {
        return Err(Error::Precondition(format!("{q} vanishes identically on the curve")));
    }
    Ok(g)
}

/// Counting function `N^{[M]}_{Q(f)}(r)` of the zeros of `Q(f)`.
pub fn counting_n(
    f: &EntireCurve,
    q: &HomogeneousPolynomial,
    r: f64,
    truncation: Option<u64>,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_radius(r)?;
    let zeros = zeros_in_disk(&composed(f, q)?, r, cfg)?;
    Ok(counting_from_zeros(&zeros, r, truncation))
}

struct ProximityData {
    g: ExpPoly,
    d: f64,
    zeros: ZeroList,
    one: f64,
    reference: f64,
}

impl ProximityData {
    fn new(f: &EntireCurve, q: &HomogeneousPolynomial, r_max: f64, cfg: &QuadratureConfig) -> Result<Self> {
        let g = composed(f, q)?;
        let zeros = zeros_in_disk(&g, DISK_MARGIN * r_max.max(1.0), cfg)?;
        let one = zeros.clear_radius(1.0, cfg.singularity_shift);
        let d = q.degree() as f64;
        let reference = d * mean_log_norm(f, one, cfg)? - mean_log_abs(&g, &zeros, one, cfg)?;
        Ok(Self { g, d, zeros, one, reference })
    }

    fn at(&self, f: &EntireCurve, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
        Ok(self.d * mean_log_norm(f, r, cfg)? - mean_log_abs(&self.g, &self.zeros, r, cfg)? - self.reference)
    }
}

/// `m_f(r, Q)`: mean of `log(||f||^d / |Q(f)|)` on `|z| = r` minus that on `|z| = 1`.
/// A zero of `Q(f)` on either circle moves it outward by the factor `1 + 10 * shift`.
pub fn proximity_m(f: &EntireCurve, q: &HomogeneousPolynomial, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_radius(r)?;
    let data = ProximityData::new(f, q, r, cfg)?;
    let r = data.zeros.clear_radius(r, cfg.singularity_shift);
    data.at(f, r, cfg)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FmtRow {
    pub r: f64,
    /// Radius actually integrated over (differs from `r` only after a nudge).
    pub r_used: f64,
    pub t: f64,
    pub m: f64,
    pub n: f64,
    /// `d T - m - N`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FmtReport {
    pub rows: Vec<FmtRow>,
    /// Largest minus smallest residual over the grid.
    pub max_deviation: f64,
    /// Radius used in place of 1 for the proximity reference circle.
    pub reference_radius: f64,
}

/// Residuals `d T_f(r) - m_f(r, Q) - N_{Q(f)}(r)` over a grid; they should be constant.
pub fn fmt_residual(f: &EntireCurve, q: &HomogeneousPolynomial, r_grid: &[f64], cfg: &QuadratureConfig) -> Result<FmtReport> {
    for &r in r_grid {
        check_radius(r)?;
    }
    let r_max = r_grid.iter().copied().fold(1.0, f64::max);
    let data = ProximityData::new(f, q, r_max * (1.0 + 1e-4), cfg)?;
    let t_one = mean_log_norm(f, 1.0, cfg)?;
    let rows = r_grid
        .par_iter()
        .map(|&r| {
            let r_used = data.zeros.clear_radius(r, cfg.singularity_shift);
            let t = mean_log_norm(f, r_used, cfg)? - t_one;
            let m = data.at(f, r_used, cfg)?;
            let n = counting_from_zeros(&data.zeros, r_used, None);
            Ok(FmtRow { r, r_used, t, m, n, residual: data.d * t - m - n })
        })
        .collect::<Result<Vec<_>>>()?;
    let max = rows.iter().map(|row| row.residual).fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|row| row.residual).fold(f64::INFINITY, f64::min);
    let max_deviation = if rows.is_empty() { 0.0 } else { max - min };
    Ok(FmtReport { rows, max_deviation, reference_radius: data.one })
}

/// Maximal linearly independent subsets of the hyperplanes (0-based indices).
pub fn independent_subsets(h: &[HomogeneousPolynomial]) -> Result<Vec<Vec<usize>>> {
    let coeffs = h
        .iter()
        .map(|p| {
            p.linear_coefficients()
                .ok_or_else(|| Error::InvalidInput(format!("{p} is not a linear form")))
        })
        .collect::<Result<Vec<_>>>()?;
    if coeffs.is_empty() {
        return Err(Error::InvalidInput("no hyperplanes".into()));
    }
    let full = RationalMatrix::from_rows(coeffs.clone())?.rank().0;
    if full == 0 {
        return Err(Error::Precondition("all hyperplanes vanish".into()));
    }
    let out: Vec<Vec<usize>> = subsets(h.len(), full)
        .into_iter()
        .filter(|s| {
            let rows = s.iter().map(|&i| coeffs[i].clone()).collect();
            RationalMatrix::from_rows(rows).map(|m| m.rank().0 == full).unwrap_or(false)
        })
        .collect();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralSmtRow {
    pub r: f64,
    pub r_used: f64,
    /// Circle mean of `max_K log prod_{i in K} ||f|| ||H_i|| / |H_i(f)|`.
    pub proximity_max: f64,
    pub n_wronskian: f64,
    pub t: f64,
    pub lhs: f64,
    /// `(n + 1 + eps) T_f(r)`.
    pub rhs: f64,
    pub margin: f64,
}

/// Margins of `mean max_K log prod_K ||f|| ||H_i|| / |H_i(f)| + N_W(r) <= (n+1+eps) T_f(r)`
/// for hyperplanes `h` at each grid radius.
pub fn general_smt_margins(
    f: &EntireCurve,
    h: &[HomogeneousPolynomial],
    eps: f64,
    r_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<GeneralSmtRow>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput(format!("epsilon = {eps} must be positive")));
    }
    for &r in r_grid {
        check_radius(r)?;
    }
    let w = wronskian(f);
    if w.is_zero() {
        return Err(Error::Precondition("the curve is linearly degenerate (Wronskian vanishes)".into()));
    }
    let bases = independent_subsets(h)?;
    if bases.is_empty() {
        return Err(Error::Precondition("no linearly independent subsets".into()));
    }
    let r_max = DISK_MARGIN * r_grid.iter().copied().fold(1.0, f64::max);
    let hf = h.iter().map(|p| composed(f, p)).collect::<Result<Vec<_>>>()?;
    let hz = hf.iter().map(|g| zeros_in_disk(g, r_max, cfg)).collect::<Result<Vec<_>>>()?;
    let wz = zeros_in_disk(&w, r_max, cfg)?;
    let norms: Vec<f64> = h.iter().map(|p| p.coefficient_norm().ln()).collect();
    let kinked = cfg.clone().with_tolerance(cfg.tolerance.max(KINKED_TOLERANCE));
    let t_one = mean_log_norm(f, 1.0, cfg)?;
    let n = f.n() as f64;
    r_grid
        .par_iter()
        .map(|&r| {
            let mut r_used = r;
            for _ in 0..8 {
                let next = hz.iter().fold(r_used, |acc, z| z.clear_radius(acc, cfg.singularity_shift));
                if next == r_used {
                    break;
                }
                r_used = next;
            }
            let integrand = |z: Complex64| {
                let ln_f = f.log_norm(z);
                let terms: Vec<f64> = hf.iter().zip(&norms).map(|(g, nh)| ln_f + nh - g.log_abs(z)).collect();
                bases
                    .iter()
                    .map(|k| k.iter().map(|&i| terms[i]).sum::<f64>())
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            let proximity_max = circle_mean(integrand, r_used, &kinked)?.value;
            let n_wronskian = counting_from_zeros(&wz, r_used, None);
            let t = mean_log_norm(f, r_used, cfg)? - t_one;
            let lhs = proximity_max + n_wronskian;
            let rhs = (n + 1.0 + eps) * t;
            Ok(GeneralSmtRow { r, r_used, proximity_max, n_wronskian, t, lhs, rhs, margin: rhs - lhs })
        })
        .collect()
}

/// `n` radii from `from` to `to` inclusive, logarithmically or linearly spaced.
pub fn radius_grid(from: f64, to: f64, points: usize, log_spacing: bool) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..points)
            .map(|i| {
                let t = i as f64 / (points - 1) as f64;
                if i == 0 {
                    from
                } else if i == points - 1 {
                    to
                } else if log_spacing {
                    (from.ln() + t * (to.ln() - from.ln())).exp()
                } else {
                    from + t * (to - from)
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn q(s: &str, n_vars: usize) -> HomogeneousPolynomial {
        HomogeneousPolynomial::parse(s, n_vars).unwrap()
    }

    #[test]
    fn characteristic_closed_forms() {
        let line = EntireCurve::parse(&["1", "z"]).unwrap();
        let conic = EntireCurve::parse(&["1", "z", "z^2"]).unwrap();
        for r in [1.0, 2.0, 7.5, 40.0] {
            let want = (1.0f64 + r * r).sqrt().ln() - 2f64.sqrt().ln();
            assert!((characteristic_t(&line, r, &cfg()).unwrap() - want).abs() < 1e-10);
            let want = (1.0 + r * r + r.powi(4)).sqrt().ln() - 3f64.sqrt().ln();
            assert!((characteristic_t(&conic, r, &cfg()).unwrap() - want).abs() < 1e-10);
        }
        assert_eq!(characteristic_t(&conic, 1.0, &cfg()).unwrap(), 0.0);
        assert!(characteristic_t(&conic, 0.5, &cfg()).is_err());
    }

    #[test]
    fn counting_examples() {
        let f = EntireCurve::parse(&["1", "z", "z^2"]).unwrap();
        let r = 5.0f64;
        assert!((counting_n(&f, &q("x2", 3), r, None, &cfg()).unwrap() - 2.0 * r.ln()).abs() < 1e-12);
        assert!((counting_n(&f, &q("x2", 3), r, Some(1), &cfg()).unwrap() - r.ln()).abs() < 1e-12);
        assert_eq!(counting_n(&f, &q("x0", 3), r, None, &cfg()).unwrap(), 0.0);
        assert!(matches!(counting_n(&f, &q("x0*x2 - x1^2", 3), r, None, &cfg()), Err(Error::Precondition(_))));
    }

    #[test]
    fn proximity_examples() {
        let f = EntireCurve::parse(&["1", "z"]).unwrap();
        for r in [1.0, 3.0, 20.0] {
            let m = proximity_m(&f, &q("x1", 2), r, &cfg()).unwrap();
            let want = ((1.0f64 + r * r).sqrt() / r).ln() - 2f64.sqrt().ln();
            assert!((m - want).abs() < 1e-10, "{m} {want}");
            let m0 = proximity_m(&f, &q("x0", 2), r, &cfg()).unwrap();
            assert!((m0 - characteristic_t(&f, r, &cfg()).unwrap()).abs() < 1e-10);
        }
        let g = EntireCurve::parse(&["1", "z", "z^2"]).unwrap();
        assert!(proximity_m(&g, &q("x0 + x1 + x2", 3), 1.0, &cfg()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn first_main_theorem_residuals() {
        let f = EntireCurve::parse(&["1", "z", "z^2"]).unwrap();
        let grid: Vec<f64> = (1..=25).map(|k| 2.0 * k as f64).collect();
        for form in ["x2", "x0 + x1 + x2"] {
            let rep = fmt_residual(&f, &q(form, 3), &grid, &cfg()).unwrap();
            assert!(rep.max_deviation < 1e-6, "{form}: {}", rep.max_deviation);
        }
        let rep = fmt_residual(&f, &q("x0", 3), &[3.0], &cfg()).unwrap();
        assert_eq!(rep.max_deviation, 0.0);
        let e = EntireCurve::parse(&["1", "exp(z)"]).unwrap();
        let rep = fmt_residual(&e, &q("x1 - x0", 2), &[2.0, 5.0, 9.0], &cfg()).unwrap();
        assert!(rep.max_deviation < 1e-6, "{}", rep.max_deviation);
    }

    #[test]
    fn jensen_consistency() {
        let g = ExpPoly::parse("(z - 1/2)^2 (z - 3i) (z^2 + 2z + 5) z").unwrap();
        let zeros = zeros_in_disk(&g, 20.0, &cfg()).unwrap();
        let base = mean_log_abs(&g, &zeros, 1.0, &cfg()).unwrap();
        for r in [1.5, 2.236, 3.0, 3.01, 10.0] {
            let r = zeros.clear_radius(r, cfg().singularity_shift);
            let lhs = mean_log_abs(&g, &zeros, r, &cfg()).unwrap() - base;
            let rhs = counting_from_zeros(&zeros, r, None);
            assert!((lhs - rhs).abs() < 1e-8, "r = {r}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn general_smt_example() {
        let f = EntireCurve::parse(&["1", "z", "z^2"]).unwrap();
        let h: Vec<_> = ["x0", "x1", "x2", "x0 + x1 + x2"].iter().map(|s| q(s, 3)).collect();
        let bases = independent_subsets(&h).unwrap();
        assert_eq!(bases.len(), 4);
        let grid = radius_grid(10.0, 100.0, 10, true);
        let rows = general_smt_margins(&f, &h, 0.5, &grid, &cfg()).unwrap();
        for row in &rows {
            assert_eq!(row.n_wronskian, 0.0);
            assert!(row.margin >= 0.0, "{row:?}");
        }
        let dep = EntireCurve::parse(&["1", "z", "2z + 1"]).unwrap();
        assert!(general_smt_margins(&dep, &h, 0.5, &grid, &cfg()).is_err());
    }

    #[test]
    fn grids() {
        let g = radius_grid(10.0, 100.0, 10, true);
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 10.0);
        assert_eq!(g[9], 100.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(radius_grid(2.0, 4.0, 3, false), vec![2.0, 3.0, 4.0]);
    }
}
