use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Zero;

use super::expr::{ExpPoly, ZPoly};
use super::quadrature::QuadratureConfig;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroEntry {
    pub location: Complex64,
    pub multiplicity: u32,
    /// Radius of a disk around `location` known (polynomials) or estimated
    /// (exponential sums) to contain the zero.
    pub error_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroList {
    pub entries: Vec<ZeroEntry>,
    pub radius: f64,
}

impl ZeroList {
    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity as u64).sum()
    }

    /// Entries with `|a| <= r`.
    pub fn within(&self, r: f64) -> impl Iterator<Item = &ZeroEntry> {
        self.entries.iter().filter(move |e| e.location.norm() <= r)
    }

    pub fn restrict(&self, r: f64) -> ZeroList {
        ZeroList { entries: self.within(r).cloned().collect(), radius: r.min(self.radius) }
    }

    /// Smallest `r' >= r` such that no zero sits within `shift * r'` of the circle,
    /// stepping by the factor `1 + 10 shift`.
    pub fn clear_radius(&self, r: f64, shift: f64) -> f64 {
        let mut r = r;
        for _ in 0..64 {
            if self.entries.iter().all(|e| (e.location.norm() - r).abs() > shift * r) {
                return r;
            }
            r *= 1.0 + 10.0 * shift;
        }
        r
    }
}

fn sort_entries(v: &mut [ZeroEntry]) {
    v.sort_by(|a, b| {
        a.location
            .norm()
            .total_cmp(&b.location.norm())
            .then(a.location.arg().total_cmp(&b.location.arg()))
    });
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All roots of a square-free polynomial (Aberth iteration, then Newton polish).
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![-c[0] / c[1]];
    }
    let lead = c[deg];
    let c: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    let rho = c[0].norm().powf(1.0 / deg as f64).max(1e-3);
    let mut z: Vec<Complex64> =
        (0..deg).map(|k| Complex64::from_polar(rho, TAU * k as f64 / deg as f64 + 0.4)).collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for k in 0..deg {
            let (p, dp) = horner(&c, z[k]);
            if p.is_zero() {
                continue;
            }
            let w = p / dp;
            let s: Complex64 = (0..deg).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = w / (1.0 - w * s);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zk in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(&c, *zk);
            if dp.is_zero() {
                break;
            }
            let step = p / dp;
            if step.is_finite() {
                *zk -= step;
            }
        }
    }
    z
}

/// Roots of a polynomial with multiplicities, from its square-free decomposition.
pub fn polynomial_zeros(p: &ZPoly) -> Vec<ZeroEntry> {
    let mut out = Vec::new();
    for (s, mult) in p.squarefree_decomposition() {
        let c = s.to_c64();
        let deg = c.len() - 1;
        for z in aberth(&c) {
            let (v, dv) = horner(&c, z);
            // some root of the square-free factor lies within deg |s/s'| of z
            let bound = if v.is_zero() { 0.0 } else { deg as f64 * (v / dv).norm() };
            out.push(ZeroEntry { location: z, multiplicity: mult, error_bound: bound + f64::EPSILON * z.norm() });
        }
    }
    sort_entries(&mut out);
    out
}

#[derive(Clone, Copy, Debug)]
struct Rect {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

impl Rect {
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x, self.y),
            Complex64::new(self.x + self.w, self.y),
            Complex64::new(self.x + self.w, self.y + self.h),
            Complex64::new(self.x, self.y + self.h),
        ]
    }

    fn center(&self) -> Complex64 {
        Complex64::new(self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    fn side(&self) -> f64 {
        self.w.max(self.h)
    }

    fn split(&self, t: f64) -> [Rect; 4] {
        let (w1, h1) = (self.w * t, self.h * t);
        let (w2, h2) = (self.w - w1, self.h - h1);
        [
            Rect { x: self.x, y: self.y, w: w1, h: h1 },
            Rect { x: self.x + w1, y: self.y, w: w2, h: h1 },
            Rect { x: self.x, y: self.y + h1, w: w1, h: h2 },
            Rect { x: self.x + w1, y: self.y + h1, w: w2, h: h2 },
        ]
    }
}

struct WindingSearch<'a> {
    g: &'a ExpPoly,
    dg: ExpPoly,
}

const MAX_SEGMENT_DEPTH: u32 = 48;
const ARG_STEP: f64 = 0.4;
const SPLITS: [f64; 3] = [0.5, 0.4671, 0.5347];
const LOCATE_SIDE: f64 = 2e-3;
const MULTIPLICITY_RADIUS: f64 = 1e-3;

impl WindingSearch<'_> {
    /// Value mantissa and logarithmic derivative `g'/g`.
    fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (v, s) = self.g.eval_scaled(z);
        if v.is_zero() || !v.is_finite() {
            return Err(Error::WindingNotInteger { value: f64::NAN });
        }
        let (dv, ds) = self.dg.eval_scaled(z);
        let ld = if dv.is_zero() { Complex64::zero() } else { dv / v * (ds - s).exp() };
        Ok((v, ld))
    }

    /// Change of `arg g` along the segment `a -> b`.
    fn arg_change(&self, a: Complex64, b: Complex64) -> Result<f64> {
        let ea = self.eval(a)?;
        let eb = self.eval(b)?;
        self.arg_change_rec(a, b, ea, eb, 0)
    }

    fn arg_change_rec(
        &self,
        a: Complex64,
        b: Complex64,
        ea: (Complex64, Complex64),
        eb: (Complex64, Complex64),
        depth: u32,
    ) -> Result<f64> {
        let len = (b - a).norm();
        let delta = (eb.0 / ea.0).arg();
        let smooth = delta.abs() <= ARG_STEP && ea.1.norm() * len <= ARG_STEP && eb.1.norm() * len <= ARG_STEP;
        if smooth {
            return Ok(delta);
        }
        if depth >= MAX_SEGMENT_DEPTH {
            return Err(Error::WindingNotInteger { value: f64::NAN });
        }
        let mid = (a + b) / 2.0;
        let em = self.eval(mid)?;
        Ok(self.arg_change_rec(a, mid, ea, em, depth + 1)? + self.arg_change_rec(mid, b, em, eb, depth + 1)?)
    }

    fn winding_polygon(&self, pts: &[Complex64]) -> Result<u32> {
        let mut total = 0.0;
        for i in 0..pts.len() {
            total += self.arg_change(pts[i], pts[(i + 1) % pts.len()])?;
        }
        let w = total / TAU;
        let k = w.round();
        if (w - k).abs() > 0.1 || k < 0.0 {
            return Err(Error::WindingNotInteger { value: w });
        }
        Ok(k as u32)
    }

    fn winding_rect(&self, r: &Rect) -> Result<u32> {
        self.winding_polygon(&r.corners())
    }

    fn winding_circle(&self, c: Complex64, rad: f64) -> Result<u32> {
        let pts: Vec<Complex64> = (0..16).map(|k| c + Complex64::from_polar(rad, TAU * k as f64 / 16.0)).collect();
        self.winding_polygon(&pts)
    }

    fn split_children(&self, r: &Rect, w: u32) -> Result<Vec<(Rect, u32)>> {
        let mut last = Error::WindingNotInteger { value: f64::NAN };
        for t in SPLITS {
            let children = r.split(t);
            let ws: Result<Vec<u32>> = children.iter().map(|c| self.winding_rect(c)).collect();
            match ws {
                Ok(ws) if ws.iter().sum::<u32>() == w => {
                    return Ok(children.into_iter().zip(ws).filter(|(_, k)| *k > 0).collect());
                }
                Ok(ws) => last = Error::WindingNotInteger { value: ws.iter().sum::<u32>() as f64 },
                Err(e) => last = e,
            }
        }
        Err(last)
    }

    fn refine(&self, r: &Rect, w: u32) -> Result<ZeroEntry> {
        let mut z = r.center();
        for _ in 0..100 {
            let (_, ld) = self.eval(z)?;
            if ld.is_zero() {
                break;
            }
            let step = w as f64 / ld;
            if !step.is_finite() {
                break;
            }
            z -= step;
            if step.norm() <= 1e-15 * z.norm().max(1.0) {
                break;
            }
        }
        if (z - r.center()).norm() > r.side() {
            z = r.center();
        }
        let multiplicity = self.winding_circle(z, MULTIPLICITY_RADIUS)?;
        let error_bound = match self.eval(z) {
            Ok((_, ld)) if !ld.is_zero() => multiplicity.max(1) as f64 / ld.norm(),
            _ => 0.0,
        };
        Ok(ZeroEntry { location: z, multiplicity, error_bound })
    }

    fn locate(&self, r: Rect, w: u32, out: &mut Vec<ZeroEntry>) -> Result<()> {
        if r.side() <= LOCATE_SIDE {
            out.push(self.refine(&r, w)?);
            return Ok(());
        }
        for (c, k) in self.split_children(&r, w)? {
            self.locate(c, k, out)?;
        }
        Ok(())
    }

    fn search(&self, radius: f64, offset: Complex64) -> Result<Vec<ZeroEntry>> {
        let half = radius + 0.5;
        let top = Rect { x: -half + offset.re, y: -half + offset.im, w: 2.0 * half, h: 2.0 * half };
        let mut stack = vec![(top, self.winding_rect(&top)?)];
        let mut out = Vec::new();
        while let Some((r, w)) = stack.pop() {
            if w == 0 {
                continue;
            }
            if r.side() > 1.0 {
                stack.extend(self.split_children(&r, w)?);
            } else {
                self.locate(r, w, &mut out)?;
            }
        }
        Ok(out)
    }
}

/// Zeros of `g` in the closed disk `|z| <= r`.
pub fn zeros_in_disk(g: &ExpPoly, r: f64, _cfg: &QuadratureConfig) -> Result<ZeroList> {
    if g.is_zero() {
        return Err(Error::Precondition("expression is identically zero".into()));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput(format!("radius {r} must be positive")));
    }
    // p(z) exp(q(z)) vanishes exactly where p does
    let poly = match g.terms() {
        [(_, p)] => Some(p.clone()),
        _ => None,
    };
    let mut entries = if let Some(p) = poly {
        polynomial_zeros(&p)
    } else {
        let s = WindingSearch { g, dg: g.derivative() };
        let offsets = [Complex64::new(0.0123457, 0.0098765), Complex64::new(-0.031, 0.0217), Complex64::new(0.0417, -0.0271)];
        let mut found = None;
        let mut last = Error::WindingNotInteger { value: f64::NAN };
        for off in offsets {
            match s.search(r, off) {
                Ok(v) => {
                    found = Some(v);
                    break;
                }
                Err(e) => last = e,
            }
        }
        found.ok_or(last)?
    };
    entries.retain(|e| e.location.norm() <= r);
    sort_entries(&mut entries);
    Ok(ZeroList { entries, radius: r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> ExpPoly {
        ExpPoly::parse(s).unwrap()
    }

    #[test]
    fn polynomial_examples() {
        let cfg = QuadratureConfig::default();
        let g = e("z^2*(z-2)");
        let z1 = zeros_in_disk(&g, 1.0, &cfg).unwrap();
        assert_eq!(z1.entries.len(), 1);
        assert_eq!(z1.entries[0].multiplicity, 2);
        assert!(z1.entries[0].location.norm() < 1e-12);
        let z3 = zeros_in_disk(&g, 3.0, &cfg).unwrap();
        assert_eq!(z3.entries.len(), 2);
        assert_eq!(z3.entries[1].multiplicity, 1);
        assert!((z3.entries[1].location - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        let big = e("(z-1/2)^3 (z^2+4) (z - 10)");
        assert_eq!(zeros_in_disk(&big, 100.0, &cfg).unwrap().total_multiplicity(), 6);
        let cube = zeros_in_disk(&e("1 + z + z^2"), 2.0, &cfg).unwrap();
        for z in &cube.entries {
            assert!((z.location.norm() - 1.0).abs() < 1e-14);
            assert!(z.error_bound < 1e-12);
        }
    }

    #[test]
    fn exponential_zeros() {
        let cfg = QuadratureConfig::default();
        let z = zeros_in_disk(&e("exp(z) - 1"), 7.0, &cfg).unwrap();
        assert_eq!(z.entries.len(), 3);
        let want = [Complex64::new(0.0, 0.0), Complex64::new(0.0, -TAU), Complex64::new(0.0, TAU)];
        for (got, w) in z.entries.iter().zip(want) {
            assert_eq!(got.multiplicity, 1);
            assert!((got.location - w).norm() < 1e-8, "{got:?}");
        }
        // double zero at the origin, simple zeros at 2 pi i k
        let z = zeros_in_disk(&e("z*(exp(z) - 1)"), 7.0, &cfg).unwrap();
        assert_eq!(z.entries[0].multiplicity, 2);
        assert_eq!(z.total_multiplicity(), 4);
        // zero-free
        assert!(zeros_in_disk(&e("z^3*exp(z^2)"), 5.0, &cfg).unwrap().entries.len() == 1);
        assert!(zeros_in_disk(&e("0"), 5.0, &cfg).is_err());
    }

    #[test]
    fn nudge() {
        let cfg = QuadratureConfig::default();
        let z = zeros_in_disk(&e("1 + z + z^2"), 2.0, &cfg).unwrap();
        let r = z.clear_radius(1.0, 1e-9);
        assert!(r > 1.0 && r < 1.0 + 1e-7);
        assert_eq!(z.clear_radius(1.5, 1e-9), 1.5);
    }
}
