//! Acceptance suite: each criterion checks computed values against an
//! independent oracle and reports a deterministic one-line summary.

use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{binomial, monomial_basis, HomogeneousPolynomial};
use crate::error::Result;
use crate::filtration::{compute_b, filtration_dims, filtration_quotient_violations, FiltrationParams};
use crate::nevanlinna::{
    characteristic_t, fmt_residual, general_smt_margins, radius_grid, zeros_in_disk, EntireCurve, ExpPoly,
    QuadratureConfig,
};
use crate::smt::{
    binomial_power_bound_holds, choose_u_projective, smt_margins, truncation_level_projective, SmtScenario,
    SmtVariant, Truncation,
};
use crate::variety::{check_position, construct_replacement, verify_replacement, Emptiness, ProjDim, VarietyDescriptor, DEFAULT_MAX_RETRIES};
use crate::weights::{
    chow_lower_bound_margin, coordinate_subspace_chow_form, hilbert_chow_margin, hilbert_weight,
    hilbert_weight_brute_force, WeightVector,
};

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionOutcome {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    /// Deterministic summary line (no timings).
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str, u64); 12] = [
    (1, "hilbert closed forms", 5),
    (2, "emptiness certification", 5),
    (3, "replacement construction", 60),
    (4, "hilbert weight greedy vs brute force", 10),
    (5, "hilbert/chow weight margins", 30),
    (6, "filtration quotients", 30),
    (7, "first main theorem residual", 10),
    (8, "exponential zero counting", 10),
    (9, "general second main theorem margins", 20),
    (10, "subgeneral instance margins", 60),
    (11, "calculators", 1),
    (12, "determinism", 300),
];

fn random_form(n_vars: usize, d: u32, rng: &mut ChaCha8Rng) -> HomogeneousPolynomial {
    let terms: Vec<_> = monomial_basis(n_vars, d)
        .into_iter()
        .map(|m| (m, BigRational::from_integer(rng.random_range(-5i64..=5).into())))
        .collect();
    HomogeneousPolynomial::from_terms(n_vars, d, terms).expect("consistent degrees")
}

fn nonzero_form(n_vars: usize, d: u32, rng: &mut ChaCha8Rng) -> HomogeneousPolynomial {
    loop {
        let f = random_form(n_vars, d, rng);
        if !f.is_zero() {
            return f;
        }
    }
}

fn polys(n_vars: usize, src: &[&str]) -> Result<Vec<HomogeneousPolynomial>> {
    src.iter().map(|s| HomogeneousPolynomial::parse(s, n_vars)).collect()
}

type Check = Result<(bool, String)>;

fn hilbert_closed_forms(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut compared = 0;
    for n in 1..=3usize {
        let p = VarietyDescriptor::projective_space(n);
        for m in 0..=10u32 {
            let want = binomial(m as u64 + n as u64, n as u64);
            if p.hilbert_function(m) != want {
                return Ok((false, format!("H_P^{n}({m}) != {want}")));
            }
            compared += 1;
        }
        for d in 1..=3u32 {
            let f = nonzero_form(n + 1, d, &mut rng);
            let v = VarietyDescriptor::new(n, vec![f])?;
            for m in 0..=10u32 {
                let minus = if m >= d { binomial((m - d) as u64 + n as u64, n as u64) } else { 0 };
                let want = binomial(m as u64 + n as u64, n as u64) - minus;
                if v.hilbert_function(m) != want {
                    return Ok((false, format!("degree-{d} hypersurface in P^{n}: H({m}) != {want}")));
                }
                compared += 1;
            }
        }
    }
    Ok((true, format!("{compared} Hilbert values match")))
}

fn emptiness_certification(_seed: u64) -> Check {
    let mut found = Vec::new();
    for a in 1..=3u32 {
        let gens: Vec<_> = (0..3).map(|i| HomogeneousPolynomial::variable(3, i).pow(a)).collect();
        // oracle: a degree-m monomial escapes (x0^a, x1^a, x2^a) iff every exponent is below a
        let oracle = (0..).find(|&m| monomial_basis(3, m).iter().all(|mono| mono.exponents().iter().any(|&e| e >= a)));
        let got = VarietyDescriptor::new(2, gens)?.certify_empty();
        match (got, oracle) {
            (Emptiness::CertifiedEmpty { m_star }, Some(o)) if m_star == o && m_star == 3 * a - 2 => found.push(m_star),
            (other, _) => return Ok((false, format!("a = {a}: got {other}, oracle {oracle:?}"))),
        }
    }
    Ok((true, format!("m* = {found:?}")))
}

fn replacement_configs(seed: u64) -> Result<Vec<(String, VarietyDescriptor, Vec<HomogeneousPolynomial>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        ("P2 four lines".to_string(), VarietyDescriptor::projective_space(2), polys(3, &["x0", "x1", "x2", "x0 + x1 + x2"])?),
        ("P2 three lines".into(), VarietyDescriptor::projective_space(2), polys(3, &["x0 + x1", "x1 - x2", "x0 + x2 + x1"])?),
        ("conic two lines".into(), VarietyDescriptor::parse(2, &["x0*x2 - x1^2"])?, polys(3, &["x0", "x2"])?),
        ("conic three lines".into(), VarietyDescriptor::parse(2, &["x0*x2 - x1^2"])?, polys(3, &["x0", "x1", "x2"])?),
        ("P1 squares".into(), VarietyDescriptor::projective_space(1), polys(2, &["x0^2", "x1^2", "x0^2 + 2*x0*x1 + x1^2"])?),
        ("P2 conics".into(), VarietyDescriptor::projective_space(2), polys(3, &["x0^2", "x1^2", "x2^2", "x0*x1 + x1*x2 + x0*x2"])?),
        ("twisted cubic planes".into(), VarietyDescriptor::parse(3, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"])?, polys(4, &["x0", "x3", "x1 + x2"])?),
    ];
    for (n, count) in [(3usize, 4usize), (3, 5), (3, 6)] {
        let q = (0..count).map(|_| nonzero_form(n + 1, 1, &mut rng)).collect();
        out.push((format!("P{n} {count} random planes"), VarietyDescriptor::projective_space(n), q));
    }
    let hyperplane = VarietyDescriptor::parse(4, &["x4"])?;
    let q = (0..5).map(|_| nonzero_form(5, 1, &mut rng)).collect();
    out.push(("hyperplane in P4, 5 forms".into(), hyperplane, q));
    let quadric = VarietyDescriptor::parse(3, &["x0*x3 - x1*x2"])?;
    let q = (0..4).map(|_| nonzero_form(4, 2, &mut rng)).collect();
    out.push(("quadric surface, 4 quadrics".into(), quadric, q));
    Ok(out)
}

fn replacement_construction(seed: u64) -> Check {
    let configs = replacement_configs(seed)?;
    let mut summary = Vec::new();
    for (name, v, q) in &configs {
        let sys = match construct_replacement(v, q, 0, DEFAULT_MAX_RETRIES) {
            Ok(s) => s,
            Err(e) => return Ok((false, format!("{name}: {e}"))),
        };
        if !verify_replacement(v, q, &sys)? || sys.chain_dims.last() != Some(&ProjDim::Empty) {
            return Ok((false, format!("{name}: chain not certified")));
        }
        let dims: Vec<String> = sys.chain_dims.iter().map(ToString::to_string).collect();
        summary.push(format!("{name} [{}]", dims.join(",")));
    }
    Ok((true, format!("{} configurations: {}", configs.len(), summary.join("; "))))
}

fn greedy_vs_brute_force(_seed: u64) -> Check {
    let cases: Vec<(VarietyDescriptor, u32, Vec<u64>)> = vec![
        (VarietyDescriptor::parse(2, &["x0*x2 - x1^2"])?, 2, vec![1, 0, 0]),
        (VarietyDescriptor::parse(2, &["x0*x2 - x1^2"])?, 2, vec![3, 1, 2]),
        (VarietyDescriptor::parse(2, &["x0*x2 - x1^2"])?, 1, vec![0, 5, 1]),
        (VarietyDescriptor::projective_space(1), 3, vec![2, 1]),
        (VarietyDescriptor::projective_space(1), 5, vec![1, 4]),
        (VarietyDescriptor::projective_space(2), 1, vec![1, 2, 3]),
        (VarietyDescriptor::projective_space(2), 2, vec![4, 0, 1]),
        (VarietyDescriptor::parse(2, &["x0*x1"])?, 2, vec![2, 3, 1]),
        (VarietyDescriptor::parse(2, &["x2"])?, 4, vec![1, 3, 7]),
        (VarietyDescriptor::parse(3, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"])?, 1, vec![1, 2, 0, 5]),
    ];
    let mut conic_s = None;
    for (i, (v, m, c)) in cases.iter().enumerate() {
        let c = WeightVector::new(c.clone());
        let g = hilbert_weight(v, *m, &c)?;
        if g.basis.len() > 6 {
            return Ok((false, format!("case {i}: quotient dimension {} above 6", g.basis.len())));
        }
        let b = hilbert_weight_brute_force(v, *m, &c)?;
        if g.s != b {
            return Ok((false, format!("case {i}: greedy {} vs brute force {b}", g.s)));
        }
        if i == 0 {
            conic_s = Some(g.s);
        }
    }
    if conic_s != Some(4) {
        return Ok((false, format!("conic m=2 c=(1,0,0): S = {conic_s:?}, expected 4")));
    }
    Ok((true, format!("{} cases agree; conic m=2 c=(1,0,0) S=4", cases.len())))
}

fn weight_margins(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0;
    for n in 1..=4usize {
        for size in 1..=n + 1 {
            // J = {0, .., size-1}; X is cut out by the remaining coordinates
            let j: Vec<usize> = (0..size).collect();
            let gens: Vec<_> = (size..=n).map(|i| HomogeneousPolynomial::variable(n + 1, i)).collect();
            let x = VarietyDescriptor::new(n, gens)?;
            let f = coordinate_subspace_chow_form(&j, n)?;
            for m in [2u32, 5, 12] {
                for _ in 0..20 {
                    let c = WeightVector::new((0..=n).map(|_| rng.random_range(0..=10)).collect());
                    let margin = hilbert_chow_margin(&x, &f, m, &c, seed)?;
                    if margin < BigRational::zero() {
                        return Ok((false, format!("P^{n}, J={j:?}, m={m}, c={c}: margin {margin}")));
                    }
                    checks += 1;
                }
            }
            for _ in 0..20 {
                let c = WeightVector::new((0..=n).map(|_| rng.random_range(1..=10)).collect());
                let margin = chow_lower_bound_margin(&x, &f, &c, &j, seed)?;
                if margin < BigRational::zero() {
                    return Ok((false, format!("lower bound P^{n}, J={j:?}, c={c}: margin {margin}")));
                }
                checks += 1;
            }
        }
    }
    Ok((true, format!("{checks} exact margins nonnegative")))
}

fn filtration_quotients(seed: u64) -> Check {
    let mut tables = 0;
    for d in 1..=2u32 {
        for n in 1..=2usize {
            let generic = FiltrationParams::random_forms_bounded(n, d, d, 2, seed.wrapping_add(10 * d as u64 + n as u64))?;
            if !generic.general_position(seed)? {
                return Ok((false, format!("n={n} d={d}: generic forms not in general position")));
            }
            for u in (1..=8).map(|t| t * d) {
                let generic = FiltrationParams::new(n, d, u, generic.p.clone())?;
                for p in [
                    FiltrationParams::coordinate_powers(n, d, u)?,
                    generic.clone(),
                ] {
                    let t = filtration_dims(&p)?;
                    let total: u64 = t.m.iter().sum();
                    let want = binomial(u as u64 + n as u64, n as u64);
                    if total != want {
                        return Ok((false, format!("n={n} d={d} u={u}: sum m = {total}, expected {want}")));
                    }
                    let bad = filtration_quotient_violations(&t);
                    if !bad.is_empty() {
                        return Ok((false, format!("n={n} d={d} u={u}: violations at {bad:?}")));
                    }
                    if !compute_b(&t).all_nonnegative() {
                        return Ok((false, format!("n={n} d={d} u={u}: b lower bound fails")));
                    }
                    tables += 1;
                }
            }
        }
    }
    Ok((true, format!("{tables} tables, zero violations")))
}

fn first_main_theorem(_seed: u64) -> Check {
    let f = EntireCurve::parse(&["1", "z", "z^2"])?;
    let cfg = QuadratureConfig::new(1 << 14, 53, 1e-9)?;
    let grid: Vec<f64> = (1..=25).map(|k| 2.0 * k as f64).collect();
    let mut worst_drift = 0.0f64;
    for form in ["x2", "x0 + x1 + x2"] {
        let rep = fmt_residual(&f, &HomogeneousPolynomial::parse(form, 3)?, &grid, &cfg)?;
        if !(rep.max_deviation < 1e-6) {
            return Ok((false, format!("Q = {form}: drift {:e}", rep.max_deviation)));
        }
        worst_drift = worst_drift.max(rep.max_deviation);
    }
    let mut worst_t = 0.0f64;
    for &r in &grid {
        let want = ((1.0 + r * r + r.powi(4)) / 3.0).sqrt().ln();
        worst_t = worst_t.max((characteristic_t(&f, r, &cfg)? - want).abs());
    }
    if !(worst_t < 1e-9) {
        return Ok((false, format!("T deviates from closed form by {worst_t:e}")));
    }
    Ok((true, format!("drift < 1e-6, T within 1e-9 (worst {:.0e})", worst_t.max(1e-16))))
}

fn exponential_zeros(_seed: u64) -> Check {
    let g = ExpPoly::parse("exp(z) - 1")?;
    let z = zeros_in_disk(&g, 7.0, &QuadratureConfig::default())?;
    let want = [Complex64::new(0.0, 0.0), Complex64::new(0.0, TAU), Complex64::new(0.0, -TAU)];
    if z.entries.len() != 3 || z.entries.iter().any(|e| e.multiplicity != 1) {
        return Ok((false, format!("found {} zeros", z.entries.len())));
    }
    for w in want {
        let best = z.entries.iter().map(|e| (e.location - w).norm()).fold(f64::INFINITY, f64::min);
        if !(best < 1e-8) {
            return Ok((false, format!("no zero within 1e-8 of {w}")));
        }
    }
    Ok((true, "3 simple zeros at 0, 2 pi i, -2 pi i".into()))
}

fn general_smt(_seed: u64) -> Check {
    let f = EntireCurve::parse(&["1", "z", "z^2"])?;
    let h = polys(3, &["x0", "x1", "x2", "x0 + x1 + x2"])?;
    let grid = radius_grid(10.0, 100.0, 10, true);
    let rows = general_smt_margins(&f, &h, 0.5, &grid, &QuadratureConfig::default())?;
    let min = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    if rows.iter().any(|r| r.n_wronskian != 0.0) {
        return Ok((false, "Wronskian counting function nonzero".into()));
    }
    Ok((min >= 0.0, format!("{} radii, min margin {min:.4}", rows.len())))
}

fn subgeneral_instance(_seed: u64) -> Check {
    let variety = VarietyDescriptor::parse(2, &["x0*x2 - x1^2"])?;
    let lines = polys(3, &["x0 + 2*x1 + 3*x2", "x0 - x1 + 5*x2", "2*x0 + x1 - x2", "3*x0 - 2*x1 + x2", "x0 + 7*x1 + 2*x2"])?;
    let position = check_position(&variety, &lines, 1)?;
    if !position.holds() {
        return Ok((false, "lines are not in general position with respect to the conic".into()));
    }
    let s = SmtScenario {
        variety,
        hypersurfaces: lines,
        level: 1,
        epsilon: BigRational::new(1.into(), 2.into()),
        curve: EntireCurve::parse(&["1", "z", "z^2"])?,
        r_grid: radius_grid(10.0, 100.0, 10, true),
    };
    let rep = smt_margins(&s, SmtVariant::Subgeneral, Truncation::Auto, false, &QuadratureConfig::default())?;
    let min = rep.rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    Ok((
        rep.all_nonnegative() && !rep.vacuous && rep.rows.len() == 10,
        format!("M0 = {}, {} radii, min margin {min:.4}", rep.calculator.m0, rep.rows.len()),
    ))
}

/// `floor(16 e - 1)` from a fixed-point series for `e`, independent of the calculator's enclosures.
fn independent_m0() -> BigInt {
    let bits = 256u32;
    let one = BigInt::one() << bits;
    let mut term = one.clone();
    let mut e = one.clone();
    for j in 1..120u32 {
        term /= j;
        e += &term;
    }
    (BigInt::from(16) * e - one) >> bits
}

fn calculators(_seed: u64) -> Check {
    let one = BigRational::one();
    let m0 = truncation_level_projective(1, 1, 1, &one)?.m0;
    if m0 != BigInt::from(42) || m0 != independent_m0() {
        return Ok((false, format!("M0 = {m0}")));
    }
    let (u, ratio) = choose_u_projective(2, 1, 1, &one)?;
    if u != BigInt::from(30) || ratio > BigRational::new(1.into(), 9.into()) {
        return Ok((false, format!("u = {u}, ratio {ratio}")));
    }
    for n in 1..=6u64 {
        let x = BigRational::new(1.into(), BigInt::from((n + 1) * (n + 1)));
        if !binomial_power_bound_holds(n, &x)? {
            return Ok((false, format!("(1+x)^n bound fails at n = {n}")));
        }
    }
    Ok((true, "M0 = 42, u = 30, ratio 1/9, power bound holds for n <= 6".into()))
}

fn run_check(id: u8, seed: u64) -> Check {
    match id {
        1 => hilbert_closed_forms(seed),
        2 => emptiness_certification(seed),
        3 => replacement_construction(seed),
        4 => greedy_vs_brute_force(seed),
        5 => weight_margins(seed),
        6 => filtration_quotients(seed),
        7 => first_main_theorem(seed),
        8 => exponential_zeros(seed),
        9 => general_smt(seed),
        10 => subgeneral_instance(seed),
        11 => calculators(seed),
        _ => unreachable!("criterion {id} has no direct check"),
    }
}

fn meta(id: u8) -> (&'static str, Duration) {
    let (_, name, secs) = CRITERIA[id as usize - 1];
    (name, Duration::from_secs(secs))
}

/// Run one of the criteria 1..=11.
pub fn run_criterion(id: u8, seed: u64) -> CriterionOutcome {
    let (name, budget) = meta(id);
    let start = Instant::now();
    let (passed, detail) = match run_check(id, seed) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome { id, name, passed, detail, elapsed: start.elapsed(), budget }
}

/// Criterion 12: re-run criteria 1..=11 and compare the rendered lines with `first`.
pub fn determinism(first: &[CriterionOutcome], seed: u64) -> CriterionOutcome {
    let (name, budget) = meta(12);
    let start = Instant::now();
    let again: Vec<CriterionOutcome> = (1..=11).map(|id| run_criterion(id, seed)).collect();
    let a = render_lines(first);
    let b = render_lines(&again);
    let passed = a == b;
    let detail = if passed { "second run byte-identical".to_string() } else { "second run differs".to_string() };
    CriterionOutcome { id: 12, name, passed, detail, elapsed: start.elapsed(), budget }
}

fn render_lines(outcomes: &[CriterionOutcome]) -> String {
    outcomes.iter().map(|o| o.line() + "\n").collect()
}

/// All twelve criteria.
pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    let mut out: Vec<CriterionOutcome> = (1..=11).map(|id| run_criterion(id, seed)).collect();
    let det = determinism(&out, seed);
    out.push(det);
    out
}

/// Deterministic report text (timings excluded).
pub fn render_report(outcomes: &[CriterionOutcome], seed: u64) -> String {
    let passed = outcomes.iter().filter(|o| o.passed).count();
    format!(
        "# hypersmt {} selftest\n# seed: {seed}\n{}# passed: {passed}/{}\n",
        crate::VERSION,
        render_lines(outcomes),
        outcomes.len()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        for id in [2, 4, 8, 11] {
            let o = run_criterion(id, 0);
            assert!(o.passed, "{}", o.line());
        }
    }
}
