//! Line-oriented scenario files.
//!
//! ```text
//! # comment
//! [variety]
//! n = 2
//! generator = x0*x2 - x1^2
//!
//! [hypersurfaces]
//! poly = x0 + 2*x1 + 3*x2
//! degree = 1
//!
//! [curve]
//! component = 1
//! component = z
//! component = z^2
//!
//! [params]
//! N = 1
//! epsilon = 0.5
//! r_from = 10
//! r_to = 100
//! r_points = 10
//! r_log_spacing = true
//! truncation = auto
//! seed = 0
//! ```
//!
//! `generator`, `poly`, `component`, `weight` and `form` lines repeat;
//! `degree` checks the preceding `poly`. `r_grid = 2, 4, 8` lists radii
//! explicitly. Optional sections: `[weights]` with `chow_form`, `m`,
//! `weight` and `subset`; `[filtration]` with `n`, `u` and `form`.

use std::path::Path;

use num_rational::BigRational;

use crate::algebra::{parse_rational, HomogeneousPolynomial};
use crate::error::{Error, Result};
use crate::filtration::FiltrationParams;
use crate::nevanlinna::{radius_grid, EntireCurve, ExpPoly, QuadratureConfig};
use crate::smt::{SmtScenario, Truncation};
use crate::variety::VarietyDescriptor;
use crate::weights::{BracketPolynomial, WeightVector};

#[derive(Clone, Debug)]
pub struct Params {
    pub level: Option<usize>,
    pub epsilon: Option<BigRational>,
    pub r_grid: Vec<f64>,
    pub truncation: Truncation,
    pub seed: u64,
    pub precision: usize,
    pub degree_cap: Option<u32>,
    pub hilbert_max: u32,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            level: None,
            epsilon: None,
            r_grid: Vec::new(),
            truncation: Truncation::Auto,
            seed: 0,
            precision: 53,
            degree_cap: None,
            hilbert_max: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightsSection {
    pub chow_form: Option<BracketPolynomial>,
    pub m: Vec<u32>,
    pub weights: Vec<WeightVector>,
    /// 0-based coordinate indices for the Chow lower bound.
    pub subset: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct ScenarioFile {
    pub n: usize,
    pub generators: Vec<HomogeneousPolynomial>,
    pub hypersurfaces: Vec<HomogeneousPolynomial>,
    pub curve: Option<EntireCurve>,
    pub params: Params,
    pub weights: Option<WeightsSection>,
    pub filtration: Option<FiltrationParams>,
}

struct Line<'a> {
    no: usize,
    key: &'a str,
    value: &'a str,
}

fn at(no: usize, e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("line {no}: {e}"))
}

fn parse_num<T: std::str::FromStr>(l: &Line) -> Result<T> {
    l.value.parse().map_err(|_| at(l.no, format!("`{}` is not a valid value for {}", l.value, l.key)))
}

fn parse_list<T: std::str::FromStr>(l: &Line) -> Result<Vec<T>> {
    l.value
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| at(l.no, format!("`{}` is not a valid entry for {}", s.trim(), l.key))))
        .collect()
}

fn parse_bool(l: &Line) -> Result<bool> {
    match l.value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(at(l.no, format!("`{}` is not a boolean", l.value))),
    }
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<(String, Vec<Line>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                sections.push((name.trim().to_string(), Vec::new()));
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| at(no, "expected `key = value`"))?;
            let cur = sections.last_mut().ok_or_else(|| at(no, "entry before any [section]"))?;
            cur.1.push(Line { no, key: key.trim(), value: value.trim() });
        }
        let mut n = None;
        let mut generator_src = Vec::new();
        let mut poly_src: Vec<(usize, &str, Option<(usize, u32)>)> = Vec::new();
        let mut component_src = Vec::new();
        let mut params = Params::default();
        let (mut r_from, mut r_to, mut r_points, mut r_log) = (None, None, None, true);
        let mut weights = None;
        let mut filtration_src: Option<(Option<usize>, Option<u32>, Vec<(usize, &str)>)> = None;
        let mut chow_src = None;
        for (name, lines) in &sections {
            for l in lines {
                let unknown = || Err(at(l.no, format!("unknown key `{}` in [{name}]", l.key)));
                match name.as_str() {
                    "variety" => match l.key {
                        "n" => n = Some(parse_num::<usize>(l)?),
                        "generator" => generator_src.push((l.no, l.value)),
                        _ => return unknown(),
                    },
                    "hypersurfaces" => match l.key {
                        "poly" => poly_src.push((l.no, l.value, None)),
                        "degree" => {
                            let last = poly_src.last_mut().ok_or_else(|| at(l.no, "degree before any poly"))?;
                            last.2 = Some((l.no, parse_num(l)?));
                        }
                        _ => return unknown(),
                    },
                    "curve" => match l.key {
                        "component" => component_src.push((l.no, l.value)),
                        _ => return unknown(),
                    },
                    "params" => match l.key {
                        "N" => params.level = Some(parse_num(l)?),
                        "epsilon" => params.epsilon = Some(parse_rational(l.value).map_err(|e| at(l.no, e))?),
                        "r_grid" => params.r_grid = parse_list(l)?,
                        "r_from" => r_from = Some(parse_num::<f64>(l)?),
                        "r_to" => r_to = Some(parse_num::<f64>(l)?),
                        "r_points" => r_points = Some(parse_num::<usize>(l)?),
                        "r_log_spacing" => r_log = parse_bool(l)?,
                        "truncation" => {
                            params.truncation = match l.value {
                                "auto" => Truncation::Auto,
                                _ => Truncation::Fixed(parse_num(l)?),
                            }
                        }
                        "seed" => params.seed = parse_num(l)?,
                        "precision" => params.precision = parse_num(l)?,
                        "degree_cap" => params.degree_cap = Some(parse_num(l)?),
                        "hilbert_max" => params.hilbert_max = parse_num(l)?,
                        _ => return unknown(),
                    },
                    "weights" => {
                        let w: &mut WeightsSection = weights.get_or_insert_with(|| WeightsSection {
                            chow_form: None,
                            m: Vec::new(),
                            weights: Vec::new(),
                            subset: None,
                        });
                        match l.key {
                            "chow_form" => chow_src = Some((l.no, l.value)),
                            "m" => w.m.extend(parse_list::<u32>(l)?),
                            "weight" => w.weights.push(WeightVector::new(parse_list(l)?)),
                            "subset" => w.subset = Some(parse_list(l)?),
                            _ => return unknown(),
                        }
                    }
                    "filtration" => {
                        let f = filtration_src.get_or_insert((None, None, Vec::new()));
                        match l.key {
                            "n" => f.0 = Some(parse_num(l)?),
                            "u" => f.1 = Some(parse_num(l)?),
                            "form" => f.2.push((l.no, l.value)),
                            _ => return unknown(),
                        }
                    }
                    other => return Err(at(l.no, format!("unknown section [{other}]"))),
                }
            }
        }
        let n = match n {
            Some(n) => n,
            None if !component_src.is_empty() => component_src.len() - 1,
            None => filtration_src.as_ref().and_then(|f| f.0).ok_or_else(|| Error::InvalidInput("missing `n` in [variety]".into()))?,
        };
        let poly = |no: usize, s: &str, n_vars: usize| HomogeneousPolynomial::parse(s, n_vars).map_err(|e| at(no, e));
        let generators = generator_src.iter().map(|&(no, s)| poly(no, s, n + 1)).collect::<Result<Vec<_>>>()?;
        let mut hypersurfaces = Vec::new();
        for (no, s, degree) in poly_src {
            let h = poly(no, s, n + 1)?;
            if let Some((dno, d)) = degree {
                if h.degree() != d {
                    return Err(at(dno, format!("declared degree {d}, polynomial has degree {}", h.degree())));
                }
            }
            hypersurfaces.push(h);
        }
        let curve = if component_src.is_empty() {
            None
        } else {
            let comps = component_src
                .iter()
                .map(|&(no, s)| ExpPoly::parse(s).map_err(|e| at(no, e)))
                .collect::<Result<Vec<_>>>()?;
            let line = component_src[0].0;
            Some(EntireCurve::new(comps).map_err(|e| at(line, e))?)
        };
        if let (Some(from), Some(to), Some(points)) = (r_from, r_to, r_points) {
            if !params.r_grid.is_empty() {
                return Err(Error::InvalidInput("give either r_grid or r_from/r_to/r_points, not both".into()));
            }
            params.r_grid = radius_grid(from, to, points, r_log);
        } else if r_from.is_some() || r_to.is_some() || r_points.is_some() {
            return Err(Error::InvalidInput("r_from, r_to and r_points must be given together".into()));
        }
        if params.r_grid.iter().any(|&r| !(r >= 1.0)) || params.r_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("r grid must be strictly increasing with every radius >= 1".into()));
        }
        if let (Some(w), Some((no, src))) = (weights.as_mut(), chow_src) {
            w.chow_form = Some(BracketPolynomial::parse(src, n).map_err(|e| at(no, e))?);
        }
        let filtration = match filtration_src {
            None => None,
            Some((fnum, u, forms)) => {
                let fnum = fnum.ok_or_else(|| Error::InvalidInput("missing `n` in [filtration]".into()))?;
                let u = u.ok_or_else(|| Error::InvalidInput("missing `u` in [filtration]".into()))?;
                let p = forms.iter().map(|&(no, s)| poly(no, s, fnum + 1)).collect::<Result<Vec<_>>>()?;
                let d = p.first().map_or(1, |f| f.degree());
                Some(FiltrationParams::new(fnum, d, u, p)?)
            }
        };
        Ok(Self { n, generators, hypersurfaces, curve, params, weights, filtration })
    }

    pub fn variety(&self) -> Result<VarietyDescriptor> {
        let v = VarietyDescriptor::new(self.n, self.generators.clone())?;
        Ok(match self.params.degree_cap {
            Some(cap) => v.with_degree_cap(cap),
            None => v,
        })
    }

    pub fn level(&self) -> Result<usize> {
        self.params.level.ok_or_else(|| Error::InvalidInput("missing `N` in [params]".into()))
    }

    pub fn curve(&self) -> Result<&EntireCurve> {
        self.curve.as_ref().ok_or_else(|| Error::InvalidInput("missing [curve] section".into()))
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig { precision: self.params.precision, ..QuadratureConfig::default() }
    }

    pub fn smt_scenario(&self) -> Result<SmtScenario> {
        if self.params.r_grid.is_empty() {
            return Err(Error::InvalidInput("missing r grid in [params]".into()));
        }
        Ok(SmtScenario {
            variety: self.variety()?,
            hypersurfaces: self.hypersurfaces.clone(),
            level: self.level()?,
            epsilon: self.params.epsilon.clone().ok_or_else(|| Error::InvalidInput("missing `epsilon` in [params]".into()))?,
            curve: self.curve()?.clone(),
            r_grid: self.params.r_grid.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONIC: &str = "
# conic with five lines
[variety]
n = 2
generator = x0*x2 - x1^2

[hypersurfaces]
poly = x0 + 2*x1 + 3*x2
degree = 1
poly = x0 - x1 + 5*x2

[curve]
component = 1
component = z
component = z^2

[params]
N = 1
epsilon = 0.5
r_from = 10
r_to = 100
r_points = 4
truncation = auto
seed = 7

[weights]
chow_form = [0,1]
m = 2, 3
weight = 1,0,0
weight = 0,1,2
";

    #[test]
    fn parses_full_file() {
        let s = ScenarioFile::parse(CONIC).unwrap();
        assert_eq!(s.n, 2);
        assert_eq!(s.hypersurfaces.len(), 2);
        assert_eq!(s.params.r_grid.len(), 4);
        assert_eq!(s.params.seed, 7);
        assert_eq!(s.level().unwrap(), 1);
        let w = s.weights.as_ref().unwrap();
        assert_eq!(w.m, vec![2, 3]);
        assert_eq!(w.weights.len(), 2);
        assert!(w.chow_form.is_some());
        assert_eq!(s.variety().unwrap().dimension().unwrap(), 1);
        assert!(s.smt_scenario().is_ok());
    }

    #[test]
    fn reports_line_numbers() {
        let bad = CONIC.replace("poly = x0 - x1 + 5*x2", "poly = x0 +* x1");
        let e = ScenarioFile::parse(&bad).unwrap_err().to_string();
        assert!(e.contains("line 10") && e.contains("position 4"), "{e}");
        let bad = CONIC.replace("degree = 1", "degree = 2");
        assert!(ScenarioFile::parse(&bad).unwrap_err().to_string().contains("line 9"));
        let bad = CONIC.replace("seed = 7", "sed = 7");
        assert!(ScenarioFile::parse(&bad).unwrap_err().to_string().contains("unknown key"));
        assert!(ScenarioFile::parse("n = 2").is_err());
        let unsorted = CONIC.replace("r_from = 10\nr_to = 100\nr_points = 4", "r_grid = 5, 3");
        assert!(ScenarioFile::parse(&unsorted).is_err());
    }

    #[test]
    fn filtration_section() {
        let s = ScenarioFile::parse("[filtration]\nn = 2\nu = 4\nform = x0\nform = x1\n").unwrap();
        let f = s.filtration.unwrap();
        assert_eq!((f.n, f.d, f.u), (2, 1, 4));
    }
}
