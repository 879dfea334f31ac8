//! Run configuration: a TOML file describing a map, parameters and output.

use blaschke::blaschke::{monomial_map, Blaschke2D, DegreeMatrix, MapSpec};
use blaschke::families::{equal_degree_default, low_top_degree_default, random_generic_map, RandomZeros};
use blaschke::solver::SolverConfig;
use blaschke::blaschke::spec::ExactParts;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const COMMANDS: [&str; 9] = [
    "classify",
    "lift",
    "degrees",
    "indeterminacy",
    "topdeg",
    "preimage-measure",
    "torus-entropy",
    "winding",
    "reproduce-paper",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    pub map: MapConfig,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: Output,
}

/// Either explicit zero lists or a named family.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    /// `low-top-degree`, `equal-degree`, `monomial` or `random`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Degree matrix for `monomial` and `random`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<[[u32; 2]; 2]>,
    /// Seed for `random`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Largest zero modulus for `random`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_modulus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<ExactParts>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<ExactParts>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<ExactParts>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<ExactParts>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u1: Option<ExactParts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u2: Option<ExactParts>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub n_max: u32,
    pub depth: u32,
    pub samples: usize,
    pub seed: u64,
    /// `auto`, `exact-generic`, `monomial` or `numeric`.
    pub strategy: String,
    /// Torus point `(x, y)` in turns, for backward sampling.
    pub torus_point: [f64; 2],
    /// Expected preimage count for backward sampling; computed when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_top: Option<u64>,
    /// Term cap for exact composition; unlimited when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_terms: Option<usize>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            n_max: 3,
            depth: 3,
            samples: 64,
            seed: 1,
            strategy: "auto".into(),
            torus_point: [0.1, 0.2],
            d_top: None,
            max_terms: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub residual: f64,
    pub dedup: f64,
    pub backsub: f64,
    pub denominator: f64,
    /// Relative size below which a lifted coordinate counts as zero.
    pub indeterminacy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let s = SolverConfig::default();
        Tolerances {
            residual: s.residual_tol,
            dedup: s.dedup_radius,
            backsub: s.backsub_tol,
            denominator: s.denominator_tol,
            indeterminacy: blaschke::blaschke::DEFAULT_INDET_TOL,
        }
    }
}

impl Tolerances {
    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            residual_tol: self.residual,
            dedup_radius: self.dedup,
            backsub_tol: self.backsub,
            denominator_tol: self.denominator,
            ..SolverConfig::default()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Output {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// `json` or `csv`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn invalid(code: &str, message: impl Into<String>) -> CliError {
    CliError::Validation {
        code: code.to_string(),
        message: message.into(),
    }
}

fn in_range<T: PartialOrd + std::fmt::Display>(name: &str, v: T, lo: T, hi: T) -> Result<(), CliError> {
    if v < lo || v > hi {
        return Err(invalid("OutOfRange", format!("{name} = {v} is outside [{lo}, {hi}]")));
    }
    Ok(())
}

/// Parses and validates; the map is normalized to lowest terms.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut cfg: RunConfig = toml::from_str(text).map_err(|e| {
        let (line, col) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        CliError::Parse {
            line,
            col,
            message: e.message().to_string(),
        }
    })?;
    cfg.validate()?;
    if cfg.map.family.is_none() {
        let spec = MapSpec::from_map(&cfg.build_map()?).map_err(CliError::from_module)?;
        cfg.map.a = Some(spec.a);
        cfg.map.b = Some(spec.b);
        cfg.map.c = Some(spec.c);
        cfg.map.d = Some(spec.d);
        cfg.map.u1 = Some(spec.u1);
        cfg.map.u2 = Some(spec.u2);
    }
    Ok(cfg)
}

impl RunConfig {
    /// A config for a map with default parameters.
    pub fn for_map(map: MapConfig) -> Self {
        RunConfig {
            command: None,
            map,
            params: Params::default(),
            tolerances: Tolerances::default(),
            output: Output::default(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(c) = &self.command {
            if !COMMANDS.contains(&c.as_str()) {
                return Err(invalid("UnknownCommand", format!("unknown command {c:?}")));
            }
        }
        let p = &self.params;
        in_range("params.n_max", p.n_max, 1, 30)?;
        in_range("params.depth", p.depth, 1, 12)?;
        in_range("params.samples", p.samples, 1, 1_000_000)?;
        if !["auto", "exact-generic", "monomial", "numeric"].contains(&p.strategy.as_str()) {
            return Err(invalid("UnknownStrategy", format!("unknown strategy {:?}", p.strategy)));
        }
        for v in p.torus_point {
            if !v.is_finite() {
                return Err(invalid("OutOfRange", "params.torus_point must be finite"));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("residual", t.residual),
            ("dedup", t.dedup),
            ("backsub", t.backsub),
            ("denominator", t.denominator),
            ("indeterminacy", t.indeterminacy),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(invalid("OutOfRange", format!("tolerances.{name} = {v} must lie in (0, 1)")));
            }
        }
        if let Some(f) = &self.output.format {
            if f != "json" && f != "csv" {
                return Err(invalid("UnknownFormat", format!("unknown format {f:?}")));
            }
        }
        self.build_map().map(|_| ())
    }

    pub fn build_map(&self) -> Result<Blaschke2D, CliError> {
        let m = &self.map;
        let explicit = [&m.a, &m.b, &m.c, &m.d].iter().any(|x| x.is_some()) || m.u1.is_some() || m.u2.is_some();
        let matrix = || -> Result<DegreeMatrix, CliError> {
            let d = m
                .degrees
                .ok_or_else(|| invalid("MissingField", "map.degrees is required for this family"))?;
            DegreeMatrix::from_rows(d).map_err(CliError::from_module)
        };
        match m.family.as_deref() {
            Some(name) => {
                if explicit {
                    return Err(invalid("ConflictingMap", "give either map.family or zero lists, not both"));
                }
                let unused = |field: &str, present: bool| {
                    if present {
                        Err(invalid("ConflictingMap", format!("map.{field} does not apply to family {name:?}")))
                    } else {
                        Ok(())
                    }
                };
                match name {
                    "low-top-degree" | "equal-degree" => {
                        unused("degrees", m.degrees.is_some())?;
                        unused("seed", m.seed.is_some())?;
                        unused("max_modulus", m.max_modulus.is_some())?;
                        Ok(if name == "low-top-degree" {
                            low_top_degree_default()
                        } else {
                            equal_degree_default()
                        })
                    }
                    "monomial" => {
                        unused("seed", m.seed.is_some())?;
                        unused("max_modulus", m.max_modulus.is_some())?;
                        Ok(monomial_map(matrix()?))
                    }
                    "random" => {
                        let mut z = RandomZeros::default();
                        if let Some(r) = m.max_modulus {
                            if !(r > 0.0 && r <= 1.0) {
                                return Err(invalid("OutOfRange", "map.max_modulus must lie in (0, 1]"));
                            }
                            z.max_modulus = r;
                            // room for enough distinct small zeros
                            z.max_den = ((8.0 / r).ceil() as i64).max(8);
                        }
                        random_generic_map(matrix()?, m.seed.unwrap_or(0), z).map_err(CliError::from_module)
                    }
                    other => Err(invalid("UnknownFamily", format!("unknown map family {other:?}"))),
                }
            }
            None => {
                let need = |v: &Option<Vec<ExactParts>>, k: &str| {
                    v.clone().ok_or_else(|| invalid("MissingField", format!("map.{k} is required")))
                };
                if m.degrees.is_some() || m.seed.is_some() || m.max_modulus.is_some() {
                    return Err(invalid("ConflictingMap", "map.degrees, seed and max_modulus need map.family"));
                }
                let spec = MapSpec {
                    a: need(&m.a, "a")?,
                    b: need(&m.b, "b")?,
                    c: need(&m.c, "c")?,
                    d: need(&m.d, "d")?,
                    u1: m.u1.unwrap_or([1, 1, 0, 1]),
                    u2: m.u2.unwrap_or([1, 1, 0, 1]),
                };
                spec.build().map_err(CliError::from_module)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MONOMIAL: &str = "[map]\nfamily = \"monomial\"\ndegrees = [[1, 1], [1, 2]]\n";

    #[test]
    fn minimal_config() {
        let c = parse_config(MONOMIAL).unwrap();
        assert_eq!(c.params, Params::default());
        assert!(c.build_map().unwrap().is_monomial());
    }

    #[test]
    fn zero_outside_disc() {
        let t = "[map]\na = [[1, 1, 0, 1]]\nb = [[0, 1, 0, 1]]\nc = [[0, 1, 0, 1]]\nd = [[0, 1, 0, 1]]\n";
        match parse_config(t) {
            Err(CliError::Validation { code, .. }) => assert_eq!(code, "ZeroOutsideDisc"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_has_position() {
        let t = format!("{MONOMIAL}foo = 1\n");
        match parse_config(&t) {
            Err(CliError::Parse { line, col, message }) => {
                assert_eq!((line, col), (4, 1), "{message}");
                assert!(message.contains("foo"));
            }
            other => panic!("{other:?}"),
        }
        let t = "[map]\nfamily = \"monomial\"\ndegrees = [[1, 1], [1, 2]]\ncolour = 3\n";
        assert!(matches!(parse_config(t), Err(CliError::Parse { line: 4, .. })));
    }

    #[test]
    fn normalizes_once() {
        let t = "[map]\na = [[2, 4, 0, 1], [0, 1, -1, 3]]\nb = [[1, 3, -2, 10]]\nc = [[0, 1, 1, 5]]\nd = [[1, 4, 0, 1]]\nu1 = [6, 2, 0, 1]\n";
        let once = parse_config(t).unwrap();
        assert_eq!(once.map.a, Some(vec![[1, 2, 0, 1], [0, 1, -1, 3]]));
        let text = once.to_toml();
        let twice = parse_config(&text).unwrap();
        assert_eq!(once, twice);
        assert_eq!(text, twice.to_toml());
    }

    #[test]
    fn range_checks() {
        let t = format!("{MONOMIAL}[params]\ndepth = 0\n");
        assert!(matches!(parse_config(&t), Err(CliError::Validation { code, .. }) if code == "OutOfRange"));
        let t = format!("{MONOMIAL}[tolerances]\nresidual = -1.0\n");
        assert!(matches!(parse_config(&t), Err(CliError::Validation { .. })));
        let t = "[map]\nfamily = \"monomial\"\ndegrees = [[1, 1], [1, 1]]\n";
        assert!(matches!(parse_config(t), Err(CliError::Validation { code, .. }) if code == "DegenerateDeterminant"));
    }
}
