//! Problem files: JSON, `"schema": 1`.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "group": { "generators": ["(0 1)"] },
//!   "representation": { "generators": [[[1, 0], [0, -1]]] },
//!   "field": ["x", "-y"],
//!   "domain": { "q": "1 - x^2 - y^2", "bounding_radius": 1.5 }
//! }
//! ```
//!
//! Generators are cycle strings or image arrays; representation generators
//! are row-major matrices, `{"rotation": m}` or `{"reflection_axis": [a, b]}`;
//! polynomials are infix strings or `[{"exp": [..], "coeff": c}, ..]` lists.

use std::collections::BTreeMap;
use std::path::Path;

use eqmorse::group::group_closure;
use eqmorse::poly::{parse_polynomial, Polynomial};
use eqmorse::representation::{build_representation, reflection_matrix, rotation_matrix};
use eqmorse::{Domain, FiniteGroup, OrthRep, Permutation, Tolerances, VectorField};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub group: GroupSpec,
    pub representation: RepSpec,
    pub field: Vec<PolySpec>,
    pub domain: DomainSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bounds: Option<Vec<usize>>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    /// Number of permuted points; inferred from the generators when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Cycles(String),
    Images(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    #[serde(default)]
    pub generators: Vec<MatrixSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Rows(Vec<Vec<f64>>),
    Rotation { rotation: u32 },
    Reflection { reflection_axis: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolySpec {
    Text(String),
    Terms(Vec<TermSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub exp: Vec<u32>,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub q: PolySpec,
    pub bounding_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_profile: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_resolution: Option<usize>,
    /// Individual tolerance overrides by name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    /// Also run the normal-map degree checks with the field as `w`.
    #[serde(default)]
    pub gauss: bool,
    /// Also rerun on a doubled grid and with a small invariant perturbation.
    #[serde(default)]
    pub stability: bool,
}

/// Reads and validates a problem file.
pub fn parse_problem(path: &Path) -> Result<ProblemSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let spec = parse_problem_str(&text)?;
    Ok(spec)
}

pub fn parse_problem_str(text: &str) -> Result<ProblemSpec, CliError> {
    let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    spec.validate()?;
    Ok(spec)
}

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Validation {
        field: field.to_string(),
        message: message.into(),
    }
}

/// The validated objects a problem describes.
#[derive(Debug, Clone)]
pub struct Built {
    pub group: FiniteGroup,
    pub rep: OrthRep,
    pub field: VectorField,
    pub domain: Domain,
    pub tolerances: Tolerances,
}

impl ProblemSpec {
    pub fn dim(&self) -> usize {
        self.field.len()
    }

    /// Structural checks that need no numerics.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA {
            return Err(invalid("schema", format!("unsupported schema {}, expected {SCHEMA}", self.schema)));
        }
        let n = self.dim();
        if n == 0 || n > 2 {
            return Err(invalid("field", format!("need 1 or 2 components, got {n}")));
        }
        if self.representation.generators.len() != self.group.generators.len() {
            return Err(invalid(
                "representation.generators",
                format!(
                    "{} matrices for {} group generators",
                    self.representation.generators.len(),
                    self.group.generators.len()
                ),
            ));
        }
        for (i, m) in self.representation.generators.iter().enumerate() {
            let field = format!("representation.generators[{i}]");
            match m {
                MatrixSpec::Rows(rows) => {
                    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                        return Err(invalid(&field, format!("expected a {n}x{n} matrix")));
                    }
                }
                MatrixSpec::Rotation { rotation } => {
                    if n != 2 || *rotation == 0 {
                        return Err(invalid(&field, "rotations need n = 2 and a positive order"));
                    }
                }
                MatrixSpec::Reflection { reflection_axis } => {
                    if n != 2 || reflection_axis[0].hypot(reflection_axis[1]) == 0.0 {
                        return Err(invalid(&field, "reflections need n = 2 and a nonzero axis"));
                    }
                }
            }
        }
        if !(self.domain.bounding_radius.is_finite() && self.domain.bounding_radius > 0.0) {
            return Err(invalid("domain.bounding_radius", "must be positive"));
        }
        if let Some(b) = &self.degree_bounds {
            if b.len() != n {
                return Err(invalid("degree_bounds", format!("expected {n} entries")));
            }
            if b.windows(2).any(|w| w[0] < w[1]) {
                return Err(invalid("degree_bounds", "must be non-increasing"));
            }
        }
        if let Some(p) = &self.options.tol_profile {
            if Tolerances::profile(p).is_none() {
                return Err(invalid("options.tol_profile", format!("unknown profile '{p}'")));
            }
        }
        for (i, c) in self.field.iter().enumerate() {
            poly(c, n, &format!("field[{i}]"))?;
        }
        poly(&self.domain.q, n, "domain.q")?;
        Ok(())
    }

    /// Tolerances from the profile, grid and named overrides, with
    /// command-line values taking precedence over the file.
    pub fn tolerances(&self, profile: Option<&str>, grid: Option<usize>) -> Result<Tolerances, CliError> {
        let name = profile.or(self.options.tol_profile.as_deref()).unwrap_or("default");
        let mut t = Tolerances::profile(name).ok_or_else(|| invalid("tol_profile", format!("unknown profile '{name}'")))?;
        for (k, v) in &self.options.tolerances {
            t.set(k, *v).map_err(|m| invalid(&format!("options.tolerances.{k}"), m))?;
        }
        if let Some(g) = grid.or(self.options.grid_resolution) {
            if g < 8 {
                return Err(invalid("grid_resolution", "must be at least 8"));
            }
            t.grid_resolution = g;
        }
        Ok(t)
    }

    pub fn build_group(&self) -> Result<FiniteGroup, CliError> {
        let degree = self.group.degree.unwrap_or_else(|| self.inferred_degree());
        let gens = self
            .group
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let field = format!("group.generators[{i}]");
                let p = match g {
                    GeneratorSpec::Cycles(s) => Permutation::from_cycles(s, degree),
                    GeneratorSpec::Images(v) => Permutation::from_images(v.clone()),
                };
                p.map(|p| p.padded(degree)).map_err(|e| invalid(&field, e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        group_closure(&gens).map_err(|e| invalid("group.generators", e.to_string()))
    }

    fn inferred_degree(&self) -> usize {
        self.group
            .generators
            .iter()
            .map(|g| match g {
                GeneratorSpec::Cycles(s) => s
                    .split(|c: char| !c.is_ascii_digit())
                    .filter_map(|t| t.parse::<usize>().ok())
                    .map(|k| k + 1)
                    .max()
                    .unwrap_or(1),
                GeneratorSpec::Images(v) => v.len(),
            })
            .max()
            .unwrap_or(1)
    }

    pub fn build(&self, tolerances: Tolerances) -> Result<Built, CliError> {
        let n = self.dim();
        let group = self.build_group()?;
        let mats: Vec<DMatrix<f64>> = self
            .representation
            .generators
            .iter()
            .map(|m| match m {
                MatrixSpec::Rows(rows) => DMatrix::from_fn(n, n, |i, j| rows[i][j]),
                MatrixSpec::Rotation { rotation } => rotation_matrix(*rotation),
                MatrixSpec::Reflection { reflection_axis } => reflection_matrix(*reflection_axis),
            })
            .collect();
        let rep = build_representation(&group, n, &mats, tolerances.rep_tol)
            .map_err(|e| invalid("representation", e.to_string()))?;
        let components = self
            .field
            .iter()
            .enumerate()
            .map(|(i, c)| poly(c, n, &format!("field[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let field = VectorField::new(components, self.degree_bounds.clone()).map_err(|e| invalid("field", e.to_string()))?;
        let q = poly(&self.domain.q, n, "domain.q")?;
        let domain = Domain::new(q, self.domain.bounding_radius).map_err(|e| CliError::Refusal {
            stage: "domain".into(),
            hypothesis: "compact domain".into(),
            message: e.to_string(),
        })?;
        Ok(Built {
            group,
            rep,
            field,
            domain,
            tolerances,
        })
    }
}

fn poly(spec: &PolySpec, n: usize, field: &str) -> Result<Polynomial<f64>, CliError> {
    match spec {
        PolySpec::Text(s) => parse_polynomial(s, n).map_err(|e| invalid(field, e.to_string())),
        PolySpec::Terms(terms) => Polynomial::from_terms(n, terms.iter().map(|t| (t.exp.clone(), t.coeff)))
            .map_err(|e| invalid(field, e.to_string())),
    }
}
