//! Numerical tolerances used across the pipeline.
//!
//! Every floor below is multiplied by a problem scale before use:
//! `q_scale` (largest coefficient of `Q`), `v_scale` (largest coefficient of
//! the field), or the bounding radius `R` for distances.

/// Tolerance record. `Default` gives the standard profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Orthogonality tolerance for representation matrices.
    pub rep_tol: f64,
    /// Coefficient pruning threshold, relative to the largest coefficient.
    pub prune_rel: f64,
    /// Coefficient threshold when reading off a restricted degree.
    pub restricted_degree_rel: f64,
    /// Invariance check threshold, relative to the largest coefficient.
    pub invariance_rel: f64,
    /// Boundary points are polished until `|Q| <= boundary_polish * q_scale`.
    pub boundary_polish: f64,
    /// `|grad Q|` below this (times `q_scale`) on the boundary is a singular boundary.
    pub singular_boundary: f64,
    /// Minimum `|v|` on the boundary (times `v_scale`).
    pub boundary_zero: f64,
    /// Minimum `|D_v h|` at a tangency (times `q_scale * v_scale^2`).
    pub genericity: f64,
    /// Newton residual for zeros: `|v| <= zero_residual * v_scale`.
    pub zero_residual: f64,
    /// Simple-zero floor on `|det J|` (times `v_scale^n`).
    pub simple_zero: f64,
    /// A zero with `|Q| < zero_margin * q_scale` lies on the boundary.
    pub zero_margin: f64,
    /// Deduplication distance for zeros (times `R`).
    pub zero_dedup: f64,
    /// Stabilizer tolerance: `|rho(g)x - x| <= stabilizer * max(1, |x|)`.
    pub stabilizer: f64,
    /// Orbit identification distance (times `R`).
    pub orbit_match: f64,
    /// Singular-value threshold for fixed subspaces, relative to the largest.
    pub fixed_space_rel: f64,
    /// Singular-value threshold for coordinate-projection ranks.
    pub rank_tol: f64,
    /// Allowed distance of a turning/winding integral from an integer.
    pub integer_slack: f64,
    /// Hausdorff tolerance for fixed-set strata comparisons (times `R`).
    pub hausdorff: f64,
    /// Curvature-integral residual tolerance.
    pub curvature: f64,
    /// Marching-squares cells per side.
    pub grid_resolution: usize,
    /// Newton seeds per side for the 2D zero search.
    pub zero_seeds: usize,
    /// Newton seeds per fixed line.
    pub line_seeds: usize,
    /// Sign-scan samples for 1D root isolation.
    pub line_scan: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rep_tol: 1e-9,
            prune_rel: 1e-14,
            restricted_degree_rel: 1e-9,
            invariance_rel: 1e-8,
            boundary_polish: 1e-10,
            singular_boundary: 1e-7,
            boundary_zero: 1e-7,
            genericity: 1e-6,
            zero_residual: 1e-10,
            simple_zero: 1e-8,
            zero_margin: 1e-8,
            zero_dedup: 1e-6,
            stabilizer: 1e-6,
            orbit_match: 1e-6,
            fixed_space_rel: 1e-8,
            rank_tol: 1e-8,
            integer_slack: 0.01,
            hausdorff: 1e-5,
            curvature: 1e-3,
            grid_resolution: 512,
            zero_seeds: 64,
            line_seeds: 256,
            line_scan: 4096,
        }
    }
}

impl Tolerances {
    /// Named profiles: `default`, `strict` (floors x10, finer grids) and
    /// `loose` (floors /10).
    pub fn profile(name: &str) -> Option<Tolerances> {
        let base = Tolerances::default();
        match name {
            "default" => Some(base),
            "strict" => Some(Tolerances {
                genericity: base.genericity * 10.0,
                simple_zero: base.simple_zero * 10.0,
                zero_margin: base.zero_margin * 10.0,
                boundary_zero: base.boundary_zero * 10.0,
                grid_resolution: base.grid_resolution * 2,
                zero_seeds: base.zero_seeds * 2,
                ..base
            }),
            "loose" => Some(Tolerances {
                genericity: base.genericity / 10.0,
                simple_zero: base.simple_zero / 10.0,
                zero_margin: base.zero_margin / 10.0,
                boundary_zero: base.boundary_zero / 10.0,
                ..base
            }),
            _ => None,
        }
    }
    /// Every field by name, in declaration order.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("rep_tol", self.rep_tol),
            ("prune_rel", self.prune_rel),
            ("restricted_degree_rel", self.restricted_degree_rel),
            ("invariance_rel", self.invariance_rel),
            ("boundary_polish", self.boundary_polish),
            ("singular_boundary", self.singular_boundary),
            ("boundary_zero", self.boundary_zero),
            ("genericity", self.genericity),
            ("zero_residual", self.zero_residual),
            ("simple_zero", self.simple_zero),
            ("zero_margin", self.zero_margin),
            ("zero_dedup", self.zero_dedup),
            ("stabilizer", self.stabilizer),
            ("orbit_match", self.orbit_match),
            ("fixed_space_rel", self.fixed_space_rel),
            ("rank_tol", self.rank_tol),
            ("integer_slack", self.integer_slack),
            ("hausdorff", self.hausdorff),
            ("curvature", self.curvature),
            ("grid_resolution", self.grid_resolution as f64),
            ("zero_seeds", self.zero_seeds as f64),
            ("line_seeds", self.line_seeds as f64),
            ("line_scan", self.line_scan as f64),
        ]
    }

    /// Overrides one field by name. Floors must be positive and finite,
    /// counts positive integers.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), String> {
        if !(value.is_finite() && value > 0.0) {
            return Err(format!("{name} must be positive and finite, got {value}"));
        }
        let count = |v: f64| {
            if v.fract() == 0.0 && v <= 1e6 {
                Ok(v as usize)
            } else {
                Err(format!("{name} must be an integer up to 10^6, got {v}"))
            }
        };
        match name {
            "rep_tol" => self.rep_tol = value,
            "prune_rel" => self.prune_rel = value,
            "restricted_degree_rel" => self.restricted_degree_rel = value,
            "invariance_rel" => self.invariance_rel = value,
            "boundary_polish" => self.boundary_polish = value,
            "singular_boundary" => self.singular_boundary = value,
            "boundary_zero" => self.boundary_zero = value,
            "genericity" => self.genericity = value,
            "zero_residual" => self.zero_residual = value,
            "simple_zero" => self.simple_zero = value,
            "zero_margin" => self.zero_margin = value,
            "zero_dedup" => self.zero_dedup = value,
            "stabilizer" => self.stabilizer = value,
            "orbit_match" => self.orbit_match = value,
            "fixed_space_rel" => self.fixed_space_rel = value,
            "rank_tol" => self.rank_tol = value,
            "integer_slack" => self.integer_slack = value,
            "hausdorff" => self.hausdorff = value,
            "curvature" => self.curvature = value,
            "grid_resolution" => self.grid_resolution = count(value)?,
            "zero_seeds" => self.zero_seeds = count(value)?,
            "line_seeds" => self.line_seeds = count(value)?,
            "line_scan" => self.line_scan = count(value)?,
            _ => return Err(format!("unknown tolerance '{name}'")),
        }
        Ok(())
    }
}
