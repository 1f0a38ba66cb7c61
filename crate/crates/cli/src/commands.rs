use casimir_core::models::log_spaced;
use casimir_core::modes::oracle_convergence;
use casimir_core::units::{energy_to_si, force_to_si};
use casimir_core::{
    casimir_energy, casimir_energy_series, casimir_force, casimir_force_series, CasimirError, CavityConfig,
    EnergyResult, ForceResult, QuadratureSpec, ScattererModel,
};
use rayon::prelude::*;

use crate::output::{Cell, Table};

/// Residuals at or above this fail `validate`.
pub const VALIDATION_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// Rotated-contour quadrature.
    Quad,
    /// Round-trip series with extrapolated tail.
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Spacing {
    Lin,
    Log,
}

/// How to evaluate and in which units to report.
#[derive(Debug, Clone, Copy)]
pub struct Evaluation {
    pub spec: QuadratureSpec,
    pub method: Method,
    pub terms: usize,
    /// Length unit in metres when SI output is requested.
    pub si_unit: Option<f64>,
}

impl Evaluation {
    fn force(&self, cfg: &CavityConfig) -> Result<ForceResult, CasimirError> {
        let mut f = match self.method {
            Method::Quad => casimir_force(cfg, &self.spec)?,
            Method::Series => casimir_force_series(cfg, self.terms, &self.spec)?.force,
        };
        if let Some(unit) = self.si_unit {
            f.value = force_to_si(f.value, unit);
            f.error = force_to_si(f.error, unit);
        }
        Ok(f)
    }

    fn energy(&self, cfg: &CavityConfig) -> Result<EnergyResult, CasimirError> {
        let mut e = match self.method {
            Method::Quad => casimir_energy(cfg, &self.spec)?,
            Method::Series => casimir_energy_series(cfg, self.terms, &self.spec)?.energy,
        };
        if let Some(unit) = self.si_unit {
            e.value = energy_to_si(e.value, unit);
            e.error = energy_to_si(e.error, unit);
        }
        Ok(e)
    }

    fn units(&self, si: &'static str) -> Cell {
        Cell::Text(if self.si_unit.is_some() { si } else { "reduced" }.into())
    }
}

pub fn force(m1: ScattererModel, m2: ScattererModel, distance: f64, eval: &Evaluation) -> Result<Table, CasimirError> {
    let f = eval.force(&CavityConfig::new(m1, m2, distance)?)?;
    let mut table = Table::new(&["L", "force", "force_err", "method", "nodes", "units"]);
    table.push(vec![
        Cell::Num(distance),
        Cell::Num(f.value),
        Cell::Num(f.error),
        Cell::Text(f.method.to_string()),
        Cell::Count(f.nodes),
        eval.units("N"),
    ]);
    Ok(table)
}

pub fn energy(m1: ScattererModel, m2: ScattererModel, distance: f64, eval: &Evaluation) -> Result<Table, CasimirError> {
    let e = eval.energy(&CavityConfig::new(m1, m2, distance)?)?;
    let mut table = Table::new(&["L", "energy", "energy_err", "method", "nodes", "units"]);
    table.push(vec![
        Cell::Num(distance),
        Cell::Num(e.value),
        Cell::Num(e.error),
        Cell::Text(e.method.to_string()),
        Cell::Count(e.nodes),
        eval.units("J"),
    ]);
    Ok(table)
}

/// Distances of a sweep; `start > 0`, `stop > start`, `count ≥ 2`.
pub fn sweep_points(start: f64, stop: f64, count: usize, spacing: Spacing) -> Result<Vec<f64>, CasimirError> {
    if !(start.is_finite() && stop.is_finite() && start > 0.0 && stop > start) {
        return Err(CasimirError::InvalidParameter(format!(
            "sweep needs 0 < start < stop, got start {start}, stop {stop}"
        )));
    }
    if count < 2 {
        return Err(CasimirError::InvalidParameter(format!("sweep needs at least 2 points, got {count}")));
    }
    let mut points = match spacing {
        Spacing::Log => log_spaced(start, stop, count),
        Spacing::Lin => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count).map(|i| start + step * i as f64).collect()
        }
    };
    points[0] = start;
    points[count - 1] = stop;
    Ok(points)
}

/// Rows in input order up to the first failed point, and that failure.
pub struct SweepOutcome {
    pub table: Table,
    pub failure: Option<(f64, CasimirError)>,
}

pub fn sweep(m1: ScattererModel, m2: ScattererModel, points: &[f64], eval: &Evaluation) -> SweepOutcome {
    let results: Vec<Result<(ForceResult, EnergyResult), CasimirError>> = points
        .par_iter()
        .map(|&l| {
            let cfg = CavityConfig::new(m1, m2, l)?;
            Ok((eval.force(&cfg)?, eval.energy(&cfg)?))
        })
        .collect();
    let mut table = Table::new(&["L", "force", "energy", "force_err", "energy_err"]);
    for (&l, result) in points.iter().zip(results) {
        match result {
            Ok((f, e)) => table.push(vec![
                Cell::Num(l),
                Cell::Num(f.value),
                Cell::Num(e.value),
                Cell::Num(f.error),
                Cell::Num(e.error),
            ]),
            Err(err) => {
                return SweepOutcome {
                    table,
                    failure: Some((l, err)),
                }
            }
        }
    }
    SweepOutcome { table, failure: None }
}

pub struct ModesRequest {
    pub m1: ScattererModel,
    pub m2: ScattererModel,
    pub distance_a: f64,
    pub distance_b: f64,
    pub box_lengths: Vec<f64>,
    pub k_max: Option<f64>,
    pub resolution: usize,
    pub si_unit: Option<f64>,
}

pub fn modes(req: &ModesRequest) -> Result<(Table, bool), CasimirError> {
    let rows = oracle_convergence(
        req.m1,
        req.m2,
        req.distance_a,
        req.distance_b,
        &req.box_lengths,
        req.k_max,
        req.resolution,
    )?;
    let scale = |e: f64| req.si_unit.map_or(e, |unit| energy_to_si(e, unit));
    let mut table = Table::new(&["box_length", "oracle", "integral", "rel_dev"]);
    for row in &rows {
        table.push(vec![
            Cell::Num(row.box_length),
            Cell::Num(scale(row.oracle)),
            Cell::Num(scale(row.integral)),
            Cell::Num(row.deviation),
        ]);
    }
    let decreasing = rows.windows(2).all(|w| w[1].deviation < w[0].deviation);
    Ok((table, decreasing))
}

pub fn validate(model: ScattererModel, k_min: f64, k_max: f64, points: usize) -> Result<(Table, bool), CasimirError> {
    if !(k_min > 0.0 && k_max > k_min && points >= 1) {
        return Err(CasimirError::InvalidParameter(format!(
            "k grid needs 0 < k_min < k_max and at least one point, got {k_min}, {k_max}, {points}"
        )));
    }
    let report = model.residual_report(&log_spaced(k_min, k_max, points))?;
    let pass = report.worst() < VALIDATION_THRESHOLD;
    let optional = |v: Option<f64>| v.map_or(Cell::Missing, Cell::Num);
    let mut table = Table::new(&["model", "causal", "points", "unitarity", "det_identity", "round_trip", "pass"]);
    table.push(vec![
        Cell::Text(report.model.clone()),
        Cell::Flag(report.causal),
        Cell::Count(report.points),
        Cell::Num(report.unitarity),
        optional(report.det_identity),
        optional(report.round_trip),
        Cell::Flag(pass),
    ]);
    Ok((table, pass))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_grid_endpoints_exact() {
        let p = sweep_points(0.5, 4.0, 4, Spacing::Log).unwrap();
        assert_eq!(p[0], 0.5);
        assert_eq!(p[3], 4.0);
        assert!((p[1] - 1.0).abs() < 1e-15 && (p[2] - 2.0).abs() < 1e-15);
        let p = sweep_points(1.0, 2.0, 3, Spacing::Lin).unwrap();
        assert_eq!(p, vec![1.0, 1.5, 2.0]);
        assert!(sweep_points(1.0, 2.0, 1, Spacing::Lin).is_err());
        assert!(sweep_points(0.0, 2.0, 3, Spacing::Lin).is_err());
        assert!(sweep_points(3.0, 2.0, 3, Spacing::Log).is_err());
    }

    #[test]
    fn sweep_stops_at_first_failure() {
        let bar = ScattererModel::rect_barrier(1.0, 1.0).unwrap();
        let eval = Evaluation {
            spec: QuadratureSpec::default(),
            method: Method::Quad,
            terms: 512,
            si_unit: None,
        };
        // Barriers overlap below L = 1.
        let out = sweep(bar, bar, &[2.0, 1.5, 0.5, 3.0], &eval);
        assert_eq!(out.table.rows.len(), 2);
        assert_eq!(out.failure.unwrap().0, 0.5);
    }
}
