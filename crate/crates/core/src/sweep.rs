//! Grids of expected profit differences over `(P_ext, f_a, f_b)` with the
//! pool state held fixed.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cpmm::{build_trade_plan, spot_price, ArbOpportunity, SizingRule, TradePlan};
use crate::engine::{expected_profit_diff, ExternalPrice, FailureModel};
use crate::error::{ModelError, Result};

pub const CSV_HEADER: &str = "p_ext,f_a,f_b,expected_diff,sign";

/// Inclusive, evenly spaced probability axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridAxis {
    lo: f64,
    hi: f64,
    points: usize,
}

impl GridAxis {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(ModelError::invalid(format!(
                "grid needs >= 2 points, got {points}"
            )));
        }
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(ModelError::invalid(format!(
                "grid range must satisfy 0 <= lo <= hi <= 1, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi, points })
    }

    /// `[0, 1]` with `points` points.
    pub fn unit(points: usize) -> Result<Self> {
        Self::new(0.0, 1.0, points)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// The i-th point; endpoints are returned exactly.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * (i as f64 / (self.points - 1) as f64)
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }
}

impl Default for GridAxis {
    fn default() -> Self {
        Self {
            lo: 0.0,
            hi: 1.0,
            points: 101,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub opp: ArbOpportunity,
    pub rule: SizingRule,
    pub p_ext_values: Vec<f64>,
    pub f_a_grid: GridAxis,
    pub f_b_grid: GridAxis,
}

impl SweepConfig {
    pub fn new(opp: ArbOpportunity, rule: SizingRule, p_ext_values: Vec<f64>) -> Self {
        Self {
            opp,
            rule,
            p_ext_values,
            f_a_grid: GridAxis::default(),
            f_b_grid: GridAxis::default(),
        }
    }

    pub fn with_grid(mut self, f_a_grid: GridAxis, f_b_grid: GridAxis) -> Self {
        self.f_a_grid = f_a_grid;
        self.f_b_grid = f_b_grid;
        self
    }

    pub fn cell_count(&self) -> usize {
        self.p_ext_values.len() * self.f_a_grid.points * self.f_b_grid.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "pos")]
    Positive,
    #[serde(rename = "neg")]
    Negative,
    #[serde(rename = "zero")]
    Zero,
}

impl Sign {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sign::Positive => "pos",
            Sign::Negative => "neg",
            Sign::Zero => "zero",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sign {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pos" => Ok(Sign::Positive),
            "neg" => Ok(Sign::Negative),
            "zero" => Ok(Sign::Zero),
            other => Err(ModelError::invalid(format!("unknown sign {other:?}"))),
        }
    }
}

/// Zero iff `|value| <= 1e-15 * max(1, scale)`; callers pass `|dx| * P_A`.
pub fn classify_sign(value: f64, scale: f64) -> Sign {
    let tol = 1e-15 * scale.abs().max(1.0);
    if value.abs() <= tol {
        Sign::Zero
    } else if value > 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Scale for [`classify_sign`] on cells of this plan.
pub fn sign_scale(plan: &TradePlan, opp: &ArbOpportunity) -> f64 {
    plan.delta_x.abs() * spot_price(opp.pool_a())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub p_ext: f64,
    pub f_a: f64,
    pub f_b: f64,
    pub expected_diff: f64,
    pub sign: Sign,
}

/// One cell per `(p_ext, f_a, f_b)`, row-major in that nesting order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepCell>> {
    let plan = build_trade_plan(&cfg.opp, cfg.rule)?;
    let prices = cfg
        .p_ext_values
        .iter()
        .map(|&v| ExternalPrice::new(v))
        .collect::<Result<Vec<_>>>()?;
    let scale = sign_scale(&plan, &cfg.opp);
    let (na, nb) = (cfg.f_a_grid.points, cfg.f_b_grid.points);

    (0..cfg.cell_count())
        .into_par_iter()
        .map(|idx| {
            let p = prices[idx / (na * nb)];
            let f_a = cfg.f_a_grid.value((idx / nb) % na);
            let f_b = cfg.f_b_grid.value(idx % nb);
            let expected_diff = expected_profit_diff(&plan, FailureModel::new(f_a, f_b)?, p);
            Ok(SweepCell {
                p_ext: p.value(),
                f_a,
                f_b,
                expected_diff,
                sign: classify_sign(expected_diff, scale),
            })
        })
        .collect()
}

/// Floats use the shortest representation that round-trips (at most 17
/// significant digits).
pub fn write_csv_to<W: Write>(
    cells: &[SweepCell],
    writer: W,
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(true)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    for cell in cells {
        w.serialize(cell)?;
    }
    if cells.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(cells: &[SweepCell], destination: &Path) -> Result<()> {
    let file = std::fs::File::create(destination).map_err(|source| ModelError::Io {
        path: destination.to_path_buf(),
        source,
    })?;
    write_csv_to(cells, std::io::BufWriter::new(file)).map_err(|source| ModelError::Csv {
        path: destination.to_path_buf(),
        source,
    })
}

pub fn read_csv_from<R: std::io::Read>(
    reader: R,
) -> std::result::Result<Vec<SweepCell>, csv::Error> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!(
                "unexpected header {:?}, want {CSV_HEADER:?}",
                header.join(",")
            ),
        )
        .into());
    }
    r.deserialize().collect()
}

pub fn read_csv(source: &Path) -> Result<Vec<SweepCell>> {
    let file = std::fs::File::open(source).map_err(|e| ModelError::Io {
        path: source.to_path_buf(),
        source: e,
    })?;
    read_csv_from(file).map_err(|e| ModelError::Csv {
        path: source.to_path_buf(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpmm::PoolState;

    fn baseline_opp() -> ArbOpportunity {
        ArbOpportunity::new(
            PoolState::from_price(1.01, 100_000.0, 0.0005).unwrap(),
            PoolState::from_price(1.0, 100_000.0, 0.0005).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_sign(0.0, 0.0), Sign::Zero);
        assert_eq!(classify_sign(-3.2e-4, 0.0), Sign::Negative);
        assert_eq!(classify_sign(1e-20, 0.0), Sign::Zero);
        assert_eq!(classify_sign(2.0, 0.0), Sign::Positive);
        // The guard grows with the trade scale.
        assert_eq!(classify_sign(1e-14, 100.0), Sign::Zero);
        assert_eq!(classify_sign(1e-12, 100.0), Sign::Positive);
    }

    #[test]
    fn grid_axis() {
        assert!(GridAxis::new(0.0, 1.0, 1).is_err());
        assert!(GridAxis::new(0.5, 0.2, 3).is_err());
        assert!(GridAxis::new(0.0, 1.5, 3).is_err());
        let g = GridAxis::unit(101).unwrap();
        assert_eq!(g.value(0), 0.0);
        assert_eq!(g.value(100), 1.0);
        assert_eq!(g.value(50), 0.5);
        let g = GridAxis::new(0.1, 0.7, 4).unwrap();
        assert_eq!(g.values().last(), Some(&0.7));
    }

    #[test]
    fn cells_are_row_major() {
        let cfg = SweepConfig::new(baseline_opp(), SizingRule::FeeAdjusted, vec![0.99, 1.02])
            .with_grid(GridAxis::unit(3).unwrap(), GridAxis::unit(4).unwrap());
        let cells = run_sweep(&cfg).unwrap();
        assert_eq!(cells.len(), 2 * 3 * 4);
        assert_eq!(cells.len(), cfg.cell_count());
        assert_eq!(
            (cells[0].p_ext, cells[0].f_a, cells[0].f_b),
            (0.99, 0.0, 0.0)
        );
        assert_eq!((cells[1].f_a, cells[1].f_b), (0.0, 1.0 / 3.0));
        assert_eq!((cells[4].f_a, cells[4].f_b), (0.5, 0.0));
        assert_eq!(cells[12].p_ext, 1.02);
        for c in cells.iter().filter(|c| c.f_a == 0.0 && c.f_b == 0.0) {
            assert_eq!(c.expected_diff, 0.0);
            assert_eq!(c.sign, Sign::Zero);
        }
    }

    #[test]
    fn no_opportunity_aborts() {
        let p = PoolState::new(100.0, 100.2, 0.003).unwrap();
        let q = PoolState::new(100.0, 100.0, 0.003).unwrap();
        let cfg = SweepConfig::new(
            ArbOpportunity::new(p, q).unwrap(),
            SizingRule::FeeAdjusted,
            vec![1.0],
        );
        assert!(run_sweep(&cfg).unwrap_err().is_no_opportunity());
    }

    #[test]
    fn bad_external_price_rejected() {
        let cfg = SweepConfig::new(baseline_opp(), SizingRule::FeeAdjusted, vec![1.0, -2.0]);
        assert!(matches!(run_sweep(&cfg), Err(ModelError::InvalidInput(_))));
    }

    #[test]
    fn csv_format() {
        let cfg = SweepConfig::new(baseline_opp(), SizingRule::FeeAdjusted, vec![1.005])
            .with_grid(GridAxis::unit(2).unwrap(), GridAxis::unit(2).unwrap());
        let cells = run_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv_to(&cells, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert!(text.ends_with('\n') && !text.contains('\r'));
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().nth(1).unwrap().ends_with(",zero"));
        assert_eq!(read_csv_from(text.as_bytes()).unwrap(), cells);
    }

    #[test]
    fn empty_csv_keeps_header() {
        let mut buf = Vec::new();
        write_csv_to(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(read_csv_from("a,b,c\n1,2,3\n".as_bytes()).is_err());
    }

    #[test]
    fn write_error_names_path() {
        let err = write_csv(&[], Path::new("/nonexistent-dir/x/out.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x/out.csv"));
    }
}
