//! Parameter-sweep engine with CSV and SVG emission.
//!
//! A sweep varies one model parameter over a uniform grid, evaluates the
//! requested correlation measures at each point and emits the table as
//! CSV and, optionally, as a self-contained SVG line plot. Rows are
//! independent and evaluated in parallel; output is deterministic.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::correlations::{brute_force_minimize, CorrError, MeasureKind};
use crate::model::{thermal_state, ModelError, ModelParams, TEMPERATURE_FLOOR};

/// Directions used by the in-sweep oracle validation.
pub const ORACLE_CHECK_DIRECTIONS: usize = 10_000;
/// Allowed gap between closed form and grid minimum.
pub const ORACLE_CHECK_TOL: f64 = 2e-3;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("model evaluation failed at x = {x}: {source}")]
    Model { x: f64, source: ModelError },
    #[error("correlation evaluation failed at x = {x}: {source}")]
    Correlation { x: f64, source: CorrError },
    #[error(
        "oracle check failed at x = {x}: {kind:?} closed form {closed} vs grid minimum {oracle}"
    )]
    OracleMismatch {
        x: f64,
        kind: MeasureKind,
        closed: f64,
        oracle: f64,
    },
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Which model parameter the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Epsilon,
    Delta,
    Dm,
    Temperature,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::Delta => "delta",
            SweepAxis::Dm => "dm",
            SweepAxis::Temperature => "temperature",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "epsilon" => Ok(SweepAxis::Epsilon),
            "delta" => Ok(SweepAxis::Delta),
            "dm" => Ok(SweepAxis::Dm),
            "temperature" => Ok(SweepAxis::Temperature),
            other => Err(format!(
                "unknown axis `{other}` (expected epsilon, delta, dm or temperature)"
            )),
        }
    }
}

/// Uniform grid: steps points from min to max inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn value_at(&self, k: usize) -> f64 {
        self.min + k as f64 * (self.max - self.min) / (self.steps - 1) as f64
    }
}

/// Which measures a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureSelection {
    pub lqu: bool,
    pub lqfi: bool,
}

impl MeasureSelection {
    pub const BOTH: Self = Self {
        lqu: true,
        lqfi: true,
    };

    pub fn is_empty(&self) -> bool {
        !self.lqu && !self.lqfi
    }

    pub fn count(&self) -> usize {
        usize::from(self.lqu) + usize::from(self.lqfi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub range: SweepRange,
    /// Values of the non-axis parameters; the axis field is overwritten
    /// per row.
    pub fixed: ModelParams,
    pub measures: MeasureSelection,
    pub oracle_check: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        let bad = |msg: String| Err(SweepError::InvalidSpec(msg));
        if !(self.range.min.is_finite() && self.range.max.is_finite()) {
            return bad("range bounds must be finite".into());
        }
        if self.range.min >= self.range.max {
            return bad(format!(
                "range min {} must be below max {}",
                self.range.min, self.range.max
            ));
        }
        if self.range.steps < 2 {
            return bad(format!("need at least 2 steps, got {}", self.range.steps));
        }
        if self.axis == SweepAxis::Temperature && self.range.min < TEMPERATURE_FLOOR {
            return bad(format!(
                "temperature sweep must start at or above {TEMPERATURE_FLOOR}"
            ));
        }
        if self.axis != SweepAxis::Temperature && self.fixed.temperature < TEMPERATURE_FLOOR {
            return bad(format!(
                "fixed temperature {} below floor {TEMPERATURE_FLOOR}",
                self.fixed.temperature
            ));
        }
        if self.measures.is_empty() {
            return bad("at least one measure must be selected".into());
        }
        Ok(())
    }

    /// Model parameters at a given axis value.
    pub fn params_at(&self, x: f64) -> ModelParams {
        let mut p = self.fixed;
        match self.axis {
            SweepAxis::Epsilon => p.epsilon = x,
            SweepAxis::Delta => p.delta = x,
            SweepAxis::Dm => p.dm = x,
            SweepAxis::Temperature => p.temperature = x,
        }
        p
    }
}

/// One evaluated grid point. Measures that were not requested are None.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub lqu: Option<f64>,
    pub lqfi: Option<f64>,
    pub partition: f64,
}

/// Evaluates the sweep. Rows come back in ascending x; identical specs
/// produce bit-identical rows. With `oracle_check` set, every 10th row
/// is validated against the brute-force minimum and a mismatch aborts
/// the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, SweepError> {
    spec.validate()?;
    (0..spec.range.steps)
        .into_par_iter()
        .map(|k| evaluate_row(spec, k))
        .collect()
}

fn evaluate_row(spec: &SweepSpec, k: usize) -> Result<SweepRow, SweepError> {
    let x = spec.range.value_at(k);
    let params = spec.params_at(x);
    let state = thermal_state(&params).map_err(|source| SweepError::Model { x, source })?;

    let check_oracle = spec.oracle_check && k.is_multiple_of(10);
    let mut row = SweepRow {
        x,
        lqu: None,
        lqfi: None,
        partition: state.partition,
    };
    for kind in [MeasureKind::Lqu, MeasureKind::Lqfi] {
        let wanted = match kind {
            MeasureKind::Lqu => spec.measures.lqu,
            MeasureKind::Lqfi => spec.measures.lqfi,
        };
        if !wanted {
            continue;
        }
        let result = match kind {
            MeasureKind::Lqu => state.lqu(),
            MeasureKind::Lqfi => state.lqfi(),
        }
        .map_err(|source| SweepError::Correlation { x, source })?;

        if check_oracle {
            let (oracle, _) = brute_force_minimize(&state.rho, kind, ORACLE_CHECK_DIRECTIONS)
                .map_err(|source| SweepError::Correlation { x, source })?;
            if (result.value - oracle).abs() > ORACLE_CHECK_TOL {
                return Err(SweepError::OracleMismatch {
                    x,
                    kind,
                    closed: result.value,
                    oracle,
                });
            }
        }
        assert!(
            (-1e-10..=1.0 + 1e-10).contains(&result.value),
            "{kind:?} value {} out of range at x = {x}",
            result.value
        );
        match kind {
            MeasureKind::Lqu => row.lqu = Some(result.value),
            MeasureKind::Lqfi => row.lqfi = Some(result.value),
        }
    }
    Ok(row)
}

/// Shortest decimal representation that round-trips to the same f64.
fn format_float(v: f64) -> String {
    format!("{v}")
}

/// Writes rows as `x,lqu,lqfi,partition` CSV (LF endings, full
/// round-trip precision, absent measures as empty fields). The file is
/// written whole and moved into place by rename.
pub fn write_csv(rows: &[SweepRow], path: &Path) -> Result<(), SweepError> {
    assert!(!rows.is_empty(), "rows must be non-empty");
    let mut body = String::from("x,lqu,lqfi,partition\n");
    for row in rows {
        body.push_str(&format_float(row.x));
        body.push(',');
        if let Some(v) = row.lqu {
            body.push_str(&format_float(v));
        }
        body.push(',');
        if let Some(v) = row.lqfi {
            body.push_str(&format_float(v));
        }
        body.push(',');
        body.push_str(&format_float(row.partition));
        body.push('\n');
    }
    write_atomic(path, body.as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), SweepError> {
    let io_err = |source| SweepError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut file = std::fs::File::create(&tmp).map_err(io_err)?;
    file.write_all(bytes).map_err(io_err)?;
    file.sync_all().map_err(io_err)?;
    drop(file);
    std::fs::rename(&tmp, path).map_err(io_err)
}

const PLOT_WIDTH: f64 = 800.0;
const PLOT_HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

/// Renders the sweep as a self-contained SVG 1.1 document: linear axes,
/// one polyline per requested measure, y fixed to the measure range
/// [0, 1].
pub fn emit_plot(spec: &SweepSpec, rows: &[SweepRow], path: &Path) -> Result<(), SweepError> {
    assert!(!rows.is_empty(), "rows must be non-empty");
    let x_min = spec.range.min;
    let x_max = spec.range.max;
    let inner_w = PLOT_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let inner_h = PLOT_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_px = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * inner_w;
    let y_px = |y: f64| MARGIN_TOP + (1.0 - y) * inner_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{PLOT_WIDTH}\" height=\"{PLOT_HEIGHT}\" \
         viewBox=\"0 0 {PLOT_WIDTH} {PLOT_HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes.
    let x0 = x_px(x_min);
    let x1 = x_px(x_max);
    let y0 = y_px(0.0);
    let y1 = y_px(1.0);
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"black\"/>\n"
    ));

    // Ticks and tick labels.
    for i in 0..=4 {
        let x = x_min + i as f64 * (x_max - x_min) / 4.0;
        let px = x_px(x);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{y0:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            y0 + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{x:.3}</text>\n",
            y0 + 20.0
        ));
    }
    for i in 0..=5 {
        let y = i as f64 / 5.0;
        let py = y_px(y);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{x0:.2}\" y2=\"{py:.2}\" stroke=\"black\"/>\n",
            x0 - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{y:.1}</text>\n",
            x0 - 9.0,
            py + 4.0
        ));
    }

    // Axis labels.
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        (x0 + x1) / 2.0,
        y0 + 45.0,
        spec.axis.name()
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.2})\">correlation</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    ));

    type SeriesValue = fn(&SweepRow) -> Option<f64>;
    let series: [(&str, &str, SeriesValue); 2] = [
        ("LQU", "#1f77b4", |r: &SweepRow| r.lqu),
        ("lQFI", "#d62728", |r: &SweepRow| r.lqfi),
    ];
    let mut legend_y = MARGIN_TOP + 10.0;
    for (label, color, extract) in series {
        let points: Vec<String> = rows
            .iter()
            .filter_map(|row| extract(row).map(|v| format!("{:.2},{:.2}", x_px(row.x), y_px(v))))
            .collect();
        if points.is_empty() {
            continue;
        }
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{legend_y:.2}\" font-size=\"12\" fill=\"{color}\">{label}</text>\n",
            x1 - 60.0
        ));
        legend_y += 16.0;
    }

    svg.push_str("</svg>\n");
    write_atomic(path, svg.as_bytes())
}
