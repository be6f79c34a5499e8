//! Grid sweeps over coupling and temperature, CSV output, figure datasets,
//! sudden-death temperatures and the QD/GQD ordering report.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::channels::{apply_channel, evolve_coeffs, kraus_bf, kraus_gad, ChannelSpec, GAD_BELL_DIAGONAL_P};
use crate::error::{Error, Result};
use crate::measures::{concurrence, gqd1_bds, gqd1_numeric, qd_bds, qd_numeric, wootters_value};
use crate::optimize::OptimizerConfig;
use crate::states::thermal_xxx;

/// `|gqd1 − qd|` below this counts as a tie in the ordering report.
pub const ORDERING_ZERO_BAND: f64 = 1e-9;

/// Noise applied to both qubits before the measures are evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Channel {
    None,
    BitFlip {
        p: f64,
    },
    /// Generalized amplitude damping at p = 1/2.
    Gad {
        gamma: f64,
    },
}

impl Channel {
    pub fn spec(&self) -> Result<Option<ChannelSpec>> {
        match *self {
            Channel::None => Ok(None),
            Channel::BitFlip { p } => kraus_bf(p).map(Some),
            Channel::Gad { gamma } => kraus_gad(GAD_BELL_DIAGONAL_P, gamma).map(Some),
        }
    }

    /// `(p, gamma)` columns for CSV output.
    pub fn parameters(&self) -> (f64, f64) {
        match *self {
            Channel::None => (0.0, 0.0),
            Channel::BitFlip { p } => (p, 0.0),
            Channel::Gad { gamma } => (GAD_BELL_DIAGONAL_P, gamma),
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::None => write!(f, "none"),
            Channel::BitFlip { p } => write!(f, "BF(p={p})"),
            Channel::Gad { gamma } => write!(f, "GAD(gamma={gamma}, p=1/2)"),
        }
    }
}

/// Sample points along one sweep axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    values: Vec<f64>,
}

impl Axis {
    /// `steps` evenly spaced points from `min` to `max` inclusive.
    pub fn linspace(min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidConfig("steps must be >= 1".into()));
        }
        if !min.is_finite() || !max.is_finite() || max < min {
            return Err(Error::InvalidConfig(format!("bad range [{min}, {max}]")));
        }
        if steps == 1 {
            return Ok(Self { values: vec![min] });
        }
        let width = max - min;
        let last = (steps - 1) as f64;
        let values = (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    max
                } else {
                    min + width * i as f64 / last
                }
            })
            .collect();
        Ok(Self { values })
    }

    pub fn points(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("axis needs at least one finite value".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureSet {
    pub qd: bool,
    pub gqd1: bool,
    pub concurrence: bool,
}

impl MeasureSet {
    pub const ALL: Self = Self {
        qd: true,
        gqd1: true,
        concurrence: true,
    };

    /// Parses a comma-separated list such as `qd,gqd1,conc`.
    pub fn parse(list: &str) -> Result<Self> {
        let mut set = Self {
            qd: false,
            gqd1: false,
            concurrence: false,
        };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "qd" => set.qd = true,
                "gqd1" | "gqd" => set.gqd1 = true,
                "conc" | "concurrence" => set.concurrence = true,
                other => return Err(Error::InvalidConfig(format!("unknown measure '{other}'"))),
            }
        }
        if !(set.qd || set.gqd1 || set.concurrence) {
            return Err(Error::InvalidConfig("no measures selected".into()));
        }
        Ok(set)
    }
}

impl Default for MeasureSet {
    fn default() -> Self {
        Self::ALL
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub j_axis: Axis,
    pub t_axis: Axis,
    pub channel: Channel,
    pub measures: MeasureSet,
    /// Also evaluate the numeric optimizers on the evolved density matrix.
    pub oracle: bool,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

pub const DEFAULT_J: (f64, f64, usize) = (-4.0, 4.0, 81);
pub const DEFAULT_T: (f64, f64, usize) = (0.1, 3.0, 59);

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            j_axis: Axis::linspace(DEFAULT_J.0, DEFAULT_J.1, DEFAULT_J.2).expect("valid default"),
            t_axis: Axis::linspace(DEFAULT_T.0, DEFAULT_T.1, DEFAULT_T.2).expect("valid default"),
            channel: Channel::None,
            measures: MeasureSet::ALL,
            oracle: false,
            seed: 0,
            output: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(&t) = self.t_axis.values().iter().find(|&&t| !(t > 0.0)) {
            return Err(Error::InvalidConfig(format!("temperatures must be > 0, got {t}")));
        }
        self.channel.spec()?;
        Ok(())
    }

    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig::with_seed(self.seed)
    }
}

/// One evaluated grid point. Coefficients are after the channel.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub j: f64,
    pub t: f64,
    pub alpha: f64,
    pub p: f64,
    pub gamma: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub qd: Option<f64>,
    pub gqd1: Option<f64>,
    pub concurrence: Option<f64>,
    pub qd_numeric: Option<f64>,
    pub gqd1_numeric: Option<f64>,
}

/// Evaluates every requested measure at one `(J, T)` point.
pub fn evaluate_point(
    j: f64,
    t: f64,
    channel: &Channel,
    measures: MeasureSet,
    oracle: Option<&OptimizerConfig>,
) -> Result<SweepRecord> {
    let state = thermal_xxx(j, t)?;
    let spec = channel.spec()?;
    let (coeffs, rho) = match &spec {
        None => (state.coeffs, state.rho),
        Some(ch) => (evolve_coeffs(&state.coeffs, ch)?, apply_channel(&state.rho, ch)?),
    };
    let (p, gamma) = channel.parameters();

    let qd = if measures.qd { Some(qd_bds(&coeffs)?) } else { None };
    let gqd1 = if measures.gqd1 { Some(gqd1_bds(&coeffs)?) } else { None };
    let conc = if measures.concurrence {
        Some(concurrence(&rho)?)
    } else {
        None
    };
    let (qd_num, gqd1_num) = match oracle {
        Some(cfg) => (
            if measures.qd {
                Some(qd_numeric(&rho, cfg)?)
            } else {
                None
            },
            if measures.gqd1 {
                Some(gqd1_numeric(&rho, cfg)?)
            } else {
                None
            },
        ),
        None => (None, None),
    };

    Ok(SweepRecord {
        j,
        t,
        alpha: state.alpha,
        p,
        gamma,
        c1: coeffs.c1,
        c2: coeffs.c2,
        c3: coeffs.c3,
        qd,
        gqd1,
        concurrence: conc,
        qd_numeric: qd_num,
        gqd1_numeric: gqd1_num,
    })
}

/// Evaluates the full grid (J outer, T inner) and, if `cfg.output` is set,
/// writes it as CSV.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let records = evaluate_grid(cfg)?;
    if let Some(path) = &cfg.output {
        write_csv(path, &records, cfg.oracle)?;
    }
    Ok(records)
}

fn evaluate_grid(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let opt = cfg.optimizer();
    let oracle = cfg.oracle.then_some(&opt);
    let points: Vec<(f64, f64)> = cfg
        .j_axis
        .values()
        .iter()
        .flat_map(|&j| cfg.t_axis.values().iter().map(move |&t| (j, t)))
        .collect();
    // Indexed collect keeps grid order regardless of scheduling.
    points
        .par_iter()
        .map(|&(j, t)| evaluate_point(j, t, &cfg.channel, cfg.measures, oracle))
        .collect()
}

pub const CSV_COLUMNS: [&str; 11] = [
    "J",
    "T",
    "alpha",
    "p",
    "gamma",
    "c1",
    "c2",
    "c3",
    "qd",
    "gqd1",
    "concurrence",
];
pub const CSV_ORACLE_COLUMNS: [&str; 2] = ["qd_numeric", "gqd1_numeric"];

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (11 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_cell(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub fn to_csv(records: &[SweepRecord], oracle: bool) -> String {
    let mut out = String::new();
    let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
    if oracle {
        header.extend(CSV_ORACLE_COLUMNS);
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for r in records {
        let mut cells = vec![
            format_float(r.j),
            format_float(r.t),
            format_float(r.alpha),
            format_float(r.p),
            format_float(r.gamma),
            format_float(r.c1),
            format_float(r.c2),
            format_float(r.c3),
            opt_cell(r.qd),
            opt_cell(r.gqd1),
            opt_cell(r.concurrence),
        ];
        if oracle {
            cells.push(opt_cell(r.qd_numeric));
            cells.push(opt_cell(r.gqd1_numeric));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Writes `contents` to `path` via a sibling temp file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let file_name = path
        .file_name()
        .ok_or_else(|| io_err(std::io::Error::new(std::io::ErrorKind::InvalidInput, "not a file path")))?;
    let tmp = dir.join(format!(".{}.tmp-{}", file_name.to_string_lossy(), std::process::id()));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(e)
    })
}

pub fn write_csv(path: &Path, records: &[SweepRecord], oracle: bool) -> Result<()> {
    write_atomic(path, &to_csv(records, oracle))
}

/// Temperatures used for the "different T" slice panels.
pub const SLICE_TEMPERATURES: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
/// Couplings used for the "different J" panel of the concurrence figure.
pub const SLICE_COUPLINGS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
pub const FIGURE_NOISE: f64 = 0.5;

/// One CSV of a figure dataset.
#[derive(Clone, Debug)]
pub struct FigurePanel {
    pub file_name: String,
    pub config: SweepConfig,
}

fn only(qd: bool, gqd1: bool, concurrence: bool) -> MeasureSet {
    MeasureSet { qd, gqd1, concurrence }
}

/// Grid definitions behind each figure.
pub fn figure_panels(fig: u8) -> Result<Vec<FigurePanel>> {
    let base = SweepConfig::default();
    let slices = Axis::points(SLICE_TEMPERATURES.to_vec())?;
    let t_one = Axis::points(vec![1.0])?;
    let bf = Channel::BitFlip { p: FIGURE_NOISE };
    let gad = Channel::Gad { gamma: FIGURE_NOISE };
    let panel = |name: &str, j_axis: Axis, t_axis: Axis, channel: Channel, measures: MeasureSet| FigurePanel {
        file_name: name.to_string(),
        config: SweepConfig {
            j_axis,
            t_axis,
            channel,
            measures,
            ..base.clone()
        },
    };
    let (j, t) = (base.j_axis.clone(), base.t_axis.clone());
    let panels = match fig {
        1 => vec![
            panel("fig1a.csv", j.clone(), t, Channel::None, only(true, false, false)),
            panel("fig1b.csv", j, slices, Channel::None, only(true, false, false)),
        ],
        2 => vec![
            panel("fig2a.csv", j.clone(), t, Channel::None, only(false, true, false)),
            panel("fig2b.csv", j, slices, Channel::None, only(false, true, false)),
        ],
        3 => vec![
            panel(
                "fig3a.csv",
                Axis::points(SLICE_COUPLINGS.to_vec())?,
                t,
                Channel::None,
                only(false, false, true),
            ),
            panel("fig3b.csv", j, slices, Channel::None, only(false, false, true)),
        ],
        4 => vec![panel("fig4.csv", j, t_one, Channel::None, MeasureSet::ALL)],
        5 => vec![panel("fig5.csv", j, t, bf, MeasureSet::ALL)],
        6 => vec![panel("fig6.csv", j, t_one, bf, MeasureSet::ALL)],
        7 => vec![panel("fig7.csv", j, t, gad, MeasureSet::ALL)],
        8 => vec![panel("fig8.csv", j, t_one, gad, MeasureSet::ALL)],
        other => return Err(Error::UnknownFigure(other)),
    };
    Ok(panels)
}

/// Writes every panel of figure `fig` into `out_dir` and returns the paths.
pub fn figure_dataset(fig: u8, out_dir: &Path, seed: u64) -> Result<Vec<PathBuf>> {
    let panels = figure_panels(fig)?;
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for mut panel in panels {
        let path = out_dir.join(&panel.file_name);
        panel.config.seed = seed;
        panel.config.output = Some(path.clone());
        run_sweep(&panel.config)?;
        written.push(path);
    }
    Ok(written)
}

const SUDDEN_DEATH_WIDTH: f64 = 1e-9;
const COLD_END_FRACTION: f64 = 1e-3;

fn wootters_at(j: f64, t: f64, spec: Option<&ChannelSpec>) -> Result<f64> {
    let state = thermal_xxx(j, t)?;
    match spec {
        None => wootters_value(&state.rho),
        Some(ch) => wootters_value(&apply_channel(&state.rho, ch)?),
    }
}

/// Temperature at which the concurrence of the (noisy) thermal state first
/// reaches zero, found by bisection on the unclamped Wootters value.
pub fn sudden_death_temperature(j: f64, channel: &Channel) -> Result<f64> {
    if !(j > 0.0) || !j.is_finite() {
        return Err(Error::InvalidConfig(format!("sudden death needs J > 0, got {j}")));
    }
    let spec = channel.spec()?;
    let spec = spec.as_ref();

    let mut cold = j * COLD_END_FRACTION;
    if wootters_at(j, cold, spec)? <= 0.0 {
        return Err(Error::NoEntanglementAnywhere { j, t: cold });
    }
    let mut hot = j;
    let mut doublings = 0;
    while wootters_at(j, hot, spec)? > 0.0 {
        cold = hot;
        hot *= 2.0;
        doublings += 1;
        if doublings > 64 {
            return Err(Error::InternalConsistency(format!(
                "concurrence never vanishes for J = {j}"
            )));
        }
    }
    while hot - cold > SUDDEN_DEATH_WIDTH {
        let mid = 0.5 * (cold + hot);
        if wootters_at(j, mid, spec)? > 0.0 {
            cold = mid;
        } else {
            hot = mid;
        }
    }
    Ok(0.5 * (cold + hot))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderingSign {
    /// gqd1 > qd
    Positive,
    Tie,
    /// qd > gqd1
    Negative,
}

impl OrderingSign {
    pub fn of(gqd1: f64, qd: f64) -> Self {
        let d = gqd1 - qd;
        if d.abs() < ORDERING_ZERO_BAND {
            OrderingSign::Tie
        } else if d > 0.0 {
            OrderingSign::Positive
        } else {
            OrderingSign::Negative
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            OrderingSign::Positive => "+",
            OrderingSign::Tie => "0",
            OrderingSign::Negative => "-",
        }
    }
}

/// A sign change of `gqd1 − qd` between neighbouring J samples at fixed T.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub t: f64,
    /// Linear interpolation of the zero of `gqd1 − qd`.
    pub j: f64,
}

#[derive(Clone, Debug)]
pub struct OrderingReport {
    pub channel: Channel,
    pub positive: usize,
    pub tie: usize,
    pub negative: usize,
    pub crossings: Vec<Crossing>,
    pub points: Vec<(f64, f64, f64, f64, OrderingSign)>,
}

impl OrderingReport {
    pub fn total(&self) -> usize {
        self.positive + self.tie + self.negative
    }

    pub fn fraction(&self, sign: OrderingSign) -> f64 {
        let n = match sign {
            OrderingSign::Positive => self.positive,
            OrderingSign::Tie => self.tie,
            OrderingSign::Negative => self.negative,
        };
        n as f64 / self.total() as f64
    }

    /// Both strict orderings occur somewhere on the grid.
    pub fn ordering_violated(&self) -> bool {
        self.positive > 0 && self.negative > 0
    }

    /// Per-point CSV: J, T, qd, gqd1, sign.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("J,T,qd,gqd1,gqd1_minus_qd,sign\n");
        for &(j, t, qd, gqd1, sign) in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                format_float(j),
                format_float(t),
                format_float(qd),
                format_float(gqd1),
                format_float(gqd1 - qd),
                sign.symbol()
            ));
        }
        out
    }
}

impl fmt::Display for OrderingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "channel: {}", self.channel)?;
        writeln!(f, "grid points: {}", self.total())?;
        writeln!(
            f,
            "gqd1 > qd: {} ({:.4})",
            self.positive,
            self.fraction(OrderingSign::Positive)
        )?;
        writeln!(f, "gqd1 = qd: {} ({:.4})", self.tie, self.fraction(OrderingSign::Tie))?;
        writeln!(
            f,
            "gqd1 < qd: {} ({:.4})",
            self.negative,
            self.fraction(OrderingSign::Negative)
        )?;
        if self.crossings.is_empty() {
            writeln!(f, "crossings: none")?;
        } else {
            writeln!(f, "crossings:")?;
            for c in &self.crossings {
                writeln!(f, "  T = {}, J = {}", format_float(c.t), format_float(c.j))?;
            }
        }
        let verdict = if self.ordering_violated() {
            "ordering violated"
        } else {
            "ordering preserved"
        };
        write!(f, "verdict: {verdict}")
    }
}

/// Classifies every grid point by the sign of `gqd1 − qd`.
pub fn ordering_report(cfg: &SweepConfig) -> Result<OrderingReport> {
    if !(cfg.measures.qd && cfg.measures.gqd1) {
        return Err(Error::InvalidConfig("ordering report needs both qd and gqd1".into()));
    }
    let cfg = SweepConfig {
        oracle: false,
        output: None,
        ..cfg.clone()
    };
    let records = evaluate_grid(&cfg)?;
    let mut report = OrderingReport {
        channel: cfg.channel,
        positive: 0,
        tie: 0,
        negative: 0,
        crossings: Vec::new(),
        points: Vec::with_capacity(records.len()),
    };
    for r in &records {
        let (qd, gqd1) = (r.qd.expect("qd requested"), r.gqd1.expect("gqd1 requested"));
        let sign = OrderingSign::of(gqd1, qd);
        match sign {
            OrderingSign::Positive => report.positive += 1,
            OrderingSign::Tie => report.tie += 1,
            OrderingSign::Negative => report.negative += 1,
        }
        report.points.push((r.j, r.t, qd, gqd1, sign));
    }

    // Records are J-major, so walk each fixed-T column along J.
    let nt = cfg.t_axis.values().len();
    for ti in 0..nt {
        let column: Vec<_> = report.points.iter().skip(ti).step_by(nt).collect();
        let mut last: Option<&(f64, f64, f64, f64, OrderingSign)> = None;
        for point in column {
            if point.4 == OrderingSign::Tie {
                continue;
            }
            if let Some(prev) = last {
                if prev.4 != point.4 {
                    let (d0, d1) = (prev.3 - prev.2, point.3 - point.2);
                    let j = prev.0 + (point.0 - prev.0) * d0 / (d0 - d1);
                    report.crossings.push(Crossing { t: point.1, j });
                }
            }
            last = Some(point);
        }
    }
    Ok(report)
}
