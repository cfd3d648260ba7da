//! Accuracy metrics (MRE, MMRE, PRED) and the experiment runner that
//! produces the comparison tables.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::builder::{
    FuzzyEstimator, NominalFisConfig, SampleSource, DEFAULT_ARTIFICIAL_COUNT, DEFAULT_SEED,
};
use crate::cocomo::{Mode, ProjectRecord};
use crate::dataset::{filter_by_size, DEFAULT_SIZE_RANGE};
use crate::error::{Error, Result};
use crate::fuzzy::{PartitionShape, Universe};
use crate::inference::DEFAULT_RESOLUTION;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// PRED threshold used throughout: 25% relative error.
pub const PRED_LEVEL: f64 = 0.25;

/// MRE values this close above the PRED threshold still count as inside it,
/// so that a relative error of exactly 25% is not lost to rounding.
const PRED_SLACK: f64 = 1e-12;

/// Published MMRE (percent) and PRED(25) (percent) for comparison.
pub mod published {
    /// COCOMO baseline MMRE: (nominal, total).
    pub const COCOMO_MMRE: (f64, f64) = (39.6, 38.83);
    /// FIS MMRE for 3, 5, 7 size terms: (shape tag, nominal, total).
    pub const FIS_MMRE: [(&str, [f64; 3], [f64; 3]); 2] = [
        ("TMF", [62.23, 51.73, 48.92], [60.0, 46.17, 41.4]),
        ("GMF", [73.14, 46.25, 45.89], [64.26, 41.06, 38.38]),
    ];
    /// PRED(25) for 3, 5, 7 size terms: (shape tag, nominal, total).
    pub const FIS_PRED25: [(&str, [f64; 3], [f64; 3]); 2] = [
        ("TMF", [16.92, 20.0, 33.84], [15.38, 33.84, 41.54]),
        ("GMF", [15.38, 32.3, 35.38], [18.46, 41.54, 43.07]),
    ];
    pub const MF_COUNTS: [usize; 3] = [3, 5, 7];

    pub fn fis_mmre(tag: &str, n: usize, total: bool) -> Option<f64> {
        let k = MF_COUNTS.iter().position(|&c| c == n)?;
        FIS_MMRE
            .iter()
            .find(|r| r.0 == tag)
            .map(|r| if total { r.2[k] } else { r.1[k] })
    }

    pub fn fis_pred25(tag: &str, n: usize, total: bool) -> Option<f64> {
        let k = MF_COUNTS.iter().position(|&c| c == n)?;
        FIS_PRED25
            .iter()
            .find(|r| r.0 == tag)
            .map(|r| if total { r.2[k] } else { r.1[k] })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    Nominal,
    Total,
}

impl Scope {
    pub fn token(self) -> &'static str {
        match self {
            Scope::Nominal => "nominal",
            Scope::Total => "total",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    Cocomo,
    Fis {
        shape: PartitionShape,
        mf_count: usize,
    },
    Named(String),
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Estimator::Cocomo => f.write_str("COCOMO"),
            Estimator::Fis { shape, mf_count } => write!(f, "FIS-{}-{mf_count}", shape.tag()),
            Estimator::Named(name) => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionPair {
    pub id: String,
    pub kdsi: f64,
    pub actual: f64,
    pub predicted: f64,
}

impl PredictionPair {
    pub fn new(id: impl Into<String>, kdsi: f64, actual: f64, predicted: f64) -> Self {
        PredictionPair {
            id: id.into(),
            kdsi,
            actual,
            predicted,
        }
    }

    pub fn mre(&self) -> Result<f64> {
        mre(self.actual, self.predicted)
    }
}

/// Magnitude of relative error `|actual − predicted| / actual`.
pub fn mre(actual: f64, predicted: f64) -> Result<f64> {
    if !(actual.is_finite() && actual > 0.0) {
        return Err(Error::Domain(format!(
            "actual effort must be positive, got {actual}"
        )));
    }
    if !predicted.is_finite() {
        return Err(Error::Domain(format!("non-finite prediction {predicted}")));
    }
    Ok((actual - predicted).abs() / actual)
}

fn mres(pairs: &[PredictionPair]) -> Result<Vec<f64>> {
    if pairs.is_empty() {
        return Err(Error::Domain("no prediction pairs".into()));
    }
    pairs.iter().map(PredictionPair::mre).collect()
}

pub fn mmre_of(mres: &[f64]) -> Result<f64> {
    if mres.is_empty() {
        return Err(Error::Domain("no MRE values".into()));
    }
    Ok(mres.iter().sum::<f64>() / mres.len() as f64)
}

/// Fraction of MREs at or below `x`.
pub fn pred_of(mres: &[f64], x: f64) -> Result<f64> {
    if mres.is_empty() {
        return Err(Error::Domain("no MRE values".into()));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!(
            "PRED level must be non-negative, got {x}"
        )));
    }
    let hits = mres.iter().filter(|&&m| m <= x + PRED_SLACK).count();
    Ok(hits as f64 / mres.len() as f64)
}

pub fn mmre(pairs: &[PredictionPair]) -> Result<f64> {
    mmre_of(&mres(pairs)?)
}

pub fn pred(pairs: &[PredictionPair], x: f64) -> Result<f64> {
    pred_of(&mres(pairs)?, x)
}

/// `(size, 100·(predicted − actual)/actual)` per pair, ordered by size.
pub fn percentage_error_series(pairs: &[PredictionPair]) -> Result<Vec<(f64, f64)>> {
    let mut series = pairs
        .iter()
        .map(|p| {
            mre(p.actual, p.predicted)?;
            Ok((p.kdsi, 100.0 * (p.predicted - p.actual) / p.actual))
        })
        .collect::<Result<Vec<_>>>()?;
    series.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(series)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub estimator: Estimator,
    pub scope: Scope,
    pub pairs: Vec<PredictionPair>,
    pub mres: Vec<f64>,
    /// Fraction, not percent.
    pub mmre: f64,
    /// Fraction of pairs with MRE ≤ 0.25.
    pub pred25: f64,
}

impl EvaluationReport {
    pub fn new(estimator: Estimator, scope: Scope, pairs: Vec<PredictionPair>) -> Result<Self> {
        let mres = mres(&pairs)?;
        Ok(EvaluationReport {
            estimator,
            scope,
            mmre: mmre_of(&mres)?,
            pred25: pred_of(&mres, PRED_LEVEL)?,
            mres,
            pairs,
        })
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn mmre_pct(&self) -> f64 {
        100.0 * self.mmre
    }

    pub fn pred25_pct(&self) -> f64 {
        100.0 * self.pred25
    }
}

/// Crisp COCOMO reports for `records`. Nominal scope compares against the
/// actual effort with the rated EAF divided out.
pub fn cocomo_reports(records: &[ProjectRecord]) -> Result<(EvaluationReport, EvaluationReport)> {
    let nominal = records
        .iter()
        .map(|r| PredictionPair::new(&r.id, r.kdsi, r.actual_nominal(), r.crisp_nominal()))
        .collect();
    let total = records
        .iter()
        .map(|r| PredictionPair::new(&r.id, r.kdsi, r.actual_pm, r.crisp_total()))
        .collect();
    Ok((
        EvaluationReport::new(Estimator::Cocomo, Scope::Nominal, nominal)?,
        EvaluationReport::new(Estimator::Cocomo, Scope::Total, total)?,
    ))
}

/// Fuzzy reports for `records` under `estimator`.
pub fn fuzzy_reports(
    records: &[ProjectRecord],
    fis: &FuzzyEstimator,
    tag: Estimator,
) -> Result<(EvaluationReport, EvaluationReport)> {
    let mut nominal = Vec::with_capacity(records.len());
    let mut total = Vec::with_capacity(records.len());
    for r in records {
        let e = fis.estimate_project(r)?;
        nominal.push(PredictionPair::new(
            &r.id,
            r.kdsi,
            r.actual_nominal(),
            e.nominal,
        ));
        total.push(PredictionPair::new(&r.id, r.kdsi, r.actual_pm, e.total));
    }
    Ok((
        EvaluationReport::new(tag.clone(), Scope::Nominal, nominal)?,
        EvaluationReport::new(tag, Scope::Total, total)?,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub shapes: Vec<PartitionShape>,
    pub mf_counts: Vec<usize>,
    /// Artificial samples per FIS; `None` uses the analytic grid.
    pub artificial_count: Option<usize>,
    pub seed: u64,
    pub size_range: (f64, f64),
    pub resolution: usize,
    /// MMRE deviation from a published value, in percent points, beyond
    /// which a comparison is flagged.
    pub deviation_band: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            shapes: vec![PartitionShape::Triangular, PartitionShape::Gaussian],
            mf_counts: vec![3, 5, 7],
            artificial_count: Some(DEFAULT_ARTIFICIAL_COUNT),
            seed: DEFAULT_SEED,
            size_range: DEFAULT_SIZE_RANGE,
            resolution: DEFAULT_RESOLUTION,
            deviation_band: 10.0,
        }
    }
}

impl ExperimentConfig {
    pub fn source(&self) -> SampleSource {
        match self.artificial_count {
            Some(count) => SampleSource::Artificial {
                count,
                seed: self.seed,
            },
            None => SampleSource::AnalyticGrid,
        }
    }

    pub fn nominal_config(&self, shape: PartitionShape, n: usize) -> Result<NominalFisConfig> {
        Ok(NominalFisConfig {
            size_universe: Universe::new(self.size_range.0, self.size_range.1)?,
            source: self.source(),
            resolution: self.resolution,
            ..NominalFisConfig::new(n, shape)
        })
    }

    /// Configurations in run order: shapes outer, MF counts inner.
    pub fn matrix(&self) -> Vec<(PartitionShape, usize)> {
        let mut out = Vec::new();
        for &s in &self.shapes {
            for &n in &self.mf_counts {
                if !out.contains(&(s, n)) {
                    out.push((s, n));
                }
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        let matrix: Vec<String> = self
            .matrix()
            .iter()
            .map(|(s, n)| format!("{}-{n}", s.tag()))
            .collect();
        format!(
            "matrix={} source={} range=[{}, {}] resolution={} band={}",
            matrix.join("+"),
            self.source().describe(),
            self.size_range.0,
            self.size_range.1,
            self.resolution,
            self.deviation_band
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub shape: PartitionShape,
    pub mf_count: usize,
    pub nominal: EvaluationReport,
    pub total: EvaluationReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceComparison {
    pub metric: String,
    pub computed: f64,
    pub published: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub records: Vec<ProjectRecord>,
    pub cocomo_nominal: EvaluationReport,
    pub cocomo_total: EvaluationReport,
    pub runs: Vec<RunResult>,
}

/// Builds every FIS in the matrix and evaluates it on the projects inside
/// the configured size range.
pub fn run_experiment(
    records: &[ProjectRecord],
    config: &ExperimentConfig,
) -> Result<ExperimentOutput> {
    let matrix = config.matrix();
    if matrix.is_empty() {
        return Err(Error::Config("empty experiment matrix".into()));
    }
    let (lo, hi) = config.size_range;
    let mut kept = filter_by_size(records, lo, hi);
    if kept.is_empty() {
        return Err(Error::Domain(format!(
            "no projects with size in [{lo}, {hi}] KDSI"
        )));
    }
    kept.sort_by(|a, b| a.kdsi.total_cmp(&b.kdsi).then_with(|| a.id.cmp(&b.id)));
    let (cocomo_nominal, cocomo_total) = cocomo_reports(&kept)?;

    let runs = matrix
        .par_iter()
        .map(|&(shape, n)| {
            let tag = Estimator::Fis { shape, mf_count: n };
            let wrap = |source: Error| Error::Experiment {
                config: tag.to_string(),
                source: Box::new(source),
            };
            let fis = FuzzyEstimator::build(&config.nominal_config(shape, n)?).map_err(wrap)?;
            let (nominal, total) = fuzzy_reports(&kept, &fis, tag.clone()).map_err(wrap)?;
            Ok(RunResult {
                shape,
                mf_count: n,
                nominal,
                total,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentOutput {
        config: config.clone(),
        records: kept,
        cocomo_nominal,
        cocomo_total,
        runs,
    })
}

/// A delimiter-separated data table destined for one output file.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    /// File stem.
    pub name: String,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn num(x: f64) -> String {
    format!("{x:.4}")
}

impl ExperimentOutput {
    pub fn n(&self) -> usize {
        self.records.len()
    }

    pub fn run(&self, shape: PartitionShape, n: usize) -> Option<&RunResult> {
        self.runs
            .iter()
            .find(|r| r.shape == shape && r.mf_count == n)
    }

    /// Run shown against COCOMO and actuals: the largest Gaussian system if
    /// present, else the last run.
    pub fn featured(&self) -> &RunResult {
        self.runs
            .iter()
            .filter(|r| r.shape == PartitionShape::Gaussian)
            .max_by_key(|r| r.mf_count)
            .unwrap_or_else(|| self.runs.last().expect("at least one run"))
    }

    fn reports(&self) -> Vec<&EvaluationReport> {
        let mut reports = vec![&self.cocomo_nominal, &self.cocomo_total];
        for r in &self.runs {
            reports.push(&r.nominal);
            reports.push(&r.total);
        }
        reports
    }

    pub fn reference_comparisons(&self) -> Vec<ReferenceComparison> {
        reference_comparisons(&self.reports(), self.config.deviation_band)
    }

    fn effort_columns(&self, shape: Option<PartitionShape>, counts: &[usize]) -> Vec<&RunResult> {
        counts
            .iter()
            .flat_map(|&n| {
                self.runs
                    .iter()
                    .filter(move |r| r.mf_count == n && shape.map_or(true, |s| r.shape == s))
            })
            .collect()
    }

    fn nominal_curve(&self, name: &str, title: &str, runs: &[&RunResult]) -> DataTable {
        let mut columns: Vec<String> = ["id", "kdsi", "mode", "actual_nominal_pm", "cocomo_pm"]
            .map(String::from)
            .to_vec();
        columns.extend(runs.iter().map(|r| format!("{}_pm", r.nominal.estimator)));
        let rows = self
            .records
            .iter()
            .enumerate()
            .map(|(k, rec)| {
                let mut row = vec![
                    rec.id.clone(),
                    num(rec.kdsi),
                    rec.mode.token().to_string(),
                    num(self.cocomo_nominal.pairs[k].actual),
                    num(self.cocomo_nominal.pairs[k].predicted),
                ];
                row.extend(runs.iter().map(|r| num(r.nominal.pairs[k].predicted)));
                row
            })
            .collect();
        DataTable {
            name: name.into(),
            title: title.into(),
            columns,
            rows,
        }
    }

    fn mmre_bars(&self, name: &str, title: &str, scope: Scope) -> DataTable {
        let pick = |r: &RunResult| {
            if scope == Scope::Nominal {
                r.nominal.clone()
            } else {
                r.total.clone()
            }
        };
        let cocomo = if scope == Scope::Nominal {
            &self.cocomo_nominal
        } else {
            &self.cocomo_total
        };
        let published_cocomo = if scope == Scope::Nominal {
            published::COCOMO_MMRE.0
        } else {
            published::COCOMO_MMRE.1
        };
        let mut rows = vec![vec![
            "COCOMO".into(),
            String::new(),
            String::new(),
            cocomo.n().to_string(),
            num(cocomo.mmre_pct()),
            num(published_cocomo),
        ]];
        for r in &self.runs {
            let rep = pick(r);
            let p = published::fis_mmre(r.shape.tag(), r.mf_count, scope == Scope::Total);
            rows.push(vec![
                rep.estimator.to_string(),
                r.shape.tag().into(),
                r.mf_count.to_string(),
                rep.n().to_string(),
                num(rep.mmre_pct()),
                p.map(num).unwrap_or_default(),
            ]);
        }
        DataTable {
            name: name.into(),
            title: title.into(),
            columns: [
                "estimator",
                "shape",
                "mf_count",
                "n",
                "mmre_pct",
                "published_mmre_pct",
            ]
            .map(String::from)
            .to_vec(),
            rows,
        }
    }

    fn versus_actual(&self, name: &str, title: &str, scope: Scope) -> DataTable {
        let f = self.featured();
        let (cocomo, fis) = match scope {
            Scope::Nominal => (&self.cocomo_nominal, &f.nominal),
            Scope::Total => (&self.cocomo_total, &f.total),
        };
        let rows = self
            .records
            .iter()
            .enumerate()
            .map(|(k, rec)| {
                vec![
                    rec.id.clone(),
                    num(rec.kdsi),
                    num(cocomo.pairs[k].actual),
                    num(cocomo.pairs[k].predicted),
                    num(fis.pairs[k].predicted),
                ]
            })
            .collect();
        DataTable {
            name: name.into(),
            title: title.into(),
            columns: vec![
                "id".into(),
                "kdsi".into(),
                format!("actual_{scope}_pm"),
                "cocomo_pm".into(),
                format!("{}_pm", fis.estimator),
            ],
            rows,
        }
    }

    fn percent_errors(&self, name: &str, title: &str, scope: Scope) -> Result<DataTable> {
        let f = self.featured();
        let (cocomo, fis) = match scope {
            Scope::Nominal => (&self.cocomo_nominal, &f.nominal),
            Scope::Total => (&self.cocomo_total, &f.total),
        };
        let c = percentage_error_series(&cocomo.pairs)?;
        let z = percentage_error_series(&fis.pairs)?;
        let rows = self
            .records
            .iter()
            .zip(c.iter().zip(&z))
            .map(|(rec, (c, z))| vec![rec.id.clone(), num(c.0), num(z.1), num(c.1)])
            .collect();
        Ok(DataTable {
            name: name.into(),
            title: title.into(),
            columns: vec![
                "id".into(),
                "kdsi".into(),
                format!("{}_error_pct", fis.estimator),
                "cocomo_error_pct".into(),
            ],
            rows,
        })
    }

    fn pred25_table(&self) -> DataTable {
        let mut counts: Vec<usize> = self.runs.iter().map(|r| r.mf_count).collect();
        counts.sort_unstable();
        counts.dedup();
        let cell = |shape, n, total: bool| {
            self.run(shape, n)
                .map(|r| {
                    num(if total {
                        r.total.pred25_pct()
                    } else {
                        r.nominal.pred25_pct()
                    })
                })
                .unwrap_or_default()
        };
        let rows = counts
            .iter()
            .map(|&n| {
                vec![
                    n.to_string(),
                    self.n().to_string(),
                    cell(PartitionShape::Triangular, n, false),
                    cell(PartitionShape::Triangular, n, true),
                    cell(PartitionShape::Gaussian, n, false),
                    cell(PartitionShape::Gaussian, n, true),
                ]
            })
            .collect();
        DataTable {
            name: "pred25_by_mf_count".into(),
            title: "PRED(25) in percent by number of size MFs".into(),
            columns: [
                "mf_count",
                "n",
                "tmf_nominal",
                "tmf_total",
                "gmf_nominal",
                "gmf_total",
            ]
            .map(String::from)
            .to_vec(),
            rows,
        }
    }

    /// The nine figure tables and the PRED(25) table, in file order.
    pub fn tables(&self) -> Result<Vec<DataTable>> {
        let counts: Vec<usize> = {
            let mut c: Vec<usize> = self.runs.iter().map(|r| r.mf_count).collect();
            c.sort_unstable();
            c.dedup();
            c
        };
        let max_n = *counts.last().expect("at least one run");
        let tmf = self.effort_columns(Some(PartitionShape::Triangular), &counts);
        let gmf = self.effort_columns(Some(PartitionShape::Gaussian), &counts);
        let top = self.effort_columns(None, &[max_n]);
        Ok(vec![
            self.nominal_curve(
                "nominal_surface_tmf",
                "Nominal effort: triangular-MF FIS by MF count vs COCOMO",
                &tmf,
            ),
            self.nominal_curve(
                "nominal_surface_gmf",
                "Nominal effort: Gaussian-MF FIS by MF count vs COCOMO",
                &gmf,
            ),
            self.nominal_curve(
                "shape_comparison",
                &format!("Nominal effort: {max_n}-MF triangular vs Gaussian vs COCOMO"),
                &top,
            ),
            self.mmre_bars(
                "mmre_nominal",
                "MMRE of nominal effort",
                Scope::Nominal,
            ),
            self.mmre_bars("mmre_total", "MMRE of total effort", Scope::Total),
            self.versus_actual(
                "nominal_vs_actual",
                "Nominal effort: FIS, COCOMO and actual",
                Scope::Nominal,
            ),
            self.versus_actual(
                "total_vs_actual",
                "Total effort: FIS, COCOMO and actual",
                Scope::Total,
            ),
            self.percent_errors(
                "pct_error_nominal",
                "Signed percent error of nominal effort by size",
                Scope::Nominal,
            )?,
            self.percent_errors(
                "pct_error_total",
                "Signed percent error of total effort by size",
                Scope::Total,
            )?,
            self.pred25_table(),
        ])
    }

    /// Plain-text summary of every report with the published reference
    /// values beside it.
    pub fn summary(&self) -> String {
        summary_text(
            self.config.size_range,
            &self.reports(),
            self.config.deviation_band,
        )
    }
}

fn published_mmre(report: &EvaluationReport) -> Option<f64> {
    let total = report.scope == Scope::Total;
    match &report.estimator {
        Estimator::Cocomo => Some(if total {
            published::COCOMO_MMRE.1
        } else {
            published::COCOMO_MMRE.0
        }),
        Estimator::Fis { shape, mf_count } => published::fis_mmre(shape.tag(), *mf_count, total),
        Estimator::Named(_) => None,
    }
}

fn published_pred25(report: &EvaluationReport) -> Option<f64> {
    match &report.estimator {
        Estimator::Fis { shape, mf_count } => {
            published::fis_pred25(shape.tag(), *mf_count, report.scope == Scope::Total)
        }
        _ => None,
    }
}

/// MMRE of each report against its published value, where one exists.
/// `band` is the tolerated deviation in percent points.
pub fn reference_comparisons(reports: &[&EvaluationReport], band: f64) -> Vec<ReferenceComparison> {
    reports
        .iter()
        .filter_map(|r| {
            let p = published_mmre(r)?;
            let computed = r.mmre_pct();
            Some(ReferenceComparison {
                metric: format!("MMRE {} {}", r.estimator, r.scope),
                computed,
                published: p,
                flagged: (computed - p).abs() > band,
            })
        })
        .collect()
}

/// Report table (n, MMRE, PRED(25)) followed by published comparisons.
pub fn summary_text(range: (f64, f64), reports: &[&EvaluationReport], band: f64) -> String {
    let mut s = String::new();
    let n = reports.first().map_or(0, |r| r.n());
    let _ = writeln!(
        s,
        "projects with size in [{}, {}] KDSI: n = {n}",
        range.0, range.1
    );
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:<14} {:<8} {:>4} {:>9} {:>11}",
        "estimator", "scope", "n", "MMRE%", "PRED(25)%"
    );
    for r in reports {
        let _ = writeln!(
            s,
            "{:<14} {:<8} {:>4} {:>9.2} {:>11.2}",
            r.estimator.to_string(),
            r.scope.token(),
            r.n(),
            r.mmre_pct(),
            r.pred25_pct()
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "published reference values (flag when |computed - published| > {band} points)"
    );
    for c in reference_comparisons(reports, band) {
        let _ = writeln!(
            s,
            "  {:<28} computed {:>8.2}  published {:>8.2}  {}",
            c.metric,
            c.computed,
            c.published,
            if c.flagged { "DEVIATES" } else { "within band" }
        );
    }
    for r in reports {
        if let Some(p) = published_pred25(r) {
            let _ = writeln!(
                s,
                "  {:<28} computed {:>8.2}  published {:>8.2}",
                format!("PRED(25) {} {}", r.estimator, r.scope),
                r.pred25_pct(),
                p
            );
        }
    }
    s
}

/// Header metadata written at the top of every output file.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputMeta {
    pub seed: u64,
    pub config: String,
}

pub const UNITS: &str = "size KDSI; effort person-months; MMRE, PRED and errors in percent";

impl OutputMeta {
    pub fn header(&self) -> String {
        format!(
            "# fuzzy-cocomo {VERSION}\n# seed: {}\n# config: {}\n# units: {UNITS}\n",
            self.seed, self.config
        )
    }
}

pub fn render_table(meta: &OutputMeta, table: &DataTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io {
        path: table.name.clone(),
        message: e.to_string(),
    };
    w.write_record(&table.columns).map_err(io)?;
    for row in &table.rows {
        w.write_record(row).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io {
        path: table.name.clone(),
        message: e.to_string(),
    })?;
    Ok(format!(
        "{}# {}\n{}",
        meta.header(),
        table.title,
        String::from_utf8(body).expect("csv output is utf-8")
    ))
}

/// Writes each table to `<dir>/<name>.csv`, creating `dir` if needed.
pub fn write_tables(dir: &Path, meta: &OutputMeta, tables: &[DataTable]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for t in tables {
        let path = dir.join(format!("{}.csv", t.name));
        fs::write(&path, render_table(meta, t)?).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// Mean absolute difference between fuzzy and crisp nominal effort over
/// `points` evenly spaced sizes, for every mode.
pub fn mean_abs_deviation(fis: &crate::builder::NominalEffortFis, points: usize) -> Result<f64> {
    let u = fis.size_universe();
    let mut sum = 0.0;
    let mut count = 0usize;
    for m in Mode::ALL {
        for x in u.grid(points) {
            sum += (fis.estimate_mode(m, x)? - crate::cocomo::nominal_effort(m, x)?).abs();
            count += 1;
        }
    }
    Ok(sum / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocomo::DriverRatings;

    fn pair(actual: f64, predicted: f64) -> PredictionPair {
        PredictionPair::new("p", 10.0, actual, predicted)
    }

    #[test]
    fn mre_examples() {
        assert_eq!(mre(100.0, 100.0).unwrap(), 0.0);
        assert_eq!(mre(100.0, 75.0).unwrap(), 0.25);
        assert!((mre(50.0, 120.0).unwrap() - 1.4).abs() < 1e-15);
        assert!(mre(0.0, 1.0).is_err());
        assert!(mre(-5.0, 1.0).is_err());
    }

    #[test]
    fn mmre_and_pred_examples() {
        let m = [0.10, 0.20, 0.30, 0.50];
        assert!((mmre_of(&m).unwrap() - 0.275).abs() < 1e-15);
        assert_eq!(pred_of(&m, 0.25).unwrap(), 0.5);
        let exact = vec![pair(10.0, 10.0), pair(3.0, 3.0)];
        assert_eq!(mmre(&exact).unwrap(), 0.0);
        assert_eq!(pred(&exact, 0.0).unwrap(), 1.0);
        assert_eq!(pred(&[pair(100.0, 75.0)], 0.25).unwrap(), 1.0);
        assert!(mmre(&[]).is_err());
        assert!(pred(&[], 0.25).is_err());
        assert!(pred_of(&m, -0.1).is_err());
    }

    #[test]
    fn percentage_errors() {
        let pairs = vec![
            PredictionPair::new("b", 20.0, 100.0, 150.0),
            PredictionPair::new("a", 5.0, 10.0, 10.0),
        ];
        let s = percentage_error_series(&pairs).unwrap();
        assert_eq!(s, vec![(5.0, 0.0), (20.0, 50.0)]);
    }

    fn tiny_dataset() -> Vec<ProjectRecord> {
        let mut out = Vec::new();
        for (i, (size, mode)) in [
            (2.0, Mode::Organic),
            (12.0, Mode::Semidetached),
            (45.0, Mode::Embedded),
            (90.0, Mode::Organic),
            (150.0, Mode::Embedded),
        ]
        .into_iter()
        .enumerate()
        {
            let r = DriverRatings::nominal();
            let actual = crate::cocomo::nominal_effort(mode, size).unwrap() * 1.1;
            out.push(ProjectRecord::new(format!("p{i}"), size, mode, r, actual).unwrap());
        }
        out
    }

    #[test]
    fn experiment_single_config_and_baseline_independence() {
        let data = tiny_dataset();
        let cfg = ExperimentConfig {
            shapes: vec![PartitionShape::Gaussian],
            mf_counts: vec![7],
            artificial_count: None,
            ..Default::default()
        };
        let out = run_experiment(&data, &cfg).unwrap();
        assert_eq!(out.runs.len(), 1);
        assert_eq!(out.n(), 4);
        assert_eq!(out.runs[0].nominal.n(), 4);

        let both = ExperimentConfig {
            shapes: vec![PartitionShape::Triangular, PartitionShape::Gaussian],
            mf_counts: vec![3],
            ..cfg.clone()
        };
        let out2 = run_experiment(&data, &both).unwrap();
        assert_eq!(out2.cocomo_nominal, out.cocomo_nominal);
        assert_eq!(out2.cocomo_total, out.cocomo_total);
        let tables = out2.tables().unwrap();
        assert_eq!(tables.len(), 10);
        assert_eq!(tables[9].rows.len(), 1);
    }

    #[test]
    fn experiment_rejects_empty_inputs() {
        let cfg = ExperimentConfig {
            mf_counts: vec![],
            ..Default::default()
        };
        assert!(run_experiment(&tiny_dataset(), &cfg).is_err());
        assert!(run_experiment(&tiny_dataset()[4..], &ExperimentConfig::default()).is_err());
    }

    #[test]
    fn failing_configuration_is_named() {
        let cfg = ExperimentConfig {
            shapes: vec![PartitionShape::Gaussian],
            mf_counts: vec![7],
            artificial_count: Some(2),
            ..Default::default()
        };
        match run_experiment(&tiny_dataset(), &cfg) {
            Err(Error::Experiment { config, .. }) => assert_eq!(config, "FIS-GMF-7"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cocomo_baseline_is_exact_on_cocomo_data() {
        let data = tiny_dataset();
        let (n, t) = cocomo_reports(&data).unwrap();
        for m in n.mres.iter().chain(&t.mres) {
            assert!((m - 0.1 / 1.1).abs() < 1e-12);
        }
    }

    #[test]
    fn rendered_tables_carry_headers() {
        let t = DataTable {
            name: "x".into(),
            title: "demo".into(),
            columns: vec!["a".into(), "b".into()],
            rows: vec![vec!["1".into(), "2".into()]],
        };
        let meta = OutputMeta {
            seed: 9,
            config: "c".into(),
        };
        let text = render_table(&meta, &t).unwrap();
        assert!(text.starts_with(&format!("# fuzzy-cocomo {VERSION}\n# seed: 9\n")));
        assert!(text.ends_with("# demo\na,b\n1,2\n"));
    }
}
