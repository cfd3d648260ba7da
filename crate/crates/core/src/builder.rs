//! Synthesis of the nominal-effort FIS over (mode, size), the per-driver
//! multiplier FISs, and the combined fuzzy estimator.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cocomo::{
    nominal_effort, CostDriver, CostDriverTable, DriverId, Level, Mode, ProjectRecord,
};
use crate::error::{Error, Result};
use crate::fuzzy::{
    make_partition_with_crossing, ordinal_names, LinguisticVariable, MembershipFunction,
    PartitionShape, Term, Universe, FWHM_PER_SIGMA,
};
use crate::inference::{FuzzyInferenceSystem, Operators, Rule, DEFAULT_RESOLUTION};

/// Free-form key/value record of how a system was built. Written into FIS
/// file headers.
pub type Provenance = BTreeMap<String, String>;

pub const MODE_UNIVERSE: (f64, f64) = (1.0, 1.25);
pub const DEFAULT_SIZE_CROSSING: f64 = 0.2;
pub const DEFAULT_MIN_SIGMA: f64 = 0.05;
pub const DEFAULT_GAP_FRACTION: f64 = 0.25;
pub const DEFAULT_ARTIFICIAL_COUNT: usize = 2000;
pub const DEFAULT_SEED: u64 = 42;

/// Where the consequent centres of the nominal rule base come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSource {
    /// One exact COCOMO evaluation at each (mode, size-term centre) cell.
    AnalyticGrid,
    /// Random projects, reduced to one rule per cell by highest firing degree.
    Artificial { count: usize, seed: u64 },
}

impl SampleSource {
    pub fn describe(&self) -> String {
        match self {
            SampleSource::AnalyticGrid => "grid".into(),
            SampleSource::Artificial { count, seed } => {
                format!("artificial(count={count}, seed={seed})")
            }
        }
    }
}

/// Scale of a nominal FIS output axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputScale {
    Linear,
    /// Output is ln(person-months).
    Ln,
}

impl OutputScale {
    pub fn token(self) -> &'static str {
        match self {
            OutputScale::Linear => "linear",
            OutputScale::Ln => "ln",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(OutputScale::Linear),
            "ln" => Ok(OutputScale::Ln),
            other => Err(Error::Config(format!("unknown output scale `{other}`"))),
        }
    }

    fn to_pm(self, y: f64) -> f64 {
        match self {
            OutputScale::Linear => y,
            OutputScale::Ln => y.exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NominalFisConfig {
    pub mf_count: usize,
    pub shape: PartitionShape,
    pub size_universe: Universe,
    /// Output universe in ln(PM). Derived from the consequent centres when
    /// absent.
    pub effort_universe: Option<Universe>,
    /// Degree at which adjacent Gaussian size terms cross.
    pub size_crossing: f64,
    /// Lower bound on consequent sigma, ln(PM) units.
    pub min_sigma: f64,
    /// Consequent sigma as a fraction of the gap to the nearest other centre.
    pub gap_fraction: f64,
    pub source: SampleSource,
    pub resolution: usize,
    pub operators: Operators,
}

impl Default for NominalFisConfig {
    fn default() -> Self {
        NominalFisConfig {
            mf_count: 7,
            shape: PartitionShape::Gaussian,
            size_universe: Universe::new(1.0, 100.0).expect("static universe"),
            effort_universe: None,
            size_crossing: DEFAULT_SIZE_CROSSING,
            min_sigma: DEFAULT_MIN_SIGMA,
            gap_fraction: DEFAULT_GAP_FRACTION,
            source: SampleSource::AnalyticGrid,
            resolution: DEFAULT_RESOLUTION,
            operators: Operators::default(),
        }
    }
}

impl NominalFisConfig {
    pub fn new(mf_count: usize, shape: PartitionShape) -> Self {
        NominalFisConfig {
            mf_count,
            shape,
            ..Default::default()
        }
    }

    pub fn with_source(mut self, source: SampleSource) -> Self {
        self.source = source;
        self
    }

    /// Short label such as `GMF-7`.
    pub fn label(&self) -> String {
        format!("{}-{}", self.shape.tag(), self.mf_count)
    }

    fn validate(&self) -> Result<()> {
        if self.mf_count < 2 {
            return Err(Error::InvalidPartition(format!(
                "need at least 2 size terms, got {}",
                self.mf_count
            )));
        }
        if self.size_universe.lo() <= 0.0 {
            return Err(Error::Config("size universe must be positive".into()));
        }
        if !(self.min_sigma > 0.0 && self.gap_fraction >= 0.0) {
            return Err(Error::Config(
                "consequent width parameters must be positive".into(),
            ));
        }
        if let SampleSource::Artificial { count: 0, .. } = self.source {
            return Err(Error::Config(
                "artificial sample count must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A generated project: size, mode and its exact nominal effort.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArtificialSample {
    pub size: f64,
    pub mode: Mode,
    pub effort: f64,
}

/// Uniform random sizes in `[lo, hi]` and uniform modes, with effort from
/// the nominal COCOMO equation. The same seed gives the same sequence.
pub fn generate_artificial_dataset(
    count: usize,
    range: (f64, f64),
    seed: u64,
) -> Result<Vec<ArtificialSample>> {
    if count == 0 {
        return Err(Error::Config(
            "artificial sample count must be at least 1".into(),
        ));
    }
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi && lo > 0.0) {
        return Err(Error::Config(format!(
            "empty or non-positive size range [{lo}, {hi}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let size = rng.random_range(lo..=hi);
            let mode = Mode::ALL[rng.random_range(0..Mode::ALL.len())];
            Ok(ArtificialSample {
                size,
                mode,
                effort: nominal_effort(mode, size)?,
            })
        })
        .collect()
}

pub fn mode_variable() -> Result<LinguisticVariable> {
    let universe = Universe::new(MODE_UNIVERSE.0, MODE_UNIVERSE.1)?;
    let centers: Vec<f64> = Mode::ALL.iter().map(|m| m.b()).collect();
    let terms = Mode::ALL
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let gap = centers
                .iter()
                .enumerate()
                .filter(|&(k, _)| k + 1 == j || j + 1 == k)
                .map(|(_, c)| (c - centers[j]).abs())
                .fold(f64::INFINITY, f64::min);
            Ok(Term::new(
                m.token(),
                MembershipFunction::gaussian(centers[j], gap / FWHM_PER_SIGMA)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    LinguisticVariable::new("mode", universe, terms)
}

fn consequent_name(mode_idx: usize, size_idx: usize) -> String {
    format!("e{}_{}", mode_idx + 1, size_idx + 1)
}

/// Nominal-effort FIS plus what is needed to turn its output into PM.
#[derive(Debug, Clone)]
pub struct NominalEffortFis {
    fis: FuzzyInferenceSystem,
    scale: OutputScale,
    provenance: Provenance,
}

impl NominalEffortFis {
    pub fn from_parts(
        fis: FuzzyInferenceSystem,
        scale: OutputScale,
        provenance: Provenance,
    ) -> Result<Self> {
        for name in ["mode", "size"] {
            if fis.input_index(name).is_none() {
                return Err(Error::Config(format!(
                    "nominal FIS `{}` lacks input `{name}`",
                    fis.name()
                )));
            }
        }
        if fis.inputs().len() != 2 {
            return Err(Error::Config(
                "nominal FIS must have exactly mode and size inputs".into(),
            ));
        }
        Ok(NominalEffortFis {
            fis,
            scale,
            provenance,
        })
    }

    pub fn fis(&self) -> &FuzzyInferenceSystem {
        &self.fis
    }

    pub fn scale(&self) -> OutputScale {
        self.scale
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_resolution(&self, resolution: usize) -> Result<Self> {
        Ok(NominalEffortFis {
            fis: self.fis.with_resolution(resolution)?,
            scale: self.scale,
            provenance: self.provenance.clone(),
        })
    }

    fn positional(&self, mode_value: f64, size: f64) -> [f64; 2] {
        if self.fis.input_index("mode") == Some(0) {
            [mode_value, size]
        } else {
            [size, mode_value]
        }
    }

    /// Fuzzy nominal effort in person-months for a crisp mode-axis value
    /// (the B exponent, possibly between modes) and a size in KDSI.
    pub fn estimate(&self, mode_value: f64, size: f64) -> Result<f64> {
        let y = self.fis.infer(&self.positional(mode_value, size))?;
        Ok(self.scale.to_pm(y))
    }

    pub fn estimate_mode(&self, mode: Mode, size: f64) -> Result<f64> {
        self.estimate(mode.b(), size)
    }

    pub fn fire_strengths(&self, mode_value: f64, size: f64) -> Result<Vec<f64>> {
        self.fis.fire_strengths(&self.positional(mode_value, size))
    }

    pub fn size_universe(&self) -> Universe {
        let i = self.fis.input_index("size").expect("checked in from_parts");
        self.fis.inputs()[i].universe()
    }

    pub fn rule_count(&self) -> usize {
        self.fis.rules().len()
    }
}

/// Builds the (mode, size) → effort rule base: one rule per cell, 3·n rules.
pub fn synthesize_nominal_fis(config: &NominalFisConfig) -> Result<NominalEffortFis> {
    config.validate()?;
    let n = config.mf_count;
    let size = make_partition_with_crossing(
        "size",
        config.size_universe,
        n,
        config.shape,
        &ordinal_names("s", n),
        config.size_crossing,
    )?;
    let mode = mode_variable()?;

    // ln-effort consequent centre per (mode, size term)
    let centers: Vec<Vec<f64>> = match config.source {
        SampleSource::AnalyticGrid => Mode::ALL
            .iter()
            .map(|&m| {
                size.terms()
                    .iter()
                    .map(|t| nominal_effort(m, t.mf.peak()).map(f64::ln))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?,
        SampleSource::Artificial { count, seed } => {
            let samples = generate_artificial_dataset(
                count,
                (config.size_universe.lo(), config.size_universe.hi()),
                seed,
            )?;
            wang_mendel_centers(&mode, &size, &samples)?
        }
    };

    let mut sorted: Vec<f64> = centers.iter().flatten().copied().collect();
    sorted.sort_by(f64::total_cmp);
    let sigma_for = |c: f64| {
        let k = sorted.partition_point(|&v| v < c);
        let mut gap = f64::INFINITY;
        if k > 0 {
            gap = gap.min(c - sorted[k - 1]);
        }
        if let Some(&next) = sorted[k..].iter().find(|&&v| v > c) {
            gap = gap.min(next - c);
        }
        let scaled = if gap.is_finite() {
            config.gap_fraction * gap
        } else {
            0.0
        };
        config.min_sigma.max(scaled)
    };

    let effort_universe = match config.effort_universe {
        Some(u) => u,
        None => Universe::new(sorted[0] - 2f64.ln(), sorted[sorted.len() - 1] + 2f64.ln())?,
    };
    let mut consequents = Vec::with_capacity(3 * n);
    let mut rules = Vec::with_capacity(3 * n);
    for (j, m) in Mode::ALL.iter().enumerate() {
        for (i, s) in size.terms().iter().enumerate() {
            let c = centers[j][i];
            let sigma = sigma_for(c);
            let mf = match config.shape {
                PartitionShape::Gaussian => MembershipFunction::gaussian(c, sigma)?,
                PartitionShape::Triangular => {
                    let half = FWHM_PER_SIGMA * sigma;
                    MembershipFunction::triangular(c - half, c, c + half)?
                }
            };
            let name = consequent_name(j, i);
            consequents.push(Term::new(name.clone(), mf));
            rules.push(Rule::new(
                [("mode", m.token()), ("size", s.name.as_str())],
                name,
            ));
        }
    }
    let effort = LinguisticVariable::output("effort", effort_universe, consequents)?;
    let fis = FuzzyInferenceSystem::new(
        format!("nominal {}", config.label()),
        vec![mode, size],
        effort,
        rules,
        config.operators,
        config.resolution,
    )?;

    let mut provenance = Provenance::new();
    provenance.insert("kind".into(), "nominal".into());
    provenance.insert("mf_count".into(), n.to_string());
    provenance.insert("shape".into(), config.shape.name().into());
    provenance.insert("source".into(), config.source.describe());
    provenance.insert(
        "seed".into(),
        match config.source {
            SampleSource::Artificial { seed, .. } => seed.to_string(),
            SampleSource::AnalyticGrid => "none".into(),
        },
    );
    provenance.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    provenance.insert("size_crossing".into(), config.size_crossing.to_string());
    provenance.insert("size_universe".into(), config.size_universe.to_string());
    provenance.insert("output".into(), "ln person-months".into());
    NominalEffortFis::from_parts(fis, OutputScale::Ln, provenance)
}

// Wang–Mendel reduction: each sample votes for its strongest cell, and the
// strongest vote per cell sets that cell's consequent.
fn wang_mendel_centers(
    mode: &LinguisticVariable,
    size: &LinguisticVariable,
    samples: &[ArtificialSample],
) -> Result<Vec<Vec<f64>>> {
    let argmax = |d: &[f64]| {
        d.iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            })
    };
    let n = size.terms().len();
    let mut best: Vec<Vec<Option<(f64, f64)>>> = vec![vec![None; n]; Mode::ALL.len()];
    for s in samples {
        let (j, dm) = argmax(&mode.degrees(s.mode.b())?);
        let (i, ds) = argmax(&size.degrees(s.size)?);
        let degree = dm.min(ds);
        let cell = &mut best[j][i];
        if cell.map_or(true, |(d, _)| degree > d) {
            *cell = Some((degree, s.effort.ln()));
        }
    }
    best.into_iter()
        .enumerate()
        .map(|(j, row)| {
            row.into_iter()
                .enumerate()
                .map(|(i, cell)| {
                    cell.map(|(_, c)| c).ok_or_else(|| {
                        Error::Config(format!(
                            "no artificial sample fell in cell ({}, s{}); increase the sample count",
                            Mode::ALL[j],
                            i + 1
                        ))
                    })
                })
                .collect()
        })
        .collect()
}

/// Input axis of a driver FIS.
#[derive(Debug, Clone, PartialEq)]
pub enum DriverAxis {
    /// Physical scale such as percent utilisation.
    Measured { unit: String },
    /// Rating index, VeryLow = 0.
    RatingIndex,
}

impl DriverAxis {
    pub fn token(&self) -> &str {
        match self {
            DriverAxis::Measured { unit } => unit,
            DriverAxis::RatingIndex => "index",
        }
    }
}

pub fn antecedent_name(level: Level) -> &'static str {
    match level {
        Level::VeryLow => "vlow",
        Level::Low => "low",
        Level::Nominal => "nom",
        Level::High => "high",
        Level::VeryHigh => "vhigh",
        Level::ExtraHigh => "xhigh",
    }
}

pub fn level_for_antecedent(name: &str) -> Option<Level> {
    Level::ALL.into_iter().find(|&l| antecedent_name(l) == name)
}

const INC_NAMES: [&str; 4] = ["inc", "incsig", "incdra", "incext"];
const DEC_NAMES: [&str; 4] = ["dec", "decsig", "decdra", "decext"];

fn ranked_name(names: &[&str; 4], prefix: &str, rank: usize) -> String {
    names
        .get(rank)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("{prefix}{}", rank + 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriverFisSpec {
    pub driver: DriverId,
    pub axis: DriverAxis,
    pub input_universe: Universe,
    /// One antecedent term per rated level, lowest first.
    pub antecedents: Vec<(Level, Term)>,
    /// Crisp input representing each level.
    pub anchors: Vec<(Level, f64)>,
    pub output_universe: Universe,
    /// One consequent per level, centred on the level's multiplier.
    pub consequents: Vec<(Level, Term)>,
    pub resolution: usize,
}

impl DriverFisSpec {
    pub fn from_table(driver: &CostDriver) -> Result<Self> {
        let levels: Vec<Level> = driver.levels().collect();
        let k = levels.len();
        if k < 2 {
            return Err(Error::DriverTable(format!(
                "{} needs at least two levels",
                driver.id()
            )));
        }
        let (axis, universe, anchors): (DriverAxis, Universe, Vec<f64>) = match driver.scale() {
            Some(scale) => (
                DriverAxis::Measured {
                    unit: scale.unit.clone(),
                },
                Universe::new(scale.lo, scale.hi)?,
                scale.anchors.iter().map(|&(_, v)| v).collect(),
            ),
            None => {
                let idx: Vec<f64> = levels.iter().map(|l| l.index() as f64).collect();
                (
                    DriverAxis::RatingIndex,
                    Universe::new(idx[0], idx[k - 1])?,
                    idx,
                )
            }
        };

        let mut antecedents = Vec::with_capacity(k);
        for (q, &level) in levels.iter().enumerate() {
            let a = anchors[q];
            let mf = match (&axis, q) {
                (DriverAxis::Measured { .. }, 0) => {
                    MembershipFunction::trapezoidal(universe.lo(), universe.lo(), a, anchors[1])?
                }
                (DriverAxis::Measured { .. }, q) if q + 1 == k => MembershipFunction::trapezoidal(
                    anchors[q - 1],
                    a,
                    universe.hi(),
                    universe.hi(),
                )?,
                (DriverAxis::Measured { .. }, q) => {
                    MembershipFunction::triangular(anchors[q - 1], a, anchors[q + 1])?
                }
                (DriverAxis::RatingIndex, _) => {
                    MembershipFunction::triangular(a - 1.0, a, a + 1.0)?
                }
            };
            antecedents.push((level, Term::new(antecedent_name(level), mf)));
        }

        let ems: Vec<(Level, f64)> = driver.multipliers().to_vec();
        let mut sorted: Vec<f64> = ems.iter().map(|&(_, m)| m).collect();
        sorted.sort_by(f64::total_cmp);
        let mut above: Vec<f64> = sorted.iter().copied().filter(|&m| m > 1.0).collect();
        let mut below: Vec<f64> = sorted.iter().copied().filter(|&m| m < 1.0).collect();
        above.sort_by(f64::total_cmp);
        below.sort_by(|a, b| b.total_cmp(a));

        let mut consequents = Vec::with_capacity(k);
        let (mut out_lo, mut out_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(level, m) in &ems {
            let pos = sorted.iter().position(|&v| v == m).expect("present");
            let left = pos.checked_sub(1).map(|p| m - sorted[p]);
            let right = sorted.get(pos + 1).map(|&v| v - m);
            let half = match (left, right) {
                (Some(l), Some(r)) => l.min(r),
                (Some(g), None) | (None, Some(g)) => g,
                (None, None) => unreachable!("at least two levels"),
            };
            if half <= 0.0 {
                return Err(Error::DriverTable(format!(
                    "{}: repeated multiplier {m}",
                    driver.id()
                )));
            }
            out_lo = out_lo.min(m - half);
            out_hi = out_hi.max(m + half);
            let name = if m == 1.0 {
                "unchanged".to_string()
            } else if m > 1.0 {
                let rank = above.iter().position(|&v| v == m).expect("present");
                ranked_name(&INC_NAMES, "inc", rank)
            } else {
                let rank = below.iter().position(|&v| v == m).expect("present");
                ranked_name(&DEC_NAMES, "dec", rank)
            };
            consequents.push((
                level,
                Term::new(name, MembershipFunction::triangular(m - half, m, m + half)?),
            ));
        }

        Ok(DriverFisSpec {
            driver: driver.id(),
            axis,
            input_universe: universe,
            anchors: levels.iter().copied().zip(anchors).collect(),
            antecedents,
            output_universe: Universe::new(out_lo, out_hi)?,
            consequents,
            resolution: DEFAULT_RESOLUTION,
        })
    }
}

/// Single-input FIS mapping a driver rating (or measurement) to its effort
/// multiplier.
#[derive(Debug, Clone)]
pub struct DriverFis {
    driver: DriverId,
    axis: DriverAxis,
    fis: FuzzyInferenceSystem,
    anchors: Vec<(Level, f64)>,
    range: (f64, f64),
}

impl DriverFis {
    /// Wraps an already-built FIS. The multiplier range is taken from the
    /// consequent peaks.
    pub fn from_parts(
        driver: DriverId,
        axis: DriverAxis,
        fis: FuzzyInferenceSystem,
        anchors: Vec<(Level, f64)>,
    ) -> Result<Self> {
        if fis.inputs().len() != 1 {
            return Err(Error::Config(format!(
                "driver FIS {driver} must have one input"
            )));
        }
        if anchors.is_empty() {
            return Err(Error::Config(format!(
                "driver FIS {driver} has no level anchors"
            )));
        }
        let range = fis
            .output()
            .terms()
            .iter()
            .map(|t| t.mf.peak())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p), hi.max(p))
            });
        Ok(DriverFis {
            driver,
            axis,
            fis,
            anchors,
            range,
        })
    }

    pub fn driver(&self) -> DriverId {
        self.driver
    }

    pub fn axis(&self) -> &DriverAxis {
        &self.axis
    }

    pub fn fis(&self) -> &FuzzyInferenceSystem {
        &self.fis
    }

    pub fn anchors(&self) -> &[(Level, f64)] {
        &self.anchors
    }

    /// Smallest and largest multiplier the system can return.
    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn anchor(&self, level: Level) -> Result<f64> {
        self.anchors
            .iter()
            .find(|&&(l, _)| l == level)
            .map(|&(_, v)| v)
            .ok_or_else(|| Error::InvalidRating {
                driver: self.driver.to_string(),
                level: level.long_name().into(),
            })
    }

    /// Multiplier for a crisp value on the driver's input axis.
    pub fn multiplier(&self, x: f64) -> Result<f64> {
        let y = self.fis.infer(&[x])?;
        Ok(y.clamp(self.range.0, self.range.1))
    }

    pub fn multiplier_for(&self, level: Level) -> Result<f64> {
        self.multiplier(self.anchor(level)?)
    }

    pub fn with_resolution(&self, resolution: usize) -> Result<Self> {
        Ok(DriverFis {
            fis: self.fis.with_resolution(resolution)?,
            ..self.clone()
        })
    }
}

pub fn build_driver_fis(spec: &DriverFisSpec) -> Result<DriverFis> {
    if spec.antecedents.len() != spec.consequents.len()
        || spec
            .antecedents
            .iter()
            .zip(&spec.consequents)
            .any(|(a, c)| a.0 != c.0)
    {
        return Err(Error::DriverTable(format!(
            "{}: antecedent and consequent levels differ",
            spec.driver
        )));
    }
    let var = spec.driver.token();
    let input = LinguisticVariable::new(
        var,
        spec.input_universe,
        spec.antecedents.iter().map(|(_, t)| t.clone()).collect(),
    )?;
    let output = LinguisticVariable::output(
        "em",
        spec.output_universe,
        spec.consequents.iter().map(|(_, t)| t.clone()).collect(),
    )?;
    let rules = spec
        .antecedents
        .iter()
        .zip(&spec.consequents)
        .map(|((_, a), (_, c))| Rule::new([(var, a.name.as_str())], c.name.clone()))
        .collect();
    let fis = FuzzyInferenceSystem::new(
        spec.driver.to_string(),
        vec![input],
        output,
        rules,
        Operators::default(),
        spec.resolution,
    )?;
    DriverFis::from_parts(spec.driver, spec.axis.clone(), fis, spec.anchors.clone())
}

/// Driver FISs for all fifteen drivers, in canonical order.
pub fn build_driver_fises(table: &CostDriverTable) -> Result<Vec<DriverFis>> {
    DriverId::ALL
        .iter()
        .map(|&id| build_driver_fis(&DriverFisSpec::from_table(table.get(id))?))
        .collect()
}

/// Raw inputs for a fuzzy total-effort estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateInputs {
    /// Position on the mode axis (the B exponent).
    pub mode_value: f64,
    pub size: f64,
    /// One crisp value per driver on that driver's input axis.
    pub drivers: [f64; 15],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyEstimate {
    pub nominal: f64,
    pub multipliers: [f64; 15],
    pub eaf: f64,
    pub total: f64,
}

/// Nominal FIS combined with the fifteen driver FISs.
#[derive(Debug, Clone)]
pub struct FuzzyEstimator {
    nominal: NominalEffortFis,
    drivers: Vec<DriverFis>,
}

impl FuzzyEstimator {
    pub fn new(nominal: NominalEffortFis, drivers: Vec<DriverFis>) -> Result<Self> {
        let mut ordered: Vec<Option<DriverFis>> = vec![None; DriverId::ALL.len()];
        for d in drivers {
            let slot = &mut ordered[d.driver().index()];
            if slot.is_some() {
                return Err(Error::Config(format!("two FISs for driver {}", d.driver())));
            }
            *slot = Some(d);
        }
        let drivers = ordered
            .into_iter()
            .zip(DriverId::ALL)
            .map(|(d, id)| d.ok_or_else(|| Error::Config(format!("no FIS for driver {id}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(FuzzyEstimator { nominal, drivers })
    }

    /// Nominal FIS from `config` plus driver FISs from the shipped tables.
    pub fn build(config: &NominalFisConfig) -> Result<Self> {
        let nominal = synthesize_nominal_fis(config)?;
        let drivers = build_driver_fises(CostDriverTable::standard())?
            .into_iter()
            .map(|d| {
                if d.fis().resolution() == config.resolution {
                    Ok(d)
                } else {
                    d.with_resolution(config.resolution)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        FuzzyEstimator::new(nominal, drivers)
    }

    pub fn nominal(&self) -> &NominalEffortFis {
        &self.nominal
    }

    pub fn drivers(&self) -> &[DriverFis] {
        &self.drivers
    }

    pub fn driver(&self, id: DriverId) -> &DriverFis {
        &self.drivers[id.index()]
    }

    /// Driver inputs placing every driver at its Nominal anchor.
    pub fn nominal_inputs(&self, mode_value: f64, size: f64) -> Result<EstimateInputs> {
        let mut drivers = [0.0; 15];
        for d in &self.drivers {
            drivers[d.driver().index()] = d.anchor(Level::Nominal)?;
        }
        Ok(EstimateInputs {
            mode_value,
            size,
            drivers,
        })
    }

    pub fn project_inputs(&self, project: &ProjectRecord) -> Result<EstimateInputs> {
        let mut drivers = [0.0; 15];
        for d in &self.drivers {
            drivers[d.driver().index()] = d.anchor(project.ratings.get(d.driver()))?;
        }
        Ok(EstimateInputs {
            mode_value: project.mode.b(),
            size: project.kdsi,
            drivers,
        })
    }

    pub fn estimate(&self, inputs: &EstimateInputs) -> Result<FuzzyEstimate> {
        let nominal = self.nominal.estimate(inputs.mode_value, inputs.size)?;
        let mut multipliers = [1.0; 15];
        for d in &self.drivers {
            let i = d.driver().index();
            multipliers[i] = d.multiplier(inputs.drivers[i])?;
        }
        let eaf: f64 = multipliers.iter().product();
        Ok(FuzzyEstimate {
            nominal,
            multipliers,
            eaf,
            total: nominal * eaf,
        })
    }

    pub fn estimate_project(&self, project: &ProjectRecord) -> Result<FuzzyEstimate> {
        self.estimate(&self.project_inputs(project)?)
    }
}

/// Fuzzy nominal effort times the fuzzy EAF for one project.
pub fn fuzzy_total_effort(
    nominal: &NominalEffortFis,
    drivers: &[DriverFis],
    project: &ProjectRecord,
) -> Result<f64> {
    let estimator = FuzzyEstimator::new(nominal.clone(), drivers.to_vec())?;
    Ok(estimator.estimate_project(project)?.total)
}
