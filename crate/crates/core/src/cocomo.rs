//! Crisp intermediate COCOMO-81: modes, cost-driver tables, and effort.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{Error, Result};

const COST_DRIVERS_CSV: &str = include_str!("../data/cost_drivers.csv");
const DRIVER_SCALES_CSV: &str = include_str!("../data/driver_scales.csv");

/// Published STOR definition: (level, percent anchor, multiplier).
const STOR_REFERENCE: [(Level, f64, f64); 4] = [
    (Level::Nominal, 50.0, 1.00),
    (Level::High, 70.0, 1.06),
    (Level::VeryHigh, 85.0, 1.21),
    (Level::ExtraHigh, 95.0, 1.56),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Organic,
    Semidetached,
    Embedded,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Organic, Mode::Semidetached, Mode::Embedded];

    /// Productivity coefficient A.
    pub fn a(self) -> f64 {
        match self {
            Mode::Organic => 3.2,
            Mode::Semidetached => 3.0,
            Mode::Embedded => 2.8,
        }
    }

    /// Scale exponent B. Also the crisp position of the mode on the fuzzy
    /// mode axis.
    pub fn b(self) -> f64 {
        match self {
            Mode::Organic => 1.05,
            Mode::Semidetached => 1.12,
            Mode::Embedded => 1.20,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Mode::Organic => "organic",
            Mode::Semidetached => "semidetached",
            Mode::Embedded => "embedded",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "organic" | "org" => Ok(Mode::Organic),
            "semidetached" | "semi-detached" | "semi" => Ok(Mode::Semidetached),
            "embedded" | "emb" => Ok(Mode::Embedded),
            other => Err(Error::Domain(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Cost-driver rating level, ordered from VeryLow to ExtraHigh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    VeryLow,
    Low,
    Nominal,
    High,
    VeryHigh,
    ExtraHigh,
}

impl Level {
    pub const ALL: [Level; 6] = [
        Level::VeryLow,
        Level::Low,
        Level::Nominal,
        Level::High,
        Level::VeryHigh,
        Level::ExtraHigh,
    ];

    /// Position on the rating-index axis, VeryLow = 0.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn token(self) -> &'static str {
        match self {
            Level::VeryLow => "vl",
            Level::Low => "l",
            Level::Nominal => "n",
            Level::High => "h",
            Level::VeryHigh => "vh",
            Level::ExtraHigh => "xh",
        }
    }

    pub fn long_name(self) -> &'static str {
        match self {
            Level::VeryLow => "very low",
            Level::Low => "low",
            Level::Nominal => "nominal",
            Level::High => "high",
            Level::VeryHigh => "very high",
            Level::ExtraHigh => "extra high",
        }
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| !matches!(c, ' ' | '_' | '-'))
            .collect();
        match key.as_str() {
            "vl" | "verylow" => Ok(Level::VeryLow),
            "l" | "low" => Ok(Level::Low),
            "n" | "nom" | "nominal" => Ok(Level::Nominal),
            "h" | "high" => Ok(Level::High),
            "vh" | "veryhigh" => Ok(Level::VeryHigh),
            "xh" | "eh" | "extrahigh" => Ok(Level::ExtraHigh),
            _ => Err(Error::Domain(format!(
                "unknown rating level `{}`",
                s.trim()
            ))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DriverId {
    Rely,
    Data,
    Cplx,
    Time,
    Stor,
    Virt,
    Turn,
    Acap,
    Aexp,
    Pcap,
    Vexp,
    Lexp,
    Modp,
    Tool,
    Sced,
}

impl DriverId {
    pub const ALL: [DriverId; 15] = [
        DriverId::Rely,
        DriverId::Data,
        DriverId::Cplx,
        DriverId::Time,
        DriverId::Stor,
        DriverId::Virt,
        DriverId::Turn,
        DriverId::Acap,
        DriverId::Aexp,
        DriverId::Pcap,
        DriverId::Vexp,
        DriverId::Lexp,
        DriverId::Modp,
        DriverId::Tool,
        DriverId::Sced,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn token(self) -> &'static str {
        match self {
            DriverId::Rely => "rely",
            DriverId::Data => "data",
            DriverId::Cplx => "cplx",
            DriverId::Time => "time",
            DriverId::Stor => "stor",
            DriverId::Virt => "virt",
            DriverId::Turn => "turn",
            DriverId::Acap => "acap",
            DriverId::Aexp => "aexp",
            DriverId::Pcap => "pcap",
            DriverId::Vexp => "vexp",
            DriverId::Lexp => "lexp",
            DriverId::Modp => "modp",
            DriverId::Tool => "tool",
            DriverId::Sced => "sced",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            DriverId::Rely => "required software reliability",
            DriverId::Data => "database size",
            DriverId::Cplx => "product complexity",
            DriverId::Time => "execution time constraint",
            DriverId::Stor => "main storage constraint",
            DriverId::Virt => "virtual machine volatility",
            DriverId::Turn => "computer turnaround time",
            DriverId::Acap => "analyst capability",
            DriverId::Aexp => "applications experience",
            DriverId::Pcap => "programmer capability",
            DriverId::Vexp => "virtual machine experience",
            DriverId::Lexp => "language experience",
            DriverId::Modp => "modern programming practices",
            DriverId::Tool => "use of software tools",
            DriverId::Sced => "required development schedule",
        }
    }
}

impl FromStr for DriverId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        DriverId::ALL
            .into_iter()
            .find(|d| d.token() == key)
            .ok_or_else(|| Error::Domain(format!("unknown cost driver `{}`", s.trim())))
    }
}

impl fmt::Display for DriverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token().to_ascii_uppercase())
    }
}

/// How a driver's multiplier moves as its rating rises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
    /// Minimum at Nominal, rising on both sides (schedule compression and
    /// stretch-out both cost effort).
    VShaped,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "increasing" => Ok(Direction::Increasing),
            "decreasing" => Ok(Direction::Decreasing),
            "v-shaped" => Ok(Direction::VShaped),
            other => Err(Error::DriverTable(format!("unknown direction `{other}`"))),
        }
    }
}

/// A physical axis on which a driver is measured, with one anchor value per
/// rating level.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredScale {
    pub unit: String,
    pub lo: f64,
    pub hi: f64,
    pub anchors: Vec<(Level, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostDriver {
    id: DriverId,
    direction: Direction,
    multipliers: Vec<(Level, f64)>,
    scale: Option<MeasuredScale>,
}

impl CostDriver {
    pub fn id(&self) -> DriverId {
        self.id
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Defined levels with their multipliers, lowest rating first.
    pub fn multipliers(&self) -> &[(Level, f64)] {
        &self.multipliers
    }

    pub fn levels(&self) -> impl Iterator<Item = Level> + '_ {
        self.multipliers.iter().map(|&(l, _)| l)
    }

    pub fn scale(&self) -> Option<&MeasuredScale> {
        self.scale.as_ref()
    }

    pub fn multiplier(&self, level: Level) -> Result<f64> {
        self.multipliers
            .iter()
            .find(|&&(l, _)| l == level)
            .map(|&(_, m)| m)
            .ok_or_else(|| Error::InvalidRating {
                driver: self.id.to_string(),
                level: level.long_name().to_string(),
            })
    }

    /// Smallest and largest multiplier in the table.
    pub fn range(&self) -> (f64, f64) {
        self.multipliers
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, m)| {
                (lo.min(m), hi.max(m))
            })
    }

    /// Crisp value representing `level` on the driver's fuzzy input axis:
    /// the measured anchor when the driver has a scale, else the rating index.
    pub fn crisp_input(&self, level: Level) -> Result<f64> {
        self.multiplier(level)?;
        Ok(match &self.scale {
            Some(scale) => scale
                .anchors
                .iter()
                .find(|&&(l, _)| l == level)
                .map(|&(_, v)| v)
                .expect("anchors validated against multipliers"),
            None => level.index() as f64,
        })
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::DriverTable(format!("{}: {msg}", self.id)));
        let levels: Vec<usize> = self.levels().map(Level::index).collect();
        if levels.windows(2).any(|w| w[1] != w[0] + 1) {
            return bad("rating levels are not contiguous".into());
        }
        let Some(nom) = self
            .multipliers
            .iter()
            .position(|&(l, _)| l == Level::Nominal)
        else {
            return bad("no nominal rating".into());
        };
        if self.multipliers[nom].1 != 1.0 {
            return bad(format!(
                "nominal multiplier {} is not 1.0",
                self.multipliers[nom].1
            ));
        }
        if self
            .multipliers
            .iter()
            .any(|&(_, m)| !(m.is_finite() && m > 0.0))
        {
            return bad("multipliers must be positive".into());
        }
        let ms: Vec<f64> = self.multipliers.iter().map(|&(_, m)| m).collect();
        let ok = match self.direction {
            Direction::Increasing => ms.windows(2).all(|w| w[0] < w[1]),
            Direction::Decreasing => ms.windows(2).all(|w| w[0] > w[1]),
            Direction::VShaped => {
                let dev: Vec<f64> = ms.iter().map(|m| (m - 1.0).abs()).collect();
                dev[..=nom].windows(2).all(|w| w[0] > w[1])
                    && dev[nom..].windows(2).all(|w| w[0] < w[1])
            }
        };
        if !ok {
            return bad(format!("multipliers {ms:?} are not {:?}", self.direction));
        }
        if let Some(scale) = &self.scale {
            if scale.lo.partial_cmp(&scale.hi) != Some(std::cmp::Ordering::Less) {
                return bad("empty measured scale".into());
            }
            let same_levels = scale.anchors.len() == self.multipliers.len()
                && scale
                    .anchors
                    .iter()
                    .zip(&self.multipliers)
                    .all(|(a, m)| a.0 == m.0);
            if !same_levels {
                return bad("scale anchors do not match the rated levels".into());
            }
            let anchors: Vec<f64> = scale.anchors.iter().map(|&(_, v)| v).collect();
            if anchors.windows(2).any(|w| w[0] >= w[1])
                || anchors.iter().any(|&v| v < scale.lo || v > scale.hi)
            {
                return bad("scale anchors must increase inside the scale".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
struct MultiplierRow {
    driver: String,
    #[allow(dead_code)]
    group: String,
    direction: String,
    vl: Option<f64>,
    l: Option<f64>,
    n: Option<f64>,
    h: Option<f64>,
    vh: Option<f64>,
    xh: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct ScaleRow {
    driver: String,
    unit: String,
    lo: f64,
    hi: f64,
    vl: Option<f64>,
    l: Option<f64>,
    n: Option<f64>,
    h: Option<f64>,
    vh: Option<f64>,
    xh: Option<f64>,
}

fn by_level(cells: [Option<f64>; 6]) -> Vec<(Level, f64)> {
    Level::ALL
        .into_iter()
        .zip(cells)
        .filter_map(|(l, v)| v.map(|v| (l, v)))
        .collect()
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

/// Effort-multiplier tables for all fifteen drivers.
#[derive(Debug, Clone, PartialEq)]
pub struct CostDriverTable {
    drivers: Vec<CostDriver>,
}

impl CostDriverTable {
    /// The shipped Boehm (1981) tables. Parsed and validated once.
    pub fn standard() -> &'static CostDriverTable {
        static TABLE: OnceLock<CostDriverTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            CostDriverTable::from_csv(COST_DRIVERS_CSV, DRIVER_SCALES_CSV)
                .expect("shipped cost-driver table is valid")
        })
    }

    /// Parses a multiplier table and a measured-scale table. Every driver
    /// must appear exactly once; STOR must match its published definition.
    pub fn from_csv(multipliers: &str, scales: &str) -> Result<Self> {
        let table_err = |e: csv::Error| Error::DriverTable(e.to_string());
        let mut found: Vec<Option<CostDriver>> = vec![None; DriverId::ALL.len()];
        for row in csv_reader(multipliers).deserialize::<MultiplierRow>() {
            let row = row.map_err(table_err)?;
            let id: DriverId = row
                .driver
                .parse()
                .map_err(|_| Error::DriverTable(format!("unknown driver `{}`", row.driver)))?;
            if found[id.index()].is_some() {
                return Err(Error::DriverTable(format!("{id} listed twice")));
            }
            found[id.index()] = Some(CostDriver {
                id,
                direction: row.direction.parse()?,
                multipliers: by_level([row.vl, row.l, row.n, row.h, row.vh, row.xh]),
                scale: None,
            });
        }
        for row in csv_reader(scales).deserialize::<ScaleRow>() {
            let row = row.map_err(table_err)?;
            let id: DriverId = row
                .driver
                .parse()
                .map_err(|_| Error::DriverTable(format!("unknown driver `{}`", row.driver)))?;
            let driver = found[id.index()]
                .as_mut()
                .ok_or_else(|| Error::DriverTable(format!("scale for unlisted driver {id}")))?;
            if driver.scale.is_some() {
                return Err(Error::DriverTable(format!("{id} has two scales")));
            }
            driver.scale = Some(MeasuredScale {
                unit: row.unit,
                lo: row.lo,
                hi: row.hi,
                anchors: by_level([row.vl, row.l, row.n, row.h, row.vh, row.xh]),
            });
        }
        let drivers = found
            .into_iter()
            .zip(DriverId::ALL)
            .map(|(d, id)| d.ok_or_else(|| Error::DriverTable(format!("{id} missing"))))
            .collect::<Result<Vec<_>>>()?;
        for d in &drivers {
            d.validate()?;
        }
        let table = CostDriverTable { drivers };
        table.check_stor()?;
        Ok(table)
    }

    fn check_stor(&self) -> Result<()> {
        let stor = self.get(DriverId::Stor);
        let scale = stor
            .scale()
            .ok_or_else(|| Error::DriverTable("STOR has no percent scale".into()))?;
        let matches = stor.multipliers.len() == STOR_REFERENCE.len()
            && STOR_REFERENCE.iter().all(|&(level, pct, em)| {
                stor.multiplier(level).ok() == Some(em)
                    && scale.anchors.iter().any(|&(l, v)| l == level && v == pct)
            });
        if matches {
            Ok(())
        } else {
            Err(Error::DriverTable(
                "STOR multipliers or anchors differ from the published definition".into(),
            ))
        }
    }

    pub fn get(&self, id: DriverId) -> &CostDriver {
        &self.drivers[id.index()]
    }

    pub fn drivers(&self) -> &[CostDriver] {
        &self.drivers
    }

    /// Effort adjustment factor: product of the fifteen multipliers.
    pub fn eaf(&self, ratings: &DriverRatings) -> Result<f64> {
        self.drivers
            .iter()
            .map(|d| d.multiplier(ratings.get(d.id)))
            .product()
    }
}

/// One rating level per cost driver. Defaults to all Nominal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DriverRatings([Level; 15]);

impl Default for DriverRatings {
    fn default() -> Self {
        DriverRatings([Level::Nominal; 15])
    }
}

impl DriverRatings {
    pub fn nominal() -> Self {
        Self::default()
    }

    pub fn get(&self, id: DriverId) -> Level {
        self.0[id.index()]
    }

    pub fn set(&mut self, id: DriverId, level: Level) {
        self.0[id.index()] = level;
    }

    pub fn with(mut self, id: DriverId, level: Level) -> Self {
        self.set(id, level);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (DriverId, Level)> + '_ {
        DriverId::ALL.into_iter().zip(self.0.iter().copied())
    }
}

fn check_size(size: f64) -> Result<()> {
    if size.is_finite() && size > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "size must be positive, got {size} KDSI"
        )))
    }
}

/// `A · size^B` person-months, before cost-driver adjustment.
pub fn nominal_effort(mode: Mode, size: f64) -> Result<f64> {
    check_size(size)?;
    Ok(mode.a() * size.powf(mode.b()))
}

/// EAF under the shipped multiplier tables.
pub fn eaf(ratings: &DriverRatings) -> Result<f64> {
    CostDriverTable::standard().eaf(ratings)
}

/// Intermediate COCOMO effort: nominal effort times EAF.
pub fn total_effort(mode: Mode, size: f64, ratings: &DriverRatings) -> Result<f64> {
    Ok(nominal_effort(mode, size)? * eaf(ratings)?)
}

/// One historical project.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectRecord {
    pub id: String,
    /// Size in thousands of delivered source instructions.
    pub kdsi: f64,
    pub mode: Mode,
    pub ratings: DriverRatings,
    /// Actual effort, person-months.
    pub actual_pm: f64,
    /// Drivers whose rating was missing and defaulted to Nominal.
    pub defaulted: Vec<DriverId>,
}

impl ProjectRecord {
    pub fn new(
        id: impl Into<String>,
        kdsi: f64,
        mode: Mode,
        ratings: DriverRatings,
        actual_pm: f64,
    ) -> Result<Self> {
        let id = id.into();
        check_size(kdsi)?;
        if !(actual_pm.is_finite() && actual_pm > 0.0) {
            return Err(Error::Domain(format!(
                "project {id}: actual effort must be positive, got {actual_pm}"
            )));
        }
        eaf(&ratings)?;
        Ok(ProjectRecord {
            id,
            kdsi,
            mode,
            ratings,
            actual_pm,
            defaulted: Vec::new(),
        })
    }

    pub fn eaf(&self) -> f64 {
        eaf(&self.ratings).expect("ratings validated at construction")
    }

    pub fn crisp_nominal(&self) -> f64 {
        self.mode.a() * self.kdsi.powf(self.mode.b())
    }

    pub fn crisp_total(&self) -> f64 {
        self.crisp_nominal() * self.eaf()
    }

    /// Actual effort with the rated adjustment divided out.
    pub fn actual_nominal(&self) -> f64 {
        self.actual_pm / self.eaf()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn mode_coefficients() {
        let ab: Vec<(f64, f64)> = Mode::ALL.iter().map(|m| (m.a(), m.b())).collect();
        assert_eq!(ab, vec![(3.2, 1.05), (3.0, 1.12), (2.8, 1.2)]);
    }

    #[test]
    fn nominal_effort_examples() {
        assert_eq!(nominal_effort(Mode::Organic, 1.0).unwrap(), 3.2);
        let semi = nominal_effort(Mode::Semidetached, 10.0).unwrap();
        assert!(rel(semi, 39.547_702_156_692_2).abs() < 1e-8, "{semi}");
        let emb = nominal_effort(Mode::Embedded, 100.0).unwrap();
        assert!(rel(emb, 703.328_200_822_682_4).abs() < 1e-8, "{emb}");
        assert!(nominal_effort(Mode::Organic, 0.0).is_err());
        assert!(nominal_effort(Mode::Organic, -3.0).is_err());
        assert!(nominal_effort(Mode::Organic, f64::NAN).is_err());
    }

    #[test]
    fn eaf_examples() {
        assert_eq!(eaf(&DriverRatings::nominal()).unwrap(), 1.0);
        let r = DriverRatings::nominal().with(DriverId::Stor, Level::High);
        assert_eq!(eaf(&r).unwrap(), 1.06);
        let r = DriverRatings::nominal().with(DriverId::Stor, Level::VeryHigh);
        assert_eq!(eaf(&r).unwrap(), 1.21);
        let r = DriverRatings::nominal().with(DriverId::Stor, Level::VeryLow);
        match eaf(&r) {
            Err(Error::InvalidRating { driver, .. }) => assert_eq!(driver, "STOR"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn total_effort_examples() {
        let r = DriverRatings::nominal().with(DriverId::Stor, Level::ExtraHigh);
        let t = total_effort(Mode::Embedded, 100.0, &r).unwrap();
        assert!(rel(t, 703.328_200_822_682_4 * 1.56) < 1e-8);
        assert!((t - 1097.2).abs() < 0.05);
        let n = DriverRatings::nominal();
        assert_eq!(
            total_effort(Mode::Semidetached, 7.0, &n).unwrap(),
            nominal_effort(Mode::Semidetached, 7.0).unwrap()
        );
    }

    #[test]
    fn standard_table_shape() {
        let t = CostDriverTable::standard();
        assert_eq!(t.drivers().len(), 15);
        for d in t.drivers() {
            assert_eq!(d.multiplier(Level::Nominal).unwrap(), 1.0);
        }
        let sced = t.get(DriverId::Sced);
        assert_eq!(sced.direction(), Direction::VShaped);
        assert_eq!(sced.range(), (1.0, 1.23));
        assert_eq!(t.get(DriverId::Cplx).range(), (0.70, 1.65));
        assert_eq!(
            t.get(DriverId::Stor).crisp_input(Level::High).unwrap(),
            70.0
        );
        assert_eq!(t.get(DriverId::Acap).crisp_input(Level::High).unwrap(), 3.0);
        assert!(t.get(DriverId::Data).crisp_input(Level::VeryLow).is_err());
    }

    #[test]
    fn table_rejects_tampered_stor() {
        let tampered = COST_DRIVERS_CSV.replace(
            "stor,platform,increasing,,,1.00,1.06,1.21,1.56",
            "stor,platform,increasing,,,1.00,1.07,1.21,1.56",
        );
        assert!(matches!(
            CostDriverTable::from_csv(&tampered, DRIVER_SCALES_CSV),
            Err(Error::DriverTable(_))
        ));
        let wrong_dir =
            COST_DRIVERS_CSV.replace("acap,personnel,decreasing", "acap,personnel,increasing");
        assert!(CostDriverTable::from_csv(&wrong_dir, DRIVER_SCALES_CSV).is_err());
        let missing: String = COST_DRIVERS_CSV
            .lines()
            .filter(|l| !l.starts_with("tool"))
            .collect::<Vec<_>>()
            .join("\n");
        assert!(CostDriverTable::from_csv(&missing, DRIVER_SCALES_CSV).is_err());
    }

    #[test]
    fn parse_tokens() {
        assert_eq!("Semi-Detached".parse::<Mode>().unwrap(), Mode::Semidetached);
        assert_eq!("Very High".parse::<Level>().unwrap(), Level::VeryHigh);
        assert_eq!("xh".parse::<Level>().unwrap(), Level::ExtraHigh);
        assert_eq!("STOR".parse::<DriverId>().unwrap(), DriverId::Stor);
        assert!("huge".parse::<Level>().is_err());
        assert!("agile".parse::<Mode>().is_err());
    }

    #[test]
    fn project_record_baselines() {
        let p =
            ProjectRecord::new("p1", 32.0, Mode::Organic, DriverRatings::nominal(), 120.0).unwrap();
        assert!(
            (p.crisp_total() - 121.8).abs() < 0.05,
            "{}",
            p.crisp_total()
        );
        assert_eq!(p.actual_nominal(), 120.0);
        assert!(
            ProjectRecord::new("p", 32.0, Mode::Organic, DriverRatings::nominal(), 0.0).is_err()
        );
    }
}
