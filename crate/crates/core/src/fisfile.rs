//! Human-editable TOML definition files for inference systems.
//!
//! Saving, loading and saving again yields identical bytes. The comment
//! block at the top is regenerated from the `[provenance]` table on every
//! save, so hand edits to it are not preserved.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::builder::{
    level_for_antecedent, DriverAxis, DriverFis, FuzzyEstimator, NominalEffortFis, OutputScale,
    Provenance,
};
use crate::cocomo::{DriverId, Level};
use crate::error::{Error, Result};
use crate::eval::VERSION;
use crate::fuzzy::{LinguisticVariable, MembershipFunction, Term, Universe};
use crate::inference::{
    Aggregation, Defuzzifier, FuzzyInferenceSystem, Implication, Operators, Rule, TNorm,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const NOMINAL_FILE: &str = "nominal.toml";
pub const DRIVER_DIR: &str = "drivers";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    schema_version: u32,
    rules: Vec<String>,
    provenance: BTreeMap<String, String>,
    system: SystemSection,
    operators: OperatorSection,
    inputs: Vec<VariableSection>,
    output: VariableSection,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSection {
    name: String,
    kind: String,
    resolution: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output_scale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    driver: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    axis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    anchors: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorSection {
    and: String,
    implication: String,
    aggregation: String,
    defuzzifier: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableSection {
    name: String,
    universe: [f64; 2],
    terms: Vec<TermSection>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSection {
    name: String,
    shape: String,
    params: Vec<f64>,
}

/// Either kind of system a definition file can hold.
#[derive(Debug, Clone)]
pub enum FisDefinition {
    Nominal(NominalEffortFis),
    Driver(DriverFis),
}

fn fis_err(msg: impl Into<String>) -> Error {
    Error::FisFile(msg.into())
}

fn variable_section(v: &LinguisticVariable) -> VariableSection {
    VariableSection {
        name: v.name().to_string(),
        universe: [v.universe().lo(), v.universe().hi()],
        terms: v
            .terms()
            .iter()
            .map(|t| TermSection {
                name: t.name.clone(),
                shape: t.mf.shape_name().to_string(),
                params: t.mf.params(),
            })
            .collect(),
    }
}

fn operator_section(ops: Operators) -> OperatorSection {
    OperatorSection {
        and: ops.and.name().into(),
        implication: ops.implication.name().into(),
        aggregation: ops.aggregation.name().into(),
        defuzzifier: ops.defuzzifier.name().into(),
    }
}

fn parse_operators(s: &OperatorSection) -> Result<Operators> {
    let and = match s.and.as_str() {
        "min" => TNorm::Min,
        "product" => TNorm::Product,
        other => return Err(fis_err(format!("unknown AND operator `{other}`"))),
    };
    let implication = match s.implication.as_str() {
        "min" => Implication::Min,
        "product" => Implication::Product,
        other => return Err(fis_err(format!("unknown implication `{other}`"))),
    };
    if s.aggregation != "max" {
        return Err(fis_err(format!("unknown aggregation `{}`", s.aggregation)));
    }
    if s.defuzzifier != "centroid" {
        return Err(fis_err(format!("unknown defuzzifier `{}`", s.defuzzifier)));
    }
    Ok(Operators {
        and,
        implication,
        aggregation: Aggregation::Max,
        defuzzifier: Defuzzifier::Centroid,
    })
}

fn build_variable(s: &VariableSection, is_output: bool) -> Result<LinguisticVariable> {
    let universe = Universe::new(s.universe[0], s.universe[1])?;
    let terms = s
        .terms
        .iter()
        .map(|t| {
            Ok(Term::new(
                t.name.clone(),
                MembershipFunction::from_parts(&t.shape, &t.params)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    if is_output {
        LinguisticVariable::output(s.name.clone(), universe, terms)
    } else {
        LinguisticVariable::new(s.name.clone(), universe, terms)
    }
}

/// Parses `IF a IS x AND b IS y THEN out IS z`.
pub fn parse_rule(text: &str, output: &str) -> Result<Rule> {
    let bad = || fis_err(format!("malformed rule `{text}`"));
    let body = text.trim().strip_prefix("IF ").ok_or_else(bad)?;
    let (lhs, rhs) = body.split_once(" THEN ").ok_or_else(bad)?;
    let clause = |c: &str| -> Result<(String, String)> {
        let (v, t) = c.trim().split_once(" IS ").ok_or_else(bad)?;
        let (v, t) = (v.trim(), t.trim());
        if v.is_empty() || t.is_empty() || t.contains(' ') || v.contains(' ') {
            return Err(bad());
        }
        Ok((v.to_string(), t.to_string()))
    };
    let antecedents = lhs.split(" AND ").map(clause).collect::<Result<Vec<_>>>()?;
    let (out, term) = clause(rhs)?;
    if out != output {
        return Err(fis_err(format!(
            "rule `{text}` concludes on `{out}`, expected `{output}`"
        )));
    }
    Ok(Rule::new(antecedents, term))
}

fn document_for(
    fis: &FuzzyInferenceSystem,
    system: SystemSection,
    provenance: Provenance,
) -> Document {
    Document {
        schema_version: SCHEMA_VERSION,
        rules: fis
            .rules()
            .iter()
            .map(|r| r.describe(fis.output().name()))
            .collect(),
        provenance,
        system,
        operators: operator_section(fis.operators()),
        inputs: fis.inputs().iter().map(variable_section).collect(),
        output: variable_section(fis.output()),
    }
}

fn render(doc: &Document) -> Result<String> {
    let mut head =
        format!("# Fuzzy inference system definition, written by fuzzy-cocomo {VERSION}.\n");
    for (k, v) in &doc.provenance {
        head.push_str(&format!("# {k}: {v}\n"));
    }
    head.push_str("# Rules, terms and operators below may be edited by hand.\n\n");
    let body = toml::to_string_pretty(doc).map_err(|e| fis_err(e.to_string()))?;
    Ok(head + &body)
}

fn driver_provenance(d: &DriverFis) -> Provenance {
    let mut p = Provenance::new();
    p.insert("kind".into(), "driver".into());
    p.insert("driver".into(), d.driver().token().into());
    p.insert("axis".into(), d.axis().token().into());
    p.insert("source".into(), "cost-driver multiplier table".into());
    p.insert("seed".into(), "none".into());
    p
}

pub fn nominal_to_string(n: &NominalEffortFis) -> Result<String> {
    let system = SystemSection {
        name: n.fis().name().to_string(),
        kind: "nominal".into(),
        resolution: n.fis().resolution(),
        output_scale: Some(n.scale().token().into()),
        driver: None,
        axis: None,
        anchors: None,
    };
    render(&document_for(n.fis(), system, n.provenance().clone()))
}

pub fn driver_to_string(d: &DriverFis) -> Result<String> {
    let system = SystemSection {
        name: d.fis().name().to_string(),
        kind: "driver".into(),
        resolution: d.fis().resolution(),
        output_scale: None,
        driver: Some(d.driver().token().into()),
        axis: Some(d.axis().token().into()),
        anchors: Some(
            d.anchors()
                .iter()
                .map(|&(l, v)| (l.token().to_string(), v))
                .collect(),
        ),
    };
    render(&document_for(d.fis(), system, driver_provenance(d)))
}

pub fn to_string(def: &FisDefinition) -> Result<String> {
    match def {
        FisDefinition::Nominal(n) => nominal_to_string(n),
        FisDefinition::Driver(d) => driver_to_string(d),
    }
}

pub fn from_str(text: &str) -> Result<FisDefinition> {
    let doc: Document = toml::from_str(text).map_err(|e| fis_err(e.to_string()))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(fis_err(format!(
            "schema version {} not supported (expected {SCHEMA_VERSION})",
            doc.schema_version
        )));
    }
    let inputs = doc
        .inputs
        .iter()
        .map(|v| build_variable(v, false))
        .collect::<Result<Vec<_>>>()?;
    let output = build_variable(&doc.output, true)?;
    let rules = doc
        .rules
        .iter()
        .map(|r| parse_rule(r, output.name()))
        .collect::<Result<Vec<_>>>()?;
    let fis = FuzzyInferenceSystem::new(
        doc.system.name.clone(),
        inputs,
        output,
        rules,
        parse_operators(&doc.operators)?,
        doc.system.resolution,
    )?;
    match doc.system.kind.as_str() {
        "nominal" => {
            let scale = doc
                .system
                .output_scale
                .as_deref()
                .ok_or_else(|| fis_err("nominal system needs `output_scale`"))?;
            Ok(FisDefinition::Nominal(NominalEffortFis::from_parts(
                fis,
                OutputScale::parse(scale)?,
                doc.provenance,
            )?))
        }
        "driver" => {
            let driver: DriverId = doc
                .system
                .driver
                .as_deref()
                .ok_or_else(|| fis_err("driver system needs `driver`"))?
                .parse()?;
            let axis = match doc.system.axis.as_deref() {
                Some("index") => DriverAxis::RatingIndex,
                Some(unit) => DriverAxis::Measured { unit: unit.into() },
                None => return Err(fis_err("driver system needs `axis`")),
            };
            let mut anchors = doc
                .system
                .anchors
                .as_ref()
                .ok_or_else(|| fis_err("driver system needs `anchors`"))?
                .iter()
                .map(|(k, &v)| Ok((k.parse::<Level>()?, v)))
                .collect::<Result<Vec<_>>>()?;
            anchors.sort_by_key(|&(l, _)| l);
            for r in fis.rules() {
                for (_, term) in &r.antecedents {
                    if let Some(level) = level_for_antecedent(term) {
                        if !anchors.iter().any(|&(l, _)| l == level) {
                            return Err(fis_err(format!("no anchor for level `{term}`")));
                        }
                    }
                }
            }
            Ok(FisDefinition::Driver(DriverFis::from_parts(
                driver, axis, fis, anchors,
            )?))
        }
        other => Err(fis_err(format!("unknown system kind `{other}`"))),
    }
}

pub fn save(path: &Path, def: &FisDefinition) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, to_string(def)?).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<FisDefinition> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_str(&text).map_err(|e| match e {
        Error::FisFile(m) => Error::FisFile(format!("{}: {m}", path.display())),
        other => Error::FisFile(format!("{}: {other}", path.display())),
    })
}

pub fn driver_path(dir: &Path, id: DriverId) -> PathBuf {
    dir.join(DRIVER_DIR).join(format!("{}.toml", id.token()))
}

/// Writes `nominal.toml` and `drivers/<id>.toml` for all fifteen drivers.
/// Returns the paths written, nominal first.
pub fn save_bundle(dir: &Path, estimator: &FuzzyEstimator) -> Result<Vec<PathBuf>> {
    let mut written = Vec::with_capacity(16);
    let nominal = dir.join(NOMINAL_FILE);
    save(
        &nominal,
        &FisDefinition::Nominal(estimator.nominal().clone()),
    )?;
    written.push(nominal);
    for d in estimator.drivers() {
        let p = driver_path(dir, d.driver());
        save(&p, &FisDefinition::Driver(d.clone()))?;
        written.push(p);
    }
    Ok(written)
}

pub fn load_nominal(path: &Path) -> Result<NominalEffortFis> {
    match load(path)? {
        FisDefinition::Nominal(n) => Ok(n),
        FisDefinition::Driver(_) => Err(fis_err(format!(
            "{}: expected a nominal system, found a driver system",
            path.display()
        ))),
    }
}

pub fn load_driver(path: &Path) -> Result<DriverFis> {
    match load(path)? {
        FisDefinition::Driver(d) => Ok(d),
        FisDefinition::Nominal(_) => Err(fis_err(format!(
            "{}: expected a driver system, found a nominal system",
            path.display()
        ))),
    }
}

/// Loads a bundle written by [`save_bundle`].
pub fn load_bundle(dir: &Path) -> Result<FuzzyEstimator> {
    let nominal = load_nominal(&dir.join(NOMINAL_FILE))?;
    let drivers = DriverId::ALL
        .iter()
        .map(|&id| {
            let d = load_driver(&driver_path(dir, id))?;
            if d.driver() != id {
                return Err(fis_err(format!(
                    "{} holds the system for {}",
                    driver_path(dir, id).display(),
                    d.driver()
                )));
            }
            Ok(d)
        })
        .collect::<Result<Vec<_>>>()?;
    FuzzyEstimator::new(nominal, drivers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{NominalFisConfig, SampleSource};
    use crate::cocomo::Mode;
    use crate::fuzzy::PartitionShape;

    #[test]
    fn nominal_round_trip_is_byte_stable() {
        let cfg = NominalFisConfig::new(5, PartitionShape::Gaussian).with_source(
            SampleSource::Artificial {
                count: 500,
                seed: 11,
            },
        );
        let n = crate::builder::synthesize_nominal_fis(&cfg).unwrap();
        let first = nominal_to_string(&n).unwrap();
        let back = match from_str(&first).unwrap() {
            FisDefinition::Nominal(b) => b,
            _ => panic!("kind changed"),
        };
        assert_eq!(nominal_to_string(&back).unwrap(), first);
        let x = n.estimate_mode(Mode::Semidetached, 33.0).unwrap();
        assert_eq!(
            x.to_bits(),
            back.estimate_mode(Mode::Semidetached, 33.0)
                .unwrap()
                .to_bits()
        );
        assert!(first.contains("IF mode IS organic AND size IS s1 THEN effort IS e1_1"));
        assert!(first.starts_with("# Fuzzy inference system definition"));
    }

    #[test]
    fn driver_round_trip_is_byte_stable() {
        let est =
            FuzzyEstimator::build(&NominalFisConfig::new(3, PartitionShape::Triangular)).unwrap();
        for d in est.drivers() {
            let text = driver_to_string(d).unwrap();
            let back = match from_str(&text).unwrap() {
                FisDefinition::Driver(b) => b,
                _ => panic!("kind changed"),
            };
            assert_eq!(driver_to_string(&back).unwrap(), text);
            assert_eq!(back.anchors(), d.anchors());
            assert_eq!(back.range(), d.range());
        }
    }

    #[test]
    fn rule_parsing() {
        let r = parse_rule(
            "IF mode IS organic AND size IS s2 THEN effort IS e1_2",
            "effort",
        )
        .unwrap();
        assert_eq!(r, Rule::new([("mode", "organic"), ("size", "s2")], "e1_2"));
        assert!(parse_rule("mode IS organic THEN effort IS e", "effort").is_err());
        assert!(parse_rule("IF mode IS organic THEN other IS e", "effort").is_err());
        assert!(parse_rule("IF mode organic THEN effort IS e", "effort").is_err());
    }

    #[test]
    fn edited_files_are_validated() {
        let n = crate::builder::synthesize_nominal_fis(&NominalFisConfig::new(
            3,
            PartitionShape::Gaussian,
        ))
        .unwrap();
        let text = nominal_to_string(&n).unwrap();
        let missing_term = text.replacen("THEN effort IS e1_1", "THEN effort IS nope", 1);
        assert!(from_str(&missing_term).is_err());
        let bad_version = text.replacen("schema_version = 1", "schema_version = 9", 1);
        assert!(matches!(from_str(&bad_version), Err(Error::FisFile(_))));
        let bad_shape = text.replacen(
            "shape = \"gaussian\"\nparams",
            "shape = \"bell\"\nparams",
            1,
        );
        assert_ne!(bad_shape, text);
        assert!(from_str(&bad_shape).is_err());
    }
}
