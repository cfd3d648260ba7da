//! Generic Mamdani inference: fuzzify, fire rules, clip consequents,
//! aggregate, defuzzify by centroid.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fuzzy::{LinguisticVariable, Universe};

pub const DEFAULT_RESOLUTION: usize = 1001;
pub const MIN_RESOLUTION: usize = 101;

/// Conjunction of antecedent degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TNorm {
    #[default]
    Min,
    Product,
}

/// How a firing strength shapes its consequent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Implication {
    #[default]
    Min,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    #[default]
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Defuzzifier {
    #[default]
    Centroid,
}

/// Operator set. The default is classic Mamdani: min / min / max / centroid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Operators {
    pub and: TNorm,
    pub implication: Implication,
    pub aggregation: Aggregation,
    pub defuzzifier: Defuzzifier,
}

impl TNorm {
    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            TNorm::Min => a.min(b),
            TNorm::Product => a * b,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TNorm::Min => "min",
            TNorm::Product => "product",
        }
    }
}

impl Implication {
    fn apply(self, strength: f64, mu: f64) -> f64 {
        match self {
            Implication::Min => strength.min(mu),
            Implication::Product => strength * mu,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Implication::Min => "min",
            Implication::Product => "product",
        }
    }
}

impl Aggregation {
    pub fn name(self) -> &'static str {
        "max"
    }
}

impl Defuzzifier {
    pub fn name(self) -> &'static str {
        "centroid"
    }
}

/// `IF var IS term AND ... THEN output IS term`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub antecedents: Vec<(String, String)>,
    pub consequent: String,
}

impl Rule {
    pub fn new<I, A, B>(antecedents: I, consequent: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        Rule {
            antecedents: antecedents
                .into_iter()
                .map(|(v, t)| (v.into(), t.into()))
                .collect(),
            consequent: consequent.into(),
        }
    }

    /// Human-readable form used in FIS files and explanations.
    pub fn describe(&self, output: &str) -> String {
        let conds: Vec<String> = self
            .antecedents
            .iter()
            .map(|(v, t)| format!("{v} IS {t}"))
            .collect();
        format!(
            "IF {} THEN {output} IS {}",
            conds.join(" AND "),
            self.consequent
        )
    }
}

#[derive(Debug, Clone)]
struct CompiledRule {
    /// (input index, term index), sorted by input index.
    antecedents: Vec<(usize, usize)>,
    consequent: usize,
}

/// A rule and how strongly it fired for one set of inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleActivation<'a> {
    pub index: usize,
    pub rule: &'a Rule,
    pub strength: f64,
}

#[derive(Debug, Clone)]
pub struct FuzzyInferenceSystem {
    name: String,
    inputs: Vec<LinguisticVariable>,
    output: LinguisticVariable,
    rules: Vec<Rule>,
    operators: Operators,
    resolution: usize,
    compiled: Vec<CompiledRule>,
    grid: Vec<f64>,
    // consequent term -> sampled membership over `grid`
    samples: Vec<Vec<f64>>,
}

impl FuzzyInferenceSystem {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<LinguisticVariable>,
        output: LinguisticVariable,
        rules: Vec<Rule>,
        operators: Operators,
        resolution: usize,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidRuleBase {
            system: name.clone(),
            reason,
        };
        if inputs.is_empty() {
            return Err(invalid("no input variables".into()));
        }
        for (i, v) in inputs.iter().enumerate() {
            if inputs[..i].iter().any(|w| w.name() == v.name()) || v.name() == output.name() {
                return Err(invalid(format!("duplicate variable name `{}`", v.name())));
            }
        }
        if rules.is_empty() {
            return Err(invalid("no rules".into()));
        }
        if resolution < MIN_RESOLUTION {
            return Err(invalid(format!(
                "defuzzification resolution {resolution} below {MIN_RESOLUTION}"
            )));
        }

        let mut compiled: Vec<CompiledRule> = Vec::with_capacity(rules.len());
        for (r, rule) in rules.iter().enumerate() {
            if rule.antecedents.is_empty() {
                return Err(invalid(format!("rule {r} has no antecedent")));
            }
            let mut ants = Vec::with_capacity(rule.antecedents.len());
            for (var, term) in &rule.antecedents {
                let vi = inputs
                    .iter()
                    .position(|v| v.name() == var)
                    .ok_or_else(|| invalid(format!("rule {r}: unknown variable `{var}`")))?;
                let ti = inputs[vi]
                    .term_index(term)
                    .ok_or_else(|| invalid(format!("rule {r}: `{var}` has no term `{term}`")))?;
                if ants.iter().any(|&(v, _)| v == vi) {
                    return Err(invalid(format!("rule {r}: `{var}` appears twice")));
                }
                ants.push((vi, ti));
            }
            ants.sort_unstable();
            let consequent = output.term_index(&rule.consequent).ok_or_else(|| {
                invalid(format!(
                    "rule {r}: output `{}` has no term `{}`",
                    output.name(),
                    rule.consequent
                ))
            })?;
            if let Some(prev) = compiled.iter().position(|c| c.antecedents == ants) {
                return Err(invalid(format!(
                    "rules {prev} and {r} share the same antecedent"
                )));
            }
            compiled.push(CompiledRule {
                antecedents: ants,
                consequent,
            });
        }

        let grid = output.universe().grid(resolution);
        let samples: Vec<Vec<f64>> = output
            .terms()
            .iter()
            .map(|t| grid.iter().map(|&x| t.mf.degree(x)).collect())
            .collect();
        for (t, s) in output.terms().iter().zip(&samples) {
            if s.iter().all(|&m| m <= 0.0) {
                return Err(invalid(format!(
                    "output term `{}` has no mass inside {}",
                    t.name,
                    output.universe()
                )));
            }
        }

        let fis = FuzzyInferenceSystem {
            name,
            inputs,
            output,
            rules,
            operators,
            resolution,
            compiled,
            grid,
            samples,
        };
        fis.check_coverage()?;
        Ok(fis)
    }

    /// Same system, different defuzzification grid.
    pub fn with_resolution(&self, resolution: usize) -> Result<Self> {
        FuzzyInferenceSystem::new(
            self.name.clone(),
            self.inputs.clone(),
            self.output.clone(),
            self.rules.clone(),
            self.operators,
            resolution,
        )
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    // Every point of a scan grid over the input universes must fire a rule.
    fn check_coverage(&self) -> Result<()> {
        let dims = self.inputs.len() as f64;
        let per_axis = (20_000f64.powf(1.0 / dims).floor() as usize).clamp(11, 2001);
        let axes: Vec<Vec<f64>> = self
            .inputs
            .iter()
            .map(|v| {
                let mut pts = v.universe().grid(per_axis);
                pts.extend(
                    v.terms()
                        .iter()
                        .map(|t| t.mf.peak())
                        .filter(|p| v.universe().contains(*p)),
                );
                pts
            })
            .collect();
        // term degrees at every axis point, computed once
        let degrees: Vec<Vec<Vec<f64>>> = self
            .inputs
            .iter()
            .zip(&axes)
            .map(|(v, pts)| pts.iter().map(|&x| v.degrees(x)).collect())
            .collect::<Result<_>>()?;
        let and = self.operators.and;
        let mut idx = vec![0usize; axes.len()];
        loop {
            let fires = self.compiled.iter().any(|rule| {
                let mut it = rule.antecedents.iter().map(|&(v, t)| degrees[v][idx[v]][t]);
                let first = it.next().unwrap_or(0.0);
                it.fold(first, |acc, d| and.apply(acc, d)) > 0.0
            });
            if !fires {
                let point: Vec<f64> = idx.iter().enumerate().map(|(d, &i)| axes[d][i]).collect();
                return Err(Error::InvalidRuleBase {
                    system: self.name.clone(),
                    reason: format!("no rule fires at {}", self.format_inputs(&point)),
                });
            }
            // odometer increment
            let mut d = 0;
            loop {
                if d == idx.len() {
                    return Ok(());
                }
                idx[d] += 1;
                if idx[d] < axes[d].len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &LinguisticVariable {
        &self.output
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn operators(&self) -> Operators {
        self.operators
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.inputs.iter().position(|v| v.name() == name)
    }

    fn format_inputs(&self, inputs: &[f64]) -> String {
        let parts: Vec<String> = self
            .inputs
            .iter()
            .zip(inputs)
            .map(|(v, x)| format!("{}={x}", v.name()))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    fn check_arity(&self, inputs: &[f64]) -> Result<()> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::Domain(format!(
                "`{}` expects {} inputs, got {}",
                self.name,
                self.inputs.len(),
                inputs.len()
            )));
        }
        Ok(())
    }

    /// Firing strength of every rule, in rule order. Inputs are positional,
    /// in the order of [`Self::inputs`].
    pub fn fire_strengths(&self, inputs: &[f64]) -> Result<Vec<f64>> {
        self.check_arity(inputs)?;
        let degrees = self
            .inputs
            .iter()
            .zip(inputs)
            .map(|(v, &x)| v.degrees(x))
            .collect::<Result<Vec<_>>>()?;
        let and = self.operators.and;
        Ok(self
            .compiled
            .iter()
            .map(|rule| {
                let mut it = rule.antecedents.iter().map(|&(v, t)| degrees[v][t]);
                let first = it.next().unwrap_or(0.0);
                it.fold(first, |acc, d| and.apply(acc, d))
            })
            .collect())
    }

    /// Aggregated output membership sampled on the defuzzification grid.
    pub fn aggregate(&self, inputs: &[f64]) -> Result<Vec<f64>> {
        let strengths = self.fire_strengths(inputs)?;
        Ok(self.aggregate_from(&strengths))
    }

    fn aggregate_from(&self, strengths: &[f64]) -> Vec<f64> {
        let mut agg = vec![0.0; self.resolution];
        let imp = self.operators.implication;
        for (rule, &w) in self.compiled.iter().zip(strengths) {
            if w <= 0.0 {
                continue;
            }
            let samples = &self.samples[rule.consequent];
            for (a, &mu) in agg.iter_mut().zip(samples) {
                let v = imp.apply(w, mu);
                if v > *a {
                    *a = v;
                }
            }
        }
        agg
    }

    /// Crisp output for positional inputs.
    pub fn infer(&self, inputs: &[f64]) -> Result<f64> {
        let strengths = self.fire_strengths(inputs)?;
        let agg = self.aggregate_from(&strengths);
        centroid_on_grid(&self.grid, &agg).ok_or_else(|| Error::NoRuleFired {
            system: self.name.clone(),
            inputs: self.format_inputs(inputs),
        })
    }

    /// Crisp output for inputs keyed by variable name. Every declared input
    /// must be present and no unknown names are accepted.
    pub fn infer_named(&self, inputs: &BTreeMap<String, f64>) -> Result<f64> {
        let positional = self.positional(inputs)?;
        self.infer(&positional)
    }

    pub fn positional(&self, inputs: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
        if let Some(unknown) = inputs.keys().find(|k| self.input_index(k).is_none()) {
            return Err(Error::UnknownInput(unknown.clone()));
        }
        self.inputs
            .iter()
            .map(|v| {
                inputs
                    .get(v.name())
                    .copied()
                    .ok_or_else(|| Error::MissingInput(v.name().to_string()))
            })
            .collect()
    }

    /// Rules with their firing strengths, strongest first. Rules that did not
    /// fire are omitted.
    pub fn explain(&self, inputs: &[f64]) -> Result<Vec<RuleActivation<'_>>> {
        let strengths = self.fire_strengths(inputs)?;
        let mut fired: Vec<RuleActivation<'_>> = strengths
            .into_iter()
            .enumerate()
            .filter(|(_, s)| *s > 0.0)
            .map(|(index, strength)| RuleActivation {
                index,
                rule: &self.rules[index],
                strength,
            })
            .collect();
        fired.sort_by(|a, b| {
            b.strength
                .total_cmp(&a.strength)
                .then(a.index.cmp(&b.index))
        });
        Ok(fired)
    }
}

impl fmt::Display for FuzzyInferenceSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} inputs, {} rules, output `{}` on {}",
            self.name,
            self.inputs.len(),
            self.rules.len(),
            self.output.name(),
            self.output.universe()
        )?;
        for rule in &self.rules {
            writeln!(f, "  {}", rule.describe(self.output.name()))?;
        }
        Ok(())
    }
}

fn centroid_on_grid(grid: &[f64], mu: &[f64]) -> Option<f64> {
    let mut moment = 0.0;
    let mut area = 0.0;
    for (&x, &m) in grid.iter().zip(mu) {
        moment += x * m;
        area += m;
    }
    (area > 0.0).then(|| moment / area)
}

/// Centroid `Σ xᵢ·μᵢ / Σ μᵢ` of a membership curve sampled at `resolution`
/// evenly spaced points spanning `universe`.
pub fn defuzz_centroid(aggregate: &[f64], universe: Universe, resolution: usize) -> Result<f64> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::Domain(format!(
            "resolution {resolution} below {MIN_RESOLUTION}"
        )));
    }
    if aggregate.len() != resolution {
        return Err(Error::Domain(format!(
            "{} samples for a {resolution}-point grid",
            aggregate.len()
        )));
    }
    centroid_on_grid(&universe.grid(resolution), aggregate).ok_or_else(|| Error::NoRuleFired {
        system: "centroid".into(),
        inputs: "zero-area aggregate".into(),
    })
}
