//! Run configuration: one flat JSON document per run, with `key=value`
//! overrides applied before validation.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thermal_ep::dynamics::InitialStateKind;
use thermal_ep::ho::HoConvention;
use thermal_ep::model::params::{BathStatistics, MachineParams, Regime};
use thermal_ep::spectral::ep::FreeParameter;

use crate::error::CliError;

/// The inter-qubit coupling: a number or the critical coupling `"gbar"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coupling {
    Value(f64),
    Named(NamedCoupling),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedCoupling {
    Gbar,
}

impl Coupling {
    pub fn resolve(self, base: &MachineParams) -> Result<f64, CliError> {
        match self {
            Coupling::Value(g) => Ok(g),
            Coupling::Named(NamedCoupling::Gbar) => Ok(base.critical_coupling()?),
        }
    }

    pub fn is_gbar(self) -> bool {
        matches!(self, Coupling::Named(NamedCoupling::Gbar))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusAxis {
    Gamma,
    Epsilon,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

/// Flat run configuration. Machine parameters are required; every other key
/// is optional and documented in the README.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub epsilon: f64,
    pub t1: f64,
    pub t2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub g: Coupling,
    #[serde(default, skip_serializing_if = "is_default")]
    pub statistics: BathStatistics,
    #[serde(default, skip_serializing_if = "is_default")]
    pub regime: Regime,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_points: Option<usize>,
    /// Grid spacing; each command has its own default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_spacing: Option<Spacing>,

    /// Initial states for `evolve` and `ratio`: `thermal_product`, `ground`,
    /// `singlet`, `steady_state`, `ep_subspace(w1,w2)`, `ep_direction(w1,w2,fraction)`,
    /// `ep_eigen(fraction)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_states: Option<Vec<String>>,
    /// Couplings for `evolve` (one run each); defaults to `[g]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_values: Option<Vec<Coupling>>,
    /// Non-EP coupling for `ratio`; defaults to `g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparator_g: Option<f64>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub with_ode: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_parameter: Option<FreeParameter>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus_axis: Option<LocusAxis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locus_g_max: Option<f64>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ho_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ho_k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ho_comparators: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ho_p0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ho_x0: Option<f64>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub ho_convention: HoConvention,
}

pub const DEFAULT_PRECISION: usize = 12;

impl RunConfig {
    /// Parse a document, applying `key=value` overrides first. Override
    /// values are read as JSON and fall back to plain strings.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let mut doc: Value = serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?;
        let obj: &mut Map<String, Value> =
            doc.as_object_mut().ok_or_else(|| CliError::Config("config must be a JSON object".into()))?;
        for ov in overrides {
            let (key, raw) =
                ov.split_once('=').ok_or_else(|| CliError::Config(format!("override `{ov}` is not key=value")))?;
            let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            obj.insert(key.trim().to_string(), value);
        }
        let cfg: RunConfig = serde_json::from_value(doc).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.base_params()?;
        Ok(cfg)
    }

    /// Canonical serialization (pretty JSON, trailing newline).
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// Machine parameters with `g` resolved.
    pub fn params(&self) -> Result<MachineParams, CliError> {
        let base = self.base_params()?;
        Ok(base.with_g(self.g.resolve(&base)?))
    }

    /// Machine parameters with `g = 0`, used to resolve `"gbar"`.
    pub fn base_params(&self) -> Result<MachineParams, CliError> {
        let g = match self.g {
            Coupling::Value(g) => g,
            Coupling::Named(_) => 0.0,
        };
        Ok(MachineParams::new(self.epsilon, self.t1, self.t2, self.gamma1, self.gamma2, g)?
            .with_statistics(self.statistics)
            .with_regime(self.regime))
    }

    pub fn precision(&self) -> usize {
        self.precision.unwrap_or(DEFAULT_PRECISION)
    }

    pub fn initial_state_kinds(&self, default: &[&str]) -> Result<Vec<(String, StateSpec)>, CliError> {
        let names: Vec<String> = match &self.initial_states {
            Some(v) => v.clone(),
            None => default.iter().map(|s| s.to_string()).collect(),
        };
        names.into_iter().map(|n| Ok((n.clone(), parse_state(&n)?))).collect()
    }
}

/// Initial state named in a config string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Library(InitialStateKind),
    /// The steady state of the run's own parameters.
    SteadyState,
    /// `rho_ss + s rho_4`, with `s` the given fraction of the largest
    /// positive scale; it has no weight on the generalized eigenvectors.
    EpEigen(f64),
}

fn parse_args(name: &str, inner: &str, n: usize) -> Result<Vec<f64>, CliError> {
    let vals: Result<Vec<f64>, _> = inner.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match vals {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(CliError::Config(format!("initial state `{name}` expects {n} numeric arguments"))),
    }
}

pub fn parse_state(name: &str) -> Result<StateSpec, CliError> {
    let (head, args) = match name.split_once('(') {
        Some((h, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| CliError::Config(format!("unbalanced parentheses in `{name}`")))?;
            (h, Some(inner))
        }
        None => (name, None),
    };
    Ok(match (head, args) {
        ("thermal_product", None) => StateSpec::Library(InitialStateKind::ThermalProduct),
        ("ground", None) => StateSpec::Library(InitialStateKind::Ground),
        ("singlet", None) => StateSpec::Library(InitialStateKind::Singlet),
        ("steady_state", None) => StateSpec::SteadyState,
        ("ep_subspace", Some(a)) => {
            let v = parse_args(name, a, 2)?;
            StateSpec::Library(InitialStateKind::EpSubspace { w_prime: v[0], w_double_prime: v[1] })
        }
        ("ep_direction", Some(a)) => {
            let v = parse_args(name, a, 3)?;
            StateSpec::Library(InitialStateKind::EpDirection { w_prime: v[0], w_double_prime: v[1], fraction: v[2] })
        }
        ("ep_eigen", Some(a)) => StateSpec::EpEigen(parse_args(name, a, 1)?[0]),
        _ => return Err(CliError::Config(format!("unknown initial state `{name}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{"epsilon": 1, "t1": 3, "t2": 0.7, "gamma1": 0.01, "gamma2": 0.01, "g": "gbar"}"#;

    #[test]
    fn parses_and_round_trips() {
        let c = RunConfig::parse(DOC, &[]).unwrap();
        assert!(c.g.is_gbar());
        let once = c.to_canonical();
        let twice = RunConfig::parse(&once, &[]).unwrap().to_canonical();
        assert_eq!(once, twice);
        assert!((c.params().unwrap().g - 0.0110627).abs() < 1e-6);
    }

    #[test]
    fn overrides_and_unknown_keys() {
        let c = RunConfig::parse(DOC, &["g=0.005".into(), "regime=global".into()]).unwrap();
        assert_eq!(c.g, Coupling::Value(0.005));
        assert_eq!(c.regime, Regime::Global);
        assert!(RunConfig::parse(DOC, &["bogus=1".into()]).is_err());
        assert!(RunConfig::parse(DOC, &["novalue".into()]).is_err());
        assert!(RunConfig::parse(DOC, &["gamma1=-1".into()]).is_err());
    }

    #[test]
    fn state_names() {
        assert_eq!(parse_state("ground").unwrap(), StateSpec::Library(InitialStateKind::Ground));
        assert_eq!(
            parse_state("ep_direction(1, 0, 0.9)").unwrap(),
            StateSpec::Library(InitialStateKind::EpDirection { w_prime: 1.0, w_double_prime: 0.0, fraction: 0.9 })
        );
        assert_eq!(parse_state("ep_eigen(0.5)").unwrap(), StateSpec::EpEigen(0.5));
        assert!(parse_state("ep_direction(1,0)").is_err());
        assert_eq!(parse_state("steady_state").unwrap(), StateSpec::SteadyState);
        assert!(parse_state("vacuum").is_err());
    }
}
