use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{csqrt, re, C64};

/// Occupation statistics of the thermal reservoirs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BathStatistics {
    Fermionic,
    #[default]
    Bosonic,
}

/// Which master equation generates the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Dissipators act on the bare qubits (weak inter-qubit coupling).
    #[default]
    Local,
    /// Dissipators act on eigenstates of the coupled Hamiltonian.
    Global,
}

/// The parameter set `{epsilon, T1, T2, gamma1, gamma2, g}` plus the bath
/// statistics and master-equation regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MachineParams {
    /// Qubit gap.
    pub epsilon: f64,
    pub t1: f64,
    pub t2: f64,
    /// Bare coupling of qubit 1 to its bath.
    pub gamma1: f64,
    pub gamma2: f64,
    /// Inter-qubit exchange coupling.
    pub g: f64,
    pub statistics: BathStatistics,
    pub regime: Regime,
}

impl MachineParams {
    /// Validated constructor for the local regime with bosonic baths.
    pub fn new(epsilon: f64, t1: f64, t2: f64, gamma1: f64, gamma2: f64, g: f64) -> Result<Self> {
        let p = Self { epsilon, t1, t2, gamma1, gamma2, g, statistics: BathStatistics::Bosonic, regime: Regime::Local };
        p.validate()?;
        Ok(p)
    }

    pub fn with_statistics(mut self, statistics: BathStatistics) -> Self {
        self.statistics = statistics;
        self
    }

    pub fn with_regime(mut self, regime: Regime) -> Self {
        self.regime = regime;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.epsilon, self.t1, self.t2, self.gamma1, self.gamma2, self.g].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::ParameterDomain("parameters must be finite".into()));
        }
        if self.epsilon <= 0.0 {
            return Err(Error::ParameterDomain(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        if self.gamma1 <= 0.0 || self.gamma2 <= 0.0 {
            return Err(Error::ParameterDomain(format!(
                "bath couplings must be > 0, got {} and {}",
                self.gamma1, self.gamma2
            )));
        }
        if self.t1 < 0.0 || self.t2 < 0.0 {
            return Err(Error::ParameterDomain("temperatures must be >= 0".into()));
        }
        if self.g < 0.0 {
            return Err(Error::ParameterDomain(format!("g must be >= 0, got {}", self.g)));
        }
        Ok(())
    }

    /// True when the local master equation is being used outside its
    /// nominal validity window `g <~ gamma_k << epsilon`.
    pub fn local_validity_warning(&self) -> bool {
        let gmax = self.gamma1.max(self.gamma2);
        self.regime == Regime::Local && (self.g > 10.0 * gmax || gmax > 0.1 * self.epsilon)
    }

    /// The coupling at which `eta = 0`, i.e. `|Delta Gamma| / 2`.
    pub fn critical_coupling(&self) -> Result<f64> {
        Ok(derived_rates(self)?.delta_gamma.abs() / 2.0)
    }

    /// Same parameters at the third-order exceptional point.
    pub fn at_critical_coupling(&self) -> Result<Self> {
        Ok(self.with_g(self.critical_coupling()?))
    }
}

/// Incoming (`gamma_plus`) and outgoing (`gamma_minus`) rates of one bath at
/// transition energy `epsilon` and temperature `t`.
pub fn bath_rates(statistics: BathStatistics, epsilon: f64, t: f64, gamma: f64) -> Result<(f64, f64)> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::ParameterDomain(format!("epsilon must be > 0, got {epsilon}")));
    }
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::ParameterDomain(format!("gamma must be > 0, got {gamma}")));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::ParameterDomain(format!("temperature must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok((0.0, gamma));
    }
    let x = epsilon / t;
    Ok(match statistics {
        BathStatistics::Fermionic => (gamma / (x.exp() + 1.0), gamma / (1.0 + (-x).exp())),
        BathStatistics::Bosonic => (gamma / x.exp_m1(), gamma / -(-x).exp_m1()),
    })
}

/// Rates of both baths together with the derived totals used throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathRates {
    pub gamma_plus: [f64; 2],
    pub gamma_minus: [f64; 2],
    /// `Gamma_k = gamma_k^+ + gamma_k^-`.
    pub total: [f64; 2],
    /// `Gamma = Gamma_1 + Gamma_2`.
    pub gamma_sum: f64,
    /// `Delta Gamma = (Gamma_1 - Gamma_2) / 2`.
    pub delta_gamma: f64,
    /// Principal square root of `Delta Gamma^2 - 4 g^2`.
    pub eta: C64,
    /// `Delta Gamma / (2 g)`, absent for `g = 0`.
    pub zeta_tilde: Option<f64>,
}

impl BathRates {
    pub fn from_rates(gamma_plus: [f64; 2], gamma_minus: [f64; 2], g: f64) -> Self {
        let total = [gamma_plus[0] + gamma_minus[0], gamma_plus[1] + gamma_minus[1]];
        let delta_gamma = (total[0] - total[1]) / 2.0;
        let eta = csqrt(re(delta_gamma * delta_gamma - 4.0 * g * g));
        Self {
            gamma_plus,
            gamma_minus,
            total,
            gamma_sum: total[0] + total[1],
            delta_gamma,
            eta,
            zeta_tilde: (g > 0.0).then(|| delta_gamma / (2.0 * g)),
        }
    }
}

pub fn derived_rates(params: &MachineParams) -> Result<BathRates> {
    params.validate()?;
    let (p1, m1) = bath_rates(params.statistics, params.epsilon, params.t1, params.gamma1)?;
    let (p2, m2) = bath_rates(params.statistics, params.epsilon, params.t2, params.gamma2)?;
    Ok(BathRates::from_rates([p1, p2], [m1, m2], params.g))
}

/// Rates of both baths at one transition energy of the coupled Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionRates {
    pub energy: f64,
    pub gamma_plus: [f64; 2],
    pub gamma_minus: [f64; 2],
}

impl TransitionRates {
    pub fn total(&self, k: usize) -> f64 {
        self.gamma_plus[k] + self.gamma_minus[k]
    }

    /// `Gamma_1^2 + Gamma_2^2 + 2 g1-(g2- - 3 g2+) + 2 g1+(g2+ - 3 g2-)`.
    pub fn discriminant(&self) -> f64 {
        let [p1, p2] = self.gamma_plus;
        let [m1, m2] = self.gamma_minus;
        self.total(0).powi(2) + self.total(1).powi(2) + 2.0 * m1 * (m2 - 3.0 * p2) + 2.0 * p1 * (p2 - 3.0 * m2)
    }
}

/// Bose rates at the two dressed transition energies `epsilon -+ g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalRates {
    /// Rates at `epsilon_- = epsilon - g`.
    pub minus: TransitionRates,
    /// Rates at `epsilon_+ = epsilon + g`.
    pub plus: TransitionRates,
}

impl GlobalRates {
    /// Sum of all four transition-resolved totals.
    pub fn gamma_sum(&self) -> f64 {
        self.minus.total(0) + self.minus.total(1) + self.plus.total(0) + self.plus.total(1)
    }
}

pub fn global_rates(params: &MachineParams) -> Result<GlobalRates> {
    params.validate()?;
    if params.statistics != BathStatistics::Bosonic {
        return Err(Error::UnsupportedCombination(
            "the global master equation is defined with bosonic occupations".into(),
        ));
    }
    if params.g >= params.epsilon {
        return Err(Error::ParameterDomain("global regime needs g < epsilon so both dressed gaps are positive".into()));
    }
    let at = |energy: f64| -> Result<TransitionRates> {
        let (p1, m1) = bath_rates(BathStatistics::Bosonic, energy, params.t1, params.gamma1)?;
        let (p2, m2) = bath_rates(BathStatistics::Bosonic, energy, params.t2, params.gamma2)?;
        Ok(TransitionRates { energy, gamma_plus: [p1, p2], gamma_minus: [m1, m2] })
    };
    Ok(GlobalRates { minus: at(params.epsilon - params.g)?, plus: at(params.epsilon + params.g)? })
}
