use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Self-adjoint extension parameter `ρ_m` of one channel.
///
/// `Zero` selects the regular (Dirichlet-type) solution. `Infinite` is the
/// `ρ → ∞` limit and is always evaluated in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtensionSpec {
    Zero,
    Finite(f64),
    Infinite,
}

impl ExtensionSpec {
    /// Finite value with `0.0` normalised to [`ExtensionSpec::Zero`].
    pub fn finite(rho: f64) -> Result<Self, Error> {
        if !rho.is_finite() {
            return Err(Error::Domain(format!(
                "extension parameter must be finite, got {rho}; use Infinite for the limit"
            )));
        }
        Ok(if rho == 0.0 {
            ExtensionSpec::Zero
        } else {
            ExtensionSpec::Finite(rho)
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtensionSpec::Zero)
    }
}

impl fmt::Display for ExtensionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionSpec::Zero => f.write_str("zero"),
            ExtensionSpec::Infinite => f.write_str("inf"),
            ExtensionSpec::Finite(rho) => write!(f, "{rho}"),
        }
    }
}

impl FromStr for ExtensionSpec {
    type Err = Error;

    /// Accepts a number, `zero` or `inf` (case-insensitive).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "zero" => Ok(ExtensionSpec::Zero),
            "inf" | "infinite" | "infinity" => Ok(ExtensionSpec::Infinite),
            _ => {
                let v: f64 = t
                    .parse()
                    .map_err(|_| Error::Domain(format!("invalid extension parameter '{s}'")))?;
                ExtensionSpec::finite(v)
            }
        }
    }
}

/// Extension parameters for every channel: a global value plus per-`m` overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionMap {
    global: ExtensionSpec,
    overrides: BTreeMap<i64, ExtensionSpec>,
}

impl ExtensionMap {
    pub fn uniform(global: ExtensionSpec) -> Self {
        Self {
            global,
            overrides: BTreeMap::new(),
        }
    }

    pub fn with_override(mut self, m: i64, rho: ExtensionSpec) -> Self {
        self.overrides.insert(m, rho);
        self
    }

    pub fn get(&self, m: i64) -> ExtensionSpec {
        self.overrides.get(&m).copied().unwrap_or(self.global)
    }

    pub fn global(&self) -> ExtensionSpec {
        self.global
    }

    pub fn overrides(&self) -> &BTreeMap<i64, ExtensionSpec> {
        &self.overrides
    }

    /// The map seen with `m → −m`.
    pub fn mirrored(&self) -> Self {
        Self {
            global: self.global,
            overrides: self.overrides.iter().map(|(m, r)| (-m, *r)).collect(),
        }
    }
}

impl Default for ExtensionMap {
    fn default() -> Self {
        Self::uniform(ExtensionSpec::Zero)
    }
}
