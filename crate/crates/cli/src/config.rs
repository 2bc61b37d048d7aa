//! Run configuration: a JSON key tree, validated before any computation.

use std::path::Path;

use blochop::essnorm::{EssnormOptions, LimsupOptions};
use blochop::funcalg::{AnalyticFunction, MobiusPowerSum, MobiusPowerTerm, Polynomial, PowerSeries};
use blochop::norms::{DiskGrid, QkOptions};
use blochop::operators::{OperatorKind, OperatorSpec, SymbolConfig};
use blochop::weights::{Kernel, SpaceParams, Weight};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult, Context};

/// A complex literal: a bare real number or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexLit {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexLit {
    pub fn value(self) -> Complex64 {
        match self {
            Self::Real(re) => Complex64::new(re, 0.0),
            Self::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MobiusLit {
    pub c: ComplexLit,
    pub a: ComplexLit,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesLit {
    pub coeffs: Vec<ComplexLit>,
    pub rho_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionLit {
    Poly(Vec<ComplexLit>),
    Mobius(Vec<MobiusLit>),
    Series(SeriesLit),
}

impl FunctionLit {
    pub fn build(&self, path: &str) -> CliResult<AnalyticFunction<f64>> {
        Ok(match self {
            Self::Poly(cs) => Polynomial::new(cs.iter().map(|c| c.value()).collect()).into(),
            Self::Mobius(ts) => {
                if ts.is_empty() {
                    return Err(CliError::schema(format!("{path}.mobius"), "needs at least one term"));
                }
                let terms = ts
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        MobiusPowerTerm::new(t.c.value(), t.a.value(), t.beta).ctx(&format!("{path}.mobius[{i}]"))
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                AnalyticFunction::Mobius(MobiusPowerSum::new(terms))
            }
            Self::Series(s) => {
                let mut ps = PowerSeries::new(s.coeffs.iter().map(|c| c.value()).collect(), s.rho_max)
                    .ctx(&format!("{path}.series"))?;
                if let Some(tol) = s.tail_tol {
                    ps = ps.with_tail_tol(tol);
                }
                ps.into()
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorName {
    Tn,
    Tmn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorLit {
    pub kind: OperatorName,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilation_r: Option<f64>,
}

impl OperatorLit {
    pub fn kind(&self) -> CliResult<OperatorKind> {
        match (self.kind, self.m) {
            (OperatorName::Tn, None) => Ok(OperatorKind::Tn { n: self.n }),
            (OperatorName::Tn, Some(_)) => Err(CliError::schema("operator.m", "T^n takes no `m`")),
            (OperatorName::Tmn, Some(m)) => Ok(OperatorKind::Tmn { m, n: self.n }),
            (OperatorName::Tmn, None) => Err(CliError::schema("operator.m", "missing for T^(m,n)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolsLit {
    pub psi1: FunctionLit,
    pub psi2: FunctionLit,
    pub phi: FunctionLit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelLit {
    PowerS(f64),
    Constant(f64),
    Sampled { t: Vec<f64>, k: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QkLit {
    pub p: f64,
    pub q: f64,
    pub kernel: KernelLit,
    /// Accepted only to reject it with a clear message: gamma is derived.
    #[serde(default, skip_serializing)]
    pub gamma: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceLit {
    Hinf,
    Qk(QkLit),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightLit {
    Alpha(f64),
    Tabulated { radii: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridLit {
    /// Grid depth: the outermost ring has `1 - |z| = 2^-M`.
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Number of limsup levels.
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    /// Depth of the candidate grid for the Q_K supremum over xi.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_level: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesLit {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compact_rtol: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<SymbolsLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightLit>,
    #[serde(default)]
    pub grid: GridLit,
    #[serde(default)]
    pub tolerances: TolerancesLit,
    /// Order `n` of the equivalent alpha-Bloch form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equiv_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilation_schedule: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict: Option<bool>,
}

/// The Q_K space or H-infinity, built from the config.
#[derive(Debug, Clone)]
pub enum Space {
    Qk(SpaceParams<f64>),
    Hinf,
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            CliError::schema(if path.is_empty() { ".".into() } else { path }, e.inner().to_string())
        })?;
        de.end().map_err(|e| CliError::schema(".", e.to_string()))?;
        if let Some(SpaceLit::Qk(q)) = &cfg.space {
            if q.gamma.is_some() {
                return Err(CliError::schema(
                    "space.qk.gamma",
                    "gamma is derived as (q + 2) / p and must not be given",
                ));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::schema(".", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// SHA-256 of the canonical (sorted-key, compact) JSON of the effective config.
    pub fn hash(&self) -> String {
        let v = serde_json::to_value(self).expect("config serializes");
        let bytes = serde_json::to_vec(&v).expect("config serializes");
        format!("{:x}", Sha256::digest(bytes))
    }

    pub fn grid(&self) -> DiskGrid {
        let mut g = DiskGrid::default();
        if let Some(m) = self.grid.depth {
            g.depth = m;
        }
        g
    }

    pub fn qk_options(&self) -> QkOptions {
        let mut o = QkOptions::default();
        if let Some(l) = self.grid.xi_level {
            o.xi_grid.depth = l;
        }
        o
    }

    pub fn essnorm_options(&self) -> EssnormOptions {
        let mut o = EssnormOptions::default();
        if let Some(j) = self.grid.levels {
            o.limsup = LimsupOptions { levels: j };
        }
        if let Some(t) = self.tolerances.compact_rtol {
            o.compact_rtol = t;
        }
        o.strict = self.strict.unwrap_or(false);
        o
    }

    pub fn function(&self) -> CliResult<AnalyticFunction<f64>> {
        self.function
            .as_ref()
            .ok_or_else(|| CliError::schema("function", "missing"))?
            .build("function")
    }

    pub fn weight(&self) -> CliResult<Weight<f64>> {
        match self
            .weight
            .as_ref()
            .ok_or_else(|| CliError::schema("weight", "missing"))?
        {
            WeightLit::Alpha(a) => Weight::alpha(*a).ctx("weight.alpha"),
            WeightLit::Tabulated { radii, values } => {
                Weight::tabulated(radii.clone(), values.clone()).ctx("weight.tabulated")
            }
        }
    }

    pub fn alpha(&self) -> CliResult<f64> {
        match self
            .weight
            .as_ref()
            .ok_or_else(|| CliError::schema("weight", "missing"))?
        {
            WeightLit::Alpha(a) => Ok(*a),
            WeightLit::Tabulated { .. } => Err(CliError::schema("weight", "the alpha-Bloch norm needs `alpha`")),
        }
    }

    pub fn space(&self) -> CliResult<Space> {
        match self
            .space
            .as_ref()
            .ok_or_else(|| CliError::schema("space", "missing"))?
        {
            SpaceLit::Hinf => Ok(Space::Hinf),
            SpaceLit::Qk(q) => {
                let kernel = match &q.kernel {
                    KernelLit::PowerS(s) => Kernel::power(*s),
                    KernelLit::Constant(c) => Kernel::constant(*c),
                    KernelLit::Sampled { t, k } => Kernel::sampled(t.clone(), k.clone()),
                }
                .ctx("space.qk.kernel")?;
                Ok(Space::Qk(SpaceParams::new(q.p, q.q, kernel).ctx("space.qk")?))
            }
        }
    }

    pub fn qk_params(&self) -> CliResult<SpaceParams<f64>> {
        match self.space()? {
            Space::Qk(p) => Ok(p),
            Space::Hinf => Err(CliError::schema("space", "expected `qk`")),
        }
    }

    pub fn operator(&self, grid: &DiskGrid) -> CliResult<OperatorSpec<f64>> {
        let op = self
            .operator
            .as_ref()
            .ok_or_else(|| CliError::schema("operator", "missing"))?;
        let s = self
            .symbols
            .as_ref()
            .ok_or_else(|| CliError::schema("symbols", "missing"))?;
        let kind = op.kind()?;
        let symbols = SymbolConfig::new(
            s.psi1.build("symbols.psi1")?,
            s.psi2.build("symbols.psi2")?,
            s.phi.build("symbols.phi")?,
            kind,
            grid,
        )
        .ctx("symbols")?;
        match op.dilation_r {
            Some(r) => OperatorSpec::dilated(symbols, r).ctx("operator.dilation_r"),
            None => Ok(OperatorSpec::new(symbols)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_errors_name_the_key() {
        let e = RunConfig::parse(
            r#"{"symbols": {"psi1": {"poly": [1]}, "psi2": {"poly": [0]}, "phi": {"poly": [0, "x"]}}}"#,
        )
        .unwrap_err();
        match e {
            CliError::Schema { path, .. } => assert!(path.starts_with("symbols.phi.poly[1]"), "{path}"),
            e => panic!("{e:?}"),
        }
        let e = RunConfig::parse(r#"{"weight": {"alpha": 1}, "colour": 3}"#).unwrap_err();
        assert!(matches!(e, CliError::Schema { .. }));
        let e = RunConfig::parse(r#"{"space": {"qk": {"p": 2, "q": 0, "kernel": {"power_s": 0.5}, "gamma": 1}}}"#)
            .unwrap_err();
        assert!(matches!(e, CliError::Schema { ref path, .. } if path == "space.qk.gamma"));
    }

    #[test]
    fn literals() {
        let c = RunConfig::parse(
            r#"{"function": {"mobius": [{"c": [1, 0], "a": 0.5, "beta": 2}]}, "space": "hinf",
                "operator": {"kind": "Tmn", "m": 0, "n": 2}}"#,
        )
        .unwrap();
        let f = c.function().unwrap();
        assert!((f.eval(Complex64::new(0.0, 0.0)).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(c.space().unwrap(), Space::Hinf));
        assert_eq!(c.operator.unwrap().kind().unwrap(), OperatorKind::Tmn { m: 0, n: 2 });
    }

    #[test]
    fn hash_ignores_key_order() {
        let a = RunConfig::parse(r#"{"weight": {"alpha": 1}, "seed": 3}"#).unwrap();
        let b = RunConfig::parse(r#"{"seed": 3, "weight": {"alpha": 1}}"#).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = RunConfig::parse(r#"{"seed": 4, "weight": {"alpha": 1}}"#).unwrap();
        assert_ne!(a.hash(), c.hash());
    }
}
