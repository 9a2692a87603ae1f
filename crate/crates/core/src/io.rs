//! JSON input formats. Every entry is an expression string read with
//! `zeta` standing for `ζ_N`, `N` being the file's `zeta_level`.

use serde::{Deserialize, Serialize};

use crate::cocycle::{Action, Cocycle, Elem, GammaAction, Target, TwistedFormDesc};
use crate::cyclo::CycloNum;
use crate::diffmod::RMat;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::parse::parse;
use crate::phihopf::{Algebra, FinGroup, FinHopfGalois, PhiObject, PhiType, Signature};
use crate::ratfunc::RatFunc;

fn default_level() -> u32 {
    1
}

/// `{"n", "zeta_level", "entries", "traceless"?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    #[serde(default = "default_level")]
    pub zeta_level: u32,
    pub entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traceless: Option<bool>,
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("malformed JSON: {e}")))
}

/// Parses a rectangular table of expressions.
pub fn parse_entries(entries: &[Vec<String>], level: u32) -> Result<RMat> {
    let cols = entries.first().map_or(0, |r| r.len());
    if entries.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("rows have different lengths".into()));
    }
    let mut data = Vec::with_capacity(entries.len() * cols);
    for (i, row) in entries.iter().enumerate() {
        for (j, text) in row.iter().enumerate() {
            let v = parse(text, level).map_err(|e| Error::Invalid(format!("entry [{i}][{j}]: {e}")))?;
            data.push(v);
        }
    }
    Ok(Matrix::new(entries.len(), cols, data))
}

fn parse_vector(entries: &[String], level: u32) -> Result<Vec<RatFunc>> {
    entries
        .iter()
        .enumerate()
        .map(|(i, t)| parse(t, level).map_err(|e| Error::Invalid(format!("entry [{i}]: {e}"))))
        .collect()
}

impl MatrixFile {
    pub fn from_json(text: &str) -> Result<Self> {
        from_json(text)
    }

    /// The `n×n` matrix, with the `traceless` flag enforced when set.
    pub fn matrix(&self) -> Result<RMat> {
        let m = parse_entries(&self.entries, self.zeta_level)?;
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "declared n = {} but entries are {}×{}",
                self.n,
                m.rows(),
                m.cols()
            )));
        }
        if self.traceless == Some(true) && !m.trace().is_zero() {
            return Err(Error::Invalid("matrix is flagged traceless but has nonzero trace".into()));
        }
        Ok(m)
    }

    pub fn from_matrix(m: &RMat) -> Self {
        let level = m.level();
        MatrixFile {
            n: m.rows(),
            zeta_level: level,
            entries: format_entries(m, level),
            traceless: None,
        }
    }
}

/// Entries printed at a common level.
pub fn format_entries(m: &RMat, level: u32) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|f| f.at_level(level).to_string()).collect())
        .collect()
}

/// A constant printed at `level`.
pub fn format_constant(c: &CycloNum, level: u32) -> String {
    c.at_level(level).to_string()
}

/// `{"cyclic": k}` or an explicit table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Cyclic { cyclic: usize },
    Table { labels: Vec<String>, table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn group(&self) -> Result<FinGroup> {
        match self {
            GroupSpec::Cyclic { cyclic } if *cyclic >= 1 => Ok(FinGroup::cyclic(*cyclic)),
            GroupSpec::Cyclic { .. } => Err(Error::Invalid("cyclic group order must be positive".into())),
            GroupSpec::Table { labels, table } => FinGroup::new(labels.clone(), table.clone()),
        }
    }

    pub fn from_group(g: &FinGroup) -> Self {
        GroupSpec::Table { labels: g.labels().to_vec(), table: g.table().to_vec() }
    }
}

/// A Hopf-Galois extension given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfGaloisFile {
    #[serde(default = "default_level")]
    pub zeta_level: u32,
    pub group: GroupSpec,
    /// `k×k²`; column `i·k+j` holds `e_i·e_j`.
    pub mult: Vec<Vec<String>>,
    pub unit: Vec<String>,
    pub derivation: Vec<Vec<String>>,
    /// `(k·g)×k`; row `s·g+h` is the `e_s⊗e_h` coordinate.
    pub coaction: Vec<Vec<String>>,
}

impl HopfGaloisFile {
    pub fn from_json(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn extension(&self) -> Result<FinHopfGalois> {
        let l = self.zeta_level;
        let alg = Algebra::new(
            parse_entries(&self.mult, l)?,
            parse_vector(&self.unit, l)?,
            parse_entries(&self.derivation, l)?,
        )?;
        FinHopfGalois::new(alg, self.group.group()?, parse_entries(&self.coaction, l)?)
    }

    pub fn from_extension(s: &FinHopfGalois) -> Self {
        let level = [s.alg.mult().level(), s.alg.derivation().level(), s.coaction.level()]
            .into_iter()
            .fold(1, num_integer::lcm);
        HopfGaloisFile {
            zeta_level: level,
            group: GroupSpec::from_group(s.group()),
            mult: format_entries(s.alg.mult(), level),
            unit: s.alg.unit().iter().map(|f| f.at_level(level).to_string()).collect(),
            derivation: format_entries(s.alg.derivation(), level),
            coaction: format_entries(&s.coaction, level),
        }
    }
}

/// A named or explicit extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExtensionSpec {
    Kummer { kummer: usize },
    Split { split: GroupSpec },
    Explicit(HopfGaloisFile),
}

impl ExtensionSpec {
    pub fn extension(&self) -> Result<FinHopfGalois> {
        match self {
            ExtensionSpec::Kummer { kummer } if (1..=crate::cyclo::MAX_LEVEL as usize).contains(kummer) => {
                Ok(FinHopfGalois::kummer(*kummer))
            }
            ExtensionSpec::Kummer { .. } => Err(Error::Invalid("Kummer degree out of range".into())),
            ExtensionSpec::Split { split } => Ok(FinHopfGalois::split(split.group()?)),
            ExtensionSpec::Explicit(f) => f.extension(),
        }
    }
}

/// A plain Φ-object over `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiObjectFile {
    #[serde(default = "default_level")]
    pub zeta_level: u32,
    pub derivation: Vec<Vec<String>>,
    #[serde(default = "one")]
    pub hopf_dim: usize,
    #[serde(default)]
    pub signatures: Vec<Signature>,
    #[serde(default)]
    pub maps: Vec<Vec<Vec<String>>>,
}

fn one() -> usize {
    1
}

impl PhiObjectFile {
    pub fn from_json(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn object(&self) -> Result<PhiObject> {
        let l = self.zeta_level;
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                parse_entries(m, l).map_err(|e| Error::Invalid(format!("structure map {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let ty = PhiType { hopf_dim: self.hopf_dim, signatures: self.signatures.clone() };
        PhiObject::new(parse_entries(&self.derivation, l)?, ty, maps)
    }

    pub fn from_object(m: &PhiObject) -> Self {
        let level = m.maps.iter().map(|x| x.level()).fold(m.derivation.level(), num_integer::lcm);
        PhiObjectFile {
            zeta_level: level,
            derivation: format_entries(&m.derivation, level),
            hopf_dim: m.ty.hopf_dim,
            signatures: m.ty.signatures.clone(),
            maps: m.maps.iter().map(|x| format_entries(x, level)).collect(),
        }
    }
}

/// `"trivial"` or one of the explicit action kinds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionSpec {
    Named(String),
    Exponents { exponents: Vec<Vec<Vec<i64>>> },
    Scale { scale: Vec<String> },
    Conjugation { conjugation: Vec<Vec<Vec<String>>> },
}

impl Default for ActionSpec {
    fn default() -> Self {
        ActionSpec::Named("trivial".into())
    }
}

/// Parses `G_m`, `G_m^r`, `mu(j)`, `G_a` or `GL(m)`.
pub fn parse_target(text: &str) -> Result<Target> {
    let t = text.trim();
    let inner = |prefix: &str| -> Option<usize> {
        t.strip_prefix(prefix)?.strip_suffix(')')?.trim().parse().ok()
    };
    let target = match t {
        "G_m" => Some(Target::Torus(1)),
        "G_a" => Some(Target::Ga),
        _ => {
            if let Some(r) = t.strip_prefix("G_m^") {
                r.parse().ok().filter(|&r| r >= 1).map(Target::Torus)
            } else if let Some(j) = inner("mu(") {
                (j >= 1).then_some(Target::Mu(j as u64))
            } else if let Some(m) = inner("GL(") {
                (m >= 1).then_some(Target::Gl(m))
            } else {
                None
            }
        }
    };
    target.ok_or_else(|| Error::Invalid(format!("unknown target '{t}'")))
}

fn parse_constant(text: &str, level: u32) -> Result<CycloNum> {
    parse(text, level)?
        .to_constant()
        .ok_or_else(|| Error::Invalid(format!("'{text}' is not a constant")))
}

fn parse_constant_matrix(rows: &[Vec<String>], level: u32) -> Result<Elem> {
    parse_entries(rows, level)?
        .to_constants()
        .ok_or_else(|| Error::Invalid("matrix entries must be constants".into()))
}

/// A scalar or a matrix of constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemSpec {
    Scalar(String),
    Matrix(Vec<Vec<String>>),
}

impl ElemSpec {
    /// Scalars become `1×1`, or diagonal for a torus of rank above 1.
    pub fn elem(&self, level: u32) -> Result<Elem> {
        match self {
            ElemSpec::Scalar(s) => Ok(Matrix::scalar(1, parse_constant(s, level)?)),
            ElemSpec::Matrix(rows) => parse_constant_matrix(rows, level),
        }
    }
}

/// One file describing an `H¹` computation; which fields are needed depends
/// on the command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H1File {
    #[serde(default = "default_level")]
    pub zeta_level: u32,
    pub group: GroupSpec,
    pub target: String,
    #[serde(default)]
    pub action: ActionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<Vec<ElemSpec>>,
    /// A second cocycle to compare against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<Vec<ElemSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ElemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<PhiObjectFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twisted: Option<PhiObjectFile>,
    /// Generator form of `φ: N⊗S → M⊗S`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iso: Option<Vec<Vec<String>>>,
}

fn missing(field: &str) -> Error {
    Error::Invalid(format!("missing field '{field}'"))
}

impl H1File {
    pub fn from_json(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn action(&self) -> Result<GammaAction> {
        let group = self.group.group()?;
        let target = parse_target(&self.target)?;
        let l = self.zeta_level;
        let action = match &self.action {
            ActionSpec::Named(s) if s == "trivial" => Action::Trivial,
            ActionSpec::Named(s) => return Err(Error::Invalid(format!("unknown action '{s}'"))),
            ActionSpec::Exponents { exponents } => Action::Exponents(exponents.clone()),
            ActionSpec::Scale { scale } => {
                Action::Scale(scale.iter().map(|s| parse_constant(s, l)).collect::<Result<_>>()?)
            }
            ActionSpec::Conjugation { conjugation } => Action::Conjugation(
                conjugation.iter().map(|m| parse_constant_matrix(m, l)).collect::<Result<_>>()?,
            ),
        };
        GammaAction::new(group, target, action)
    }

    fn cocycle_from(&self, values: &[ElemSpec], act: &GammaAction) -> Result<Cocycle> {
        if values.len() != act.group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a group of order {}",
                values.len(),
                act.group.order()
            )));
        }
        let values = values
            .iter()
            .map(|v| {
                let e = v.elem(self.zeta_level)?;
                // a scalar on a torus of rank r stands for r equal entries
                Ok(match (&act.target, v) {
                    (Target::Torus(r), ElemSpec::Scalar(_)) => Matrix::scalar(*r, e.get(0, 0).clone()),
                    _ => e,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Cocycle { values })
    }

    pub fn cocycle(&self, act: &GammaAction) -> Result<Cocycle> {
        self.cocycle_from(self.cocycle.as_deref().ok_or_else(|| missing("cocycle"))?, act)
    }

    pub fn other(&self, act: &GammaAction) -> Result<Option<Cocycle>> {
        self.other.as_deref().map(|v| self.cocycle_from(v, act)).transpose()
    }

    pub fn witness(&self) -> Result<Option<Elem>> {
        self.witness.as_ref().map(|w| w.elem(self.zeta_level)).transpose()
    }

    pub fn extension(&self) -> Result<FinHopfGalois> {
        self.extension.as_ref().ok_or_else(|| missing("extension"))?.extension()
    }

    /// The base object, by default trivial of the rank the target acts on.
    pub fn base(&self, act: &GammaAction) -> Result<PhiObject> {
        match &self.base {
            Some(b) => b.object(),
            None => Ok(PhiObject::trivial(act.gl_dim())),
        }
    }

    pub fn twisted_form(&self, act: &GammaAction) -> Result<TwistedFormDesc> {
        let twisted = self.twisted.as_ref().ok_or_else(|| missing("twisted"))?.object()?;
        let iso = parse_entries(self.iso.as_ref().ok_or_else(|| missing("iso"))?, self.zeta_level)?;
        Ok(TwistedFormDesc { base: self.base(act)?, twisted, extension: self.extension()?, iso })
    }
}
