//! Local singularity data for curves and the Ext-vanishing predictor.
//!
//! Monodromy eigenvalues are symbolic: only whether an eigenvalue equals 1
//! matters, so they are tagged `unity` or `nonunity`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypersurface::ext_module_dims;
use crate::models::{build, ModelId};
use crate::rational::Rational;
use crate::table::TruncationTable;
use crate::weyl::WeylElement;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurvePoint {
    Cusp {
        #[serde(default)]
        label: String,
    },
    /// `branches` smooth branches meeting transversally; `planar` when they
    /// are lines in a plane.
    Multicross {
        branches: usize,
        #[serde(default = "yes")]
        planar: bool,
        #[serde(default)]
        label: String,
    },
}

fn yes() -> bool {
    true
}

impl CurvePoint {
    pub fn cusp() -> Self {
        CurvePoint::Cusp { label: String::new() }
    }

    pub fn multicross(branches: usize) -> Self {
        CurvePoint::Multicross { branches, planar: true, label: String::new() }
    }

    /// Preimages in the normalization.
    pub fn branch_count(&self) -> usize {
        match self {
            CurvePoint::Cusp { .. } => 1,
            CurvePoint::Multicross { branches, .. } => *branches,
        }
    }

    pub fn is_cusp(&self) -> bool {
        matches!(self, CurvePoint::Cusp { .. })
    }
}

/// A monodromy eigenvalue, up to the one distinction that matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Eigenvalue {
    Unity,
    /// Not equal to 1; the string is free-form (e.g. `e^{πi}`).
    NonUnity(String),
}

impl Serialize for Eigenvalue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Eigenvalue::Unity => s.serialize_str("unity"),
            Eigenvalue::NonUnity(d) if d.is_empty() => s.serialize_str("nonunity"),
            Eigenvalue::NonUnity(d) => s.serialize_str(&format!("nonunity:{d}")),
        }
    }
}

impl<'de> Deserialize<'de> for Eigenvalue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "unity" => Ok(Eigenvalue::Unity),
            "nonunity" => Ok(Eigenvalue::NonUnity(String::new())),
            other => other
                .strip_prefix("nonunity:")
                .map(|r| Eigenvalue::NonUnity(r.to_string()))
                .ok_or_else(|| serde::de::Error::custom(format!("unknown eigenvalue tag `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LocalSystemSpec {
    #[serde(default)]
    pub point_supported: bool,
    /// `eigenvalues[p][b]`: eigenvalues on branch `b` over point `p`.
    #[serde(default)]
    pub eigenvalues: Vec<Vec<Vec<Eigenvalue>>>,
}

/// A curve given by its singular points, with a module on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveSpec {
    pub points: Vec<CurvePoint>,
    pub local_system: LocalSystemSpec,
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CurveSpec = serde_json::from_str(text).map_err(|e| Error::MalformedSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Every point carries one eigenvalue list per branch, and lists are
    /// nonempty unless the module is point-supported.
    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            if let CurvePoint::Multicross { branches, .. } = p {
                if *branches < 2 {
                    return Err(Error::MalformedSpec(format!("point {i}: a multicross needs at least 2 branches")));
                }
            }
        }
        let ls = &self.local_system;
        if ls.point_supported {
            return Ok(());
        }
        if ls.eigenvalues.len() != self.points.len() {
            return Err(Error::MalformedSpec(format!(
                "{} eigenvalue groups for {} points",
                ls.eigenvalues.len(),
                self.points.len()
            )));
        }
        for (i, (p, per_branch)) in self.points.iter().zip(&ls.eigenvalues).enumerate() {
            if per_branch.len() != p.branch_count() {
                return Err(Error::MalformedSpec(format!(
                    "point {i}: {} branch lists for {} branches",
                    per_branch.len(),
                    p.branch_count()
                )));
            }
            if per_branch.iter().any(Vec::is_empty) {
                return Err(Error::MalformedSpec(format!("point {i}: empty eigenvalue list")));
            }
        }
        Ok(())
    }

    /// Same local system tag on every branch of every point.
    pub fn uniform(points: Vec<CurvePoint>, ev: Eigenvalue) -> Self {
        let eigenvalues = points.iter().map(|p| vec![vec![ev.clone()]; p.branch_count()]).collect();
        CurveSpec { points, local_system: LocalSystemSpec { point_supported: false, eigenvalues } }
    }

    pub fn point_supported(points: Vec<CurvePoint>) -> Self {
        CurveSpec { points, local_system: LocalSystemSpec { point_supported: true, eigenvalues: Vec::new() } }
    }
}

/// True when no branch over a non-cuspidal point has eigenvalue 1.
pub fn completely_nontrivial(spec: &CurveSpec) -> Result<bool> {
    spec.validate()?;
    if spec.local_system.point_supported {
        return Ok(true);
    }
    Ok(spec
        .points
        .iter()
        .zip(&spec.local_system.eigenvalues)
        .filter(|(p, _)| !p.is_cusp())
        .all(|(_, branches)| branches.iter().flatten().all(|e| *e != Eigenvalue::Unity)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Vanishes,
    NotVanishes,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Vanishes => "vanishes",
            Verdict::NotVanishes => "not-vanishes",
            Verdict::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub verdict: Verdict,
    pub justification: String,
}

/// Predicts whether `Ext^{≥1}(D_X, M)` vanishes.
///
/// `NotVanishes` is only claimed for a simple module with a trivial
/// eigenvalue on a branch of a planar multicross point.
pub fn predict(spec: &CurveSpec, simple: bool) -> Result<Prediction> {
    let say = |verdict, why: &str| Prediction { verdict, justification: why.to_string() };
    spec.validate()?;
    if spec.local_system.point_supported {
        return Ok(say(Verdict::Vanishes, "module supported at points"));
    }
    if spec.points.iter().all(CurvePoint::is_cusp) {
        return Ok(say(Verdict::Vanishes, "only smooth or cuspidal points"));
    }
    if completely_nontrivial(spec)? {
        return Ok(say(Verdict::Vanishes, "completely non-trivial monodromy at every non-cuspidal branch"));
    }
    let planar_unity = spec.points.iter().zip(&spec.local_system.eigenvalues).any(|(p, branches)| {
        matches!(p, CurvePoint::Multicross { planar: true, .. })
            && branches.iter().flatten().any(|e| *e == Eigenvalue::Unity)
    });
    if simple && planar_unity {
        return Ok(say(Verdict::NotVanishes, "simple module with trivial monodromy at a planar multicross branch"));
    }
    Ok(say(Verdict::Undetermined, "trivial monodromy outside the simple planar multicross case"))
}

/// `y·(x + y)(x + 2y)⋯(x + (n−1)y)`, the union of `n` distinct lines.
pub fn planar_model(n: usize) -> Result<WeylElement> {
    if n < 1 {
        return Err(Error::Precondition("planar model needs at least one line".into()));
    }
    let y = WeylElement::x(2, 1);
    let x = WeylElement::x(2, 0);
    let mut f = y.clone();
    for i in 1..n {
        f = &f * &(&x + &y.scale(&Rational::from_int(i as i64)));
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub lines: usize,
    pub model: String,
    pub f: String,
    pub predicted: Prediction,
    pub computed: TruncationTable,
    /// The computed table is zero exactly when vanishing was predicted
    /// (vacuously true for an undetermined prediction).
    pub agree: bool,
}

/// Compares [`predict`] with a direct `Ext¹` computation on `planar_model(n)`.
pub fn cross_check(n: usize, model: &ModelId, max_deg: u32) -> Result<CrossCheckReport> {
    let f = planar_model(n)?;
    let point = || vec![CurvePoint::multicross(n)];
    let spec = match model {
        ModelId::NLinesIcTrivial(_) => CurveSpec::uniform(point(), Eigenvalue::Unity),
        ModelId::NLinesIcKummer { lambda, .. } => {
            CurveSpec::uniform(point(), Eigenvalue::NonUnity(format!("e^(2πi·{lambda})")))
        }
        ModelId::Delta(2) => CurveSpec::point_supported(point()),
        other => return Err(Error::InvalidModel(format!("cross-check does not cover `{other}`"))),
    };
    let predicted = predict(&spec, true)?;
    let module = build(model)?;
    let computed = ext_module_dims(module.as_ref(), &f, max_deg, 3)?.ext1;
    let agree = match predicted.verdict {
        Verdict::Vanishes => computed.all_zero(),
        Verdict::NotVanishes => !computed.all_zero(),
        Verdict::Undetermined => true,
    };
    Ok(CrossCheckReport { lines: n, model: model.to_string(), f: f.to_string(), predicted, computed, agree })
}
