//! JSON records for tensor points, witness sets and certificates. Complex
//! numbers are `[re, im]` pairs.

use num_complex::Complex64;
use secant_core::certify::{Certificate, CertificateKind};
use secant_core::homotopy::{DegreeReport, Line, WitnessPoint, WitnessSet};
use secant_core::linalg::CMatrix;
use secant_core::tensor::RankOneParams;
use secant_core::{SecantSpec, TensorPoint};
use serde::{Deserialize, Serialize};

pub type Pair = [f64; 2];

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

fn pair(z: &Complex64) -> Pair {
    [z.re, z.im]
}

fn pairs(v: &[Complex64]) -> Vec<Pair> {
    v.iter().map(pair).collect()
}

fn complex(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn complexes(v: &[Pair]) -> Vec<Complex64> {
    v.iter().map(complex).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecJson {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub s: usize,
}

impl From<SecantSpec> for SpecJson {
    fn from(s: SecantSpec) -> Self {
        SpecJson {
            m: s.m,
            k: s.k,
            n: s.n,
            s: s.s,
        }
    }
}

impl TryFrom<SpecJson> for SecantSpec {
    type Error = FormatError;

    fn try_from(s: SpecJson) -> Result<Self, FormatError> {
        SecantSpec::new(s.m, s.k, s.n, s.s).map_err(|e| invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub v: Vec<Pair>,
    /// Rows of `E`.
    pub e: Vec<Vec<Pair>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorPointJson {
    pub spec: SpecJson,
    pub coords: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<ParamsJson>>,
}

impl From<&TensorPoint> for TensorPointJson {
    fn from(t: &TensorPoint) -> Self {
        TensorPointJson {
            spec: t.spec.into(),
            coords: pairs(&t.coords),
            params: t.params.as_ref().map(|ps| {
                ps.iter()
                    .map(|p| ParamsJson {
                        v: pairs(&p.v),
                        e: p.e.row_iter().map(|r| r.iter().map(pair).collect()).collect(),
                    })
                    .collect()
            }),
        }
    }
}

impl TryFrom<TensorPointJson> for TensorPoint {
    type Error = FormatError;

    fn try_from(j: TensorPointJson) -> Result<Self, FormatError> {
        let spec = SecantSpec::try_from(j.spec)?;
        if j.coords.len() != spec.num_coords() {
            return Err(invalid(format!(
                "expected {} coordinates, found {}",
                spec.num_coords(),
                j.coords.len()
            )));
        }
        let params = match j.params {
            None => None,
            Some(ps) => {
                let mut out = Vec::with_capacity(ps.len());
                for p in ps {
                    let rows = spec.wedge_order();
                    let cols = spec.w_dim();
                    if p.v.len() != spec.v_dim() || p.e.len() != rows || p.e.iter().any(|r| r.len() != cols) {
                        return Err(invalid("summand parameters do not match the spec"));
                    }
                    let e = CMatrix::from_fn(rows, cols, |r, c| complex(&p.e[r][c]));
                    out.push(RankOneParams { v: complexes(&p.v), e });
                }
                Some(out)
            }
        };
        Ok(TensorPoint {
            spec,
            coords: complexes(&j.coords),
            params,
        })
    }
}

pub fn tensor_point_to_string(t: &TensorPoint) -> String {
    serde_json::to_string_pretty(&TensorPointJson::from(t)).expect("tensor points serialize")
}

pub fn tensor_point_from_str(text: &str) -> Result<TensorPoint, FormatError> {
    TensorPoint::try_from(serde_json::from_str::<TensorPointJson>(text)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineJson {
    pub a: Vec<Pair>,
    pub b: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub image: Vec<Pair>,
    pub t: Pair,
    pub lambda: Pair,
    #[serde(default)]
    pub params: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSetJson {
    pub spec: SpecJson,
    pub line: LineJson,
    pub points: Vec<PointJson>,
    pub seed: u64,
    pub degree: usize,
    pub trace_residual: Option<f64>,
    #[serde(default)]
    pub certified: bool,
    #[serde(default)]
    pub loops: usize,
    #[serde(default)]
    pub path_failures: usize,
    pub dedup_tol: f64,
}

impl WitnessSetJson {
    pub fn new(spec: SecantSpec, report: &DegreeReport) -> Self {
        let w = &report.witness;
        WitnessSetJson {
            spec: spec.into(),
            line: LineJson {
                a: pairs(&w.line.a),
                b: pairs(&w.line.b),
            },
            points: w
                .points
                .iter()
                .map(|p| PointJson {
                    image: pairs(&p.image),
                    t: pair(&p.t),
                    lambda: pair(&p.lambda),
                    params: pairs(&p.params),
                })
                .collect(),
            seed: w.seed,
            degree: report.degree,
            trace_residual: report.trace_residual,
            certified: report.certified,
            loops: report.loops,
            path_failures: report.path_failures,
            dedup_tol: w.dedup_tol,
        }
    }

    pub fn witness_set(&self) -> Result<WitnessSet, FormatError> {
        let nc = SecantSpec::try_from(self.spec)?.num_coords();
        if self.line.a.len() != nc || self.line.b.len() != nc || self.points.iter().any(|p| p.image.len() != nc) {
            return Err(invalid("witness set does not match the spec"));
        }
        if self.points.len() != self.degree {
            return Err(invalid("degree differs from the number of points"));
        }
        let line = Line {
            a: complexes(&self.line.a),
            b: complexes(&self.line.b),
        };
        let mut w = WitnessSet::new(line, self.seed, self.dedup_tol);
        w.points = self
            .points
            .iter()
            .map(|p| WitnessPoint {
                params: complexes(&p.params),
                t: complex(&p.t),
                lambda: complex(&p.lambda),
                image: complexes(&p.image),
            })
            .collect();
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub input: String,
    pub line_seed: u64,
    pub degree: usize,
    /// `zero`, `perfect_power`, `irreducible` or `inconclusive`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<usize>,
    pub primes: Vec<u64>,
    pub degree_multisets: Vec<Vec<usize>>,
    #[serde(default)]
    pub feasible_splits: Vec<usize>,
    #[serde(default)]
    pub degree_gap: bool,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        let (kind, base_degree, exponent) = match c.kind {
            CertificateKind::Zero => ("zero", None, None),
            CertificateKind::PerfectPower { base_degree, exponent } => {
                ("perfect_power", Some(base_degree), Some(exponent))
            }
            CertificateKind::Irreducible => ("irreducible", None, None),
            CertificateKind::Inconclusive => ("inconclusive", None, None),
        };
        CertificateJson {
            input: c.input.clone(),
            line_seed: c.line_seed,
            degree: c.degree,
            kind: kind.to_string(),
            base_degree,
            exponent,
            primes: c.primes.clone(),
            degree_multisets: c.degree_multisets.clone(),
            feasible_splits: c.feasible_splits.clone(),
            degree_gap: c.degree_gap,
        }
    }
}

impl TryFrom<CertificateJson> for Certificate {
    type Error = FormatError;

    fn try_from(j: CertificateJson) -> Result<Self, FormatError> {
        let kind = match (j.kind.as_str(), j.base_degree, j.exponent) {
            ("zero", None, None) => CertificateKind::Zero,
            ("perfect_power", Some(base_degree), Some(exponent)) => CertificateKind::PerfectPower { base_degree, exponent },
            ("irreducible", None, None) => CertificateKind::Irreducible,
            ("inconclusive", None, None) => CertificateKind::Inconclusive,
            _ => return Err(invalid(format!("unknown certificate kind {:?}", j.kind))),
        };
        if j.primes.len() != j.degree_multisets.len() {
            return Err(invalid("one degree multiset per prime expected"));
        }
        Ok(Certificate {
            input: j.input,
            line_seed: j.line_seed,
            degree: j.degree,
            kind,
            primes: j.primes,
            degree_multisets: j.degree_multisets,
            feasible_splits: j.feasible_splits,
            degree_gap: j.degree_gap,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use secant_core::tensor::sample_secant_point;

    #[test]
    fn tensor_point_round_trip() {
        let spec = SecantSpec::new(2, 1, 4, 2).unwrap();
        let t = sample_secant_point(&spec, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let back = tensor_point_from_str(&tensor_point_to_string(&t)).unwrap();
        assert_eq!(back, t);
        let bare = TensorPoint { params: None, ..t };
        let text = tensor_point_to_string(&bare);
        assert!(!text.contains("params"));
        assert_eq!(tensor_point_from_str(&text).unwrap(), bare);
    }

    #[test]
    fn tensor_point_shape_is_checked() {
        let text = r#"{"spec":{"m":1,"k":0,"n":1,"s":1},"coords":[[1,0],[0,0],[0,0]]}"#;
        assert!(matches!(tensor_point_from_str(text), Err(FormatError::Invalid(_))));
        let text = r#"{"spec":{"m":1,"k":0,"n":1,"s":1},"coords":[[1,0],[0,0],[0,0],[2,1]]}"#;
        let t = tensor_point_from_str(text).unwrap();
        assert_eq!(t.coords[3], Complex64::new(2.0, 1.0));
        assert!(tensor_point_from_str("{").is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let c = Certificate {
            input: "box:s=4".into(),
            line_seed: 9,
            degree: 12,
            kind: CertificateKind::PerfectPower {
                base_degree: 6,
                exponent: 2,
            },
            primes: vec![],
            degree_multisets: vec![],
            feasible_splits: vec![],
            degree_gap: false,
        };
        let text = serde_json::to_string(&CertificateJson::from(&c)).unwrap();
        assert!(text.contains(r#""kind":"perfect_power""#));
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Certificate::try_from(back).unwrap(), c);
    }
}
