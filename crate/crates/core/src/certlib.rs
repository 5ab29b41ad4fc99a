//! Bound certificates as JSON documents, and their exact verification.
//!
//! A document has exactly the keys `version`, `space`, `kind`, `payload`,
//! `claimed_bound` and `metadata`. Every rational is a `"p/q"` string.
//! `kind` fixes the payload shape:
//!
//! * `lp-polynomial`: `{"coefficients": [...]}`, the coefficients of `F` in
//!   the normalized zonal basis of a Hamming, Johnson or sphere space. On
//!   the sphere, `"basis": "jacobi"` selects the Jacobi normalization
//!   `P_k^{(α,α)}`, `α = (n-3)/2`, instead of `P_k^n(1) = 1`.
//! * `sdp-dual` with `"program": "theta"`: the matrix `B` and level `t` of
//!   the θ (or θ′) dual of a graph.
//! * `sdp-dual` with `"program": "schrijver"`: the blocks of an X-side
//!   certificate of the binary triple SDP.
//!
//! Verification never trusts a float: LP certificates go through
//! [`verify_certificate`], θ duals through an exact PSD test, and
//! Schrijver certificates through [`exact_x_side_bound`]. The claimed
//! bound must equal the verified one exactly.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::delsarte::{verify_certificate, LpCertificate, SpaceSpec, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::orthopoly;
use crate::rational::{self, Rational};
use crate::schrijver::build_schrijver;
use crate::sdp::{exact_x_side_bound, RatBlock};
use crate::theta::{check_theta_dual, Graph, ThetaVariant};

pub const FORMAT_VERSION: &str = "1";

/// The `space` descriptor: a metric space (with its distance bound) or an
/// explicit graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CertSpace {
    Hamming { n: usize, q: u64, delta: usize },
    Johnson { n: usize, w: usize, delta: usize },
    Sphere { n: usize, max_cos: String },
    Graph { n: usize, edges: Vec<(usize, usize)> },
}

impl CertSpace {
    pub fn from_space(space: &SpaceSpec) -> Self {
        match space {
            SpaceSpec::Hamming { n, q, delta } => CertSpace::Hamming { n: *n, q: *q, delta: *delta },
            SpaceSpec::Johnson { n, w, delta } => CertSpace::Johnson { n: *n, w: *w, delta: *delta },
            SpaceSpec::Sphere { n, max_cos } => CertSpace::Sphere { n: *n, max_cos: rational::format(max_cos) },
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        CertSpace::Graph { n: g.n(), edges: g.edges().to_vec() }
    }

    pub fn to_space(&self) -> Result<SpaceSpec> {
        let space = match self {
            CertSpace::Hamming { n, q, delta } => SpaceSpec::hamming(*n, *q, *delta),
            CertSpace::Johnson { n, w, delta } => SpaceSpec::johnson(*n, *w, *delta),
            CertSpace::Sphere { n, max_cos } => SpaceSpec::sphere(*n, parse_at(max_cos, "space.max_cos")?),
            CertSpace::Graph { .. } => return Err(Error::domain("a graph is not a metric space descriptor")),
        };
        space.validate()?;
        Ok(space)
    }

    pub fn to_graph(&self) -> Result<Graph> {
        match self {
            CertSpace::Graph { n, edges } => Graph::new(*n, edges.iter().copied()),
            _ => Err(Error::domain("expected a graph space")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    LpPolynomial,
    SdpDual,
}

/// Normalization of the zonal basis in an `lp-polynomial` payload.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpBasis {
    /// `P_k(0) = 1` (distance form), i.e. `P_k^n(1) = 1` on the sphere.
    #[default]
    Normalized,
    /// Sphere only: `P_k^{(α,α)} = binom(k + α, k) P_k^n`.
    Jacobi,
}

impl LpBasis {
    fn is_normalized(&self) -> bool {
        *self == LpBasis::Normalized
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    LpPolynomial { coefficients: Vec<Rational>, basis: LpBasis },
    ThetaDual { variant: ThetaVariant, t: Rational, matrix: RatMatrix },
    SchrijverDual { blocks: Vec<RatBlock> },
}

impl Payload {
    pub fn kind(&self) -> CertKind {
        match self {
            Payload::LpPolynomial { .. } => CertKind::LpPolynomial,
            _ => CertKind::SdpDual,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateDocument {
    pub version: String,
    pub space: CertSpace,
    pub payload: Payload,
    pub claimed_bound: Rational,
    /// Free-form provenance.
    pub metadata: BTreeMap<String, Value>,
}

// Wire shapes.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: String,
    space: CertSpace,
    kind: CertKind,
    payload: Value,
    claimed_bound: String,
    metadata: BTreeMap<String, Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLp {
    #[serde(default, skip_serializing_if = "LpBasis::is_normalized")]
    basis: LpBasis,
    coefficients: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "program", rename_all = "lowercase", deny_unknown_fields)]
enum RawSdp {
    Theta { variant: ThetaVariant, t: String, matrix: Vec<Vec<String>> },
    Schrijver { blocks: Vec<RawBlock> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawBlock {
    Psd { matrix: Vec<Vec<String>> },
    Diagonal { diagonal: Vec<String> },
}

fn parse_at(s: &str, at: &str) -> Result<Rational> {
    rational::parse(s).map_err(|e| Error::Parse(format!("{at}: {e}")))
}

fn parse_vec(v: &[String], at: &str) -> Result<Vec<Rational>> {
    v.iter().enumerate().map(|(i, s)| parse_at(s, &format!("{at}[{i}]"))).collect()
}

fn parse_matrix(m: &[Vec<String>], at: &str) -> Result<RatMatrix> {
    m.iter().enumerate().map(|(i, row)| parse_vec(row, &format!("{at}[{i}]"))).collect()
}

fn fmt_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::format).collect()
}

fn fmt_matrix(m: &RatMatrix) -> Vec<Vec<String>> {
    m.iter().map(|r| fmt_vec(r)).collect()
}

impl CertificateDocument {
    pub fn new(space: CertSpace, payload: Payload, claimed_bound: Rational) -> Self {
        CertificateDocument {
            version: FORMAT_VERSION.to_string(),
            space,
            payload,
            claimed_bound,
            metadata: BTreeMap::new(),
        }
    }

    pub fn kind(&self) -> CertKind {
        self.payload.kind()
    }

    /// Parses a document; errors carry the line and column (JSON syntax)
    /// or the JSON path (bad rationals, wrong payload shape).
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawDocument = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("certificate, line {} column {}: {e}", e.line(), e.column())))?;
        let payload = match raw.kind {
            CertKind::LpPolynomial => {
                let p: RawLp = serde_json::from_value(raw.payload).map_err(|e| Error::Parse(format!("payload: {e}")))?;
                Payload::LpPolynomial {
                    coefficients: parse_vec(&p.coefficients, "payload.coefficients")?,
                    basis: p.basis,
                }
            }
            CertKind::SdpDual => {
                let p: RawSdp = serde_json::from_value(raw.payload).map_err(|e| Error::Parse(format!("payload: {e}")))?;
                match p {
                    RawSdp::Theta { variant, t, matrix } => Payload::ThetaDual {
                        variant,
                        t: parse_at(&t, "payload.t")?,
                        matrix: parse_matrix(&matrix, "payload.matrix")?,
                    },
                    RawSdp::Schrijver { blocks } => Payload::SchrijverDual {
                        blocks: blocks
                            .iter()
                            .enumerate()
                            .map(|(b, blk)| match blk {
                                RawBlock::Psd { matrix } => {
                                    parse_matrix(matrix, &format!("payload.blocks[{b}].matrix")).map(RatBlock::Dense)
                                }
                                RawBlock::Diagonal { diagonal } => {
                                    parse_vec(diagonal, &format!("payload.blocks[{b}].diagonal")).map(RatBlock::Diag)
                                }
                            })
                            .collect::<Result<_>>()?,
                    },
                }
            }
        };
        Ok(CertificateDocument {
            version: raw.version,
            space: raw.space,
            payload,
            claimed_bound: parse_at(&raw.claimed_bound, "claimed_bound")?,
            metadata: raw.metadata,
        })
    }

    /// Pretty-printed JSON with a trailing newline; canonical documents
    /// survive `parse` followed by `to_json` byte for byte.
    pub fn to_json(&self) -> String {
        let payload = match &self.payload {
            Payload::LpPolynomial { coefficients, basis } => {
                serde_json::to_value(RawLp { basis: *basis, coefficients: fmt_vec(coefficients) })
            }
            Payload::ThetaDual { variant, t, matrix } => serde_json::to_value(RawSdp::Theta {
                variant: *variant,
                t: rational::format(t),
                matrix: fmt_matrix(matrix),
            }),
            Payload::SchrijverDual { blocks } => serde_json::to_value(RawSdp::Schrijver {
                blocks: blocks
                    .iter()
                    .map(|b| match b {
                        RatBlock::Dense(m) => RawBlock::Psd { matrix: fmt_matrix(m) },
                        RatBlock::Diag(d) => RawBlock::Diagonal { diagonal: fmt_vec(d) },
                    })
                    .collect(),
            }),
        }
        .expect("payload serializes");
        let raw = RawDocument {
            version: self.version.clone(),
            space: self.space.clone(),
            kind: self.kind(),
            payload,
            claimed_bound: rational::format(&self.claimed_bound),
            metadata: self.metadata.clone(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn read(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn write(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

fn invalid(reason: impl Into<String>) -> Verdict {
    Verdict::Invalid { reason: reason.into(), witness: None }
}

fn claimed_matches(doc: &CertificateDocument, bound: Rational) -> Verdict {
    if bound == doc.claimed_bound {
        Verdict::Valid { bound }
    } else {
        invalid(format!("claimed bound {} differs from the certified bound {bound}", doc.claimed_bound))
    }
}

/// Checks a certificate exactly. `Err` is reserved for documents that do
/// not describe a checkable problem at all.
pub fn verify(doc: &CertificateDocument) -> Result<Verdict> {
    if doc.version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported certificate version {:?}", doc.version)));
    }
    match &doc.payload {
        Payload::LpPolynomial { coefficients, basis } => {
            let space = doc.space.to_space()?;
            let coefficients = match (basis, &space) {
                (LpBasis::Normalized, _) => coefficients.clone(),
                (LpBasis::Jacobi, SpaceSpec::Sphere { n, .. }) => coefficients
                    .iter()
                    .enumerate()
                    .map(|(k, f)| Ok(f * orthopoly::jacobi_scale(*n, k)?))
                    .collect::<Result<_>>()?,
                (LpBasis::Jacobi, _) => return Err(Error::domain("the Jacobi basis exists only on the sphere")),
            };
            verify_certificate(&LpCertificate { space, coefficients, claimed_bound: doc.claimed_bound.clone() })
        }
        Payload::ThetaDual { variant, t, matrix } => {
            let g = doc.space.to_graph()?;
            let checked = match variant {
                ThetaVariant::Theta => check_theta_dual(&g, matrix, t),
                ThetaVariant::ThetaPrime => check_theta_prime_dual(&g, matrix, t),
            };
            Ok(match checked {
                Ok(()) => claimed_matches(doc, t.clone()),
                Err(reason) => invalid(reason),
            })
        }
        Payload::SchrijverDual { blocks } => {
            let CertSpace::Hamming { n, q: 2, delta } = doc.space else {
                return Err(Error::domain("Schrijver certificates need a binary Hamming space"));
            };
            let sdp = build_schrijver(n, delta)?;
            match exact_x_side_bound(&sdp.problem, blocks, &sdp.y_bounds) {
                Ok(bound) => Ok(claimed_matches(doc, bound)),
                Err(Error::Domain(reason)) => Ok(invalid(reason)),
                Err(e) => Err(e),
            }
        }
    }
}

/// θ′ dual: as for θ, except non-edge entries only need to be `≤ -1`.
fn check_theta_prime_dual(g: &Graph, b: &RatMatrix, t: &Rational) -> std::result::Result<(), String> {
    let n = g.n();
    if b.len() != n || b.iter().any(|r| r.len() != n) {
        return Err(format!("expected a {n}×{n} matrix"));
    }
    if !linalg::is_symmetric(b) {
        return Err("matrix is not symmetric".into());
    }
    let diag = t - Rational::one();
    for i in 0..n {
        if b[i][i] != diag {
            return Err(format!("diagonal entry {i} is {} instead of t - 1 = {diag}", b[i][i]));
        }
        for j in i + 1..n {
            if !g.has_edge(i, j) && b[i][j] > -Rational::one() {
                return Err(format!("non-edge ({i}, {j}) has entry {} > -1", b[i][j]));
            }
        }
    }
    if !linalg::is_psd_exact(b) {
        return Err("matrix is not positive semidefinite".into());
    }
    Ok(())
}
