//! Golden certificates, the JSON round trip and mutation robustness.

use std::path::PathBuf;

use codebounds::certlib::{verify, CertSpace, CertificateDocument, LpBasis, Payload};
use codebounds::delsarte::{SpaceSpec, Verdict};
use codebounds::rational::{self, frac, int, Rational};
use codebounds::schrijver::schrijver_bound;
use codebounds::sdp::RatBlock;
use codebounds::theta::{pentagon_dual_matrix, Graph, ThetaVariant};
use codebounds::Error;
use serde_json::Value;

fn certs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../certs")
}

fn e8_document() -> CertificateDocument {
    let coefficients = [(1, 1), (16, 7), (200, 63), (832, 231), (1216, 429), (5120, 3003), (2560, 4641)]
        .iter()
        .map(|&(p, q)| frac(p, q))
        .collect();
    let mut doc = CertificateDocument::new(
        CertSpace::from_space(&SpaceSpec::sphere(8, frac(1, 2))),
        Payload::LpPolynomial { coefficients, basis: LpBasis::Jacobi },
        int(240),
    );
    doc.metadata.insert(
        "polynomial".into(),
        Value::from("(320/3) (t - 1/2) t^2 (t + 1/2)^2 (t + 1) in the Jacobi basis P_k^(5/2,5/2)"),
    );
    doc.metadata.insert("problem".into(), Value::from("kissing number in dimension 8"));
    doc
}

fn pentagon_document() -> CertificateDocument {
    let t = frac(2_795_085, 1_250_000);
    let matrix = pentagon_dual_matrix(&t).unwrap();
    let mut doc = CertificateDocument::new(
        CertSpace::from_graph(&Graph::cycle(5).unwrap()),
        Payload::ThetaDual { variant: ThetaVariant::Theta, t: t.clone(), matrix },
        t,
    );
    doc.metadata.insert("problem".into(), Value::from("Lovász θ of the pentagon, an upper bound just above √5"));
    doc
}

fn read_golden(name: &str) -> (String, CertificateDocument) {
    let text = std::fs::read_to_string(certs_dir().join(name)).unwrap();
    let doc = CertificateDocument::parse(&text).unwrap();
    (text, doc)
}

#[test]
#[ignore = "rewrites the shipped certificates"]
fn regenerate_golden_certificates() {
    e8_document().write(certs_dir().join("e8_kissing.json")).unwrap();
    pentagon_document().write(certs_dir().join("pentagon_theta.json")).unwrap();
}

#[test]
fn golden_files_match_their_construction() {
    assert_eq!(read_golden("e8_kissing.json").1, e8_document());
    assert_eq!(read_golden("pentagon_theta.json").1, pentagon_document());
}

#[test]
fn golden_files_round_trip_byte_for_byte() {
    for name in ["e8_kissing.json", "pentagon_theta.json"] {
        let (text, doc) = read_golden(name);
        assert_eq!(doc.to_json(), text, "{name}");
        let keys: Vec<String> = serde_json::from_str::<serde_json::Map<String, Value>>(&text)
            .unwrap()
            .keys()
            .cloned()
            .collect();
        let mut expect = vec!["claimed_bound", "kind", "metadata", "payload", "space", "version"];
        expect.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, expect);
    }
}

#[test]
fn e8_golden_is_valid_with_bound_240() {
    let (_, doc) = read_golden("e8_kissing.json");
    assert_eq!(verify(&doc).unwrap(), Verdict::Valid { bound: int(240) });
}

#[test]
fn pentagon_golden_is_valid() {
    let (_, doc) = read_golden("pentagon_theta.json");
    let v = verify(&doc).unwrap();
    let bound = v.bound().expect("valid").clone();
    assert!(bound.clone() <= rational::parse("2.2360680").unwrap());
    assert!(&bound * &bound > int(5));
}

#[test]
fn e8_in_the_normalized_basis() {
    let coefficients = [(1, 1), (8, 1), (25, 1), (52, 1), (133, 2), (60, 1), (55, 2)].iter().map(|&(p, q)| frac(p, q)).collect();
    let doc = CertificateDocument::new(
        CertSpace::from_space(&SpaceSpec::sphere(8, frac(1, 2))),
        Payload::LpPolynomial { coefficients, basis: LpBasis::Normalized },
        int(240),
    );
    assert!(!doc.to_json().contains("basis"));
    assert_eq!(verify(&doc).unwrap(), Verdict::Valid { bound: int(240) });
    let mut hamming = doc.clone();
    hamming.space = CertSpace::from_space(&SpaceSpec::hamming(6, 2, 3));
    hamming.payload = Payload::LpPolynomial { coefficients: vec![int(1)], basis: LpBasis::Jacobi };
    assert!(verify(&hamming).is_err());
}

#[test]
fn corrupted_coefficient_is_invalid() {
    let mut doc = e8_document();
    if let Payload::LpPolynomial { coefficients, .. } = &mut doc.payload {
        coefficients[3] = frac(832, 230);
    }
    assert!(!verify(&doc).unwrap().is_valid());
}

/// Every rational slot of a payload, as a mutable reference.
fn payload_slots(p: &mut Payload) -> Vec<&mut Rational> {
    match p {
        Payload::LpPolynomial { coefficients, .. } => coefficients.iter_mut().collect(),
        Payload::ThetaDual { t, matrix, .. } => std::iter::once(t).chain(matrix.iter_mut().flatten()).collect(),
        Payload::SchrijverDual { blocks } => blocks
            .iter_mut()
            .flat_map(|b| -> Vec<&mut Rational> {
                match b {
                    RatBlock::Dense(m) => m.iter_mut().flatten().collect(),
                    RatBlock::Diag(d) => d.iter_mut().collect(),
                }
            })
            .collect(),
    }
}

fn rejected(doc: &CertificateDocument) -> bool {
    !matches!(verify(doc), Ok(Verdict::Valid { .. }))
}

#[test]
fn single_mutations_never_validate() {
    let eps = frac(1, 1_000_000);
    for name in ["e8_kissing.json", "pentagon_theta.json"] {
        let (_, doc) = read_golden(name);
        let slots = payload_slots(&mut doc.payload.clone()).len();
        assert!(slots > 0);
        for k in 0..slots {
            let mut m = doc.clone();
            *payload_slots(&mut m.payload)[k] += &eps;
            assert!(rejected(&m), "{name}: slot {k} mutated by +1/10^6 still validates");
        }
    }
}

#[test]
fn schrijver_certificate_round_trips_and_verifies() {
    let out = schrijver_bound(6, 3, 1e-8).unwrap();
    let mut doc = CertificateDocument::new(
        CertSpace::from_space(&SpaceSpec::hamming(6, 2, 3)),
        Payload::SchrijverDual { blocks: out.certificate_x.clone() },
        out.exact_bound.clone(),
    );
    doc.metadata.insert("tolerance".into(), Value::from(1e-8));
    let text = doc.to_json();
    let back = CertificateDocument::parse(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.to_json(), text);
    let v = verify(&back).unwrap();
    assert_eq!(v.bound(), Some(&out.exact_bound));
    assert!(out.exact_bound >= int(8) && out.exact_bound < int(9), "{}", out.exact_bound);

    let mut wrong = back.clone();
    wrong.claimed_bound = &wrong.claimed_bound - frac(1, 1_000_000);
    assert!(rejected(&wrong));
    let mut broken = back;
    if let Payload::SchrijverDual { blocks } = &mut broken.payload {
        if let Some(RatBlock::Diag(d)) = blocks.first_mut() {
            d[0] = int(-1);
        }
    }
    assert!(rejected(&broken));
}

#[test]
fn malformed_documents_report_where() {
    match CertificateDocument::parse("{\n  \"version\": \"1\",\n  oops\n}") {
        Err(Error::Parse(m)) => assert!(m.contains("line 3"), "{m}"),
        other => panic!("{other:?}"),
    }
    let mut v: Value = serde_json::from_str(&e8_document().to_json()).unwrap();
    v["payload"]["coefficients"][2] = Value::from("1/0");
    match CertificateDocument::parse(&v.to_string()) {
        Err(Error::Parse(m)) => assert!(m.contains("payload.coefficients[2]"), "{m}"),
        other => panic!("{other:?}"),
    }
    let mut v: Value = serde_json::from_str(&e8_document().to_json()).unwrap();
    v["extra"] = Value::from(1);
    assert!(CertificateDocument::parse(&v.to_string()).is_err());
}

#[test]
fn theta_prime_duals_accept_more_negative_entries() {
    // C_5 with θ′ = θ: the θ dual is also a θ′ dual; pushing a non-edge
    // entry below -1 keeps the pattern admissible for θ′ only.
    let t = frac(2_795_085, 1_250_000);
    let matrix = pentagon_dual_matrix(&t).unwrap();
    let g = Graph::cycle(5).unwrap();
    let mut doc = CertificateDocument::new(
        CertSpace::from_graph(&g),
        Payload::ThetaDual { variant: ThetaVariant::ThetaPrime, t: t.clone(), matrix: matrix.clone() },
        t.clone(),
    );
    assert!(verify(&doc).unwrap().is_valid());
    if let Payload::ThetaDual { matrix, .. } = &mut doc.payload {
        matrix[0][2] = int(-2);
        matrix[2][0] = int(-2);
    }
    // still structurally fine for θ′, but no longer PSD
    assert!(rejected(&doc));
}
