use std::path::Path;
use std::time::Instant;

use codebounds::certlib::{self, CertSpace, CertificateDocument, LpBasis, Payload};
use codebounds::delsarte::{self, LpMethod, SpaceSpec, Verdict};
use codebounds::orthopoly::{self, FamilyParams};
use codebounds::rational::{self, Rational};
use codebounds::schrijver;
use codebounds::sdp::sdpa;
use codebounds::theta::{self, AlphaResult, Graph, ThetaVariant};
use serde_json::Value;

use crate::report::{sig12, Provenance, ReportedBound, RunReport};
use crate::{CliError, LpArgs, LpSpace, PolyArgs, PolyFamily, SdpArgs, ThetaArgs, ThetaTarget};

fn require<T>(value: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Invalid(format!("{what} needs --{flag}")))
}

/// `p/q`, with a 12-digit decimal when it is not an integer.
pub fn show_rational(r: &Rational) -> String {
    if rational::is_integer(r) {
        rational::format(r)
    } else {
        format!("{} (~{})", rational::format(r), sig12(rational::to_f64(r)))
    }
}

pub fn poly(args: &PolyArgs) -> Result<(), CliError> {
    let (fam, var) = match args.family {
        PolyFamily::Krawtchouk => (FamilyParams::Krawtchouk { n: args.n, q: require(args.q, "q", "krawtchouk")? }, "x"),
        PolyFamily::Hahn => (FamilyParams::Hahn { n: args.n, w: require(args.w, "w", "hahn")? }, "i"),
        PolyFamily::Qhahn => (
            FamilyParams::QHahn {
                n: args.n,
                q: require(args.q, "q", "qhahn")?,
                i: require(args.i, "i", "qhahn")?,
                j: require(args.j, "j", "qhahn")?,
            },
            "[x]",
        ),
        PolyFamily::Gegenbauer => (FamilyParams::Gegenbauer { n: args.n }, "t"),
    };
    let p = fam.member(args.k)?;
    if let Some(x) = &args.eval {
        let value = match fam {
            FamilyParams::QHahn { q, .. } => {
                let x: usize = x
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Invalid(format!("q-Hahn evaluates at integers x >= 0, got {x:?}")))?;
                p.eval(&orthopoly::bracket(x, q)?)
            }
            _ => p.eval(&rational::parse(x)?),
        };
        println!("{}", rational::format(&value));
    } else if args.coeffs {
        let cs: Vec<String> = p.coeffs().iter().map(rational::format).collect();
        println!("{}", if cs.is_empty() { "0".to_string() } else { cs.join(" ") });
    } else {
        println!("{}", p.display_in(var));
    }
    Ok(())
}

fn lp_space(args: &LpArgs) -> Result<SpaceSpec, CliError> {
    let space = match args.space {
        LpSpace::Hamming => SpaceSpec::hamming(args.n, args.q, require(args.delta, "delta", "hamming")?),
        LpSpace::Johnson => {
            SpaceSpec::johnson(args.n, require(args.w, "w", "johnson")?, require(args.delta, "delta", "johnson")?)
        }
        LpSpace::Sphere => {
            let s = require(args.max_cos.as_deref(), "max-cos", "sphere")?;
            SpaceSpec::sphere(args.n, rational::parse(s)?)
        }
    };
    space.validate()?;
    Ok(space)
}

fn space_parameters(report: &mut RunReport, space: &SpaceSpec) {
    if let Ok(Value::Object(map)) = serde_json::to_value(space) {
        for (k, v) in map {
            report.param(if k == "type" { "space" } else { &k }, v);
        }
    }
}

fn write_certificate(doc: &CertificateDocument, path: &Path, report: &mut RunReport) -> Result<(), CliError> {
    doc.write(path).map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))?;
    report.certificate = Some(path.display().to_string());
    println!("certificate written to {}", path.display());
    Ok(())
}

pub fn bound_lp(args: &LpArgs, echo: Vec<String>) -> Result<(), CliError> {
    let start = Instant::now();
    let space = lp_space(args)?;
    let mut report = RunReport::new(echo);
    space_parameters(&mut report, &space);
    if let Some(d) = args.degree {
        report.param("degree", d);
    }

    let out = delsarte::delsarte_bound(&space, args.degree)?;
    let solver = match out.method {
        LpMethod::Trivial => "trivial",
        LpMethod::ExactSimplex => "exact-simplex",
        LpMethod::SampledVerified => "sampled-lp-sturm-verified",
    };
    println!("space: {space}");
    println!("method: lp ({solver})");
    println!("bound = {}", show_rational(&out.bound));
    println!("floor = {}", out.bound.floor().to_integer());

    report.bounds.push(ReportedBound::exact(Provenance::Lp, solver, &out.bound));
    report.diag("pivots", out.pivots);
    report.diag(
        "coefficients",
        out.certificate.coefficients.iter().map(rational::format).collect::<Vec<_>>(),
    );
    if let Some(dist) = &out.distribution {
        let map: serde_json::Map<String, Value> =
            dist.iter().map(|(k, v)| (k.clone(), Value::from(rational::format(v)))).collect();
        report.diag("distribution", Value::Object(map));
    }
    if let Some(path) = &args.cert {
        let doc = CertificateDocument::new(
            CertSpace::from_space(&space),
            Payload::LpPolynomial { coefficients: out.certificate.coefficients.clone(), basis: LpBasis::Normalized },
            out.bound.clone(),
        );
        write_certificate(&doc, path, &mut report)?;
    }
    report.timing.elapsed_seconds = start.elapsed().as_secs_f64();
    if let Some(path) = &args.json {
        report.write(path)?;
    }
    Ok(())
}

pub fn bound_sdp(args: &SdpArgs, echo: Vec<String>) -> Result<(), CliError> {
    let start = Instant::now();
    if !(args.tol > 0.0 && args.tol < 1.0) {
        return Err(CliError::Invalid(format!("--tol must lie in (0, 1), got {}", args.tol)));
    }
    let space = SpaceSpec::hamming(args.n, 2, args.delta);
    let mut report = RunReport::new(echo);
    space_parameters(&mut report, &space);
    report.param("tol", args.tol);

    if let Some(path) = &args.emit_sdpa {
        let sdp = schrijver::build_schrijver(args.n, args.delta)?;
        sdpa::export_sdpa(&sdp.problem.to_f64(), path)?;
        println!(
            "wrote {} ({} constraints, {} blocks)",
            path.display(),
            sdp.problem.num_constraints(),
            sdp.problem.blocks.len()
        );
        report.diag("sdpa", path.display().to_string());
        report.diag("constraints", sdp.problem.num_constraints());
        report.timing.elapsed_seconds = start.elapsed().as_secs_f64();
        if let Some(json) = &args.json {
            report.write(json)?;
        }
        return Ok(());
    }

    let out = schrijver::schrijver_bound(args.n, args.delta, args.tol)?;
    println!("space: {space}");
    println!("method: sdp (interior-point, exact rounding of X)");
    println!("estimate = {}", sig12(out.estimate));
    println!("bound = {}", sig12(rational::to_f64(&out.exact_bound)));
    println!("floor = {}", out.floored);

    let mut bound = ReportedBound::exact(Provenance::Sdp, "interior-point+exact-x-rounding", &out.exact_bound);
    bound.tolerance = args.tol;
    report.bounds.push(bound);
    report.bounds.push(ReportedBound::float(
        Provenance::Sdp,
        "interior-point+outward-rounding",
        out.rounded.value,
        args.tol,
    ));
    let lp = delsarte::delsarte_bound(&space, None)?;
    println!("lp bound = {}", show_rational(&lp.bound));
    report.bounds.push(ReportedBound::exact(Provenance::Lp, "exact-simplex", &lp.bound));
    report
        .diag("status", serde_json::to_value(out.solution.status).unwrap_or(Value::Null))
        .diag("iterations", out.solution.iterations)
        .diag("gap", out.solution.gap)
        .diag("x_infeasibility", out.solution.x_infeasibility)
        .diag("y_infeasibility", out.solution.y_infeasibility)
        .diag("estimate", out.estimate)
        .diag("variables", out.sdp.variables.len())
        .diag("blocks", out.sdp.problem.blocks.len());
    if let Some(path) = &args.cert {
        let doc = CertificateDocument::new(
            CertSpace::from_space(&space),
            Payload::SchrijverDual { blocks: out.certificate_x.clone() },
            out.exact_bound.clone(),
        );
        write_certificate(&doc, path, &mut report)?;
    }
    report.timing.elapsed_seconds = start.elapsed().as_secs_f64();
    if let Some(json) = &args.json {
        report.write(json)?;
    }
    Ok(())
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(Graph::parse_edge_list(&text)?)
}

/// Vertex count up to which the CLI also reports α by exhaustive search.
const ALPHA_REPORT_CAP: usize = 64;

pub fn theta(args: &ThetaArgs, echo: Vec<String>) -> Result<(), CliError> {
    let start = Instant::now();
    let variant = ThetaVariant::from(args.variant);
    let mut report = RunReport::new(echo);
    report.param("variant", variant.to_string()).param("tol", args.tol);

    let graph = match &args.target {
        ThetaTarget::Graph { path } => {
            report.param("graph", path.display().to_string());
            read_graph(path)?
        }
        ThetaTarget::Cycle { q } => {
            report.param("cycle", *q);
            let closed = theta::theta_cycle_closed_form(*q)?;
            let (_, lp) = theta::theta_cycle_symmetrized_lp(*q)?;
            println!("closed form = {}", sig12(closed));
            println!("symmetrized lp = {}", sig12(lp));
            report.bounds.push(ReportedBound::float(Provenance::ClosedForm, "circulant-eigenvalues", closed, 0.0));
            report.bounds.push(ReportedBound::float(Provenance::Lp, "symmetrized-simplex", lp, 1e-9));
            Graph::cycle(*q)?
        }
        ThetaTarget::Code { n, delta, q } => {
            let space = SpaceSpec::hamming(*n, *q, *delta);
            space_parameters(&mut report, &space);
            let graph = theta::code_graph(&space)?;
            if graph.n() > theta::RAW_VERTEX_CAP {
                let value = theta::theta_code_symmetrized(&space, variant)?;
                println!("vertices = {}", graph.n());
                println!("{variant} (symmetrized) = {}", show_rational(&value));
                report.bounds.push(ReportedBound::exact(Provenance::Lp, "symmetrized-exact-simplex", &value));
                report.diag("vertices", graph.n());
                return finish_theta(report, args, start);
            }
            graph
        }
    };
    if graph.n() > theta::RAW_VERTEX_CAP {
        return Err(CliError::Invalid(format!(
            "θ SDP is limited to {} vertices, got {}",
            theta::RAW_VERTEX_CAP,
            graph.n()
        )));
    }
    let out = theta::theta_bound(&graph, variant, args.tol)?;
    println!("vertices = {}, edges = {}", graph.n(), graph.edges().len());
    println!("{variant} = {}", sig12(out.value));
    report.bounds.push(ReportedBound::float(Provenance::Sdp, "interior-point", out.value, args.tol));
    match out.safe_bound {
        Some(b) => {
            println!("safe upper bound = {}", sig12(b));
            report.bounds.push(ReportedBound::float(Provenance::Sdp, "interior-point+outward-rounding", b, args.tol));
        }
        None => println!("safe upper bound unavailable"),
    }
    report
        .diag("status", serde_json::to_value(out.solution.status).unwrap_or(Value::Null))
        .diag("iterations", out.solution.iterations)
        .diag("primal_value", out.primal_value)
        .diag("gap", out.solution.gap)
        .diag("vertices", graph.n())
        .diag("edges", graph.edges().len());
    if graph.n() <= ALPHA_REPORT_CAP {
        match theta::alpha_exhaustive(&graph) {
            AlphaResult::Exact(a) => {
                println!("alpha = {a}");
                report.diag("alpha", a);
            }
            AlphaResult::Inconclusive { lower } => {
                println!("alpha >= {lower} (search timed out)");
                report.diag("alpha_lower", lower);
            }
        }
    }
    finish_theta(report, args, start)
}

fn finish_theta(mut report: RunReport, args: &ThetaArgs, start: Instant) -> Result<(), CliError> {
    report.timing.elapsed_seconds = start.elapsed().as_secs_f64();
    if let Some(path) = &args.json {
        report.write(path)?;
    }
    Ok(())
}

pub fn verify_cert(path: &Path) -> Result<(), CliError> {
    let doc = CertificateDocument::read(path)?;
    match certlib::verify(&doc)? {
        Verdict::Valid { bound } => {
            println!("VALID bound={}", rational::format(&bound));
            Ok(())
        }
        Verdict::Invalid { reason, witness } => {
            println!("INVALID: {reason}");
            if let Some(w) = &witness {
                println!("witness: {w}");
            }
            Err(CliError::Verification(reason))
        }
    }
}
