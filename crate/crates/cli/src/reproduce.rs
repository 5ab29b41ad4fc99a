use codebounds::certlib::{self, CertSpace, CertificateDocument, LpBasis, Payload};
use codebounds::codes::{macwilliams_transform, LinearCode};
use codebounds::delsarte::{SpaceSpec, Verdict};
use codebounds::orthopoly::{self, FamilyParams};
use codebounds::poly::Polynomial;
use codebounds::rational::{self, frac, int, Rational};
use codebounds::theta::{self, Graph, ThetaVariant};

use crate::report::sig12;
use crate::{CliError, Recipe};

pub fn run(recipe: Recipe) -> Result<(), CliError> {
    match recipe {
        Recipe::Kissing8 => kissing8(),
        Recipe::Pentagon => pentagon(),
        Recipe::McwilliamsDemo => mcwilliams_demo(),
    }
}

const E8_JACOBI: [(i64, i64); 7] = [(1, 1), (16, 7), (200, 63), (832, 231), (1216, 429), (5120, 3003), (2560, 4641)];

fn show(v: &[Rational]) -> String {
    v.iter().map(rational::format).collect::<Vec<_>>().join(", ")
}

fn kissing8() -> Result<(), CliError> {
    let half = frac(1, 2);
    let mut f = Polynomial::from_roots(&[half.clone(), int(0), int(0), -&half, -&half, int(-1)]);
    f = f.scale(&frac(320, 3));
    println!("F(t) = (320/3) (t - 1/2) t^2 (t + 1/2)^2 (t + 1)");

    let normalized = orthopoly::expand_in_family(&f, &FamilyParams::Gegenbauer { n: 8 })?;
    let jacobi: Vec<Rational> = normalized
        .iter()
        .enumerate()
        .map(|(k, c)| orthopoly::jacobi_scale(8, k).map(|s| c / s))
        .collect::<Result<_, _>>()?;
    println!("coefficients, P_k(1) = 1 basis: {}", show(&normalized));
    println!("coefficients, Jacobi basis:     {}", show(&jacobi));
    let expected: Vec<Rational> = E8_JACOBI.iter().map(|&(p, q)| frac(p, q)).collect();
    if jacobi != expected {
        return Err(CliError::Verification(format!("expansion {} differs from {}", show(&jacobi), show(&expected))));
    }

    let doc = CertificateDocument::new(
        CertSpace::from_space(&SpaceSpec::sphere(8, half)),
        Payload::LpPolynomial { coefficients: jacobi, basis: LpBasis::Jacobi },
        int(240),
    );
    match certlib::verify(&doc)? {
        Verdict::Valid { bound } => {
            println!("bound = {}", rational::format(&bound));
            if bound == int(240) {
                Ok(())
            } else {
                Err(CliError::Verification(format!("expected 240, certified {bound}")))
            }
        }
        Verdict::Invalid { reason, .. } => {
            println!("INVALID: {reason}");
            Err(CliError::Verification(reason))
        }
    }
}

fn pentagon() -> Result<(), CliError> {
    let g = Graph::cycle(5)?;
    let sqrt5 = 5f64.sqrt();
    let out = theta::theta_bound(&g, ThetaVariant::Theta, 1e-10)?;
    let closed = theta::theta_cycle_closed_form(5)?;
    println!("theta(C_5) by interior point = {}", sig12(out.value));
    println!("closed form                  = {}", sig12(closed));
    println!("sqrt(5)                      = {}", sig12(sqrt5));
    if (out.value - sqrt5).abs() > 1e-6 {
        return Err(CliError::Solver(format!("θ(C_5) = {} is not within 1e-6 of √5", out.value)));
    }
    let alpha = theta::alpha_exhaustive(&g).exact().unwrap_or(0);
    println!("alpha(C_5) = {alpha}");

    let t = frac(2_795_085, 1_250_000);
    let matrix = theta::pentagon_dual_matrix(&t)?;
    let doc = CertificateDocument::new(
        CertSpace::from_graph(&g),
        Payload::ThetaDual { variant: ThetaVariant::Theta, t: t.clone(), matrix },
        t,
    );
    match certlib::verify(&doc)? {
        Verdict::Valid { bound } => {
            println!("dual certificate: VALID, theta(C_5) <= {} = {}", rational::format(&bound), sig12(rational::to_f64(&bound)));
            Ok(())
        }
        Verdict::Invalid { reason, .. } => Err(CliError::Verification(reason)),
    }
}

fn mcwilliams_demo() -> Result<(), CliError> {
    let codes = [
        ("Hamming [7,4,3]", LinearCode::from_generators(7, &[0b1000110, 0b0100101, 0b0010011, 0b0001111])?),
        (
            "extended Hamming [8,4,4]",
            LinearCode::from_generators(8, &[0b10001110, 0b01001101, 0b00101011, 0b00010111])?,
        ),
        ("repetition [5,1,5]", LinearCode::from_generators(5, &[0b11111])?),
    ];
    for (name, code) in codes {
        let a = code.weight_distribution();
        let transformed = macwilliams_transform(code.n(), &a)?;
        let dual: Vec<Rational> = code.dual().weight_distribution().iter().map(|&v| int(v as i64)).collect();
        println!("{name}");
        println!("  A(C)          = {a:?}");
        println!("  transform     = [{}]", show(&transformed));
        println!("  A(C^perp)     = [{}]", show(&dual));
        if transformed != dual {
            return Err(CliError::Verification(format!("MacWilliams identity fails for {name}")));
        }
        println!("  identity holds");
    }
    Ok(())
}
