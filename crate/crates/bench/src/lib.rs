//! Fixtures shared by the benchmarks.

use bcclab::degree_dist::ExponentConvention;
use bcclab::{
    build_zigzag_random, BuildOptions, ClassAssignment, DegreePolynomial, EnsembleSpec, LdpcCode, NodeKind,
    Perspective, Placement,
};

/// Variable-node distribution of the rate-1/2 UEP example code.
pub const UEP_NU: &str = "0.0005 x^20 + 0.0002 x^19 + 0.0007 x^18 + 0.0151 x^17 + 0.0835 x^16 + 0.4054 x^3 + 0.4946 x^2";

pub fn uep_spec(n: usize) -> EnsembleSpec {
    let nu = DegreePolynomial::parse(UEP_NU, ExponentConvention::Degree, Perspective::Node, NodeKind::Variable)
        .expect("valid polynomial");
    EnsembleSpec::with_concentrated_checks(n, 0.5, nu).expect("valid ensemble")
}

pub fn uep_code(n: usize, placement: Placement) -> LdpcCode {
    let options = BuildOptions {
        placement,
        ..Default::default()
    };
    build_zigzag_random(&uep_spec(n), ClassAssignment::Uep { pc1_fraction: 0.2 }, 1, &options).expect("buildable")
}
