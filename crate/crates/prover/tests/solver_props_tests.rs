use prover::{
    cfl_certificate, check_certificate_json, check_proof_certificate,
    flux_continuity_certificates, hyperbolicity_certificate, limiter_certificates,
    proof_certificate_to_json, prove_solver_properties, ProofStatus, SchemeFlux,
};
use pde_core::SystemName;

const ALL_SYSTEMS: [SystemName; 6] = [
    SystemName::Advection1d,
    SystemName::Advection2d,
    SystemName::Burgers1d,
    SystemName::Burgers2d,
    SystemName::Euler1d,
    SystemName::Euler2d,
];

#[test]
fn flux_continuity_is_proved_for_both_fluxes_on_all_systems() {
    for name in ALL_SYSTEMS {
        for scheme in [SchemeFlux::LaxFriedrichs, SchemeFlux::Roe] {
            let certs = flux_continuity_certificates(name, scheme).unwrap();
            assert!(!certs.is_empty());
            for cert in certs {
                assert_eq!(
                    cert.status,
                    ProofStatus::Proved,
                    "{} did not prove",
                    cert.name
                );
                check_proof_certificate(&cert).unwrap();
            }
        }
    }
}

#[test]
fn hyperbolicity_certificates_check() {
    for name in ALL_SYSTEMS {
        let cert = hyperbolicity_certificate(name).unwrap();
        assert_eq!(cert.status, ProofStatus::Proved);
        check_proof_certificate(&cert).unwrap();
    }
}

#[test]
fn cfl_certificates_check() {
    for name in ALL_SYSTEMS {
        let cert = cfl_certificate(name).unwrap();
        assert_eq!(cert.status, ProofStatus::Proved, "{}", cert.name);
        check_proof_certificate(&cert).unwrap();
    }
}

#[test]
fn limiter_certificates_check() {
    for kind in ["minmod", "superbee", "monotonized_centered", "van_leer"] {
        let cert = limiter_certificates(kind).unwrap();
        assert_eq!(cert.status, ProofStatus::Proved, "{kind}");
        // Numeric-evidence steps are present and distinct from rewrites.
        assert!(cert
            .steps
            .iter()
            .any(|s| matches!(s, prover::ProofStep::NumericEvidence { .. })));
        check_proof_certificate(&cert).unwrap();
        check_certificate_json(&proof_certificate_to_json(&cert)).unwrap();
    }
}

#[test]
fn property_sets_are_fully_checkable_through_json() {
    let certs = prove_solver_properties(SystemName::Euler1d, SchemeFlux::Roe).unwrap();
    assert!(certs.len() >= 5); // 3 flux components + hyperbolicity + CFL
    for cert in certs {
        let json = proof_certificate_to_json(&cert);
        check_certificate_json(&json).unwrap();
    }
}

#[test]
fn flux_continuity_traces_are_purely_equational() {
    for cert in flux_continuity_certificates(SystemName::Burgers1d, SchemeFlux::Roe).unwrap() {
        for step in &cert.steps {
            assert!(matches!(step, prover::ProofStep::Rewrite { .. }));
        }
    }
}
