use crate::candidates::{candidate_search, CandidateReport};
use crate::chain::{CompositionChain, Stage};
use crate::CertError;
use characteristics::{Classification, SmoothnessReport, N_CAP};
use neural::AnalyticMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchKind {
    Plain,
    Beacons,
}

impl ArchKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ArchKind::Plain => "plain",
            ArchKind::Beacons => "beacons",
        }
    }

    pub fn parse(s: &str) -> Option<ArchKind> {
        match s {
            "plain" => Some(ArchKind::Plain),
            "beacons" => Some(ArchKind::Beacons),
            _ => None,
        }
    }
}

/// Architecture under certification: layer count (affine layers; each
/// shallow block holds two), width per layer, tanh activation throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchitectureSpec {
    pub kind: ArchKind,
    pub layers: usize,
    pub width: usize,
}

impl ArchitectureSpec {
    pub fn validate(&self) -> Result<(), CertError> {
        if self.layers < 2 || self.layers % 2 != 0 {
            return Err(CertError::BadInput(
                "layers must be even and at least 2".into(),
            ));
        }
        if self.width < 1 {
            return Err(CertError::BadInput("width must be at least 1".into()));
        }
        Ok(())
    }

    /// Identity-corrector stages in a compositional build of this depth.
    pub fn corrector_count(&self) -> usize {
        self.layers / 2 - 1
    }
}

/// What the certifier needs to know about a registered problem.
#[derive(Debug, Clone)]
pub struct ProblemInfo {
    pub id: String,
    /// Scalar linear flux: initial jumps transport unchanged and one bound
    /// covers the smooth and non-smooth parts.
    pub linear_flux: bool,
    /// True when the training solver is unverified (Euler): the bound holds
    /// subject to the assumption that the training data is correct.
    pub conditional: bool,
    /// Range of the certified (headline) solution component in raw units.
    pub headline_range: (f64, f64),
    /// Space-time input dimension d of the networks.
    pub d_inputs: usize,
    /// Paper-reported bound values, reference metadata only; never asserted.
    pub reference_bounds: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operand {
    Const(f64),
    /// Output of an earlier derivation step.
    Ref(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    MhaskarRate,
    Composition,
    LipschitzProduct,
    MaxSplit,
}

impl Rule {
    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::MhaskarRate => "mhaskar_rate",
            Rule::Composition => "composition",
            Rule::LipschitzProduct => "lipschitz_product",
            Rule::MaxSplit => "max_split",
        }
    }

    pub fn parse(s: &str) -> Option<Rule> {
        Some(match s {
            "mhaskar_rate" => Rule::MhaskarRate,
            "composition" => Rule::Composition,
            "lipschitz_product" => Rule::LipschitzProduct,
            "max_split" => Rule::MaxSplit,
            _ => return None,
        })
    }

    /// The arithmetic meaning of each rule; replay recomputes exactly this.
    pub fn apply(&self, args: &[f64]) -> Result<f64, CertError> {
        let need = match self {
            Rule::MhaskarRate => 3,
            Rule::Composition => 3,
            Rule::LipschitzProduct | Rule::MaxSplit => 2,
        };
        if args.len() != need {
            return Err(CertError::BadInput(format!(
                "{} expects {need} inputs, got {}",
                self.as_str(),
                args.len()
            )));
        }
        Ok(match self {
            Rule::MhaskarRate => args[0].powf(-args[1] / args[2]),
            Rule::Composition => args[0] + args[1] * args[2],
            Rule::LipschitzProduct => args[0] * args[1],
            Rule::MaxSplit => args[0].max(args[1]),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivationStep {
    pub rule: Rule,
    pub inputs: Vec<Operand>,
    pub output: f64,
}

/// Tape of derivation steps; pushing a step computes its output, so the
/// recorded trace replays bit-exactly by construction.
#[derive(Debug, Default)]
struct Tape {
    steps: Vec<DerivationStep>,
}

impl Tape {
    fn resolve(&self, op: Operand) -> Result<f64, CertError> {
        match op {
            Operand::Const(v) => Ok(v),
            Operand::Ref(i) => self
                .steps
                .get(i)
                .map(|s| s.output)
                .ok_or_else(|| CertError::BadInput(format!("dangling step reference {i}"))),
        }
    }

    fn push(&mut self, rule: Rule, inputs: Vec<Operand>) -> Result<Operand, CertError> {
        let args: Vec<f64> = inputs
            .iter()
            .map(|op| self.resolve(*op))
            .collect::<Result<_, _>>()?;
        let output = rule.apply(&args)?;
        self.steps.push(DerivationStep {
            rule,
            inputs,
            output,
        });
        Ok(Operand::Ref(self.steps.len() - 1))
    }
}

/// Worst-case L-inf bound certificate: the architecture, the smoothness
/// analysis it leans on, the compositional chain, and an arithmetic
/// derivation that replays bit-exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub version: u32,
    pub problem: String,
    pub architecture: ArchitectureSpec,
    pub smoothness: SmoothnessReport,
    pub conditional: bool,
    /// Plain architectures get documentation-only certificates.
    pub informational: bool,
    pub chain: CompositionChain,
    pub derivation: Vec<DerivationStep>,
    /// Indices of the derivation steps whose outputs are the bounds.
    pub smooth_step: usize,
    pub nonsmooth_step: Option<usize>,
    pub bound_smooth: f64,
    pub bound_nonsmooth: Option<f64>,
    pub no_bound_reason: Option<String>,
    pub step_count: usize,
    pub warnings: Vec<String>,
}

impl BoundCertificate {
    /// Earliest usable bound for comparing against an observed error:
    /// the non-smooth bound when discontinuities exist, else the smooth one.
    pub fn operative_bound(&self) -> Option<f64> {
        match self.smoothness.classification {
            Classification::SmoothForever => Some(self.bound_smooth),
            _ => self.bound_nonsmooth,
        }
    }
}

/// Replay every derivation step from its inputs and check the recorded
/// outputs and declared bounds bit-exactly. Returns the index of the first
/// failing step on rejection.
pub fn replay_bound_certificate(cert: &BoundCertificate) -> Result<(), CertError> {
    let mut outputs: Vec<f64> = Vec::with_capacity(cert.derivation.len());
    for (i, step) in cert.derivation.iter().enumerate() {
        let mut args = Vec::with_capacity(step.inputs.len());
        for op in &step.inputs {
            let v = match op {
                Operand::Const(v) => *v,
                Operand::Ref(j) => {
                    if *j >= i {
                        return Err(CertError::ReplayFailed {
                            step: i,
                            reason: format!("forward reference to step {j}"),
                        });
                    }
                    outputs[*j]
                }
            };
            args.push(v);
        }
        let expect = step.rule.apply(&args).map_err(|e| CertError::ReplayFailed {
            step: i,
            reason: e.to_string(),
        })?;
        if expect.to_bits() != step.output.to_bits() {
            return Err(CertError::ReplayFailed {
                step: i,
                reason: format!("recomputed {expect:?} but certificate says {:?}", step.output),
            });
        }
        outputs.push(expect);
    }
    let declared = cert
        .derivation
        .get(cert.smooth_step)
        .ok_or_else(|| CertError::ReplayFailed {
            step: cert.smooth_step,
            reason: "smooth result step out of range".into(),
        })?;
    if declared.output.to_bits() != cert.bound_smooth.to_bits() {
        return Err(CertError::ReplayFailed {
            step: cert.smooth_step,
            reason: "bound_smooth does not match its derivation step".into(),
        });
    }
    match (cert.nonsmooth_step, cert.bound_nonsmooth) {
        (Some(si), Some(b)) => {
            let step = cert.derivation.get(si).ok_or_else(|| CertError::ReplayFailed {
                step: si,
                reason: "non-smooth result step out of range".into(),
            })?;
            if step.output.to_bits() != b.to_bits() {
                return Err(CertError::ReplayFailed {
                    step: si,
                    reason: "bound_nonsmooth does not match its derivation step".into(),
                });
            }
        }
        (None, None) => {
            if cert.no_bound_reason.is_none() {
                return Err(CertError::ReplayFailed {
                    step: 0,
                    reason: "missing no_bound reason".into(),
                });
            }
        }
        _ => {
            return Err(CertError::ReplayFailed {
                step: 0,
                reason: "inconsistent non-smooth bound fields".into(),
            });
        }
    }
    if cert.step_count != cert.derivation.len() {
        return Err(CertError::ReplayFailed {
            step: 0,
            reason: "step_count does not match the derivation".into(),
        });
    }
    if let Some(b) = cert.bound_nonsmooth {
        if !(cert.bound_smooth <= b) {
            return Err(CertError::ReplayFailed {
                step: cert.smooth_step,
                reason: "bound_smooth exceeds bound_nonsmooth".into(),
            });
        }
    }
    Ok(())
}

/// Fold the chain on the tape, outermost stage last:
/// acc = rate(head), then acc = rate_s + L_s * acc per remaining stage.
/// Learned stage rates are mhaskar_rate * scale; analytic stages contribute
/// rate 0 and their Lipschitz constant.
fn fold_on_tape(
    tape: &mut Tape,
    chain: &CompositionChain,
    head_n: u32,
) -> Result<Operand, CertError> {
    let mut acc: Option<Operand> = None;
    for stage in &chain.stages {
        match stage {
            Stage::Learned {
                width,
                d_in,
                n,
                scale,
                head,
            } => {
                let n_eff = if *head { head_n } else { *n };
                let rate = tape.push(
                    Rule::MhaskarRate,
                    vec![
                        Operand::Const(*width as f64),
                        Operand::Const(n_eff as f64),
                        Operand::Const(*d_in as f64),
                    ],
                )?;
                let scaled =
                    tape.push(Rule::LipschitzProduct, vec![rate, Operand::Const(*scale)])?;
                acc = Some(match acc {
                    None => scaled,
                    // Learned targets are 1-Lipschitz on their normalized
                    // scale: e = e_stage + 1 * acc.
                    Some(prev) => tape.push(
                        Rule::Composition,
                        vec![scaled, Operand::Const(1.0), prev],
                    )?,
                });
            }
            Stage::Analytic { map } => {
                let prev = acc.ok_or_else(|| {
                    CertError::BadChain("analytic stage before the head".into())
                })?;
                acc = Some(tape.push(
                    Rule::Composition,
                    vec![
                        Operand::Const(0.0),
                        Operand::Const(map.lipschitz()),
                        prev,
                    ],
                )?);
            }
        }
    }
    acc.ok_or_else(|| CertError::BadChain("empty chain".into()))
}

/// Emit a bound certificate for one problem + architecture + smoothness
/// report. Compositional architectures run the candidate search and fold the
/// full chain; plain architectures get an informational single-stage bound
/// (the network viewed as one d-input map). Conditional problems carry the
/// training-data-correctness assumption flag.
pub fn certify(
    info: &ProblemInfo,
    arch: &ArchitectureSpec,
    report: &SmoothnessReport,
) -> Result<BoundCertificate, CertError> {
    arch.validate()?;
    let (lo, hi) = info.headline_range;
    if !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(CertError::BadInput(format!(
            "bad headline range ({lo}, {hi})"
        )));
    }
    let span = hi - lo;
    let data_scale = if span > 0.0 { span } else { 1.0 };
    let mut warnings = Vec::new();

    let chain = match arch.kind {
        ArchKind::Plain => {
            warnings.push(
                "informational: plain architectures carry no compositional bound".into(),
            );
            CompositionChain::single(arch.width, info.d_inputs, report.n_smooth_part, data_scale)
        }
        ArchKind::Beacons => {
            let search: CandidateReport =
                candidate_search((lo, hi), 1.0, 4).map_err(|e| match e {
                    CertError::BadInput(m) => CertError::BadInput(m),
                    other => other,
                })?;
            warnings.extend(search.warnings.iter().cloned());
            let suppression = search.chosen;
            // Head target diameter through the suppression inverse on the
            // normalized [0, 1] scale.
            let g_lo = suppression
                .inverse(0.0)
                .map_err(|e| CertError::BadChain(e.to_string()))?;
            let g_hi = suppression
                .inverse(1.0)
                .map_err(|e| CertError::BadChain(e.to_string()))?;
            let g_scale = (g_hi - g_lo).abs().max(f64::MIN_POSITIVE);
            let mut stages = vec![
                Stage::Learned {
                    width: arch.width,
                    d_in: info.d_inputs,
                    n: report.n_smooth_part,
                    scale: g_scale,
                    head: true,
                },
                Stage::Analytic { map: suppression },
            ];
            for _ in 0..arch.corrector_count() {
                stages.push(Stage::Learned {
                    width: arch.width,
                    d_in: 1,
                    n: N_CAP,
                    scale: 1.0,
                    head: false,
                });
            }
            stages.push(Stage::Analytic {
                map: AnalyticMap::Affine {
                    scale: data_scale,
                    offset: lo,
                },
            });
            CompositionChain { stages }
        }
    };
    chain.validate()?;

    let mut tape = Tape::default();
    let smooth_op = fold_on_tape(&mut tape, &chain, report.n_smooth_part)?;
    let nonsmooth = match report.classification {
        Classification::AsymptoticallySmooth => None,
        _ => Some(fold_on_tape(&mut tape, &chain, 0)?),
    };

    // Scalar linear flux transports jumps unchanged: one bound covers both
    // parts, reported as the max of the two folds.
    let (smooth_step, nonsmooth_step) = match (info.linear_flux, nonsmooth) {
        (true, Some(ns_op)) => {
            let unified = tape.push(Rule::MaxSplit, vec![smooth_op, ns_op])?;
            let idx = match unified {
                Operand::Ref(i) => i,
                _ => unreachable!(),
            };
            (idx, Some(idx))
        }
        (_, ns) => {
            let s_idx = match smooth_op {
                Operand::Ref(i) => i,
                _ => unreachable!(),
            };
            let ns_idx = ns.map(|op| match op {
                Operand::Ref(i) => i,
                _ => unreachable!(),
            });
            (s_idx, ns_idx)
        }
    };

    let bound_smooth = tape.steps[smooth_step].output;
    let bound_nonsmooth = nonsmooth_step.map(|i| tape.steps[i].output);
    let no_bound_reason = match report.classification {
        Classification::AsymptoticallySmooth => {
            Some("discontinuity set is asymptotically empty".to_string())
        }
        _ => None,
    };
    let step_count = tape.steps.len();
    let cert = BoundCertificate {
        version: 1,
        problem: info.id.clone(),
        architecture: arch.clone(),
        smoothness: report.clone(),
        conditional: info.conditional,
        informational: arch.kind == ArchKind::Plain,
        chain,
        derivation: tape.steps,
        smooth_step,
        nonsmooth_step,
        bound_smooth,
        bound_nonsmooth,
        no_bound_reason,
        step_count,
        warnings,
    };
    replay_bound_certificate(&cert)?;
    Ok(cert)
}
