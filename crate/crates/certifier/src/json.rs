use crate::certify::{ArchKind, ArchitectureSpec, BoundCertificate, DerivationStep, Operand, Rule};
use crate::chain::{CompositionChain, Stage};
use crate::CertError;
use characteristics::{Classification, SmoothnessReport, WaveBlowup};
use neural::AnalyticMap;
use std::fmt::Write as _;

/// Certificate wire format. All numbers are printed with 17 significant
/// digits, round-trip exact for 64-bit floats; +inf blow-up times are the
/// string "inf".

fn fnum(x: f64) -> String {
    format!("{x:.16e}")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn t_inf_json(v: f64) -> String {
    if v.is_infinite() {
        "\"inf\"".to_string()
    } else {
        fnum(v)
    }
}

fn smoothness_json(r: &SmoothnessReport) -> String {
    let waves = r
        .t_inf
        .iter()
        .map(|w| {
            format!(
                "{{\"wave\":{},\"alpha_sign\":{},\"t_inf\":{}}}",
                w.wave,
                w.alpha_sign,
                t_inf_json(w.t_inf)
            )
        })
        .collect::<Vec<_>>()
        .join(",");
    let notes = r
        .notes
        .iter()
        .map(|n| format!("\"{}\"", escape(n)))
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{{\"classification\":\"{}\",\"n\":{},\"n_global\":{},\"t_inf\":[{}],\
         \"discontinuities_at_t0\":{},\"notes\":[{}]}}",
        r.classification.as_str(),
        r.n_smooth_part,
        r.n_global,
        waves,
        r.discontinuity_count_at_t0,
        notes
    )
}

fn stage_json(s: &Stage) -> String {
    match s {
        Stage::Analytic { map } => match map {
            AnalyticMap::Affine { scale, offset } => format!(
                "{{\"kind\":\"analytic\",\"form\":\"affine\",\"scale\":{},\"offset\":{},\"L\":{}}}",
                fnum(*scale),
                fnum(*offset),
                fnum(map.lipschitz())
            ),
            other => format!(
                "{{\"kind\":\"analytic\",\"form\":\"{}\",\"C\":{},\"L\":{}}}",
                other.form_name(),
                fnum(other.c().unwrap()),
                fnum(other.lipschitz())
            ),
        },
        Stage::Learned {
            width,
            d_in,
            n,
            scale,
            head,
        } => format!(
            "{{\"kind\":\"learned\",\"head\":{head},\"N\":{width},\"n\":{n},\"d\":{d_in},\
             \"rate\":{},\"scale\":{}}}",
            fnum(crate::rates::shallow_rate(*width, *n, *d_in)),
            fnum(*scale)
        ),
    }
}

fn operand_json(op: &Operand) -> String {
    match op {
        Operand::Const(v) => fnum(*v),
        Operand::Ref(i) => format!("{{\"ref\":{i}}}"),
    }
}

fn step_json(s: &DerivationStep) -> String {
    format!(
        "{{\"rule\":\"{}\",\"inputs\":[{}],\"output\":{}}}",
        s.rule.as_str(),
        s.inputs
            .iter()
            .map(operand_json)
            .collect::<Vec<_>>()
            .join(","),
        fnum(s.output)
    )
}

pub fn bound_certificate_to_json(cert: &BoundCertificate) -> String {
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"certificate\": \"bound\",");
    let _ = writeln!(s, "  \"version\": {},", cert.version);
    let _ = writeln!(s, "  \"problem\": \"{}\",", escape(&cert.problem));
    let _ = writeln!(
        s,
        "  \"architecture\": {{\"kind\":\"{}\",\"layers\":{},\"width\":{}}},",
        cert.architecture.kind.as_str(),
        cert.architecture.layers,
        cert.architecture.width
    );
    let _ = writeln!(s, "  \"smoothness\": {},", smoothness_json(&cert.smoothness));
    let _ = writeln!(s, "  \"conditional\": {},", cert.conditional);
    let _ = writeln!(s, "  \"informational\": {},", cert.informational);
    let _ = writeln!(
        s,
        "  \"chain\": [{}],",
        cert.chain
            .stages
            .iter()
            .map(stage_json)
            .collect::<Vec<_>>()
            .join(",")
    );
    let _ = writeln!(
        s,
        "  \"derivation\": [\n    {}\n  ],",
        cert.derivation
            .iter()
            .map(step_json)
            .collect::<Vec<_>>()
            .join(",\n    ")
    );
    let _ = writeln!(s, "  \"smooth_step\": {},", cert.smooth_step);
    match cert.nonsmooth_step {
        Some(i) => {
            let _ = writeln!(s, "  \"nonsmooth_step\": {i},");
        }
        None => {
            let _ = writeln!(s, "  \"nonsmooth_step\": null,");
        }
    }
    let _ = writeln!(s, "  \"bound_smooth\": {},", fnum(cert.bound_smooth));
    match cert.bound_nonsmooth {
        Some(b) => {
            let _ = writeln!(s, "  \"bound_nonsmooth\": {},", fnum(b));
        }
        None => {
            let _ = writeln!(
                s,
                "  \"bound_nonsmooth\": {{\"no_bound\": \"{}\"}},",
                escape(cert.no_bound_reason.as_deref().unwrap_or("unspecified"))
            );
        }
    }
    let _ = writeln!(s, "  \"step_count\": {},", cert.step_count);
    let _ = writeln!(
        s,
        "  \"warnings\": [{}]",
        cert.warnings
            .iter()
            .map(|w| format!("\"{}\"", escape(w)))
            .collect::<Vec<_>>()
            .join(",")
    );
    s.push('}');
    s
}

// --- parsing -----------------------------------------------------------------

fn get<'a>(v: &'a serde_json::Value, key: &str) -> Result<&'a serde_json::Value, CertError> {
    v.get(key)
        .ok_or_else(|| CertError::Malformed(format!("missing key `{key}`")))
}

fn as_f64(v: &serde_json::Value) -> Result<f64, CertError> {
    v.as_f64()
        .ok_or_else(|| CertError::Malformed("expected number".into()))
}

fn as_usize(v: &serde_json::Value) -> Result<usize, CertError> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| CertError::Malformed("expected unsigned integer".into()))
}

fn as_str<'a>(v: &'a serde_json::Value) -> Result<&'a str, CertError> {
    v.as_str()
        .ok_or_else(|| CertError::Malformed("expected string".into()))
}

fn as_array<'a>(v: &'a serde_json::Value) -> Result<&'a Vec<serde_json::Value>, CertError> {
    v.as_array()
        .ok_or_else(|| CertError::Malformed("expected array".into()))
}

fn t_inf_from(v: &serde_json::Value) -> Result<f64, CertError> {
    if let Some(s) = v.as_str() {
        if s == "inf" {
            return Ok(f64::INFINITY);
        }
        return Err(CertError::Malformed(format!("bad t_inf `{s}`")));
    }
    as_f64(v)
}

fn classification_from(s: &str) -> Result<Classification, CertError> {
    Ok(match s {
        "smooth_forever" => Classification::SmoothForever,
        "blowup_at" => Classification::BlowupAt,
        "discontinuous_from_start" => Classification::DiscontinuousFromStart,
        "asymptotically_smooth" => Classification::AsymptoticallySmooth,
        other => return Err(CertError::Malformed(format!("bad classification `{other}`"))),
    })
}

fn smoothness_from(v: &serde_json::Value) -> Result<SmoothnessReport, CertError> {
    let mut t_inf = Vec::new();
    for w in as_array(get(v, "t_inf")?)? {
        t_inf.push(WaveBlowup {
            wave: as_usize(get(w, "wave")?)?,
            alpha_sign: as_f64(get(w, "alpha_sign")?)? as i8,
            t_inf: t_inf_from(get(w, "t_inf")?)?,
        });
    }
    let notes = as_array(get(v, "notes")?)?
        .iter()
        .map(|n| as_str(n).map(|s| s.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SmoothnessReport {
        classification: classification_from(as_str(get(v, "classification")?)?)?,
        n_global: as_usize(get(v, "n_global")?)? as u32,
        n_smooth_part: as_usize(get(v, "n")?)? as u32,
        t_inf,
        discontinuity_count_at_t0: as_usize(get(v, "discontinuities_at_t0")?)?,
        notes,
    })
}

fn map_from(v: &serde_json::Value) -> Result<AnalyticMap, CertError> {
    let form = as_str(get(v, "form")?)?;
    Ok(match form {
        "affine" => AnalyticMap::Affine {
            scale: as_f64(get(v, "scale")?)?,
            offset: as_f64(get(v, "offset")?)?,
        },
        "arcsinh_over_c" => AnalyticMap::ArcsinhOverC {
            c: as_f64(get(v, "C")?)?,
        },
        "arctan_over_c" => AnalyticMap::ArctanOverC {
            c: as_f64(get(v, "C")?)?,
        },
        "tanh_over_c" => AnalyticMap::TanhOverC {
            c: as_f64(get(v, "C")?)?,
        },
        "identity_over_c" => AnalyticMap::IdentityOverC {
            c: as_f64(get(v, "C")?)?,
        },
        other => return Err(CertError::Malformed(format!("bad map form `{other}`"))),
    })
}

fn stage_from(v: &serde_json::Value) -> Result<Stage, CertError> {
    match as_str(get(v, "kind")?)? {
        "analytic" => Ok(Stage::Analytic { map: map_from(v)? }),
        "learned" => Ok(Stage::Learned {
            width: as_usize(get(v, "N")?)?,
            d_in: as_usize(get(v, "d")?)?,
            n: as_usize(get(v, "n")?)? as u32,
            scale: as_f64(get(v, "scale")?)?,
            head: get(v, "head")?
                .as_bool()
                .ok_or_else(|| CertError::Malformed("head must be a bool".into()))?,
        }),
        other => Err(CertError::Malformed(format!("bad stage kind `{other}`"))),
    }
}

fn operand_from(v: &serde_json::Value) -> Result<Operand, CertError> {
    if let Some(obj) = v.as_object() {
        let r = obj
            .get("ref")
            .ok_or_else(|| CertError::Malformed("operand object needs `ref`".into()))?;
        return Ok(Operand::Ref(as_usize(r)?));
    }
    Ok(Operand::Const(as_f64(v)?))
}

pub fn bound_certificate_from_json(text: &str) -> Result<BoundCertificate, CertError> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CertError::Malformed(e.to_string()))?;
    if as_str(get(&v, "certificate")?)? != "bound" {
        return Err(CertError::Malformed("not a bound certificate".into()));
    }
    let arch_v = get(&v, "architecture")?;
    let architecture = ArchitectureSpec {
        kind: ArchKind::parse(as_str(get(arch_v, "kind")?)?)
            .ok_or_else(|| CertError::Malformed("bad architecture kind".into()))?,
        layers: as_usize(get(arch_v, "layers")?)?,
        width: as_usize(get(arch_v, "width")?)?,
    };
    let stages = as_array(get(&v, "chain")?)?
        .iter()
        .map(stage_from)
        .collect::<Result<Vec<_>, _>>()?;
    let mut derivation = Vec::new();
    for sv in as_array(get(&v, "derivation")?)? {
        let rule = Rule::parse(as_str(get(sv, "rule")?)?)
            .ok_or_else(|| CertError::Malformed("unknown derivation rule".into()))?;
        let inputs = as_array(get(sv, "inputs")?)?
            .iter()
            .map(operand_from)
            .collect::<Result<Vec<_>, _>>()?;
        derivation.push(DerivationStep {
            rule,
            inputs,
            output: as_f64(get(sv, "output")?)?,
        });
    }
    let ns_v = get(&v, "bound_nonsmooth")?;
    let (bound_nonsmooth, no_bound_reason) = if let Some(obj) = ns_v.as_object() {
        let reason = obj
            .get("no_bound")
            .and_then(|r| r.as_str())
            .ok_or_else(|| CertError::Malformed("bad no_bound marker".into()))?;
        (None, Some(reason.to_string()))
    } else {
        (Some(as_f64(ns_v)?), None)
    };
    let nonsmooth_step = match get(&v, "nonsmooth_step")? {
        serde_json::Value::Null => None,
        other => Some(as_usize(other)?),
    };
    Ok(BoundCertificate {
        version: as_usize(get(&v, "version")?)? as u32,
        problem: as_str(get(&v, "problem")?)?.to_string(),
        architecture,
        smoothness: smoothness_from(get(&v, "smoothness")?)?,
        conditional: get(&v, "conditional")?
            .as_bool()
            .ok_or_else(|| CertError::Malformed("conditional must be a bool".into()))?,
        informational: get(&v, "informational")?
            .as_bool()
            .ok_or_else(|| CertError::Malformed("informational must be a bool".into()))?,
        chain: CompositionChain { stages },
        derivation,
        smooth_step: as_usize(get(&v, "smooth_step")?)?,
        nonsmooth_step,
        bound_smooth: as_f64(get(&v, "bound_smooth")?)?,
        bound_nonsmooth,
        no_bound_reason,
        step_count: as_usize(get(&v, "step_count")?)?,
        warnings: as_array(get(&v, "warnings")?)?
            .iter()
            .map(|w| as_str(w).map(|s| s.to_string()))
            .collect::<Result<Vec<_>, _>>()?,
    })
}
