use crate::deepnet::{AnalyticMap, BeaconsNet, DeepNet, PlainNet};
use crate::mlp::{InputNorm, Mlp};
use crate::NeuralError;
use std::fmt::Write as _;
use std::path::Path;

/// Checkpoint format: a JSON header (dims, chain description, seed, input
/// normalization) plus a flat parameter array in canonical row-major order,
/// every float printed with 17 significant digits.

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

fn dims(mlp: &Mlp) -> String {
    format!(
        "{{\"d_in\":{},\"n_hidden\":{},\"d_out\":{}}}",
        mlp.d_in, mlp.n_hidden, mlp.d_out
    )
}

fn map_json(m: &AnalyticMap) -> String {
    match m {
        AnalyticMap::Affine { scale, offset } => format!(
            "{{\"form\":\"affine\",\"scale\":{},\"offset\":{}}}",
            f(*scale),
            f(*offset)
        ),
        other => format!(
            "{{\"form\":\"{}\",\"c\":{}}}",
            other.form_name(),
            f(other.c().unwrap())
        ),
    }
}

fn float_array(vals: &[f64]) -> String {
    let mut s = String::from("[");
    for (i, v) in vals.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&f(*v));
    }
    s.push(']');
    s
}

pub fn checkpoint_to_string(net: &DeepNet, seed: u64) -> String {
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"format\": \"checkpoint-v1\",");
    let _ = writeln!(s, "  \"kind\": \"{}\",", net.kind());
    let _ = writeln!(s, "  \"seed\": {seed},");
    let (norm, params): (&InputNorm, Vec<f64>) = match net {
        DeepNet::Plain(p) => {
            let _ = writeln!(
                s,
                "  \"stack\": [{}],",
                p.stack.iter().map(dims).collect::<Vec<_>>().join(",")
            );
            (&p.norm, p.stack.iter().flat_map(|m| m.params_flat()).collect())
        }
        DeepNet::Beacons(b) => {
            let _ = writeln!(s, "  \"head\": {},", dims(&b.head));
            let _ = writeln!(s, "  \"suppression\": {},", map_json(&b.suppression));
            let _ = writeln!(
                s,
                "  \"correctors\": [{}],",
                b.correctors.iter().map(dims).collect::<Vec<_>>().join(",")
            );
            let _ = writeln!(
                s,
                "  \"unnormalize\": [{}],",
                b.unnormalize
                    .iter()
                    .map(map_json)
                    .collect::<Vec<_>>()
                    .join(",")
            );
            let _ = writeln!(s, "  \"stage_errors\": {},", float_array(&b.stage_errors));
            (
                &b.norm,
                b.head
                    .params_flat()
                    .into_iter()
                    .chain(b.correctors.iter().flat_map(|m| m.params_flat()))
                    .collect(),
            )
        }
    };
    let _ = writeln!(
        s,
        "  \"norm\": {{\"lo\": {}, \"hi\": {}}},",
        float_array(&norm.lo),
        float_array(&norm.hi)
    );
    let _ = writeln!(s, "  \"params\": {}", float_array(&params));
    s.push('}');
    s
}

pub fn save_checkpoint(net: &DeepNet, seed: u64, path: &Path) -> Result<(), NeuralError> {
    std::fs::write(path, checkpoint_to_string(net, seed))
        .map_err(|e| NeuralError::Io(e.to_string()))
}

fn get<'a>(v: &'a serde_json::Value, key: &str) -> Result<&'a serde_json::Value, NeuralError> {
    v.get(key)
        .ok_or_else(|| NeuralError::Malformed(format!("missing key `{key}`")))
}

fn as_f64(v: &serde_json::Value) -> Result<f64, NeuralError> {
    v.as_f64()
        .ok_or_else(|| NeuralError::Malformed("expected number".into()))
}

fn float_vec(v: &serde_json::Value) -> Result<Vec<f64>, NeuralError> {
    v.as_array()
        .ok_or_else(|| NeuralError::Malformed("expected array".into()))?
        .iter()
        .map(as_f64)
        .collect()
}

fn mlp_dims(v: &serde_json::Value) -> Result<Mlp, NeuralError> {
    let d_in = as_f64(get(v, "d_in")?)? as usize;
    let n_hidden = as_f64(get(v, "n_hidden")?)? as usize;
    let d_out = as_f64(get(v, "d_out")?)? as usize;
    Ok(Mlp::zeros(d_in, n_hidden, d_out))
}

fn map_from_json(v: &serde_json::Value) -> Result<AnalyticMap, NeuralError> {
    let form = get(v, "form")?
        .as_str()
        .ok_or_else(|| NeuralError::Malformed("form must be a string".into()))?;
    Ok(match form {
        "affine" => AnalyticMap::Affine {
            scale: as_f64(get(v, "scale")?)?,
            offset: as_f64(get(v, "offset")?)?,
        },
        "arcsinh_over_c" => AnalyticMap::ArcsinhOverC {
            c: as_f64(get(v, "c")?)?,
        },
        "arctan_over_c" => AnalyticMap::ArctanOverC {
            c: as_f64(get(v, "c")?)?,
        },
        "tanh_over_c" => AnalyticMap::TanhOverC {
            c: as_f64(get(v, "c")?)?,
        },
        "identity_over_c" => AnalyticMap::IdentityOverC {
            c: as_f64(get(v, "c")?)?,
        },
        other => return Err(NeuralError::Malformed(format!("unknown map form {other}"))),
    })
}

/// Load a checkpoint; returns the network and the recorded seed.
pub fn load_checkpoint(path: &Path) -> Result<(DeepNet, u64), NeuralError> {
    let text = std::fs::read_to_string(path).map_err(|e| NeuralError::Io(e.to_string()))?;
    parse_checkpoint(&text)
}

pub fn parse_checkpoint(text: &str) -> Result<(DeepNet, u64), NeuralError> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| NeuralError::Malformed(e.to_string()))?;
    let seed = as_f64(get(&v, "seed")?)? as u64;
    let norm_v = get(&v, "norm")?;
    let norm = InputNorm {
        lo: float_vec(get(norm_v, "lo")?)?,
        hi: float_vec(get(norm_v, "hi")?)?,
    };
    let params = float_vec(get(&v, "params")?)?;
    let kind = get(&v, "kind")?
        .as_str()
        .ok_or_else(|| NeuralError::Malformed("kind must be a string".into()))?;
    let mut cursor = 0usize;
    let mut take = |mlp: &mut Mlp| -> Result<(), NeuralError> {
        let n = mlp.param_count();
        if cursor + n > params.len() {
            return Err(NeuralError::Malformed("parameter array too short".into()));
        }
        mlp.set_params_flat(&params[cursor..cursor + n]);
        cursor += n;
        Ok(())
    };
    let net = match kind {
        "plain" => {
            let stack_v = get(&v, "stack")?
                .as_array()
                .ok_or_else(|| NeuralError::Malformed("stack must be an array".into()))?;
            let mut stack = Vec::new();
            for sv in stack_v {
                let mut mlp = mlp_dims(sv)?;
                take(&mut mlp)?;
                stack.push(mlp);
            }
            DeepNet::Plain(PlainNet { stack, norm })
        }
        "beacons" => {
            let mut head = mlp_dims(get(&v, "head")?)?;
            take(&mut head)?;
            let suppression = map_from_json(get(&v, "suppression")?)?;
            let mut correctors = Vec::new();
            for cv in get(&v, "correctors")?
                .as_array()
                .ok_or_else(|| NeuralError::Malformed("correctors must be an array".into()))?
            {
                let mut mlp = mlp_dims(cv)?;
                take(&mut mlp)?;
                correctors.push(mlp);
            }
            let unnormalize = get(&v, "unnormalize")?
                .as_array()
                .ok_or_else(|| NeuralError::Malformed("unnormalize must be an array".into()))?
                .iter()
                .map(map_from_json)
                .collect::<Result<Vec<_>, _>>()?;
            let stage_errors = float_vec(get(&v, "stage_errors")?)?;
            DeepNet::Beacons(BeaconsNet {
                head,
                suppression,
                correctors,
                unnormalize,
                norm,
                stage_errors,
            })
        }
        other => return Err(NeuralError::Malformed(format!("unknown kind {other}"))),
    };
    if cursor != params.len() {
        return Err(NeuralError::Malformed(format!(
            "parameter array has {} unused values",
            params.len() - cursor
        )));
    }
    Ok((net, seed))
}
