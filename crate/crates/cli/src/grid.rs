//! Parameter grids: `start:stop:step` (inclusive) or comma lists.

use std::str::FromStr;

use qdlab::lp_reps::Exponent;

fn decimals(s: &str) -> u32 {
    s.split_once('.').map_or(0, |(_, f)| f.len() as u32)
}

/// Inclusive range, computed on the common decimal scale of the endpoints
/// so that e.g. `0.1:0.9:0.1` yields `0.3`, not `0.30000000000000004`.
fn range(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let [a, b, step] = parts[..] else {
        return Err(format!("grid {spec:?} must be start:stop:step"));
    };
    let parse = |s: &str| s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or(format!("bad number {s:?} in grid {spec:?}"));
    let (fa, fb, fs) = (parse(a)?, parse(b)?, parse(step)?);
    if !(fs > 0.0) || fb < fa {
        return Err(format!("grid {spec:?} needs step > 0 and stop ≥ start"));
    }
    let scale = 10f64.powi(decimals(a).max(decimals(b)).max(decimals(step)) as i32);
    let (ia, ib, is) = ((fa * scale).round(), (fb * scale).round(), (fs * scale).round());
    if is == 0.0 {
        return Err(format!("grid {spec:?} has a zero step at its precision"));
    }
    let count = ((ib - ia) / is).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(format!("grid {spec:?} has too many points"));
    }
    Ok((0..count).map(|i| (ia + i as f64 * is) / scale).collect())
}

fn list<T: FromStr>(spec: &str) -> Result<Vec<T>, String> {
    spec.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| format!("bad value {s:?} in list {spec:?}")))
        .collect()
}

pub fn reals(spec: &str) -> Result<Vec<f64>, String> {
    if spec.contains(':') {
        range(spec)
    } else {
        list(spec)
    }
}

pub fn exponents(spec: &str) -> Result<Vec<Exponent>, String> {
    if spec.contains(':') {
        Ok(range(spec)?.into_iter().map(Exponent::Finite).collect())
    } else {
        list(spec)
    }
}

pub fn naturals(spec: &str) -> Result<Vec<usize>, String> {
    if spec.contains(':') {
        range(spec)?
            .into_iter()
            .map(|x| {
                (x.fract() == 0.0 && x >= 0.0)
                    .then_some(x as usize)
                    .ok_or(format!("grid {spec:?} must contain integers"))
            })
            .collect()
    } else {
        list(spec)
    }
}
