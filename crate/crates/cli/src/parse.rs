//! Value parsers for command-line arguments.

/// Counts such as `1000000`, `1e6`, `8e8` or `1.49e8`. The value must be a
/// non-negative integer exactly representable in a `u64`.
pub fn count(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    if let Ok(n) = t.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = t.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if !x.is_finite() || x < 0.0 || x.fract() != 0.0 || x > 9.007_199_254_740_992e15 {
        return Err(format!("`{s}` is not a non-negative integer count"));
    }
    Ok(x as u64)
}

/// `MxN`, e.g. `2x3`.
pub fn dims(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s
        .split_once(['x', 'X', '×'])
        .ok_or_else(|| format!("`{s}`: expected dimensions as MxN, e.g. 2x3"))?;
    let side = |v: &str| {
        v.trim()
            .parse::<usize>()
            .ok()
            .filter(|&d| d >= 1)
            .ok_or_else(|| format!("`{s}`: subsystem dimensions must be positive integers"))
    };
    Ok((side(m)?, side(n)?))
}

pub fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

pub fn non_negative_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 => Ok(x),
        _ => Err(format!("`{s}` is not a non-negative number")),
    }
}
