use crate::CliError;

fn parse_number(s: &str) -> Result<f64, CliError> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("'{s}' is not a number")))?;
    if !x.is_finite() {
        return Err(CliError::Usage(format!("'{s}' is not finite")));
    }
    Ok(x)
}

/// Parses `x`, `a,b,c` or `start:stop:step` (inclusive) into a nonempty
/// ascending list. Range points are rounded to 12 significant digits.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(CliError::Usage("empty grid".into()));
    }
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(CliError::Usage(format!("grid '{spec}' must be start:stop:step")));
        };
        let (start, stop, step) = (parse_number(start)?, parse_number(stop)?, parse_number(step)?);
        if step <= 0.0 || stop < start {
            return Err(CliError::Usage(format!("grid '{spec}' is not ascending")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| crate::format::round_real(start + i as f64 * step))
            .collect()
    } else {
        spec.split(',').map(parse_number).collect::<Result<Vec<_>, _>>()?
    };
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage(format!("grid '{spec}' is not strictly ascending")));
    }
    Ok(values)
}
