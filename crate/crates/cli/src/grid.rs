/// Parses `start:stop:step`. The stop value is included when
/// `(stop - start) / step` is within 1e-9 of an integer.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be start:stop:step, got {spec:?}"));
    }
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("bad number {s:?} in grid {spec:?}"))
    };
    let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
    if step.is_nan() || step <= 0.0 {
        return Err(format!("grid step must be positive, got {step}"));
    }
    if stop < start {
        return Err(format!("grid stop {stop} is below start {start}"));
    }
    let ratio = (stop - start) / step;
    let inclusive = (ratio - ratio.round()).abs() <= 1e-9;
    let steps = if inclusive {
        ratio.round()
    } else {
        ratio.floor()
    };
    if steps > 1e7 {
        return Err(format!("grid {spec:?} has too many points"));
    }
    let steps = steps as usize;
    Ok((0..=steps)
        .map(|k| {
            if inclusive && k == steps {
                stop
            } else {
                start + k as f64 * step
            }
        })
        .collect())
}
