//! Unit-suffixed value parsing. Everything converts to strict SI here, at
//! the command-line boundary, so the physics never sees a mixed unit.

use browave::PhysicalConstants;

fn split_suffix<'a>(input: &'a str, suffixes: &[(&str, f64)]) -> Option<(&'a str, f64)> {
    for (suffix, factor) in suffixes {
        if let Some(number) = input.strip_suffix(suffix) {
            return Some((number.trim_end(), *factor));
        }
    }
    Some((input, 1.0))
}

fn parse_with(
    input: &str,
    suffixes: &[(&str, f64)],
    what: &str,
    require_positive: bool,
) -> Result<f64, String> {
    let trimmed = input.trim();
    let (number, factor) =
        split_suffix(trimmed, suffixes).ok_or_else(|| format!("empty {what} value"))?;
    let value: f64 = number
        .parse()
        .map_err(|_| format!("invalid {what} '{input}'"))?;
    if !value.is_finite() {
        return Err(format!("{what} must be finite, got '{input}'"));
    }
    if require_positive && value <= 0.0 {
        return Err(format!("{what} must be positive, got '{input}'"));
    }
    Ok(value * factor)
}

/// Mass in kg from `720Da`, `1.2e-24kg`, or a bare number of kg.
pub fn parse_mass(input: &str, constants: &PhysicalConstants) -> Result<f64, String> {
    parse_with(
        input,
        &[("Da", constants.dalton), ("kg", 1.0)],
        "mass",
        true,
    )
}

/// Length in m from `0.35nm`, `1e-9m`, or a bare number of m.
pub fn parse_length(input: &str, what: &str) -> Result<f64, String> {
    parse_with(input, &[("nm", 1e-9), ("m", 1.0)], what, true)
}

/// Temperature in K, bare or with a `K` suffix.
pub fn parse_temperature(input: &str) -> Result<f64, String> {
    parse_with(input, &[("K", 1.0)], "temperature", true)
}

/// Pressure/modulus in Pa from `1GPa`, `80MPa`, `1e9Pa`, or bare Pa.
pub fn parse_pressure(input: &str, what: &str) -> Result<f64, String> {
    parse_with(
        input,
        &[("GPa", 1e9), ("MPa", 1e6), ("kPa", 1e3), ("Pa", 1.0)],
        what,
        true,
    )
}

/// Dynamic viscosity in Pa·s from `1Pas`, `0.9mPas`, or bare Pa·s.
pub fn parse_viscosity(input: &str) -> Result<f64, String> {
    parse_with(
        input,
        &[("mPas", 1e-3), ("Pas", 1.0), ("Pa.s", 1.0)],
        "viscosity",
        true,
    )
}

/// Comma-separated list of numbers.
pub fn parse_list(input: &str, what: &str) -> Result<Vec<f64>, String> {
    let values: Result<Vec<f64>, String> = input
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid {what} '{part}'"))
        })
        .collect();
    let values = values?;
    if values.is_empty() {
        return Err(format!("need at least one {what}"));
    }
    Ok(values)
}

/// Comma-separated list of times.
pub fn parse_times(input: &str) -> Result<Vec<f64>, String> {
    parse_list(input, "time")
}
