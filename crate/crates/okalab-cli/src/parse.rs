//! Parsers for command-line values: complex numbers "re,im", handle
//! products "fplus*fminus", and the Laurent polynomial syntax
//! "c*z^j*w^k ± ...".

use num_complex::Complex64;
use okalab::curvelab::{LaurentPoly, LaurentTerm};
use okalab::monodromy::FunctionHandle;

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected 're,im', got '{s}'"));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("bad real part in '{s}'"))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("bad imaginary part in '{s}'"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("complex value '{s}' must be finite"));
    }
    Ok(Complex64::new(re, im))
}

/// Handle grammar: '*'-separated atoms from {fplus, fminus, fplus-shift}.
/// Shift atoms take λ from the --lambda option.
pub fn parse_handle(spec: &str, lambda: Option<Complex64>) -> Result<FunctionHandle, String> {
    let mut parts = Vec::new();
    for atom in spec.split('*') {
        let atom = atom.trim();
        match atom {
            "fplus" => parts.push(FunctionHandle::fplus()),
            "fminus" => parts.push(FunctionHandle::fminus()),
            "fplus-shift" => {
                let lam = lambda
                    .ok_or_else(|| "handle 'fplus-shift' needs --lambda re,im".to_string())?;
                parts.push(FunctionHandle::fplus_shift(lam));
            }
            other => {
                return Err(format!(
                    "unknown handle atom '{other}' (expected fplus, fminus, or fplus-shift)"
                ))
            }
        }
    }
    FunctionHandle::product(&parts).map_err(|e| e.to_string())
}

/// Parse "c*z^j*w^k ± ..." with real coefficients and integer (possibly
/// negative) exponents; bare variables mean exponent 1, the '*' between a
/// coefficient and a variable may be omitted.
pub fn parse_laurent(src: &str) -> Result<LaurentPoly, String> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut terms = Vec::new();
    let mut i = 0usize;
    loop {
        let mut sign = 1.0;
        while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        if i >= chars.len() {
            return Err("trailing sign without a term".into());
        }
        let (term, next) = parse_term(&chars, i)?;
        terms.push(LaurentTerm {
            z_exp: term.1,
            w_exp: term.2,
            coeff: Complex64::new(sign * term.0, 0.0),
        });
        i = next;
        if i >= chars.len() {
            break;
        }
        if chars[i] != '+' && chars[i] != '-' {
            return Err(format!(
                "unexpected character '{}' at position {i}",
                chars[i]
            ));
        }
    }
    LaurentPoly::new(terms).map_err(|e| e.to_string())
}

/// One term: optional coefficient, then optional z/w powers. Returns
/// (coefficient, z exponent, w exponent) and the index after the term.
fn parse_term(chars: &[char], mut i: usize) -> Result<((f64, i64, i64), usize), String> {
    let mut coeff = 1.0f64;
    let mut z_exp = 0i64;
    let mut w_exp = 0i64;
    let mut saw_anything = false;

    if i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
        let (value, next) = parse_number(chars, i)?;
        coeff = value;
        i = next;
        saw_anything = true;
        if i < chars.len() && chars[i] == '*' {
            i += 1;
        }
    }
    loop {
        if i < chars.len() && (chars[i] == 'z' || chars[i] == 'w') {
            let var = chars[i];
            i += 1;
            let mut exp = 1i64;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let (value, next) = parse_int(chars, i)?;
                exp = value;
                i = next;
            }
            if var == 'z' {
                z_exp += exp;
            } else {
                w_exp += exp;
            }
            saw_anything = true;
            if i < chars.len() && chars[i] == '*' {
                i += 1;
                continue;
            }
            continue;
        }
        break;
    }
    if !saw_anything {
        return Err(format!(
            "expected a coefficient or variable at position {i}"
        ));
    }
    Ok(((coeff, z_exp, w_exp), i))
}

fn parse_number(chars: &[char], start: usize) -> Result<(f64, usize), String> {
    let mut i = start;
    while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
        i += 1;
    }
    // Scientific exponent on the coefficient, e.g. 1.5e-3.
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if j < chars.len() && chars[j].is_ascii_digit() {
            i = j;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
        }
    }
    let text: String = chars[start..i].iter().collect();
    let value: f64 = text.parse().map_err(|_| format!("bad number '{text}'"))?;
    Ok((value, i))
}

fn parse_int(chars: &[char], start: usize) -> Result<(i64, usize), String> {
    let mut i = start;
    if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
        i += 1;
    }
    let digits_start = i;
    while i < chars.len() && chars[i].is_ascii_digit() {
        i += 1;
    }
    if i == digits_start {
        return Err(format!("expected an integer exponent at position {start}"));
    }
    let text: String = chars[start..i].iter().collect();
    let value: i64 = text.parse().map_err(|_| format!("bad exponent '{text}'"))?;
    Ok((value, i))
}
