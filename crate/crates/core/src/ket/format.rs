use std::fmt::Write;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::PureState;

/// Renders `state` as a sum of `coef|label>` terms, skipping amplitudes with
/// modulus at or below `threshold`. Labels are digit strings, so every
/// subsystem dimension must be at most 10. Coefficients use the shortest
/// round-tripping decimal form; complex ones are parenthesized (`(0.1-0.2i)`).
/// An empty sum renders as `0`.
pub fn format_state<T: Real>(state: &PureState<T>, threshold: T) -> Result<String> {
    let dims = state.dims();
    if let Some(&d) = dims.as_slice().iter().find(|&&d| d > 10) {
        return Err(Error::UnsupportedShape(format!(
            "subsystem dimension {d} cannot be written with single-digit labels"
        )));
    }
    let mut out = String::new();
    let mut max_digit = vec![0usize; dims.len()];
    for (flat, amp) in state.amplitudes().iter().enumerate() {
        if !(amp.norm() > threshold) {
            continue;
        }
        let label = dims.multi_index(flat);
        for (m, &x) in max_digit.iter_mut().zip(&label) {
            *m = (*m).max(x);
        }
        push_term(&mut out, *amp, &label);
    }
    if out.is_empty() {
        return Ok("0".to_string());
    }
    // A zero-weight term pins the dimensions re-inferred from the labels.
    if max_digit.iter().zip(dims.as_slice()).any(|(&m, &d)| d > 2 && m + 1 < d) {
        let top: Vec<usize> = dims.as_slice().iter().map(|&d| d - 1).collect();
        out.push_str(" + 0");
        push_label(&mut out, &top);
    }
    Ok(out)
}

fn push_label(out: &mut String, label: &[usize]) {
    out.push('|');
    for x in label {
        write!(out, "{x}").expect("write to String");
    }
    out.push('>');
}

fn push_term<T: Real>(out: &mut String, amp: Complex<T>, label: &[usize]) {
    let first = out.is_empty();
    let zero = T::zero();
    if amp.im == zero || amp.re == zero {
        // single real or imaginary component: sign goes in front
        let (value, suffix) = if amp.im == zero { (amp.re, "") } else { (amp.im, "i") };
        let negative = value.is_sign_negative();
        match (first, negative) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        write!(out, "{}{suffix}", value.abs()).expect("write to String");
    } else {
        if !first {
            out.push_str(" + ");
        }
        let sign = if amp.im.is_sign_negative() { '-' } else { '+' };
        write!(out, "({}{sign}{}i)", amp.re, amp.im.abs()).expect("write to String");
    }
    push_label(out, label);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_named_state, NamedState};
    use crate::ket::{evaluate, parse};
    use crate::state::Dims;

    #[test]
    fn singlet_text() {
        let s: PureState<f64> = make_named_state(NamedState::BellSinglet).unwrap();
        assert_eq!(
            format_state(&s, 0.0).unwrap(),
            "0.7071067811865475|01> - 0.7071067811865475|10>"
        );
    }

    #[test]
    fn everything_below_threshold() {
        let s: PureState<f64> = crate::random::random_state(&Dims::new(vec![2, 3]).unwrap(), 4);
        assert_eq!(format_state(&s, 1.0).unwrap(), "0");
    }

    #[test]
    fn complex_and_imaginary_terms() {
        let s = PureState::new(
            Dims::qubits(2).unwrap(),
            vec![
                Complex::new(0.0, -0.5),
                Complex::new(0.25, -0.5),
                Complex::new(-0.125, 0.0),
                Complex::new(-1.5, 2.0),
            ],
        )
        .unwrap();
        let text = format_state(&s, 0.0).unwrap();
        assert_eq!(text, "-0.5i|00> + (0.25-0.5i)|01> - 0.125|10> + (-1.5+2i)|11>");
        let back: PureState<f64> = evaluate(&parse(&text).unwrap(), false).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn sparse_qutrit_keeps_dims() {
        let s = PureState::<f64>::basis(Dims::new(vec![3, 2]).unwrap(), &[0, 1]).unwrap();
        let text = format_state(&s, 0.0).unwrap();
        assert_eq!(text, "1|01> + 0|21>");
        let back: PureState<f64> = evaluate(&parse(&text).unwrap(), false).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn large_dims_rejected() {
        let s = PureState::<f64>::basis(Dims::new(vec![11, 2]).unwrap(), &[0, 0]).unwrap();
        assert!(matches!(format_state(&s, 0.0), Err(Error::UnsupportedShape(_))));
    }
}
