use num_complex::Complex;

use super::{KetExpr, Node};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::{normalize, Dims, PureState};

enum Value<T> {
    Scalar(Complex<T>),
    Vector(Vec<Complex<T>>),
}

struct Evaluator<'a> {
    dims: &'a Dims,
}

impl Evaluator<'_> {
    fn basis_index(&self, label: &str) -> usize {
        label.chars().zip(self.dims.as_slice()).fold(0, |acc, (c, &d)| {
            let x = match c {
                '+' => 0,
                '-' => 1,
                c => c.to_digit(10).expect("validated label") as usize,
            };
            acc * d + x
        })
    }

    fn eval<T: Real>(&self, node: &Node) -> Result<Value<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        Ok(match node {
            Node::Real(v) => Value::Scalar(Complex::new(T::lit(*v), T::zero())),
            Node::Imag => Value::Scalar(Complex::new(T::zero(), T::one())),
            Node::Sqrt(v) => Value::Scalar(Complex::new(T::lit(*v).sqrt(), T::zero())),
            Node::Ket(label) => {
                let mut v = vec![zero; self.dims.total()];
                v[self.basis_index(label)] = Complex::new(T::one(), T::zero());
                Value::Vector(v)
            }
            Node::Group(inner) => self.eval(inner)?,
            Node::Neg(inner) => match self.eval::<T>(inner)? {
                Value::Scalar(s) => Value::Scalar(-s),
                Value::Vector(v) => Value::Vector(v.into_iter().map(|z| -z).collect()),
            },
            Node::Sum(a, b) | Node::Diff(a, b) => {
                let sign = if matches!(node, Node::Diff(..)) {
                    -T::one()
                } else {
                    T::one()
                };
                match (self.eval::<T>(a)?, self.eval::<T>(b)?) {
                    (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + y.scale(sign)),
                    (Value::Vector(x), Value::Vector(y)) => {
                        Value::Vector(x.into_iter().zip(y).map(|(p, q)| p + q.scale(sign)).collect())
                    }
                    _ => unreachable!("parser rejects mixed sums"),
                }
            }
            Node::Product(a, b) => match (self.eval::<T>(a)?, self.eval::<T>(b)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
                (Value::Scalar(s), Value::Vector(v)) | (Value::Vector(v), Value::Scalar(s)) => {
                    Value::Vector(v.into_iter().map(|z| s * z).collect())
                }
                (Value::Vector(_), Value::Vector(_)) => unreachable!("parser rejects ket products"),
            },
            Node::Quotient(a, b) => {
                let Value::Scalar(d) = self.eval::<T>(b)? else {
                    unreachable!("parser rejects ket divisors")
                };
                if d.norm_sqr() == T::zero() {
                    return Err(Error::InvalidArgument("division by zero in ket expression".into()));
                }
                match self.eval::<T>(a)? {
                    Value::Scalar(x) => Value::Scalar(x / d),
                    Value::Vector(v) => Value::Vector(v.into_iter().map(|z| z / d).collect()),
                }
            }
        })
    }
}

/// Evaluates to amplitudes over the inferred dims, optionally normalized.
pub fn evaluate<T: Real>(expr: &KetExpr, normalize_result: bool) -> Result<PureState<T>> {
    let dims = Dims::new(expr.dims.clone())?;
    let evaluator = Evaluator { dims: &dims };
    let Value::Vector(amps) = evaluator.eval::<T>(&expr.root)? else {
        return Err(Error::InvalidArgument("expression evaluates to a scalar".into()));
    };
    let state = PureState::new(dims, amps)?;
    if normalize_result {
        normalize(&state)
    } else {
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ket::parse;

    fn eval(text: &str, norm: bool) -> Result<PureState<f64>> {
        evaluate(&parse(text).unwrap(), norm)
    }

    #[test]
    fn singlet_amplitudes() {
        let s = eval("(|+-> - |-+>)/sqrt(2)", true).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [0.0, h, -h, 0.0];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn complex_coefficients() {
        let s = eval("0.6|01> + 0.8i|10>", false).unwrap();
        assert_eq!(s.amplitude(&[0, 1]), Complex::new(0.6, 0.0));
        assert_eq!(s.amplitude(&[1, 0]), Complex::new(0.0, 0.8));
        assert_eq!(s.amplitude(&[0, 0]), Complex::new(0.0, 0.0));
    }

    #[test]
    fn cancellation_is_zero_state() {
        assert!(matches!(eval("|0> - |0>", true), Err(Error::ZeroState)));
        let raw = eval("|0> - |0>", false).unwrap();
        assert_eq!(raw.norm_sqr(), 0.0);
    }

    #[test]
    fn qutrit_dims() {
        let s = eval("(|00>+|11>+|22>)/sqrt(3)", true).unwrap();
        assert_eq!(s.dims().as_slice(), &[3, 3]);
        assert!((s.amplitude(&[2, 2]).re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(eval("|0>/0", false), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn scalar_arithmetic() {
        let s = eval("(1+i)/2 * |1> - -|0>", false).unwrap();
        assert_eq!(s.amplitude(&[1]), Complex::new(0.5, 0.5));
        assert_eq!(s.amplitude(&[0]), Complex::new(1.0, 0.0));
    }
}
