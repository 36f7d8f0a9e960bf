use crate::scalar::{from_usize, Scalar};

/// Dense polynomial, coefficient `i` multiplies `x^i`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Poly<T> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = T::one();
        Self { coeffs }
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self {
                coeffs: vec![T::zero()],
            };
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * from_usize(i))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).copied().unwrap_or_else(T::zero);
        Self {
            coeffs: (0..n).map(|i| get(self, i) + get(other, i)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        Self {
            coeffs: coeffs.iter().map(|&c| T::from(c).unwrap()).collect(),
        }
    }

    /// `sum |c_i|`, which bounds `|p(x)| / x^deg` for `x >= 1`.
    pub fn abs_sum(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.abs())
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != T::zero())
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_and_derivative() {
        let p = Poly::<f64>::from_coeffs(&[1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 9.0);
        assert_eq!(p.derivative().coeffs, vec![-2.0, 6.0]);
        assert_eq!(p.mul(&p).eval(2.0), 81.0);
        assert_eq!(p.add(&Poly::monomial(3)).eval(2.0), 17.0);
        assert_eq!(Poly::<f64>::monomial(0).derivative().degree(), 0);
    }
}
