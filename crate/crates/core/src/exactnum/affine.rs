use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Neg, Sub};

use super::Rational;
use crate::error::{Error, Result};

/// `constant + Σ coeff·var`, with zero coefficients never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AffineForm {
    constant: Rational,
    coefficients: BTreeMap<String, Rational>,
}

pub type Assignment = BTreeMap<String, Rational>;

impl AffineForm {
    pub fn constant(c: Rational) -> Self {
        AffineForm {
            constant: c,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        AffineForm::default()
    }

    pub fn var(name: &str) -> Self {
        AffineForm::term(Rational::one(), name)
    }

    pub fn term(coeff: Rational, name: &str) -> Self {
        AffineForm::zero().with_term(coeff, name)
    }

    /// Add `coeff·name` to the form.
    pub fn with_term(mut self, coeff: Rational, name: &str) -> Self {
        self.add_term(coeff, name);
        self
    }

    pub fn with_constant(mut self, c: Rational) -> Self {
        self.constant += c;
        self
    }

    pub fn add_term(&mut self, coeff: Rational, name: &str) {
        let slot = self
            .coefficients
            .entry(name.to_string())
            .or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.coefficients.remove(name);
        }
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coefficient(&self, name: &str) -> Rational {
        self.coefficients.get(name).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.coefficients.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.coefficients.keys().map(String::as_str)
    }

    pub fn is_constant(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return AffineForm::zero();
        }
        AffineForm {
            constant: &self.constant * c,
            coefficients: self
                .coefficients
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    /// Exact value; every variable with a nonzero coefficient must be assigned.
    pub fn eval(&self, at: &Assignment) -> Result<Rational> {
        let mut acc = self.constant.clone();
        for (k, v) in &self.coefficients {
            let x = at.get(k).ok_or_else(|| Error::UnknownVariable(k.clone()))?;
            acc += v * x;
        }
        Ok(acc)
    }

    /// Substitute `name := replacement`.
    pub fn substitute(&self, name: &str, replacement: &AffineForm) -> Self {
        match self.coefficients.get(name) {
            None => self.clone(),
            Some(c) => {
                let mut rest = self.clone();
                rest.coefficients.remove(name);
                rest + replacement.scale(c)
            }
        }
    }
}

impl Add for AffineForm {
    type Output = AffineForm;
    fn add(mut self, rhs: AffineForm) -> AffineForm {
        self.constant += rhs.constant;
        for (k, v) in rhs.coefficients {
            self.add_term(v, &k);
        }
        self
    }
}

impl Add<&AffineForm> for &AffineForm {
    type Output = AffineForm;
    fn add(self, rhs: &AffineForm) -> AffineForm {
        self.clone() + rhs.clone()
    }
}

impl Neg for AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        self.scale(&Rational::integer(-1))
    }
}

impl Sub for AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: AffineForm) -> AffineForm {
        self + (-rhs)
    }
}

impl Sub<&AffineForm> for &AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: &AffineForm) -> AffineForm {
        self.clone() - rhs.clone()
    }
}

impl From<Rational> for AffineForm {
    fn from(c: Rational) -> Self {
        AffineForm::constant(c)
    }
}

impl fmt::Display for AffineForm {
    /// Variables in name order, constant last, e.g. `15/7*a + m - 1/7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let sign = |f: &mut fmt::Formatter<'_>, neg: bool, first: &mut bool| {
            let r = match (*first, neg) {
                (true, true) => f.write_str("-"),
                (true, false) => Ok(()),
                (false, true) => f.write_str(" - "),
                (false, false) => f.write_str(" + "),
            };
            *first = false;
            r
        };
        for (k, v) in &self.coefficients {
            sign(f, v.is_negative(), &mut first)?;
            let mag = v.abs();
            if mag == 1 {
                f.write_str(k)?;
            } else {
                write!(f, "{mag}*{k}")?;
            }
        }
        if !self.constant.is_zero() || first {
            sign(f, self.constant.is_negative(), &mut first)?;
            write!(f, "{}", self.constant.abs())?;
        }
        Ok(())
    }
}

impl fmt::Debug for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
