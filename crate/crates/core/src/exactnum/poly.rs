use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::Rational;
use crate::error::{Error, Result};

/// `c0 + c1·x + c2·x²` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadPoly {
    pub c0: Rational,
    pub c1: Rational,
    pub c2: Rational,
}

impl QuadPoly {
    pub fn new(c0: Rational, c1: Rational, c2: Rational) -> Self {
        QuadPoly { c0, c1, c2 }
    }

    pub fn constant(c: Rational) -> Self {
        QuadPoly::new(c, Rational::zero(), Rational::zero())
    }

    /// `scale · (p + q·x)²`
    pub fn scaled_square(scale: &Rational, p: &Rational, q: &Rational) -> Self {
        QuadPoly::new(
            scale * p * p,
            scale * Rational::integer(2) * p * q,
            scale * q * q,
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.c0 + x * (&self.c1 + x * &self.c2)
    }

    pub fn derivative_at(&self, x: &Rational) -> Rational {
        &self.c1 + Rational::integer(2) * &self.c2 * x
    }

    fn antiderivative(&self, x: &Rational) -> Rational {
        x * (&self.c0 + x * (&self.c1 / Rational::integer(2) + x * &self.c2 / Rational::integer(3)))
    }

    pub fn integrate(&self, lo: &Rational, hi: &Rational) -> Rational {
        self.antiderivative(hi) - self.antiderivative(lo)
    }
}

impl fmt::Display for QuadPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (c, mono) in [(&self.c0, ""), (&self.c1, "x"), (&self.c2, "x^2")] {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            match (mono.is_empty(), mag == 1) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(mono)?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Continuous piecewise polynomial of degree at most two.
///
/// Piece `j` lives on `[breakpoints[j], breakpoints[j + 1]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseQuadratic {
    breakpoints: Vec<Rational>,
    pieces: Vec<QuadPoly>,
}

impl PiecewiseQuadratic {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<QuadPoly>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPiecewise(format!(
                "need at least two breakpoints, got {}",
                breakpoints.len()
            )));
        }
        if pieces.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidPiecewise(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                pieces.len()
            )));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPiecewise(format!(
                "breakpoints not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        for (j, x) in breakpoints.iter().enumerate().skip(1).take(pieces.len() - 1) {
            let left = pieces[j - 1].eval(x);
            let right = pieces[j].eval(x);
            if left != right {
                return Err(Error::Discontinuous {
                    at: Box::new(x.clone()),
                    left: Box::new(left),
                    right: Box::new(right),
                });
            }
        }
        Ok(PiecewiseQuadratic {
            breakpoints,
            pieces,
        })
    }

    pub fn single(lo: Rational, hi: Rational, piece: QuadPoly) -> Result<Self> {
        PiecewiseQuadratic::new(alloc::vec![lo, hi], alloc::vec![piece])
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[QuadPoly] {
        &self.pieces
    }

    pub fn start(&self) -> &Rational {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &Rational {
        &self.breakpoints[self.breakpoints.len() - 1]
    }

    /// Value at `x`; `None` outside the domain.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        if x < self.start() || x > self.end() {
            return None;
        }
        let j = self.breakpoints[1..]
            .iter()
            .position(|b| x <= b)
            .unwrap_or(self.pieces.len() - 1);
        Some(self.pieces[j].eval(x))
    }

    /// Exact integral over the whole domain.
    pub fn integrate(&self) -> Rational {
        self.pieces
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(p, w)| p.integrate(&w[0], &w[1]))
            .sum()
    }

    /// Split the piece containing `x` at `x`. A no-op on existing breakpoints.
    pub fn refine(&self, x: &Rational) -> Result<Self> {
        if x <= self.start() || x >= self.end() {
            return Err(Error::InvalidPiecewise(format!("{x} is not interior")));
        }
        if self.breakpoints.contains(x) {
            return Ok(self.clone());
        }
        let j = self.breakpoints.iter().position(|b| b > x).unwrap() - 1;
        let mut bps = self.breakpoints.clone();
        let mut pieces = self.pieces.clone();
        bps.insert(j + 1, x.clone());
        pieces.insert(j + 1, pieces[j].clone());
        PiecewiseQuadratic::new(bps, pieces)
    }
}

impl fmt::Display for PiecewiseQuadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, p) in self.pieces.iter().enumerate() {
            if j > 0 {
                f.write_str("\n")?;
            }
            write!(
                f,
                "[{}, {}]: {}",
                self.breakpoints[j],
                self.breakpoints[j + 1],
                p
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn integrates_simple_profiles() {
        let one = PiecewiseQuadratic::single(q!(0), q!(1), QuadPoly::constant(q!(1))).unwrap();
        assert_eq!(one.integrate(), q!(1));
        // (1 - x)^2
        let sq = PiecewiseQuadratic::single(
            q!(0),
            q!(1),
            QuadPoly::scaled_square(&q!(1), &q!(1), &q!(-1)),
        )
        .unwrap();
        assert_eq!(sq.integrate(), q!(1, 3));
    }

    #[test]
    fn rejects_malformed() {
        assert!(PiecewiseQuadratic::new(vec![q!(0)], vec![]).is_err());
        assert!(PiecewiseQuadratic::new(
            vec![q!(0), q!(0)],
            vec![QuadPoly::constant(q!(1))]
        )
        .is_err());
        let err = PiecewiseQuadratic::new(
            vec![q!(0), q!(1), q!(2)],
            vec![QuadPoly::constant(q!(1)), QuadPoly::constant(q!(2))],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Discontinuous { .. }));
    }

    #[test]
    fn eval_and_refine() {
        let pw = PiecewiseQuadratic::new(
            vec![q!(0), q!(1), q!(2)],
            vec![
                QuadPoly::new(q!(0), q!(1), q!(0)),
                QuadPoly::new(q!(2), q!(-1), q!(0)),
            ],
        )
        .unwrap();
        assert_eq!(pw.eval(&q!(1)), Some(q!(1)));
        assert_eq!(pw.eval(&q!(3, 2)), Some(q!(1, 2)));
        assert_eq!(pw.eval(&q!(3)), None);
        let fine = pw.refine(&q!(1, 3)).unwrap();
        assert_eq!(fine.breakpoints().len(), 4);
        assert_eq!(fine.integrate(), pw.integrate());
        assert!(pw.refine(&q!(2)).is_err());
    }

    #[test]
    fn display() {
        let p = QuadPoly::new(q!(54, 665), q!(-6, 95), q!(-23, 190));
        assert_eq!(p.to_string(), "54/665 - 6/95*x - 23/190*x^2");
        assert_eq!(QuadPoly::default().to_string(), "0");
    }
}
