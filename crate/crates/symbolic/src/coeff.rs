//! Coefficients: rational combinations of monomials in the cumulants
//! `κ₃, κ₄, …` and the time factors `e^{-t/2}` and `√(1-e^{-t})`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use gft_exact::Rational;

/// Highest cumulant order that can appear (`κ₂ = 1` is never stored).
pub const MAX_KAPPA: usize = 12;

/// Exponent vector of one monomial.
///
/// `half_exp` is the power of `e^{-t/2}`, so `e^{-t} = u` has `half_exp = 2`.
/// `s_exp` is the power of `s = √(1-e^{-t})`. Both may be negative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub kappa: [u8; MAX_KAPPA - 2],
    pub half_exp: i16,
    pub s_exp: i16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        kappa: [0; MAX_KAPPA - 2],
        half_exp: 0,
        s_exp: 0,
    };

    /// `κ_k`; `κ₂` is the unit monomial. Panics for `k < 2` or `k > MAX_KAPPA`.
    pub fn kappa(k: usize) -> Self {
        assert!((2..=MAX_KAPPA).contains(&k), "cumulant order {k} out of range");
        let mut m = Self::ONE;
        if k > 2 {
            m.kappa[k - 3] = 1;
        }
        m
    }

    /// `e^{-t}`.
    pub fn u() -> Self {
        Self { half_exp: 2, ..Self::ONE }
    }

    /// `e^{-t/2}`.
    pub fn half() -> Self {
        Self { half_exp: 1, ..Self::ONE }
    }

    /// `√(1-e^{-t})`.
    pub fn s() -> Self {
        Self { s_exp: 1, ..Self::ONE }
    }

    pub fn pow_s(e: i16) -> Self {
        Self { s_exp: e, ..Self::ONE }
    }

    /// The time factor `e^{-t}(1-e^{-t})` shared by every leading term.
    pub fn alpha() -> Self {
        Self {
            half_exp: 2,
            s_exp: 2,
            ..Self::ONE
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn kappa_exp(&self, k: usize) -> u8 {
        if k <= 2 || k > MAX_KAPPA {
            0
        } else {
            self.kappa[k - 3]
        }
    }

    /// Numerical value for given cumulants (`kappas[k]` is `κ_k`) and time.
    pub fn eval(&self, kappas: &[f64], t: f64) -> f64 {
        let mut v = (-0.5 * t).exp().powi(self.half_exp as i32);
        v *= (1.0 - (-t).exp()).sqrt().powi(self.s_exp as i32);
        for (i, &e) in self.kappa.iter().enumerate() {
            if e > 0 {
                v *= kappas.get(i + 3).copied().unwrap_or(0.0).powi(e as i32);
            }
        }
        v
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        let mut out = self;
        for (a, b) in out.kappa.iter_mut().zip(rhs.kappa.iter()) {
            *a += *b;
        }
        out.half_exp += rhs.half_exp;
        out.s_exp += rhs.s_exp;
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.kappa.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("k{}", i + 3)),
                _ => parts.push(format!("k{}^{}", i + 3, e)),
            }
        }
        match self.half_exp {
            0 => {}
            1 => parts.push("eh".into()),
            e => parts.push(format!("eh^{e}")),
        }
        match self.s_exp {
            0 => {}
            1 => parts.push("s".into()),
            e => parts.push(format!("s^{e}")),
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// A finite rational combination of monomials with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffPoly {
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse coefficient {0:?}")]
pub struct ParseCoeffError(pub String);

impl CoeffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), Monomial::ONE)
    }

    pub fn scalar(c: Rational) -> Self {
        Self::monomial(c, Monomial::ONE)
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The monomials present, ignoring their rational coefficients.
    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().copied().collect()
    }

    /// If this is `c · m` for the given monomial, return `c`.
    pub fn scalar_of(&self, m: &Monomial) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(m).cloned(),
            _ => None,
        }
    }

    /// Single-monomial view.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, m: Monomial) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k * m, v * c)).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &CoeffPoly) {
        for (m, v) in &other.terms {
            let slot = self.terms.entry(*m).or_insert_with(Rational::zero);
            *slot += v;
            if slot.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    pub fn eval(&self, kappas: &[f64], t: f64) -> f64 {
        self.terms.iter().map(|(m, c)| c.to_f64() * m.eval(kappas, t)).sum()
    }
}

impl Add for &CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Mul for &CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_assign(&CoeffPoly::monomial(c1 * c2, *m1 * *m2));
            }
        }
        out
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        self.scale(&Rational::from_integer(-1))
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0/1");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for CoeffPoly {
    type Err = ParseCoeffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCoeffError(s.to_string());
        let mut out = CoeffPoly::zero();
        for mono in s.split(" + ") {
            let mut factors = mono.trim().split('*');
            let c: Rational = factors.next().ok_or_else(err)?.parse().map_err(|_| err())?;
            let mut m = Monomial::ONE;
            for fac in factors {
                let (base, exp) = match fac.split_once('^') {
                    Some((b, e)) => (b, e.parse::<i16>().map_err(|_| err())?),
                    None => (fac, 1),
                };
                match base {
                    "eh" => m.half_exp += exp,
                    "s" => m.s_exp += exp,
                    k if k.starts_with('k') => {
                        let order: usize = k[1..].parse().map_err(|_| err())?;
                        if !(3..=MAX_KAPPA).contains(&order) || exp < 0 {
                            return Err(err());
                        }
                        m.kappa[order - 3] += exp as u8;
                    }
                    _ => return Err(err()),
                }
            }
            out.add_assign(&CoeffPoly::monomial(c, m));
        }
        Ok(out)
    }
}
