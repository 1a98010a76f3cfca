use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::cyclotomic;
use crate::phase::{fmt_rational, frac, rat, to_f64, LinearForm, Param, PhaseExponent, Rational};

/// Exact complex number `Σ q·e^{2πi·x}` with rational `q` and phase exponents `x`.
///
/// Terms with equal exponents are merged and zero scalars dropped. Constant
/// phases sharing a parameter part are reduced in the cyclotomic field they
/// generate, so relations like `1 + ω + ω² = 0` are detected. Equality is
/// decided by subtraction.
#[derive(Clone, Debug, Default)]
pub struct Coefficient {
    terms: BTreeMap<PhaseExponent, Rational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rational(q: Rational) -> Self {
        Self::term(q, PhaseExponent::zero())
    }

    pub fn phase(x: PhaseExponent) -> Self {
        Self::term(Rational::one(), x)
    }

    /// `re + im·i` with rational parts.
    pub fn gaussian(re: Rational, im: Rational) -> Self {
        Self::from_terms([(re, PhaseExponent::zero()), (im, PhaseExponent::constant(rat(1, 4)))])
    }

    pub fn term(q: Rational, x: PhaseExponent) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(x, q);
        }
        let mut c = Coefficient { terms };
        c.normalize();
        c
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, PhaseExponent)>) -> Self {
        let mut c = Coefficient::zero();
        for (q, x) in terms {
            c.accumulate(x, q);
        }
        c.normalize();
        c
    }

    fn accumulate(&mut self, x: PhaseExponent, q: Rational) {
        if q.is_zero() {
            return;
        }
        let slot = self.terms.entry(x).or_insert_with(Rational::zero);
        *slot += q;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|q| q.is_one()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PhaseExponent, &Rational)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// The value as a plain rational, when it has no phase.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (x, q) = self.terms.iter().next().unwrap();
                x.is_zero().then(|| q.clone())
            }
            _ => None,
        }
    }

    /// `(q, x)` when the value is a single rational multiple of a phase.
    pub fn as_single_phase(&self) -> Option<(Rational, PhaseExponent)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (x, q) = self.terms.iter().next().unwrap();
        Some((q.clone(), x.clone()))
    }

    pub fn scale(&self, k: &Rational) -> Coefficient {
        if k.is_zero() {
            return Coefficient::zero();
        }
        Coefficient { terms: self.terms.iter().map(|(x, q)| (x.clone(), q * k)).collect() }
    }

    /// Multiplies by `e^{2πi·x}`.
    pub fn mul_phase(&self, x: &PhaseExponent) -> Coefficient {
        if x.is_zero() {
            return self.clone();
        }
        Coefficient::from_terms(self.terms.iter().map(|(y, q)| (q.clone(), y + x)))
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Coefficient {
        Coefficient::from_terms(self.terms.iter().map(|(x, q)| (q.clone(), -x)))
    }

    pub fn substitute(&self, subs: &BTreeMap<Param, LinearForm>) -> Coefficient {
        Coefficient::from_terms(self.terms.iter().map(|(x, q)| (q.clone(), x.substitute(subs))))
    }

    /// Floating-point value `(re, im)` when every parameter is bound.
    pub fn approx(&self, values: &BTreeMap<Param, f64>) -> Option<(f64, f64)> {
        let mut re = 0.0;
        let mut im = 0.0;
        for (x, q) in &self.terms {
            let angle = std::f64::consts::TAU * x.form().evaluate(values)?;
            re += to_f64(q) * angle.cos();
            im += to_f64(q) * angle.sin();
        }
        Some((re, im))
    }

    /// LCM of the denominators of all constant phase parts.
    pub(crate) fn root_order(&self) -> u64 {
        self.terms.keys().map(|x| denom_u64(x.form().constant_part())).fold(1, cyclotomic::lcm)
    }

    /// Coordinates in the Q-basis `{e^{2πi·p}·ζ_n^k : k < φ(n)}`, where `p`
    /// ranges over parameter parts. `n` must be a multiple of [`Self::root_order`].
    pub(crate) fn expand(&self, n: u64) -> Vec<(LinearForm, usize, Rational)> {
        let mut groups: BTreeMap<LinearForm, Vec<Rational>> = BTreeMap::new();
        for (x, q) in &self.terms {
            let k = exponent_index(x.form().constant_part(), n);
            let poly = groups.entry(x.form().linear_part()).or_insert_with(|| vec![Rational::zero(); n as usize]);
            poly[k] += q;
        }
        let mut out = Vec::new();
        for (lin, poly) in groups {
            for (k, c) in cyclotomic::reduce(poly, n).into_iter().enumerate() {
                if !c.is_zero() {
                    out.push((lin.clone(), k, c));
                }
            }
        }
        out
    }

    /// Inverse of [`Self::expand`].
    #[cfg(test)]
    pub(crate) fn from_expansion(
        parts: impl IntoIterator<Item = (LinearForm, usize, Rational)>,
        n: u64,
    ) -> Coefficient {
        Coefficient::from_terms(parts.into_iter().map(|(lin, k, q)| {
            let mut f = lin;
            f.add_scaled(&LinearForm::constant(rat(k as i64, n as i64)), &Rational::one());
            (q, PhaseExponent::new(f))
        }))
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, q| !q.is_zero());
        loop {
            let mut groups: BTreeMap<LinearForm, Vec<(Rational, Rational)>> = BTreeMap::new();
            for (x, q) in &self.terms {
                groups.entry(x.form().linear_part()).or_default().push((x.form().constant_part().clone(), q.clone()));
            }
            let mut changed = false;
            let mut out = BTreeMap::new();
            for (lin, members) in groups {
                let n = members.iter().map(|(c, _)| denom_u64(c)).fold(1, cyclotomic::lcm);
                if n == 1 {
                    for (c, q) in members {
                        out.insert(phase_of(&lin, c), q);
                    }
                    continue;
                }
                let mut poly = vec![Rational::zero(); n as usize];
                for (c, q) in &members {
                    poly[exponent_index(c, n)] += q;
                }
                let reduced = cyclotomic::reduce(poly, n);
                let mut fresh = Vec::new();
                for (k, q) in reduced.into_iter().enumerate() {
                    if !q.is_zero() {
                        fresh.push((frac(&rat(k as i64, n as i64)), q));
                    }
                }
                let mut before: Vec<_> = members.clone();
                before.sort();
                let mut after = fresh.clone();
                after.sort();
                if before != after {
                    changed = true;
                }
                for (c, q) in fresh {
                    out.insert(phase_of(&lin, c), q);
                }
            }
            self.terms = out;
            if !changed {
                break;
            }
        }
    }
}

fn phase_of(lin: &LinearForm, c: Rational) -> PhaseExponent {
    let mut f = lin.clone();
    f.add_scaled(&LinearForm::constant(c), &Rational::one());
    PhaseExponent::new(f)
}

fn denom_u64(r: &Rational) -> u64 {
    use num_traits::ToPrimitive;
    r.denom().to_u64().expect("phase denominator exceeds u64")
}

fn exponent_index(c: &Rational, n: u64) -> usize {
    use num_traits::ToPrimitive;
    let scaled = c * Rational::from_integer(n.into());
    debug_assert!(scaled.is_integer());
    scaled.to_integer().to_usize().expect("constant phase outside [0,1)")
}

impl PartialEq for Coefficient {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for Coefficient {}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        for (x, q) in &rhs.terms {
            out.accumulate(x.clone(), q.clone());
        }
        out.normalize();
        out
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        for (x, q) in &rhs.terms {
            out.accumulate(x.clone(), -q);
        }
        out.normalize();
        out
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q);
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q);
        }
        let mut out = Coefficient::zero();
        for (x, p) in &self.terms {
            for (y, q) in &rhs.terms {
                out.accumulate(x + y, p * q);
            }
        }
        out.normalize();
        out
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (x, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            let mag = q.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if x.is_zero() {
                f.write_str(&fmt_rational(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}·", fmt_rational(&mag))?;
                }
                write!(f, "e^{{2πi({x})}}")?;
            }
        }
        Ok(())
    }
}
