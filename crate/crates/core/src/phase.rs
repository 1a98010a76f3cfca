//! Exact phase bookkeeping.
//!
//! A phase is written `e^{2πi·x}` where `x` is a rational-affine form in
//! symbolic deformation parameters. Parameters are generic reals, so only the
//! constant part of `x` lives on the circle and gets reduced mod 1.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::Weight;
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parameter values, as rational-affine forms in other parameters.
pub type Substitution = BTreeMap<Param, LinearForm>;

/// Builds a [`Substitution`] from `(name, value)` pairs.
pub fn substitution<'a>(pairs: impl IntoIterator<Item = (&'a str, LinearForm)>) -> Substitution {
    pairs.into_iter().map(|(n, v)| (Param::new(n), v)).collect()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A symbolic deformation parameter such as `theta` or `lambda12`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Param(Arc<str>);

impl Param {
    pub fn new(name: &str) -> Self {
        Param(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `constant + Σ coeff·param` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct LinearForm {
    coeffs: BTreeMap<Param, Rational>,
    constant: Rational,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinearForm { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn param(name: &str) -> Self {
        Self::term(Param::new(name), Rational::one())
    }

    pub fn term(p: Param, c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(p, c);
        }
        LinearForm { coeffs, constant: Rational::zero() }
    }

    pub fn from_parts(constant: Rational, coeffs: impl IntoIterator<Item = (Param, Rational)>) -> Self {
        let mut f = LinearForm::constant(constant);
        for (p, c) in coeffs {
            f.add_term(&p, &c);
        }
        f
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<Param, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, p: &Param) -> Rational {
        self.coeffs.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn params(&self) -> impl Iterator<Item = &Param> {
        self.coeffs.keys()
    }

    pub fn add_term(&mut self, p: &Param, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(p.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(p);
        }
    }

    /// `self += k·other`
    pub fn add_scaled(&mut self, other: &LinearForm, k: &Rational) {
        if k.is_zero() {
            return;
        }
        self.constant += &other.constant * k;
        for (p, c) in &other.coeffs {
            self.add_term(p, &(c * k));
        }
    }

    pub fn scale(&self, k: &Rational) -> LinearForm {
        let mut out = LinearForm::zero();
        out.add_scaled(self, k);
        out
    }

    /// The same form with its parameter part only.
    pub fn linear_part(&self) -> LinearForm {
        LinearForm { coeffs: self.coeffs.clone(), constant: Rational::zero() }
    }

    pub fn substitute(&self, subs: &BTreeMap<Param, LinearForm>) -> LinearForm {
        let mut out = LinearForm::constant(self.constant.clone());
        for (p, c) in &self.coeffs {
            match subs.get(p) {
                Some(f) => out.add_scaled(f, c),
                None => out.add_term(p, c),
            }
        }
        out
    }

    /// Numeric value with every parameter bound, if all of them are.
    pub fn evaluate(&self, values: &BTreeMap<Param, f64>) -> Option<f64> {
        let mut v = to_f64(&self.constant);
        for (p, c) in &self.coeffs {
            v += to_f64(c) * values.get(p)?;
        }
        Some(v)
    }

    /// Parses expressions like `theta`, `-2*lambda12 + theta/2 + 1/3`.
    pub fn parse(src: &str) -> Result<LinearForm> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut out = LinearForm::zero();
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = Rational::one();
            while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let term = &s[start..i];
            if term.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{src}`")));
            }
            let (c, p) = parse_term(term)?;
            match p {
                Some(p) => out.add_term(&p, &(c * &sign)),
                None => out.constant += c * &sign,
            }
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Result<(Rational, Option<Param>)> {
    let is_ident_start = |c: char| c.is_ascii_alphabetic() || c == '_';
    // forms: NUM | NUM*IDENT | IDENT | IDENT/INT | NUM*IDENT/INT
    let (num_part, rest) = match term.find(is_ident_start) {
        None => return Ok((parse_rational(term)?, None)),
        Some(0) => ("", term),
        Some(k) => {
            let head = term[..k].trim_end_matches('*');
            (head, &term[k..])
        }
    };
    let mut c = if num_part.is_empty() { Rational::one() } else { parse_rational(num_part)? };
    let (ident, div) = match rest.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (rest, None),
    };
    if !ident.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_') {
        return Err(Error::Parse(format!("invalid term `{term}`")));
    }
    if let Some(d) = div {
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("division by zero in `{term}`")));
        }
        c /= d;
    }
    Ok((c, Some(Param::new(ident))))
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in &self.coeffs {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if mag.is_one() {
                write!(f, "{p}")?;
            } else if mag.numer().is_one() {
                write!(f, "{p}/{}", mag.denom())?;
            } else {
                write!(f, "{}*{p}", fmt_rational(&mag))?;
            }
            first = false;
        }
        if first {
            return f.write_str(&fmt_rational(&self.constant));
        }
        if !self.constant.is_zero() {
            let neg = self.constant.is_negative();
            write!(f, "{}{}", if neg { " - " } else { " + " }, fmt_rational(&self.constant.abs()))?;
        }
        Ok(())
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self.scale(&-Rational::one())
    }
}

impl AddAssign<&LinearForm> for LinearForm {
    fn add_assign(&mut self, rhs: &LinearForm) {
        self.add_scaled(rhs, &Rational::one());
    }
}

/// Reduces `r` into `[0, 1)`.
pub(crate) fn frac(r: &Rational) -> Rational {
    let fl = r.numer().div_floor(r.denom());
    r - Rational::from_integer(fl)
}

/// Exponent `x` of the unit-modulus phase `e^{2πi·x}`.
///
/// The constant part is kept in `[0, 1)`; parameter coefficients are never
/// reduced. Two exponents are equal iff their canonical forms are identical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct PhaseExponent(LinearForm);

impl PhaseExponent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(form: LinearForm) -> Self {
        let mut form = form;
        form.constant = frac(&form.constant);
        PhaseExponent(form)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(LinearForm::constant(c))
    }

    pub fn form(&self) -> &LinearForm {
        &self.0
    }

    pub fn into_form(self) -> LinearForm {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Re-applies the canonical reduction. Idempotent.
    pub fn normalized(&self) -> Self {
        Self::new(self.0.clone())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.0.scale(k))
    }

    pub fn substitute(&self, subs: &BTreeMap<Param, LinearForm>) -> Self {
        Self::new(self.0.substitute(subs))
    }

    /// Representative of the constant in `(-1/2, 1/2]`, handy for display.
    pub fn centered(&self) -> LinearForm {
        let mut f = self.0.clone();
        if f.constant > rat(1, 2) {
            f.constant -= Rational::one();
        }
        f
    }
}

impl fmt::Display for PhaseExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.centered())
    }
}

impl Add for &PhaseExponent {
    type Output = PhaseExponent;
    fn add(self, rhs: &PhaseExponent) -> PhaseExponent {
        PhaseExponent::new(&self.0 + &rhs.0)
    }
}

impl Sub for &PhaseExponent {
    type Output = PhaseExponent;
    fn sub(self, rhs: &PhaseExponent) -> PhaseExponent {
        PhaseExponent::new(&self.0 - &rhs.0)
    }
}

impl Neg for &PhaseExponent {
    type Output = PhaseExponent;
    fn neg(self) -> PhaseExponent {
        PhaseExponent::new(-&self.0)
    }
}

impl Mul<&Rational> for &PhaseExponent {
    type Output = PhaseExponent;
    fn mul(self, k: &Rational) -> PhaseExponent {
        self.scale(k)
    }
}

/// A real antisymmetric matrix whose entries are rational-affine forms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeformationMatrix {
    dim: usize,
    entries: Vec<LinearForm>,
    // (row, col, entry) for nonzero entries, used by the pairing hot loop
    nonzero: Vec<(usize, usize, LinearForm)>,
}

impl DeformationMatrix {
    pub fn zero(dim: usize) -> Self {
        DeformationMatrix { dim, entries: vec![LinearForm::zero(); dim * dim], nonzero: Vec::new() }
    }

    /// Builds a matrix from a full row-major grid, checking antisymmetry.
    pub fn from_rows(rows: Vec<Vec<LinearForm>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Dimension { expected: dim, got: row.len() });
            }
            entries.extend(row);
        }
        let m = Self::assemble(dim, entries);
        m.check_antisymmetric()?;
        Ok(m)
    }

    /// Builds the antisymmetric matrix with the given strictly-upper entries.
    pub fn from_upper(dim: usize, mut upper: impl FnMut(usize, usize) -> LinearForm) -> Self {
        let mut entries = vec![LinearForm::zero(); dim * dim];
        for j in 0..dim {
            for k in j + 1..dim {
                let e = upper(j, k);
                entries[k * dim + j] = -&e;
                entries[j * dim + k] = e;
            }
        }
        Self::assemble(dim, entries)
    }

    /// Generic symbolic matrix with entries `{prefix}{j}{k}` (1-based) above the diagonal.
    pub fn symbolic(dim: usize, prefix: &str) -> Self {
        Self::from_upper(dim, |j, k| LinearForm::param(&format!("{prefix}{}{}", j + 1, k + 1)))
    }

    fn assemble(dim: usize, entries: Vec<LinearForm>) -> Self {
        let mut nonzero = Vec::new();
        for j in 0..dim {
            for k in 0..dim {
                let e = &entries[j * dim + k];
                if !e.is_zero() {
                    nonzero.push((j, k, e.clone()));
                }
            }
        }
        DeformationMatrix { dim, entries, nonzero }
    }

    fn check_antisymmetric(&self) -> Result<()> {
        for j in 0..self.dim {
            for k in j..self.dim {
                let sum = self.get(j, k) + self.get(k, j);
                if !sum.is_zero() {
                    return Err(Error::InvariantViolation(format!(
                        "deformation matrix is not antisymmetric at ({}, {})",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, j: usize, k: usize) -> &LinearForm {
        &self.entries[j * self.dim + k]
    }

    pub fn rows(&self) -> Vec<Vec<LinearForm>> {
        (0..self.dim).map(|j| (0..self.dim).map(|k| self.get(j, k).clone()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero.is_empty()
    }

    pub fn params(&self) -> Vec<Param> {
        let mut ps: Vec<Param> = self.entries.iter().flat_map(|e| e.params().cloned()).collect();
        ps.sort();
        ps.dedup();
        ps
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &DeformationMatrix) -> DeformationMatrix {
        let n = self.dim + other.dim;
        let mut entries = vec![LinearForm::zero(); n * n];
        for j in 0..self.dim {
            for k in 0..self.dim {
                entries[j * n + k] = self.get(j, k).clone();
            }
        }
        for j in 0..other.dim {
            for k in 0..other.dim {
                entries[(self.dim + j) * n + self.dim + k] = other.get(j, k).clone();
            }
        }
        Self::assemble(n, entries)
    }

    pub fn negated(&self) -> DeformationMatrix {
        Self::assemble(self.dim, self.entries.iter().map(|e| -e).collect())
    }

    pub fn substitute(&self, subs: &BTreeMap<Param, LinearForm>) -> DeformationMatrix {
        Self::assemble(self.dim, self.entries.iter().map(|e| e.substitute(subs)).collect())
    }

    /// The unreduced bilinear form `r·θs`.
    pub fn pairing(&self, r: &Weight, s: &Weight) -> Result<LinearForm> {
        self.check_dim(r)?;
        self.check_dim(s)?;
        Ok(self.pairing_unchecked(r.components(), s.components()))
    }

    pub(crate) fn pairing_unchecked(&self, r: &[i64], s: &[i64]) -> LinearForm {
        let mut out = LinearForm::zero();
        for (j, k, e) in &self.nonzero {
            let m = r[*j] * s[*k];
            if m != 0 {
                out.add_scaled(e, &int(m));
            }
        }
        out
    }

    fn check_dim(&self, w: &Weight) -> Result<()> {
        if w.dim() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: w.dim() });
        }
        Ok(())
    }

    /// Whether the matrix has the block shape `K ⊕ (−K)` with equal halves.
    pub fn is_quantum_group_shape(&self) -> bool {
        if !self.dim.is_multiple_of(2) {
            return false;
        }
        let h = self.dim / 2;
        for j in 0..self.dim {
            for k in 0..self.dim {
                let e = self.get(j, k);
                let same_block = (j < h) == (k < h);
                if !same_block && !e.is_zero() {
                    return false;
                }
                if j < h && k < h && !(e + self.get(j + h, k + h)).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for DeformationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for j in 0..self.dim {
            if j > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for k in 0..self.dim {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(j, k))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Exponent of the bicharacter `χ(r,s) = exp(πi·r·θs)`, i.e. `r·θs / 2`.
pub fn chi(theta: &DeformationMatrix, r: &Weight, s: &Weight) -> Result<PhaseExponent> {
    Ok(PhaseExponent::new(theta.pairing(r, s)?.scale(&rat(1, 2))))
}

/// Exponent of `χ(r,s)/χ(s,r)`: homogeneous `a_r, b_s` satisfy
/// `a_r ×θ b_s = e^{2πi·x} b_s ×θ a_r` with `x = r·θs`.
pub fn exchange_phase(theta: &DeformationMatrix, r: &Weight, s: &Weight) -> Result<PhaseExponent> {
    Ok(PhaseExponent::new(theta.pairing(r, s)?))
}

/// `K ⊕ (−K)`, the only shape compatible with the undeformed coproduct.
pub fn make_quantum_group_matrix(k: &DeformationMatrix) -> Result<DeformationMatrix> {
    k.check_antisymmetric()?;
    Ok(k.direct_sum(&k.negated()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec())
    }

    fn su3_theta() -> DeformationMatrix {
        let k = DeformationMatrix::from_upper(2, |_, _| LinearForm::param("theta"));
        make_quantum_group_matrix(&k).unwrap()
    }

    #[test]
    fn chi_on_su3_weights() {
        let t = su3_theta();
        let x = chi(&t, &w(&[1, 0, 1, 0]), &w(&[1, 0, 0, 1])).unwrap();
        assert_eq!(x.form(), &LinearForm::param("theta").scale(&rat(-1, 2)));
        assert!(chi(&t, &w(&[1, 0, 1, 0]), &w(&[1, 0, 1, 0])).unwrap().is_zero());
        let z = DeformationMatrix::zero(4);
        assert!(chi(&z, &w(&[1, 2, 3, 4]), &w(&[-1, 5, 0, 2])).unwrap().is_zero());
    }

    #[test]
    fn exchange_phase_matches_table_entries() {
        let t = su3_theta();
        let x = exchange_phase(&t, &w(&[1, 0, 1, 0]), &w(&[1, 0, 0, 1])).unwrap();
        assert_eq!(x.form(), &-&LinearForm::param("theta"));
        assert!(exchange_phase(&t, &w(&[1, 0, 1, 0]), &w(&[0, 1, 0, 1])).unwrap().is_zero());
    }

    #[test]
    fn dimension_mismatch() {
        let t = su3_theta();
        assert_eq!(chi(&t, &w(&[1, 0]), &w(&[1, 0, 0, 1])), Err(Error::Dimension { expected: 4, got: 2 }));
    }

    #[test]
    fn quantum_group_matrix_shape() {
        let t = su3_theta();
        let th = LinearForm::param("theta");
        assert_eq!(t.get(0, 1), &th);
        assert_eq!(t.get(1, 0), &-&th);
        assert_eq!(t.get(2, 3), &-&th);
        assert_eq!(t.get(3, 2), &th);
        assert!(t.get(0, 2).is_zero());
        assert!(t.is_quantum_group_shape());

        assert!(make_quantum_group_matrix(&DeformationMatrix::zero(2)).unwrap().is_zero());

        let k3 = DeformationMatrix::symbolic(3, "lambda");
        let t6 = make_quantum_group_matrix(&k3).unwrap();
        assert_eq!(t6.dim(), 6);
        assert_eq!(t6.get(3, 5), &-&LinearForm::param("lambda13"));

        let bad =
            vec![vec![LinearForm::zero(), LinearForm::param("a")], vec![LinearForm::param("a"), LinearForm::zero()]];
        assert!(matches!(DeformationMatrix::from_rows(bad), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn constant_reduced_mod_one() {
        let x = PhaseExponent::new(LinearForm::from_parts(rat(7, 3), [(Param::new("t"), int(2))]));
        assert_eq!(x.form().constant_part(), &rat(1, 3));
        assert_eq!(x.form().coeff(&Param::new("t")), int(2));
        let y = PhaseExponent::constant(rat(-1, 4));
        assert_eq!(y.form().constant_part(), &rat(3, 4));
        assert_eq!(y.normalized(), y);
    }

    #[test]
    fn parse_and_display() {
        let f = LinearForm::parse("-2*lambda12 + theta/2 + 1/3").unwrap();
        assert_eq!(f.coeff(&Param::new("lambda12")), int(-2));
        assert_eq!(f.coeff(&Param::new("theta")), rat(1, 2));
        assert_eq!(f.constant_part(), &rat(1, 3));
        assert_eq!(f.to_string(), "-2*lambda12 + theta/2 + 1/3");
        assert_eq!(LinearForm::parse("0").unwrap(), LinearForm::zero());
        assert_eq!(LinearForm::parse("-theta").unwrap().to_string(), "-theta");
        assert!(LinearForm::parse("theta+").is_err());
        assert!(LinearForm::parse("1/0").is_err());
    }
}
