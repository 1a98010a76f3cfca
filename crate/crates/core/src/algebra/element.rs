use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::One;

use super::{Coefficient, Context, GenId, Weight, Word};
use crate::error::{Error, Result};
use crate::phase::{LinearForm, Param, PhaseExponent, Rational};

/// A finite linear combination of canonical words with exact coefficients.
///
/// Words are stored sorted, i.e. in the undeformed commutative coordinate
/// picture; every bit of noncommutativity enters through [`Element::twisted_mul`].
#[derive(Clone, Debug)]
pub struct Element {
    ctx: Arc<Context>,
    terms: BTreeMap<Word, Coefficient>,
}

impl Element {
    pub fn zero(ctx: &Arc<Context>) -> Self {
        Element { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<Context>) -> Self {
        Self::constant(ctx, Coefficient::one())
    }

    pub fn constant(ctx: &Arc<Context>, c: Coefficient) -> Self {
        Self::monomial(ctx, Word::empty(), c)
    }

    pub fn generator(ctx: &Arc<Context>, id: GenId) -> Self {
        Self::monomial(ctx, Word::from_ids(vec![id]), Coefficient::one())
    }

    pub fn monomial(ctx: &Arc<Context>, w: Word, c: Coefficient) -> Self {
        let mut e = Element::zero(ctx);
        e.add_term(w, &c);
        e
    }

    pub fn from_terms(ctx: &Arc<Context>, terms: impl IntoIterator<Item = (Word, Coefficient)>) -> Self {
        let mut e = Element::zero(ctx);
        for (w, c) in terms {
            e.add_term(w, &c);
        }
        e
    }

    /// The ordered twisted product `g1 ×θ g2 ×θ … ×θ gk` of the given letters.
    pub fn ordered_product(ctx: &Arc<Context>, letters: &[GenId]) -> Self {
        let phase = ctx.ordering_phase(letters);
        Self::monomial(ctx, Word::from_ids(letters.to_vec()), Coefficient::phase(phase))
    }

    pub fn add_term(&mut self, w: Word, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                let sum = &*slot + c;
                if sum.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coefficient)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Coefficient {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Coefficient {
        self.coefficient(&Word::empty())
    }

    pub fn scale(&self, k: &Rational) -> Element {
        self.map_coefficients(|c| c.scale(k))
    }

    pub fn scale_by(&self, k: &Coefficient) -> Element {
        self.map_coefficients(|c| c * k)
    }

    pub fn mul_phase(&self, x: &PhaseExponent) -> Element {
        self.map_coefficients(|c| c.mul_phase(x))
    }

    fn map_coefficients(&self, f: impl Fn(&Coefficient) -> Coefficient) -> Element {
        let mut out = Element::zero(&self.ctx);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c));
        }
        out
    }

    fn check_ctx(&self, other: &Element) -> Result<()> {
        if self.ctx.same(&other.ctx) {
            Ok(())
        } else {
            Err(Error::Context)
        }
    }

    /// The deformed product: `(w1, w2) ↦ χ(wt w1, wt w2)·w1w2`, extended bilinearly.
    pub fn twisted_mul(&self, other: &Element) -> Result<Element> {
        self.check_ctx(other)?;
        let mut out = Element::zero(&self.ctx);
        let weights: Vec<(Weight, &Word, &Coefficient)> =
            other.terms.iter().map(|(w, c)| (self.ctx.word_weight(w), w, c)).collect();
        for (w1, c1) in &self.terms {
            let r = self.ctx.word_weight(w1);
            for (s, w2, c2) in &weights {
                let phase = self.ctx.chi_weights(&r, s);
                out.add_term(w1.concat(w2), &(c1 * c2).mul_phase(&phase));
            }
        }
        Ok(out)
    }

    /// The undeformed (commutative) product.
    pub fn mul_commutative(&self, other: &Element) -> Result<Element> {
        self.check_ctx(other)?;
        let mut out = Element::zero(&self.ctx);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Antilinear involution: conjugates coefficients and stars every letter.
    ///
    /// On sorted words this is plain complex conjugation of functions; the
    /// identity `(a ×θ b)* = b* ×θ a*` holds because `χ(−s,−r) = conj χ(r,s)`.
    pub fn star(&self) -> Element {
        let mut out = Element::zero(&self.ctx);
        for (w, c) in &self.terms {
            let ids = w.ids().iter().map(|&g| self.ctx.star_id(g)).collect();
            out.add_term(Word::from_ids(ids), &c.conj());
        }
        out
    }

    /// Partition by word weight.
    pub fn homogeneous_components(&self) -> BTreeMap<Weight, Element> {
        let mut out: BTreeMap<Weight, Element> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(self.ctx.word_weight(w)).or_insert_with(|| Element::zero(&self.ctx)).add_term(w.clone(), c);
        }
        out
    }

    /// The common weight of all words, if the element is homogeneous and nonzero.
    pub fn weight(&self) -> Option<Weight> {
        let mut ws = self.terms.keys().map(|w| self.ctx.word_weight(w));
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }

    /// The same element over another context with identical generators,
    /// substituting parameters in the coefficients.
    pub fn rebase(&self, ctx: &Arc<Context>, subs: &BTreeMap<Param, LinearForm>) -> Element {
        assert_eq!(ctx.generators(), self.ctx.generators(), "rebase needs identical generators");
        let mut out = Element::zero(ctx);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &c.substitute(subs));
        }
        out
    }

    /// Moves an element into another context through a map of generator ids.
    pub(crate) fn relabel(&self, ctx: &Arc<Context>, map: impl Fn(GenId) -> GenId) -> Element {
        let mut out = Element::zero(ctx);
        for (w, c) in &self.terms {
            let ids = w.ids().iter().map(|&g| map(g)).collect();
            out.add_term(Word::from_ids(ids), c);
        }
        out
    }

    /// Value at a point given by one coefficient per generator id.
    pub fn evaluate(&self, point: &[Coefficient]) -> Coefficient {
        let mut out = Coefficient::zero();
        for (w, c) in &self.terms {
            let mut v = c.clone();
            for &g in w.ids() {
                v = &v * &point[g as usize];
                if v.is_zero() {
                    break;
                }
            }
            out = &out + &v;
        }
        out
    }

    /// Parameters appearing in the coefficients.
    pub fn params(&self) -> Vec<Param> {
        let mut ps: Vec<Param> =
            self.terms.values().flat_map(|c| c.terms().flat_map(|(x, _)| x.form().params().cloned())).collect();
        ps.sort();
        ps.dedup();
        ps
    }

    pub fn sum<'a>(ctx: &Arc<Context>, items: impl IntoIterator<Item = &'a Element>) -> Element {
        let mut out = Element::zero(ctx);
        for e in items {
            for (w, c) in &e.terms {
                out.add_term(w.clone(), c);
            }
        }
        out
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx)
            && self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|((w1, c1), (w2, c2))| w1 == w2 && c1 == c2)
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.check_ctx(rhs).expect("adding elements of different contexts");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.check_ctx(rhs).expect("subtracting elements of different contexts");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let word = self.ctx.format_word(w);
            if w.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                f.write_str(&word)?;
            } else if c.len() > 1 {
                write!(f, "({c})·{word}")?;
            } else {
                write!(f, "{c}·{word}")?;
            }
        }
        Ok(())
    }
}

/// An algebra map of the undeformed coordinate algebras, given on generators
/// and extended multiplicatively in the commutative picture.
///
/// Classical structure maps (coproduct, counit, antipode, coactions) act on
/// the common underlying vector space unchanged; whether they respect the
/// deformed products is a separate, checkable property.
#[derive(Clone, Debug)]
pub struct Morphism {
    pub target: Arc<Context>,
    pub images: Vec<Element>,
}

impl Morphism {
    pub fn new(target: &Arc<Context>, images: Vec<Element>) -> Self {
        Morphism { target: target.clone(), images }
    }

    pub fn apply(&self, a: &Element) -> Element {
        let mut out = Element::zero(&self.target);
        for (w, c) in a.terms() {
            let img = self.apply_word(w);
            for (w2, c2) in img.terms() {
                out.add_term(w2.clone(), &(c * c2));
            }
        }
        out
    }

    pub fn apply_word(&self, w: &Word) -> Element {
        let mut acc = Element::one(&self.target);
        for &g in w.ids() {
            acc = acc.mul_commutative(&self.images[g as usize]).expect("images live in the target context");
        }
        acc
    }
}

/// A scalar-valued algebra map (e.g. the counit), extended multiplicatively.
#[derive(Clone, Debug)]
pub struct Character {
    pub values: Vec<Coefficient>,
}

impl Character {
    pub fn apply(&self, a: &Element) -> Coefficient {
        let mut out = Coefficient::zero();
        for (w, c) in a.terms() {
            let mut v = c.clone();
            for &g in w.ids() {
                v = &v * &self.values[g as usize];
                if v.is_zero() {
                    break;
                }
            }
            out = &out + &v;
        }
        out
    }
}
