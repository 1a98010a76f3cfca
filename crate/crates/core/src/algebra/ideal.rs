//! Degree-bounded ideal membership by exact linear algebra.
//!
//! `a` is a member at bound `D` when it lies in the span of the multiples
//! `m ×θ r` with `r` a structural relation, `m` a word and
//! `deg m + deg r ≤ D`. For a weight-homogeneous `r`, left and right
//! multiples differ by a unit phase, so left multiples span the two-sided
//! piece. Coefficients are expanded over Q with all phase shifts a relation
//! can be rescaled by, which makes the test complete whenever each relation
//! is a phase times a rational vector (all built-in relations are).

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use super::cyclotomic::{euler_phi, lcm};
use super::linalg::{Echelon, Expander};
use super::{Coefficient, Context, Element, GenId, Presentation, Weight, Word};
use crate::error::{Error, Result};
use num_traits::Zero;

use crate::phase::{rat, LinearForm, PhaseExponent, Rational, Substitution};

/// Words of degree `≤ max_degree` whose weight equals `target` (or any weight when `None`).
pub fn words_up_to(ctx: &Context, max_degree: usize, target: Option<&Weight>) -> Vec<Word> {
    let n = ctx.generators().len() as GenId;
    let mut out = Vec::new();
    let mut stack: Vec<GenId> = Vec::new();
    let mut weight = Weight::zero(ctx.weight_dim());
    #[allow(clippy::too_many_arguments)]
    fn rec(
        ctx: &Context,
        n: GenId,
        start: GenId,
        max_degree: usize,
        stack: &mut Vec<GenId>,
        weight: &mut Weight,
        target: Option<&Weight>,
        out: &mut Vec<Word>,
    ) {
        if target.is_none_or(|t| t == weight) {
            out.push(Word::from_ids(stack.clone()));
        }
        if stack.len() == max_degree {
            return;
        }
        for g in start..n {
            let wg = ctx.generator(g).weight.components().to_vec();
            weight.add_assign_slice(&wg);
            stack.push(g);
            rec(ctx, n, g, max_degree, stack, weight, target, out);
            stack.pop();
            let neg: Vec<i64> = wg.iter().map(|x| -x).collect();
            weight.add_assign_slice(&neg);
        }
    }
    rec(ctx, n, 0, max_degree, &mut stack, &mut weight, target, &mut out);
    out.sort();
    out
}

fn linear_parts(e: &Element) -> BTreeSet<LinearForm> {
    e.terms().flat_map(|(_, c)| c.terms().map(|(x, _)| x.form().linear_part())).collect()
}

fn root_order(e: &Element) -> u64 {
    e.terms().map(|(_, c)| c.root_order()).fold(1, lcm)
}

type WordsByWeight = HashMap<Weight, Vec<Word>>;

/// The two-sided ideal generated by a set of relations, with cached multiplier words.
#[derive(Debug)]
pub struct Ideal {
    ctx: Arc<Context>,
    relations: Vec<(Element, Option<Weight>)>,
    points: Vec<Vec<Coefficient>>,
    // multiplier words of degree ≤ key, grouped by weight
    words: Mutex<HashMap<usize, Arc<WordsByWeight>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal::new(&self.ctx, self.relations.iter().map(|(r, _)| r.clone()).collect(), self.points.clone())
    }
}

impl Ideal {
    /// `points` are classical points where every relation vanishes; they may be empty.
    pub fn new(ctx: &Arc<Context>, relations: Vec<Element>, points: Vec<Vec<Coefficient>>) -> Self {
        let relations = relations.into_iter().filter(|r| !r.is_zero()).map(|r| {
            let w = r.weight();
            (r, w)
        });
        Ideal { ctx: ctx.clone(), relations: relations.collect(), points, words: Mutex::new(HashMap::new()) }
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn relations(&self) -> impl Iterator<Item = &Element> {
        self.relations.iter().map(|(r, _)| r)
    }

    pub fn points(&self) -> &[Vec<Coefficient>] {
        &self.points
    }

    fn words_by_weight(&self, max_degree: usize) -> Arc<WordsByWeight> {
        let mut cache = self.words.lock().expect("word cache lock");
        cache
            .entry(max_degree)
            .or_insert_with(|| {
                let mut map: HashMap<Weight, Vec<Word>> = HashMap::new();
                for w in words_up_to(&self.ctx, max_degree, None) {
                    map.entry(self.ctx.word_weight(&w)).or_default().push(w);
                }
                Arc::new(map)
            })
            .clone()
    }

    /// Whether `a` lies in the ideal, using multiples of total degree `≤ degree_bound`.
    pub fn contains(&self, a: &Element, degree_bound: usize) -> Result<bool> {
        if !a.ctx().same(&self.ctx) {
            return Err(Error::Context);
        }
        let degree = a.degree();
        if degree_bound < degree {
            return Err(Error::Bound { bound: degree_bound, degree });
        }
        if a.is_zero() {
            return Ok(true);
        }
        let min_rel = self.relations.iter().map(|(r, _)| r.degree()).min().unwrap_or(0);
        let max_mult = degree_bound.saturating_sub(min_rel);
        if self.relations.iter().all(|(_, w)| w.is_some()) {
            let words = self.words_by_weight(max_mult);
            for (w, part) in a.homogeneous_components() {
                let mut multiples = Vec::new();
                for (rel, rw) in &self.relations {
                    let rd = rel.degree();
                    if rd > degree_bound {
                        continue;
                    }
                    let need = &w - rw.as_ref().unwrap();
                    for m in words.get(&need).into_iter().flatten().filter(|m| m.degree() + rd <= degree_bound) {
                        let mult = Element::monomial(&self.ctx, m.clone(), Coefficient::one()).twisted_mul(rel)?;
                        multiples.push(mult);
                    }
                }
                if !in_span(&part, &multiples) {
                    return Ok(false);
                }
            }
            Ok(true)
        } else {
            let mut multiples = Vec::new();
            for (rel, _) in &self.relations {
                let rd = rel.degree();
                if rd > degree_bound {
                    continue;
                }
                for m in words_up_to(&self.ctx, degree_bound - rd, None) {
                    multiples.push(Element::monomial(&self.ctx, m, Coefficient::one()).twisted_mul(rel)?);
                }
            }
            Ok(in_span(a, &multiples))
        }
    }

    /// Refutes at classical points first, then searches the ideal up to the bound.
    pub fn decide(&self, a: &Element, degree_bound: usize) -> Decision {
        if refuted_at_points(a, &self.points) {
            return Decision::Fails;
        }
        // membership at a smaller bound implies membership at every larger one
        let mut bound = a.degree().min(degree_bound);
        loop {
            if let Ok(true) = self.contains(a, bound) {
                return Decision::Holds;
            }
            if bound >= degree_bound {
                return Decision::Undecided;
            }
            bound += 1;
        }
    }
}

/// Whether `a` lies in the degree-bounded ideal of `relations` inside `ctx`.
pub fn in_ideal(ctx: &Arc<Context>, relations: &[Element], a: &Element, degree_bound: usize) -> Result<bool> {
    if relations.iter().any(|r| !r.ctx().same(ctx)) {
        return Err(Error::Context);
    }
    Ideal::new(ctx, relations.to_vec(), Vec::new()).contains(a, degree_bound)
}

/// Whether `a` lies in the span of `vectors` with coefficients in the phase ring.
pub(crate) fn in_span(a: &Element, vectors: &[Element]) -> bool {
    let order = vectors.iter().map(root_order).fold(root_order(a), lcm);
    let targets = linear_parts(a);
    let mut exp = Expander::new(order);
    let mut basis = Echelon::new();
    let phi = euler_phi(order) as i64;
    for v in vectors {
        let shifts: BTreeSet<LinearForm> =
            linear_parts(v).iter().flat_map(|p| targets.iter().map(move |t| t - p)).collect();
        for s in &shifts {
            for k in 0..phi {
                let mut f = s.clone();
                f += &LinearForm::constant(rat(k, order as i64));
                let shifted = v.mul_phase(&PhaseExponent::new(f));
                let vec = exp.vector(&shifted);
                basis.insert(&vec);
            }
        }
    }
    let target = exp.vector(a);
    basis.contains(&target)
}

/// Degree-bounded membership in the two-sided ideal of a presentation's structural relations.
pub fn ideal_membership(pres: &Presentation, a: &Element, degree_bound: usize) -> Result<bool> {
    pres.ideal().contains(a, degree_bound)
}

/// Outcome of an identity check that reduces modulo an ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Decision {
    Holds,
    /// The element is nonzero at a classical point of the variety, so it is not in the ideal.
    Fails,
    /// Not found in the ideal up to the bound; the identity may still hold.
    Undecided,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Holds => "holds",
            Decision::Fails => "fails",
            Decision::Undecided => "undecided",
        })
    }
}

/// Parameter values tried when refuting membership at classical points.
fn sample_values() -> [Rational; 2] {
    [Rational::zero(), rat(1, 12)]
}

/// Whether `a` is nonzero at one of the classical `points` for some sampled parameter value.
///
/// Sound only when the ideal consists of functions vanishing at the points,
/// which holds for relations that are phase multiples of classical relations.
pub fn refuted_at_points(a: &Element, points: &[Vec<Coefficient>]) -> bool {
    if points.is_empty() || a.is_zero() {
        return false;
    }
    let params = a.params();
    sample_values().iter().any(|v| {
        let subs: Substitution = params.iter().map(|p| (p.clone(), LinearForm::constant(v.clone()))).collect();
        let spec = a.rebase(a.ctx(), &subs);
        points.iter().any(|pt| !spec.evaluate(pt).is_zero())
    })
}
