use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use super::{Coefficient, Context, Element, GenId, Ideal};
use crate::error::{Error, Result};
use crate::phase::{exchange_phase, LinearForm, Param, PhaseExponent, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RelationKind {
    /// A deformed commutation relation; identically zero in the twisted product.
    Exchange,
    /// A quadratic or higher structural relation (unitarity, radius, determinant).
    Structural,
}

/// A formal relation `Σ c·(g1 ×θ g2 ×θ …) = 0` over ordered letter strings.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub label: String,
    pub kind: RelationKind,
    pub terms: Vec<(Coefficient, Vec<GenId>)>,
}

impl Relation {
    pub fn structural(label: &str, terms: Vec<(Coefficient, Vec<GenId>)>) -> Self {
        Relation { label: label.to_string(), kind: RelationKind::Structural, terms }
    }

    pub fn evaluate(&self, ctx: &Arc<Context>) -> Element {
        let mut out = Element::zero(ctx);
        for (c, letters) in &self.terms {
            out = &out + &Element::ordered_product(ctx, letters).scale_by(c);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, l)| l.len()).max().unwrap_or(0)
    }

    pub fn substitute(&self, subs: &BTreeMap<Param, LinearForm>) -> Relation {
        Relation { terms: self.terms.iter().map(|(c, l)| (c.substitute(subs), l.clone())).collect(), ..self.clone() }
    }

    pub fn display(&self, ctx: &Context) -> String {
        let mut s = String::new();
        for (i, (c, letters)) in self.terms.iter().enumerate() {
            // print a negative rational coefficient as a subtraction
            let negated = c.terms().all(|(_, q)| q.is_negative()).then(|| -c);
            let c = negated.as_ref().unwrap_or(c);
            match (i, negated.is_some()) {
                (0, true) => s.push('-'),
                (_, true) => s.push_str(" - "),
                (0, false) => {}
                (_, false) => s.push_str(" + "),
            }
            let word = if letters.is_empty() {
                String::new()
            } else {
                letters.iter().map(|&g| ctx.generator(g).label()).collect::<Vec<_>>().join(" ")
            };
            match (letters.is_empty(), c.is_one(), c.len() > 1) {
                (true, _, _) => s.push_str(&c.to_string()),
                (false, true, _) => s.push_str(&word),
                (false, false, true) => s.push_str(&format!("({c})·{word}")),
                (false, false, false) => s.push_str(&format!("{c}·{word}")),
            }
        }
        s.push_str(" = 0");
        s
    }
}

/// `left·right = e^{2πi·phase} right·left` under the twisted product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeRelation {
    pub left: GenId,
    pub right: GenId,
    pub phase: PhaseExponent,
}

impl ExchangeRelation {
    pub fn is_commutator(&self) -> bool {
        self.phase.is_zero()
    }

    pub fn to_relation(&self, ctx: &Context) -> Relation {
        let label = format!("{}{}", ctx.generator(self.left).label(), ctx.generator(self.right).label());
        Relation {
            label,
            kind: RelationKind::Exchange,
            terms: vec![
                (Coefficient::one(), vec![self.left, self.right]),
                (Coefficient::term(-Rational::one(), self.phase.clone()), vec![self.right, self.left]),
            ],
        }
    }

    pub fn display(&self, ctx: &Context) -> String {
        let l = ctx.generator(self.left).label();
        let r = ctx.generator(self.right).label();
        if self.is_commutator() {
            format!("[{l},{r}] = 0")
        } else {
            format!("{l} {r} = e^{{2πi({})}} {r} {l}", self.phase)
        }
    }
}

/// Which generator pairs [`generate_exchange_relations`] visits.
#[derive(Clone, Copy, Debug)]
pub struct PairSelection {
    /// Also pair unstarred generators with starred ones.
    pub with_stars: bool,
    /// Emit plain commutators for pairs with zero phase.
    pub include_trivial: bool,
}

impl Default for PairSelection {
    fn default() -> Self {
        PairSelection { with_stars: false, include_trivial: true }
    }
}

/// The deformed commutation relations among generators, in generator order.
pub fn generate_exchange_relations(ctx: &Context, sel: PairSelection) -> Vec<ExchangeRelation> {
    let gens = ctx.generators();
    let mut out = Vec::new();
    for g in ctx.unstarred_ids() {
        for h in ctx.ids() {
            let hg = &gens[h as usize];
            let ok = if hg.starred { sel.with_stars } else { h > g };
            if !ok {
                continue;
            }
            let phase = exchange_phase(ctx.theta(), &gens[g as usize].weight, &hg.weight)
                .expect("generator weights match the context dimension");
            if phase.is_zero() && !sel.include_trivial {
                continue;
            }
            out.push(ExchangeRelation { left: g, right: h, phase });
        }
    }
    out
}

/// Generators, deformation matrix and relations of a finitely presented *-algebra.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    ctx: Arc<Context>,
    relations: Vec<Relation>,
    points: Vec<Vec<Coefficient>>,
}

impl Presentation {
    pub fn new(name: &str, ctx: Arc<Context>, relations: Vec<Relation>) -> Result<Self> {
        for r in &relations {
            for (_, letters) in &r.terms {
                if let Some(&g) = letters.iter().find(|&&g| g as usize >= ctx.generators().len()) {
                    return Err(Error::UnknownGenerator(format!("id {g} in relation {}", r.label)));
                }
            }
        }
        Ok(Presentation { name: name.to_string(), ctx, relations, points: Vec::new() })
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    /// Classical points (one value per generator id) at which every relation vanishes.
    pub fn points(&self) -> &[Vec<Coefficient>] {
        &self.points
    }

    pub fn with_points(mut self, points: Vec<Vec<Coefficient>>) -> Self {
        assert!(points.iter().all(|p| p.len() == self.ctx.generators().len()), "one value per generator");
        self.points = points;
        self
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn exchange_relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(|r| r.kind == RelationKind::Exchange)
    }

    pub fn structural_relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(|r| r.kind == RelationKind::Structural)
    }

    /// Structural relations as elements of the algebra.
    pub fn structural_elements(&self) -> Vec<Element> {
        self.structural_relations().map(|r| r.evaluate(&self.ctx)).filter(|e| !e.is_zero()).collect()
    }

    /// The ideal of the structural relations, with the classical points attached.
    pub fn ideal(&self) -> Ideal {
        Ideal::new(&self.ctx, self.structural_elements(), self.points.clone())
    }

    pub fn max_relation_degree(&self) -> usize {
        self.structural_relations().map(Relation::degree).max().unwrap_or(0)
    }

    /// Default degree bound for identity checks: 2 + max relation degree.
    pub fn default_degree_bound(&self) -> usize {
        2 + self.max_relation_degree()
    }

    pub fn substitute(&self, subs: &BTreeMap<Param, LinearForm>) -> Presentation {
        Presentation {
            name: self.name.clone(),
            ctx: self.ctx.substitute(subs),
            relations: self.relations.iter().map(|r| r.substitute(subs)).collect(),
            points: self.points.clone(),
        }
    }

    /// Same relations over another context with identical generators.
    pub fn with_context(&self, ctx: Arc<Context>) -> Presentation {
        Presentation { name: self.name.clone(), ctx, relations: self.relations.clone(), points: self.points.clone() }
    }
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.ctx.theta() == other.ctx.theta()
            && self.ctx.generators() == other.ctx.generators()
            && self.relations == other.relations
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} with θ = {}", self.name, self.ctx.theta())?;
        for r in &self.relations {
            writeln!(f, "  {}", r.display(&self.ctx))?;
        }
        Ok(())
    }
}
