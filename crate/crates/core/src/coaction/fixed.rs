//! Fixed-point subalgebras and recognising them as catalog algebras.

use serde::{Serialize, Serializer};

use super::{is_invariant, CoactionSpec};
use crate::algebra::linalg::{kernel, Echelon, Expander};
use crate::algebra::{Coefficient, Decision, Element, Presentation, Word};
use crate::catalog::{build_nc_torus, build_sphere, Family};
use crate::error::{Error, Result};
use crate::phase::DeformationMatrix;

fn elements_as_strings<S: Serializer>(xs: &[Element], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

/// Generators of the invariant subalgebra found up to a degree bound.
#[derive(Clone, Debug, Serialize)]
pub struct FixedPoints {
    #[serde(serialize_with = "elements_as_strings")]
    pub generators: Vec<Element>,
    /// Degree at which each generator first appeared.
    pub degrees: Vec<usize>,
    pub degree_bound: usize,
    /// New generators were still appearing at the bound.
    pub non_closed: bool,
}

impl FixedPoints {
    /// Only the constants are invariant (up to the bound).
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Commutative products of `pool` elements with total degree `d`.
fn products(pool: &[(Element, usize)], d: usize, start: usize, acc: &Element, out: &mut Vec<Element>) {
    if d == 0 {
        out.push(acc.clone());
        return;
    }
    for (i, (x, dx)) in pool.iter().enumerate().skip(start) {
        if *dx <= d {
            let next = acc.mul_commutative(x).expect("same context");
            products(pool, d - dx, i, &next, out);
        }
    }
}

/// Solves `ρ(x) = 1 ⊗ x` degree by degree and keeps the solutions that are
/// not polynomials in earlier ones and their stars.
///
/// The equation is solved exactly on sorted words of `A`, without reducing
/// modulo relations, so invariants that only hold in the quotient are not
/// detected.
pub fn fixed_points(spec: &CoactionSpec, degree_bound: usize) -> FixedPoints {
    let actx = spec.a.ctx();
    let mut found: Vec<(Element, usize)> = Vec::new();
    let mut non_closed = false;
    for d in 1..=degree_bound {
        let words: Vec<Word> =
            crate::algebra::words_up_to(actx, d, None).into_iter().filter(|w| w.degree() == d).collect();
        let mut exp = Expander::new(1);
        let columns: Vec<_> = words
            .iter()
            .map(|w| {
                let x = Element::monomial(actx, w.clone(), Coefficient::one());
                exp.vector(&(&spec.apply(&x) - &spec.right(&x)))
            })
            .collect();
        let mut solutions = Echelon::new();
        for v in kernel(&columns) {
            solutions.insert(&v);
        }
        let candidates: Vec<Element> = solutions
            .rref_rows()
            .iter()
            .map(|row| {
                Element::from_terms(
                    actx,
                    row.iter().map(|(j, q)| (words[*j].clone(), Coefficient::rational(q.clone()))),
                )
            })
            .collect();
        let mut pool: Vec<(Element, usize)> = Vec::new();
        for (x, dx) in &found {
            pool.push((x.clone(), *dx));
            pool.push((x.star(), *dx));
        }
        let mut prods = Vec::new();
        products(&pool, d, 0, &Element::one(actx), &mut prods);
        let mut aexp = Expander::new(1);
        let mut span = Echelon::new();
        for p in &prods {
            span.insert(&aexp.vector(p));
        }
        let mut new_here = false;
        for x in candidates {
            debug_assert!(is_invariant(spec, &x));
            if span.insert(&aexp.vector(&x)) {
                span.insert(&aexp.vector(&x.star()));
                found.push((x, d));
                new_here = true;
            }
        }
        if d == degree_bound && new_here && d > 1 {
            non_closed = true;
        }
    }
    let (generators, degrees) = found.into_iter().unzip();
    FixedPoints { generators, degrees, degree_bound, non_closed }
}

fn matrix_rows<S: Serializer>(m: &DeformationMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

/// One relation of the catalog algebra, checked on the candidate generators.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub decision: Decision,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchReport {
    pub family: String,
    pub instance: String,
    /// Induced deformation matrix `θ′_jk`, from the ambient pairing of generator weights.
    #[serde(serialize_with = "matrix_rows")]
    pub theta_prime: DeformationMatrix,
    pub exchange: Vec<RelationCheck>,
    pub structural: Vec<RelationCheck>,
    /// 1-based indices of generators commuting with all others.
    pub central: Vec<usize>,
    pub matched: bool,
    #[serde(skip)]
    pub catalog: Presentation,
}

/// Identifies the algebra generated by `generators` inside `ambient` with a
/// catalog torus or sphere: exchange relations exactly, the remaining
/// relations modulo the ambient ideal at the bound.
pub fn match_presentation(
    generators: &[Element],
    ambient: &Presentation,
    family: Family,
    degree_bound: usize,
) -> Result<MatchReport> {
    let ctx = ambient.ctx();
    let weights = generators
        .iter()
        .map(|x| {
            if !x.ctx().same(ctx) {
                return Err(Error::Context);
            }
            x.weight().ok_or_else(|| Error::InvariantViolation(format!("{x} is not weight-homogeneous")))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = generators.len();
    let rows = (0..m)
        .map(|j| (0..m).map(|k| ctx.theta().pairing(&weights[j], &weights[k])).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let theta_prime = DeformationMatrix::from_rows(rows)?;
    let catalog = match family {
        Family::Sphere => build_sphere(&theta_prime, m)?,
        Family::Torus => build_nc_torus(&theta_prime)?,
    };
    let cctx = catalog.ctx();
    let value = |g| {
        let gen = cctx.generator(g);
        let x = &generators[gen.indices[0] as usize - 1];
        if gen.starred {
            x.star()
        } else {
            x.clone()
        }
    };
    let evaluate = |terms: &[(Coefficient, Vec<crate::algebra::GenId>)]| {
        let mut out = Element::zero(ctx);
        for (c, letters) in terms {
            let mut p = Element::one(ctx);
            for &g in letters {
                p = p.twisted_mul(&value(g)).expect("same context");
            }
            out = &out + &p.scale_by(c);
        }
        out
    };
    let ideal = ambient.ideal();
    let mut exchange = Vec::new();
    let mut structural = Vec::new();
    for rel in catalog.relations() {
        let e = evaluate(&rel.terms);
        let label = rel.display(cctx);
        match rel.kind {
            crate::algebra::RelationKind::Exchange => {
                let decision = if e.is_zero() { Decision::Holds } else { Decision::Fails };
                exchange.push(RelationCheck { relation: label, decision });
            }
            crate::algebra::RelationKind::Structural => {
                let decision =
                    if e.degree() > degree_bound { Decision::Undecided } else { ideal.decide(&e, degree_bound) };
                structural.push(RelationCheck { relation: label, decision });
            }
        }
    }
    let central = (0..m).filter(|&j| (0..m).all(|k| theta_prime.get(j, k).is_zero())).map(|j| j + 1).collect();
    let matched = exchange.iter().chain(&structural).all(|r| r.decision == Decision::Holds);
    Ok(MatchReport {
        family: family.to_string(),
        instance: catalog.name.clone(),
        theta_prime,
        exchange,
        structural,
        central,
        matched,
        catalog,
    })
}
