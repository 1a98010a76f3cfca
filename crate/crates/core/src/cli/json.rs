//! JSON interchange for presentations. Rationals travel as `"p/q"` strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Coefficient, Context, Element, Generator, Presentation, Relation, RelationKind, Weight, Word};
use crate::catalog::build_su_theta_named;
use crate::coaction::CoactionSpec;
use crate::error::{Error, Result};
use crate::phase::{fmt_rational, parse_rational, DeformationMatrix, LinearForm, Param, PhaseExponent};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FormJson {
    pub constant: String,
    pub coeffs: BTreeMap<String, String>,
}

impl FormJson {
    pub fn from_form(f: &LinearForm) -> Self {
        FormJson {
            constant: fmt_rational(f.constant_part()),
            coeffs: f.coeffs().iter().map(|(p, c)| (p.name().to_string(), fmt_rational(c))).collect(),
        }
    }

    pub fn to_form(&self) -> Result<LinearForm> {
        let coeffs =
            self.coeffs.iter().map(|(p, c)| Ok((Param::new(p), parse_rational(c)?))).collect::<Result<Vec<_>>>()?;
        Ok(LinearForm::from_parts(parse_rational(&self.constant)?, coeffs))
    }
}

/// One term `q·e^{2πi·phase}` of a coefficient.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct PhaseTermJson {
    pub rational: String,
    pub phase: FormJson,
}

pub fn coefficient_to_json(c: &Coefficient) -> Vec<PhaseTermJson> {
    c.terms().map(|(x, q)| PhaseTermJson { rational: fmt_rational(q), phase: FormJson::from_form(x.form()) }).collect()
}

pub fn coefficient_from_json(terms: &[PhaseTermJson]) -> Result<Coefficient> {
    let parts = terms
        .iter()
        .map(|t| Ok((parse_rational(&t.rational)?, PhaseExponent::new(t.phase.to_form()?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Coefficient::from_terms(parts))
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct GeneratorJson {
    pub name: String,
    pub indices: Vec<u32>,
    pub weight: Vec<i64>,
    pub starred: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TermJson {
    pub coefficient: Vec<PhaseTermJson>,
    /// Generator labels of the ordered twisted product, e.g. `["u11", "u12*"]`.
    pub letters: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct RelationJson {
    pub label: String,
    pub kind: String,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct PresentationJson {
    pub name: String,
    pub dimension: usize,
    pub parameters: Vec<String>,
    pub generators: Vec<GeneratorJson>,
    pub deformation_matrix: Vec<Vec<FormJson>>,
    pub relations: Vec<RelationJson>,
    /// Classical points, one coefficient per entry of `generators`.
    #[serde(default)]
    pub points: Vec<Vec<Vec<PhaseTermJson>>>,
}

pub fn matrix_to_json(m: &DeformationMatrix) -> Vec<Vec<FormJson>> {
    m.rows().iter().map(|r| r.iter().map(FormJson::from_form).collect()).collect()
}

pub fn matrix_from_json(rows: &[Vec<FormJson>]) -> Result<DeformationMatrix> {
    let rows =
        rows.iter().map(|r| r.iter().map(FormJson::to_form).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    DeformationMatrix::from_rows(rows)
}

pub fn presentation_to_json(p: &Presentation) -> PresentationJson {
    let ctx = p.ctx();
    let mut params: Vec<String> = ctx.theta().params().iter().map(|x| x.name().to_string()).collect();
    for r in p.relations() {
        for (c, _) in &r.terms {
            for (x, _) in c.terms() {
                params.extend(x.form().params().map(|x| x.name().to_string()));
            }
        }
    }
    params.sort();
    params.dedup();
    PresentationJson {
        name: p.name.clone(),
        dimension: ctx.weight_dim(),
        parameters: params,
        generators: ctx
            .generators()
            .iter()
            .map(|g| GeneratorJson {
                name: g.name.clone(),
                indices: g.indices.clone(),
                weight: g.weight.components().to_vec(),
                starred: g.starred,
            })
            .collect(),
        deformation_matrix: matrix_to_json(ctx.theta()),
        relations: p
            .relations()
            .iter()
            .map(|r| RelationJson {
                label: r.label.clone(),
                kind: match r.kind {
                    RelationKind::Exchange => "exchange".into(),
                    RelationKind::Structural => "structural".into(),
                },
                terms: r
                    .terms
                    .iter()
                    .map(|(c, letters)| TermJson {
                        coefficient: coefficient_to_json(c),
                        letters: letters.iter().map(|&g| ctx.generator(g).label()).collect(),
                    })
                    .collect(),
            })
            .collect(),
        points: p.points().iter().map(|pt| pt.iter().map(coefficient_to_json).collect()).collect(),
    }
}

pub fn presentation_from_json(j: &PresentationJson) -> Result<Presentation> {
    let theta = matrix_from_json(&j.deformation_matrix)?;
    if theta.dim() != j.dimension {
        return Err(Error::Dimension { expected: j.dimension, got: theta.dim() });
    }
    let base: Vec<Generator> = j
        .generators
        .iter()
        .filter(|g| !g.starred)
        .map(|g| Generator::new(&g.name, &g.indices, Weight::new(g.weight.clone())))
        .collect();
    let ctx = Context::new(theta, base)?;
    let find = |g: &GeneratorJson| ctx.find(&g.name, &g.indices, g.starred);
    for g in &j.generators {
        let id = find(g)?;
        if ctx.generator(id).weight.components() != &g.weight[..] {
            return Err(Error::InvariantViolation(format!("weight of {} does not match its star", ctx.generator(id))));
        }
    }
    let relations = j
        .relations
        .iter()
        .map(|r| {
            let kind = match r.kind.as_str() {
                "exchange" => RelationKind::Exchange,
                "structural" => RelationKind::Structural,
                other => return Err(Error::Parse(format!("unknown relation kind `{other}`"))),
            };
            let terms = r
                .terms
                .iter()
                .map(|t| {
                    let letters = t.letters.iter().map(|l| ctx.parse_generator(l)).collect::<Result<Vec<_>>>()?;
                    Ok((coefficient_from_json(&t.coefficient)?, letters))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Relation { label: r.label.clone(), kind, terms })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::new();
    for pt in &j.points {
        if pt.len() != j.generators.len() {
            return Err(Error::Dimension { expected: j.generators.len(), got: pt.len() });
        }
        let mut v = vec![Coefficient::zero(); ctx.generators().len()];
        for (g, c) in j.generators.iter().zip(pt) {
            v[find(g)? as usize] = coefficient_from_json(c)?;
        }
        points.push(v);
    }
    Ok(Presentation::new(&j.name, ctx, relations)?.with_points(points))
}

/// `SU(n)_θ` given by its torus matrix `K` and generator symbol.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct QuantumGroupJson {
    pub n: usize,
    pub k: Vec<Vec<FormJson>>,
    pub symbol: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ImageTermJson {
    pub coefficient: Vec<PhaseTermJson>,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ImageJson {
    pub generator: String,
    pub terms: Vec<ImageTermJson>,
}

/// A coaction spec file: `H`, `A` and the images of the unstarred generators of `A`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CoactionSpecJson {
    pub name: String,
    pub h: QuantumGroupJson,
    pub a: PresentationJson,
    pub images: Vec<ImageJson>,
}

pub fn spec_to_json(spec: &CoactionSpec) -> Result<CoactionSpecJson> {
    let k = spec.h.k.as_ref().ok_or_else(|| Error::Usage("only K ⊕ (−K) quantum groups can be exported".into()))?;
    let hctx = spec.h.ctx();
    let actx = spec.a.ctx();
    let t = spec.tensor();
    let images = actx
        .unstarred_ids()
        .map(|g| ImageJson {
            generator: actx.generator(g).label(),
            terms: spec
                .image(g)
                .terms()
                .map(|(w, c)| {
                    let (l, r) = t.split(w);
                    ImageTermJson {
                        coefficient: coefficient_to_json(c),
                        left: l.ids().iter().map(|&x| hctx.generator(x).label()).collect(),
                        right: r.ids().iter().map(|&x| actx.generator(x).label()).collect(),
                    }
                })
                .collect(),
        })
        .collect();
    Ok(CoactionSpecJson {
        name: spec.name.clone(),
        h: QuantumGroupJson {
            n: spec.h.n,
            k: matrix_to_json(k),
            symbol: hctx.generator(spec.h.grid()[0][0]).name.clone(),
        },
        a: presentation_to_json(&spec.a),
        images,
    })
}

pub fn spec_from_json(j: &CoactionSpecJson) -> Result<CoactionSpec> {
    let h = build_su_theta_named(j.h.n, &matrix_from_json(&j.h.k)?, &j.h.symbol)?;
    let a = presentation_from_json(&j.a)?;
    CoactionSpec::new(&j.name, h, a, |t| {
        j.images
            .iter()
            .map(|img| {
                let g = t.right.parse_generator(&img.generator)?;
                let mut e = Element::zero(&t.ctx);
                for term in &img.terms {
                    let l = term.left.iter().map(|x| t.left.parse_generator(x)).collect::<Result<Vec<_>>>()?;
                    let r = term.right.iter().map(|x| t.right.parse_generator(x)).collect::<Result<Vec<_>>>()?;
                    e.add_term(
                        t.join(&Word::from_ids(l), &Word::from_ids(r)),
                        &coefficient_from_json(&term.coefficient)?,
                    );
                }
                Ok((g, e))
            })
            .collect()
    })
}
