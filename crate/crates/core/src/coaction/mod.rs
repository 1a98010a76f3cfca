//! Coactions `ρ: A → H ⊗ A` of a deformed matrix quantum group on a deformed algebra.
//!
//! Like the Hopf maps, `ρ` is the classical map on sorted words. Whether it
//! is a homomorphism for the deformed products is decided by
//! [`check_extension`], which reports the parameter values for which it is.

mod constraints;
mod fixed;

use crate::algebra::{Coefficient, Context, Element, GenId, Ideal, Morphism, Presentation, TensorContext, Word};
use crate::catalog::{build_sphere, build_su_theta, build_su_theta_named, sphere_lambda, su3_k, su4_k};
use crate::error::{Error, Result};
use crate::hopf::{haar_state, CheckReport, MatrixQuantumGroup};
use crate::phase::{DeformationMatrix, Substitution};

pub use constraints::{homomorphism_constraints, ConstraintReport, ExtensionStatus, StructuralCheck};
pub use fixed::{fixed_points, match_presentation, FixedPoints, MatchReport};

/// A candidate coaction given by the images of the generators of `A`.
#[derive(Clone, Debug)]
pub struct CoactionSpec {
    pub name: String,
    pub h: MatrixQuantumGroup,
    pub a: Presentation,
    tensor: TensorContext,
    // indexed by generator id of A, stars included
    images: Vec<Element>,
}

impl CoactionSpec {
    /// `images` lists `(unstarred generator of A, ρ(generator))`; images of
    /// starred generators are the starred images.
    pub fn new(
        name: &str,
        h: MatrixQuantumGroup,
        a: Presentation,
        images: impl FnOnce(&TensorContext) -> Result<Vec<(GenId, Element)>>,
    ) -> Result<Self> {
        let tensor = TensorContext::new(h.ctx(), a.ctx());
        let given = images(&tensor)?;
        let actx = a.ctx().clone();
        let mut slots: Vec<Option<Element>> = vec![None; actx.generators().len()];
        for (g, img) in given {
            if !img.ctx().same(&tensor.ctx) {
                return Err(Error::Context);
            }
            slots[actx.star_id(g) as usize] = Some(img.star());
            slots[g as usize] = Some(img);
        }
        let images = slots
            .into_iter()
            .enumerate()
            .map(|(g, s)| {
                s.ok_or_else(|| Error::UnknownGenerator(format!("no image for {}", actx.generator(g as GenId))))
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = CoactionSpec { name: name.to_string(), h, a, tensor, images };
        spec.check_weights()?;
        Ok(spec)
    }

    /// Every term of an image carries the same `H`-left weight.
    fn check_weights(&self) -> Result<()> {
        let left_dim = self.h.n - 1;
        for (g, img) in self.images.iter().enumerate() {
            let mut seen = None;
            for (w, _) in img.terms() {
                let wt = self.tensor.ctx.word_weight(w);
                let left = wt.components()[..left_dim].to_vec();
                if *seen.get_or_insert_with(|| left.clone()) != left {
                    let label = self.a.ctx().generator(g as GenId).label();
                    return Err(Error::InvariantViolation(format!("image of {label} mixes left weights")));
                }
            }
        }
        Ok(())
    }

    pub fn tensor(&self) -> &TensorContext {
        &self.tensor
    }

    pub fn image(&self, g: GenId) -> &Element {
        &self.images[g as usize]
    }

    /// `ρ` on an arbitrary element of `A`.
    pub fn apply(&self, a: &Element) -> Element {
        Morphism::new(&self.tensor.ctx, self.images.clone()).apply(a)
    }

    /// `x ↦ 1 ⊗ x`.
    pub fn right(&self, a: &Element) -> Element {
        let off = self.h.ctx().generators().len() as GenId;
        a.relabel(&self.tensor.ctx, move |g| g + off)
    }

    pub fn left(&self, a: &Element) -> Element {
        a.relabel(&self.tensor.ctx, |g| g)
    }

    /// The spec with parameters substituted on both sides.
    pub fn substitute(&self, subs: &Substitution) -> Result<CoactionSpec> {
        let h = self.h.substitute(subs)?;
        let a = self.a.substitute(subs);
        let images: Vec<(GenId, Element)> =
            self.a.ctx().unstarred_ids().map(|g| (g, self.images[g as usize].clone())).collect();
        CoactionSpec::new(&self.name, h, a, |t| {
            Ok(images.into_iter().map(|(g, e)| (g, e.rebase(&t.ctx, subs))).collect())
        })
    }

    /// Structural relations of `H ⊗ A`, with the product of their classical points.
    pub fn tensor_ideal(&self) -> Ideal {
        let mut rels: Vec<Element> = self.h.presentation.structural_elements().iter().map(|r| self.left(r)).collect();
        rels.extend(self.a.structural_elements().iter().map(|r| self.right(r)));
        let mut points = Vec::new();
        for p in self.h.presentation.points() {
            for q in self.a.points() {
                let mut v: Vec<Coefficient> = p.clone();
                v.extend(q.iter().cloned());
                points.push(v);
            }
        }
        Ideal::new(&self.tensor.ctx, rels, points)
    }
}

fn grid_images(
    t: &TensorContext,
    h: &MatrixQuantumGroup,
    target: &Context,
    symbol: &str,
    n: usize,
    acted_rows: usize,
) -> Result<Vec<(GenId, Element)>> {
    let mut out = Vec::new();
    for k in 0..n {
        for l in 0..n {
            let g = target.find(symbol, &[k as u32 + 1, l as u32 + 1], false)?;
            let mut img = Element::zero(&t.ctx);
            if k < acted_rows {
                for a in 0..acted_rows {
                    let b = target.find(symbol, &[a as u32 + 1, l as u32 + 1], false)?;
                    let w = t.join(&Word::from_ids(vec![h.grid()[k][a]]), &Word::from_ids(vec![b]));
                    img.add_term(w, &Coefficient::one());
                }
            } else {
                img.add_term(t.join(&Word::empty(), &Word::from_ids(vec![g])), &Coefficient::one());
            }
            out.push((g, img));
        }
    }
    Ok(out)
}

/// `δ(z_j) = Σ_k u_jk ⊗ z_k`: `SU(3)_θ` on `S^5_λ`, both symbolic.
pub fn su3_on_s5() -> Result<CoactionSpec> {
    let h = build_su_theta(3, &su3_k())?;
    let a = build_sphere(&sphere_lambda(3), 3)?;
    let grid = h.grid().to_vec();
    CoactionSpec::new("su3-on-s5", h, a, |t| {
        let actx = &t.right;
        (0..3)
            .map(|j| {
                let z = actx.find("z", &[j as u32 + 1], false)?;
                let mut img = Element::zero(&t.ctx);
                for (k, &u) in grid[j].iter().enumerate() {
                    let zk = actx.find("z", &[k as u32 + 1], false)?;
                    img.add_term(t.join(&Word::from_ids(vec![u]), &Word::from_ids(vec![zk])), &Coefficient::one());
                }
                Ok((z, img))
            })
            .collect()
    })
}

/// `ρ(v_kl) = Σ_α u_kα ⊗ v_αl` for `k ≤ 3` and `ρ(v_4l) = 1 ⊗ v_4l`: `SU(3)_θ` on `SU(4)_λ`.
pub fn su3_on_su4() -> Result<CoactionSpec> {
    let h = build_su_theta(3, &su3_k())?;
    let a = build_su_theta_named(4, &su4_k(), "v")?.presentation;
    let hh = h.clone();
    CoactionSpec::new("su3-on-su4", h, a, |t| grid_images(t, &hh, &t.right, "v", 4, 3))
}

/// The classical block embedding `SU(2) ⊂ SU(3)` acting on `SU(3)_θ`:
/// `ρ(u_ij) = Σ_{k≤2} w_ik ⊗ u_kj` for `i ≤ 2` and `ρ(u_3j) = 1 ⊗ u_3j`.
pub fn su2_on_su3() -> Result<CoactionSpec> {
    let h = build_su_theta_named(2, &DeformationMatrix::zero(1), "w")?;
    let a = build_su_theta(3, &su3_k())?.presentation;
    let hh = h.clone();
    CoactionSpec::new("su2-on-su3", h, a, |t| grid_images(t, &hh, &t.right, "u", 3, 2))
}

/// `SU(3)_θ` acting trivially on `S^5_λ`: `z ↦ 1 ⊗ z`.
pub fn identity_on_s5() -> Result<CoactionSpec> {
    let h = build_su_theta(3, &su3_k())?;
    let a = build_sphere(&sphere_lambda(3), 3)?;
    CoactionSpec::new("identity", h, a, |t| {
        let off = t.left.generators().len() as GenId;
        Ok(t.right.unstarred_ids().map(|g| (g, Element::generator(&t.ctx, g + off))).collect())
    })
}

pub const BUILTIN_SPECS: [&str; 4] = ["su3-on-s5", "su3-on-su4", "su2-on-su3", "identity"];

pub fn builtin(name: &str) -> Result<CoactionSpec> {
    match name {
        "su3-on-s5" => su3_on_s5(),
        "su3-on-su4" => su3_on_su4(),
        "su2-on-su3" => su2_on_su3(),
        "identity" => identity_on_s5(),
        other => Err(Error::Usage(format!("unknown spec `{other}`; built-ins are {}", BUILTIN_SPECS.join(", ")))),
    }
}

/// Decides whether `ρ` extends to a homomorphism `A_λ → H_θ ⊗ A_λ`.
///
/// Generator pairs give the parameter constraints. When those can be met,
/// the structural relations of `A` are mapped under the constrained spec and
/// reduced modulo the ideal of `H ⊗ A`; relations of degree above the bound
/// are reported undecided without a search.
pub fn check_extension(spec: &CoactionSpec, degree_bound: usize) -> Result<ConstraintReport> {
    check_extension_with(spec, degree_bound, true)
}

/// As [`check_extension`]; `structural = false` skips the relations of `A`.
pub fn check_extension_with(spec: &CoactionSpec, degree_bound: usize, structural: bool) -> Result<ConstraintReport> {
    let map = Morphism::new(&spec.tensor.ctx, spec.images.clone());
    let mut report = homomorphism_constraints(spec.a.ctx(), &spec.tensor.ctx, |a| map.apply(a));
    if report.status == ExtensionStatus::FailsIdentically || !structural {
        return Ok(report);
    }
    let solved = if report.is_unconditional() { spec.clone() } else { spec.substitute(&report.solution())? };
    let ideal = solved.tensor_ideal();
    for rel in solved.a.structural_relations() {
        let image = solved.apply(&rel.evaluate(solved.a.ctx()));
        let decision = if image.degree() > degree_bound {
            crate::algebra::Decision::Undecided
        } else {
            ideal.decide(&image, degree_bound)
        };
        report.structural.push(StructuralCheck { relation: rel.label.clone(), decision });
    }
    Ok(report)
}

/// `(Δ⊗id)ρ = (id⊗ρ)ρ` and `(ε⊗id)ρ = id` on every generator of `A`, exactly.
pub fn check_coaction_axioms(spec: &CoactionSpec) -> CheckReport {
    let h = &spec.h;
    let hsize = h.ctx().generators().len() as GenId;
    let hh = h.tensor();
    let hha = TensorContext::new(&hh.ctx, spec.a.ctx());
    let actx = spec.a.ctx();
    let mut report = CheckReport::new("coaction axioms");
    for g in actx.ids() {
        let img = spec.image(g);
        let mut lhs = Element::zero(&hha.ctx);
        let mut rhs = Element::zero(&hha.ctx);
        let mut counit = Element::zero(actx);
        for (w, c) in img.terms() {
            let (hw, aw) = spec.tensor.split(w);
            let hm = Element::monomial(h.ctx(), hw.clone(), c.clone());
            let am = Element::monomial(actx, aw.clone(), Coefficient::one());
            let da = h.coproduct(&hm).relabel(&hha.ctx, |x| x);
            lhs = &lhs + &da.mul_commutative(&am.relabel(&hha.ctx, |x| x + 2 * hsize)).expect("same context");
            let ra = spec.apply(&am).relabel(&hha.ctx, |x| x + hsize);
            rhs = &rhs + &hm.relabel(&hha.ctx, |x| x).mul_commutative(&ra).expect("same context");
            counit = &counit + &am.scale_by(&h.counit(&hm));
        }
        let label = actx.generator(g).label();
        report.exact(|| format!("(Δ⊗id)ρ({label}) = (id⊗ρ)ρ({label})"), lhs == rhs);
        report.exact(|| format!("(ε⊗id)ρ({label}) = {label}"), counit == Element::generator(actx, g));
    }
    report.finish()
}

/// `E = (μ⊗id)∘ρ` with `μ` the Haar state of `H`.
pub fn conditional_expectation(spec: &CoactionSpec, a: &Element) -> Result<Element> {
    let actx = spec.a.ctx();
    let mut out = Element::zero(actx);
    for (w, c) in spec.apply(a).terms() {
        let (hw, aw) = spec.tensor.split(w);
        let mu = haar_state(&spec.h, &Element::monomial(spec.h.ctx(), hw, Coefficient::one()))?;
        if !mu.is_zero() {
            out.add_term(aw, &(c * &mu));
        }
    }
    Ok(out)
}

/// Whether `ρ(x) = 1 ⊗ x` holds exactly.
pub fn is_invariant(spec: &CoactionSpec, x: &Element) -> bool {
    spec.apply(x) == spec.right(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Decision;
    use crate::catalog::Family;
    use crate::phase::{substitution, LinearForm};

    fn forms(xs: &[&str]) -> Vec<LinearForm> {
        xs.iter().map(|s| LinearForm::parse(s).unwrap()).collect()
    }

    #[test]
    fn sphere_extension_constraints() {
        let spec = su3_on_s5().unwrap();
        let r = check_extension(&spec, 4).unwrap();
        assert_eq!(r.status, ExtensionStatus::ExtendsIff, "{r}");
        assert_eq!(r.constraints, forms(&["lambda12 - theta", "lambda13 + theta", "lambda23 - theta"]));
        assert!(r.structural.iter().all(|s| s.decision == Decision::Holds), "{:?}", r.structural);
    }

    #[test]
    fn su4_extension_constraints() {
        let spec = su3_on_su4().unwrap();
        let r = check_extension(&spec, 2).unwrap();
        assert_eq!(r.status, ExtensionStatus::ExtendsIff, "{r}");
        assert_eq!(r.constraints, forms(&["lambda12 - theta", "lambda13 + theta", "lambda23 - theta"]));
    }

    #[test]
    fn su2_block_action_fails() {
        let spec = su2_on_su3().unwrap();
        let r = check_extension(&spec, 2).unwrap();
        assert_eq!(r.status, ExtensionStatus::FailsIdentically, "{r}");
        assert_eq!(r.witnesses[0], ("u11".to_string(), "u12".to_string()));
        assert_eq!(r.forced_zero, vec!["theta".to_string()]);
        let flat = spec.substitute(&substitution([("theta", LinearForm::zero())])).unwrap();
        assert!(check_extension(&flat, 2).unwrap().is_unconditional());
    }

    #[test]
    fn concrete_theta_extends() {
        // phases like e^{2πi/3} are split by normalization, and λ is only defined mod 2
        for (v, expected) in [("1/3", "lambda12 - 1/3"), ("-3/4", "lambda12 + 3/4"), ("1/2", "lambda12 - 1/2")] {
            let subs = substitution([("theta", LinearForm::parse(v).unwrap())]);
            let r = check_extension_with(&su3_on_s5().unwrap().substitute(&subs).unwrap(), 2, false).unwrap();
            assert_eq!(r.status, ExtensionStatus::ExtendsIff, "{v}: {r}");
            assert_eq!(r.constraints[0], LinearForm::parse(expected).unwrap());
        }
    }

    #[test]
    fn identity_extends() {
        let spec = identity_on_s5().unwrap();
        let r = check_extension(&spec, 2).unwrap();
        assert!(r.is_unconditional(), "{r}");
        assert!(check_coaction_axioms(&spec).passed());
        let fp = fixed_points(&spec, 1);
        assert_eq!(fp.generators.len(), 3);
    }

    #[test]
    fn axioms_hold_for_builtins() {
        for spec in [su3_on_s5().unwrap(), su3_on_su4().unwrap()] {
            let r = check_extension(&spec, 2).unwrap();
            let solved = spec.substitute(&r.solution()).unwrap();
            let ax = check_coaction_axioms(&solved);
            assert!(ax.passed(), "{ax}");
        }
    }

    #[test]
    fn expectation_examples() {
        let spec = su3_on_su4().unwrap();
        let actx = spec.a.ctx();
        let g = |l: &str| Element::generator(actx, actx.parse_generator(l).unwrap());
        assert_eq!(conditional_expectation(&spec, &g("v41")).unwrap(), g("v41"));
        assert!(conditional_expectation(&spec, &g("v11")).unwrap().is_zero());
        assert_eq!(conditional_expectation(&spec, &Element::one(actx)).unwrap(), Element::one(actx));
    }

    #[test]
    fn su4_fixed_points_form_a_seven_sphere() {
        let spec = su3_on_su4().unwrap();
        let fp = fixed_points(&spec, 2);
        let actx = spec.a.ctx();
        let expect: Vec<Element> =
            (1..=4).map(|l| Element::generator(actx, actx.parse_generator(&format!("v4{l}")).unwrap())).collect();
        assert_eq!(fp.generators, expect);
        assert!(!fp.non_closed);
        let r = check_extension(&spec, 2).unwrap();
        let solved = spec.substitute(&r.solution()).unwrap();
        let gens: Vec<Element> = expect.iter().map(|x| x.rebase(solved.a.ctx(), &r.solution())).collect();
        let m = match_presentation(&gens, &solved.a, Family::Sphere, 4).unwrap();
        assert!(m.matched, "{m:?}");
        assert_eq!(m.theta_prime, crate::catalog::thetaprime());
        assert_eq!(m.central, vec![4]);
    }

    #[test]
    fn sphere_has_no_invariants() {
        let fp = fixed_points(&su3_on_s5().unwrap(), 3);
        assert!(fp.is_trivial());
        assert!(!fp.non_closed);
    }
}
