//! Hopf structure of θ-deformed matrix quantum groups.
//!
//! Coproduct, counit and antipode are the classical maps on the shared
//! underlying vector space (sorted words); the checks below test their
//! compatibility with the deformed products.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    words_up_to, Character, Coefficient, Context, Decision, Element, GenId, Ideal, Morphism, Presentation,
    TensorContext, Weight, Word,
};
use crate::catalog::Warning;
use crate::coaction::{homomorphism_constraints, ConstraintReport};
use crate::error::{Error, Result};
use crate::phase::{chi, DeformationMatrix, PhaseExponent, Rational, Substitution};

/// A presented θ-deformed matrix quantum group with generator grid `u[i][j]`.
#[derive(Clone, Debug)]
pub struct MatrixQuantumGroup {
    pub n: usize,
    /// The torus matrix `K` when `θ = K ⊕ (−K)`; `None` for a raw deformation matrix.
    pub k: Option<DeformationMatrix>,
    pub presentation: Presentation,
    pub warnings: Vec<Warning>,
    grid: Vec<Vec<GenId>>,
    ideal: Ideal,
    tensor: TensorContext,
    delta: Vec<Element>,
    counit: Character,
    antipode: Morphism,
}

impl MatrixQuantumGroup {
    pub(crate) fn from_parts(
        n: usize,
        k: Option<DeformationMatrix>,
        presentation: Presentation,
        grid: Vec<Vec<GenId>>,
        warnings: Vec<Warning>,
    ) -> Result<Self> {
        let ctx = presentation.ctx().clone();
        let tensor = TensorContext::new(&ctx, &ctx);
        let mut delta = Vec::with_capacity(ctx.generators().len());
        let mut eps = Vec::with_capacity(ctx.generators().len());
        let mut anti = Vec::with_capacity(ctx.generators().len());
        let pos = |g: GenId| -> (usize, usize) {
            let gen = ctx.generator(g);
            (gen.indices[0] as usize - 1, gen.indices[1] as usize - 1)
        };
        for g in ctx.ids() {
            let starred = ctx.generator(g).starred;
            let (i, j) = pos(g);
            let at = |a: usize, b: usize| if starred { ctx.star_id(grid[a][b]) } else { grid[a][b] };
            let mut d = Element::zero(&tensor.ctx);
            for m in 0..n {
                let w = tensor.join(&Word::from_ids(vec![at(i, m)]), &Word::from_ids(vec![at(m, j)]));
                d.add_term(w, &Coefficient::one());
            }
            delta.push(d);
            eps.push(if i == j { Coefficient::one() } else { Coefficient::zero() });
            // S(u_ij) = u*_ji and S(u*_ij) = u_ji
            let s = if starred { grid[j][i] } else { ctx.star_id(grid[j][i]) };
            anti.push(Element::generator(&ctx, s));
        }
        let ideal = presentation.ideal();
        Ok(MatrixQuantumGroup {
            n,
            k,
            presentation,
            warnings,
            grid,
            ideal,
            delta,
            counit: Character { values: eps },
            antipode: Morphism::new(&ctx, anti),
            tensor,
        })
    }

    pub fn ctx(&self) -> &Arc<Context> {
        self.presentation.ctx()
    }

    pub fn theta(&self) -> &DeformationMatrix {
        self.ctx().theta()
    }

    /// Generator ids of `u[i][j]`, 0-based.
    pub fn grid(&self) -> &[Vec<GenId>] {
        &self.grid
    }

    pub fn u(&self, i: usize, j: usize) -> Element {
        Element::generator(self.ctx(), self.grid[i][j])
    }

    pub fn u_star(&self, i: usize, j: usize) -> Element {
        Element::generator(self.ctx(), self.ctx().star_id(self.grid[i][j]))
    }

    /// The context of `H ⊗ H` with matrix `θ ⊕ θ`.
    pub fn tensor(&self) -> &TensorContext {
        &self.tensor
    }

    /// The ideal of the structural relations.
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// Membership of `a` in the presentation ideal, refuted at classical points when possible.
    pub fn reduce(&self, a: &Element, degree_bound: usize) -> Decision {
        self.ideal.decide(a, degree_bound)
    }

    pub fn coproduct(&self, a: &Element) -> Element {
        Morphism::new(&self.tensor.ctx, self.delta.clone()).apply(a)
    }

    pub fn coproduct_of(&self, g: GenId) -> &Element {
        &self.delta[g as usize]
    }

    /// Replaces `Δ` on one generator, e.g. to build a negative control.
    pub fn set_coproduct(&mut self, g: GenId, image: Element) -> Result<()> {
        if !image.ctx().same(&self.tensor.ctx) {
            return Err(Error::Context);
        }
        self.delta[g as usize] = image;
        Ok(())
    }

    pub fn counit(&self, a: &Element) -> Coefficient {
        self.counit.apply(a)
    }

    /// The antipode, antimultiplicative for the twisted product.
    pub fn antipode(&self, a: &Element) -> Element {
        self.antipode.apply(a)
    }

    /// Same group with parameters substituted.
    pub fn substitute(&self, subs: &Substitution) -> Result<MatrixQuantumGroup> {
        let pres = self.presentation.substitute(subs);
        let k = self.k.as_ref().map(|k| k.substitute(subs));
        let mut q = MatrixQuantumGroup::from_parts(self.n, k, pres, self.grid.clone(), self.warnings.clone())?;
        // carry over replaced coproduct images
        for (g, d) in self.delta.iter().enumerate() {
            let split: Vec<(Word, Coefficient)> = d.terms().map(|(w, c)| (w.clone(), c.substitute(subs))).collect();
            q.delta[g] = Element::from_terms(&q.tensor.ctx, split);
        }
        Ok(q)
    }

    /// `m ∘ (f ⊗ g)` on an element of `H ⊗ H`, with `m` the twisted product.
    fn multiply_legs(&self, x: &Element, f: impl Fn(&Element) -> Element, g: impl Fn(&Element) -> Element) -> Element {
        let ctx = self.ctx();
        let mut out = Element::zero(ctx);
        for (w, c) in x.terms() {
            let (l, r) = self.tensor.split(w);
            let left = f(&Element::monomial(ctx, l, c.clone()));
            let right = g(&Element::monomial(ctx, r, Coefficient::one()));
            out = &out + &left.twisted_mul(&right).expect("same context");
        }
        out
    }

    /// Applies a functional to one leg of an element of `H ⊗ H`.
    fn contract(&self, x: &Element, left_leg: bool, f: impl Fn(&Element) -> Result<Coefficient>) -> Result<Element> {
        let ctx = self.ctx();
        let mut out = Element::zero(ctx);
        for (w, c) in x.terms() {
            let (l, r) = self.tensor.split(w);
            let (used, kept) = if left_leg { (l, r) } else { (r, l) };
            let v = f(&Element::monomial(ctx, used, Coefficient::one()))?;
            out.add_term(kept, &(c * &v));
        }
        Ok(out)
    }

    fn words(&self, max_degree: usize) -> Vec<Word> {
        words_up_to(self.ctx(), max_degree, None).into_iter().filter(|w| !w.is_empty()).collect()
    }
}

/// Outcome of a checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Undecided => "undecided",
        })
    }
}

/// Aggregated result of an axiom check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    /// Number of identities examined.
    pub checked: usize,
    /// Identities shown false, with a description.
    pub failures: Vec<String>,
    /// Identities neither proved nor refuted at the degree bound.
    pub undecided: Vec<String>,
    /// Parameter constraints, for checks that emit them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraints: Option<ConstraintReport>,
}

impl CheckReport {
    pub(crate) fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            status: Status::Pass,
            checked: 0,
            failures: Vec::new(),
            undecided: Vec::new(),
            constraints: None,
        }
    }

    pub(crate) fn record(&mut self, what: impl FnOnce() -> String, d: Decision) {
        self.checked += 1;
        match d {
            Decision::Holds => {}
            Decision::Fails => self.failures.push(what()),
            Decision::Undecided => self.undecided.push(what()),
        }
    }

    pub(crate) fn exact(&mut self, what: impl FnOnce() -> String, holds: bool) {
        self.record(what, if holds { Decision::Holds } else { Decision::Fails });
    }

    pub(crate) fn finish(mut self) -> Self {
        self.status = if !self.failures.is_empty() {
            Status::Fail
        } else if !self.undecided.is_empty() {
            Status::Undecided
        } else {
            Status::Pass
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({} checked)", self.name, self.status, self.checked)?;
        for x in &self.failures {
            write!(f, "\n  fails: {x}")?;
        }
        for x in &self.undecided {
            write!(f, "\n  undecided: {x}")?;
        }
        if let Some(c) = &self.constraints {
            write!(f, "\n  {c}")?;
        }
        Ok(())
    }
}

/// `(Δ⊗id)Δ = (id⊗Δ)Δ` on generators and degree-2 words, exactly.
pub fn check_coassociativity(q: &MatrixQuantumGroup, degree_bound: usize) -> CheckReport {
    let mut report = CheckReport::new("coassociativity");
    let ctx = q.ctx();
    let hh = q.tensor();
    let hhh = TensorContext::new(&hh.ctx, ctx);
    let size = ctx.generators().len() as GenId;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for g in ctx.ids() {
        let d = q.coproduct_of(g);
        let mut l = Element::zero(&hhh.ctx);
        let mut r = Element::zero(&hhh.ctx);
        for (w, c) in d.terms() {
            let (a, b) = hh.split(w);
            let da = q.coproduct(&Element::monomial(ctx, a.clone(), c.clone())).relabel(&hhh.ctx, |g| g);
            let bb = Element::monomial(ctx, b.clone(), Coefficient::one()).relabel(&hhh.ctx, |g| g + 2 * size);
            l = &l + &da.mul_commutative(&bb).expect("same context");
            let aa = Element::monomial(ctx, a, c.clone()).relabel(&hhh.ctx, |g| g);
            let db = q.coproduct(&Element::monomial(ctx, b, Coefficient::one())).relabel(&hhh.ctx, |g| g + size);
            r = &r + &aa.mul_commutative(&db).expect("same context");
        }
        left.push(l);
        right.push(r);
    }
    let lm = Morphism::new(&hhh.ctx, left);
    let rm = Morphism::new(&hhh.ctx, right);
    for w in q.words(degree_bound.min(2)) {
        let holds = lm.apply_word(&w) == rm.apply_word(&w);
        report.exact(|| ctx.format_word(&w), holds);
    }
    report.finish()
}

/// `(ε⊗id)Δ = id = (id⊗ε)Δ` on words up to the bound (at most 2), exactly.
///
/// Both sides are multiplicative on sorted words, so products of two
/// generators already exercise every interaction.
pub fn check_counit(q: &MatrixQuantumGroup, degree_bound: usize) -> CheckReport {
    let mut report = CheckReport::new("counit");
    let ctx = q.ctx();
    for w in q.words(degree_bound.min(2)) {
        let a = Element::monomial(ctx, w.clone(), Coefficient::one());
        let d = q.coproduct(&a);
        let l = q.contract(&d, true, |x| Ok(q.counit(x))).expect("counit is total");
        let r = q.contract(&d, false, |x| Ok(q.counit(x))).expect("counit is total");
        report.exact(|| format!("(ε⊗id)Δ({})", ctx.format_word(&w)), l == a);
        report.exact(|| format!("(id⊗ε)Δ({})", ctx.format_word(&w)), r == a);
    }
    report.finish()
}

/// `m(id⊗S)Δ(g) = ε(g)1 = m(S⊗id)Δ(g)` for every generator, modulo the presentation.
pub fn check_antipode_axiom(q: &MatrixQuantumGroup, degree_bound: usize) -> CheckReport {
    let mut report = CheckReport::new("antipode");
    let ctx = q.ctx();
    for g in ctx.ids() {
        let a = Element::generator(ctx, g);
        let d = q.coproduct(&a);
        let unit = Element::constant(ctx, q.counit(&a));
        let label = ctx.generator(g).label();
        let right = q.multiply_legs(&d, |x| x.clone(), |x| q.antipode(x));
        report.record(|| format!("m(id⊗S)Δ({label}) = ε({label})"), q.reduce(&(&right - &unit), degree_bound));
        let left = q.multiply_legs(&d, |x| q.antipode(x), |x| x.clone());
        report.record(|| format!("m(S⊗id)Δ({label}) = ε({label})"), q.reduce(&(&left - &unit), degree_bound));
    }
    report.finish()
}

/// `S(a ×θ b) = S(b) ×θ S(a)` for all generator pairs, exactly.
pub fn check_antipode_antimultiplicative(q: &MatrixQuantumGroup) -> CheckReport {
    let mut report = CheckReport::new("antipode reverses products");
    let ctx = q.ctx();
    for a in ctx.ids() {
        for b in ctx.ids() {
            let ab = Element::ordered_product(ctx, &[a, b]);
            let lhs = q.antipode(&ab);
            let rhs = q
                .antipode(&Element::generator(ctx, b))
                .twisted_mul(&q.antipode(&Element::generator(ctx, a)))
                .expect("same context");
            report.exact(|| format!("S({} {})", ctx.generator(a), ctx.generator(b)), lhs == rhs);
        }
    }
    report.finish()
}

/// `Δ(a ×θ b) = Δ(a) ×_{θ⊕θ} Δ(b)` for all generator pairs, with the
/// parameter constraints under which it holds.
pub fn check_coproduct_homomorphism(q: &MatrixQuantumGroup) -> CheckReport {
    let mut report = CheckReport::new("coproduct is a homomorphism");
    let cr = homomorphism_constraints(q.ctx(), &q.tensor().ctx, |a| q.coproduct(a));
    report.checked = cr.pairs_checked;
    if !cr.is_unconditional() {
        report.failures = cr.witnesses.iter().map(|(a, b)| format!("Δ({a} {b})")).collect();
    }
    report.constraints = Some(cr);
    report.finish()
}

/// A matrix corepresentation: entries `u_ij` and the adjoint entries `(U*)_kl`.
#[derive(Clone, Debug)]
pub struct CorepGrid {
    pub entries: Vec<Vec<Element>>,
    pub adjoint: Vec<Vec<Element>>,
}

impl CorepGrid {
    /// The fundamental corepresentation: `(U*)_kl = u_lk*`.
    pub fn fundamental(q: &MatrixQuantumGroup) -> CorepGrid {
        let n = q.n;
        CorepGrid {
            entries: (0..n).map(|i| (0..n).map(|j| q.u(i, j)).collect()).collect(),
            adjoint: (0..n).map(|k| (0..n).map(|l| q.u_star(l, k)).collect()).collect(),
        }
    }
}

/// `U U* = U* U = I` modulo the presentation, and `Δ(u_ij) = Σ_k (u_ik⊗1)(1⊗u_kj)`.
#[allow(clippy::needless_range_loop)]
pub fn check_corep_unitarity(q: &MatrixQuantumGroup, grid: &CorepGrid, degree_bound: usize) -> CheckReport {
    let mut report = CheckReport::new("corepresentation unitarity");
    let ctx = q.ctx();
    let n = grid.entries.len();
    for (name, a, b) in [("UU*", &grid.entries, &grid.adjoint), ("U*U", &grid.adjoint, &grid.entries)] {
        for i in 0..n {
            for j in 0..n {
                let mut e = Element::zero(ctx);
                for k in 0..n {
                    e = &e + &a[i][k].twisted_mul(&b[k][j]).expect("same context");
                }
                if i == j {
                    e = &e - &Element::one(ctx);
                }
                report.record(|| format!("({name})[{},{}]", i + 1, j + 1), q.reduce(&e, degree_bound));
            }
        }
    }
    let t = q.tensor();
    let lift = |x: &Element, right: bool| {
        let off = if right { ctx.generators().len() as GenId } else { 0 };
        x.relabel(&t.ctx, move |g| g + off)
    };
    for i in 0..n {
        for j in 0..n {
            let lhs = q.coproduct(&grid.entries[i][j]);
            let mut rhs = Element::zero(&t.ctx);
            for k in 0..n {
                rhs = &rhs + &lift(&grid.entries[i][k], false).twisted_mul(&lift(&grid.entries[k][j], true)).unwrap();
            }
            report.exact(|| format!("Δ(U)[{},{}] = (U₁₂U₁₃)[{},{}]", i + 1, j + 1, i + 1, j + 1), lhs == rhs);
        }
    }
    report.finish()
}

/// Exponent of the braiding phase `e^{πi θ(p,q)}` on `v_p ⊗ w_q`.
pub fn braiding(theta: &DeformationMatrix, p: &Weight, q: &Weight) -> Result<PhaseExponent> {
    chi(theta, p, q)
}

/// The Haar state on words of bidegree `(0,0)` and `(1,1)`.
///
/// Nonzero weights integrate to zero; `u_ij u*_kl` integrates to
/// `δ_ik δ_jl / n` by Schur orthogonality, since the deformed Haar state is
/// the classical one on the shared vector space.
pub fn haar_state(q: &MatrixQuantumGroup, a: &Element) -> Result<Coefficient> {
    let ctx = q.ctx();
    let mut out = Coefficient::zero();
    for (w, c) in a.terms() {
        if !ctx.word_weight(w).is_zero() {
            continue;
        }
        let ids = w.ids();
        if ids.is_empty() {
            out = &out + c;
            continue;
        }
        let plain: Vec<GenId> = ids.iter().copied().filter(|&g| !ctx.generator(g).starred).collect();
        let starred: Vec<GenId> = ids.iter().copied().filter(|&g| ctx.generator(g).starred).collect();
        if plain.len() != 1 || starred.len() != 1 {
            return Err(Error::UnsupportedDegree(ctx.format_word(w)));
        }
        if ctx.star_id(starred[0]) == plain[0] {
            out = &out + &c.scale(&Rational::new(1.into(), (q.n as i64).into()));
        }
    }
    Ok(out)
}

/// Bidegree-(1,1) products `u_ij u*_kl` in both orders, plus generators.
fn haar_domain(q: &MatrixQuantumGroup) -> Vec<(String, Element)> {
    let ctx = q.ctx();
    let mut out: Vec<(String, Element)> =
        ctx.ids().map(|g| (ctx.generator(g).label(), Element::generator(ctx, g))).collect();
    out.push(("1".into(), Element::one(ctx)));
    let plain: Vec<GenId> = ctx.unstarred_ids().collect();
    for &a in &plain {
        for &b in &plain {
            let bs = ctx.star_id(b);
            for letters in [[a, bs], [bs, a]] {
                let label = format!("{} {}", ctx.generator(letters[0]), ctx.generator(letters[1]));
                out.push((label, Element::ordered_product(ctx, &letters)));
            }
        }
    }
    out
}

/// Invariance `(id⊗μ)Δ = μ(·)1 = (μ⊗id)Δ` and `μ∘S = μ` on the supported domain.
pub fn check_haar_identities(q: &MatrixQuantumGroup, degree_bound: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("Haar state");
    let ctx = q.ctx();
    for (label, a) in haar_domain(q) {
        let mu = haar_state(q, &a)?;
        let target = Element::constant(ctx, mu.clone());
        let d = q.coproduct(&a);
        let right = q.contract(&d, false, |x| haar_state(q, x))?;
        report.record(|| format!("(id⊗μ)Δ({label})"), q.reduce(&(&right - &target), degree_bound));
        let left = q.contract(&d, true, |x| haar_state(q, x))?;
        report.record(|| format!("(μ⊗id)Δ({label})"), q.reduce(&(&left - &target), degree_bound));
        let s = haar_state(q, &q.antipode(&a))?;
        report.exact(|| format!("μ(S({label}))"), s == mu);
    }
    Ok(report.finish())
}

/// All Hopf checks used by the command line.
pub fn full_check(q: &MatrixQuantumGroup, degree_bound: usize) -> Result<Vec<CheckReport>> {
    let mut out = vec![check_coproduct_homomorphism(q)];
    if q.k.is_none() && !q.theta().is_quantum_group_shape() {
        return Ok(out);
    }
    out.push(check_coassociativity(q, degree_bound));
    out.push(check_counit(q, degree_bound));
    out.push(check_antipode_antimultiplicative(q));
    out.push(check_antipode_axiom(q, degree_bound));
    out.push(check_corep_unitarity(q, &CorepGrid::fundamental(q), degree_bound));
    out.push(check_haar_identities(q, degree_bound)?);
    Ok(out)
}

/// The group-like Hopf structure of a torus: `Δ(U_j) = U_j ⊗ U_j`,
/// `ε(U_j) = 1`, `S(U_j) = U_j*`. It respects the deformed product only when
/// the deformation vanishes, which the homomorphism check reports.
pub fn check_torus_group(torus: &Presentation, degree_bound: usize) -> Vec<CheckReport> {
    let ctx = torus.ctx();
    let t = TensorContext::new(ctx, ctx);
    let delta: Vec<Element> = ctx
        .ids()
        .map(|g| {
            Element::monomial(&t.ctx, t.join(&Word::from_ids(vec![g]), &Word::from_ids(vec![g])), Coefficient::one())
        })
        .collect();
    let delta = Morphism::new(&t.ctx, delta);
    let antipode = Morphism::new(ctx, ctx.ids().map(|g| Element::generator(ctx, ctx.star_id(g))).collect());
    let counit = Character { values: vec![Coefficient::one(); ctx.generators().len()] };
    let ideal = torus.ideal();
    let words: Vec<Word> = words_up_to(ctx, degree_bound.min(2), None).into_iter().filter(|w| !w.is_empty()).collect();

    let mut hom = CheckReport::new("coproduct is a homomorphism");
    let cr = homomorphism_constraints(ctx, &t.ctx, |a| delta.apply(a));
    hom.checked = cr.pairs_checked;
    if !cr.is_unconditional() {
        hom.failures = cr.witnesses.iter().map(|(a, b)| format!("Δ({a} {b})")).collect();
    }
    hom.constraints = Some(cr);

    let mut coassoc = CheckReport::new("coassociativity");
    let mut counit_report = CheckReport::new("counit");
    let mut anti = CheckReport::new("antipode");
    for w in &words {
        // group-like words stay group-like, so both sides equal w ⊗ w ⊗ w
        let d = delta.apply_word(w);
        let (l, r) = t.split(d.terms().next().expect("nonzero").0);
        coassoc.exact(|| ctx.format_word(w), d.len() == 1 && l == *w && r == *w);
        let a = Element::monomial(ctx, w.clone(), Coefficient::one());
        let e = counit.apply(&a);
        counit_report.exact(|| format!("(ε⊗id)Δ({})", ctx.format_word(w)), e.is_one());
    }
    for g in ctx.ids() {
        let a = Element::generator(ctx, g);
        let sa = antipode.apply(&a);
        let one = Element::one(ctx);
        let label = ctx.generator(g).label();
        let right = a.twisted_mul(&sa).expect("same context");
        anti.record(|| format!("m(id⊗S)Δ({label}) = 1"), ideal.decide(&(&right - &one), degree_bound));
        let left = sa.twisted_mul(&a).expect("same context");
        anti.record(|| format!("m(S⊗id)Δ({label}) = 1"), ideal.decide(&(&left - &one), degree_bound));
    }
    vec![hom.finish(), coassoc.finish(), counit_report.finish(), anti.finish()]
}
