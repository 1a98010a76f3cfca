//! Constructors for concrete deformed algebras: noncommutative tori,
//! Connes–Landi spheres and the quantum groups `SU(n)_θ`.

use num_traits::{One, Zero};
use std::fmt;

use crate::algebra::{
    generate_exchange_relations, Coefficient, Context, Element, GenId, Generator, PairSelection, Presentation,
    Relation, Weight,
};
use crate::error::{Error, Result};
use crate::hopf::MatrixQuantumGroup;
use crate::phase::{make_quantum_group_matrix, rat, DeformationMatrix, LinearForm, PhaseExponent, Rational};

/// Non-fatal remarks attached to a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// `SU(2)` has a rank-one torus, so every θ-deformation of it is trivial.
    NoNontrivialDeformation { n: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NoNontrivialDeformation { n } => {
                write!(f, "SU({n}) admits no nontrivial θ-deformation; the algebra stays commutative")
            }
        }
    }
}

/// Catalog families that [`crate::coaction::match_presentation`] can recognise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Torus,
    Sphere,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Torus => "torus",
            Family::Sphere => "sphere",
        })
    }
}

/// A catalog entry addressed as `torus:n`, `sphere:n` or `su:n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogName {
    Torus(usize),
    Sphere(usize),
    Su(usize),
}

impl CatalogName {
    pub fn parse(s: &str) -> Result<CatalogName> {
        let (family, n) = s.split_once(':').ok_or_else(|| Error::Parse(format!("expected family:n, got `{s}`")))?;
        let n: usize = n.parse().map_err(|_| Error::Parse(format!("bad size in `{s}`")))?;
        if n == 0 {
            return Err(Error::Parse(format!("size must be positive in `{s}`")));
        }
        match family {
            "torus" => Ok(CatalogName::Torus(n)),
            "sphere" => Ok(CatalogName::Sphere(n)),
            "su" if n >= 2 => Ok(CatalogName::Su(n)),
            "su" => Err(Error::Parse("su:n needs n ≥ 2".into())),
            other => Err(Error::Parse(format!("unknown catalog family `{other}`"))),
        }
    }

    /// Size of the deformation matrix the entry is parameterised by.
    pub fn matrix_dim(&self) -> usize {
        match *self {
            CatalogName::Torus(n) | CatalogName::Sphere(n) => n,
            CatalogName::Su(n) => n - 1,
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogName::Torus(n) => write!(f, "torus:{n}"),
            CatalogName::Sphere(n) => write!(f, "sphere:{n}"),
            CatalogName::Su(n) => write!(f, "su:{n}"),
        }
    }
}

fn check_square(m: &DeformationMatrix, n: usize) -> Result<()> {
    if m.dim() != n {
        return Err(Error::Dimension { expected: n, got: m.dim() });
    }
    Ok(())
}

/// Noncommutative torus: unitaries `U_j` of weight `e_j`.
pub fn build_nc_torus(lambda: &DeformationMatrix) -> Result<Presentation> {
    let n = lambda.dim();
    let base = (0..n).map(|j| Generator::new("U", &[j as u32 + 1], Weight::unit(n, j))).collect();
    let ctx = Context::new(lambda.clone(), base)?;
    let mut relations: Vec<Relation> = exchange(&ctx, true);
    for j in 0..n {
        let u = ctx.find("U", &[j as u32 + 1], false)?;
        relations.push(Relation::structural(
            &format!("unitary({})", j + 1),
            vec![(Coefficient::one(), vec![u, ctx.star_id(u)]), (minus_one(), vec![])],
        ));
    }
    let points = vec![
        fill_point(&ctx, |_| Coefficient::gaussian(rat(3, 5), rat(4, 5))),
        fill_point(&ctx, |g| {
            if idx(g, 0).is_multiple_of(2) {
                Coefficient::gaussian(rat(0, 1), rat(1, 1))
            } else {
                minus_one()
            }
        }),
    ];
    Ok(Presentation::new(&format!("torus:{n}"), ctx, relations)?.with_points(points))
}

/// Connes–Landi sphere `S^{2n−1}_λ`: normal generators `z_j` of weight `e_j` and `Σ z_k z_k* = 1`.
pub fn build_sphere(lambda: &DeformationMatrix, n: usize) -> Result<Presentation> {
    check_square(lambda, n)?;
    let base = (0..n).map(|j| Generator::new("z", &[j as u32 + 1], Weight::unit(n, j))).collect();
    let ctx = Context::new(lambda.clone(), base)?;
    let mut relations = exchange(&ctx, true);
    let mut radius = Vec::new();
    for j in 0..n {
        let z = ctx.find("z", &[j as u32 + 1], false)?;
        radius.push((Coefficient::one(), vec![z, ctx.star_id(z)]));
    }
    radius.push((minus_one(), vec![]));
    relations.push(Relation::structural("radius", radius));
    let points = su_points(n).iter().map(|m| fill_point(&ctx, |g| m[0][idx(g, 0)].clone())).collect();
    Ok(Presentation::new(&format!("sphere:{n}"), ctx, relations)?.with_points(points))
}

fn idx(g: &Generator, k: usize) -> usize {
    g.indices[k] as usize - 1
}

/// One value per generator id: `f` on unstarred generators, conjugates on their stars.
fn fill_point(ctx: &Context, f: impl Fn(&Generator) -> Coefficient) -> Vec<Coefficient> {
    ctx.generators().iter().map(|g| if g.starred { f(g).conj() } else { f(g) }).collect()
}

fn invert(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible matrix");
        a.swap(col, piv);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Cayley transform `(I − A)(I + A)^{-1}`: a rational point of `SO(n) ⊂ SU(n)`.
fn cayley(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let id = |i: usize, j: usize| if i == j { Rational::one() } else { Rational::zero() };
    let minus: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| id(i, j) - &a[i][j]).collect()).collect();
    let plus: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| id(i, j) + &a[i][j]).collect()).collect();
    let inv = invert(&plus);
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &minus[i][k] * &inv[k][j]).sum()).collect()).collect()
}

/// A few exact points of `SU(n)`: two real rotations and one with complex entries.
pub fn su_points(n: usize) -> Vec<Vec<Vec<Coefficient>>> {
    let skew = |f: &dyn Fn(usize, usize) -> Rational| -> Vec<Vec<Rational>> {
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| match j.cmp(&k) {
                        std::cmp::Ordering::Less => f(j, k),
                        std::cmp::Ordering::Greater => -f(k, j),
                        std::cmp::Ordering::Equal => Rational::zero(),
                    })
                    .collect()
            })
            .collect()
    };
    let r1 = cayley(&skew(&|j, k| rat(1, (j + k + 2) as i64)));
    let r2 = cayley(&skew(&|j, k| rat(if (j + k) % 2 == 0 { 2 } else { -1 }, 3)));
    let real = |m: &Vec<Vec<Rational>>| -> Vec<Vec<Coefficient>> {
        m.iter().map(|r| r.iter().map(|x| Coefficient::rational(x.clone())).collect()).collect()
    };
    // diag(i, −i, 1, …) · r2 stays in SU(n)
    let mut complex = real(&r2);
    if n >= 2 {
        let i = Coefficient::gaussian(Rational::zero(), Rational::one());
        complex[0] = complex[0].iter().map(|x| x * &i).collect();
        complex[1] = complex[1].iter().map(|x| x * &i.conj()).collect();
    }
    vec![real(&r1), real(&r2), complex]
}

fn exchange(ctx: &Context, with_stars: bool) -> Vec<Relation> {
    generate_exchange_relations(ctx, PairSelection { with_stars, include_trivial: true })
        .iter()
        .map(|r| r.to_relation(ctx))
        .collect()
}

fn minus_one() -> Coefficient {
    Coefficient::rational(-Rational::one())
}

/// Left (row) weight of row `i` (0-based) of an `n×n` matrix: `e_i`, and `−Σe_j` for the last row.
pub fn su_row_weight(n: usize, i: usize) -> Weight {
    if i + 1 < n {
        Weight::unit(n - 1, i)
    } else {
        Weight::new(vec![-1; n - 1])
    }
}

/// `SU(n)_θ` with `θ = K ⊕ (−K)` and generators `u[i][j]`.
pub fn build_su_theta(n: usize, k: &DeformationMatrix) -> Result<MatrixQuantumGroup> {
    build_su_theta_named(n, k, "u")
}

/// As [`build_su_theta`] with another generator symbol (`v` for `SU(4)_λ`, say).
pub fn build_su_theta_named(n: usize, k: &DeformationMatrix, symbol: &str) -> Result<MatrixQuantumGroup> {
    if n < 2 {
        return Err(Error::InvariantViolation("SU(n) needs n ≥ 2".into()));
    }
    check_square(k, n - 1)?;
    let theta = make_quantum_group_matrix(k)?;
    build(n, Some(k.clone()), theta, symbol)
}

/// The `SU(n)` coordinate algebra deformed by an arbitrary antisymmetric
/// `2(n−1)`-square matrix, which need not have the shape `K ⊕ (−K)`.
pub fn build_su_theta_full(n: usize, theta: &DeformationMatrix, symbol: &str) -> Result<MatrixQuantumGroup> {
    if n < 2 {
        return Err(Error::InvariantViolation("SU(n) needs n ≥ 2".into()));
    }
    check_square(theta, 2 * (n - 1))?;
    build(n, None, theta.clone(), symbol)
}

fn build(n: usize, k: Option<DeformationMatrix>, theta: DeformationMatrix, symbol: &str) -> Result<MatrixQuantumGroup> {
    let mut base = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let w = su_row_weight(n, i).concat(&su_row_weight(n, j));
            base.push(Generator::new(symbol, &[i as u32 + 1, j as u32 + 1], w));
        }
    }
    let ctx = Context::new(theta, base)?;
    let mut grid = vec![vec![0 as GenId; n]; n];
    for (i, row) in grid.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = ctx.find(symbol, &[i as u32 + 1, j as u32 + 1], false)?;
        }
    }
    let mut relations = exchange(&ctx, false);
    relations.extend(unitarity_relations(&ctx, &grid));
    relations.push(determinant_relation(&ctx, &grid));
    let mut warnings = Vec::new();
    if n < 3 && !ctx.theta().is_zero() {
        warnings.push(Warning::NoNontrivialDeformation { n });
    }
    let points = su_points(n).iter().map(|m| fill_point(&ctx, |g| m[idx(g, 0)][idx(g, 1)].clone())).collect();
    let pres = Presentation::new(&format!("su:{n}"), ctx, relations)?.with_points(points);
    MatrixQuantumGroup::from_parts(n, k, pres, grid, warnings)
}

/// `Σ_k u_jk u*_lk − δ_jl` (rows) and `Σ_k u*_kj u_kl − δ_jl` (columns), as twisted products.
fn unitarity_relations(ctx: &Context, grid: &[Vec<GenId>]) -> Vec<Relation> {
    let n = grid.len();
    let delta = |j: usize, l: usize| if j == l { vec![(minus_one(), vec![])] } else { vec![] };
    let mut out = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for l in 0..n {
            let mut terms: Vec<_> =
                (0..n).map(|k| (Coefficient::one(), vec![grid[j][k], ctx.star_id(grid[l][k])])).collect();
            terms.extend(delta(j, l));
            out.push(Relation::structural(&format!("row({},{})", j + 1, l + 1), terms));
        }
    }
    for j in 0..n {
        for l in 0..n {
            let mut terms: Vec<_> =
                (0..n).map(|k| (Coefficient::one(), vec![ctx.star_id(grid[k][j]), grid[k][l]])).collect();
            terms.extend(delta(j, l));
            out.push(Relation::structural(&format!("col({},{})", j + 1, l + 1), terms));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), sign));
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            // inversions contributed by placing v after the current prefix
            let inv = prefix.iter().filter(|&&p| p > v).count();
            used[v] = true;
            prefix.push(v);
            rec(prefix, used, if inv % 2 == 0 { sign } else { -sign }, out);
            prefix.pop();
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], 1, &mut out);
    out
}

fn determinant_terms(grid: &[Vec<GenId>]) -> Vec<(Coefficient, Vec<GenId>)> {
    permutations(grid.len())
        .into_iter()
        .map(|(sigma, sign)| {
            let letters = sigma.iter().enumerate().map(|(i, &s)| grid[i][s]).collect();
            (Coefficient::rational(Rational::from_integer(sign.into())), letters)
        })
        .collect()
}

/// `det U − 1` with the classical (commutative) determinant: each ordered
/// product is rescaled by the inverse of its ordering phase.
fn determinant_relation(ctx: &Context, grid: &[Vec<GenId>]) -> Relation {
    let mut terms: Vec<_> = determinant_terms(grid)
        .into_iter()
        .map(|(c, letters)| (c.mul_phase(&-&ctx.ordering_phase(&letters)), letters))
        .collect();
    terms.push((minus_one(), vec![]));
    Relation::structural("det", terms)
}

/// `Σ_σ sgn σ · u_{1σ(1)} ×θ … ×θ u_{nσ(n)}` in row order.
pub fn twisted_determinant(q: &MatrixQuantumGroup) -> Element {
    let ctx = q.ctx();
    let mut out = Element::zero(ctx);
    for (c, letters) in determinant_terms(q.grid()) {
        out = &out + &Element::ordered_product(ctx, &letters).scale_by(&c);
    }
    out
}

/// Exchange phase of the twisted determinant with every generator, or `None`
/// when the determinant is not weight-homogeneous.
pub fn determinant_exchange_phases(q: &MatrixQuantumGroup) -> Vec<(GenId, Option<PhaseExponent>)> {
    let ctx = q.ctx();
    let det = twisted_determinant(q);
    let w = det.weight();
    ctx.ids()
        .map(|g| {
            let phase = w.as_ref().map(|w| {
                PhaseExponent::new(ctx.theta().pairing(w, &ctx.generator(g).weight).expect("weights fit the context"))
            });
            (g, phase)
        })
        .collect()
}

fn theta() -> LinearForm {
    LinearForm::param("theta")
}

/// `K = [[0, θ], [−θ, 0]]`, the one-parameter torus matrix of `SU(3)_θ`.
pub fn su3_k() -> DeformationMatrix {
    DeformationMatrix::from_upper(2, |_, _| theta())
}

/// `K` with entries `lambda12`, `lambda13`, `lambda23` for `SU(4)_λ`.
pub fn su4_k() -> DeformationMatrix {
    DeformationMatrix::symbolic(3, "lambda")
}

/// Generic symbolic `λ` for the sphere `S^{2n−1}_λ`.
pub fn sphere_lambda(n: usize) -> DeformationMatrix {
    DeformationMatrix::symbolic(n, "lambda")
}

/// `θ′` of the invariant 7-sphere: `θ′12 = −θ, θ′13 = θ, θ′23 = −θ`, fourth row zero.
pub fn thetaprime() -> DeformationMatrix {
    let t = theta();
    DeformationMatrix::from_upper(4, |j, k| match (j, k) {
        (0, 1) | (1, 2) => -&t,
        (0, 2) => t.clone(),
        _ => LinearForm::zero(),
    })
}

/// A generic antisymmetric 4×4 matrix with entries `t12 … t34`.
pub fn generic4() -> DeformationMatrix {
    DeformationMatrix::symbolic(4, "t")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{int, substitution};

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        let total: i64 = perms.iter().map(|(_, s)| s).sum();
        assert_eq!(total, 0);
        assert!(perms.contains(&(vec![1, 0, 2], -1)));
        assert!(perms.contains(&(vec![1, 2, 0], 1)));
    }

    #[test]
    fn torus_has_one_exchange_phase() {
        let lam = DeformationMatrix::from_upper(2, |_, _| theta());
        let p = build_nc_torus(&lam).unwrap();
        let ctx = p.ctx();
        let ex: Vec<_> = generate_exchange_relations(ctx, PairSelection::default());
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0].phase, PhaseExponent::new(theta()));
        let u1 = ctx.find("U", &[1], false).unwrap();
        assert_eq!(ctx.generator(ctx.star_id(u1)).weight, Weight::new(vec![-1, 0]));
    }

    #[test]
    fn su2_determinant_is_classical() {
        let q = build_su_theta(2, &DeformationMatrix::zero(1)).unwrap();
        let ctx = q.ctx();
        let det = twisted_determinant(&q);
        let g = |l: &str| Element::generator(ctx, ctx.parse_generator(l).unwrap());
        let expect = &g("u11").mul_commutative(&g("u22")).unwrap() - &g("u12").mul_commutative(&g("u21")).unwrap();
        assert_eq!(det, expect);
        assert!(q.warnings.is_empty());
    }

    #[test]
    fn su3_determinant_has_six_terms_and_weight_zero() {
        let q = build_su_theta(3, &su3_k()).unwrap();
        let det = twisted_determinant(&q);
        assert_eq!(det.len(), 6);
        assert!(det.weight().unwrap().is_zero());
        let zero = substitution([("theta", LinearForm::zero())]);
        let flat = det.rebase(&q.ctx().substitute(&zero), &zero);
        for (_, c) in flat.terms() {
            assert!(c.as_rational().is_some());
        }
        assert!(determinant_exchange_phases(&q).iter().all(|(_, p)| p.as_ref().unwrap().is_zero()));
        assert_eq!(q.counit(&det).as_rational(), Some(int(1)));
    }

    #[test]
    fn weights_follow_the_torus_action() {
        // u_ij scales by e^{2πi(φ_i + ψ_j)} with φ_3 = −φ_1 − φ_2
        let q = build_su_theta(3, &su3_k()).unwrap();
        let ctx = q.ctx();
        for i in 0..3 {
            for j in 0..3 {
                let w = &ctx.generator(q.grid()[i][j]).weight;
                let phi = |a: usize| -> Vec<i64> {
                    let mut v = vec![0; 2];
                    if a < 2 {
                        v[a] = 1;
                    } else {
                        v = vec![-1, -1];
                    }
                    v
                };
                let mut expect = phi(i);
                expect.extend(phi(j));
                assert_eq!(w.components(), &expect[..]);
            }
        }
    }

    #[test]
    fn sample_points_satisfy_relations() {
        for q in [build_su_theta(3, &su3_k()).unwrap(), build_su_theta_named(4, &su4_k(), "v").unwrap()] {
            let p = &q.presentation;
            for rel in p.structural_elements() {
                let zero = rel.params().into_iter().map(|p| (p, LinearForm::zero())).collect();
                let flat = rel.rebase(rel.ctx(), &zero);
                for pt in p.points() {
                    assert!(flat.evaluate(pt).is_zero(), "{}", rel);
                }
            }
        }
        for p in [build_sphere(&sphere_lambda(3), 3).unwrap(), build_nc_torus(&sphere_lambda(2)).unwrap()] {
            for rel in p.structural_elements() {
                for pt in p.points() {
                    assert!(rel.evaluate(pt).is_zero(), "{}", rel);
                }
            }
        }
    }

    #[test]
    fn catalog_names() {
        assert_eq!(CatalogName::parse("su:3").unwrap(), CatalogName::Su(3));
        assert_eq!(CatalogName::parse("sphere:4").unwrap().matrix_dim(), 4);
        assert!(CatalogName::parse("so:3").is_err());
        assert!(CatalogName::parse("su:1").is_err());
    }

    #[test]
    fn sphere_relations_with_stars() {
        let p = build_sphere(&sphere_lambda(3), 3).unwrap();
        let ctx = p.ctx();
        // 3 unstarred pairs plus 9 mixed pairs
        assert_eq!(p.exchange_relations().count(), 12);
        let z1 = ctx.parse_generator("z1").unwrap();
        let z2s = ctx.parse_generator("z2*").unwrap();
        let r = p.exchange_relations().find(|r| r.terms[0].1 == vec![z1, z2s]).unwrap();
        let (_, ph) = r.terms[1].0.as_single_phase().unwrap();
        assert_eq!(ph, PhaseExponent::new(-&LinearForm::param("lambda12")));
        assert_eq!(p.structural_relations().count(), 1);
    }
}
