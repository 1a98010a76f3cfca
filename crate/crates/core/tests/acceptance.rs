//! Acceptance suite. Each criterion prints one PASS/FAIL line on stderr.
//!
//! Phases and constraints are compared exactly (zero tolerance); the only
//! numeric tolerances are the wall-clock limits below.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::json;

use theta_deform::algebra::{
    generate_exchange_relations, words_up_to, Coefficient, Context, Decision, Element, PairSelection, Weight, Word,
};
use theta_deform::catalog::{
    build_nc_torus, build_sphere, build_su_theta, build_su_theta_full, build_su_theta_named, generic4, sphere_lambda,
    su3_k, su4_k, thetaprime, Family,
};
use theta_deform::coaction::{
    check_extension, fixed_points, match_presentation, su2_on_su3, su3_on_s5, su3_on_su4, ExtensionStatus,
};
use theta_deform::hopf::{
    check_antipode_axiom, check_coassociativity, check_coproduct_homomorphism, check_corep_unitarity, check_counit,
    check_haar_identities, haar_state, CorepGrid, MatrixQuantumGroup, Status,
};
use theta_deform::phase::{chi, rat, substitution, DeformationMatrix, LinearForm, PhaseExponent, Rational};

const LIMIT_GOLDEN_TABLE: Duration = Duration::from_secs(1);
const LIMIT_PROPERTIES: Duration = Duration::from_secs(10);
const LIMIT_HOPF: Duration = Duration::from_secs(30);
const LIMIT_NECESSITY: Duration = Duration::from_secs(10);
const LIMIT_SPHERE_ACTION: Duration = Duration::from_secs(30);
const LIMIT_SU4_ACTION: Duration = Duration::from_secs(60);
const LIMIT_NEGATIVE: Duration = Duration::from_secs(10);
const LIMIT_HAAR: Duration = Duration::from_secs(10);
const LIMIT_DEGENERATION: Duration = Duration::from_secs(10);

const PROPERTY_CASES: u32 = 1000;
const HOPF_DEGREE_BOUND: usize = 4;

fn criterion(n: u32, name: &str, limit: Duration, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let ok = outcome.is_ok() && elapsed <= limit;
    let line = format!(
        "criterion {n} [{name}]: {} ({:.2}s, limit {}s)\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    if let Err(p) = outcome {
        std::panic::resume_unwind(p);
    }
    assert!(elapsed <= limit, "criterion {n} took {elapsed:?}, limit {limit:?}");
}

fn theta(k: i64) -> LinearForm {
    LinearForm::param("theta").scale(&Rational::from_integer(k.into()))
}

fn gen(ctx: &Arc<Context>, label: &str) -> Element {
    Element::generator(ctx, ctx.parse_generator(label).unwrap())
}

#[test]
fn criterion_1_golden_table() {
    // (left, right, k) for `left right = e^{2πi kθ} right left`
    const TABLE: [(&str, &str, i64); 36] = [
        ("u11", "u12", -1),
        ("u11", "u13", 1),
        ("u11", "u21", 1),
        ("u11", "u22", 0),
        ("u11", "u23", 2),
        ("u11", "u31", -1),
        ("u11", "u32", -2),
        ("u11", "u33", 0),
        ("u12", "u13", -1),
        ("u12", "u21", 2),
        ("u12", "u22", 1),
        ("u12", "u23", 0),
        ("u12", "u31", 0),
        ("u12", "u32", -1),
        ("u12", "u33", -2),
        ("u13", "u21", 0),
        ("u13", "u22", 2),
        ("u13", "u23", 1),
        ("u13", "u31", -2),
        ("u13", "u32", 0),
        ("u13", "u33", -1),
        ("u21", "u22", -1),
        ("u21", "u23", 1),
        ("u21", "u31", 1),
        ("u21", "u32", 0),
        ("u21", "u33", 2),
        ("u22", "u23", -1),
        ("u22", "u31", 2),
        ("u22", "u32", 1),
        ("u22", "u33", 0),
        ("u23", "u31", 0),
        ("u23", "u32", 2),
        ("u23", "u33", 1),
        ("u31", "u32", -1),
        ("u31", "u33", 1),
        ("u32", "u33", -1),
    ];
    criterion(1, "SU(3) golden table", LIMIT_GOLDEN_TABLE, || {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = theta_deform::cli::run(["thetadeform", "relations", "su:3", "--format", "json"], &mut out, &mut err);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        let emitted = v["exchange"].as_array().unwrap();
        assert_eq!(emitted.len(), 36);

        let q = build_su_theta(3, &su3_k()).unwrap();
        let ctx = q.ctx();
        for ((a, b, k), e) in TABLE.iter().zip(emitted) {
            assert_eq!((e["left"].as_str().unwrap(), e["right"].as_str().unwrap()), (*a, *b));
            let phase = PhaseExponent::new(theta(*k));
            let coeffs = if *k == 0 { json!({}) } else { json!({ "theta": k.to_string() }) };
            assert_eq!(e["phase"], json!({ "coeffs": coeffs, "constant": "0" }), "{a} {b}");
            // as relation elements: a ×θ b − e^{2πi kθ} b ×θ a vanishes exactly
            let (x, y) = (gen(ctx, a), gen(ctx, b));
            let rel = &x.twisted_mul(&y).unwrap() - &y.twisted_mul(&x).unwrap().mul_phase(&phase);
            assert!(rel.is_zero(), "{a} {b}");
        }
        let generated = generate_exchange_relations(ctx, PairSelection::default());
        for (r, (a, b, k)) in generated.iter().zip(TABLE) {
            assert_eq!(ctx.generator(r.left).label(), a);
            assert_eq!(ctx.generator(r.right).label(), b);
            assert_eq!(r.phase, PhaseExponent::new(theta(k)));
        }
    });
}

fn random_weight(dim: usize) -> impl Strategy<Value = Weight> {
    prop::collection::vec(-3i64..=3, dim).prop_map(Weight::new)
}

fn random_monomial(ctx: Arc<Context>) -> impl Strategy<Value = Element> {
    let n = ctx.generators().len() as u16;
    (prop::collection::vec(0..n, 1..4), -5i64..=5, 1i64..=4, 0i64..12).prop_map(move |(ids, p, q, k)| {
        let p = if p == 0 { 1 } else { p };
        let c = Coefficient::term(rat(p, q), PhaseExponent::constant(rat(k, 12)));
        Element::monomial(&ctx, Word::from_ids(ids), c)
    })
}

#[test]
fn criterion_2_bicharacter_and_associativity() {
    criterion(2, "bicharacter and associativity", LIMIT_PROPERTIES, || {
        let theta4 = generic4();
        let sphere = build_sphere(&sphere_lambda(4), 4).unwrap();
        let su3 = build_su_theta(3, &su3_k()).unwrap();
        let contexts = [sphere.ctx().clone(), su3.ctx().clone()];
        let strategy = (
            random_weight(4),
            random_weight(4),
            random_weight(4),
            prop::sample::select(vec![0usize, 1]).prop_flat_map(move |i| {
                let ctx = contexts[i].clone();
                (random_monomial(ctx.clone()), random_monomial(ctx.clone()), random_monomial(ctx))
            }),
        );
        let config = Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() };
        let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
        let count = std::cell::Cell::new(0u32);
        runner
            .run(&strategy, |(r, s, t, (a, b, c))| {
                count.set(count.get() + 1);
                let x = |p: &Weight, q: &Weight| chi(&theta4, p, q).unwrap();
                // multiplicative in each argument
                prop_assert_eq!(x(&(&r + &s), &t), &x(&r, &t) + &x(&s, &t));
                prop_assert_eq!(x(&r, &(&s + &t)), &x(&r, &s) + &x(&r, &t));
                // antisymmetric: χ(r,s) χ(s,r) = 1 and χ(r,r) = 1
                prop_assert!((&x(&r, &s) + &x(&s, &r)).is_zero());
                prop_assert!(x(&r, &r).is_zero());
                prop_assert!(x(&r, &Weight::zero(4)).is_zero());
                // associativity on homogeneous triples
                let left = a.twisted_mul(&b).unwrap().twisted_mul(&c).unwrap();
                let right = a.twisted_mul(&b.twisted_mul(&c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
                Ok(())
            })
            .unwrap();
        assert_eq!(count.get(), PROPERTY_CASES);
    });
}

fn hopf_checks(q: &MatrixQuantumGroup) {
    assert!(check_coproduct_homomorphism(q).passed());
    for r in [
        check_coassociativity(q, 1),
        check_counit(q, 1),
        check_antipode_axiom(q, HOPF_DEGREE_BOUND),
        check_corep_unitarity(q, &CorepGrid::fundamental(q), HOPF_DEGREE_BOUND),
    ] {
        assert!(r.passed(), "{r}");
        assert!(r.checked > 0);
    }
}

#[test]
fn criterion_3_hopf_verification() {
    criterion(3, "Hopf verification", LIMIT_HOPF, || {
        hopf_checks(&build_su_theta(3, &su3_k()).unwrap());
        hopf_checks(&build_su_theta_named(4, &su4_k(), "v").unwrap());
    });
}

#[test]
fn criterion_4_block_shape_is_necessary() {
    criterion(4, "K ⊕ (−K) necessity", LIMIT_NECESSITY, || {
        let q = build_su_theta_full(3, &generic4(), "u").unwrap();
        assert!(!generic4().get(0, 2).is_zero());
        let r = check_coproduct_homomorphism(&q);
        assert_eq!(r.status, Status::Fail);
        let c = r.constraints.unwrap();
        assert_eq!(c.status, ExtensionStatus::FailsIdentically);
        let forms: Vec<LinearForm> =
            ["t12 + t34", "t13", "t14", "t23", "t24"].iter().map(|s| LinearForm::parse(s).unwrap()).collect();
        assert_eq!(c.constraints, forms);
        // the off-diagonal 2×2 block is forced to vanish
        assert_eq!(c.forced_zero, vec!["t13", "t14", "t23", "t24"]);
        // a concrete nonzero (1,3) entry fails outright
        let concrete = generic4().substitute(&substitution([("t13", LinearForm::constant(rat(1, 5)))]));
        let q = build_su_theta_full(3, &concrete, "u").unwrap();
        assert_eq!(check_coproduct_homomorphism(&q).status, Status::Fail);
    });
}

fn constraint_triple() -> Vec<LinearForm> {
    ["lambda12 - theta", "lambda13 + theta", "lambda23 - theta"].iter().map(|s| LinearForm::parse(s).unwrap()).collect()
}

#[test]
fn criterion_5_sphere_action() {
    criterion(5, "SU(3) on S^5", LIMIT_SPHERE_ACTION, || {
        let spec = su3_on_s5().unwrap();
        let r = check_extension(&spec, 4).unwrap();
        assert_eq!(r.status, ExtensionStatus::ExtendsIff);
        assert_eq!(r.constraints, constraint_triple());
        let fp = fixed_points(&spec, 3);
        assert!(fp.generators.is_empty());
        assert!(!fp.non_closed);
    });
}

#[test]
fn criterion_6_su4_action_and_seven_sphere() {
    criterion(6, "SU(3) on SU(4) and S^7", LIMIT_SU4_ACTION, || {
        let spec = su3_on_su4().unwrap();
        let r = check_extension(&spec, 2).unwrap();
        assert_eq!(r.status, ExtensionStatus::ExtendsIff);
        assert_eq!(r.constraints, constraint_triple());

        let fp = fixed_points(&spec, 2);
        let actx = spec.a.ctx();
        let expected: Vec<Element> = (1..=4).map(|l| gen(actx, &format!("v4{l}"))).collect();
        assert_eq!(fp.generators, expected);
        assert_eq!(fp.degrees, vec![1; 4]);

        let subs = r.solution();
        let solved = spec.substitute(&subs).unwrap();
        let xs: Vec<Element> = expected.iter().map(|x| x.rebase(solved.a.ctx(), &subs)).collect();
        let m = match_presentation(&xs, &solved.a, Family::Sphere, 4).unwrap();
        assert_eq!(m.instance, "sphere:4");
        assert_eq!(m.theta_prime, thetaprime());
        let rows = thetaprime().rows();
        assert_eq!(rows[0], vec![theta(0), theta(-1), theta(1), theta(0)]);
        assert_eq!(rows[1], vec![theta(1), theta(0), theta(-1), theta(0)]);
        assert_eq!(rows[2], vec![theta(-1), theta(1), theta(0), theta(0)]);
        assert_eq!(rows[3], vec![theta(0); 4]);

        // the six exchange relations among x1..x4, exactly
        let cctx = m.catalog.ctx();
        let unstarred: Vec<_> = generate_exchange_relations(cctx, PairSelection::default());
        assert_eq!(unstarred.len(), 6);
        let printed = [(1, 2, -1), (1, 3, 1), (1, 4, 0), (2, 3, -1), (2, 4, 0), (3, 4, 0)];
        for (r, (j, k, t)) in unstarred.iter().zip(printed) {
            assert_eq!(r.phase, PhaseExponent::new(theta(t)));
            let (x, y) = (&xs[j - 1], &xs[k - 1]);
            let lhs = x.twisted_mul(y).unwrap();
            let rhs = y.twisted_mul(x).unwrap().mul_phase(&r.phase);
            assert_eq!(lhs, rhs, "x{j} x{k}");
        }
        assert!(m.exchange.iter().all(|c| c.decision == Decision::Holds));
        // Σ x_l x_l* = 1 modulo the SU(4)_λ ideal
        assert_eq!(m.structural.len(), 1);
        assert_eq!(m.structural[0].decision, Decision::Holds);
        assert_eq!(m.central, vec![4]);
        assert!(m.matched);
    });
}

#[test]
fn criterion_7_negative_control() {
    criterion(7, "SU(2) block action fails", LIMIT_NEGATIVE, || {
        let spec = su2_on_su3().unwrap();
        let r = check_extension(&spec, 2).unwrap();
        assert_eq!(r.status, ExtensionStatus::FailsIdentically);
        assert_eq!(r.witnesses[0], ("u11".to_string(), "u12".to_string()));
        // ρ(u11 u12) ≠ ρ(e^{−2πiθ} u12 u11)
        let actx = spec.a.ctx();
        let (a, b) = (gen(actx, "u11"), gen(actx, "u12"));
        let lhs = spec.apply(&a.twisted_mul(&b).unwrap());
        let rhs = spec.apply(&b.twisted_mul(&a).unwrap().mul_phase(&PhaseExponent::new(theta(-1))));
        assert_eq!(a.twisted_mul(&b).unwrap(), b.twisted_mul(&a).unwrap().mul_phase(&PhaseExponent::new(theta(-1))));
        let product = spec.apply(&a).twisted_mul(&spec.apply(&b)).unwrap();
        assert_eq!(lhs, rhs);
        assert_ne!(lhs, product);

        let flat = spec.substitute(&substitution([("theta", LinearForm::zero())])).unwrap();
        let r0 = check_extension(&flat, 2).unwrap();
        assert_eq!(r0.status, ExtensionStatus::ExtendsUnconditionally);
    });
}

/// `(1/|G|) Σ_g g_ij · conj(g_kl)` over the clock-and-shift group, which acts
/// irreducibly on `C^n`, so by Schur's lemma it equals the Haar integral.
fn schur_oracle(n: usize, i: usize, j: usize, k: usize, l: usize) -> Coefficient {
    let omega = |e: usize| Coefficient::phase(PhaseExponent::constant(rat((e % n) as i64, n as i64)));
    let mut acc = Coefficient::zero();
    for a in 0..n {
        for b in 0..n {
            // (X^a Z^b)_{rc} = δ_{r, c+a} ω^{bc}
            let entry = |r: usize, c: usize| if r == (c + a) % n { omega(b * c) } else { Coefficient::zero() };
            acc = &acc + &(&entry(i, j) * &entry(k, l).conj());
        }
    }
    acc.scale(&rat(1, (n * n) as i64))
}

#[test]
fn criterion_8_haar_identities() {
    criterion(8, "Haar identities", LIMIT_HAAR, || {
        for q in [build_su_theta(3, &su3_k()).unwrap(), build_su_theta_named(4, &su4_k(), "v").unwrap()] {
            let n = q.n;
            let ctx = q.ctx();
            for w in words_up_to(ctx, 2, None) {
                let x = Element::monomial(ctx, w.clone(), Coefficient::one());
                if !ctx.word_weight(&w).is_zero() {
                    if let Ok(mu) = haar_state(&q, &x) {
                        assert!(mu.is_zero(), "{}", ctx.format_word(&w));
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let diag = q.u(i, j).twisted_mul(&q.u_star(i, j)).unwrap();
                    assert_eq!(haar_state(&q, &diag).unwrap().as_rational(), Some(rat(1, n as i64)));
                    for k in 0..n {
                        for l in 0..n {
                            let x = q.u(i, j).twisted_mul(&q.u_star(k, l)).unwrap();
                            let mu = haar_state(&q, &x).unwrap();
                            // the twisted product only adds a phase to the sorted word
                            let plain = q.u(i, j).mul_commutative(&q.u_star(k, l)).unwrap();
                            let phase = x.terms().next().unwrap().1.clone();
                            assert_eq!(plain.scale_by(&phase), x);
                            assert_eq!(mu, &phase * &schur_oracle(n, i, j, k, l), "({i}{j},{k}{l})");
                        }
                    }
                }
            }
            let r = check_haar_identities(&q, HOPF_DEGREE_BOUND).unwrap();
            assert!(r.passed(), "{r}");
        }
    });
}

#[test]
fn criterion_9_degeneration() {
    criterion(9, "degeneration at zero", LIMIT_DEGENERATION, || {
        let zero_all = |params: Vec<theta_deform::phase::Param>| {
            params.into_iter().map(|p| (p, LinearForm::zero())).collect::<theta_deform::phase::Substitution>()
        };
        // relations: deformed presentations at zero equal the commutative ones
        let sphere = build_sphere(&sphere_lambda(4), 4).unwrap();
        let flat_sphere = sphere.substitute(&zero_all(sphere.ctx().theta().params()));
        assert_eq!(flat_sphere, build_sphere(&DeformationMatrix::zero(4), 4).unwrap());
        let torus = build_nc_torus(&sphere_lambda(3)).unwrap();
        assert_eq!(
            torus.substitute(&zero_all(torus.ctx().theta().params())),
            build_nc_torus(&DeformationMatrix::zero(3)).unwrap()
        );
        let su3 = build_su_theta(3, &su3_k()).unwrap();
        let flat_su3 = su3.substitute(&zero_all(su3.theta().params())).unwrap();
        assert_eq!(flat_su3.presentation, build_su_theta(3, &DeformationMatrix::zero(2)).unwrap().presentation);
        let su4 = build_su_theta_named(4, &su4_k(), "v").unwrap();
        let flat_su4 = su4.substitute(&zero_all(su4.theta().params())).unwrap();
        assert_eq!(
            flat_su4.presentation,
            build_su_theta_named(4, &DeformationMatrix::zero(3), "v").unwrap().presentation
        );
        assert!(generate_exchange_relations(flat_su4.ctx(), PairSelection { with_stars: true, include_trivial: true })
            .iter()
            .all(|r| r.is_commutator()));

        // products: twisted equals commutative on a randomized suite
        let contexts = [flat_sphere.ctx().clone(), flat_su3.ctx().clone(), flat_su4.ctx().clone()];
        let strategy = prop::sample::select(vec![0usize, 1, 2]).prop_flat_map(move |i| {
            let ctx = contexts[i].clone();
            (random_monomial(ctx.clone()), random_monomial(ctx))
        });
        let config = Config { cases: 200, failure_persistence: None, ..Config::default() };
        let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
        runner
            .run(&strategy, |(a, b)| {
                prop_assert_eq!(a.twisted_mul(&b).unwrap(), a.mul_commutative(&b).unwrap());
                Ok(())
            })
            .unwrap();

        // fixed points: the same words at zero and at symbolic parameters
        let words = |gens: &[Element]| -> Vec<String> { gens.iter().map(|g| g.to_string()).collect() };
        for spec in [su3_on_s5().unwrap(), su3_on_su4().unwrap()] {
            let mut params = spec.h.theta().params();
            params.extend(spec.a.ctx().theta().params());
            let flat = spec.substitute(&zero_all(params)).unwrap();
            assert_eq!(check_extension(&flat, 2).unwrap().status, ExtensionStatus::ExtendsUnconditionally);
            assert_eq!(words(&fixed_points(&flat, 2).generators), words(&fixed_points(&spec, 2).generators));
        }
    });
}
