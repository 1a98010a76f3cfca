//! Turning "these two elements agree" into linear conditions on parameters.
//!
//! Coefficients are compared word by word. A difference `Σ q·e^{2πi·x}`
//! is made to vanish by pairing its terms greedily and asking each pair to
//! cancel, which is a linear congruence mod 1 in the parameters. Terms that
//! cannot be paired, or pairs whose condition is a nonzero constant, are
//! identity failures. The congruences are solved on the principal branch.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::algebra::{Coefficient, Context, Decision, Element};
use crate::phase::{rat, LinearForm, Param, PhaseExponent, Rational, Substitution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExtensionStatus {
    ExtendsUnconditionally,
    ExtendsIff,
    FailsIdentically,
}

impl fmt::Display for ExtensionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionStatus::ExtendsUnconditionally => "extends unconditionally",
            ExtensionStatus::ExtendsIff => "extends iff",
            ExtensionStatus::FailsIdentically => "fails identically",
        })
    }
}

/// Outcome of checking a structural relation under a candidate map.
#[derive(Clone, Debug, Serialize)]
pub struct StructuralCheck {
    pub relation: String,
    pub decision: Decision,
}

fn forms_as_strings<S: Serializer>(forms: &[LinearForm], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(forms.iter().map(|f| f.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintReport {
    pub status: ExtensionStatus,
    /// Reduced row-echelon forms `f`, each required to vanish.
    #[serde(serialize_with = "forms_as_strings")]
    pub constraints: Vec<LinearForm>,
    /// Generator pairs whose identity does not hold for generic parameters.
    pub witnesses: Vec<(String, String)>,
    /// Pairs whose two sides differ for every parameter value.
    pub identity_failures: Vec<(String, String)>,
    /// Parameters the constraints force to vanish.
    pub forced_zero: Vec<String>,
    pub inconsistent: bool,
    pub pairs_checked: usize,
    /// Structural relations of the source, checked modulo the target ideal.
    pub structural: Vec<StructuralCheck>,
}

impl ConstraintReport {
    pub fn is_unconditional(&self) -> bool {
        self.status == ExtensionStatus::ExtendsUnconditionally
    }

    /// Parameter values solving the constraints: each pivot in terms of the free parameters.
    pub fn solution(&self) -> Substitution {
        self.constraints
            .iter()
            .filter_map(|row| {
                let (p, _) = row.coeffs().iter().next()?;
                let mut rest = row.clone();
                rest.add_term(p, &-row.coeff(p));
                Some((p.clone(), -&rest))
            })
            .collect()
    }

    pub fn has_witness(&self, a: &str, b: &str) -> bool {
        self.witnesses.iter().any(|(x, y)| x == a && y == b)
    }
}

impl fmt::Display for ConstraintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        if !self.constraints.is_empty() {
            let eqs: Vec<String> = self.constraints.iter().map(|c| format!("{c} = 0")).collect();
            write!(f, " {{{}}}", eqs.join(", "))?;
        }
        if let Some((a, b)) = self.identity_failures.first().or(self.witnesses.first()) {
            if self.status == ExtensionStatus::FailsIdentically {
                write!(f, "; witness ({a}, {b})")?;
            }
        }
        if !self.forced_zero.is_empty() {
            write!(f, "; forces {} = 0", self.forced_zero.join(", "))?;
        }
        Ok(())
    }
}

/// Exponent differences that must vanish mod 1 for `lhs = rhs`, and whether
/// some coefficient cannot vanish by equating phases at all.
/// The terms of `c`, with each group sharing a parameter part rewritten as a
/// single `q·ζ` term when it has that form. Normalization can split a lone
/// root of unity into several terms of mixed sign, e.g. `ζ_3 = -1 - ζ_3²`.
fn collapse(c: &Coefficient) -> Vec<(PhaseExponent, Rational)> {
    let mut groups: BTreeMap<LinearForm, Vec<(Rational, PhaseExponent)>> = BTreeMap::new();
    for (x, q) in c.terms() {
        groups.entry(x.form().linear_part()).or_default().push((q.clone(), x.clone()));
    }
    let mut out = Vec::new();
    for (lin, members) in groups {
        let shift = PhaseExponent::new(-&lin);
        let group = Coefficient::from_terms(members.iter().map(|(q, x)| (q.clone(), x + &shift)));
        let n = group.root_order();
        let single = (0..n).find_map(|k| {
            let root = PhaseExponent::constant(rat(k as i64, n as i64));
            group.mul_phase(&-&root).as_rational().map(|q| (q, root))
        });
        match single {
            Some((q, root)) => out.push((&root + &PhaseExponent::new(lin), q)),
            None => out.extend(members.into_iter().map(|(q, x)| (x, q))),
        }
    }
    out
}

pub(crate) fn equate(lhs: &Element, rhs: &Element) -> (Vec<LinearForm>, bool) {
    let diff = rhs - lhs;
    let mut out = Vec::new();
    let mut identity_failure = false;
    let half = PhaseExponent::constant(rat(1, 2));
    for (_, c) in diff.terms() {
        // (phase with the sign folded in, magnitude, originally negative)
        let mut terms: Vec<(PhaseExponent, Rational, bool)> = collapse(c)
            .into_iter()
            .map(|(x, q)| if q.is_negative() { (&x + &half, -q, true) } else { (x, q, false) })
            .collect();
        // heaviest term first, so a term that must absorb several partners gets them
        while let Some(top) = (0..terms.len()).max_by(|&i, &j| terms[i].1.cmp(&terms[j].1).then(j.cmp(&i))) {
            let (xi, mut mi, si) = terms.remove(top);
            while !mi.is_zero() {
                // prefer opposite signs, then the partner whose difference has the fewest parameters
                let Some((idx, _)) = terms
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, (xj, _, sj))| (*sj == si, (xi.form() - xj.form()).coeffs().len()))
                else {
                    identity_failure = true;
                    break;
                };
                let (xj, mj, _) = &mut terms[idx];
                let m = if *mj < mi { mj.clone() } else { mi.clone() };
                // e(xi) + e(xj) = 0 iff xi - xj = 1/2 mod 1
                let d = (&(&xi - xj) - &half).centered();
                if d.is_constant() {
                    // a nonzero constant survives reduction mod 1
                    identity_failure = true;
                } else {
                    out.push(d);
                }
                mi -= &m;
                *mj -= &m;
                if mj.is_zero() {
                    terms.remove(idx);
                }
            }
        }
    }
    (out, identity_failure)
}

/// Reduced row-echelon form of a system `f ≡ 0 mod 1`, pivoting on the
/// alphabetically first parameter. Returns the rows and whether a
/// non-integer constant row appeared.
pub(crate) fn solve(forms: impl IntoIterator<Item = LinearForm>) -> (Vec<LinearForm>, bool) {
    // `f = 0` stands for `f ≡ 0 mod 1`. Small coefficients go first: `λ/2 ≡ c`
    // fixes `λ` mod 2, which then decides every `λ ≡ c'` mod 1.
    let mut forms: Vec<LinearForm> = forms.into_iter().collect();
    forms.sort_by_cached_key(|f| (f.coeffs().len(), f.coeffs().values().map(|c| c.abs()).max()));
    let mut rows: Vec<LinearForm> = Vec::new();
    let mut inconsistent = false;
    for f in forms {
        let mut f = f;
        for r in &rows {
            let p = pivot(r);
            let c = f.coeff(&p);
            if !c.is_zero() {
                f.add_scaled(r, &-c);
            }
        }
        if f.is_zero() {
            continue;
        }
        if f.is_constant() {
            // an integer leftover holds mod 1 at the solution of the rows so far
            inconsistent |= !f.constant_part().is_integer();
            continue;
        }
        let p = pivot(&f);
        let lead = f.coeff(&p);
        let f = f.scale(&(Rational::from_integer(1.into()) / lead));
        for r in rows.iter_mut() {
            let c = r.coeff(&p);
            if !c.is_zero() {
                r.add_scaled(&f, &-c);
            }
        }
        rows.push(f);
    }
    rows.sort_by_key(pivot);
    (rows, inconsistent)
}

fn pivot(f: &LinearForm) -> Param {
    f.coeffs().keys().next().expect("nonconstant row").clone()
}

/// Parameters a solved system sets to exactly zero.
fn forced_zero(rows: &[LinearForm]) -> Vec<String> {
    rows.iter()
        .filter(|r| r.coeffs().len() == 1 && r.constant_part().is_zero())
        .map(|r| pivot(r).name().to_string())
        .collect()
}

/// Checks `φ(a ×_src b) = φ(a) ×_tgt φ(b)` for all ordered generator pairs of
/// `source`, where `map` is the classical linear map on sorted words.
/// Pairs of distinct generators are visited before squares.
pub fn homomorphism_constraints(
    source: &Arc<Context>,
    target: &Arc<Context>,
    map: impl Fn(&Element) -> Element,
) -> ConstraintReport {
    let ids: Vec<_> = source.ids().collect();
    let images: Vec<Element> = ids.iter().map(|&g| map(&Element::generator(source, g))).collect();
    let pairs = ids
        .iter()
        .flat_map(|&a| ids.iter().map(move |&b| (a, b)))
        .filter(|(a, b)| a != b)
        .chain(ids.iter().map(|&a| (a, a)));
    let mut all = Vec::new();
    let mut witnesses = Vec::new();
    let mut identity_failures = Vec::new();
    let mut checked = 0;
    for (a, b) in pairs {
        checked += 1;
        let lhs = map(&Element::ordered_product(source, &[a, b]));
        let rhs = images[a as usize].twisted_mul(&images[b as usize]).expect("images share the target context");
        debug_assert!(lhs.ctx().same(target));
        let (forms, failed) = equate(&lhs, &rhs);
        let names = (source.generator(a).label(), source.generator(b).label());
        if failed {
            identity_failures.push(names.clone());
        }
        if failed || !forms.is_empty() {
            witnesses.push(names);
        }
        all.extend(forms);
    }
    let (constraints, inconsistent) = solve(all);
    let forced = forced_zero(&constraints);
    let status = if !identity_failures.is_empty() || inconsistent || !forced.is_empty() {
        ExtensionStatus::FailsIdentically
    } else if constraints.is_empty() {
        ExtensionStatus::ExtendsUnconditionally
    } else {
        ExtensionStatus::ExtendsIff
    };
    ConstraintReport {
        status,
        constraints,
        witnesses,
        identity_failures,
        forced_zero: forced,
        inconsistent,
        pairs_checked: checked,
        structural: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LinearForm {
        LinearForm::parse(s).unwrap()
    }

    #[test]
    fn rref_orders_pivots_by_name() {
        let (rows, bad) = solve([p("theta/2 - lambda12/2"), p("lambda13 + theta"), p("lambda23 - lambda12")]);
        assert!(!bad);
        assert_eq!(rows, vec![p("lambda12 - theta"), p("lambda13 + theta"), p("lambda23 - theta")]);
    }

    #[test]
    fn constant_rows_are_inconsistent() {
        let (rows, bad) = solve([p("a - b"), p("b - a + 1/3")]);
        assert!(bad);
        assert_eq!(rows.len(), 1);
    }

    #[test]
    fn integer_leftovers_hold_mod_one() {
        let (rows, bad) = solve([p("-lambda + 1/4"), p("lambda/2 + 3/8"), p("lambda/2 - 5/8")]);
        assert!(!bad);
        assert_eq!(rows, vec![p("lambda + 3/4")]);
        let (_, bad) = solve([p("lambda/2 + 3/8"), p("lambda/2 - 1/8")]);
        assert!(bad);
    }

    #[test]
    fn forced_zero_detected() {
        let (rows, _) = solve([p("theta/2")]);
        assert_eq!(forced_zero(&rows), vec!["theta".to_string()]);
    }
}
