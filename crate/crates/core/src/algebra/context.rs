use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use super::Weight;
use crate::error::{Error, Result};
use crate::phase::{rat, DeformationMatrix, LinearForm, Param, PhaseExponent};

/// A generator such as `u[1][2]`, `z[3]*` or `v[4][1]`.
///
/// `leg` separates the tensor factors of a tensor-product context; plain
/// algebras only use leg 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Generator {
    pub name: String,
    pub indices: Vec<u32>,
    pub starred: bool,
    pub leg: u8,
    pub weight: Weight,
}

impl Generator {
    pub fn new(name: &str, indices: &[u32], weight: Weight) -> Self {
        Generator { name: name.to_string(), indices: indices.to_vec(), starred: false, leg: 0, weight }
    }

    pub fn star(&self) -> Generator {
        Generator { starred: !self.starred, weight: -&self.weight, ..self.clone() }
    }

    fn order_key(&self) -> (u8, bool, &str, &[u32]) {
        (self.leg, self.starred, &self.name, &self.indices)
    }

    /// `u12`, `z3*`; indices above 9 are bracketed.
    pub fn label(&self) -> String {
        let mut s = self.name.clone();
        if self.indices.iter().all(|&i| i < 10) {
            for i in &self.indices {
                s.push_str(&i.to_string());
            }
        } else {
            for i in &self.indices {
                s.push_str(&format!("[{i}]"));
            }
        }
        if self.starred {
            s.push('*');
        }
        s
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub type GenId = u16;

/// A canonical (sorted) word: a multiset of generators of one context.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<GenId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_ids(mut ids: Vec<GenId>) -> Self {
        ids.sort_unstable();
        Word(ids)
    }

    pub fn ids(&self) -> &[GenId] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                out.push(self.0[i]);
                i += 1;
            } else {
                out.push(other.0[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Word(out)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

static NEXT_CONTEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A torus-graded *-algebra context: generators (closed under star), their
/// weights and the deformation matrix.
#[derive(Debug)]
pub struct Context {
    id: u64,
    theta: DeformationMatrix,
    gens: Vec<Generator>,
    star_of: Vec<GenId>,
    lookup: HashMap<(u8, bool, String, Vec<u32>), GenId>,
}

impl Context {
    /// Builds a context from the unstarred generators; starred copies are added.
    pub fn new(theta: DeformationMatrix, base: Vec<Generator>) -> Result<Arc<Context>> {
        let mut gens = Vec::with_capacity(base.len() * 2);
        for g in base {
            if g.weight.dim() != theta.dim() {
                return Err(Error::Dimension { expected: theta.dim(), got: g.weight.dim() });
            }
            let s = g.star();
            gens.push(g);
            gens.push(s);
        }
        Self::assemble(theta, gens)
    }

    fn assemble(theta: DeformationMatrix, mut gens: Vec<Generator>) -> Result<Arc<Context>> {
        gens.sort();
        gens.dedup();
        if gens.len() > GenId::MAX as usize {
            return Err(Error::InvariantViolation("too many generators".into()));
        }
        let lookup: HashMap<_, _> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| ((g.leg, g.starred, g.name.clone(), g.indices.clone()), i as GenId))
            .collect();
        if lookup.len() != gens.len() {
            return Err(Error::InvariantViolation("duplicate generator names".into()));
        }
        let star_of = gens
            .iter()
            .map(|g| {
                lookup
                    .get(&(g.leg, !g.starred, g.name.clone(), g.indices.clone()))
                    .copied()
                    .ok_or_else(|| Error::InvariantViolation(format!("generator {g} has no star partner")))
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, g) in gens.iter().enumerate() {
            if gens[star_of[i] as usize].weight != -&g.weight {
                return Err(Error::InvariantViolation(format!("star of {g} must carry the negated weight")));
            }
        }
        Ok(Arc::new(Context {
            id: NEXT_CONTEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
            theta,
            gens,
            star_of,
            lookup,
        }))
    }

    pub fn same(&self, other: &Context) -> bool {
        self.id == other.id
    }

    pub fn theta(&self) -> &DeformationMatrix {
        &self.theta
    }

    pub fn weight_dim(&self) -> usize {
        self.theta.dim()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.gens[id as usize]
    }

    pub fn star_id(&self, id: GenId) -> GenId {
        self.star_of[id as usize]
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        0..self.gens.len() as GenId
    }

    pub fn unstarred_ids(&self) -> impl Iterator<Item = GenId> + '_ {
        self.ids().filter(|&i| !self.gens[i as usize].starred)
    }

    pub fn find(&self, name: &str, indices: &[u32], starred: bool) -> Result<GenId> {
        self.find_on_leg(0, name, indices, starred)
    }

    pub fn find_on_leg(&self, leg: u8, name: &str, indices: &[u32], starred: bool) -> Result<GenId> {
        self.lookup.get(&(leg, starred, name.to_string(), indices.to_vec())).copied().ok_or_else(|| {
            let idx: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
            Error::UnknownGenerator(format!("{name}{}{}", idx.join(""), if starred { "*" } else { "" }))
        })
    }

    /// Looks up a generator by its label, e.g. `u12`, `u[1][2]*`, `z3`.
    pub fn parse_generator(&self, label: &str) -> Result<GenId> {
        let (body, starred) = match label.strip_suffix('*') {
            Some(b) => (b, true),
            None => (label, false),
        };
        let name: String = body.chars().take_while(|c| c.is_ascii_alphabetic() || *c == '_').collect();
        let rest = &body[name.len()..];
        let indices: Vec<u32> = if rest.contains('[') {
            rest.split(['[', ']'])
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().map_err(|_| Error::UnknownGenerator(label.to_string())))
                .collect::<Result<_>>()?
        } else {
            rest.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::UnknownGenerator(label.to_string())))
                .collect::<Result<_>>()?
        };
        self.find(&name, &indices, starred)
    }

    pub fn word_weight(&self, w: &Word) -> Weight {
        let mut acc = Weight::zero(self.weight_dim());
        for &g in w.ids() {
            acc.add_assign_slice(self.gens[g as usize].weight.components());
        }
        acc
    }

    /// Exponent of `χ(wt a, wt b)` for two words.
    pub fn chi_words(&self, a: &Word, b: &Word) -> PhaseExponent {
        if a.is_empty() || b.is_empty() || self.theta.is_zero() {
            return PhaseExponent::zero();
        }
        let wa = self.word_weight(a);
        let wb = self.word_weight(b);
        self.chi_weights(&wa, &wb)
    }

    pub fn chi_weights(&self, a: &Weight, b: &Weight) -> PhaseExponent {
        PhaseExponent::new(self.theta.pairing_unchecked(a.components(), b.components()).scale(&rat(1, 2)))
    }

    /// Phase acquired by writing a sorted word as the ordered twisted product
    /// of its letters: `g1 ×θ g2 ×θ … ×θ gk = e^{2πi·x} g1g2…gk`.
    pub fn ordering_phase(&self, letters: &[GenId]) -> PhaseExponent {
        if self.theta.is_zero() || letters.len() < 2 {
            return PhaseExponent::zero();
        }
        let mut acc = LinearForm::zero();
        let mut prefix = Weight::zero(self.weight_dim());
        for (i, &g) in letters.iter().enumerate() {
            let wg = &self.gens[g as usize].weight;
            if i > 0 {
                acc += &self.theta.pairing_unchecked(prefix.components(), wg.components());
            }
            prefix.add_assign_slice(wg.components());
        }
        PhaseExponent::new(acc.scale(&rat(1, 2)))
    }

    pub fn format_word(&self, w: &Word) -> String {
        let legs = self.max_leg() as usize + 1;
        let mut parts: Vec<Vec<String>> = vec![Vec::new(); legs];
        for &g in w.ids() {
            let gen = &self.gens[g as usize];
            parts[gen.leg as usize].push(gen.label());
        }
        parts
            .into_iter()
            .map(|p| if p.is_empty() { "1".to_string() } else { p.join(" ") })
            .collect::<Vec<_>>()
            .join(" ⊗ ")
    }

    pub fn max_leg(&self) -> u8 {
        self.gens.iter().map(|g| g.leg).max().unwrap_or(0)
    }

    /// Same generators over a substituted deformation matrix.
    pub fn substitute(&self, subs: &BTreeMap<Param, LinearForm>) -> Arc<Context> {
        Self::assemble(self.theta.substitute(subs), self.gens.clone()).expect("substitution keeps generators valid")
    }

    /// Same generators over another deformation matrix of the same size.
    pub fn with_theta(&self, theta: DeformationMatrix) -> Result<Arc<Context>> {
        if theta.dim() != self.theta.dim() {
            return Err(Error::Dimension { expected: self.theta.dim(), got: theta.dim() });
        }
        Self::assemble(theta, self.gens.clone())
    }
}

/// `left ⊗ right` with deformation matrix `θ_left ⊕ θ_right` and concatenated weights.
#[derive(Clone, Debug)]
pub struct TensorContext {
    pub ctx: Arc<Context>,
    pub left: Arc<Context>,
    pub right: Arc<Context>,
}

impl TensorContext {
    pub fn new(left: &Arc<Context>, right: &Arc<Context>) -> TensorContext {
        let dl = left.weight_dim();
        let dr = right.weight_dim();
        let shift = left.max_leg() + 1;
        let mut gens = Vec::with_capacity(left.gens.len() + right.gens.len());
        for g in &left.gens {
            gens.push(Generator { weight: g.weight.concat(&Weight::zero(dr)), ..g.clone() });
        }
        for g in &right.gens {
            gens.push(Generator { weight: Weight::zero(dl).concat(&g.weight), leg: g.leg + shift, ..g.clone() });
        }
        let ctx = Context::assemble(left.theta.direct_sum(&right.theta), gens).expect("tensor of valid contexts");
        TensorContext { ctx, left: left.clone(), right: right.clone() }
    }

    pub fn left_id(&self, id: GenId) -> GenId {
        id
    }

    pub fn right_id(&self, id: GenId) -> GenId {
        id + self.left.gens.len() as GenId
    }

    pub fn is_left(&self, id: GenId) -> bool {
        (id as usize) < self.left.gens.len()
    }

    /// Splits a tensor word into its two legs.
    pub fn split(&self, w: &Word) -> (Word, Word) {
        let n = self.left.gens.len() as GenId;
        let (l, r): (Vec<GenId>, Vec<GenId>) = w.ids().iter().partition(|&&g| g < n);
        (Word(l), Word(r.into_iter().map(|g| g - n).collect()))
    }

    pub fn join(&self, l: &Word, r: &Word) -> Word {
        let n = self.left.gens.len() as GenId;
        let mut ids = l.0.clone();
        ids.extend(r.0.iter().map(|g| g + n));
        Word(ids)
    }
}
