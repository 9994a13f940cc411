//! Noncommutative polynomial arithmetic and the terminating rewriting system
//! whose irreducible words form the PBW basis.
//!
//! Letters are stated generators, encoded as `arc_rank * 4 + state` with
//! states ordered pp < pm < mp < mm. Words are compared by length first and
//! then lexicographically; every rewrite strictly decreases this order, so
//! reduction terminates. Confluence is not assumed: it is certified by
//! exhausting critical triples (`certify_confluence`).

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::presentation::Presentation;
use crate::ring::{Coeff, Laurent};
use crate::mat::Entry;

/// A stated generator: `arc * 4 + state`.
pub type Letter = u16;

pub const STATE_PP: u8 = 0;
pub const STATE_PM: u8 = 1;
pub const STATE_MP: u8 = 2;
pub const STATE_MM: u8 = 3;

pub fn letter(arc: usize, state: u8) -> Letter {
    debug_assert!(state < 4);
    (arc as u16) * 4 + state as u16
}

pub fn letter_arc(l: Letter) -> usize {
    (l / 4) as usize
}

pub fn letter_state(l: Letter) -> u8 {
    (l % 4) as u8
}

pub const STATE_NAMES: [&str; 4] = ["pp", "pm", "mp", "mm"];

/// Word in the free monoid on stated generators. The leftmost factor is the
/// topmost tangle in the product convention.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NcWord(pub Vec<Letter>);

impl NcWord {
    pub fn empty() -> Self {
        NcWord(Vec::new())
    }

    pub fn single(l: Letter) -> Self {
        NcWord(vec![l])
    }

    pub fn pair(a: Letter, b: Letter) -> Self {
        NcWord(vec![a, b])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, rhs: &NcWord) -> NcWord {
        let mut v = Vec::with_capacity(self.0.len() + rhs.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&rhs.0);
        NcWord(v)
    }

    pub fn reversed(&self) -> NcWord {
        NcWord(self.0.iter().rev().copied().collect())
    }
}

impl Ord for NcWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for NcWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite linear combination of words, canonical (no zero coefficients).
#[derive(Debug, Clone, PartialEq)]
pub struct NcPoly<S: Coeff> {
    terms: BTreeMap<NcWord, S>,
}

impl<S: Coeff> NcPoly<S> {
    pub fn zero() -> Self {
        NcPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        NcPoly::scalar(S::one())
    }

    pub fn scalar(c: S) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(NcWord::empty(), c);
        p
    }

    pub fn from_letter(l: Letter) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(NcWord::single(l), S::one());
        p
    }

    pub fn from_word(w: NcWord) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(w, S::one());
        p
    }

    pub fn from_term(w: NcWord, c: S) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&NcWord, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &NcWord) -> Option<&S> {
        self.terms.get(w)
    }

    pub fn add_term(&mut self, w: NcWord, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry as E;
        match self.terms.entry(w) {
            E::Vacant(e) => {
                e.insert(c);
            }
            E::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.neg_ref());
        }
        out
    }

    pub fn neg(&self) -> Self {
        NcPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.neg_ref()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = NcPoly::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.mul_ref(c));
        }
        out
    }

    /// Product in the free algebra (concatenation, no reduction).
    pub fn mul_free(&self, rhs: &Self) -> Self {
        let mut out = NcPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn map_coeffs<T: Coeff>(&self, f: impl Fn(&S) -> T) -> NcPoly<T> {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Words reversed, coefficients mapped (the shape of an anti-morphism).
    pub fn reverse_words(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.reversed(), f(c));
        }
        out
    }

    /// Greatest word, if any.
    pub fn leading_word(&self) -> Option<&NcWord> {
        self.terms.keys().next_back()
    }

    /// Generic rendering: `(coeff)*letters`, terms by descending word order.
    pub fn render_generic(&self, name: &dyn Fn(Letter) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (w, c) in self.terms.iter().rev() {
            let word = w
                .0
                .iter()
                .map(|&l| name(l))
                .collect::<Vec<_>>()
                .join("*");
            if w.is_empty() {
                parts.push(format!("({})", c.render()));
            } else {
                parts.push(format!("({})*{}", c.render(), word));
            }
        }
        parts.join(" + ")
    }
}

impl NcPoly<Laurent> {
    /// Expression-grammar rendering: parse(render(p)) == p.
    pub fn render(&self, name: &dyn Fn(Letter) -> String) -> String {
        use num_traits::Signed;
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let word = w
                .0
                .iter()
                .map(|&l| name(l))
                .collect::<Vec<_>>()
                .join("*");
            // single-term coefficients carry their sign out of the product
            let (sign_neg, body) = if c.num_terms() == 1 {
                let (k, coef) = c.terms().next().unwrap();
                let mag = Laurent::monomial(coef.abs(), *k);
                let mag_str = mag.render();
                let s = if w.is_empty() {
                    mag_str
                } else if mag.is_one() {
                    word
                } else {
                    format!("{}*{}", mag_str, word)
                };
                (coef.is_negative(), s)
            } else {
                let s = if w.is_empty() {
                    format!("({})", c.render())
                } else {
                    format!("({})*{}", c.render(), word)
                };
                (false, s)
            };
            if i == 0 {
                if sign_neg {
                    out.push_str("- ");
                }
            } else if sign_neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        out
    }
}

impl<S: Coeff> Entry for NcPoly<S> {
    fn zero() -> Self {
        NcPoly::zero()
    }
    fn is_zero(&self) -> bool {
        NcPoly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        NcPoly::add(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.mul_free(rhs)
    }
}

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("reduction exceeded the step guard ({0} steps): malformed rule set?")]
    GuardExceeded(u64),
    #[error("rule right-hand side is not smaller than its leading word {0:?}")]
    BadRule(NcWord),
    #[error("duplicate leading word {0:?}")]
    DuplicateLeading(NcWord),
    #[error("leading word {0:?} is not in the admissible leading-term set")]
    NotALeadingTerm(NcWord),
}

pub const DEFAULT_GUARD: u64 = 1_000_000;

/// Is the length-2 word `(a, b)` a designated leading term?
/// Cross-arc: every word with the greater arc first. Same-arc: the seven
/// words whose sign pattern satisfies a1 > a2 or b1 > b2 bitwise
/// (+ encoded 0, - encoded 1).
pub fn is_leading_pair(a: Letter, b: Letter) -> bool {
    let (arc_a, arc_b) = (letter_arc(a), letter_arc(b));
    if arc_a != arc_b {
        return arc_a > arc_b;
    }
    let (s, t) = (letter_state(a), letter_state(b));
    let (a1, b1) = (s >> 1, s & 1);
    let (a2, b2) = (t >> 1, t & 1);
    a1 > a2 || b1 > b2
}

/// Oriented relator table keyed by length-2 leading words, plus the
/// presentation it came from. Immutable once constructed.
#[derive(Debug, Clone)]
pub struct RewriteSystem<S: Coeff> {
    rules: BTreeMap<(Letter, Letter), NcPoly<S>>,
    presentation: Presentation,
    guard: u64,
}

impl<S: Coeff> RewriteSystem<S> {
    /// Build from oriented relators `leading -> lower`. Validates that every
    /// leading word is admissible and distinct and that each rule strictly
    /// decreases the word order.
    pub fn from_rules(
        presentation: Presentation,
        rules: Vec<((Letter, Letter), NcPoly<S>)>,
    ) -> Result<Self, RewriteError> {
        let mut table = BTreeMap::new();
        for ((a, b), rhs) in rules {
            let lead = NcWord::pair(a, b);
            if !is_leading_pair(a, b) {
                return Err(RewriteError::NotALeadingTerm(lead));
            }
            for (w, _) in rhs.terms() {
                if *w >= lead {
                    return Err(RewriteError::BadRule(lead.clone()));
                }
            }
            if table.insert((a, b), rhs).is_some() {
                return Err(RewriteError::DuplicateLeading(lead));
            }
        }
        Ok(RewriteSystem {
            rules: table,
            presentation,
            guard: DEFAULT_GUARD,
        })
    }

    pub fn with_guard(mut self, guard: u64) -> Self {
        self.guard = guard;
        self
    }

    pub fn guard(&self) -> u64 {
        self.guard
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn rules(&self) -> impl Iterator<Item = (&(Letter, Letter), &NcPoly<S>)> {
        self.rules.iter()
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    pub fn rule(&self, a: Letter, b: Letter) -> Option<&NcPoly<S>> {
        self.rules.get(&(a, b))
    }

    pub fn num_letters(&self) -> usize {
        self.presentation.generators.len() * 4
    }

    /// Relators as polynomials `leading - lower`.
    pub fn relator_polys(&self) -> Vec<NcPoly<S>> {
        self.rules
            .iter()
            .map(|(&(a, b), rhs)| NcPoly::from_word(NcWord::pair(a, b)).sub(rhs))
            .collect()
    }

    fn leftmost_reducible(&self, w: &NcWord) -> Option<usize> {
        w.0.windows(2)
            .position(|p| self.rules.contains_key(&(p[0], p[1])))
    }

    /// Reduce to the unique irreducible representative (unique once the
    /// system is certified confluent). Strategy: rewrite the greatest
    /// reducible word, leftmost reducible position first.
    pub fn normal_form(&self, x: &NcPoly<S>) -> Result<NcPoly<S>, RewriteError> {
        let mut poly = x.clone();
        let mut steps = 0u64;
        loop {
            let target = poly
                .terms
                .iter()
                .rev()
                .find_map(|(w, _)| self.leftmost_reducible(w).map(|p| (w.clone(), p)));
            let Some((w, pos)) = target else {
                return Ok(poly);
            };
            steps += 1;
            if steps > self.guard {
                return Err(RewriteError::GuardExceeded(self.guard));
            }
            let c = poly.terms.remove(&w).expect("term present");
            let rhs = &self.rules[&(w.0[pos], w.0[pos + 1])];
            let prefix = &w.0[..pos];
            let suffix = &w.0[pos + 2..];
            for (rw, rc) in rhs.terms() {
                let mut nw = Vec::with_capacity(prefix.len() + rw.len() + suffix.len());
                nw.extend_from_slice(prefix);
                nw.extend_from_slice(&rw.0);
                nw.extend_from_slice(suffix);
                poly.add_term(NcWord(nw), c.mul_ref(rc));
            }
        }
    }

    /// Normal form of the free product.
    pub fn multiply(&self, x: &NcPoly<S>, y: &NcPoly<S>) -> Result<NcPoly<S>, RewriteError> {
        self.normal_form(&x.mul_free(y))
    }

    /// Count irreducible words of length `n` (walks in the non-leading
    /// adjacency graph).
    pub fn graded_dimension(&self, n: usize) -> u128 {
        let k = self.num_letters();
        if n == 0 {
            return 1;
        }
        let mut counts = vec![1u128; k];
        for _ in 1..n {
            let mut next = vec![0u128; k];
            for first in 0..k {
                for second in 0..k {
                    if !is_leading_pair(first as Letter, second as Letter) {
                        next[first] += counts[second];
                    }
                }
            }
            counts = next;
        }
        counts.iter().sum()
    }

    /// All irreducible words of length exactly `n`, in ascending order.
    pub fn normal_words(&self, n: usize) -> Vec<NcWord> {
        let k = self.num_letters();
        let mut words = vec![NcWord::empty()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &words {
                for l in 0..k {
                    let l = l as Letter;
                    if w.0.last().map_or(true, |&last| !is_leading_pair(last, l)) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(NcWord(v));
                    }
                }
            }
            words = next;
        }
        words.sort();
        words
    }
}

/// One non-joinable critical triple: the word and its two distinct normal
/// forms.
#[derive(Debug, Clone)]
pub struct ConfluenceFailure<S: Coeff> {
    pub triple: NcWord,
    pub left_nf: NcPoly<S>,
    pub right_nf: NcPoly<S>,
}

#[derive(Debug, Clone)]
pub struct ConfluenceReport<S: Coeff> {
    pub generators: usize,
    pub relators: usize,
    pub critical_triples: usize,
    pub failures: Vec<ConfluenceFailure<S>>,
}

impl<S: Coeff> ConfluenceReport<S> {
    pub fn is_confluent(&self) -> bool {
        self.failures.is_empty()
    }
}

impl<S: Coeff> RewriteSystem<S> {
    fn rewrite_at(&self, w: &NcWord, pos: usize, c: &S) -> NcPoly<S> {
        let rhs = &self.rules[&(w.0[pos], w.0[pos + 1])];
        let mut out = NcPoly::zero();
        for (rw, rc) in rhs.terms() {
            let mut nw = Vec::with_capacity(w.len());
            nw.extend_from_slice(&w.0[..pos]);
            nw.extend_from_slice(&rw.0);
            nw.extend_from_slice(&w.0[pos + 2..]);
            out.add_term(NcWord(nw), c.mul_ref(rc));
        }
        out
    }

    /// Enumerate every critical triple v1 v2 v3 (both v1 v2 and v2 v3
    /// leading), reduce it along both initial rewrites to normal form, and
    /// report every disagreement. An empty failure list certifies that the
    /// irreducible words form a PBW basis.
    pub fn certify_confluence(&self) -> Result<ConfluenceReport<S>, RewriteError> {
        let k = self.num_letters() as u16;
        let mut triples = Vec::new();
        for &(a, b) in self.rules.keys() {
            for c in 0..k {
                if self.rules.contains_key(&(b, c)) {
                    triples.push((a, b, c));
                }
            }
        }
        triples.sort_unstable();
        let results: Result<Vec<Option<ConfluenceFailure<S>>>, RewriteError> = triples
            .par_iter()
            .map(|&(a, b, c)| {
                let w = NcWord(vec![a, b, c]);
                let left = self.normal_form(&self.rewrite_at(&w, 0, &S::one()))?;
                let right = self.normal_form(&self.rewrite_at(&w, 1, &S::one()))?;
                if left == right {
                    Ok(None)
                } else {
                    Ok(Some(ConfluenceFailure {
                        triple: w,
                        left_nf: left,
                        right_nf: right,
                    }))
                }
            })
            .collect();
        let mut failures: Vec<ConfluenceFailure<S>> = results?.into_iter().flatten().collect();
        failures.sort_by(|x, y| x.triple.cmp(&y.triple));
        Ok(ConfluenceReport {
            generators: self.presentation.generators.len(),
            relators: self.rules.len(),
            critical_triples: triples.len(),
            failures,
        })
    }
}

/// The reflection anti-involution: coefficients bar-conjugated, words
/// reversed. The result lives over the height-flipped presentation, which
/// has the same generator ranks, so letters are unchanged.
pub fn reflection_theta(x: &NcPoly<Laurent>) -> NcPoly<Laurent> {
    x.reverse_words(|c| c.bar())
}

impl<S: Coeff> fmt::Display for NcPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_generic(&|l| {
            format!("g{}[{}]", letter_arc(l), STATE_NAMES[letter_state(l) as usize])
        }))
    }
}
