//! The bigon Hopf algebra, the quantum gauge group coaction and bounded
//! degree coinvariants.
//!
//! The bigon algebra is the rewrite system of a single type-a generator
//! with stated generators written x_{ij}. The gauge algebra attaches one
//! bigon copy per boundary arc of the presentation; the coaction sends a
//! stated generator alpha_{ij} with endpoints on arcs v1, v2 to
//! sum_{a,b} alpha_{ab} (x) x_{ai}^{(v1)} x_{bj}^{(v2)}, the v1 factor
//! multiplied first when both endpoints share a boundary arc. This is the
//! index reading under which the counit law, coassociativity against the
//! standard bigon coproduct, the morphism law on every relator and the
//! coinvariance of the boundary trace all hold exactly. Coinvariants of
//! bounded word length are computed as an exact kernel.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::{kernel, LinalgError};
use crate::mat::Mat;
use crate::presentation::{ArcType, Presentation};
use crate::relator::{build_rewrite_system, RelatorError};
use crate::rewrite::{letter, letter_state, NcPoly, NcWord, RewriteError, RewriteSystem};
use crate::ring::Laurent;

#[derive(Debug, Error)]
pub enum HopfError {
    #[error(transparent)]
    Relator(#[from] RelatorError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("gauge coaction needs a no-relation presentation with arcs of type a or d")]
    UnsupportedPresentation,
}

/// The bigon algebra O_q[SL2] with its Hopf structure maps.
pub struct Bigon {
    rs: RewriteSystem<Laurent>,
}

/// Element of the two-fold tensor square of the bigon.
pub type BigonTensor = BTreeMap<(NcWord, NcWord), Laurent>;

const PP: u8 = 0;
const PM: u8 = 1;
const MP: u8 = 2;
const MM: u8 = 3;

impl Bigon {
    pub fn new() -> Self {
        let rs = build_rewrite_system(&Presentation::bigon("x")).expect("bigon system");
        Bigon { rs }
    }

    pub fn system(&self) -> &RewriteSystem<Laurent> {
        &self.rs
    }

    pub fn normal_form(&self, x: &NcPoly<Laurent>) -> Result<NcPoly<Laurent>, RewriteError> {
        self.rs.normal_form(x)
    }

    /// Coproduct: Delta(x_{ij}) = sum_k x_{ik} (x) x_{kj}, extended as an
    /// algebra morphism; both output components are reduced.
    pub fn coproduct(&self, x: &NcPoly<Laurent>) -> Result<BigonTensor, RewriteError> {
        let mut out: BigonTensor = BTreeMap::new();
        for (w, c) in x.terms() {
            // product over letters of the word
            let mut acc: BigonTensor = BTreeMap::new();
            acc.insert((NcWord::empty(), NcWord::empty()), c.clone());
            for &l in &w.0 {
                let s = letter_state(l);
                let (i, j) = (s >> 1, s & 1);
                let mut next: BigonTensor = BTreeMap::new();
                for ((u, v), cc) in &acc {
                    for k in 0..2u8 {
                        let left = u.concat(&NcWord::single(letter(0, 2 * i + k)));
                        let right = v.concat(&NcWord::single(letter(0, 2 * k + j)));
                        add_tensor(&mut next, (left, right), cc.clone());
                    }
                }
                acc = next;
            }
            for ((u, v), cc) in acc {
                let un = self.rs.normal_form(&NcPoly::from_word(u))?;
                let vn = self.rs.normal_form(&NcPoly::from_word(v))?;
                for (uw, uc) in un.terms() {
                    for (vw, vc) in vn.terms() {
                        add_tensor(
                            &mut out,
                            (uw.clone(), vw.clone()),
                            &(&cc * uc) * vc,
                        );
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Counit: eps(x_{ij}) = delta_{ij}.
    pub fn counit(&self, x: &NcPoly<Laurent>) -> Laurent {
        let mut acc = Laurent::zero();
        for (w, c) in x.terms() {
            if w.0.iter().all(|&l| {
                let s = letter_state(l);
                s == PP || s == MM
            }) {
                acc = &acc + c;
            }
        }
        acc
    }

    /// Antipode: the algebra anti-morphism with S(x_{pp}) = x_{mm},
    /// S(x_{pm}) = -q x_{pm}, S(x_{mp}) = -q^-1 x_{mp}, S(x_{mm}) = x_{pp}.
    pub fn antipode(&self, x: &NcPoly<Laurent>) -> Result<NcPoly<Laurent>, RewriteError> {
        let image = |s: u8| -> NcPoly<Laurent> {
            match s {
                PP => NcPoly::from_letter(letter(0, MM)),
                MM => NcPoly::from_letter(letter(0, PP)),
                PM => NcPoly::from_term(NcWord::single(letter(0, PM)), -&Laurent::q_pow(1)),
                MP => NcPoly::from_term(NcWord::single(letter(0, MP)), -&Laurent::q_pow(-1)),
                _ => unreachable!(),
            }
        };
        let mut out = NcPoly::zero();
        for (w, c) in x.terms() {
            let mut acc = NcPoly::scalar(c.clone());
            for &l in w.0.iter().rev() {
                acc = acc.mul_free(&image(letter_state(l)));
            }
            out = out.add(&acc);
        }
        self.rs.normal_form(&out)
    }
}

impl Default for Bigon {
    fn default() -> Self {
        Bigon::new()
    }
}

fn add_tensor<K: Ord>(map: &mut BTreeMap<K, Laurent>, key: K, c: Laurent) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let v = &*e.get() + &c;
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

/// Element of (base algebra) (x) O_q[SL2]^{(x) slots}; every component is
/// kept in normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement {
    pub slots: usize,
    pub terms: BTreeMap<(NcWord, Vec<NcWord>), Laurent>,
}

impl TensorElement {
    pub fn zero(slots: usize) -> Self {
        TensorElement {
            slots,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (NcWord, Vec<NcWord>), c: Laurent) {
        add_tensor(&mut self.terms, key, c);
    }

    pub fn sub(&self, rhs: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }
}

/// Gauge coaction context: the base system and one bigon per boundary arc.
pub struct Gauge {
    pub rs: RewriteSystem<Laurent>,
    pub bigon: Bigon,
}

impl Gauge {
    pub fn new(p: &Presentation) -> Result<Self, HopfError> {
        if !p.relations.is_empty()
            || !p
                .generators
                .iter()
                .all(|g| matches!(g.arc_type(), ArcType::A | ArcType::D))
        {
            return Err(HopfError::UnsupportedPresentation);
        }
        Ok(Gauge {
            rs: build_rewrite_system(p)?,
            bigon: Bigon::new(),
        })
    }

    pub fn from_system(rs: RewriteSystem<Laurent>) -> Result<Self, HopfError> {
        if !rs
            .presentation()
            .generators
            .iter()
            .all(|g| matches!(g.arc_type(), ArcType::A | ArcType::D))
        {
            return Err(HopfError::UnsupportedPresentation);
        }
        Ok(Gauge {
            rs,
            bigon: Bigon::new(),
        })
    }

    pub fn slots(&self) -> usize {
        self.rs.presentation().boundary_arcs.len()
    }

    fn unit_slots(&self) -> Vec<NcWord> {
        vec![NcWord::empty(); self.slots()]
    }

    /// Coaction of one stated generator: the four (a, b) terms with their
    /// slot words, not yet reduced (single letters never need reduction).
    fn coact_letter(&self, l: u16) -> Vec<(NcWord, Vec<NcWord>, Laurent)> {
        let arc = crate::rewrite::letter_arc(l);
        let s = letter_state(l);
        let (i, j) = (s >> 1, s & 1);
        let g = &self.rs.presentation().generators[arc];
        let (v1, v2) = (g.source.0, g.target.0);
        let mut out = Vec::new();
        for a in 0..2u8 {
            for b in 0..2u8 {
                let base = NcWord::single(letter(arc, 2 * a + b));
                let mut slots = self.unit_slots();
                let xai = letter(0, 2 * a + i);
                let xbj = letter(0, 2 * b + j);
                if v1 == v2 {
                    slots[v1] = NcWord(vec![xai, xbj]);
                } else {
                    slots[v1] = NcWord::single(xai);
                    slots[v2] = NcWord::single(xbj);
                }
                out.push((base, slots, Laurent::one()));
            }
        }
        out
    }

    /// The quantum gauge group coaction, extended multiplicatively; all
    /// components reduced.
    pub fn coaction(&self, x: &NcPoly<Laurent>) -> Result<TensorElement, HopfError> {
        let mut out = TensorElement::zero(self.slots());
        for (w, c) in x.terms() {
            let mut acc = TensorElement::zero(self.slots());
            acc.add_term((NcWord::empty(), self.unit_slots()), c.clone());
            for &l in &w.0 {
                let pieces = self.coact_letter(l);
                let mut next = TensorElement::zero(self.slots());
                for ((base, slots), cc) in &acc.terms {
                    for (pb, ps, pc) in &pieces {
                        let nb = base.concat(pb);
                        let ns: Vec<NcWord> = slots
                            .iter()
                            .zip(ps)
                            .map(|(u, v)| u.concat(v))
                            .collect();
                        next.add_term((nb, ns), cc * pc);
                    }
                }
                acc = next;
            }
            // reduce all components
            for ((base, slots), cc) in acc.terms {
                let bn = self.rs.normal_form(&NcPoly::from_word(base))?;
                let mut reduced_slots: Vec<NcPoly<Laurent>> = Vec::with_capacity(slots.len());
                for s in slots {
                    reduced_slots.push(self.bigon.normal_form(&NcPoly::from_word(s))?);
                }
                // distribute the products of reduced components
                let mut partial: Vec<(Vec<NcWord>, Laurent)> =
                    vec![(Vec::new(), cc.clone())];
                for sp in &reduced_slots {
                    let mut np = Vec::new();
                    for (pref, pc) in &partial {
                        for (sw, sc) in sp.terms() {
                            let mut v = pref.clone();
                            v.push(sw.clone());
                            np.push((v, pc * sc));
                        }
                    }
                    partial = np;
                }
                for (bw, bc) in bn.terms() {
                    for (sv, sc) in &partial {
                        out.add_term((bw.clone(), sv.clone()), bc * sc);
                    }
                }
            }
        }
        Ok(out)
    }

    /// x (x) 1: the comparison element for the coinvariant condition.
    pub fn times_unit(&self, x: &NcPoly<Laurent>) -> Result<TensorElement, HopfError> {
        let mut out = TensorElement::zero(self.slots());
        for (w, c) in self.rs.normal_form(x)?.terms() {
            out.add_term((w.clone(), self.unit_slots()), c.clone());
        }
        Ok(out)
    }

    /// (id (x) eps) applied to a tensor element.
    pub fn apply_counit(&self, t: &TensorElement) -> NcPoly<Laurent> {
        let mut out = NcPoly::zero();
        for ((base, slots), c) in &t.terms {
            let mut factor = c.clone();
            let mut zero = false;
            for s in slots {
                let e = self.bigon.counit(&NcPoly::from_word(s.clone()));
                if e.is_zero() {
                    zero = true;
                    break;
                }
                factor = &factor * &e;
            }
            if !zero {
                out.add_term(base.clone(), factor);
            }
        }
        out
    }
}

/// Standard bigon coproduct on a slot word: Delta(x_{ij}) =
/// sum_k x_{ik} (x) x_{kj}, extended multiplicatively; the coproduct of the
/// gauge Hopf algebra.
fn gauge_coproduct_word(bigon: &Bigon, w: &NcWord) -> Result<BigonTensor, RewriteError> {
    let mut acc: BigonTensor = BTreeMap::new();
    acc.insert((NcWord::empty(), NcWord::empty()), Laurent::one());
    for &l in &w.0 {
        let s = letter_state(l);
        let (i, j) = (s >> 1, s & 1);
        let mut next: BigonTensor = BTreeMap::new();
        for ((u, v), c) in &acc {
            for k in 0..2u8 {
                let left = u.concat(&NcWord::single(letter(0, 2 * i + k)));
                let right = v.concat(&NcWord::single(letter(0, 2 * k + j)));
                add_tensor(&mut next, (left, right), c.clone());
            }
        }
        acc = next;
    }
    let mut out: BigonTensor = BTreeMap::new();
    for ((u, v), c) in acc {
        let un = bigon.normal_form(&NcPoly::from_word(u))?;
        let vn = bigon.normal_form(&NcPoly::from_word(v))?;
        for (uw, uc) in un.terms() {
            for (vw, vc) in vn.terms() {
                add_tensor(&mut out, (uw.clone(), vw.clone()), &(&c * uc) * vc);
            }
        }
    }
    Ok(out)
}

type Triple = BTreeMap<(NcWord, Vec<NcWord>, Vec<NcWord>), Laurent>;

/// Comodule verification report.
#[derive(Debug, Clone)]
pub struct ComoduleReport {
    pub counit_failures: Vec<String>,
    pub coassoc_failures: Vec<String>,
    pub relator_failures: Vec<String>,
}

impl ComoduleReport {
    pub fn ok(&self) -> bool {
        self.counit_failures.is_empty()
            && self.coassoc_failures.is_empty()
            && self.relator_failures.is_empty()
    }
}

/// Verify the comodule axioms on every generator and the morphism law on
/// every relator.
pub fn check_comodule(gauge: &Gauge) -> Result<ComoduleReport, HopfError> {
    let p = gauge.rs.presentation().clone();
    let mut report = ComoduleReport {
        counit_failures: Vec::new(),
        coassoc_failures: Vec::new(),
        relator_failures: Vec::new(),
    };
    for (rank, g) in p.generators.iter().enumerate() {
        for s in 0..4u8 {
            let x = NcPoly::<Laurent>::from_letter(letter(rank, s));
            let image = gauge.coaction(&x)?;
            // (id (x) eps) Delta = id
            if gauge.apply_counit(&image) != gauge.rs.normal_form(&x)? {
                report
                    .counit_failures
                    .push(format!("{}[{}]", g.id, crate::rewrite::STATE_NAMES[s as usize]));
            }
            // (Delta (x) id) Delta = (id (x) Delta_gauge) Delta
            let mut lhs: Triple = BTreeMap::new();
            for ((base, slots), c) in &image.terms {
                let again = gauge.coaction(&NcPoly::from_word(base.clone()))?;
                for ((b2, s2), c2) in &again.terms {
                    add_tensor(
                        &mut lhs,
                        (b2.clone(), s2.clone(), slots.clone()),
                        c * c2,
                    );
                }
            }
            let mut rhs: Triple = BTreeMap::new();
            for ((base, slots), c) in &image.terms {
                // independent transposed coproducts per slot
                let mut partial: Vec<(Vec<NcWord>, Vec<NcWord>, Laurent)> =
                    vec![(Vec::new(), Vec::new(), c.clone())];
                for s in slots {
                    let dt = gauge_coproduct_word(&gauge.bigon, s)?;
                    let mut np = Vec::new();
                    for (lv, rv, pc) in &partial {
                        for ((u, v), dc) in &dt {
                            let mut lvn = lv.clone();
                            let mut rvn = rv.clone();
                            lvn.push(u.clone());
                            rvn.push(v.clone());
                            np.push((lvn, rvn, pc * dc));
                        }
                    }
                    partial = np;
                }
                for (lv, rv, pc) in partial {
                    add_tensor(&mut rhs, (base.clone(), lv, rv), pc);
                }
            }
            if lhs != rhs {
                report
                    .coassoc_failures
                    .push(format!("{}[{}]", g.id, crate::rewrite::STATE_NAMES[s as usize]));
            }
        }
    }
    // morphism law: the coaction of every relator vanishes
    for poly in gauge.rs.relator_polys() {
        let image = gauge.coaction(&poly)?;
        if !image.is_zero() {
            report
                .relator_failures
                .push(format!("relator with leading {:?}", poly.leading_word()));
        }
    }
    Ok(report)
}

/// Basis of the coinvariant subspace of the span of irreducible words of
/// length at most `max_len`, as primitive Laurent combinations, via the
/// exact kernel of Delta - id (x) 1.
pub fn coinvariants(gauge: &Gauge, max_len: usize) -> Result<Vec<NcPoly<Laurent>>, HopfError> {
    let mut words = Vec::new();
    for n in 0..=max_len {
        words.extend(gauge.rs.normal_words(n));
    }
    let mut images = Vec::with_capacity(words.len());
    let mut row_index: BTreeMap<(NcWord, Vec<NcWord>), usize> = BTreeMap::new();
    for w in &words {
        let x = NcPoly::from_word(w.clone());
        let img = gauge.coaction(&x)?.sub(&gauge.times_unit(&x)?);
        for key in img.terms.keys() {
            let next = row_index.len();
            row_index.entry(key.clone()).or_insert(next);
        }
        images.push(img);
    }
    let mut m = Mat::zero(row_index.len().max(1), words.len());
    for (col, img) in images.iter().enumerate() {
        for (key, c) in &img.terms {
            m.set(row_index[key], col, c.clone());
        }
    }
    let basis = kernel(&m)?;
    let mut out = Vec::new();
    for v in basis {
        let mut poly = NcPoly::zero();
        for (c, w) in v.into_iter().zip(&words) {
            poly.add_term(w.clone(), c);
        }
        out.push(poly);
    }
    Ok(out)
}
