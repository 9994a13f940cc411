//! Relator generation for the finitely presented algebra of a no-relation
//! groupoid presentation: seven same-generator relators per arc, sixteen
//! exchange relators per ordered generator pair (derived from the matched
//! configuration equation by exact linear solving), q-determinant identity
//! targets, trivial-loop matrices and generator elimination.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::linalg::{solve_fraction_free, LinalgError};
use crate::mat::{c_inv_mat, c_mat, r_inv_mat, r_mat, tau_mat, Mat};
use crate::presentation::{
    match_configuration, ArcType, CaseId, Dressed, Match, Presentation, PresentationError,
    RelLetter, TransformedArc,
};
use crate::rewrite::{
    letter, letter_arc, letter_state, NcPoly, NcWord, RewriteError, RewriteSystem,
};
use crate::ring::Laurent;

#[derive(Debug, Error)]
pub enum RelatorError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("deriving {alpha}/{beta}: coefficient system is singular (rank {rank})")]
    SingularSystem {
        alpha: String,
        beta: String,
        rank: usize,
    },
    #[error("deriving {alpha}/{beta}: solution has a surviving denominator")]
    NonLaurentSolution { alpha: String, beta: String },
    #[error("deriving {alpha}/{beta}: back-substitution does not restore the case identity")]
    BackSubstitutionFailed { alpha: String, beta: String },
    #[error("generator {0} has type {1}, expected a, c or d")]
    UnsupportedType(String, char),
    #[error("presentation has relations; eliminate them first")]
    HasRelations,
    #[error("relation letter {0} is not of type a or d")]
    BadLoopLetter(String),
    #[error("inverse relation letter {0} must be of type a")]
    BadInverseLetter(String),
    #[error("elimination: generator {0} must occur exactly once in the relation")]
    NotSingleOccurrence(String),
    #[error("elimination: isolating {0} requires inverting a non type-a letter")]
    UnsupportedElimination(String),
    #[error("elimination: generator {0} still occurs in another relation")]
    StillUsed(String),
    #[error("elimination would empty the generating set")]
    EmptyGenerators,
    #[error("internal: {0}")]
    Internal(String),
}

fn q_pow(k: i64) -> Laurent {
    Laurent::q_pow(k)
}

fn a_pow(k: i64) -> Laurent {
    Laurent::a_pow(k)
}

/// q - q^-1
fn q_minus_qinv() -> Laurent {
    &q_pow(1) - &q_pow(-1)
}

type Rule = ((u16, u16), NcPoly<Laurent>);

fn rule(
    arc: usize,
    lead: (u8, u8),
    terms: &[((u8, u8), Laurent)],
    constant: Laurent,
) -> Rule {
    let mut rhs = NcPoly::zero();
    for ((s, t), c) in terms {
        rhs.add_term(NcWord::pair(letter(arc, *s), letter(arc, *t)), c.clone());
    }
    rhs.add_term(NcWord::empty(), constant);
    ((letter(arc, lead.0), letter(arc, lead.1)), rhs)
}

const PP: u8 = 0;
const PM: u8 = 1;
const MP: u8 = 2;
const MM: u8 = 3;

/// The seven oriented rules of system (Ra), (Rc) or (Rd) for one arc.
pub fn same_generator_relators(ty: ArcType, arc: usize) -> Result<Vec<Rule>, RelatorError> {
    let one = Laurent::one;
    let rules = match ty {
        ArcType::A => vec![
            rule(arc, (PM, PP), &[((PP, PM), q_pow(1))], Laurent::zero()),
            rule(arc, (MP, PP), &[((PP, MP), q_pow(1))], Laurent::zero()),
            rule(arc, (MM, PM), &[((PM, MM), q_pow(1))], Laurent::zero()),
            rule(arc, (MM, MP), &[((MP, MM), q_pow(1))], Laurent::zero()),
            rule(arc, (PM, MP), &[((PP, MM), q_pow(1))], -&q_pow(1)),
            rule(arc, (MP, PM), &[((PP, MM), q_pow(1))], -&q_pow(1)),
            rule(
                arc,
                (MM, PP),
                &[((PP, MM), q_pow(2))],
                &one() - &q_pow(2),
            ),
        ],
        ArcType::D => {
            let hop = &q_minus_qinv() * &q_pow(2);
            vec![
                rule(
                    arc,
                    (MP, PP),
                    &[((PP, MP), one()), ((PP, PM), hop.clone())],
                    Laurent::zero(),
                ),
                rule(arc, (PM, PP), &[((PP, PM), q_pow(2))], Laurent::zero()),
                rule(
                    arc,
                    (MM, MP),
                    &[((MP, MM), one()), ((PM, MM), hop.clone())],
                    Laurent::zero(),
                ),
                rule(arc, (MM, PM), &[((PM, MM), q_pow(2))], Laurent::zero()),
                rule(
                    arc,
                    (PM, MP),
                    &[((PP, MM), one()), ((PM, PM), q_minus_qinv())],
                    -&a_pow(1),
                ),
                rule(
                    arc,
                    (MP, PM),
                    &[((PP, MM), one()), ((PM, PM), q_minus_qinv())],
                    -&a_pow(1),
                ),
                rule(
                    arc,
                    (MM, PP),
                    &[((PP, MM), q_pow(2)), ((PM, PM), hop)],
                    &a_pow(1) * &(&one() - &q_pow(2)),
                ),
            ]
        }
        ArcType::C => {
            vec![
                rule(
                    arc,
                    (MP, PP),
                    &[((PP, MP), one()), ((PP, PM), q_minus_qinv())],
                    Laurent::zero(),
                ),
                rule(arc, (PM, PP), &[((PP, PM), q_pow(2))], Laurent::zero()),
                rule(
                    arc,
                    (MM, MP),
                    &[((MP, MM), one()), ((PM, MM), q_minus_qinv())],
                    Laurent::zero(),
                ),
                rule(arc, (MM, PM), &[((PM, MM), q_pow(2))], Laurent::zero()),
                rule(arc, (PM, MP), &[((PP, MM), q_pow(2))], -&a_pow(3)),
                rule(arc, (MP, PM), &[((PP, MM), q_pow(2))], -&a_pow(3)),
                rule(
                    arc,
                    (MM, PP),
                    &[((PP, MM), q_pow(2)), ((PM, PM), q_minus_qinv())],
                    &a_pow(-1) * &(&one() - &q_pow(2)),
                ),
            ]
        }
        other => {
            return Err(RelatorError::UnsupportedType(
                format!("rank {}", arc),
                other.letter(),
            ))
        }
    };
    Ok(rules)
}

/// q-determinant identity target for one arc, expanded into stated
/// generators; its normal form under the full relator system is zero.
pub fn qdet_relator(ty: ArcType, arc: usize, id: &str) -> Result<NcPoly<Laurent>, RelatorError> {
    let w = |s: u8, t: u8, c: Laurent| NcPoly::from_term(NcWord::pair(letter(arc, s), letter(arc, t)), c);
    let p = match ty {
        // det_q(M) - 1 = a_pp a_mm - q^-1 a_pm a_mp - 1
        ArcType::A => w(PP, MM, Laurent::one())
            .add(&w(PM, MP, -&q_pow(-1)))
            .sub(&NcPoly::one()),
        // A^-1 a_mm a_pp - A^3 a_mp a_pm - 1
        ArcType::D => w(MM, PP, a_pow(-1))
            .add(&w(MP, PM, -&a_pow(3)))
            .sub(&NcPoly::one()),
        // reflection image of the type-d identity: A a_pp a_mm - A^-3 a_pm a_mp - 1
        ArcType::C => w(PP, MM, a_pow(1))
            .add(&w(PM, MP, -&a_pow(-3)))
            .sub(&NcPoly::one()),
        other => return Err(RelatorError::UnsupportedType(id.to_string(), other.letter())),
    };
    Ok(p)
}

fn dress_scalar(m: &Mat<Laurent>) -> Dressed {
    m.map(|c| NcPoly::scalar(c.clone()))
}

fn identity2() -> Dressed {
    dress_scalar(&Mat::identity(2))
}

/// The matched configuration equation, as LHS and RHS 4x4 matrices over the
/// free algebra. Every entry of the LHS is alpha-first (in equation roles),
/// every entry of the RHS beta-first. Cases 5-7 are handled by the embedded
/// polygon models instead of a printed equation.
fn case_equation(case: CaseId, na: &Dressed, nb: &Dressed) -> (Dressed, Dressed) {
    let tau = dress_scalar(&tau_mat());
    let r = dress_scalar(&r_mat());
    let rinv = dress_scalar(&r_inv_mat());
    let i2 = identity2();
    match case.0 {
        1 => (na.kronecker(nb), tau.mul(&nb.kronecker(na)).mul(&tau)),
        2 => (na.kronecker(nb), tau.mul(&nb.kronecker(na)).mul(&r)),
        3 => (na.kronecker(nb), rinv.mul(&nb.kronecker(na)).mul(&r)),
        4 => (na.kronecker(nb), r.mul(&nb.kronecker(na)).mul(&r)),
        8 => (
            i2.kronecker(na)
                .mul(&rinv)
                .mul(&i2.kronecker(nb))
                .mul(&rinv),
            r.mul(&i2.kronecker(nb))
                .mul(&rinv)
                .mul(&i2.kronecker(na)),
        ),
        9 => (
            rinv.mul(&i2.kronecker(na)).mul(&r).mul(&i2.kronecker(nb)),
            i2.kronecker(nb)
                .mul(&rinv)
                .mul(&i2.kronecker(na))
                .mul(&r),
        ),
        10 => (
            i2.kronecker(na)
                .mul(&rinv)
                .mul(&i2.kronecker(nb))
                .mul(&r),
            r.mul(&i2.kronecker(nb))
                .mul(&rinv)
                .mul(&i2.kronecker(na)),
        ),
        other => panic!("case {} has no printed equation", other),
    }
}

/// The sixteen exchange relators for an ordered pair alpha > beta, together
/// with the matched configuration and the bilinear coefficient matrices
/// (kept for the back-substitution oracle).
pub struct ExchangeDerivation {
    pub m: Match,
    pub rules: Vec<Rule>,
    /// Coefficients of the alpha-first words in the case identity.
    pub t_alpha: Mat<Laurent>,
    /// Coefficients of the beta-first words.
    pub t_beta: Mat<Laurent>,
    /// Solution with T_alpha * X = T_beta; row (s1*4+s2) expands
    /// alpha_{s1} beta_{s2}.
    pub solution: Mat<Laurent>,
}

/// Oriented rules of one exchange pair inside an ambient system: expand the
/// products hi_s lo_t over the basis of lo_u hi_v products (and the unit)
/// by exact linear algebra. Used for the polygon-model cases.
fn solve_exchange_in_model(
    rs: &RewriteSystem<Laurent>,
    hi: &dyn Fn(u8) -> NcPoly<Laurent>,
    lo: &dyn Fn(u8) -> NcPoly<Laurent>,
) -> Result<Mat<Laurent>, RelatorError> {
    use std::collections::BTreeMap;
    let mut keys: BTreeMap<NcWord, usize> = BTreeMap::new();
    let mut cols: Vec<Vec<(usize, Laurent)>> = Vec::new();
    for u in 0..4u8 {
        for v in 0..4u8 {
            let prod = rs.multiply(&lo(u), &hi(v))?;
            let mut col = Vec::new();
            for (w, cf) in prod.terms() {
                let n = keys.len();
                col.push((*keys.entry(w.clone()).or_insert(n), cf.clone()));
            }
            cols.push(col);
        }
    }
    {
        let n = keys.len();
        let idx = *keys.entry(NcWord::empty()).or_insert(n);
        cols.push(vec![(idx, Laurent::one())]);
    }
    let dim = keys.len();
    let ncols = 17;
    let mut t = Mat::zero(dim, ncols);
    for (ci, col) in cols.iter().enumerate() {
        for (r, val) in col {
            t.set(*r, ci, val.clone());
        }
    }
    let mut chosen: Vec<usize> = Vec::new();
    for r in 0..dim {
        if chosen.len() == ncols {
            break;
        }
        let mut test = chosen.clone();
        test.push(r);
        let mut sub = Mat::zero(test.len(), ncols);
        for (i, &ri) in test.iter().enumerate() {
            for cj in 0..ncols {
                sub.set(i, cj, t.get(ri, cj).clone());
            }
        }
        let rk = crate::linalg::rank(&sub).map_err(|_| {
            RelatorError::Internal("model product rank".to_string())
        })?;
        if rk == test.len() {
            chosen = test;
        }
    }
    if chosen.len() < ncols {
        return Err(RelatorError::Internal(
            "model products are linearly dependent".to_string(),
        ));
    }
    let mut tsq = Mat::zero(ncols, ncols);
    for (i, &ri) in chosen.iter().enumerate() {
        for cj in 0..ncols {
            tsq.set(i, cj, t.get(ri, cj).clone());
        }
    }
    let mut x = Mat::zero(16, 16);
    for s1 in 0..4u8 {
        for s2 in 0..4u8 {
            let prod = rs.multiply(&hi(s1), &lo(s2))?;
            let mut full = vec![Laurent::zero(); dim];
            for (w, cf) in prod.terms() {
                let idx = keys.get(w).ok_or_else(|| {
                    RelatorError::Internal("model product outside span".to_string())
                })?;
                full[*idx] = cf.clone();
            }
            let mut bv = Mat::zero(ncols, 1);
            for (i, &ri) in chosen.iter().enumerate() {
                bv.set(i, 0, full[ri].clone());
            }
            let sol = solve_fraction_free(&tsq, &bv)
                .map_err(|_| RelatorError::Internal("model solve".to_string()))?
                .laurent()
                .ok_or_else(|| RelatorError::Internal("model solve fraction".to_string()))?;
            // verify on every row and require a vanishing constant
            for r in 0..dim {
                let mut acc = Laurent::zero();
                for cj in 0..ncols {
                    acc = &acc + &(t.get(r, cj) * sol.get(cj, 0));
                }
                if acc != full[r] {
                    return Err(RelatorError::Internal(
                        "model solution fails verification".to_string(),
                    ));
                }
            }
            if !sol.get(16, 0).is_zero() {
                return Err(RelatorError::Internal(
                    "model exchange rule has a constant term".to_string(),
                ));
            }
            for cj in 0..16 {
                x.set((s1 * 4 + s2) as usize, cj, sol.get(cj, 0).clone());
            }
        }
    }
    Ok(x)
}

/// Fan presentation of a polygon: n type-a generators from positions
/// 0..n-1 on one boundary arc to n distinct other arcs.
fn fan_presentation(n: usize) -> Presentation {
    Presentation {
        boundary_arcs: (0..=n).map(|i| format!("u{}", i)).collect(),
        generators: (1..=n)
            .map(|i| crate::presentation::GeneratorArc {
                id: format!("d{}", i),
                source: (0, (i - 1) as i64),
                target: (i, 0),
                height: None,
            })
            .collect(),
        relations: Vec::new(),
        spin: None,
    }
}

/// Image of a type-d loop's stated generator in the polygon algebra when
/// the loop is built by gluing the targets of fan generators r1 < r2:
/// sum over the seam state s of d_{r2, s e} d_{r1, s e'}.
fn glued_loop_letter(r1: usize, r2: usize, state: u8) -> NcPoly<Laurent> {
    let (e, e2) = (state >> 1, state & 1);
    let mut p = NcPoly::zero();
    for s in 0..2u8 {
        p.add_term(
            NcWord(vec![letter(r2, 2 * s + e), letter(r1, 2 * s + e2)]),
            Laurent::one(),
        );
    }
    p
}

/// Exchange solution for a type-d loop against a type-a arc whose source
/// sits on the loop's boundary arc, derived inside the square polygon
/// model. `case` is 5 (endpoint after the loop), 6 (before) or 7 (between
/// the feet); `loop_is_alpha` says whether the loop plays the greater role.
fn loop_arc_solution(case: u8, loop_is_alpha: bool) -> Result<Mat<Laurent>, RelatorError> {
    let (l1, l2, free) = match case {
        5 => (0usize, 1usize, 2usize),
        6 => (1, 2, 0),
        7 => (0, 2, 1),
        _ => unreachable!(),
    };
    let ambient = build_rewrite_system(&fan_presentation(3))?;
    let lp = move |s: u8| glued_loop_letter(l1, l2, s);
    let ar = move |s: u8| NcPoly::from_letter(letter(free, s));
    if loop_is_alpha {
        solve_exchange_in_model(&ambient, &lp, &ar)
    } else {
        solve_exchange_in_model(&ambient, &ar, &lp)
    }
}

/// Linear substitution matrix of a transformed arc: entry (s, t) is the
/// coefficient of the original letter with state t in the (s >> 1, s & 1)
/// entry of the transformed M-matrix.
fn substitution_matrix(t: &TransformedArc, rank: usize) -> Result<Mat<Laurent>, RelatorError> {
    let mut p = Mat::zero(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for (w, c) in t.m.get(i, j).terms() {
                if w.len() != 1 || letter_arc(w.0[0]) != rank {
                    return Err(RelatorError::Internal(
                        "transform is not a letter substitution".to_string(),
                    ));
                }
                p.set(2 * i + j, letter_state(w.0[0]) as usize, c.clone());
            }
        }
    }
    Ok(p)
}

fn kron16(a: &Mat<Laurent>, b: &Mat<Laurent>) -> Mat<Laurent> {
    a.kronecker(b)
}

pub fn exchange_relators(
    p: &Presentation,
    alpha: usize,
    beta: usize,
) -> Result<ExchangeDerivation, RelatorError> {
    let ids = (
        p.generators[alpha].id.clone(),
        p.generators[beta].id.clone(),
    );
    let m = match_configuration(p, alpha, beta)?;
    let (t_alpha, t_beta) = if matches!(m.case.0, 5 | 6 | 7) {
        // polygon-model case: conjugate the canonical solution by the
        // transform substitutions
        let loop_is_alpha = m.role_swapped;
        let x_canon = loop_arc_solution(m.case.0, loop_is_alpha)?;
        let pa = substitution_matrix(&m.alpha, alpha)?;
        let pb = substitution_matrix(&m.beta, beta)?;
        // canonical-word vectors relate to ours by P_alpha (x) P_beta
        (kron16(&pa, &pb), x_canon.mul(&kron16(&pb, &pa)))
    } else {
        let (ea, eb) = if m.role_swapped {
            (&m.beta, &m.alpha)
        } else {
            (&m.alpha, &m.beta)
        };
        let (lhs, rhs) = case_equation(m.case, &ea.n(), &eb.n());
        let mut t_alpha = Mat::zero(16, 16);
        let mut t_beta = Mat::zero(16, 16);
        for i in 0..4 {
            for j in 0..4 {
                let e = lhs.get(i, j).sub(rhs.get(i, j));
                let row = i * 4 + j;
                for (w, c) in e.terms() {
                    if w.len() != 2 {
                        return Err(RelatorError::Internal(format!(
                            "case identity has a word of length {}",
                            w.len()
                        )));
                    }
                    let (x, y) = (w.0[0], w.0[1]);
                    let col = (letter_state(x) * 4 + letter_state(y)) as usize;
                    if letter_arc(x) == alpha && letter_arc(y) == beta {
                        t_alpha.set(row, col, t_alpha.get(row, col) + c);
                    } else if letter_arc(x) == beta && letter_arc(y) == alpha {
                        t_beta.set(row, col, &*t_beta.get(row, col) - c);
                    } else {
                        return Err(RelatorError::Internal(
                            "case identity mixes unexpected arcs".to_string(),
                        ));
                    }
                }
            }
        }
        (t_alpha, t_beta)
    };
    let solution = match solve_fraction_free(&t_alpha, &t_beta) {
        Ok(sol) => sol.laurent().ok_or_else(|| RelatorError::NonLaurentSolution {
            alpha: ids.0.clone(),
            beta: ids.1.clone(),
        })?,
        Err(LinalgError::Singular { rank, .. }) => {
            return Err(RelatorError::SingularSystem {
                alpha: ids.0,
                beta: ids.1,
                rank,
            })
        }
        Err(LinalgError::InexactDivision) => {
            return Err(RelatorError::NonLaurentSolution {
                alpha: ids.0,
                beta: ids.1,
            })
        }
    };
    // back-substitution oracle: the solution must restore the identity
    if t_alpha.mul(&solution) != t_beta {
        return Err(RelatorError::BackSubstitutionFailed {
            alpha: ids.0,
            beta: ids.1,
        });
    }
    let mut rules = Vec::with_capacity(16);
    for s1 in 0..4u8 {
        for s2 in 0..4u8 {
            let row = (s1 * 4 + s2) as usize;
            let mut rhs_poly = NcPoly::zero();
            for v1 in 0..4u8 {
                for v2 in 0..4u8 {
                    let col = (v1 * 4 + v2) as usize;
                    rhs_poly.add_term(
                        NcWord::pair(letter(beta, v1), letter(alpha, v2)),
                        solution.get(row, col).clone(),
                    );
                }
            }
            rules.push(((letter(alpha, s1), letter(beta, s2)), rhs_poly));
        }
    }
    Ok(ExchangeDerivation {
        m,
        rules,
        t_alpha,
        t_beta,
        solution,
    })
}

/// Substitute the derived rules into the case identity and check that it
/// collapses to zero in the free algebra. For the polygon-model cases the
/// identity is the conjugated model relation T_alpha X = T_beta.
pub fn backsubstitute_exchange(d: &ExchangeDerivation, alpha: usize, beta: usize) -> bool {
    if matches!(d.m.case.0, 5 | 6 | 7) {
        return d.t_alpha.mul(&d.solution) == d.t_beta;
    }
    let (ea, eb) = if d.m.role_swapped {
        (&d.m.beta, &d.m.alpha)
    } else {
        (&d.m.alpha, &d.m.beta)
    };
    let (lhs, rhs) = case_equation(d.m.case, &ea.n(), &eb.n());
    for i in 0..4 {
        for j in 0..4 {
            let e = lhs.get(i, j).sub(rhs.get(i, j));
            let mut acc = NcPoly::zero();
            for (w, c) in e.terms() {
                if letter_arc(w.0[0]) == alpha {
                    let row = &d.rules[(letter_state(w.0[0]) * 4 + letter_state(w.0[1])) as usize];
                    debug_assert_eq!(row.0, (w.0[0], w.0[1]));
                    acc = acc.add(&row.1.scale(c));
                } else {
                    acc.add_term(w.clone(), c.clone());
                }
            }
            let _ = beta;
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Build the complete rewriting system of a no-relation presentation:
/// 7|G| + 16 |G|(|G|-1)/2 relators with pairwise distinct leading words.
pub fn build_rewrite_system(p: &Presentation) -> Result<RewriteSystem<Laurent>, RelatorError> {
    if !p.relations.is_empty() {
        return Err(RelatorError::HasRelations);
    }
    let mut rules = Vec::new();
    for (rank, g) in p.generators.iter().enumerate() {
        rules.extend(same_generator_relators(g.arc_type(), rank)?);
    }
    for alpha in 0..p.generators.len() {
        for beta in 0..alpha {
            rules.extend(exchange_relators(p, alpha, beta)?.rules);
        }
    }
    Ok(RewriteSystem::from_rules(p.clone(), rules)?)
}

/// C M(w_k) C^-1 M(w_{k-1}) ... C^-1 M(w_1) for a relation word listed
/// left to right as w_k ... w_1. Inverse letters contribute the transposed
/// matrix and must be of type a.
pub fn trivial_loop_matrix(
    p: &Presentation,
    word: &[RelLetter],
) -> Result<Dressed, RelatorError> {
    let mut t = dress_scalar(&c_mat());
    let ci = dress_scalar(&c_inv_mat());
    for (i, l) in word.iter().enumerate() {
        let g = &p.generators[l.gen];
        let ty = g.arc_type();
        let m = crate::presentation::m_matrix(l.gen);
        let factor = if l.inverse {
            if ty != ArcType::A {
                return Err(RelatorError::BadInverseLetter(g.id.clone()));
            }
            m.transpose()
        } else {
            if !matches!(ty, ArcType::A | ArcType::D) {
                return Err(RelatorError::BadLoopLetter(g.id.clone()));
            }
            m
        };
        if i > 0 {
            t = t.mul(&ci);
        }
        t = t.mul(&factor);
    }
    Ok(t)
}

/// Check that a path-composable null-homotopic word satisfies the trivial
/// loop identity: every entry of (trivial_loop_matrix - 1) reduces to zero.
pub fn loop_identity_check(
    rs: &RewriteSystem<Laurent>,
    word: &[RelLetter],
) -> Result<bool, RelatorError> {
    let t = trivial_loop_matrix(rs.presentation(), word)?;
    for i in 0..2 {
        for j in 0..2 {
            let mut e = t.get(i, j).clone();
            if i == j {
                e = e.sub(&NcPoly::one());
            }
            if !rs.normal_form(&e)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Inverse of a letter matrix, linear in the stated generators:
/// M^-1 = C^-1 tM C for a direct type-a letter, (tM)^-1 = C^-1 M C for an
/// inverse one.
fn letter_matrix_inverse(rank: usize, inverse: bool) -> Dressed {
    let c = dress_scalar(&c_mat());
    let ci = dress_scalar(&c_inv_mat());
    let m = crate::presentation::m_matrix(rank);
    if inverse {
        ci.mul(&m).mul(&c)
    } else {
        ci.mul(&m.transpose()).mul(&c)
    }
}

/// Result of eliminating one generator using one relation.
pub struct Elimination {
    /// Presentation without the generator and the used relation; generator
    /// ranks above the removed one shift down by one.
    pub reduced: Presentation,
    /// The removed generator's four stated generators as polynomials over
    /// the reduced alphabet, indexed by state.
    pub substitution: [NcPoly<Laurent>; 4],
    /// Rank the generator had in the original presentation.
    pub removed_rank: usize,
}

/// Express the chosen generator of one relation in terms of the remaining
/// ones and drop it. Every other letter of the relation must be of type a
/// (directly or as an inverse); isolating past a type-d loop is unsupported.
pub fn eliminate_generator(
    p: &Presentation,
    relation: usize,
    gen_id: &str,
) -> Result<Elimination, RelatorError> {
    let rank = p
        .rank_of(gen_id)
        .ok_or_else(|| RelatorError::Internal(format!("unknown generator {}", gen_id)))?;
    let word = p
        .relations
        .get(relation)
        .ok_or_else(|| RelatorError::Internal(format!("no relation {}", relation)))?
        .clone();
    let occurrences: Vec<usize> = word
        .iter()
        .enumerate()
        .filter(|(_, l)| l.gen == rank)
        .map(|(i, _)| i)
        .collect();
    if occurrences.len() != 1 {
        return Err(RelatorError::NotSingleOccurrence(gen_id.to_string()));
    }
    if p.generators.len() == 1 {
        return Err(RelatorError::EmptyGenerators);
    }
    for (ri, rel) in p.relations.iter().enumerate() {
        if ri != relation && rel.iter().any(|l| l.gen == rank) {
            return Err(RelatorError::StillUsed(gen_id.to_string()));
        }
    }
    let m_pos = occurrences[0];
    for (i, l) in word.iter().enumerate() {
        if i == m_pos {
            continue;
        }
        if p.generators[l.gen].arc_type() != ArcType::A {
            return Err(RelatorError::UnsupportedElimination(gen_id.to_string()));
        }
    }
    let c = dress_scalar(&c_mat());
    let ci = dress_scalar(&c_inv_mat());
    // 1 = L M_m R with L = C M_k C^-1 ... M_{m+1} C^-1 and
    // R = C^-1 M_{m-1} ... C^-1 M_1 (word listed w_k ... w_1 left to right,
    // so vector index i corresponds to position k-1-i).
    // L^-1: reversed inverses; R^-1 likewise.
    let mut l_inv = identity2();
    for l in word[..m_pos].iter().rev() {
        // L = ... M_l C^-1, consumed right to left: (C^-1)^-1 = C first
        l_inv = l_inv.mul(&c).mul(&letter_matrix_inverse(l.gen, l.inverse));
    }
    l_inv = l_inv.mul(&ci); // the leading C of the trivial loop product
    let mut r_inv = identity2();
    for l in word[m_pos + 1..].iter().rev() {
        r_inv = r_inv
            .mul(&letter_matrix_inverse(l.gen, l.inverse))
            .mul(&c);
    }
    let mut m_expr = l_inv.mul(&r_inv);
    if word[m_pos].inverse {
        // the isolated matrix was tM(gamma)
        m_expr = m_expr.transpose();
    }
    // re-rank letters: arcs above the removed rank shift down
    let remap = |poly: &NcPoly<Laurent>| -> NcPoly<Laurent> {
        let mut out = NcPoly::zero();
        for (w, cf) in poly.terms() {
            let v: Vec<u16> = w
                .0
                .iter()
                .map(|&l| {
                    let a = letter_arc(l);
                    debug_assert_ne!(a, rank);
                    let na = if a > rank { a - 1 } else { a };
                    letter(na, letter_state(l))
                })
                .collect();
            out.add_term(NcWord(v), cf.clone());
        }
        out
    };
    let substitution = [
        remap(m_expr.get(0, 0)),
        remap(m_expr.get(0, 1)),
        remap(m_expr.get(1, 0)),
        remap(m_expr.get(1, 1)),
    ];
    let mut generators = p.generators.clone();
    generators.remove(rank);
    let mut relations = p.relations.clone();
    relations.remove(relation);
    for rel in &mut relations {
        for l in rel.iter_mut() {
            if l.gen > rank {
                l.gen -= 1;
            }
        }
    }
    let spin = p.spin.as_ref().map(|s| {
        let mut s = s.clone();
        s.remove(rank);
        s
    });
    let reduced = Presentation {
        boundary_arcs: p.boundary_arcs.clone(),
        generators,
        relations,
        spin,
    };
    Ok(Elimination {
        reduced,
        substitution,
        removed_rank: rank,
    })
}

impl Elimination {
    /// Substitute the removed generator's letters into a polynomial over
    /// the original alphabet, yielding a polynomial over the reduced one.
    pub fn substitute(&self, x: &NcPoly<Laurent>) -> NcPoly<Laurent> {
        let rank = self.removed_rank;
        let mut out = NcPoly::zero();
        for (w, c) in x.terms() {
            let mut acc = NcPoly::scalar(c.clone());
            for &l in &w.0 {
                let a = letter_arc(l);
                let factor = if a == rank {
                    self.substitution[letter_state(l) as usize].clone()
                } else {
                    let na = if a > rank { a - 1 } else { a };
                    NcPoly::from_letter(letter(na, letter_state(l)))
                };
                acc = acc.mul_free(&factor);
            }
            out = out.add(&acc);
        }
        out
    }
}

/// Relators of the original system that mention the removed generator,
/// substituted into the reduced alphabet; all of them must reduce to zero
/// in the reduced system.
pub fn elimination_residues(
    p: &Presentation,
    elim: &Elimination,
    reduced_rs: &RewriteSystem<Laurent>,
) -> Result<Vec<NcPoly<Laurent>>, RelatorError> {
    let rank = elim.removed_rank;
    let mut residues = Vec::new();
    let mut push = |poly: NcPoly<Laurent>| {
        residues.push(poly);
    };
    // same-generator relators and the q-det target of the removed arc
    let g = &p.generators[rank];
    for ((a, b), rhs) in same_generator_relators(g.arc_type(), rank)? {
        push(NcPoly::from_word(NcWord::pair(a, b)).sub(&rhs));
    }
    push(qdet_relator(g.arc_type(), rank, &g.id)?);
    // exchange relators with every other generator, in both rank orders
    for other in 0..p.generators.len() {
        if other == rank {
            continue;
        }
        let (alpha, beta) = if rank > other { (rank, other) } else { (other, rank) };
        for ((a, b), rhs) in exchange_relators(p, alpha, beta)?.rules {
            push(NcPoly::from_word(NcWord::pair(a, b)).sub(&rhs));
        }
    }
    let mut out = Vec::new();
    for r in residues {
        out.push(reduced_rs.normal_form(&elim.substitute(&r))?);
    }
    Ok(out)
}

/// Verify one relation of a presentation end to end: eliminate one of its
/// generators, substitute the elimination into the trivial-loop matrix of
/// the word, and check that it reduces to the identity in the reduced
/// system.
pub fn verify_relation_loop(p: &Presentation, relation: usize) -> Result<bool, RelatorError> {
    let word = p
        .relations
        .get(relation)
        .ok_or_else(|| RelatorError::Internal(format!("no relation {}", relation)))?
        .clone();
    let mut last_err = None;
    for l in &word {
        let id = p.generators[l.gen].id.clone();
        match eliminate_generator(p, relation, &id) {
            Ok(elim) => {
                let rs = build_rewrite_system(&elim.reduced)?;
                let t = trivial_loop_matrix(p, &word)?;
                for i in 0..2 {
                    for j in 0..2 {
                        let mut e = elim.substitute(t.get(i, j));
                        if i == j {
                            e = e.sub(&NcPoly::one());
                        }
                        if !rs.normal_form(&e)?.is_zero() {
                            return Ok(false);
                        }
                    }
                }
                return Ok(true);
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| {
        RelatorError::UnsupportedElimination("empty relation".to_string())
    }))
}

/// Named ids of a set: used by validation errors.
pub fn generator_ids(p: &Presentation) -> BTreeSet<String> {
    p.generators.iter().map(|g| g.id.clone()).collect()
}
