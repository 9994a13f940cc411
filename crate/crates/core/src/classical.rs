//! Spin functions, the U-generator change of variables, specialization of
//! the coefficient ring at a numeric w, and evaluation at SL2 points of the
//! relative character variety.
//!
//! U(alpha) = (-1)^w(alpha) w C^-1 M(alpha) for type a and
//! (-1)^w(alpha) C^-1 M(alpha) for type d. At w = 1 the relators written in
//! U-entries present the algebra of regular functions of SL2^G, so every
//! relator vanishes under U(alpha) -> g_alpha for any SL2 matrices g.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::mat::{c_inv_mat, c_mat, Mat};
use crate::presentation::{ArcType, Presentation};
use crate::rewrite::{letter, letter_arc, letter_state, NcPoly, RewriteError, RewriteSystem};
use crate::ring::{Laurent, RingError};

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("spin function violates the parity condition on relation {0}")]
    BadSpin(usize),
    #[error("generator {0} has type {1}; U-generators need type a or d")]
    UnsupportedType(String, char),
    #[error("point for generator {0} has determinant {1}, expected 1")]
    NotSL2(String, BigRational),
    #[error("no point supplied for generator {0}")]
    MissingPoint(String),
}

/// Z/2 weight per generator rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinFunction(pub Vec<u8>);

impl SpinFunction {
    pub fn zero(p: &Presentation) -> Self {
        SpinFunction(vec![0; p.generators.len()])
    }

    pub fn weight(&self, rank: usize) -> u8 {
        self.0[rank] % 2
    }
}

/// Every relation word must have odd total weight.
pub fn validate_spin(p: &Presentation, w: &SpinFunction) -> Result<(), ClassicalError> {
    for (i, rel) in p.relations.iter().enumerate() {
        let parity: u8 = rel.iter().map(|l| w.weight(l.gen)).fold(0, |a, b| (a + b) % 2);
        if parity != 1 {
            return Err(ClassicalError::BadSpin(i));
        }
    }
    Ok(())
}

/// The change of variables between the stated generators m_{ij} and the
/// U-generators, as 4x4 Laurent matrices on the state basis (pp, pm, mp, mm).
pub struct UTransport {
    /// u = u_from_m * m, per rank.
    pub u_from_m: Vec<Mat<Laurent>>,
    /// m = m_from_u * u, per rank.
    pub m_from_u: Vec<Mat<Laurent>>,
}

fn state_basis_left_mul(s2x2: &Mat<Laurent>, scale: &Laurent) -> Mat<Laurent> {
    // (S M)_{ij} = sum_k S^i_k m_{kj}: on states, (2i+j) row gets S^i_k at
    // column (2k+j)
    let mut out = Mat::zero(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out.set(2 * i + j, 2 * k + j, s2x2.get(i, k) * scale);
            }
        }
    }
    out
}

pub fn u_transport(p: &Presentation, w: &SpinFunction) -> Result<UTransport, ClassicalError> {
    let mut u_from_m = Vec::new();
    let mut m_from_u = Vec::new();
    for (rank, g) in p.generators.iter().enumerate() {
        let (omega_exp, ty) = match g.arc_type() {
            ArcType::A => (1, ArcType::A),
            ArcType::D => (0, ArcType::D),
            other => {
                return Err(ClassicalError::UnsupportedType(
                    g.id.clone(),
                    other.letter(),
                ))
            }
        };
        let _ = ty;
        let sign = if w.weight(rank) == 1 {
            -&Laurent::one()
        } else {
            Laurent::one()
        };
        let fwd = &sign * &Laurent::omega(omega_exp);
        let bwd = &sign * &Laurent::omega(-omega_exp);
        u_from_m.push(state_basis_left_mul(&c_inv_mat(), &fwd));
        m_from_u.push(state_basis_left_mul(&c_mat(), &bwd));
    }
    Ok(UTransport { u_from_m, m_from_u })
}

/// Substitute each letter by the linear form given by its rank's table.
pub fn substitute_linear(x: &NcPoly<Laurent>, tables: &[Mat<Laurent>]) -> NcPoly<Laurent> {
    let mut out = NcPoly::zero();
    for (word, c) in x.terms() {
        let mut acc = NcPoly::scalar(c.clone());
        for &l in &word.0 {
            let arc = letter_arc(l);
            let s = letter_state(l) as usize;
            let mut lin = NcPoly::zero();
            for t in 0..4usize {
                lin.add_term(
                    crate::rewrite::NcWord::single(letter(arc, t as u8)),
                    tables[arc].get(s, t).clone(),
                );
            }
            acc = acc.mul_free(&lin);
        }
        out = out.add(&acc);
    }
    out
}

/// All relators of the presentation written in U-entries (letters are then
/// read as U(alpha)_{ij}), together with the q-determinant targets.
pub fn u_relators(
    rs: &RewriteSystem<Laurent>,
    w: &SpinFunction,
) -> Result<Vec<NcPoly<Laurent>>, ClassicalError> {
    let p = rs.presentation();
    let t = u_transport(p, w)?;
    let mut out = Vec::new();
    for poly in rs.relator_polys() {
        out.push(substitute_linear(&poly, &t.m_from_u));
    }
    for (rank, g) in p.generators.iter().enumerate() {
        let det = u_qdet_target(g.arc_type(), rank, &g.id)?;
        out.push(det);
    }
    Ok(out)
}

/// det_q(U) - 1 (type a) or det_{q^2}(U) - 1 (type d) in U-letters.
pub fn u_qdet_target(
    ty: ArcType,
    rank: usize,
    id: &str,
) -> Result<NcPoly<Laurent>, ClassicalError> {
    use crate::rewrite::NcWord;
    let w = |s: u8, t: u8, c: Laurent| NcPoly::from_term(NcWord::pair(letter(rank, s), letter(rank, t)), c);
    let p = match ty {
        ArcType::A => w(0, 3, Laurent::one())
            .add(&w(1, 2, -&Laurent::q_pow(-1)))
            .sub(&NcPoly::one()),
        ArcType::D => w(0, 3, Laurent::one())
            .add(&w(1, 2, -&Laurent::q_pow(-2)))
            .sub(&NcPoly::one()),
        other => return Err(ClassicalError::UnsupportedType(id.to_string(), other.letter())),
    };
    Ok(p)
}

/// Coefficient specialization of a whole rewrite system at a nonzero
/// rational w.
pub fn specialize_system(
    rs: &RewriteSystem<Laurent>,
    omega0: &BigRational,
) -> Result<RewriteSystem<BigRational>, ClassicalError> {
    let mut rules = Vec::new();
    for (&(a, b), rhs) in rs.rules() {
        let mut poly = NcPoly::zero();
        for (w, c) in rhs.terms() {
            poly.add_term(w.clone(), c.evaluate(omega0)?);
        }
        rules.push(((a, b), poly));
    }
    Ok(RewriteSystem::from_rules(rs.presentation().clone(), rules)?.with_guard(rs.guard()))
}

pub fn specialize_poly(
    x: &NcPoly<Laurent>,
    omega0: &BigRational,
) -> Result<NcPoly<BigRational>, ClassicalError> {
    let mut out = NcPoly::zero();
    for (w, c) in x.terms() {
        out.add_term(w.clone(), c.evaluate(omega0)?);
    }
    Ok(out)
}

/// A point of the representation variety: one SL2(Q) matrix per generator.
#[derive(Debug, Clone)]
pub struct Sl2Point(pub Vec<[[BigRational; 2]; 2]>);

impl Sl2Point {
    pub fn identity(n: usize) -> Self {
        let one = BigRational::one;
        let zero = BigRational::zero;
        Sl2Point(vec![[[one(), zero()], [zero(), one()]]; n])
    }

    pub fn validate(&self, p: &Presentation) -> Result<(), ClassicalError> {
        if self.0.len() < p.generators.len() {
            return Err(ClassicalError::MissingPoint(
                p.generators[self.0.len()].id.clone(),
            ));
        }
        for (g, m) in p.generators.iter().zip(&self.0) {
            let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
            if !det.is_one() {
                return Err(ClassicalError::NotSL2(g.id.clone(), det));
            }
        }
        Ok(())
    }
}

/// Evaluate a polynomial in U-letters at an SL2 point: U(alpha)_{ij} is
/// read off the point matrix of alpha.
pub fn evaluate_at_point(
    x: &NcPoly<BigRational>,
    p: &Presentation,
    pt: &Sl2Point,
) -> Result<BigRational, ClassicalError> {
    pt.validate(p)?;
    let mut acc = BigRational::zero();
    for (w, c) in x.terms() {
        let mut prod = c.clone();
        for &l in &w.0 {
            let s = letter_state(l);
            let (i, j) = ((s >> 1) as usize, (s & 1) as usize);
            prod *= &pt.0[letter_arc(l)][i][j];
        }
        acc += prod;
    }
    Ok(acc)
}

fn xorshift(state: &mut u64) -> u64 {
    let mut x = *state;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    *state = x;
    x
}

/// Deterministic pseudo-random SL2(Q) points: products of elementary shear
/// matrices with small integer entries, so determinants are exactly 1.
pub fn random_points(p: &Presentation, seed: u64, count: usize) -> Vec<Sl2Point> {
    let mut state = seed | 1;
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let mut mats = Vec::with_capacity(p.generators.len());
        for _ in 0..p.generators.len() {
            let mut m = [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
            let factors = 3 + (xorshift(&mut state) % 4) as usize;
            for _ in 0..factors {
                let n = BigInt::from((xorshift(&mut state) % 7) as i64 - 3);
                let upper = xorshift(&mut state) & 1 == 0;
                let s = if upper {
                    [[BigInt::one(), n], [BigInt::zero(), BigInt::one()]]
                } else {
                    [[BigInt::one(), BigInt::zero()], [n, BigInt::one()]]
                };
                let mut out = [
                    [BigInt::zero(), BigInt::zero()],
                    [BigInt::zero(), BigInt::zero()],
                ];
                for i in 0..2 {
                    for j in 0..2 {
                        out[i][j] = &m[i][0] * &s[0][j] + &m[i][1] * &s[1][j];
                    }
                }
                m = out;
            }
            mats.push([
                [
                    BigRational::from(m[0][0].clone()),
                    BigRational::from(m[0][1].clone()),
                ],
                [
                    BigRational::from(m[1][0].clone()),
                    BigRational::from(m[1][1].clone()),
                ],
            ]);
        }
        points.push(Sl2Point(mats));
    }
    points
}
