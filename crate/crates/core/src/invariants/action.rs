//! Orthogonal-group actions on formal polynomials: the infinitesimal
//! generators (rotation or boost according to the plane's signature), the
//! finite one-parameter action, and the exchange-lemma coefficient check.

use super::{FormalMonomial, FormalPolynomial};
use crate::tensor::Signature;
use num::BigRational;
use num::Zero;
use std::collections::HashMap;
use thiserror::Error;

/// θ-derivative at 0 of the one-parameter subgroup rotating (or boosting)
/// the `(a, b)` plane: every `a` slot is replaced by `b` with weight +1 and
/// every `b` slot by `a` with weight −1 for definite planes (`ξ_a = ξ_b`)
/// or +1 for mixed planes, summed over slots by the product rule.
pub fn infinitesimal_action(
    p: &FormalPolynomial,
    a: u8,
    b: u8,
    signs: &Signature,
) -> FormalPolynomial {
    assert_ne!(a, b, "generator needs two distinct indices");
    let rotation = signs.xi(a as usize) == signs.xi(b as usize);
    let mut out = FormalPolynomial::zero(p.dim());
    for (mono, coeff) in p.iter() {
        for (image, w) in infinitesimal_monomial(mono, a, b, rotation) {
            out.add_term(image, coeff * BigRational::from_integer(w.into()));
        }
    }
    out
}

pub(crate) fn infinitesimal_monomial(
    mono: &FormalMonomial,
    a: u8,
    b: u8,
    rotation: bool,
) -> Vec<(FormalMonomial, i64)> {
    let mut out = Vec::new();
    for (slot, v) in mono.slots() {
        if v == a {
            out.push((mono.with_slot(slot, b), 1));
        } else if v == b {
            out.push((mono.with_slot(slot, a), if rotation { -1 } else { 1 }));
        }
    }
    out
}

/// All generator planes `a < b` annihilate the polynomial.
pub fn is_invariant(p: &FormalPolynomial, signs: &Signature) -> bool {
    let m = p.dim();
    for a in 1..=m {
        for b in a + 1..=m {
            if !infinitesimal_action(p, a, b, signs).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Finite action of the one-parameter subgroup at angle `theta`, expanded
/// multi-linearly over the slots; coefficients become floats.
pub fn finite_action(
    p: &FormalPolynomial,
    a: u8,
    b: u8,
    theta: f64,
    signs: &Signature,
) -> HashMap<FormalMonomial, f64> {
    let rotation = signs.xi(a as usize) == signs.xi(b as usize);
    // replacement table: slot value -> [(weight_keep_a_side, a), (weight, b)]
    let (ca, sa, cb_a, cb_b) = if rotation {
        // a -> cos a + sin b ; b -> -sin a + cos b
        (theta.cos(), theta.sin(), -theta.sin(), theta.cos())
    } else {
        // a -> cosh a + sinh b ; b -> sinh a + cosh b
        (theta.cosh(), theta.sinh(), theta.sinh(), theta.cosh())
    };
    let mut acc: HashMap<FormalMonomial, f64> = HashMap::new();
    for (mono, coeff) in p.iter() {
        let c0 = rational_to_f64(coeff);
        let touched: Vec<(super::Slot, u8)> = mono
            .slots()
            .into_iter()
            .filter(|(_, v)| *v == a || *v == b)
            .collect();
        let branches = 1usize << touched.len();
        let mut subs = Vec::with_capacity(touched.len());
        for mask in 0..branches {
            let mut weight = c0;
            subs.clear();
            for (t, (slot, v)) in touched.iter().enumerate() {
                let pick_b = (mask >> t) & 1 == 1;
                let (w, new_v) = if *v == a {
                    if pick_b {
                        (sa, b)
                    } else {
                        (ca, a)
                    }
                } else if pick_b {
                    (cb_b, b)
                } else {
                    (cb_a, a)
                };
                weight *= w;
                subs.push((*slot, new_v));
            }
            if weight != 0.0 {
                *acc.entry(mono.with_slots(&subs)).or_insert(0.0) += weight;
            }
        }
    }
    acc.retain(|_, w| w.abs() > 0.0);
    acc
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Error)]
pub enum ExchangeError {
    #[error("polynomial is not invariant under the (a={a}, b={b}) generator")]
    NotInvariant { a: u8, b: u8 },
    #[error("indices must be distinct and within 1..={dim}")]
    BadIndices { dim: u8 },
}

/// One exchange-lemma triple: the near-admissible monomial `C`
/// (`deg_a = 3`, `deg_b = 1`, `a` touching itself) and the two admissible
/// monomials obtained by replacing one `a` with `b` inside and outside the
/// self-touching pair.
#[derive(Debug, Clone)]
pub struct ExchangeTriple {
    pub c: FormalMonomial,
    pub a_mono: FormalMonomial,
    pub b_mono: FormalMonomial,
}

#[derive(Debug, Clone)]
pub struct ExchangeReport {
    pub a: u8,
    pub b: u8,
    pub triples_checked: usize,
    pub violations: Vec<ExchangeTriple>,
}

impl ExchangeReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the exchange property on an invariant polynomial: for every
/// applicable triple `(C, A, B)`, the coefficient of `A` in `P` is non-zero
/// exactly when the coefficient of `B` is.
pub fn exchange_check(
    p: &FormalPolynomial,
    a: u8,
    b: u8,
    signs: &Signature,
) -> Result<ExchangeReport, ExchangeError> {
    let dim = p.dim();
    if a == b || a < 1 || b < 1 || a > dim || b > dim {
        return Err(ExchangeError::BadIndices { dim });
    }
    if !infinitesimal_action(p, a, b, signs).is_zero() {
        return Err(ExchangeError::NotInvariant { a, b });
    }

    // enumerate the C monomials: change one b slot of an admissible
    // monomial into a; keep those where a touches itself
    let mut cs = std::collections::BTreeSet::new();
    for mono in super::enumerate_admissible(dim) {
        for (slot, v) in mono.slots() {
            if v == b {
                let c = mono.with_slot(slot, a);
                if c.touches_self(a) {
                    cs.insert(c);
                }
            }
        }
    }

    let mut report = ExchangeReport {
        a,
        b,
        triples_checked: 0,
        violations: Vec::new(),
    };
    for c in cs {
        // the three a-slots split into the self-touching pair (two slots
        // giving the same replacement) and one external slot
        let mut images = std::collections::BTreeSet::new();
        for (slot, v) in c.slots() {
            if v == a {
                images.insert(c.with_slot(slot, b));
            }
        }
        let images: Vec<FormalMonomial> = images.into_iter().collect();
        debug_assert_eq!(
            images.len(),
            2,
            "C must yield exactly two admissible monomials"
        );
        if images.len() != 2 {
            continue;
        }
        let (am, bm) = (images[0].clone(), images[1].clone());
        report.triples_checked += 1;
        let ca = !p.coeff(&am).is_zero();
        let cb = !p.coeff(&bm).is_zero();
        if ca != cb {
            report.violations.push(ExchangeTriple {
                c,
                a_mono: am,
                b_mono: bm,
            });
        }
    }
    Ok(report)
}
