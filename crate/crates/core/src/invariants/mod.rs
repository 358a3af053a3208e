//! Formal invariant theory over the boundary variables: admissible
//! monomials in the second-fundamental-form variables `L[a,b]`, the metric
//! 2-jet variables `G[a,b|c,d]`, and a symmetric output pair `E[u,v]`;
//! orthogonal-group actions on them; and the exact computation of the
//! invariant subspace.
//!
//! A monomial is *admissible* in dimension `m` when every index `1..=m`
//! appears exactly twice across all factors, which forces
//! `ord_L + ord_G = m − 1`. Coefficients are exact rationals: the dimension
//! counts are integer claims and floating point would poison the ranks.

mod action;
mod kernel;

pub use action::{
    exchange_check, finite_action, infinitesimal_action, is_invariant, ExchangeError,
    ExchangeReport,
};
pub use kernel::{
    in_span, invariant_subspace, invariant_subspace_direct, q_basis_count, q_polynomial, rank_of,
    InvariantBasis,
};

use num::BigRational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Unordered index pair, stored sorted; indices are 1-based.
pub type Pair = (u8, u8);

fn sorted(p: Pair) -> Pair {
    if p.0 <= p.1 {
        p
    } else {
        (p.1, p.0)
    }
}

/// A formal monomial `L[..] ... G[..|..] ... E[u,v]` in canonical form:
/// each pair sorted, factor lists sorted, the two pair slots of a `G`
/// factor *not* interchangeable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FormalMonomial {
    l: Vec<Pair>,
    g: Vec<(Pair, Pair)>,
    out: Pair,
}

/// Slot address within a monomial, used by the group actions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    L(usize, u8),
    G(usize, u8),
    Out(u8),
}

impl FormalMonomial {
    pub fn new(l: Vec<Pair>, g: Vec<(Pair, Pair)>, out: Pair) -> Self {
        let mut l: Vec<Pair> = l.into_iter().map(sorted).collect();
        l.sort_unstable();
        let mut g: Vec<(Pair, Pair)> = g.into_iter().map(|(p, q)| (sorted(p), sorted(q))).collect();
        g.sort_unstable();
        FormalMonomial {
            l,
            g,
            out: sorted(out),
        }
    }

    pub fn l_factors(&self) -> &[Pair] {
        &self.l
    }

    pub fn g_factors(&self) -> &[(Pair, Pair)] {
        &self.g
    }

    pub fn output(&self) -> Pair {
        self.out
    }

    /// Number of `L` factors.
    pub fn ord_l(&self) -> usize {
        self.l.len()
    }

    /// Jet order contributed by the `G` factors (two per factor).
    pub fn ord_g(&self) -> usize {
        2 * self.g.len()
    }

    pub fn ord(&self) -> usize {
        self.ord_l() + self.ord_g()
    }

    /// Number of times index `w` appears.
    pub fn deg(&self, w: u8) -> usize {
        let pair_deg = |p: &Pair| (p.0 == w) as usize + (p.1 == w) as usize;
        self.l.iter().map(pair_deg).sum::<usize>()
            + self
                .g
                .iter()
                .map(|(p, q)| pair_deg(p) + pair_deg(q))
                .sum::<usize>()
            + pair_deg(&self.out)
    }

    /// Every index `1..=m` appears exactly twice.
    pub fn is_admissible(&self, dim: u8) -> bool {
        (1..=dim).all(|w| self.deg(w) == 2)
    }

    /// The index `w` touches itself: some single pair equals `(w, w)`.
    pub fn touches_self(&self, w: u8) -> bool {
        let ww = (w, w);
        self.l.contains(&ww) || self.g.iter().any(|(p, q)| *p == ww || *q == ww) || self.out == ww
    }

    pub(crate) fn slots(&self) -> Vec<(Slot, u8)> {
        let mut out = Vec::with_capacity(2 * self.l.len() + 4 * self.g.len() + 2);
        for (i, p) in self.l.iter().enumerate() {
            out.push((Slot::L(i, 0), p.0));
            out.push((Slot::L(i, 1), p.1));
        }
        for (i, (p, q)) in self.g.iter().enumerate() {
            out.push((Slot::G(i, 0), p.0));
            out.push((Slot::G(i, 1), p.1));
            out.push((Slot::G(i, 2), q.0));
            out.push((Slot::G(i, 3), q.1));
        }
        out.push((Slot::Out(0), self.out.0));
        out.push((Slot::Out(1), self.out.1));
        out
    }

    pub(crate) fn with_slot(&self, slot: Slot, value: u8) -> FormalMonomial {
        self.with_slots(&[(slot, value)])
    }

    /// Apply several slot substitutions at once. Slot addresses refer to
    /// this monomial's canonical layout; canonicalization happens only
    /// after all substitutions.
    pub(crate) fn with_slots(&self, subs: &[(Slot, u8)]) -> FormalMonomial {
        let mut l = self.l.clone();
        let mut g = self.g.clone();
        let mut out = self.out;
        for (slot, value) in subs {
            let value = *value;
            match *slot {
                Slot::L(i, 0) => l[i].0 = value,
                Slot::L(i, _) => l[i].1 = value,
                Slot::G(i, 0) => g[i].0 .0 = value,
                Slot::G(i, 1) => g[i].0 .1 = value,
                Slot::G(i, 2) => g[i].1 .0 = value,
                Slot::G(i, _) => g[i].1 .1 = value,
                Slot::Out(0) => out.0 = value,
                Slot::Out(_) => out.1 = value,
            }
        }
        FormalMonomial::new(l, g, out)
    }

    /// Relabel indices through a permutation given as `perm[original-1]`.
    pub fn relabel(&self, perm: &[u8]) -> FormalMonomial {
        let map = |p: Pair| (perm[(p.0 - 1) as usize], perm[(p.1 - 1) as usize]);
        FormalMonomial::new(
            self.l.iter().map(|p| map(*p)).collect(),
            self.g.iter().map(|(p, q)| (map(*p), map(*q))).collect(),
            map(self.out),
        )
    }

    pub fn contains_index(&self, w: u8) -> bool {
        self.deg(w) > 0
    }
}

impl fmt::Display for FormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.l {
            write!(f, "L[{},{}]", p.0, p.1)?;
        }
        for (p, q) in &self.g {
            write!(f, "G[{},{}|{},{}]", p.0, p.1, q.0, q.1)?;
        }
        write!(f, "E[{},{}]", self.out.0, self.out.1)
    }
}

/// Linear combination of monomials with exact rational coefficients; zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalPolynomial {
    dim: u8,
    terms: BTreeMap<FormalMonomial, BigRational>,
}

impl FormalPolynomial {
    pub fn zero(dim: u8) -> Self {
        FormalPolynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn add_term(&mut self, mono: FormalMonomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, mono: &FormalMonomial) -> BigRational {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FormalMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &FormalPolynomial) -> FormalPolynomial {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> FormalPolynomial {
        if c.is_zero() {
            return FormalPolynomial::zero(self.dim);
        }
        let mut out = FormalPolynomial::zero(self.dim);
        for (m, v) in self.iter() {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Homogeneous component with `ord_L = k`.
    pub fn component_k(&self, k: usize) -> FormalPolynomial {
        let mut out = FormalPolynomial::zero(self.dim);
        for (m, c) in self.iter() {
            if m.ord_l() == k {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Delete every monomial containing the top index `m`; the result lives
    /// in dimension `m − 1`. For admissible polynomials this realizes the
    /// restriction map, whose kernel contains every admissible monomial.
    pub fn restrict_top(&self) -> FormalPolynomial {
        assert!(self.dim >= 2, "restriction needs dimension >= 2");
        let top = self.dim;
        let mut out = FormalPolynomial::zero(self.dim - 1);
        for (m, c) in self.iter() {
            if !m.contains_index(top) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Clear denominators and divide by the content; flip so the leading
    /// (smallest) monomial has a positive coefficient.
    pub fn normalized(&self) -> FormalPolynomial {
        use num::BigInt;
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for (_, c) in self.iter() {
            lcm = num::integer::lcm(lcm, c.denom().clone());
        }
        let mut gcd = BigInt::zero();
        for (_, c) in self.iter() {
            let scaled = (c * BigRational::from_integer(lcm.clone())).to_integer();
            gcd = num::integer::gcd(gcd, scaled);
        }
        let factor = BigRational::new(lcm, gcd);
        let mut out = self.scale(&factor);
        let flip = {
            let (_, lead) = out.iter().next().unwrap();
            lead.is_negative()
        };
        if flip {
            out = out.scale(&-BigRational::one());
        }
        out
    }
}

impl fmt::Display for FormalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.iter().enumerate() {
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// All canonical admissible monomials in dimension `dim`, in their natural
/// (deterministic) order.
pub fn enumerate_admissible(dim: u8) -> Vec<FormalMonomial> {
    assert!(dim >= 1, "dimension must be at least 1");
    let m = dim as usize;
    let pairs: Vec<Pair> = {
        let mut v = Vec::new();
        for a in 1..=dim {
            for b in a..=dim {
                v.push((a, b));
            }
        }
        v
    };
    let gfactors: Vec<(Pair, Pair)> = {
        let mut v = Vec::new();
        for p in &pairs {
            for q in &pairs {
                v.push((*p, *q));
            }
        }
        v
    };

    let mut results = Vec::new();
    let mut deg = vec![0u8; m + 1];

    fn add_pair(deg: &mut [u8], p: Pair) -> bool {
        deg[p.0 as usize] += 1;
        deg[p.1 as usize] += 1;
        deg[p.0 as usize] <= 2 && deg[p.1 as usize] <= 2
    }
    fn remove_pair(deg: &mut [u8], p: Pair) {
        deg[p.0 as usize] -= 1;
        deg[p.1 as usize] -= 1;
    }

    // choose k L-factors and (m-1-k)/2 G-factors, non-decreasing within
    // each factor list, then read the output pair off the leftover degrees
    #[allow(clippy::too_many_arguments)]
    fn rec_g(
        l: &mut Vec<Pair>,
        g: &mut Vec<(Pair, Pair)>,
        gleft: usize,
        from: usize,
        gfactors: &[(Pair, Pair)],
        deg: &mut [u8],
        dim: u8,
        results: &mut Vec<FormalMonomial>,
    ) {
        if gleft == 0 {
            let mut rem: Vec<u8> = Vec::with_capacity(2);
            for w in 1..=dim {
                for _ in deg[w as usize]..2 {
                    rem.push(w);
                }
            }
            if rem.len() == 2 {
                results.push(FormalMonomial::new(l.clone(), g.clone(), (rem[0], rem[1])));
            }
            return;
        }
        for idx in from..gfactors.len() {
            let (p, q) = gfactors[idx];
            let ok_p = add_pair(deg, p);
            if !ok_p {
                remove_pair(deg, p);
                continue;
            }
            let ok_q = add_pair(deg, q);
            if ok_q {
                g.push((p, q));
                rec_g(l, g, gleft - 1, idx, gfactors, deg, dim, results);
                g.pop();
            }
            remove_pair(deg, q);
            remove_pair(deg, p);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn rec_l(
        l: &mut Vec<Pair>,
        k_left: usize,
        from: usize,
        pairs: &[Pair],
        gcount: usize,
        gfactors: &[(Pair, Pair)],
        deg: &mut [u8],
        dim: u8,
        results: &mut Vec<FormalMonomial>,
    ) {
        if k_left == 0 {
            let mut g = Vec::new();
            rec_g(l, &mut g, gcount, 0, gfactors, deg, dim, results);
            return;
        }
        for idx in from..pairs.len() {
            let p = pairs[idx];
            if add_pair(deg, p) {
                l.push(p);
                rec_l(
                    l,
                    k_left - 1,
                    idx,
                    pairs,
                    gcount,
                    gfactors,
                    deg,
                    dim,
                    results,
                );
                l.pop();
            }
            remove_pair(deg, p);
        }
    }

    let mut k = m - 1;
    loop {
        let gcount = (m - 1 - k) / 2;
        let mut l = Vec::new();
        rec_l(
            &mut l,
            k,
            0,
            &pairs,
            gcount,
            &gfactors,
            &mut deg,
            dim,
            &mut results,
        );
        if k < 2 {
            break;
        }
        k -= 2;
    }
    results.sort_unstable();
    results.dedup();
    results
}
