//! Exact computation of the orthogonally invariant admissible polynomials.
//!
//! The kernel of the stacked infinitesimal generators is computed in two
//! stages. Plane rotations at angle π/2 act on admissible monomials as
//! plain index transpositions (every index has degree two, so the sign
//! factors cancel), hence every invariant polynomial is constant on the
//! orbits of the index permutations preserving the sign classes. The
//! computation therefore restricts to orbit-sum coordinates, where one
//! generator per conjugacy class suffices; the resulting basis is then
//! certified against every generator exactly. The small-dimension direct
//! elimination over raw monomial coordinates is kept as a cross-check.

use super::action::{infinitesimal_monomial, is_invariant};
use super::{enumerate_admissible, FormalMonomial, FormalPolynomial};
use crate::tensor::{Signature, TensorError};
use num::BigRational;
use num::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap, HashSet};

/// Basis of the invariant subspace with the sizes of the spaces involved.
#[derive(Debug, Clone)]
pub struct InvariantBasis {
    pub dim: u8,
    pub basis: Vec<FormalPolynomial>,
    pub monomial_count: usize,
    pub orbit_count: usize,
}

impl InvariantBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Sign classes (1-based index lists) of the signature, timelike first.
fn sign_classes(signs: &Signature) -> Vec<Vec<u8>> {
    let mut neg = Vec::new();
    let mut pos = Vec::new();
    for i in 1..=signs.dim() {
        if signs.xi(i) < 0.0 {
            neg.push(i as u8);
        } else {
            pos.push(i as u8);
        }
    }
    let mut out = Vec::new();
    if !neg.is_empty() {
        out.push(neg);
    }
    if !pos.is_empty() {
        out.push(pos);
    }
    out
}

/// One generator per conjugacy class under the class-preserving
/// permutations: a rotation inside each sign class, plus one boost when
/// both classes are present.
fn generator_planes(signs: &Signature) -> Vec<(u8, u8)> {
    let classes = sign_classes(signs);
    let mut gens = Vec::new();
    for c in &classes {
        if c.len() >= 2 {
            gens.push((c[0], c[1]));
        }
    }
    if classes.len() == 2 {
        gens.push((classes[0][0], classes[1][0]));
    }
    gens
}

type SparseRow = Vec<(u32, BigRational)>;

/// Forward sparse Gaussian eliminator over the rationals.
struct Echelon {
    pivots: BTreeMap<u32, SparseRow>,
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            pivots: BTreeMap::new(),
        }
    }

    fn reduce(&self, row: &mut SparseRow) {
        loop {
            let Some((c, coef)) = row.first().map(|(c, v)| (*c, v.clone())) else {
                return;
            };
            let Some(piv) = self.pivots.get(&c) else {
                return;
            };
            *row = row_sub_scaled(row, piv, &coef);
        }
    }

    /// Insert a row; returns true when it increased the rank.
    fn insert(&mut self, mut row: SparseRow) -> bool {
        self.reduce(&mut row);
        let Some((c, lead)) = row.first().map(|(c, v)| (*c, v.clone())) else {
            return false;
        };
        let inv = BigRational::one() / lead;
        for (_, v) in row.iter_mut() {
            *v = &*v * &inv;
        }
        self.pivots.insert(c, row);
        true
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Back-substitute to reduced row echelon form.
    fn back_substitute(&mut self) {
        let cols: Vec<u32> = self.pivots.keys().copied().collect();
        for (i, c) in cols.iter().enumerate().rev() {
            let row = self.pivots[c].clone();
            for cc in &cols[..i] {
                let target = self.pivots.get_mut(cc).unwrap();
                if let Some(pos) = target.iter().position(|(col, _)| col == c) {
                    let f = target[pos].1.clone();
                    *target = row_sub_scaled(target, &row, &f);
                }
            }
        }
    }

    /// Kernel basis over `ncols` coordinates (requires rref).
    fn kernel(&self, ncols: u32) -> Vec<Vec<(u32, BigRational)>> {
        let mut out = Vec::new();
        for f in 0..ncols {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let mut v: Vec<(u32, BigRational)> = vec![(f, BigRational::one())];
            for (c, row) in &self.pivots {
                if let Some((_, coef)) = row.iter().find(|(col, _)| *col == f) {
                    v.push((*c, -coef.clone()));
                }
            }
            v.sort_by_key(|(c, _)| *c);
            out.push(v);
        }
        out
    }
}

fn row_sub_scaled(a: &SparseRow, b: &SparseRow, f: &BigRational) -> SparseRow {
    // a − f·b, both sorted by column
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = -(f * &b[j].1);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize_int_row(mut row: Vec<(u32, i64)>) -> Vec<(u32, i64)> {
    row.retain(|(_, v)| *v != 0);
    row.sort_by_key(|(c, _)| *c);
    if row.is_empty() {
        return row;
    }
    let mut g: i64 = 0;
    for (_, v) in &row {
        g = num::integer::gcd(g, v.abs());
    }
    let sign = if row[0].1 < 0 { -1 } else { 1 };
    for (_, v) in row.iter_mut() {
        *v = *v / g * sign;
    }
    row
}

/// Exact basis of the invariant subspace: kernel of the stacked
/// infinitesimal generator operators over all planes, computed on the
/// permutation-orbit coordinates and certified against every generator.
pub fn invariant_subspace(dim: u8, signs: &Signature) -> InvariantBasis {
    assert_eq!(signs.dim(), dim as usize, "signature dimension mismatch");
    let mons = enumerate_admissible(dim);
    let n = mons.len();
    let index: HashMap<&FormalMonomial, u32> = mons
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i as u32))
        .collect();

    // orbits under class-preserving permutations, via adjacent transpositions
    let mut uf = UnionFind::new(n);
    let classes = sign_classes(signs);
    let mut transpositions: Vec<Vec<u8>> = Vec::new();
    for class in &classes {
        for w in class.windows(2) {
            let mut perm: Vec<u8> = (1..=dim).collect();
            perm[(w[0] - 1) as usize] = w[1];
            perm[(w[1] - 1) as usize] = w[0];
            transpositions.push(perm);
        }
    }
    for (i, mono) in mons.iter().enumerate() {
        for perm in &transpositions {
            let image = mono.relabel(perm);
            let j = index[&image];
            uf.union(i as u32, j);
        }
    }
    let mut orbit_id: Vec<u32> = vec![u32::MAX; n];
    let mut orbit_members: Vec<Vec<u32>> = Vec::new();
    for i in 0..n {
        let root = uf.find(i as u32) as usize;
        if orbit_id[root] == u32::MAX {
            orbit_id[root] = orbit_members.len() as u32;
            orbit_members.push(Vec::new());
        }
        orbit_id[i] = orbit_id[root];
        orbit_members[orbit_id[i] as usize].push(i as u32);
    }
    let norb = orbit_members.len();

    let gens = generator_planes(signs);
    let mut kernel_vectors: Vec<Vec<(u32, BigRational)>> = Vec::new();
    if gens.is_empty() {
        // trivial group: the whole orbit space is invariant
        for o in 0..norb as u32 {
            kernel_vectors.push(vec![(o, BigRational::one())]);
        }
    } else {
        // constraint rows, indexed by (generator, image monomial)
        let mut rows: BTreeMap<(usize, FormalMonomial), HashMap<u32, i64>> = BTreeMap::new();
        for (i, mono) in mons.iter().enumerate() {
            let col = orbit_id[i];
            for (gi, (a, b)) in gens.iter().enumerate() {
                let rotation = signs.xi(*a as usize) == signs.xi(*b as usize);
                for (image, w) in infinitesimal_monomial(mono, *a, *b, rotation) {
                    *rows.entry((gi, image)).or_default().entry(col).or_insert(0) += w;
                }
            }
        }
        let mut seen: HashSet<Vec<(u32, i64)>> = HashSet::new();
        let mut echelon = Echelon::new();
        for (_, cols) in rows {
            let row = normalize_int_row(cols.into_iter().collect());
            if row.is_empty() || !seen.insert(row.clone()) {
                continue;
            }
            let rat: SparseRow = row
                .into_iter()
                .map(|(c, v)| (c, BigRational::from_integer(v.into())))
                .collect();
            echelon.insert(rat);
            if echelon.rank() == norb {
                break;
            }
        }
        echelon.back_substitute();
        kernel_vectors = echelon.kernel(norb as u32);
    }

    let mut basis: Vec<FormalPolynomial> = kernel_vectors
        .into_iter()
        .map(|vec| {
            let mut p = FormalPolynomial::zero(dim);
            for (o, coef) in vec {
                for &mi in &orbit_members[o as usize] {
                    p.add_term(mons[mi as usize].clone(), coef.clone());
                }
            }
            p.normalized()
        })
        .collect();
    basis.sort_by(|a, b| {
        let la = a.iter().next().map(|(m, _)| m.clone());
        let lb = b.iter().next().map(|(m, _)| m.clone());
        la.cmp(&lb)
    });

    // certificate: every basis vector is annihilated by every generator plane
    for p in &basis {
        assert!(is_invariant(p, signs), "kernel certification failed");
    }

    InvariantBasis {
        dim,
        basis,
        monomial_count: n,
        orbit_count: norb,
    }
}

/// Direct elimination over raw monomial coordinates with every generator
/// plane stacked; exponential in practice past dimension 5, kept as the
/// small-dimension oracle for the orbit-reduced path.
pub fn invariant_subspace_direct(dim: u8, signs: &Signature) -> InvariantBasis {
    assert_eq!(signs.dim(), dim as usize);
    let mons = enumerate_admissible(dim);
    let n = mons.len();
    let mut rows: BTreeMap<((u8, u8), FormalMonomial), HashMap<u32, i64>> = BTreeMap::new();
    for (i, mono) in mons.iter().enumerate() {
        for a in 1..=dim {
            for b in a + 1..=dim {
                let rotation = signs.xi(a as usize) == signs.xi(b as usize);
                for (image, w) in infinitesimal_monomial(mono, a, b, rotation) {
                    *rows
                        .entry(((a, b), image))
                        .or_default()
                        .entry(i as u32)
                        .or_insert(0) += w;
                }
            }
        }
    }
    let mut echelon = Echelon::new();
    let mut seen: HashSet<Vec<(u32, i64)>> = HashSet::new();
    for (_, cols) in rows {
        let row = normalize_int_row(cols.into_iter().collect());
        if row.is_empty() || !seen.insert(row.clone()) {
            continue;
        }
        let rat: SparseRow = row
            .into_iter()
            .map(|(c, v)| (c, BigRational::from_integer(v.into())))
            .collect();
        echelon.insert(rat);
    }
    echelon.back_substitute();
    let mut basis: Vec<FormalPolynomial> = echelon
        .kernel(n as u32)
        .into_iter()
        .map(|vec| {
            let mut p = FormalPolynomial::zero(dim);
            for (c, coef) in vec {
                p.add_term(mons[c as usize].clone(), coef);
            }
            p.normalized()
        })
        .collect();
    basis.sort_by(|a, b| {
        let la = a.iter().next().map(|(m, _)| m.clone());
        let lb = b.iter().next().map(|(m, _)| m.clone());
        la.cmp(&lb)
    });
    InvariantBasis {
        dim,
        basis,
        monomial_count: n,
        orbit_count: n,
    }
}

/// The determinant-contraction polynomial with `k` second-fundamental-form
/// factors: all positional pairings of two index tuples against the
/// generalized Kronecker delta, expanded into canonical monomials.
pub fn q_polynomial(dim: u8, k: usize, signs: &Signature) -> Result<FormalPolynomial, TensorError> {
    assert_eq!(signs.dim(), dim as usize);
    let m = dim as usize;
    if k > m - 1 || !(m - 1 - k).is_multiple_of(2) {
        return Err(TensorError::Domain(format!(
            "k = {k} must satisfy 0 <= k <= {} with k congruent to {} mod 2",
            m - 1,
            (m - 1) % 2
        )));
    }
    let ell = (m - 1 - k) / 2;
    let xi_all: f64 = (1..=m).map(|i| signs.xi(i)).product();
    let base: Vec<usize> = (0..m).collect();
    let perms = crate::functionals::signed_permutations(&base);
    let mut p = FormalPolynomial::zero(dim);
    for (ap, asn) in &perms {
        for (bp, bsn) in &perms {
            let l: Vec<(u8, u8)> = (0..k).map(|i| (ap[i] as u8 + 1, bp[i] as u8 + 1)).collect();
            let g: Vec<((u8, u8), (u8, u8))> = (0..ell)
                .map(|e| {
                    let i = k + 2 * e;
                    (
                        (ap[i] as u8 + 1, bp[i] as u8 + 1),
                        (ap[i + 1] as u8 + 1, bp[i + 1] as u8 + 1),
                    )
                })
                .collect();
            let out = (ap[m - 1] as u8 + 1, bp[m - 1] as u8 + 1);
            let coef = asn * bsn * xi_all;
            p.add_term(
                FormalMonomial::new(l, g, out),
                BigRational::from_integer((coef as i64).into()),
            );
        }
    }
    Ok(p)
}

/// Exact membership of `p` in the rational span of `basis`.
pub fn in_span(basis: &[FormalPolynomial], p: &FormalPolynomial) -> bool {
    // column space over the union of supports
    let mut cols: BTreeMap<FormalMonomial, u32> = BTreeMap::new();
    for q in basis.iter().chain(std::iter::once(p)) {
        for (m, _) in q.iter() {
            let next = cols.len() as u32;
            cols.entry(m.clone()).or_insert(next);
        }
    }
    let to_row = |q: &FormalPolynomial| -> SparseRow {
        let mut row: SparseRow = q.iter().map(|(m, c)| (cols[m], c.clone())).collect();
        row.sort_by_key(|(c, _)| *c);
        row
    };
    let mut ech = Echelon::new();
    for q in basis {
        ech.insert(to_row(q));
    }
    let mut row = to_row(p);
    ech.reduce(&mut row);
    row.is_empty()
}

/// Exact rank of a set of polynomials.
pub fn rank_of(polys: &[FormalPolynomial]) -> usize {
    let mut cols: BTreeMap<FormalMonomial, u32> = BTreeMap::new();
    for q in polys {
        for (m, _) in q.iter() {
            let next = cols.len() as u32;
            cols.entry(m.clone()).or_insert(next);
        }
    }
    let mut ech = Echelon::new();
    for q in polys {
        let mut row: SparseRow = q.iter().map(|(m, c)| (cols[m], c.clone())).collect();
        row.sort_by_key(|(c, _)| *c);
        ech.insert(row);
    }
    ech.rank()
}

/// Count of admissible `k` values, `#{k : 0 ≤ k ≤ m−1, k ≡ m−1 (mod 2)}`.
pub fn q_basis_count(dim: u8) -> usize {
    (0..=dim as usize - 1)
        .filter(|k| k % 2 == (dim as usize - 1) % 2)
        .count()
}
