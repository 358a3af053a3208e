//! Pointwise curvature functionals: the Euler form (Pfaffian), its interior
//! Euler-Lagrange tensor, and the boundary transgression scalar and
//! Euler-Lagrange tensor built from curvature and the second fundamental
//! form.
//!
//! The optimized evaluators enumerate only the distinct index subsets and
//! permutation pairs on which the generalized Kronecker delta is non-zero;
//! summing over all `m^(2n)` raw tuples explodes already at `m = 4, n = 4`.
//! The literal full-tuple evaluators are retained in [`naive`] as the
//! reference oracle for the fast path.

use crate::tensor::{
    generalized_delta, permutation_sign_between, AlgebraicCurvature, SecondFundamentalForm,
    Signature, SymTwoTensor, TensorError,
};
use std::f64::consts::PI;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

/// Γ(a/2) for positive integer `a`, in closed form.
fn gamma_half(a: usize) -> f64 {
    match a {
        0 => panic!("gamma pole"),
        1 => PI.sqrt(),
        2 => 1.0,
        _ => (a as f64 / 2.0 - 1.0) * gamma_half(a - 2),
    }
}

/// Volume of the unit k-sphere, `2 π^{(k+1)/2} / Γ((k+1)/2)`.
pub fn sphere_volume(k: usize) -> f64 {
    let a = k + 1;
    let pi_pow = if a.is_multiple_of(2) {
        PI.powi((a / 2) as i32)
    } else {
        PI.powi((a / 2) as i32) * PI.sqrt()
    };
    2.0 * pi_pow / gamma_half(a)
}

/// Visit every ascending `t`-subset of `0..m`.
fn for_each_subset(m: usize, t: usize, mut f: impl FnMut(&[usize])) {
    if t > m {
        return;
    }
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        f(&idx);
        // next combination
        let mut i = t;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - t {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All permutations of `base` with their signs (Heap's algorithm).
pub(crate) fn signed_permutations(base: &[usize]) -> Vec<(Vec<usize>, f64)> {
    let n = base.len();
    let mut out = Vec::with_capacity((1..=n).product::<usize>().max(1));
    let mut a = base.to_vec();
    let mut c = vec![0usize; n];
    let mut sign = 1.0;
    out.push((a.clone(), sign));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Euler form `E_{m,n}`: the curvature product of `n/2` factors contracted
/// against the generalized Kronecker delta, normalized by `(8π)^{n/2}(n/2)!`.
/// Zero for odd `n` and for `n > m`; the empty contraction at `n = 0` is 1.
pub fn euler_form(r: &AlgebraicCurvature, signs: &Signature, n: usize) -> f64 {
    let m = r.dim();
    assert_eq!(signs.dim(), m, "signature/curvature dimension mismatch");
    if n % 2 == 1 || n > m {
        return 0.0;
    }
    if n == 0 {
        return 1.0;
    }
    let nbar = n / 2;
    let norm = (8.0 * PI).powi(nbar as i32) * factorial(nbar);
    let mut total = 0.0;
    for_each_subset(m, n, |subset| {
        let xi: f64 = subset.iter().map(|&v| signs.xi0(v)).product();
        let perms = signed_permutations(subset);
        let mut sub = 0.0;
        for (ip, is) in &perms {
            for (jp, js) in &perms {
                let mut prod = 1.0;
                for t in 0..nbar {
                    prod *= r.at0(ip[2 * t], ip[2 * t + 1], jp[2 * t + 1], jp[2 * t]);
                    if prod == 0.0 {
                        break;
                    }
                }
                sub += is * js * prod;
            }
        }
        total += xi * sub;
    });
    total / norm
}

/// Interior Euler-Lagrange tensor `𝓔_{m,n,ij}`: the same curvature product
/// contracted against the delta extended by one free index pair. Zero
/// tensor for odd `n`; `n = 0` gives `ξ_i δ_ij`.
pub fn interior_el_tensor(r: &AlgebraicCurvature, signs: &Signature, n: usize) -> SymTwoTensor {
    let m = r.dim();
    assert_eq!(signs.dim(), m, "signature/curvature dimension mismatch");
    if n % 2 == 1 || n + 1 > m {
        return SymTwoTensor::zero(m);
    }
    let nbar = n / 2;
    let norm = (8.0 * PI).powi(nbar as i32) * factorial(nbar);
    let mut raw = vec![0.0; m * m];
    for_each_subset(m, n + 1, |subset| {
        let xi: f64 = subset.iter().map(|&v| signs.xi0(v)).product();
        for (pi, &i) in subset.iter().enumerate() {
            let rest_i: Vec<usize> = subset
                .iter()
                .enumerate()
                .filter(|(t, _)| *t != pi)
                .map(|(_, &v)| v)
                .collect();
            let iperms = signed_permutations(&rest_i);
            for (pj, &j) in subset.iter().enumerate() {
                let rest_j: Vec<usize> = subset
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t != pj)
                    .map(|(_, &v)| v)
                    .collect();
                let jperms = signed_permutations(&rest_j);
                let mut itup = Vec::with_capacity(n + 1);
                let mut jtup = Vec::with_capacity(n + 1);
                for (ip, _is) in &iperms {
                    for (jp, _js) in &jperms {
                        let mut prod = 1.0;
                        for t in 0..nbar {
                            prod *= r.at0(ip[2 * t], ip[2 * t + 1], jp[2 * t + 1], jp[2 * t]);
                            if prod == 0.0 {
                                break;
                            }
                        }
                        if prod == 0.0 {
                            continue;
                        }
                        itup.clear();
                        itup.push(i);
                        itup.extend_from_slice(ip);
                        jtup.clear();
                        jtup.push(j);
                        jtup.extend_from_slice(jp);
                        let eps = permutation_sign_between(&itup, &jtup) * xi;
                        raw[i * m + j] += eps * prod;
                    }
                }
            }
        }
    });
    for v in raw.iter_mut() {
        *v /= norm;
    }
    SymTwoTensor::from_raw_symmetrize(m, &raw)
}

fn nu_range(t: usize, nu: Option<usize>) -> Result<Vec<usize>, TensorError> {
    match nu {
        Some(v) => {
            if 2 * v > t {
                Err(TensorError::Domain(format!(
                    "nu = {v} violates 0 <= 2 nu <= {t}"
                )))
            } else {
                Ok(vec![v])
            }
        }
        None => Ok((0..=t / 2).collect()),
    }
}

fn check_boundary_dims(
    r_tan: &AlgebraicCurvature,
    l: &SecondFundamentalForm,
    signs_tan: &Signature,
    n: usize,
) -> Result<usize, TensorError> {
    let mt = signs_tan.dim();
    if r_tan.dim() != mt || l.boundary_dim() != mt {
        return Err(TensorError::Domain(format!(
            "tangential dimensions disagree: curvature {}, second fundamental form {}, signature {mt}",
            r_tan.dim(),
            l.boundary_dim()
        )));
    }
    if n == 0 {
        return Err(TensorError::Domain(
            "boundary functional needs n >= 1".into(),
        ));
    }
    Ok(mt)
}

/// Boundary transgression scalar `F_{m,n-1,ν}` (or the ν-sum `F_{m,n-1}`
/// when `nu` is `None`): `ν` curvature factors and `n-1-2ν` second
/// fundamental form factors over tangential indices, normalized by
/// `(8π)^ν ν! Vol(S^{n-1-2ν}) (n-1-2ν)!`.
pub fn boundary_transgression(
    r_tan: &AlgebraicCurvature,
    l: &SecondFundamentalForm,
    signs_tan: &Signature,
    n: usize,
    nu: Option<usize>,
) -> Result<f64, TensorError> {
    let mt = check_boundary_dims(r_tan, l, signs_tan, n)?;
    let t = n - 1;
    let mut total = 0.0;
    for nu in nu_range(t, nu)? {
        let lcount = t - 2 * nu;
        let norm =
            (8.0 * PI).powi(nu as i32) * factorial(nu) * sphere_volume(lcount) * factorial(lcount);
        let mut acc = 0.0;
        for_each_subset(mt, t, |subset| {
            let xi: f64 = subset.iter().map(|&v| signs_tan.xi0(v)).product();
            let perms = signed_permutations(subset);
            let mut sub = 0.0;
            for (ap, asn) in &perms {
                for (bp, bsn) in &perms {
                    let mut prod = 1.0;
                    for s in 0..nu {
                        prod *= r_tan.at0(ap[2 * s], ap[2 * s + 1], bp[2 * s + 1], bp[2 * s]);
                        if prod == 0.0 {
                            break;
                        }
                    }
                    if prod != 0.0 {
                        for u in 2 * nu..t {
                            prod *= l.at0(ap[u], bp[u]);
                            if prod == 0.0 {
                                break;
                            }
                        }
                    }
                    sub += asn * bsn * prod;
                }
            }
            acc += xi * sub;
        });
        total += acc / norm;
    }
    Ok(total)
}

/// Boundary Euler-Lagrange tensor `𝓕_{m,n-1,ν,ab}` (or the ν-sum), over
/// tangential indices.
pub fn boundary_el_tensor(
    r_tan: &AlgebraicCurvature,
    l: &SecondFundamentalForm,
    signs_tan: &Signature,
    n: usize,
    nu: Option<usize>,
) -> Result<SymTwoTensor, TensorError> {
    let mt = check_boundary_dims(r_tan, l, signs_tan, n)?;
    let t = n - 1;
    let mut raw = vec![0.0; mt * mt];
    for nu in nu_range(t, nu)? {
        let lcount = t - 2 * nu;
        let norm =
            (8.0 * PI).powi(nu as i32) * factorial(nu) * sphere_volume(lcount) * factorial(lcount);
        for_each_subset(mt, t + 1, |subset| {
            let xi: f64 = subset.iter().map(|&v| signs_tan.xi0(v)).product();
            for (pa, &a) in subset.iter().enumerate() {
                let rest_a: Vec<usize> = subset
                    .iter()
                    .enumerate()
                    .filter(|(u, _)| *u != pa)
                    .map(|(_, &v)| v)
                    .collect();
                let aperms = signed_permutations(&rest_a);
                for (pb, &b) in subset.iter().enumerate() {
                    let rest_b: Vec<usize> = subset
                        .iter()
                        .enumerate()
                        .filter(|(u, _)| *u != pb)
                        .map(|(_, &v)| v)
                        .collect();
                    let bperms = signed_permutations(&rest_b);
                    let mut atup = Vec::with_capacity(t + 1);
                    let mut btup = Vec::with_capacity(t + 1);
                    let mut acc = 0.0;
                    for (ap, _) in &aperms {
                        for (bp, _) in &bperms {
                            let mut prod = 1.0;
                            for s in 0..nu {
                                prod *=
                                    r_tan.at0(ap[2 * s], ap[2 * s + 1], bp[2 * s + 1], bp[2 * s]);
                                if prod == 0.0 {
                                    break;
                                }
                            }
                            if prod != 0.0 {
                                for u in 2 * nu..t {
                                    prod *= l.at0(ap[u], bp[u]);
                                    if prod == 0.0 {
                                        break;
                                    }
                                }
                            }
                            if prod == 0.0 {
                                continue;
                            }
                            atup.clear();
                            atup.push(a);
                            atup.extend_from_slice(ap);
                            btup.clear();
                            btup.push(b);
                            btup.extend_from_slice(bp);
                            acc += permutation_sign_between(&atup, &btup) * prod;
                        }
                    }
                    raw[a * mt + b] += xi * acc / norm;
                }
            }
        });
    }
    Ok(SymTwoTensor::from_raw_symmetrize(mt, &raw))
}

/// Literal full-tuple evaluators: every index tuple in `1..=m` is visited
/// and weighted by [`generalized_delta`]. Only useful as an oracle; the
/// cost is `m^(2n)` delta evaluations.
pub mod naive {
    use super::*;

    fn for_each_tuple(m: usize, len: usize, mut f: impl FnMut(&[usize])) {
        let mut tup = vec![1usize; len];
        if len == 0 {
            f(&tup);
            return;
        }
        loop {
            f(&tup);
            let mut pos = len;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                tup[pos] += 1;
                if tup[pos] <= m {
                    break;
                }
                tup[pos] = 1;
                if pos == 0 {
                    return;
                }
            }
        }
    }

    pub fn euler_form(r: &AlgebraicCurvature, signs: &Signature, n: usize) -> f64 {
        let m = r.dim();
        if n % 2 == 1 {
            return 0.0;
        }
        if n == 0 {
            return 1.0;
        }
        let nbar = n / 2;
        let norm = (8.0 * PI).powi(nbar as i32) * factorial(nbar);
        let mut total = 0.0;
        for_each_tuple(m, n, |itup| {
            for_each_tuple(m, n, |jtup| {
                let eps = generalized_delta(signs, itup, jtup).unwrap();
                if eps == 0.0 {
                    return;
                }
                let mut prod = 1.0;
                for t in 0..nbar {
                    prod *= r.at(itup[2 * t], itup[2 * t + 1], jtup[2 * t + 1], jtup[2 * t]);
                }
                total += eps * prod;
            });
        });
        total / norm
    }

    pub fn interior_el_tensor(r: &AlgebraicCurvature, signs: &Signature, n: usize) -> SymTwoTensor {
        let m = r.dim();
        if n % 2 == 1 {
            return SymTwoTensor::zero(m);
        }
        let nbar = n / 2;
        let norm = (8.0 * PI).powi(nbar as i32) * factorial(nbar);
        let mut raw = vec![0.0; m * m];
        for i in 1..=m {
            for j in 1..=m {
                let mut acc = 0.0;
                for_each_tuple(m, n, |itup| {
                    let mut iext = Vec::with_capacity(n + 1);
                    iext.push(i);
                    iext.extend_from_slice(itup);
                    for_each_tuple(m, n, |jtup| {
                        let mut jext = Vec::with_capacity(n + 1);
                        jext.push(j);
                        jext.extend_from_slice(jtup);
                        let eps = generalized_delta(signs, &iext, &jext).unwrap();
                        if eps == 0.0 {
                            return;
                        }
                        let mut prod = 1.0;
                        for t in 0..nbar {
                            prod *=
                                r.at(itup[2 * t], itup[2 * t + 1], jtup[2 * t + 1], jtup[2 * t]);
                        }
                        acc += eps * prod;
                    });
                });
                raw[(i - 1) * m + (j - 1)] = acc / norm;
            }
        }
        SymTwoTensor::from_raw_symmetrize(m, &raw)
    }

    pub fn boundary_transgression(
        r_tan: &AlgebraicCurvature,
        l: &SecondFundamentalForm,
        signs_tan: &Signature,
        n: usize,
        nu: Option<usize>,
    ) -> Result<f64, TensorError> {
        let mt = check_boundary_dims(r_tan, l, signs_tan, n)?;
        let t = n - 1;
        let mut total = 0.0;
        for nu in nu_range(t, nu)? {
            let lcount = t - 2 * nu;
            let norm = (8.0 * PI).powi(nu as i32)
                * factorial(nu)
                * sphere_volume(lcount)
                * factorial(lcount);
            let mut acc = 0.0;
            for_each_tuple(mt, t, |atup| {
                for_each_tuple(mt, t, |btup| {
                    let eps = generalized_delta(signs_tan, atup, btup).unwrap();
                    if eps == 0.0 {
                        return;
                    }
                    let mut prod = 1.0;
                    for s in 0..nu {
                        prod *=
                            r_tan.at(atup[2 * s], atup[2 * s + 1], btup[2 * s + 1], btup[2 * s]);
                    }
                    for u in 2 * nu..t {
                        prod *= l.at(atup[u], btup[u]);
                    }
                    acc += eps * prod;
                });
            });
            total += acc / norm;
        }
        Ok(total)
    }

    pub fn boundary_el_tensor(
        r_tan: &AlgebraicCurvature,
        l: &SecondFundamentalForm,
        signs_tan: &Signature,
        n: usize,
        nu: Option<usize>,
    ) -> Result<SymTwoTensor, TensorError> {
        let mt = check_boundary_dims(r_tan, l, signs_tan, n)?;
        let t = n - 1;
        let mut raw = vec![0.0; mt * mt];
        for nu in nu_range(t, nu)? {
            let lcount = t - 2 * nu;
            let norm = (8.0 * PI).powi(nu as i32)
                * factorial(nu)
                * sphere_volume(lcount)
                * factorial(lcount);
            for a in 1..=mt {
                for b in 1..=mt {
                    let mut acc = 0.0;
                    for_each_tuple(mt, t, |atup| {
                        let mut aext = Vec::with_capacity(t + 1);
                        aext.push(a);
                        aext.extend_from_slice(atup);
                        for_each_tuple(mt, t, |btup| {
                            let mut bext = Vec::with_capacity(t + 1);
                            bext.push(b);
                            bext.extend_from_slice(btup);
                            let eps = generalized_delta(signs_tan, &aext, &bext).unwrap();
                            if eps == 0.0 {
                                return;
                            }
                            let mut prod = 1.0;
                            for s in 0..nu {
                                prod *= r_tan.at(
                                    atup[2 * s],
                                    atup[2 * s + 1],
                                    btup[2 * s + 1],
                                    btup[2 * s],
                                );
                            }
                            for u in 2 * nu..t {
                                prod *= l.at(atup[u], btup[u]);
                            }
                            acc += eps * prod;
                        });
                    });
                    raw[(a - 1) * mt + (b - 1)] += acc / norm;
                }
            }
        }
        Ok(SymTwoTensor::from_raw_symmetrize(mt, &raw))
    }
}
