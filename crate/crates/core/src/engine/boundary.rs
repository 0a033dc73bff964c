//! The boundary set `E(a) = {m >= 1 : m_n <= a_n for some n}` split into
//! strata: for each nonempty proper `I`, the coordinates in `I` run over
//! `m_i >= a_i + 1` while those outside are pinned to `b_j in 1..=a_j`; the
//! stratum with every coordinate pinned is a finite set of points.

use alloc::vec::Vec;

use num_traits::Zero;

use super::ZetaInstance;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::scalar::Scalar;
use crate::twist::mu_power;

#[derive(Clone, Debug)]
pub enum BoundaryPiece {
    /// `prefactor * Z(Q^{a,I,b}; P^{a,I,b}; (mu_i)_{i in I})`. The
    /// prefactor is `mu^{m0}` with `m0_i = a_i` on `I` and `b_j` off it, so
    /// that `mu^m = prefactor * mu_I^d` for `m_I = a_I + d`.
    Restricted { free: Vec<usize>, fixed: Vec<u32>, sub: ZetaInstance, prefactor: Scalar },
    /// A single lattice point `b` with every `b_n in 1..=a_n`.
    Point { point: Vec<u32> },
}

/// All points of `prod_j 1..=bounds_j` in lexicographic order.
pub(crate) fn lattice_box(bounds: &[u32]) -> Vec<Vec<u32>> {
    if bounds.contains(&0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<u32> = bounds.iter().map(|_| 1).collect();
    loop {
        out.push(cur.clone());
        let mut i = bounds.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 1;
        }
    }
}

/// Index sets `(free, complement)` with `1 <= #free <= N - 1`, by bitmask.
pub(crate) fn proper_subsets(n: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    (1u32..(1 << n) - 1).map(move |mask| {
        let free = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let complement = (0..n).filter(|i| mask & (1 << i) == 0).collect();
        (free, complement)
    })
}

pub fn boundary_decompose(inst: &ZetaInstance, a: &[u32]) -> Result<Vec<BoundaryPiece>> {
    let n = inst.nvars();
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.len() });
    }
    let mut pieces = Vec::new();
    for (free, complement) in proper_subsets(n) {
        let bounds: Vec<u32> = complement.iter().map(|&j| a[j]).collect();
        for fixed in lattice_box(&bounds) {
            let q = inst.q().restrict(a, &free, &fixed)?;
            let mut ps = Vec::with_capacity(inst.nfactors());
            for (t, p) in inst.ps().iter().enumerate() {
                let r = p.restrict(a, &free, &fixed)?;
                if r.is_zero() {
                    return Err(Error::FactorVanishes { factor: t });
                }
                ps.push(r);
            }
            let mut m0 = a.to_vec();
            for (&j, &b) in complement.iter().zip(&fixed) {
                m0[j] = b;
            }
            let prefactor = mu_power(inst.mus(), &m0)?;
            let sub = ZetaInstance::new(q, ps, inst.mus().select(&free))?;
            pieces.push(BoundaryPiece::Restricted { free: free.clone(), fixed, sub, prefactor });
        }
    }
    for point in lattice_box(a) {
        pieces.push(BoundaryPiece::Point { point });
    }
    Ok(pieces)
}

/// `mu^m Q(m) prod_t P_t(m)^{k_t}` at one lattice point.
pub fn summand(inst: &ZetaInstance, k: &[u32], m: &[u32]) -> Result<Scalar> {
    let mut v = inst.q().eval_at(m)?;
    for (p, &kt) in inst.ps().iter().zip(k) {
        if kt > 0 {
            v *= rational::pow(&p.eval_at(m)?, kt);
        }
    }
    Ok(mu_power(inst.mus(), m)?.scale(&v))
}

/// Finite sum of the series terms over `m in [1, M]^N` with `m >= lower`.
pub fn box_sum(inst: &ZetaInstance, k: &[u32], lower: &[u32], m_max: u32) -> Result<Scalar> {
    let bounds: Vec<u32> = lower.iter().map(|&l| m_max.saturating_sub(l) + 1).collect();
    let mut acc = inst.mus().zero();
    if lower.iter().any(|&l| l > m_max) {
        return Ok(acc);
    }
    for offset in lattice_box(&bounds) {
        let m: Vec<u32> = offset.iter().zip(lower).map(|(o, l)| o - 1 + l).collect();
        acc = acc.checked_add(&summand(inst, k, &m)?)?;
    }
    Ok(acc)
}

/// Contribution of one piece to the box `[1, M]^N`.
pub fn piece_box_sum(piece: &BoundaryPiece, inst: &ZetaInstance, k: &[u32], a: &[u32], m_max: u32) -> Result<Scalar> {
    match piece {
        BoundaryPiece::Point { point } => {
            if point.iter().any(|&b| b > m_max) {
                return Ok(inst.mus().zero());
            }
            summand(inst, k, point)
        }
        BoundaryPiece::Restricted { free, fixed, sub, prefactor } => {
            if fixed.iter().any(|&b| b > m_max) {
                return Ok(inst.mus().zero());
            }
            // d >= 1 with a_i + d_i <= M
            let bounds: Vec<u32> = free.iter().map(|&i| m_max.saturating_sub(a[i])).collect();
            let mut acc = sub.mus().zero();
            for d in lattice_box(&bounds) {
                acc = acc.checked_add(&summand(sub, k, &d)?)?;
            }
            prefactor.checked_mul(&acc)
        }
    }
}

/// Checks `sum_{[1,M]^N} = sum_{m >= a+1} + sum_pieces` and returns both sides.
pub fn box_partition(inst: &ZetaInstance, k: &[u32], a: &[u32], m_max: u32) -> Result<(Scalar, Scalar)> {
    let ones: Vec<u32> = a.iter().map(|_| 1).collect();
    let whole = box_sum(inst, k, &ones, m_max)?;
    let inner: Vec<u32> = a.iter().map(|&x| x + 1).collect();
    let mut parts = box_sum(inst, k, &inner, m_max)?;
    for piece in boundary_decompose(inst, a)? {
        parts = parts.checked_add(&piece_box_sum(&piece, inst, k, a, m_max)?)?;
    }
    Ok((whole, parts))
}

/// Number of lattice points covered by the pieces inside `[1, M]^N`.
pub fn piece_point_count(pieces: &[BoundaryPiece], a: &[u32], m_max: u32) -> u64 {
    pieces
        .iter()
        .map(|p| match p {
            BoundaryPiece::Point { point } => point.iter().all(|&b| b <= m_max) as u64,
            BoundaryPiece::Restricted { free, fixed, .. } => {
                if fixed.iter().any(|&b| b > m_max) {
                    0
                } else {
                    free.iter().map(|&i| m_max.saturating_sub(a[i]) as u64).product()
                }
            }
        })
        .sum()
}

pub(crate) fn point_factor_values(inst: &ZetaInstance, point: &[u32]) -> Result<Vec<Rational>> {
    let mut out = Vec::with_capacity(inst.nfactors());
    for (t, p) in inst.ps().iter().enumerate() {
        let v = p.eval_at(point)?;
        if v.is_zero() {
            return Err(Error::FactorVanishes { factor: t });
        }
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CyclotomicField;
    use crate::multipoly::SparsePolynomial;
    use crate::twist::TwistVector;
    use alloc::vec;

    fn instance(n: usize, r: u64, es: Vec<i64>) -> ZetaInstance {
        let p = (0..n).fold(SparsePolynomial::one(n), |acc, i| acc.checked_add(&SparsePolynomial::variable(n, i)).unwrap());
        let mus = TwistVector::exact(CyclotomicField::new(r).unwrap(), es).unwrap();
        ZetaInstance::new(SparsePolynomial::one(n), vec![p], mus).unwrap()
    }

    fn describe(pieces: &[BoundaryPiece]) -> Vec<(Vec<usize>, Vec<u32>)> {
        pieces
            .iter()
            .map(|p| match p {
                BoundaryPiece::Restricted { free, fixed, .. } => (free.clone(), fixed.clone()),
                BoundaryPiece::Point { point } => (Vec::new(), point.clone()),
            })
            .collect()
    }

    #[test]
    fn two_variable_unit_shift() {
        let inst = instance(2, 2, vec![1, 1]);
        let pieces = boundary_decompose(&inst, &[1, 1]).unwrap();
        assert_eq!(describe(&pieces), vec![(vec![0], vec![1]), (vec![1], vec![1]), (vec![], vec![1, 1])]);
        // (M-1) + (M-1) + 1 + (M-1)^2 = M^2
        for m in 1..=6u32 {
            let inner = (m - 1) as u64 * (m - 1) as u64;
            assert_eq!(piece_point_count(&pieces, &[1, 1], m) + inner, (m * m) as u64);
        }
    }

    #[test]
    fn one_variable_unit_shift() {
        let inst = instance(1, 2, vec![1]);
        assert_eq!(describe(&boundary_decompose(&inst, &[1]).unwrap()), vec![(vec![], vec![1])]);
    }

    #[test]
    fn basis_shift_has_one_hyperplane() {
        let inst = instance(2, 2, vec![1, 1]);
        let pieces = boundary_decompose(&inst, &[1, 0]).unwrap();
        assert_eq!(describe(&pieces), vec![(vec![1], vec![1])]);
    }

    #[test]
    fn prefactor_includes_free_offsets() {
        let inst = instance(2, 3, vec![1, 1]);
        let pieces = boundary_decompose(&inst, &[2, 1]).unwrap();
        for p in &pieces {
            if let BoundaryPiece::Restricted { free, fixed, prefactor, .. } = p {
                let mut m0 = vec![2u32, 1];
                let comp: Vec<usize> = (0..2).filter(|i| !free.contains(i)).collect();
                for (&j, &b) in comp.iter().zip(fixed) {
                    m0[j] = b;
                }
                assert_eq!(prefactor, &mu_power(inst.mus(), &m0).unwrap());
            }
        }
    }

    #[test]
    fn partition_holds_on_boxes() {
        let inst = instance(3, 6, vec![1, 5, 2]);
        for a in [[1u32, 0, 0], [1, 1, 1], [2, 0, 3], [0, 2, 1]] {
            for m in [1u32, 3, 5] {
                let (whole, parts) = box_partition(&inst, &[2], &a, m).unwrap();
                assert_eq!(whole, parts, "a={a:?} M={m}");
            }
        }
    }
}
