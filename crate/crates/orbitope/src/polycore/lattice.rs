//! Integer-lattice tools: Smith normal form and lattice basis completion.

use crate::polycore::PolyError;
use crate::rat::{RatMat, RatVec};
use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Smith normal form of an integer matrix.
///
/// `u * a * v = s` with `u`, `v` unimodular and `s` diagonal with the
/// divisibility chain `d_1 | d_2 | ...`. `v_inv` is maintained alongside `v`
/// so callers can read off a lattice basis without inverting anything.
pub struct Snf {
    pub s: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub v_inv: Vec<Vec<BigInt>>,
}

fn ident(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Snf {
    let nr = a.len();
    let nc = if nr == 0 { 0 } else { a[0].len() };
    let mut s: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = ident(nr);
    let mut v = ident(nc);
    let mut v_inv = ident(nc);

    // Row op R_i += q R_j on s mirrors on u; col op C_i += q C_j on s
    // mirrors on v (C_i += q C_j) and on v_inv (R_j -= q R_i).
    fn row_add(m: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
        let rj = m[j].clone();
        for (x, y) in m[i].iter_mut().zip(rj) {
            *x += q * y;
        }
    }
    fn row_swap(m: &mut [Vec<BigInt>], i: usize, j: usize) {
        m.swap(i, j);
    }
    fn row_neg(m: &mut [Vec<BigInt>], i: usize) {
        for x in m[i].iter_mut() {
            *x = -x.clone();
        }
    }
    fn col_add(m: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
        for row in m.iter_mut() {
            let t = &row[j] * q;
            row[i] += t;
        }
    }
    fn col_swap(m: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    }

    let k = nr.min(nc);
    let mut t = 0;
    while t < k {
        // find a nonzero pivot in the untreated block
        let mut pivot = None;
        'outer: for i in t..nr {
            for j in t..nc {
                if !s[i][j].is_zero() {
                    pivot = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        row_swap(&mut s, t, pi);
        row_swap(&mut u, t, pi);
        col_swap(&mut s, t, pj);
        col_swap(&mut v, t, pj);
        row_swap(&mut v_inv, t, pj);

        loop {
            // clear column t with row operations
            let mut dirty = false;
            for i in (t + 1)..nr {
                if !s[i][t].is_zero() {
                    let q = -(&s[i][t] / &s[t][t]);
                    row_add(&mut s, i, t, &q);
                    row_add(&mut u, i, t, &q);
                    if !s[i][t].is_zero() {
                        // remainder smaller than pivot: swap up and restart
                        row_swap(&mut s, t, i);
                        row_swap(&mut u, t, i);
                        dirty = true;
                    }
                }
            }
            // clear row t with column operations
            for j in (t + 1)..nc {
                if !s[t][j].is_zero() {
                    let q = -(&s[t][j] / &s[t][t]);
                    col_add(&mut s, j, t, &q);
                    col_add(&mut v, j, t, &q);
                    // v_inv: C_j += q C_t on v means R_t -= q R_j on v_inv
                    let qn = -q;
                    row_add(&mut v_inv, t, j, &qn);
                    if !s[t][j].is_zero() {
                        col_swap(&mut s, t, j);
                        col_swap(&mut v, t, j);
                        row_swap(&mut v_inv, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty && (t + 1..nr).all(|i| s[i][t].is_zero()) && (t + 1..nc).all(|j| s[t][j].is_zero()) {
                break;
            }
        }
        if s[t][t].is_negative() {
            row_neg(&mut s, t);
            row_neg(&mut u, t);
        }
        t += 1;
    }

    // enforce the divisibility chain d_i | d_{i+1}
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..k.saturating_sub(1) {
            let (a_i, a_n) = (s[i][i].clone(), s[i + 1][i + 1].clone());
            if a_i.is_zero() || a_n.is_zero() || (&a_n % &a_i).is_zero() {
                continue;
            }
            changed = true;
            // gcd goes up, lcm goes down: C_i += C_{i+1} turns the block
            // diag(a_i, a_n) into [[a_i,0],[a_n,a_n]], then re-eliminate.
            col_add(&mut s, i, i + 1, &BigInt::one());
            col_add(&mut v, i, i + 1, &BigInt::one());
            let neg1 = -BigInt::one();
            row_add(&mut v_inv, i + 1, i, &neg1);
            t = i;
            loop {
                let mut dirty = false;
                for r in (t + 1)..nr {
                    if !s[r][t].is_zero() {
                        let q = -(&s[r][t] / &s[t][t]);
                        row_add(&mut s, r, t, &q);
                        row_add(&mut u, r, t, &q);
                        if !s[r][t].is_zero() {
                            row_swap(&mut s, t, r);
                            row_swap(&mut u, t, r);
                            dirty = true;
                        }
                    }
                }
                for c in (t + 1)..nc {
                    if !s[t][c].is_zero() {
                        let q = -(&s[t][c] / &s[t][t]);
                        col_add(&mut s, c, t, &q);
                        col_add(&mut v, c, t, &q);
                        let qn = -q;
                        row_add(&mut v_inv, t, c, &qn);
                        if !s[t][c].is_zero() {
                            col_swap(&mut s, t, c);
                            col_swap(&mut v, t, c);
                            row_swap(&mut v_inv, t, c);
                            dirty = true;
                        }
                    }
                }
                if !dirty
                    && (t + 1..nr).all(|r| s[r][t].is_zero())
                    && (t + 1..nc).all(|c| s[t][c].is_zero())
                {
                    break;
                }
            }
            if s[t][t].is_negative() {
                row_neg(&mut s, t);
                row_neg(&mut u, t);
            }
        }
    }

    for i in 0..k {
        if s[i][i].is_negative() {
            row_neg(&mut s, i);
            row_neg(&mut u, i);
        }
    }

    Snf { s, u, v, v_inv }
}

fn to_bigint_rows(vectors: &[RatVec]) -> Result<Vec<Vec<BigInt>>, PolyError> {
    vectors
        .iter()
        .map(|v| {
            if !v.is_integer() {
                return Err(PolyError::NotIntegral(format!("{v:?}")));
            }
            Ok(v.iter().map(|x| x.numer().clone()).collect())
        })
        .collect()
}

/// Extends linearly independent integer vectors to a basis of the full
/// integer lattice. The output starts with the inputs verbatim and has
/// determinant ±1.
///
/// Fails with [`PolyError::NotExtendable`] when the sublattice generated by
/// the inputs is not saturated (some Smith invariant factor exceeds 1).
pub fn complete_to_lattice_basis(vectors: &[RatVec]) -> Result<Vec<RatVec>, PolyError> {
    if vectors.is_empty() {
        return Err(PolyError::NotIntegral("no input vectors".into()));
    }
    let n = vectors[0].len();
    let k = vectors.len();
    let rows = to_bigint_rows(vectors)?;
    let rat_rows: Vec<RatVec> = vectors.to_vec();
    if RatMat::from_rows(rat_rows, n).rank() != k {
        return Err(PolyError::NotIndependent);
    }
    let snf = smith_normal_form(&rows);
    for i in 0..k {
        let d = &snf.s[i][i];
        if !d.is_one() {
            return Err(PolyError::NotExtendable {
                invariant_factor: d.to_string(),
            });
        }
    }
    // a = u^{-1} s v^{-1}; with s = [I_k | 0] the first k rows of v^{-1}
    // span the same saturated sublattice, so the inputs together with the
    // remaining rows of v^{-1} form a basis.
    let mut basis: Vec<RatVec> = vectors.to_vec();
    for i in k..n {
        basis.push(RatVec(
            snf.v_inv[i]
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        ));
    }
    Ok(basis)
}

/// True when the primitive integer vectors extend to a lattice basis
/// (all Smith invariant factors are 1). Returns the first offending factor.
pub fn lattice_saturation_defect(vectors: &[RatVec]) -> Result<Option<BigInt>, PolyError> {
    let rows = to_bigint_rows(vectors)?;
    let snf = smith_normal_form(&rows);
    let k = rows.len().min(if rows.is_empty() { 0 } else { rows[0].len() });
    for i in 0..k {
        let d = &snf.s[i][i];
        if d.is_zero() {
            break;
        }
        if !d.is_one() {
            return Ok(Some(d.clone()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn check_snf(a: Vec<Vec<i64>>) {
        let big: Vec<Vec<BigInt>> = a
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let snf = smith_normal_form(&big);
        let nr = big.len();
        let nc = big[0].len();
        // u * a * v == s
        let mut prod = vec![vec![BigInt::zero(); nc]; nr];
        for i in 0..nr {
            for j in 0..nc {
                let mut acc = BigInt::zero();
                for p in 0..nr {
                    for q in 0..nc {
                        acc += &snf.u[i][p] * &big[p][q] * &snf.v[q][j];
                    }
                }
                prod[i][j] = acc;
            }
        }
        assert_eq!(prod, snf.s, "u a v != s for {a:?}");
        // v * v_inv == I
        for i in 0..nc {
            for j in 0..nc {
                let mut acc = BigInt::zero();
                for p in 0..nc {
                    acc += &snf.v[i][p] * &snf.v_inv[p][j];
                }
                assert_eq!(acc, if i == j { BigInt::one() } else { BigInt::zero() });
            }
        }
        // diagonal with divisibility
        for i in 0..nr {
            for j in 0..nc {
                if i != j {
                    assert!(snf.s[i][j].is_zero());
                }
            }
        }
        for i in 0..nr.min(nc).saturating_sub(1) {
            if !snf.s[i + 1][i + 1].is_zero() {
                assert!(
                    !snf.s[i][i].is_zero() && (&snf.s[i + 1][i + 1] % &snf.s[i][i]).is_zero(),
                    "divisibility chain broken"
                );
            }
        }
    }

    #[test]
    fn snf_reconstruction() {
        check_snf(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        check_snf(vec![vec![1, 0], vec![0, 1]]);
        check_snf(vec![vec![2, 0]]);
        check_snf(vec![vec![0, 0], vec![0, 0]]);
        check_snf(vec![vec![3, 1, 2]]);
        check_snf(vec![vec![6, 10], vec![15, 4], vec![3, 7]]);
    }

    #[test]
    fn basis_completion_standard_vector() {
        let out =
            complete_to_lattice_basis(&[RatVec::from_ints(&[1, 0])]).unwrap();
        assert_eq!(out[0], RatVec::from_ints(&[1, 0]));
        assert_eq!(out.len(), 2);
        let det = RatMat::from_rows(out, 2).det();
        assert!(det == rat(1) || det == rat(-1));
    }

    #[test]
    fn basis_completion_rejects_imprimitive() {
        // gcd oracle: the sublattice 2Z x 0 has index 2 in its saturation
        let err = complete_to_lattice_basis(&[RatVec::from_ints(&[2, 0])]).unwrap_err();
        match err {
            PolyError::NotExtendable { invariant_factor } => {
                assert_eq!(invariant_factor, "2")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn basis_completion_full_rank_input() {
        // determinant oracle: det [[1,1],[0,1]] = 1, already a basis
        let input = vec![RatVec::from_ints(&[1, 1]), RatVec::from_ints(&[0, 1])];
        let out = complete_to_lattice_basis(&input).unwrap();
        assert_eq!(out, input);
    }

    #[test]
    fn basis_completion_determinant_is_unimodular() {
        for vecs in [
            vec![RatVec::from_ints(&[1, 2, 3])],
            vec![RatVec::from_ints(&[1, 1, 0]), RatVec::from_ints(&[0, 1, 1])],
            vec![RatVec::from_ints(&[3, 5])],
        ] {
            if let Ok(basis) = complete_to_lattice_basis(&vecs) {
                let n = vecs[0].len();
                let det = RatMat::from_rows(basis.clone(), n).det();
                assert!(det == rat(1) || det == rat(-1), "det {det:?}");
                for (i, v) in vecs.iter().enumerate() {
                    assert_eq!(&basis[i], v);
                }
            }
        }
    }
}
