//! Small dense linear algebra over `Z/p^k` and `F_p`.

use crate::scalar::{PadicModulus, Residue};

/// Determinant of a square matrix over `Z/p^k`.
///
/// Full pivoting on the entry of least `p`-adic valuation: every remaining
/// entry is then divisible by the pivot's power of `p`, so the elimination
/// multipliers are well defined modulo `p^k` even though `Z/p^k` is not a field.
pub fn det_mod<T: Residue>(mut a: Vec<Vec<T>>, modulus: &PadicModulus<T>) -> T {
    let n = a.len();
    let p = modulus.p_residue();
    let mut det = T::one() % modulus.modulus();
    let mut negate = false;
    for col in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in a.iter().enumerate().skip(col) {
            for (c, &v) in row.iter().enumerate().skip(col) {
                if let Some(val) = modulus.val_p(v) {
                    if best.is_none_or(|(bv, _, _)| val < bv) {
                        best = Some((val, r, c));
                    }
                }
            }
        }
        let Some((v, r, c)) = best else {
            return T::zero();
        };
        if r != col {
            a.swap(r, col);
            negate = !negate;
        }
        if c != col {
            for row in a.iter_mut() {
                row.swap(c, col);
            }
            negate = !negate;
        }
        let pivot = a[col][col];
        let scale = p.pow(v);
        let unit_inv = modulus
            .inv(pivot / scale)
            .expect("pivot cofactor is a unit");
        for r2 in col + 1..n {
            let entry = a[r2][col];
            if entry.is_zero() {
                continue;
            }
            let factor = modulus.mul(entry / scale, unit_inv);
            for c2 in col..n {
                let t = modulus.mul(factor, a[col][c2]);
                a[r2][c2] = modulus.sub(a[r2][c2], t);
            }
        }
        det = modulus.mul(det, pivot);
    }
    if negate {
        modulus.neg(det)
    } else {
        det
    }
}

/// Row echelon form over `F_p` in place; returns pivot columns.
pub fn row_reduce_mod_p(rows: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = inv_mod_p(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = (*v * inv) % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Basis of the right kernel `{v : A v = 0}` of an `m × n` matrix over `F_p`.
pub fn kernel_mod_p(matrix: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = matrix
        .iter()
        .map(|r| r.iter().map(|v| v % p).collect())
        .collect();
    let pivots = row_reduce_mod_p(&mut rows, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rows[i][f] % p) % p;
            }
            v
        })
        .collect()
}

pub fn inv_mod_p(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    // Laplace expansion along successive rows; exponential but exact.
    fn det_by_expansion(a: &[Vec<i128>]) -> i128 {
        fn rec(a: &[Vec<i128>], row: usize, used: &mut Vec<bool>) -> i128 {
            if row == a.len() {
                return 1;
            }
            let mut total = 0;
            for c in 0..a.len() {
                if used[c] {
                    continue;
                }
                let before = (0..c).filter(|&j| !used[j]).count();
                let sign = if before % 2 == 0 { 1 } else { -1 };
                used[c] = true;
                total += sign * a[row][c] * rec(a, row + 1, used);
                used[c] = false;
            }
            total
        }
        rec(a, 0, &mut vec![false; a.len()])
    }

    #[test]
    fn determinant_matches_leibniz() {
        let m = PadicModulus::<u64>::new(5, 3).unwrap();
        let cases: Vec<Vec<Vec<i128>>> = vec![
            vec![vec![1, 2], vec![3, 4]],
            vec![vec![5, 10, 3], vec![25, 1, 7], vec![0, 50, 9]],
            vec![vec![5, 0, 0], vec![0, 5, 0], vec![0, 0, 5]],
            vec![
                vec![25, 5, 1, 0],
                vec![5, 1, 0, 25],
                vec![1, 0, 25, 5],
                vec![0, 25, 5, 1],
            ],
        ];
        for a in cases {
            let expect = m.reduce_i128(det_by_expansion(&a));
            let am = a
                .iter()
                .map(|r| r.iter().map(|&v| m.reduce_i128(v)).collect())
                .collect();
            assert_eq!(det_mod(am, &m), expect, "{a:?}");
        }
    }

    #[test]
    fn kernel_of_rank_one() {
        let k = kernel_mod_p(&[vec![1, 2, 3]], 3, 5);
        assert_eq!(k.len(), 2);
        for v in k {
            assert_eq!((v[0] + 2 * v[1] + 3 * v[2]) % 5, 0);
        }
    }
}
