//! Dense linear algebra over F_p on small matrices.

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).expect("nonzero residue modulo a prime")
}

/// Row echelon form in place; returns the pivot columns.
fn echelon(p: u32, m: &mut [Vec<u32>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] % p != 0) else { continue };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c] % p, p);
        for v in m[r].iter_mut() {
            *v = *v % p * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] % p != 0 {
                let f = m[i][c] % p;
                for j in 0..cols {
                    m[i][j] = (m[i][j] % p + p * p - f * m[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(p: u32, rows: &[Vec<u32>]) -> usize {
    let mut m = rows.to_vec();
    echelon(p, &mut m).len()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(p: u32, a: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let n = a.len();
    let mut m: Vec<Vec<u32>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<u32> = row.iter().map(|v| v % p).collect();
            r.extend((0..n).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    let piv = echelon(p, &mut m);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(p: u32, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let k = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| (0..k).map(|t| row[t] * b[t][j] % p).sum::<u32>() % p).collect())
        .collect()
}

pub fn transpose(a: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let a = vec![vec![1, 2, 0], vec![0, 1, 1], vec![2, 0, 1]];
        let inv = inverse(3, &a).unwrap();
        assert_eq!(mat_mul(3, &a, &inv), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(inverse(2, &[vec![1, 1], vec![1, 1]]).is_none());
        assert_eq!(rank(2, &[vec![1, 1], vec![1, 1]]), 1);
    }
}
