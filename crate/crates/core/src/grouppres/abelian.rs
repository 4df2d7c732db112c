use serde::Serialize;

use super::presentation::Presentation;

/// `ℤ^free_rank ⊕ ⊕ ℤ/d` with every divisor `d > 1`, each dividing the next.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub free_rank: usize,
    pub divisors: Vec<u64>,
}

/// Smith normal form of the relation matrix (rows = relators,
/// columns = exponent sums).
pub fn abelianization(p: &Presentation) -> Abelianization {
    let n = p.generator_count;
    let mut m: Vec<Vec<i128>> =
        p.relators.iter().map(|r| (0..n).map(|g| r.exponent_sum(g) as i128).collect()).collect();
    let diag = smith_diagonal(&mut m, n);
    let rank = diag.len();
    let divisors = diag.into_iter().filter(|&d| d > 1).collect();
    Abelianization { free_rank: n - rank, divisors }
}

/// Nonzero diagonal entries of the Smith form, in divisibility order.
fn smith_diagonal(m: &mut [Vec<i128>], cols: usize) -> Vec<u64> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = m[i][t] / m[t][t];
            if q != 0 {
                for j in t..cols {
                    m[i][j] -= q * m[t][j];
                }
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = m[t][j] / m[t][t];
            if q != 0 {
                for row in m.iter_mut() {
                    row[j] -= q * row[t];
                }
            }
            clean &= m[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // divisibility: fold a non-divisible entry into the pivot row
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % m[t][t] != 0)) {
            for j in t..cols {
                let v = m[i][j];
                m[t][j] += v;
            }
            continue;
        }
        diag.push(m[t][t].unsigned_abs() as u64);
        t += 1;
    }
    diag
}
