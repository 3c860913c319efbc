//! Smith normal form of small integer matrices.

/// Result of reducing `A` to `D = U A V`; only the column transform `V` is kept.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal entries `d_1 | d_2 | …`, one per column (zero for free factors).
    pub diagonal: Vec<i64>,
    /// Column transform, `cols × cols`, unimodular.
    pub v: Vec<Vec<i64>>,
}

pub fn smith_normal_form(a: &[Vec<i64>], cols: usize) -> Smith {
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let rows = m.len();
    let mut v: Vec<Vec<i64>> = (0..cols)
        .map(|i| (0..cols).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut diagonal = vec![0i64; cols];
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        swap_cols(&mut m, t, bj);
        swap_cols(&mut v, t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = m[i][t].div_euclid(m[t][t]);
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    if m[i][t] != 0 {
                        m.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = m[t][j].div_euclid(m[t][t]);
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    if m[t][j] != 0 {
                        swap_cols(&mut m, t, j);
                        swap_cols(&mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let p = m[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let x = m[i][j];
                        m[t][j] += x;
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for x in m[t].iter_mut() {
                *x = -*x;
            }
        }
        diagonal[t] = m[t][t];
        t += 1;
    }
    Smith { diagonal, v }
}

fn swap_cols(m: &mut [Vec<i64>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Invariant factors (> 1) of the abelian group `Z^cols / rowspace(a)`.
pub fn invariant_factors(a: &[Vec<i64>], cols: usize) -> Vec<i64> {
    smith_normal_form(a, cols)
        .diagonal
        .into_iter()
        .filter(|&d| d != 1)
        .collect()
}
