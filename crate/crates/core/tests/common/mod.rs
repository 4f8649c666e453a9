//! Brute-force oracles shared by the integration tests. None of these call
//! into the library's algorithms.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `E8` Gram matrix (negative definite) built from its Dynkin diagram:
/// a chain 0-1-2-3-4-5-6 with node 7 attached to node 4.
pub fn e8_gram() -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)] {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    g
}

/// `D4` with central node 1.
pub fn d4_gram() -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for leaf in [0, 2, 3] {
        g[1][leaf] = 1;
        g[leaf][1] = 1;
    }
    g
}

pub fn norm(g: &[Vec<i64>], x: &[i64]) -> i64 {
    (0..x.len())
        .map(|i| (0..x.len()).map(|j| x[i] * g[i][j] * x[j]).sum::<i64>())
        .sum()
}

fn f64_inverse_diagonal(g: &[Vec<i64>]) -> Vec<f64> {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<f64> = r.iter().map(|&x| x as f64).collect();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        let piv = a[c][c];
        for x in a[c].iter_mut() {
            *x /= piv;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    (0..n).map(|i| a[i][n + i]).collect()
}

/// Number of nonzero `x` with `x·x = t` in a negative definite Gram matrix,
/// by walking the whole box `|x_i| ≤ sqrt(|t| (G^{-1})_ii)`.
pub fn box_count(g: &[Vec<i64>], t: i64) -> u64 {
    let n = g.len();
    let bounds: Vec<i64> = f64_inverse_diagonal(g)
        .iter()
        .map(|&d| ((t.abs() as f64) * d.abs() + 1e-9).sqrt().floor() as i64)
        .collect();
    let mut count = 0;
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    // partial sums: norm is recomputed incrementally from the last coordinate changed
    let mut gx: Vec<i64> = (0..n).map(|i| (0..n).map(|j| g[i][j] * x[j]).sum()).collect();
    let mut q: i64 = (0..n).map(|i| x[i] * gx[i]).sum();
    'outer: loop {
        if q == t && x.iter().any(|&v| v != 0) {
            count += 1;
        }
        for i in 0..n {
            let step = if x[i] < bounds[i] { 1 } else { -2 * bounds[i] };
            q += 2 * step * gx[i] + step * step * g[i][i];
            for (k, v) in gx.iter_mut().enumerate() {
                *v += step * g[k][i];
            }
            x[i] += step;
            if step == 1 {
                continue 'outer;
            }
        }
        return count;
    }
}

/// `x^2` in `u(2)^2` on `F_2^4` with basis `e1, f1, e2, f2`, as 0 or 1 mod 2.
fn q_u2u2(x: u8) -> u8 {
    ((x & 1) * (x >> 1 & 1) + (x >> 2 & 1) * (x >> 3 & 1)) & 1
}

/// Scans all ordered 4-tuples of vectors of `F_2^4`; returns the number of
/// invertible ones and the number whose induced linear map preserves `q`.
pub fn gl4_filter() -> (u64, u64) {
    let image = |cols: &[u8; 4], x: u8| -> u8 {
        let mut y = 0;
        for (i, c) in cols.iter().enumerate() {
            if x >> i & 1 == 1 {
                y ^= c;
            }
        }
        y
    };
    let rank = |cols: &[u8; 4]| -> usize {
        let mut rows = cols.to_vec();
        let mut r = 0;
        for bit in 0..4 {
            if let Some(p) = (r..4).find(|&i| rows[i] >> bit & 1 == 1) {
                rows.swap(r, p);
                for i in 0..4 {
                    if i != r && rows[i] >> bit & 1 == 1 {
                        rows[i] ^= rows[r];
                    }
                }
                r += 1;
            }
        }
        r
    };
    let (mut gl, mut o) = (0, 0);
    for a in 0..16u8 {
        for b in 0..16u8 {
            for c in 0..16u8 {
                for d in 0..16u8 {
                    let cols = [a, b, c, d];
                    if rank(&cols) < 4 {
                        continue;
                    }
                    gl += 1;
                    if (0..16u8).all(|x| q_u2u2(image(&cols, x)) == q_u2u2(x)) {
                        o += 1;
                    }
                }
            }
        }
    }
    (gl, o)
}

/// Number of distinct odd primes dividing `n`.
pub fn odd_prime_count(mut n: i64) -> u32 {
    let mut l = 0;
    while n % 2 == 0 {
        n /= 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            l += 1;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 2;
    }
    l + u32::from(n > 1)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// In `c(-2N) = <k g>` with `g^2 = -1/2N`: the number of generators `k g`
/// with norm `-1/2N` and with norm `1 - 1/2N`, by integer congruences
/// `k^2 ≡ 1` and `k^2 ≡ 1 - 2N (mod 4N)`.
pub fn cyclic_counts(n: i64) -> (u64, u64) {
    let m = 4 * n;
    let units = (0..2 * n).filter(|&k| gcd(k, 2 * n) == 1);
    let a = units.clone().filter(|&k| (k * k - 1).rem_euclid(m) == 0).count() as u64;
    let b = units.filter(|&k| (k * k - 1 + 2 * n).rem_euclid(m) == 0).count() as u64;
    (a, b)
}

/// Elements `(w, k g)` of `u(2)^5 ⊕ c(-2N)` with norm `-1/2N`. Writing
/// `q(w) = ε ∈ {0, 1}`, the condition is `2N ε - k^2 ≡ -1 (mod 4N)`.
pub fn orbit_count(n: i64) -> u64 {
    let m = 4 * n;
    let mut count = 0;
    for w in 0u32..1024 {
        let eps = (0..5).map(|i| (w >> (2 * i) & 1) * (w >> (2 * i + 1) & 1)).sum::<u32>() as i64 % 2;
        for k in 0..2 * n {
            if (2 * n * eps - k * k + 1).rem_euclid(m) == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Characteristic polynomial coefficients `c_0..c_n` (monic, `c_n = 1`) by
/// Faddeev–LeVerrier.
fn char_poly(g: &[Vec<i64>]) -> Vec<BigRational> {
    let n = g.len();
    let a: Vec<Vec<BigRational>> = g
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mul = |x: &Vec<Vec<BigRational>>, y: &Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                    .collect()
            })
            .collect()
    };
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::one();
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mul(&a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        m = next;
        let am = mul(&a, &m);
        let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + &am[i][i]);
        c[n - k] = -tr / BigRational::from_integer(BigInt::from(k as i64));
    }
    c
}

fn sign_changes(coeffs: &[BigRational]) -> usize {
    let signs: Vec<bool> = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `(n_+, n_-, n_0)` of a symmetric matrix: all eigenvalues are real, so
/// Descartes' rule of signs is exact on the characteristic polynomial.
pub fn signature_oracle(g: &[Vec<i64>]) -> (usize, usize, usize) {
    let c = char_poly(g);
    let zero = c.iter().take_while(|x| x.is_zero()).count();
    let plus = sign_changes(&c);
    let flipped: Vec<BigRational> = c
        .iter()
        .enumerate()
        .map(|(i, x)| if i % 2 == 1 { -x.clone() } else { x.clone() })
        .collect();
    let minus = sign_changes(&flipped);
    (plus, minus, zero)
}

/// Determinant by cofactor expansion (small matrices only).
pub fn det_cofactor(g: &[Vec<i64>]) -> i128 {
    let n = g.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return g[0][0] as i128;
    }
    let mut d = 0i128;
    for j in 0..n {
        if g[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = g[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
            .collect();
        let s = if j % 2 == 0 { 1 } else { -1 };
        d += s * g[0][j] as i128 * det_cofactor(&minor);
    }
    d
}
