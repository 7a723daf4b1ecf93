//! Integer matrix arithmetic and rank, written independently of the library
//! so matrix-instance results can be cross-checked.

#![allow(dead_code)]

use algcert::algebra::Element;
use algcert::linalg::Subspace;

pub type Mat = Vec<i64>;

/// `E_ij`, 1-based, row-major.
pub fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = vec![0; n * n];
    m[(i - 1) * n + (j - 1)] = 1;
    m
}

pub fn mul(n: usize, a: &[i64], b: &[i64]) -> Mat {
    let mut c = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += x * b[k * n + j];
            }
        }
    }
    c
}

pub fn sub(a: &[i64], b: &[i64]) -> Mat {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[i64], b: &[i64]) -> Mat {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn neg(a: &[i64]) -> Mat {
    a.iter().map(|x| -x).collect()
}

pub fn bracket(n: usize, a: &[i64], b: &[i64]) -> Mat {
    sub(&mul(n, a, b), &mul(n, b, a))
}

/// `(X*)_ij = X_{n+1-j, n+1-i}`
pub fn flip(n: usize, a: &[i64]) -> Mat {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = a[(n - 1 - j) * n + (n - 1 - i)];
        }
    }
    out
}

/// Degree of `E_ij` in the grading by `e = E11`, `e* = E_nn` under the flip.
pub fn flip_degree(n: usize, i: usize, j: usize) -> i32 {
    let w = |k: usize| {
        if k == 1 {
            -1
        } else if k == n {
            1
        } else {
            0
        }
    };
    w(i) - w(j)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Rank over Q by fraction-free elimination.
pub fn rank(vectors: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<i128>> = vectors.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let (a, b) = (rows[r][c], rows[i][c]);
            let pivot = rows[r].clone();
            let row = &mut rows[i];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = *x * a - *y * b;
            }
            let g = row.iter().fold(0, |g, &x| gcd(g, x));
            if g > 1 {
                row.iter_mut().for_each(|x| *x /= g);
            }
        }
        r += 1;
    }
    r
}

pub fn same_span(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let both: Vec<Vec<i64>> = a.iter().chain(b).cloned().collect();
    let r = rank(&both);
    rank(a) == r && rank(b) == r
}

pub fn inside(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let both: Vec<Vec<i64>> = a.iter().chain(b).cloned().collect();
    rank(&both) == rank(b)
}

/// Lie algebra generated by `gens`, by brute-force bracketing until the rank
/// stops growing. Returns an independent spanning list.
pub fn lie_closure(n: usize, gens: &[Mat]) -> Vec<Mat> {
    let mut basis: Vec<Mat> = Vec::new();
    for g in gens {
        push_independent(&mut basis, g.clone());
    }
    loop {
        let before = basis.len();
        let current = basis.clone();
        for a in &current {
            for b in &current {
                push_independent(&mut basis, bracket(n, a, b));
            }
        }
        if basis.len() == before {
            return basis;
        }
    }
}

pub fn push_independent(basis: &mut Vec<Mat>, v: Mat) -> bool {
    let mut trial = basis.clone();
    trial.push(v.clone());
    if rank(&trial) > basis.len() {
        basis.push(v);
        true
    } else {
        false
    }
}

/// Coordinates of `x` scaled to a primitive integer vector with the same span.
pub fn to_ints(x: &Element) -> Vec<i64> {
    let parsed: Vec<(i128, i128)> = x
        .to_strings()
        .iter()
        .map(|s| match s.split_once('/') {
            Some((a, b)) => (a.parse().unwrap(), b.parse().unwrap()),
            None => (s.parse().unwrap(), 1),
        })
        .collect();
    let lcm = parsed.iter().fold(1i128, |l, &(_, d)| l / gcd(l, d) * d);
    parsed.iter().map(|&(a, d)| (a * (lcm / d)) as i64).collect()
}

pub fn subspace_ints(s: &Subspace) -> Vec<Vec<i64>> {
    s.basis().iter().map(|v| to_ints(&Element::new(v.clone()))).collect()
}

/// All matrix units of `M_n`.
pub fn units(n: usize) -> Vec<Mat> {
    (1..=n).flat_map(|i| (1..=n).map(move |j| unit(n, i, j))).collect()
}

/// Skew elements `X - X*` over the flip, spanning `K`.
pub fn flip_skew(n: usize) -> Vec<Mat> {
    let mut k = Vec::new();
    for u in units(n) {
        let s = sub(&u, &flip(n, &u));
        if s.iter().any(|&x| x != 0) {
            push_independent(&mut k, s);
        }
    }
    k
}

/// Span of all pairwise brackets.
pub fn derived(n: usize, xs: &[Mat]) -> Vec<Mat> {
    let mut out = Vec::new();
    for a in xs {
        for b in xs {
            push_independent(&mut out, bracket(n, a, b));
        }
    }
    out
}
