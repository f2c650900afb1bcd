//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls into the library's numerical routines; each oracle
//! takes a different route to the same quantity.
#![allow(dead_code)]

use std::collections::HashMap;

use ptcoupler::{Complex, Mat2, SquareMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type M2 = [[Complex; 2]; 2];

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn to_arr(m: &Mat2) -> M2 {
    [[m.a11, m.a12], [m.a21, m.a22]]
}

pub fn from_arr(a: &M2) -> Mat2 {
    Mat2::from_rows(*a)
}

fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// exp(s·M) by a 60-term Taylor series with scaling and squaring.
pub fn expm_taylor(m: &Mat2, s: f64) -> Mat2 {
    let a = to_arr(m);
    let norm = (0..2)
        .map(|i| (0..2).map(|j| (a[i][j] * s).norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = s / 2f64.powi(squarings);
    let x = [
        [a[0][0] * scale, a[0][1] * scale],
        [a[1][0] * scale, a[1][1] * scale],
    ];
    let mut term = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let mut sum = term;
    for k in 1..60 {
        term = mul(&term, &x);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    from_arr(&sum)
}

/// Roots of λ² - t·λ + d by Durand–Kerner iteration.
pub fn quadratic_roots(t: Complex, d: Complex) -> [Complex; 2] {
    let p = |z: Complex| z * z - t * z + d;
    let mut r = [c(0.4, 0.9), c(0.4, 0.9) * c(0.4, 0.9)];
    let scale = 1.0 + t.norm() + d.norm().sqrt();
    r[0] *= scale;
    r[1] *= scale;
    for _ in 0..2000 {
        let r0 = r[0] - p(r[0]) / (r[0] - r[1]);
        let r1 = r[1] - p(r[1]) / (r[1] - r0);
        if (r0 - r[0]).norm() + (r1 - r[1]).norm() < 1e-17 * scale {
            r = [r0, r1];
            break;
        }
        r = [r0, r1];
    }
    r
}

/// Singular values from nalgebra's dense SVD, descending.
pub fn svd_oracle(m: &Mat2) -> (f64, f64) {
    let a = nalgebra::Matrix2::new(m.a11, m.a12, m.a21, m.a22);
    let sv = a.singular_values();
    (sv[0].max(sv[1]), sv[0].min(sv[1]))
}

/// Permanent by summing over all n! permutations.
pub fn naive_permanent(m: &SquareMatrix) -> Complex {
    let n = m.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = c(0.0, 0.0);
    permute(&mut perm, 0, &mut |p| {
        let mut prod = c(1.0, 0.0);
        for (i, &j) in p.iter().enumerate() {
            prod *= m[(i, j)];
        }
        total += prod;
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn fact(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Expands Π_j (Σ_k U_kj b_k†)^{in_j} |0⟩ over output monomials and reads
/// off the probability of the output occupation pattern.
pub fn fock_expansion_prob(u: &SquareMatrix, input: &[usize], output: &[usize]) -> f64 {
    let modes = u.dim();
    let mut poly: HashMap<Vec<usize>, Complex> = HashMap::new();
    poly.insert(vec![0; modes], c(1.0, 0.0));
    for (j, &count) in input.iter().enumerate() {
        for _ in 0..count {
            let mut next: HashMap<Vec<usize>, Complex> = HashMap::new();
            for (mono, coeff) in &poly {
                for k in 0..modes {
                    let mut m = mono.clone();
                    m[k] += 1;
                    *next.entry(m).or_insert(c(0.0, 0.0)) += coeff * u[(k, j)];
                }
            }
            poly = next;
        }
    }
    let coeff = poly.get(output).copied().unwrap_or(c(0.0, 0.0));
    let out_norm: f64 = output.iter().map(|&k| fact(k)).product();
    let in_norm: f64 = input.iter().map(|&k| fact(k)).product();
    coeff.norm_sqr() * out_norm / in_norm
}

/// (indistinguishable, distinguishable) two-photon probabilities
/// `[p20, p11, p02]` for a `|1,1⟩` input.
pub fn two_photon_oracle(u: &Mat2) -> ([f64; 3], [f64; 3]) {
    let m = SquareMatrix::from(*u);
    let indist = [
        fock_expansion_prob(&m, &[1, 1], &[2, 0]),
        fock_expansion_prob(&m, &[1, 1], &[1, 1]),
        fock_expansion_prob(&m, &[1, 1], &[0, 2]),
    ];
    // photon a enters mode 1, photon b mode 2; each routes independently
    let a = [u.a11.norm_sqr(), u.a21.norm_sqr()];
    let b = [u.a12.norm_sqr(), u.a22.norm_sqr()];
    let dist = [a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[1] * b[1]];
    (indist, dist)
}

/// Root of `f` in `[lo, hi]` by bisection; `f(lo)` and `f(hi)` must differ
/// in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    assert!(f_lo * f(hi) < 0.0, "bracket does not straddle a root");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn unit_disc(rng: &mut StdRng) -> Complex {
    loop {
        let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm() <= 1.0 {
            return z;
        }
    }
}

pub fn random_mat2(rng: &mut StdRng) -> Mat2 {
    Mat2::new(
        unit_disc(rng),
        unit_disc(rng),
        unit_disc(rng),
        unit_disc(rng),
    )
}

pub fn random_square(rng: &mut StdRng, n: usize) -> SquareMatrix {
    SquareMatrix::from_row_major((0..n * n).map(|_| unit_disc(rng)).collect()).unwrap()
}

/// Random matrix scaled so its largest singular value is at most `1`,
/// using the Frobenius bound.
pub fn random_subunitary(rng: &mut StdRng, n: usize) -> SquareMatrix {
    let m = random_square(rng, n);
    let fro = m
        .as_slice()
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let shrink = rng.random_range(0.5..1.0) / fro;
    SquareMatrix::from_row_major(m.as_slice().iter().map(|z| z * shrink).collect()).unwrap()
}

/// Random unitary from the Gram–Schmidt orthonormalisation of a random
/// complex matrix.
pub fn random_unitary(rng: &mut StdRng, n: usize) -> SquareMatrix {
    let m = random_square(rng, n);
    let mut cols: Vec<Vec<Complex>> = Vec::new();
    for j in 0..n {
        let mut v: Vec<Complex> = (0..n).map(|i| m[(i, j)]).collect();
        for q in &cols {
            let dot: Complex = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= dot * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut out = SquareMatrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            out[(i, j)] = z;
        }
    }
    out
}
