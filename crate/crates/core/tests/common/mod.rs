//! Dense reference simulation for small circuits.

#![allow(dead_code)]

use num_complex::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).collect())
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn apply(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn scale(m: &Matrix, s: Complex64) -> Matrix {
    m.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

/// Taylor series with scaling and squaring.
pub fn expm(a: &Matrix) -> Matrix {
    let n = a.len();
    let norm = a.iter().map(|r| r.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let a = scale(a, Complex64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=30 {
        term = scale(&matmul(&term, &a), Complex64::new(1.0 / k as f64, 0.0));
        result = add(&result, &term);
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

/// `sum_q X_q` on `n` qubits, qubit `q` = bit `q` of the index.
pub fn mixer_hamiltonian(n: usize) -> Matrix {
    let dim = 1 << n;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for i in 0..dim {
        for q in 0..n {
            m[i][i ^ (1 << q)] += Complex64::new(1.0, 0.0);
        }
    }
    m
}

pub fn diagonal(energies: &[f64]) -> Matrix {
    let n = energies.len();
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, &e) in energies.iter().enumerate() {
        m[i][i] = Complex64::new(e, 0.0);
    }
    m
}

/// Layered circuit from `|->^n` via dense matrix exponentials.
pub fn dense_circuit(n: usize, energies: &[f64], gammas: &[f64], betas: &[f64]) -> Vec<Complex64> {
    let dim = 1usize << n;
    let amp = (dim as f64).sqrt().recip();
    let mut state: Vec<Complex64> = (0..dim)
        .map(|i| {
            let sign = if (i as u32).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(sign * amp, 0.0)
        })
        .collect();
    let h_phase = diagonal(energies);
    let h_mix = mixer_hamiltonian(n);
    for (&g, &b) in gammas.iter().zip(betas) {
        let up = expm(&scale(&h_phase, Complex64::new(0.0, -g)));
        let um = expm(&scale(&h_mix, Complex64::new(0.0, -b)));
        state = apply(&um, &apply(&up, &state));
    }
    state
}
