//! Dilation of a weighted frame to an orthonormal set: the auxiliary
//! system `R′ = N′, B′ = {0,…,N′−1}`, the unitary completion, the a-matrix,
//! Cuntz filters on `X_B × X_{B′}` and the projection of `S_ω 1` back to
//! `L²(μ)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::rational::{dot_int, exp_2pi_i, to_f64};
use crate::algebra::{IntVec, RatVec, Rational};
use crate::candidate::{max_identity_deviation, FrameCandidate, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::ifs::checked_pow;

/// Seeds whose residual norm falls below this are skipped by Gram–Schmidt.
pub const PIVOT_THRESHOLD: f64 = 1e-8;

/// Largest residual allowed on `t_{(0,0),d}` before it is set to zero.
const ZERO_ROW_TOL: f64 = 1e-12;

/// Default quadrature depth for the auxiliary measure.
pub const DEFAULT_QUADRATURE_LEVEL: usize = 5;

/// Cap on the number of terms summed by a single quadrature.
const MAX_QUADRATURE_TERMS: u128 = 10_000_000;

/// `B × B′` with the embedding of `L`. Positions are `i·N′ + b′`, where
/// `i` indexes `B` with the zero digit first and the rest in input order.
#[derive(Debug, Clone)]
pub struct DilationSystem {
    base: FrameCandidate,
    aux_n: usize,
    digit_order: Vec<usize>,
    embed: Vec<usize>,
    padded_alphas: Vec<Complex64>,
    padded_labels: Vec<IntVec>,
}

/// The orthonormal completion: columns `t_{·,c}, t_{·,d}` and `e_c, e_d`,
/// with the rows `s_{(b,b′)}` they produce.
#[derive(Debug, Clone)]
pub struct Completion {
    pub t: DMatrix<Complex64>,
    pub e: DMatrix<f64>,
    pub s: DMatrix<Complex64>,
}

/// `a_{(b,b′),(c,c′)}`, rows and columns indexed by positions in `B × B′`.
#[derive(Debug, Clone, PartialEq)]
pub struct AMatrix {
    pub entries: DMatrix<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordProjection {
    pub frequency: IntVec,
    pub coefficient: Complex64,
    /// Largest gap between the quadrature of `P_V S_ω 1` and the closed form
    /// over the atoms of `μ`.
    pub quadrature_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationReport {
    pub size: usize,
    pub aux_n: usize,
    pub unitarity_deviation: f64,
    pub first_row_is_one: bool,
    pub row_means: Vec<(f64, f64)>,
    pub row_mean_deviation: f64,
}

impl DilationSystem {
    /// `aux_n` defaults to `⌈M/N⌉`.
    pub fn build(c: &FrameCandidate, aux_n: Option<usize>) -> Result<Self> {
        let n = c.system().n_digits();
        let m = c.n_labels();
        let aux_n = aux_n.unwrap_or_else(|| m.div_ceil(n));
        if aux_n == 0 || n * aux_n < m {
            return Err(Error::InvalidArgument(format!("N·N′ = {} is smaller than the {m} labels", n * aux_n)));
        }
        let zero = c.system().zero_index();
        let digit_order: Vec<usize> = std::iter::once(zero).chain((0..n).filter(|&i| i != zero)).collect();
        let size = n * aux_n;
        let zero_label = c.zero_index();
        let mut embed = vec![0; m];
        let mut next = 1;
        for (i, slot) in embed.iter_mut().enumerate() {
            if i != zero_label {
                *slot = next;
                next += 1;
            }
        }
        let mut padded_alphas = vec![Complex64::zero(); size];
        let mut padded_labels = vec![vec![0; c.system().dim()]; size];
        for (i, &p) in embed.iter().enumerate() {
            padded_alphas[p] = c.weights()[i].value();
            padded_labels[p] = c.labels()[i].clone();
        }
        Ok(DilationSystem { base: c.clone(), aux_n, digit_order, embed, padded_alphas, padded_labels })
    }

    pub fn base(&self) -> &FrameCandidate {
        &self.base
    }

    pub fn aux_n(&self) -> usize {
        self.aux_n
    }

    pub fn size(&self) -> usize {
        self.n() * self.aux_n
    }

    fn n(&self) -> usize {
        self.digit_order.len()
    }

    /// Position of label `i` of the base candidate.
    pub fn embedded(&self, label_index: usize) -> usize {
        self.embed[label_index]
    }

    pub fn position(&self, digit: usize, aux_digit: usize) -> usize {
        digit * self.aux_n + aux_digit
    }

    pub fn padded_alphas(&self) -> &[Complex64] {
        &self.padded_alphas
    }

    pub fn padded_labels(&self) -> &[IntVec] {
        &self.padded_labels
    }

    /// Digit `i` of `B` in position order.
    pub fn digit(&self, i: usize) -> &IntVec {
        &self.base.system().digits()[self.digit_order[i]]
    }

    /// `((R^T)^{-1} l(p))·c`.
    fn theta(&self, p: usize, c: usize) -> Rational {
        self.base.phase(&self.padded_labels[p], self.digit(c))
    }

    /// Extends the columns `t_{·,c}` and `e_c` to orthonormal bases by
    /// Gram–Schmidt over standard basis seeds, and forms `s_{(b,b′)}`.
    pub fn complete_to_unitary(&self) -> Result<Completion> {
        let iso = self.base.check_isometry(DEFAULT_TOL)?;
        if !iso.ok {
            return Err(Error::Precondition(format!("T is not an isometry (deviation {:.3e})", iso.max_deviation)));
        }
        let (n, size) = (self.n(), self.size());
        let scale = 1.0 / (n as f64).sqrt();
        let t_cols: Vec<Vec<Complex64>> = (0..n)
            .map(|c| (0..size).map(|p| exp_2pi_i(&self.theta(p, c)) * self.padded_alphas[p] * scale).collect())
            .collect();
        let mut t = gram_schmidt(t_cols, size)?;
        for entry in &mut t[0][n..size] {
            if entry.norm() > ZERO_ROW_TOL {
                return Err(Error::Precondition(format!("t_(0,0),d = {:.3e} is not zero", entry.norm())));
            }
            *entry = Complex64::zero();
        }
        let e_scale = 1.0 / (self.aux_n as f64).sqrt();
        let e_cols: Vec<Vec<Complex64>> = (0..n)
            .map(|c| (0..size).map(|q| Complex64::new(if q / self.aux_n == c { e_scale } else { 0.0 }, 0.0)).collect())
            .collect();
        let e = gram_schmidt(e_cols, size)?;
        let t = DMatrix::from_fn(size, size, |p, j| t[p][j]);
        let e = DMatrix::from_fn(size, size, |q, j| e[q][j].re);
        let s = &t * e.transpose().map(|x| Complex64::new(x, 0.0));
        Ok(Completion { t, e, s })
    }

    /// `a = √(NN′) e^{−2πiθ} s`, evaluated as `α + √(NN′) e^{−2πiθ} Σ_d
    /// t_{·,d} e_d` so that row `(0,0)` is exactly one.
    pub fn a_matrix(&self, completion: &Completion) -> AMatrix {
        let (n, size) = (self.n(), self.size());
        let root = (size as f64).sqrt();
        let entries = DMatrix::from_fn(size, size, |p, q| {
            let c = q / self.aux_n;
            let tail: Complex64 = (n..size).map(|d| completion.t[(p, d)] * completion.e[(q, d)]).sum();
            if tail.is_zero() {
                self.padded_alphas[p]
            } else {
                self.padded_alphas[p] + exp_2pi_i(&-self.theta(p, c)) * tail * root
            }
        });
        AMatrix { entries }
    }

    pub fn build_a_matrix(&self) -> Result<AMatrix> {
        Ok(self.a_matrix(&self.complete_to_unitary()?))
    }

    /// `‖U*U − I‖` for `U = (NN′)^{-1/2} (a e^{2πiθ})`.
    pub fn unitarity_deviation(&self, a: &AMatrix) -> f64 {
        let size = self.size();
        let root = (size as f64).sqrt();
        let u =
            DMatrix::from_fn(size, size, |p, q| a.entries[(p, q)] * exp_2pi_i(&self.theta(p, q / self.aux_n)) / root);
        max_identity_deviation(&(u.adjoint() * u))
    }

    /// `(1/N′) Σ_{c′} a_{(b,b′),(c,c′)}` for each row and each `c`.
    pub fn row_means(&self, a: &AMatrix) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.size(), self.n(), |p, c| {
            (0..self.aux_n).map(|k| a.entries[(p, self.position(c, k))]).sum::<Complex64>() / self.aux_n as f64
        })
    }

    pub fn report(&self, a: &AMatrix) -> DilationReport {
        let means = self.row_means(a);
        let mut dev = 0.0f64;
        for p in 0..self.size() {
            for c in 0..self.n() {
                dev = dev.max((means[(p, c)] - self.padded_alphas[p]).norm());
            }
        }
        DilationReport {
            size: self.size(),
            aux_n: self.aux_n,
            unitarity_deviation: self.unitarity_deviation(a),
            first_row_is_one: (0..self.size()).all(|q| a.entries[(0, q)] == Complex64::new(1.0, 0.0)),
            row_means: (0..self.size()).map(|p| (means[(p, 0)].re, means[(p, 0)].im)).collect(),
            row_mean_deviation: dev,
        }
    }

    fn check_digits(&self, word: &[usize], bound: usize, what: &str) -> Result<()> {
        match word.iter().find(|&&d| d >= bound) {
            Some(d) => Err(Error::InvalidArgument(format!("{what} digit {d} out of range 0..{bound}"))),
            None => Ok(()),
        }
    }

    /// `τ_{w_1} ∘ … ∘ τ_{w_k}(0)` for a word over digit positions.
    fn point(&self, word: &[usize]) -> RatVec {
        let sys = self.base.system();
        word.iter().rev().fold(vec![Rational::zero(); sys.dim()], |x, &d| sys.contract(&x, self.digit(d)))
    }

    /// `(NN′)^{-1/2} m_{(b,b′)}(Υ_{(c,c′)}(x,x′))` with `x`, `x′` given by
    /// digit words. The Cuntz relations hold exactly when it is unitary.
    pub fn cuntz_filter_matrix(&self, a: &AMatrix, x_word: &[usize], aux_word: &[usize]) -> Result<DMatrix<Complex64>> {
        self.check_digits(x_word, self.n(), "B")?;
        self.check_digits(aux_word, self.aux_n, "B′")?;
        let x = self.point(x_word);
        let size = self.size();
        let root = (size as f64).sqrt();
        let images: Vec<RatVec> = (0..self.n()).map(|c| self.base.system().contract(&x, self.digit(c))).collect();
        Ok(DMatrix::from_fn(size, size, |p, q| {
            exp_2pi_i(&dot_int(&self.padded_labels[p], &images[q / self.aux_n])) * a.entries[(p, q)] / root
        }))
    }

    /// `λ = l(ω_1) + R^T l(ω_2) + … + (R^T)^{k−1} l(ω_k)`.
    fn frequency(&self, word: &[usize]) -> Result<IntVec> {
        let rt = self.base.system().matrix().transpose();
        word.iter().rev().try_fold(vec![0i64; self.base.system().dim()], |acc, &p| {
            rt.mul_vec(&acc)?
                .iter()
                .zip(&self.padded_labels[p])
                .map(|(x, &l)| x.checked_add(l).ok_or(Error::Overflow("word frequency")))
                .collect()
        })
    }

    /// `∫ S_ω 1(x, x′) dμ′(x′)` with `x` given by its first `K ≥ |ω|` digits
    /// and `μ′` replaced by its level-`K` atoms.
    fn project_by_quadrature(&self, a: &AMatrix, word: &[usize], x_word: &[usize]) -> Complex64 {
        let k = x_word.len();
        let suffixes: Vec<RatVec> = (0..word.len()).map(|j| self.point(&x_word[j..])).collect();
        let phase: Rational = word.iter().zip(&suffixes).map(|(&p, y)| dot_int(&self.padded_labels[p], y)).sum();
        let aux_atoms = self.aux_n.pow(k as u32);
        let mut total = Complex64::zero();
        for code in 0..aux_atoms {
            let mut rest = code;
            let mut h = Complex64::new(1.0, 0.0);
            for (j, &p) in word.iter().enumerate() {
                let aux_digit = rest % self.aux_n;
                rest /= self.aux_n;
                h *= a.entries[(p, self.position(x_word[j], aux_digit))];
            }
            total += h;
        }
        exp_2pi_i(&phase) * total / aux_atoms as f64
    }

    /// Closed form of `P_V S_ω 1`, checked against quadrature at level
    /// `max(level, |ω|)` on every atom of `μ`.
    pub fn project_cuntz_word(&self, a: &AMatrix, word: &[usize], level: usize) -> Result<WordProjection> {
        self.check_digits(word, self.size(), "B×B′")?;
        let k = level.max(word.len());
        let terms = checked_pow(self.n() as u128, k)
            .and_then(|x| x.checked_mul(checked_pow(self.aux_n as u128, k)?))
            .ok_or(Error::Overflow("quadrature size"))?;
        if terms > MAX_QUADRATURE_TERMS {
            return Err(Error::Resource { what: "quadrature terms", needed: terms, budget: MAX_QUADRATURE_TERMS });
        }
        let frequency = self.frequency(word)?;
        let coefficient: Complex64 = word.iter().map(|&p| self.padded_alphas[p]).product();
        let mut dev = 0.0f64;
        for x_word in words(self.n(), k) {
            let x = self.point(&x_word);
            let closed = exp_2pi_i(&dot_int(&frequency, &x)) * coefficient;
            dev = dev.max((self.project_by_quadrature(a, word, &x_word) - closed).norm());
        }
        Ok(WordProjection { frequency, coefficient, quadrature_deviation: dev })
    }

    /// `g_{(b,b′)}(t) = (R^T)^{-1}(t − l(b,b′))`.
    fn dual_step(&self, t: &[f64], p: usize) -> Vec<f64> {
        let inv = self.base.system().transpose_inverse();
        let shifted: Vec<f64> = t.iter().zip(&self.padded_labels[p]).map(|(x, &l)| x - l as f64).collect();
        (0..shifted.len()).map(|i| (0..shifted.len()).map(|j| to_f64(inv.get(i, j)) * shifted[j]).sum()).collect()
    }

    /// `Σ |α_{(b,b′)}|² |m_B(g_{(b,b′)}(t))|²`, which is 1 for an isometry.
    pub fn partition_of_unity(&self, t: &[f64]) -> f64 {
        (0..self.size())
            .map(|p| self.padded_alphas[p].norm_sqr() * self.base.system().mask(&self.dual_step(t, p)).norm_sqr())
            .sum()
    }

    /// Largest gap, over the level-`k` atoms of `μ` and all positions,
    /// between `S*_{(b,b′)} e_t` from the adjoint sum formula and
    /// `ᾱ m_B(g(t)) e_{g(t)}`.
    pub fn adjoint_deviation(&self, a: &AMatrix, t: &[f64], k: usize) -> Result<f64> {
        let size = self.size();
        let cis = |theta: f64| Complex64::from_polar(1.0, std::f64::consts::TAU * theta);
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
        let mut dev = 0.0f64;
        for x_word in words(self.n(), k) {
            let x = self.point(&x_word);
            let images: Vec<Vec<f64>> = (0..self.n())
                .map(|c| self.base.system().contract(&x, self.digit(c)).iter().map(to_f64).collect())
                .collect();
            let xf: Vec<f64> = x.iter().map(to_f64).collect();
            for p in 0..size {
                let label: Vec<f64> = self.padded_labels[p].iter().map(|&l| l as f64).collect();
                let mut sum = Complex64::zero();
                for q in 0..size {
                    let y = &images[q / self.aux_n];
                    let filter = cis(dot(&label, y)) * a.entries[(p, q)];
                    sum += filter.conj() * cis(dot(t, y));
                }
                sum /= size as f64;
                let g = self.dual_step(t, p);
                let expected = self.padded_alphas[p].conj() * self.base.system().mask(&g) * cis(dot(&g, &xf));
                dev = dev.max((sum - expected).norm());
            }
        }
        Ok(dev)
    }

    /// Frame operator on the level-`k` atoms of `μ` of the projections
    /// `P_V S_ω 1` over all words of length `k`, each computed by
    /// quadrature, compared with the identity.
    pub fn projection_frame_deviation(&self, a: &AMatrix, k: usize) -> Result<f64> {
        let n_words = checked_pow(self.size() as u128, k).ok_or(Error::Overflow("word count"))?;
        let terms = checked_pow(self.n() as u128, k)
            .and_then(|x| x.checked_mul(n_words)?.checked_mul(checked_pow(self.aux_n as u128, k)?))
            .ok_or(Error::Overflow("quadrature size"))?;
        if terms > MAX_QUADRATURE_TERMS {
            return Err(Error::Resource { what: "quadrature terms", needed: terms, budget: MAX_QUADRATURE_TERMS });
        }
        let atoms: Vec<Vec<usize>> = words(self.n(), k).collect();
        let scale = 1.0 / (atoms.len() as f64).sqrt();
        let cols: Vec<Vec<usize>> = words(self.size(), k).collect();
        let v = DMatrix::from_fn(atoms.len(), cols.len(), |i, w| {
            self.project_by_quadrature(a, &cols[w], &atoms[i]) * scale
        });
        Ok(max_identity_deviation(&(&v * v.adjoint())))
    }
}

impl AMatrix {
    /// Row-major `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.entries.nrows())
            .map(|i| (0..self.entries.ncols()).map(|j| [self.entries[(i, j)].re, self.entries[(i, j)].im]).collect())
            .collect();
        serde_json::json!({ "size": self.entries.nrows(), "rows": rows })
    }
}

/// All words of length `k` over `0..m`, lexicographic.
fn words(m: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..m.pow(k as u32)).map(move |mut code| {
        let mut w = vec![0; k];
        for slot in w.iter_mut().rev() {
            *slot = code % m;
            code /= m;
        }
        w
    })
}

/// Extends orthonormal columns to a basis of `C^size` using `e_0, e_1, …`
/// as seeds, with two passes of modified Gram–Schmidt per seed.
fn gram_schmidt(mut cols: Vec<Vec<Complex64>>, size: usize) -> Result<Vec<Vec<Complex64>>> {
    for seed in 0..size {
        if cols.len() == size {
            break;
        }
        let mut v = vec![Complex64::zero(); size];
        v[seed] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for u in &cols {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < PIVOT_THRESHOLD {
            continue;
        }
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    if cols.len() != size {
        return Err(Error::InvalidArgument("orthonormal completion did not span the space".into()));
    }
    Ok((0..size).map(|p| cols.iter().map(|c| c[p]).collect()).collect())
}
