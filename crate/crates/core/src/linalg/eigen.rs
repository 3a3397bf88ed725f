//! Eigenvalues of real square matrices: Householder reduction to upper
//! Hessenberg form followed by Francis double-shift QR iteration.
//!
//! Follows the EISPACK `orthes`/`hqr` pair (as in JAMA) without eigenvector
//! accumulation. Complex conjugate pairs come out of 2x2 diagonal blocks, so
//! storage stays real throughout.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

use super::matrix::Matrix;

/// QR sweeps allowed per unit of dimension.
const SWEEPS_PER_DIM: usize = 100;

/// All eigenvalues of a real square matrix, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<Complex64>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest modulus.
    pub fn radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest real part.
    pub fn abscissa(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Eigenvalues ordered by real part, then imaginary part.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    /// Largest distance between matched eigenvalues of two spectra.
    ///
    /// Matching is greedy nearest-neighbour, which is exact for well separated
    /// spectra.
    pub fn distance(&self, other: &Spectrum) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        let mut remaining = other.eigenvalues.clone();
        let mut worst: f64 = 0.0;
        for z in &self.eigenvalues {
            let (k, d) = remaining
                .iter()
                .enumerate()
                .map(|(k, w)| (k, (z - w).norm()))
                .fold(
                    (0, f64::INFINITY),
                    |best, cur| if cur.1 < best.1 { cur } else { best },
                );
            worst = worst.max(d);
            remaining.swap_remove(k);
        }
        worst
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.eigenvalues.len()))?;
        for z in &self.eigenvalues {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

/// Computes every eigenvalue of `m`.
pub fn spectrum(m: &Matrix) -> Result<Spectrum> {
    let n = m.require_square()?;
    let mut h: Vec<Vec<f64>> = m.to_rows();
    reduce_to_hessenberg(&mut h);
    let eigenvalues = hessenberg_qr(&mut h, n)?;
    Ok(Spectrum { eigenvalues })
}

pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    Ok(spectrum(m)?.radius())
}

pub fn spectral_abscissa(m: &Matrix) -> Result<f64> {
    Ok(spectrum(m)?.abscissa())
}

/// Induced 2-norm, `sqrt(rho(M^T M))`.
pub fn operator_norm_2(m: &Matrix) -> Result<f64> {
    let gram = &m.transpose() * m;
    Ok(spectral_radius(&gram)?.sqrt())
}

fn reduce_to_hessenberg(h: &mut [Vec<f64>]) {
    let n = h.len();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[i][m - 1].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[i][m - 1] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let f = (m..=high).rev().map(|i| ort[i] * h[i][j]).sum::<f64>() / hh;
            for i in m..=high {
                h[i][j] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let f = (m..=high).rev().map(|j| ort[j] * h[i][j]).sum::<f64>() / hh;
            for j in m..=high {
                h[i][j] -= f * ort[j];
            }
        }
        ort[m] *= scale;
        h[m][m - 1] = scale * g;
    }
}

#[allow(clippy::many_single_char_names)]
fn hessenberg_qr(h: &mut [Vec<f64>], dim: usize) -> Result<Vec<Complex64>> {
    let mut d = vec![0.0; dim];
    let mut e = vec![0.0; dim];
    let low: isize = 0;
    let mut n = dim as isize - 1;
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
    let (mut s, mut z): (f64, f64);
    let (mut x, mut y, mut w);

    let mut norm = 0.0;
    for i in 0..dim {
        for j in i.saturating_sub(1)..dim {
            norm += h[i][j].abs();
        }
    }

    let max_sweeps = SWEEPS_PER_DIM * dim.max(1);
    let mut sweeps = 0usize;
    let mut iter = 0;
    while n >= low {
        let nu = n as usize;
        let mut l = n;
        while l > low {
            let lu = l as usize;
            s = h[lu - 1][lu - 1].abs() + h[lu][lu].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[lu][lu - 1].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // One root found.
            h[nu][nu] += exshift;
            d[nu] = h[nu][nu];
            e[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // Two roots found.
            w = h[nu][nu - 1] * h[nu - 1][nu];
            p = (h[nu - 1][nu - 1] - h[nu][nu]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[nu][nu] += exshift;
            h[nu - 1][nu - 1] += exshift;
            x = h[nu][nu];
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                d[nu - 1] = x + z;
                d[nu] = d[nu - 1];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nu - 1] = 0.0;
                e[nu] = 0.0;
            } else {
                d[nu - 1] = x + p;
                d[nu] = x + p;
                e[nu - 1] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            sweeps += 1;
            if sweeps > max_sweeps {
                return Err(Error::NoConvergence {
                    iterations: sweeps - 1,
                });
            }

            x = h[nu][nu];
            y = 0.0;
            w = 0.0;
            if l < n {
                y = h[nu - 1][nu - 1];
                w = h[nu][nu - 1] * h[nu - 1][nu];
            }

            // Exceptional shifts break cycles of the standard shift.
            if iter == 10 {
                exshift += x;
                for i in low as usize..=nu {
                    h[i][i] -= x;
                }
                s = h[nu][nu - 1].abs() + h[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low as usize..=nu {
                        h[i][i] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;

            // Look for two consecutive small sub-diagonal elements.
            let mut m = n - 2;
            while m >= l {
                let mu = m as usize;
                z = h[mu][mu];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[mu + 1][mu] + h[mu][mu + 1];
                q = h[mu + 1][mu + 1] - z - r - s;
                r = h[mu + 2][mu + 1];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[mu][mu - 1].abs() * (q.abs() + r.abs())
                    < eps
                        * (p.abs() * (h[mu - 1][mu - 1].abs() + z.abs() + h[mu + 1][mu + 1].abs()))
                {
                    break;
                }
                m -= 1;
            }
            let mu = m as usize;

            for i in mu + 2..=nu {
                h[i][i - 2] = 0.0;
                if i > mu + 2 {
                    h[i][i - 3] = 0.0;
                }
            }

            // Double QR step on rows l..n and columns m..n.
            for k in mu..nu {
                let notlast = k != nu - 1;
                if k != mu {
                    p = h[k][k - 1];
                    q = h[k + 1][k - 1];
                    r = if notlast { h[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }

                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != mu {
                        h[k][k - 1] = -s * x;
                    } else if l != m {
                        h[k][k - 1] = -h[k][k - 1];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..dim {
                        p = h[k][j] + q * h[k + 1][j];
                        if notlast {
                            p += r * h[k + 2][j];
                            h[k + 2][j] -= p * z;
                        }
                        h[k][j] -= p * x;
                        h[k + 1][j] -= p * y;
                    }

                    for i in 0..=nu.min(k + 3) {
                        p = x * h[i][k] + y * h[i][k + 1];
                        if notlast {
                            p += z * h[i][k + 2];
                            h[i][k + 2] -= p * r;
                        }
                        h[i][k] -= p;
                        h[i][k + 1] -= p * q;
                    }
                }
            }
        }
    }

    Ok(d.into_iter()
        .zip(e)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic_roots(m: &Matrix) -> [Complex64; 2] {
        let tr = m.trace();
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let disc = Complex64::new(tr * tr / 4.0 - det, 0.0).sqrt();
        [tr / 2.0 + disc, tr / 2.0 - disc]
    }

    #[test]
    fn diagonal_spectrum() {
        let s = spectrum(&Matrix::from_diagonal(&[3.0, -2.0])).unwrap();
        let sorted = s.sorted();
        assert_eq!(sorted[0], Complex64::new(-2.0, 0.0));
        assert_eq!(sorted[1], Complex64::new(3.0, 0.0));
    }

    #[test]
    fn first_example_matrix() {
        let a1 = Matrix::from_rows(&[[-2.1, -2.0], [0.5, 1.0]]).unwrap();
        let s = spectrum(&a1).unwrap().sorted();
        // trace -1.1, det -1.1
        let root = (1.1f64 * 1.1 + 4.0 * 1.1).sqrt();
        assert!((s[0].re - (-1.1 - root) / 2.0).abs() < 1e-12);
        assert!((s[1].re - (-1.1 + root) / 2.0).abs() < 1e-12);
        assert!((s[0].re + 1.734).abs() < 1e-3);
        assert!((s[1].re - 0.634).abs() < 1e-3);
    }

    #[test]
    fn rotation_generator_has_imaginary_pair() {
        let g = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        let s = spectrum(&g).unwrap().sorted();
        assert!((s[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((s[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn abscissa_and_radius() {
        let avg = Matrix::from_rows(&[[-0.55, 0.0], [0.3, -0.5]]).unwrap();
        assert!((spectral_abscissa(&avg).unwrap() + 0.5).abs() < 1e-14);
        assert_eq!(spectral_radius(&Matrix::identity(4)).unwrap(), 1.0);
        let a2 = Matrix::from_rows(&[[1.0, 2.0], [0.1, -2.0]]).unwrap();
        let expected = -0.5 + (0.25f64 + 2.2).sqrt();
        assert!((spectral_abscissa(&a2).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.065).abs() < 1e-3);
    }

    #[test]
    fn operator_norms() {
        assert!(
            (operator_norm_2(&Matrix::from_diagonal(&[2.0, -3.0])).unwrap() - 3.0).abs() < 1e-12
        );
        assert!((operator_norm_2(&Matrix::identity(5)).unwrap() - 1.0).abs() < 1e-12);
        let nil = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!((operator_norm_2(&nil).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn companion_matrix_roots() {
        // x^4 - 10x^3 + 35x^2 - 50x + 24 = (x-1)(x-2)(x-3)(x-4)
        let c = Matrix::from_rows(&[
            [10.0, -35.0, 50.0, -24.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let s = spectrum(&c).unwrap().sorted();
        for (k, z) in s.iter().enumerate() {
            assert!((z.re - (k + 1) as f64).abs() < 1e-9, "{z}");
            assert!(z.im.abs() < 1e-9);
        }
    }

    #[test]
    fn block_with_complex_pairs() {
        // Two rotation-scaling blocks mixed by a similarity.
        let d = Matrix::from_rows(&[
            [-1.0, 2.0, 0.0, 0.0],
            [-2.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, 0.5, 3.0],
            [0.0, 0.0, -3.0, 0.5],
        ])
        .unwrap();
        let p = Matrix::from_rows(&[
            [1.0, 0.2, 0.0, 0.3],
            [0.0, 1.0, 0.4, 0.0],
            [0.1, 0.0, 1.0, 0.2],
            [0.0, 0.3, 0.0, 1.0],
        ])
        .unwrap();
        let a = &(&p * &d) * &crate::linalg::inverse(&p).unwrap();
        let got = spectrum(&a).unwrap();
        let expected = spectrum(&d).unwrap();
        assert!(got.distance(&expected) < 1e-10);
        assert!((got.abscissa() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn two_by_two_matches_quadratic_formula() {
        let cases = [
            [[1.0, 2.0], [3.0, 4.0]],
            [[0.0, 1.0], [-5.0, -0.2]],
            [[1e-3, 7.0], [-2.0, 1e-3]],
        ];
        for rows in cases {
            let m = Matrix::from_rows(&rows).unwrap();
            let got = spectrum(&m).unwrap();
            let expected = Spectrum {
                eigenvalues: quadratic_roots(&m).to_vec(),
            };
            assert!(got.distance(&expected) < 1e-10);
        }
    }

    #[test]
    fn one_by_one() {
        let s = spectrum(&Matrix::from_diagonal(&[-7.0])).unwrap();
        assert_eq!(s.eigenvalues(), &[Complex64::new(-7.0, 0.0)]);
    }
}
