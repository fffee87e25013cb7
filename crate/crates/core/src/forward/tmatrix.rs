//! Dense single-centre T-matrices in the tangential harmonic basis.
//!
//! The far field of a scatterer with T-matrix `T` under incidence `p e^{ik x·d}`
//! is
//!
//! `A(x̂) = (−4π i / k) Σ_{α,β} T_{αβ} W_α(x̂) (conj W_β(d) · p)`,
//!
//! where `W` runs over `U_n^m` (first block) and `V_n^m` (second block). With
//! this normalization a sphere has the diagonal T-matrix `(−a_n, −b_n)`.

use nalgebra::Matrix3;
use num_complex::Complex64;

use super::mie::MieCoefficients;
use crate::sph::{vsh_count, wigner::wigner_d, VshBasis};
use crate::{complexify, CVec3, Error, Result, Vec3};

#[derive(Debug, Clone, PartialEq)]
pub struct TMatrix {
    nmax: usize,
    data: Vec<Complex64>,
}

pub(crate) const PREFACTOR: Complex64 = Complex64::new(0.0, -4.0 * std::f64::consts::PI);

impl TMatrix {
    /// Builds from a row-major `2L × 2L` array, `L = nmax(nmax + 2)`.
    pub fn new(nmax: usize, data: Vec<Complex64>) -> Result<Self> {
        let dim = 2 * vsh_count(nmax);
        if data.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "T-matrix of order {nmax} needs {} entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { nmax, data })
    }

    /// Diagonal T-matrix of a sphere.
    pub fn from_mie(c: &MieCoefficients) -> Self {
        let nmax = c.nmax();
        let l = vsh_count(nmax);
        let mut data = vec![Complex64::new(0.0, 0.0); 4 * l * l];
        for n in 1..=nmax {
            for m in -(n as i64)..=(n as i64) {
                let i = crate::sph::vsh_index(n, m);
                data[i * 2 * l + i] = -c.a[n - 1];
                data[(l + i) * 2 * l + l + i] = -c.b[n - 1];
            }
        }
        Self { nmax, data }
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn dim(&self) -> usize {
        2 * vsh_count(self.nmax)
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    /// Far-field amplitude in direction `xhat`.
    pub fn far_field(&self, k: f64, xhat: &Vec3, d: &Vec3, p: &Vec3) -> CVec3 {
        let dim = self.dim();
        let bx = VshBasis::new(self.nmax, xhat);
        let bd = VshBasis::new(self.nmax, d);
        let pc = complexify(p);
        let inc: Vec<Complex64> = bd
            .u_all()
            .iter()
            .chain(bd.v_all())
            .map(|w| pc.x * w.x.conj() + pc.y * w.y.conj() + pc.z * w.z.conj())
            .collect();
        let out_basis: Vec<&CVec3> = bx.u_all().iter().chain(bx.v_all()).collect();
        let mut acc = CVec3::zeros();
        for (row, w) in out_basis.iter().enumerate() {
            let coeff: Complex64 = self.data[row * dim..(row + 1) * dim].iter().zip(&inc).map(|(t, c)| t * c).sum();
            if coeff != Complex64::new(0.0, 0.0) {
                acc += *w * coeff;
            }
        }
        acc * (PREFACTOR / k)
    }

    /// T-matrix of the same scatterer rotated by `r`, i.e. `D T D^H` blockwise,
    /// so that its far field equals `r A(rᵀx̂; rᵀd, rᵀp)`.
    pub fn rotated(&self, r: &Matrix3<f64>) -> Self {
        let l = vsh_count(self.nmax);
        let dim = 2 * l;
        // block-diagonal D over both polarization blocks and all degrees
        let mut dfull = vec![Complex64::new(0.0, 0.0); dim * dim];
        for n in 1..=self.nmax {
            let dn = wigner_d(n, r);
            let w = 2 * n + 1;
            let off = n * n - 1;
            for b in 0..2 {
                for i in 0..w {
                    for j in 0..w {
                        dfull[(b * l + off + i) * dim + b * l + off + j] = dn[i * w + j];
                    }
                }
            }
        }
        let mul = |a: &[Complex64], b: &[Complex64], conj_b: bool| {
            let mut c = vec![Complex64::new(0.0, 0.0); dim * dim];
            for i in 0..dim {
                for k in 0..dim {
                    let aik = a[i * dim + k];
                    if aik == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for j in 0..dim {
                        let bkj = if conj_b { b[j * dim + k].conj() } else { b[k * dim + j] };
                        c[i * dim + j] += aik * bkj;
                    }
                }
            }
            c
        };
        let dt = mul(&dfull, &self.data, false);
        let data = mul(&dt, &dfull, true);
        Self { nmax: self.nmax, data }
    }
}
