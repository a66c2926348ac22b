//! Banded LU with partial pivoting, row-equilibrated.

use crate::error::CoreError;
use crate::grid::Scalar;

/// Square band matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Clone, Debug)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    // column-major, extra kl rows on top for pivoting fill
    ab: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            ldab,
            ab: vec![0.0; ldab * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.ldab + (self.kl + self.ku + i - j)
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i <= j + self.kl && j <= i + self.ku
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i},{j}) outside band");
        let k = self.idx(i, j);
        self.ab[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.ab[self.idx(i, j)]
        } else {
            0.0
        }
    }

    /// `y = A x`
    pub fn matvec<T: Scalar>(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::default(); self.n];
        for j in 0..self.n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            for (i, yi) in y.iter_mut().enumerate().take(hi + 1).skip(lo) {
                *yi += x[j] * self.ab[self.idx(i, j)];
            }
        }
        y
    }

    pub fn factor(mut self) -> Result<BandedLu, CoreError> {
        let original = self.clone();
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        // row equilibration
        let mut row_scale = vec![0.0f64; n];
        for j in 0..n {
            let lo = j.saturating_sub(ku);
            let hi = (j + kl).min(n - 1);
            for (i, rs) in row_scale.iter_mut().enumerate().take(hi + 1).skip(lo) {
                *rs = rs.max(self.ab[self.idx(i, j)].abs());
            }
        }
        for (i, s) in row_scale.iter_mut().enumerate() {
            if *s == 0.0 {
                return Err(CoreError::Singular(i));
            }
            *s = 1.0 / *s;
        }
        for j in 0..n {
            let lo = j.saturating_sub(ku);
            let hi = (j + kl).min(n - 1);
            for i in lo..=hi {
                let k = self.idx(i, j);
                self.ab[k] *= row_scale[i];
            }
        }
        let kv = kl + ku;
        let mut piv = vec![0usize; n];
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut p = 0;
            let mut best = self.ab[self.idx(j, j)].abs();
            for r in 1..=km {
                let v = self.ab[self.idx(j + r, j)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            piv[j] = j + p;
            if best == 0.0 {
                return Err(CoreError::Singular(j));
            }
            let cmax = (j + kv).min(n - 1);
            if p != 0 {
                for c in j..=cmax {
                    let a = self.idx(j, c);
                    let b = self.idx(j + p, c);
                    self.ab.swap(a, b);
                }
            }
            let inv = 1.0 / self.ab[self.idx(j, j)];
            for r in 1..=km {
                let k = self.idx(j + r, j);
                self.ab[k] *= inv;
            }
            for c in j + 1..=cmax {
                let ujc = self.ab[self.idx(j, c)];
                if ujc == 0.0 {
                    continue;
                }
                for r in 1..=km {
                    let l = self.ab[self.idx(j + r, j)];
                    let k = self.idx(j + r, c);
                    self.ab[k] -= l * ujc;
                }
            }
        }
        let inv_diag = (0..n).map(|j| 1.0 / self.ab[self.idx(j, j)]).collect();
        Ok(BandedLu {
            original,
            m: self,
            piv,
            row_scale,
            inv_diag,
        })
    }
}

/// Factorization produced by [`BandMatrix::factor`].
#[derive(Clone, Debug)]
pub struct BandedLu {
    original: BandMatrix,
    m: BandMatrix,
    piv: Vec<usize>,
    row_scale: Vec<f64>,
    inv_diag: Vec<f64>,
}

impl BandedLu {
    pub fn n(&self) -> usize {
        self.m.n
    }

    /// Heap memory held by the factorization.
    pub fn bytes(&self) -> usize {
        8 * (self.original.ab.len() + self.m.ab.len() + 3 * self.m.n)
    }

    /// Overwrites `b` with `A^{-1} b`, with one step of iterative refinement.
    pub fn solve_in_place<T: Scalar>(&self, b: &mut [T]) {
        let rhs = b.to_vec();
        self.solve_once(b);
        let ax = self.original.matvec(b);
        let mut r: Vec<T> = rhs.iter().zip(&ax).map(|(&u, &v)| u - v).collect();
        self.solve_once(&mut r);
        for (x, d) in b.iter_mut().zip(&r) {
            *x += *d;
        }
    }

    fn solve_once<T: Scalar>(&self, b: &mut [T]) {
        let m = &self.m;
        let n = m.n;
        assert_eq!(b.len(), n);
        for (bi, s) in b.iter_mut().zip(&self.row_scale) {
            *bi = *bi * *s;
        }
        for j in 0..n {
            let p = self.piv[j];
            if p != j {
                b.swap(j, p);
            }
            let km = m.kl.min(n - 1 - j);
            let bj = b[j];
            for r in 1..=km {
                let l = m.ab[m.idx(j + r, j)];
                b[j + r] -= bj * l;
            }
        }
        let kv = m.kl + m.ku;
        for j in (0..n).rev() {
            let cmax = (j + kv).min(n - 1);
            let mut acc = b[j];
            for c in j + 1..=cmax {
                acc -= b[c] * m.ab[m.idx(j, c)];
            }
            b[j] = acc * self.inv_diag[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_random_banded_system_with_pivoting() {
        let n = 40;
        let (kl, ku) = (3, 2);
        let mut a = BandMatrix::zeros(n, kl, ku);
        let mut seed = 7u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                // weak diagonal forces pivoting
                a.add(i, j, rnd() * if i == j { 1e-3 } else { 1.0 });
            }
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = a.matvec(&x);
        let lu = a.factor().unwrap();
        let mut y = b.clone();
        lu.solve_in_place(&mut y);
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-9, "{u} {v}");
        }
    }
}
