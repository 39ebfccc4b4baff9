//! Banded LU factorization with partial pivoting.
//!
//! Row `i` stores columns `i - kl ..= i + kl + ku`; the extra `kl` columns
//! hold the fill-in produced by row interchanges. The factor is kept as a
//! sequence of Gauss transforms, so multipliers from earlier steps are not
//! permuted by later interchanges.

#[derive(Clone, Debug)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

/// Zero (or numerically zero) pivot encountered in row `row`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingularPivot {
    pub row: usize,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandedMatrix {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, r: usize, c: usize) -> usize {
        debug_assert!(c + self.kl >= r && c <= r + self.kl + self.ku, "({r}, {c}) outside band");
        r * self.width + (c + self.kl - r)
    }

    /// Adds `v` to entry `(r, c)`, which must lie within `kl` below / `ku` above the diagonal.
    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        assert!(c + self.kl >= r && c <= r + self.ku, "({r}, {c}) outside the declared band");
        let k = self.slot(r, c);
        self.data[k] += v;
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        if c + self.kl < r || c > r + self.kl + self.ku {
            0.0
        } else {
            self.data[self.slot(r, c)]
        }
    }

    /// Factors in place; returns the row interchanges.
    pub fn factor(mut self) -> Result<BandedLu, SingularPivot> {
        let n = self.n;
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        let mut perm = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let last_col = (k + self.kl + self.ku).min(n - 1);
            let mut p = k;
            let mut best = self.data[self.slot(k, k)].abs();
            for r in k + 1..=last_row {
                let v = self.data[self.slot(r, k)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if !(best > tiny) {
                return Err(SingularPivot { row: k });
            }
            perm[k] = p;
            if p != k {
                for c in k..=last_col {
                    let (a, b) = (self.slot(k, c), self.slot(p, c));
                    self.data.swap(a, b);
                }
            }
            let pivot = self.data[self.slot(k, k)];
            for r in k + 1..=last_row {
                let s = self.slot(r, k);
                let m = self.data[s] / pivot;
                self.data[s] = m;
                if m != 0.0 {
                    for c in k + 1..=last_col {
                        let src = self.data[self.slot(k, c)];
                        let dst = self.slot(r, c);
                        self.data[dst] -= m * src;
                    }
                }
            }
        }
        Ok(BandedLu { lu: self, perm })
    }
}

#[derive(Clone, Debug)]
pub struct BandedLu {
    lu: BandedMatrix,
    perm: Vec<usize>,
}

impl BandedLu {
    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let m = &self.lu;
        let n = m.n;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.perm[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != 0.0 {
                for r in k + 1..=(k + m.kl).min(n - 1) {
                    b[r] -= m.data[m.slot(r, k)] * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut acc = b[k];
            for c in k + 1..=(k + m.kl + m.ku).min(n - 1) {
                acc -= m.data[m.slot(k, c)] * b[c];
            }
            b[k] = acc / m.data[m.slot(k, k)];
        }
    }
}
