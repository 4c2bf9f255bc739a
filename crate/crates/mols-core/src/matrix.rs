//! Dense matrices over the prime field Z_p with exact modular arithmetic.
//!
//! Everything in the algebraic layer reduces to small integer matrices
//! (adjacency matrices, elementary CNOT matrices, diagonal scaling blocks),
//! so this module provides exact mod-p arithmetic with Gaussian elimination
//! for determinants and inverses. No floating point anywhere.

/// Multiplicative inverse of `x` modulo the prime `p` (Fermat's little theorem).
///
/// Panics if `x ≡ 0 (mod p)`.
pub fn inv_mod(x: u64, p: u64) -> u64 {
    let x = x % p;
    assert!(x != 0, "zero has no inverse mod {p}");
    pow_mod(x, p - 2, p)
}

/// `b^e mod p` by square-and-multiply.
pub fn pow_mod(b: u64, e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut b = b % p;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// A rows×cols matrix over Z_p, row-major, entries always reduced mod p.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    p: u64,
    rows: usize,
    cols: usize,
    a: Vec<u64>,
}

impl Mat {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        assert!(p >= 2 && rows > 0 && cols > 0);
        Mat { p, rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Mat::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(p: u64, entries: &[u64]) -> Self {
        let mut m = Mat::zero(p, entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// The elementary matrix `1 + m·E_{r,c}` (0-based indices, r ≠ c).
    pub fn elementary(p: u64, n: usize, r: usize, c: usize, m: u64) -> Self {
        assert!(r != c && r < n && c < n);
        let mut x = Mat::identity(p, n);
        x.set(r, c, m);
        x
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        assert!(!rows.is_empty());
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let a = rows.iter().flatten().map(|&x| x % p).collect();
        Mat { p, rows: rows.len(), cols, a }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.a[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.a[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.a[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let mut out = Mat::zero(self.p, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(r, k);
                if x == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = (out.get(r, c) + x * rhs.get(k, c)) % self.p;
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        assert_eq!(self.p, rhs.p);
        let a = self.a.iter().zip(&rhs.a).map(|(&x, &y)| (x + y) % self.p).collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, a }
    }

    pub fn scale(&self, t: u64) -> Mat {
        let t = t % self.p;
        let a = self.a.iter().map(|&x| x * t % self.p).collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, a }
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.p - 1)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Determinant by Gaussian elimination mod p.
    pub fn det(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p = self.p;
        let mut m = self.clone();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m.get(r, col) != 0) else {
                return 0;
            };
            if piv != col {
                for c in 0..n {
                    let (x, y) = (m.get(col, c), m.get(piv, c));
                    m.set(col, c, y);
                    m.set(piv, c, x);
                }
                det = det * (p - 1) % p;
            }
            let pv = m.get(col, col);
            det = det * pv % p;
            let pv_inv = inv_mod(pv, p);
            for r in col + 1..n {
                let f = m.get(r, col);
                if f == 0 {
                    continue;
                }
                let f = f * pv_inv % p;
                for c in col..n {
                    let v = (m.get(r, c) + (p - f % p) * m.get(col, c)) % p;
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.det() != 0
    }

    /// Inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p = self.p;
        let mut m = self.clone();
        let mut inv = Mat::identity(p, n);
        for col in 0..n {
            let piv = (col..n).find(|&r| m.get(r, col) != 0)?;
            if piv != col {
                for c in 0..n {
                    let (x, y) = (m.get(col, c), m.get(piv, c));
                    m.set(col, c, y);
                    m.set(piv, c, x);
                    let (x, y) = (inv.get(col, c), inv.get(piv, c));
                    inv.set(col, c, y);
                    inv.set(piv, c, x);
                }
            }
            let pv_inv = inv_mod(m.get(col, col), p);
            for c in 0..n {
                m.set(col, c, m.get(col, c) * pv_inv % p);
                inv.set(col, c, inv.get(col, c) * pv_inv % p);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = m.get(r, col);
                if f == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = (m.get(r, c) + (p - f) * m.get(col, c)) % p;
                    m.set(r, c, v);
                    let v = (inv.get(r, c) + (p - f) * inv.get(col, c)) % p;
                    inv.set(r, c, v);
                }
            }
        }
        Some(inv)
    }
}

/// Row vector × matrix over Z_p.
pub fn row_times_mat(v: &[u64], m: &Mat) -> Vec<u64> {
    assert_eq!(v.len(), m.nrows());
    let p = m.p();
    (0..m.ncols())
        .map(|c| v.iter().enumerate().map(|(r, &x)| x * m.get(r, c)).sum::<u64>() % p)
        .collect()
}
