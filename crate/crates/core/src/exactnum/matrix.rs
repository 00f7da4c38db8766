//! Dense matrices over [`ExactScalar`] with exact determinants,
//! characteristic polynomials and rank certificates.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::{q, qi, random_point, Assignment, ExactError, ExactScalar, Gq, Var, NVARS, Q};

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![ExactScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ExactScalar::one() } else { ExactScalar::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(ExactError::Shape("ragged rows".into()));
        }
        Ok(ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix from integer entries.
    pub fn from_ints(rows: usize, cols: usize, v: &[i64]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self::from_fn(rows, cols, |i, j| ExactScalar::int(v[i * cols + j]))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: ExactScalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut ExactScalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<ExactScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<ExactScalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(ExactScalar::is_zero)
    }

    pub fn map(&self, f: impl Fn(&ExactScalar) -> ExactScalar) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&ExactScalar) -> Result<ExactScalar, ExactError>) -> Result<Self, ExactError> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        self.map(|x| x * s)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.conj_transpose()
    }

    pub fn trace(&self) -> ExactScalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Vec<ExactScalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = ExactScalar::zero();
                for (j, vj) in v.iter().enumerate() {
                    let m = self.get(i, j);
                    if !m.is_zero() && !vj.is_zero() {
                        acc += &(m * vj);
                    }
                }
                acc
            })
            .collect()
    }

    /// Rows `rs`, columns `cs`.
    pub fn submatrix(&self, rs: &[usize], cs: &[usize]) -> Self {
        Self::from_fn(rs.len(), cs.len(), |i, j| self.get(rs[i], cs[j]).clone())
    }

    /// Stack vertically.
    pub fn vstack(&self, other: &ExactMatrix) -> Result<Self, ExactError> {
        if self.cols != other.cols {
            return Err(ExactError::Shape(format!("vstack {}x{} / {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(ExactMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Exact determinant by expansion over column subsets.
    ///
    /// `dp[mask]` holds the signed sum over bijections from the first
    /// `|mask|` rows onto the columns in `mask`. Division-free, so it works
    /// over any commutative ring. Size is limited to 20.
    pub fn det(&self) -> Result<ExactScalar, ExactError> {
        if !self.is_square() {
            return Err(ExactError::Shape(format!("det of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(ExactScalar::one());
        }
        if n > 20 {
            return Err(ExactError::Shape("det: dimension above 20".into()));
        }
        let full = 1usize << n;
        let mut dp: Vec<ExactScalar> = vec![ExactScalar::zero(); full];
        dp[0] = ExactScalar::one();
        for mask in 0..full {
            if dp[mask].is_zero() {
                continue;
            }
            let k = mask.count_ones() as usize;
            if k == n {
                continue;
            }
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let m = self.get(k, j);
                if m.is_zero() {
                    continue;
                }
                let above = (mask >> (j + 1)).count_ones();
                let term = &dp[mask] * m;
                let slot = &mut dp[mask | (1 << j)];
                if above % 2 == 0 {
                    *slot += &term;
                } else {
                    *slot -= &term;
                }
            }
        }
        Ok(dp[full - 1].clone())
    }

    /// Coefficients c_0..c_n of det(λI − M) (c_n = 1) by the Faddeev–LeVerrier
    /// recursion. Only rational divisions occur.
    pub fn char_poly(&self) -> Result<Vec<ExactScalar>, ExactError> {
        if !self.is_square() {
            return Err(ExactError::Shape("char_poly of non-square matrix".into()));
        }
        let n = self.rows;
        let mut coeffs = vec![ExactScalar::zero(); n + 1];
        coeffs[n] = ExactScalar::one();
        let id = ExactMatrix::identity(n);
        let mut m_k = ExactMatrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let prev = &m_k + &id.scale(&coeffs[n - k + 1]);
            m_k = self * &prev;
            let tr = m_k.trace();
            coeffs[n - k] = -tr.scale(&q(1, k as i64));
        }
        Ok(coeffs)
    }

    /// det(λI − M) as a scalar in the indeterminate `lambda`.
    pub fn char_poly_scalar(&self) -> Result<ExactScalar, ExactError> {
        let c = self.char_poly()?;
        let l = ExactScalar::var(Var::LAMBDA);
        Ok(c.iter().enumerate().map(|(k, ck)| ck * &l.pow(k as u32)).sum())
    }

    pub fn eval(&self, asg: &Assignment) -> Result<DMatrix<Complex64>, ExactError> {
        let mut out = DMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self.get(i, j).eval(asg)?;
            }
        }
        Ok(out)
    }

    pub fn eval_exact(&self, pt: &[Option<Q>; NVARS]) -> Result<Vec<Vec<Gq>>, ExactError> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval_exact(pt)).collect())
            .collect()
    }

    pub fn try_subst(&self, v: Var, value: &ExactScalar) -> Result<Self, ExactError> {
        self.try_map(|x| x.subst(v, value))
    }

    /// Rank over the field of rational functions, with a certificate.
    pub fn rank_certificate(&self, seed: u64) -> Result<RankCertificate, ExactError> {
        if self.data.iter().any(|x| x.contains_var(Var::SQRT2)) {
            return Err(ExactError::Rank("entries involve sqrt2".into()));
        }
        if let Some(c) = self.constant_entries() {
            return self.constant_rank_certificate(c);
        }
        let pt = random_point(seed);
        let num = self.eval_exact(&pt)?;
        let (rows, cols) = pivots(num);
        let r = cols.len();
        let minor = self.submatrix(&rows, &cols).det()?;
        if minor.is_zero() {
            return Err(ExactError::Rank("pivot minor vanishes identically".into()));
        }
        let free: Vec<usize> = (0..self.cols).filter(|j| !cols.contains(j)).collect();
        let mut kernel = Vec::with_capacity(free.len());
        for &j in &free {
            let mut v = vec![ExactScalar::zero(); self.cols];
            v[j] = minor.clone();
            let rhs: Vec<ExactScalar> = rows.iter().map(|&i| -self.get(i, j)).collect();
            for (p, &pc) in cols.iter().enumerate() {
                let mut sub = self.submatrix(&rows, &cols);
                for (ii, x) in rhs.iter().enumerate() {
                    sub.set(ii, p, x.clone());
                }
                v[pc] = sub.det()?;
            }
            kernel.push(v);
        }
        let cert = RankCertificate { rank: r, pivot_rows: rows, pivot_cols: cols, minor, kernel };
        cert.verify(self)?;
        Ok(cert)
    }

    fn constant_entries(&self) -> Option<Vec<Vec<Gq>>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).as_constant()).collect()).collect()
    }

    /// Rank certificate of a matrix over Q(i) from its reduced row echelon
    /// form; kernel vectors are scaled by the pivot minor.
    fn constant_rank_certificate(&self, mut m: Vec<Vec<Gq>>) -> Result<RankCertificate, ExactError> {
        let (nr, nc) = (self.rows, self.cols);
        let mut row_ids: Vec<usize> = (0..nr).collect();
        let mut cols = Vec::new();
        let mut r = 0;
        for c in 0..nc {
            if r == nr {
                break;
            }
            let Some(p) = (r..nr).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            row_ids.swap(r, p);
            let inv = Gq::new(qi(1), qi(0)) / m[r][c].clone();
            for k in c..nc {
                m[r][k] = &m[r][k] * &inv;
            }
            for i in 0..nr {
                if i == r || m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].clone();
                for k in c..nc {
                    let d = &f * &m[r][k];
                    m[i][k] = &m[i][k] - &d;
                }
            }
            cols.push(c);
            r += 1;
        }
        let rows: Vec<usize> = row_ids[..r].to_vec();
        let minor = self.submatrix(&rows, &cols).det()?;
        let free: Vec<usize> = (0..nc).filter(|j| !cols.contains(j)).collect();
        let kernel = free
            .iter()
            .map(|&j| {
                let mut v = vec![ExactScalar::zero(); nc];
                v[j] = minor.clone();
                for (p, &pc) in cols.iter().enumerate() {
                    v[pc] = -&(&minor * &ExactScalar::from_gq(m[p][j].clone()));
                }
                v
            })
            .collect();
        let cert = RankCertificate { rank: r, pivot_rows: rows, pivot_cols: cols, minor, kernel };
        cert.verify(self)?;
        Ok(cert)
    }

    /// Kernel dimension over the rational-function field.
    pub fn nullity(&self, seed: u64) -> Result<usize, ExactError> {
        Ok(self.rank_certificate(seed)?.kernel.len())
    }
}

/// Row-reduce a numeric matrix over Q(i); returns (pivot rows, pivot cols)
/// in the original indexing.
fn pivots(mut m: Vec<Vec<Gq>>) -> (Vec<usize>, Vec<usize>) {
    let nr = m.len();
    let nc = m.first().map_or(0, |r| r.len());
    let mut row_ids: Vec<usize> = (0..nr).collect();
    let mut prow = Vec::new();
    let mut pcol = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        row_ids.swap(r, p);
        let inv = Gq::new(qi(1), qi(0)) / m[r][c].clone();
        for i in r + 1..nr {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for k in c..nc {
                let d = &f * &m[r][k];
                m[i][k] = &m[i][k] - &d;
            }
        }
        prow.push(row_ids[r]);
        pcol.push(c);
        r += 1;
    }
    (prow, pcol)
}

/// Evidence that a matrix has rank exactly `rank` over the rational
/// function field: a nonzero `rank`-minor and `ncols − rank` kernel
/// vectors that are independent (each carries `minor` on its own free
/// column and zero on the other free columns).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
    #[serde(serialize_with = "ser_display")]
    pub minor: ExactScalar,
    #[serde(serialize_with = "ser_display_vv")]
    pub kernel: Vec<Vec<ExactScalar>>,
}

fn ser_display<S: serde::Serializer>(x: &ExactScalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_display_vv<S: serde::Serializer>(x: &[Vec<ExactScalar>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(x.len()))?;
    for v in x {
        let row: Vec<String> = v.iter().map(|e| e.to_string()).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

impl RankCertificate {
    pub fn nullity(&self) -> usize {
        self.kernel.len()
    }

    /// Re-check every claim against `m`.
    pub fn verify(&self, m: &ExactMatrix) -> Result<(), ExactError> {
        if self.rank + self.kernel.len() != m.ncols() {
            return Err(ExactError::Rank("rank + nullity != ncols".into()));
        }
        if self.minor.is_zero() || m.submatrix(&self.pivot_rows, &self.pivot_cols).det()? != self.minor {
            return Err(ExactError::Rank("minor mismatch".into()));
        }
        let free: Vec<usize> = (0..m.ncols()).filter(|j| !self.pivot_cols.contains(j)).collect();
        for (v, &j) in self.kernel.iter().zip(&free) {
            for &k in &free {
                let want = if k == j { self.minor.clone() } else { ExactScalar::zero() };
                if v[k] != want {
                    return Err(ExactError::Rank("kernel vectors not in echelon form".into()));
                }
            }
            if m.mul_vec(v).iter().any(|x| !x.is_zero()) {
                return Err(ExactError::Rank(format!("M*v != 0 for free column {j}")));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.map(|x| -x)
    }
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        *out.entry_mut(i, j) += &(a * b);
                    }
                }
            }
        }
        out
    }
}

macro_rules! forward_owned_mat {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactMatrix> for ExactMatrix {
            type Output = ExactMatrix;
            fn $m(self, rhs: ExactMatrix) -> ExactMatrix {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned_mat!(Add, add);
forward_owned_mat!(Sub, sub);
forward_owned_mat!(Mul, mul);
