use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use super::{LinalgError, Vec3, Vector};

/// Determinant magnitude below which a 3x3 matrix is treated as singular.
pub const SINGULAR_TOL: f64 = 1e-10;

/// Dense row-major matrix whose dimensions are fixed at compile time.
///
/// Storage lives inline, so values are `Copy` and no operation on them ever
/// touches the heap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<const R: usize, const C: usize> {
    data: [[f64; C]; R],
}

pub type Mat3 = Matrix<3, 3>;
pub type Mat6 = Matrix<6, 6>;

impl<const R: usize, const C: usize> Default for Matrix<R, C> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const R: usize, const C: usize> Matrix<R, C> {
    pub const fn zeros() -> Self {
        Self {
            data: [[0.0; C]; R],
        }
    }

    pub const fn from_rows(data: [[f64; C]; R]) -> Self {
        Self { data }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros();
        for i in 0..R {
            for j in 0..C {
                m.data[i][j] = f(i, j);
            }
        }
        m
    }

    pub const fn nrows(&self) -> usize {
        R
    }

    pub const fn ncols(&self) -> usize {
        C
    }

    pub fn rows(&self) -> &[[f64; C]; R] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix<C, R> {
        Matrix::from_fn(|i, j| self.data[j][i])
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.data.iter_mut().flatten().for_each(|v| *v *= s);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().flatten().all(|v| v.is_finite())
    }

    pub fn row(&self, i: usize) -> Vector<C> {
        Vector(self.data[i])
    }

    pub fn column(&self, j: usize) -> Vector<R> {
        Vector(core::array::from_fn(|i| self.data[i][j]))
    }

    pub fn set_row(&mut self, i: usize, v: &Vector<C>) {
        self.data[i] = v.0;
    }

    pub fn set_column(&mut self, j: usize, v: &Vector<R>) {
        for i in 0..R {
            self.data[i][j] = v[i];
        }
    }

    /// Copies the `BR`x`BC` block whose top-left corner is `(r0, c0)`.
    pub fn block<const BR: usize, const BC: usize>(&self, r0: usize, c0: usize) -> Matrix<BR, BC> {
        Matrix::from_fn(|i, j| self.data[r0 + i][c0 + j])
    }

    pub fn set_block<const BR: usize, const BC: usize>(
        &mut self,
        r0: usize,
        c0: usize,
        b: &Matrix<BR, BC>,
    ) {
        for i in 0..BR {
            for j in 0..BC {
                self.data[r0 + i][c0 + j] = b.data[i][j];
            }
        }
    }

    pub fn mul_vec(&self, v: &Vector<C>) -> Vector<R> {
        let mut out = Vector::<R>::zeros();
        for i in 0..R {
            out[i] = self.data[i]
                .iter()
                .zip(v.0.iter())
                .map(|(a, b)| a * b)
                .sum();
        }
        out
    }

    /// `selfᵀ · v` without materialising the transpose.
    pub fn tr_mul_vec(&self, v: &Vector<R>) -> Vector<C> {
        let mut out = Vector::<C>::zeros();
        for i in 0..R {
            for j in 0..C {
                out[j] += self.data[i][j] * v[i];
            }
        }
        out
    }
}

impl<const N: usize> Matrix<N, N> {
    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_diagonal(d: &Vector<N>) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn diagonal(&self) -> Vector<N> {
        Vector(core::array::from_fn(|i| self.data[i][i]))
    }

    /// Inverse of the leading `n`x`n` block of a unit lower-triangular matrix
    /// by forward substitution; entries outside that block are zero.
    pub fn unit_lower_inverse(&self, n: usize) -> Self {
        let mut inv = Self::zeros();
        for j in 0..n {
            inv.data[j][j] = 1.0;
            for i in j + 1..n {
                let mut acc = 0.0;
                for k in j..i {
                    acc -= self.data[i][k] * inv.data[k][j];
                }
                inv.data[i][j] = acc;
            }
        }
        inv
    }

    /// Inverse of the leading `n`x`n` block of a unit upper-triangular matrix
    /// by back substitution; entries outside that block are zero.
    pub fn unit_upper_inverse(&self, n: usize) -> Self {
        self.transpose().unit_lower_inverse(n).transpose()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..N).all(|i| (0..i).all(|j| (self.data[i][j] - self.data[j][i]).abs() <= tol))
    }
}

/// Inverse of a diagonal stored as a vector, over its first `n` entries.
pub fn diagonal_inverse<const N: usize>(d: &Vector<N>, n: usize) -> Vector<N> {
    let mut out = Vector::<N>::zeros();
    for i in 0..n {
        out[i] = 1.0 / d[i];
    }
    out
}

impl Mat3 {
    pub fn determinant(&self) -> f64 {
        let m = &self.data;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn inverse(&self) -> Result<Mat3, LinalgError> {
        self.inverse_with_tol(SINGULAR_TOL)
    }

    /// Adjugate inverse; fails when `|det| < tol`.
    pub fn inverse_with_tol(&self, tol: f64) -> Result<Mat3, LinalgError> {
        let det = self.determinant();
        if !(det.abs() >= tol) {
            return Err(LinalgError::Singular);
        }
        let m = &self.data;
        let cof = Mat3::from_rows([
            [
                m[1][1] * m[2][2] - m[1][2] * m[2][1],
                m[0][2] * m[2][1] - m[0][1] * m[2][2],
                m[0][1] * m[1][2] - m[0][2] * m[1][1],
            ],
            [
                m[1][2] * m[2][0] - m[1][0] * m[2][2],
                m[0][0] * m[2][2] - m[0][2] * m[2][0],
                m[0][2] * m[1][0] - m[0][0] * m[1][2],
            ],
            [
                m[1][0] * m[2][1] - m[1][1] * m[2][0],
                m[0][1] * m[2][0] - m[0][0] * m[2][1],
                m[0][0] * m[1][1] - m[0][1] * m[1][0],
            ],
        ]);
        Ok(cof.scale(1.0 / det))
    }

    pub fn from_columns(a: &Vec3, b: &Vec3, c: &Vec3) -> Mat3 {
        Mat3::from_rows([[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]])
    }
}

/// Skew-symmetric matrix `[a×]` such that `[a×] b = a × b`.
pub fn skew(a: &Vec3) -> Mat3 {
    Mat3::from_rows([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])
}

/// Elementary rotation about the x axis.
pub fn rot_x(angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    Mat3::from_rows([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
}

/// Elementary rotation about the y axis.
pub fn rot_y(angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    Mat3::from_rows([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
}

/// Elementary rotation about the z axis.
pub fn rot_z(angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    Mat3::from_rows([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
}

impl<const R: usize, const C: usize> Index<(usize, usize)> for Matrix<R, C> {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i][j]
    }
}

impl<const R: usize, const C: usize> IndexMut<(usize, usize)> for Matrix<R, C> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i][j]
    }
}

impl<const R: usize, const C: usize> AddAssign for Matrix<R, C> {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self
            .data
            .iter_mut()
            .flatten()
            .zip(rhs.data.iter().flatten())
        {
            *a += b;
        }
    }
}

impl<const R: usize, const C: usize> SubAssign for Matrix<R, C> {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self
            .data
            .iter_mut()
            .flatten()
            .zip(rhs.data.iter().flatten())
        {
            *a -= b;
        }
    }
}

impl<const R: usize, const C: usize> Add for Matrix<R, C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<const R: usize, const C: usize> Sub for Matrix<R, C> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<const R: usize, const C: usize> Neg for Matrix<R, C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const R: usize, const C: usize> Mul<f64> for Matrix<R, C> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl<const R: usize, const K: usize, const C: usize> Mul<Matrix<K, C>> for Matrix<R, K> {
    type Output = Matrix<R, C>;
    fn mul(self, rhs: Matrix<K, C>) -> Matrix<R, C> {
        let mut out = Matrix::<R, C>::zeros();
        for i in 0..R {
            for k in 0..K {
                let a = self.data[i][k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..C {
                    out.data[i][j] += a * rhs.data[k][j];
                }
            }
        }
        out
    }
}

impl<const R: usize, const C: usize> Mul<Vector<C>> for Matrix<R, C> {
    type Output = Vector<R>;
    fn mul(self, v: Vector<C>) -> Vector<R> {
        self.mul_vec(&v)
    }
}
