use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

/// Stack-allocated column vector of fixed length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector<const N: usize>(pub [f64; N]);

/// Planar point or direction on the ground.
pub type Vec2 = Vector<2>;
/// Three-dimensional vector, the workhorse of the kinematics.
pub type Vec3 = Vector<3>;
/// Twist or wrench coordinates (linear part first).
pub type Vec6 = Vector<6>;
/// Stacked per-foot quantity (four feet, three coordinates each).
pub type Vec12 = Vector<12>;

impl<const N: usize> Default for Vector<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Vector<N> {
    pub const fn zeros() -> Self {
        Self([0.0; N])
    }

    pub const fn from_array(data: [f64; N]) -> Self {
        Self(data)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Copies out the `M` entries starting at `offset`.
    pub fn segment<const M: usize>(&self, offset: usize) -> Vector<M> {
        let mut out = Vector::<M>::zeros();
        out.0.copy_from_slice(&self.0[offset..offset + M]);
        out
    }

    pub fn set_segment<const M: usize>(&mut self, offset: usize, value: &Vector<M>) {
        self.0[offset..offset + M].copy_from_slice(&value.0);
    }
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self([x, y])
    }

    /// z-component of the planar cross product.
    pub fn perp_dot(&self, other: &Vec2) -> f64 {
        self.0[0] * other.0[1] - self.0[1] * other.0[0]
    }
}

impl Vec3 {
    /// Projection onto the ground plane.
    pub fn xy(&self) -> Vec2 {
        Vec2::new(self.0[0], self.0[1])
    }

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self([x, y, z])
    }

    pub const fn unit_x() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub const fn unit_y() -> Self {
        Self([0.0, 1.0, 0.0])
    }

    pub const fn unit_z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn cross(&self, b: &Vec3) -> Vec3 {
        let a = &self.0;
        let b = &b.0;
        Vec3::new(
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
    }
}

impl Vec6 {
    pub fn from_parts(top: &Vec3, bottom: &Vec3) -> Self {
        let mut out = Self::zeros();
        out.set_segment(0, top);
        out.set_segment(3, bottom);
        out
    }

    pub fn top(&self) -> Vec3 {
        self.segment(0)
    }

    pub fn bottom(&self) -> Vec3 {
        self.segment(3)
    }
}

impl Vec12 {
    pub fn foot(&self, i: usize) -> Vec3 {
        self.segment(3 * i)
    }

    pub fn set_foot(&mut self, i: usize, value: &Vec3) {
        self.set_segment(3 * i, value);
    }
}

impl<const N: usize> Index<usize> for Vector<N> {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<const N: usize> IndexMut<usize> for Vector<N> {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl<const N: usize> Add for Vector<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<const N: usize> AddAssign for Vector<N> {
    fn add_assign(&mut self, rhs: Self) {
        self.0
            .iter_mut()
            .zip(rhs.0.iter())
            .for_each(|(a, b)| *a += b);
    }
}

impl<const N: usize> Sub for Vector<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<const N: usize> SubAssign for Vector<N> {
    fn sub_assign(&mut self, rhs: Self) {
        self.0
            .iter_mut()
            .zip(rhs.0.iter())
            .for_each(|(a, b)| *a -= b);
    }
}

impl<const N: usize> Neg for Vector<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul<f64> for Vector<N> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl<const N: usize> Mul<Vector<N>> for f64 {
    type Output = Vector<N>;
    fn mul(self, v: Vector<N>) -> Vector<N> {
        v.scale(self)
    }
}
