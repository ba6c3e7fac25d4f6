//! Elements of the planar point group O(2).
//!
//! Rotations belonging to finite groups are stored as exact fractions of a
//! full turn so that composition is closed without rounding and quarter
//! turns produce exact `0`/`±1` matrices.

use std::f64::consts::TAU;
use std::fmt;

use num_integer::Integer;

/// A planar rotation, either an exact fraction of a turn or an angle in radians.
#[derive(Clone, Copy, Debug)]
pub enum Rotation {
    /// `num / den` of a full turn, reduced, with `0 <= num < den`.
    Turns { num: u64, den: u64 },
    /// Angle in radians, normalized into `[0, 2π)`.
    Radians(f64),
}

impl Rotation {
    pub fn turns(num: i64, den: u64) -> Self {
        assert!(den > 0, "rotation denominator must be positive");
        let d = den as i64;
        let n = num.rem_euclid(d) as u64;
        let g = n.gcd(&den).max(1);
        Rotation::Turns { num: n / g, den: den / g }
    }

    pub fn radians(theta: f64) -> Self {
        let t = theta.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU
        Rotation::Radians(if t >= TAU { 0.0 } else { t })
    }

    pub fn theta(&self) -> f64 {
        match *self {
            Rotation::Turns { num, den } => TAU * num as f64 / den as f64,
            Rotation::Radians(t) => t,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Rotation::Turns { num, .. } => num == 0,
            Rotation::Radians(t) => t == 0.0,
        }
    }

    /// `k` times this rotation (frequency multiplication).
    pub fn times(self, k: i64) -> Rotation {
        match self {
            Rotation::Turns { num, den } => {
                let n = (num as i128 * k as i128).rem_euclid(den as i128) as i64;
                Rotation::turns(n, den)
            }
            Rotation::Radians(t) => Rotation::radians(t * k as f64),
        }
    }

    /// Number of quarter turns if this rotation is an exact multiple of π/2.
    pub fn quarter_turns(&self) -> Option<u8> {
        match *self {
            Rotation::Turns { num, den } if (4 * num) % den == 0 => Some(((4 * num) / den) as u8),
            _ => None,
        }
    }

    /// `(cos θ, sin θ)`, exact at multiples of π/2.
    pub fn cos_sin(&self) -> (f64, f64) {
        match self.quarter_turns() {
            Some(0) => (1.0, 0.0),
            Some(1) => (0.0, 1.0),
            Some(2) => (-1.0, 0.0),
            Some(3) => (0.0, -1.0),
            _ => {
                let t = self.theta();
                (t.cos(), t.sin())
            }
        }
    }

    fn approx_eq(&self, other: &Rotation, tol: f64) -> bool {
        let d = (self.theta() - other.theta()).rem_euclid(TAU);
        d.min(TAU - d) <= tol
    }
}

impl std::ops::Add for Rotation {
    type Output = Rotation;

    fn add(self, other: Rotation) -> Rotation {
        match (self, other) {
            (Rotation::Turns { num: a, den: da }, Rotation::Turns { num: b, den: db }) => {
                let l = da.lcm(&db);
                let n = a * (l / da) + b * (l / db);
                Rotation::turns((n % l) as i64, l)
            }
            _ => Rotation::radians(self.theta() + other.theta()),
        }
    }
}

impl std::ops::Neg for Rotation {
    type Output = Rotation;

    fn neg(self) -> Rotation {
        match self {
            Rotation::Turns { num, den } => Rotation::turns(-(num as i64), den),
            Rotation::Radians(t) => Rotation::radians(-t),
        }
    }
}

impl PartialEq for Rotation {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rotation::Turns { num: a, den: da }, Rotation::Turns { num: b, den: db }) => {
                a == b && da == db
            }
            _ => self.theta() == other.theta(),
        }
    }
}

/// Element `g = S^flip · R(θ)` of O(2), where `S = diag(1, -1)` reflects
/// about the x₁-axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement {
    pub rotation: Rotation,
    pub flip: bool,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { rotation: Rotation::turns(0, 1), flip: false }
    }

    pub fn rotation_turns(num: i64, den: u64) -> Self {
        GroupElement { rotation: Rotation::turns(num, den), flip: false }
    }

    pub fn rotation_radians(theta: f64) -> Self {
        GroupElement { rotation: Rotation::radians(theta), flip: false }
    }

    /// The reflection about the x₁-axis.
    pub fn reflection() -> Self {
        GroupElement { rotation: Rotation::turns(0, 1), flip: true }
    }

    pub fn new(rotation: Rotation, flip: bool) -> Self {
        GroupElement { rotation, flip }
    }

    pub fn theta(&self) -> f64 {
        self.rotation.theta()
    }

    pub fn is_identity(&self) -> bool {
        !self.flip && self.rotation.is_zero()
    }

    /// Group product `self · other` (apply `other` first).
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        // S^a R(α) S^b R(β) = S^(a+b) R((-1)^b α + β)
        let first = if other.flip { -self.rotation } else { self.rotation };
        GroupElement { rotation: first + other.rotation, flip: self.flip ^ other.flip }
    }

    pub fn inverse(&self) -> GroupElement {
        if self.flip {
            *self
        } else {
            GroupElement { rotation: -self.rotation, flip: false }
        }
    }

    /// The 2×2 matrix acting on ℝ².
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        element_matrix(self)
    }

    pub fn approx_eq(&self, other: &GroupElement, tol: f64) -> bool {
        self.flip == other.flip && self.rotation.approx_eq(&other.rotation, tol)
    }
}

/// `R(θ)` for plain rotations, `S·R(θ)` with `S = diag(1, -1)` for flips.
pub fn element_matrix(g: &GroupElement) -> [[f64; 2]; 2] {
    let (c, s) = g.rotation.cos_sin();
    if g.flip {
        [[c, -s], [-s, -c]]
    } else {
        [[c, -s], [s, c]]
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rotation {
            Rotation::Turns { num, den } => write!(f, "r({num}/{den})")?,
            Rotation::Radians(t) => write!(f, "r({t:.6} rad)")?,
        }
        if self.flip {
            write!(f, "·s")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
        let mut c = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        c
    }

    #[test]
    fn standard_matrices() {
        assert_eq!(element_matrix(&GroupElement::identity()), [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(
            element_matrix(&GroupElement::rotation_turns(1, 4)),
            [[0.0, -1.0], [1.0, 0.0]]
        );
        assert_eq!(element_matrix(&GroupElement::reflection()), [[1.0, 0.0], [0.0, -1.0]]);
    }

    #[test]
    fn composition_matches_matrix_product() {
        let elems = [
            GroupElement::rotation_radians(0.3),
            GroupElement::new(Rotation::radians(1.1), true),
            GroupElement::new(Rotation::turns(3, 8), true),
            GroupElement::rotation_turns(5, 16),
        ];
        for g in &elems {
            for h in &elems {
                let gh = g.compose(h).matrix();
                let prod = matmul(g.matrix(), h.matrix());
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((gh[i][j] - prod[i][j]).abs() < 1e-12);
                    }
                }
            }
            let e = g.compose(&g.inverse());
            assert!(e.approx_eq(&GroupElement::identity(), 1e-12));
        }
    }

    #[test]
    fn exact_turn_arithmetic() {
        let a = GroupElement::rotation_turns(3, 4);
        let b = GroupElement::rotation_turns(1, 2);
        assert_eq!(a.compose(&b), GroupElement::rotation_turns(1, 4));
        let s = GroupElement::reflection();
        assert_eq!(s.compose(&s), GroupElement::identity());
        // s r s = r^-1
        let r = GroupElement::rotation_turns(1, 16);
        assert_eq!(s.compose(&r).compose(&s), r.inverse());
    }

    #[test]
    fn theta_is_normalized() {
        let g = GroupElement::rotation_radians(-0.5);
        assert!(g.theta() >= 0.0 && g.theta() < TAU);
        let h = GroupElement::rotation_turns(-1, 4);
        assert_eq!(h.rotation, Rotation::Turns { num: 3, den: 4 });
    }
}
