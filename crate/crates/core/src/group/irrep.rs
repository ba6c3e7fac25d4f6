use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use super::element::GroupElement;
use super::spec::GroupSpec;
use crate::error::{Error, Result};

/// Real irreducible representations of the subgroups of O(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Irrep {
    /// `g ↦ 1`.
    Trivial,
    /// `g ↦ -1` on flipped elements, `1` on rotations.
    Sign,
    /// Two-dimensional rotation by `kθ` (SO(2) and C_N, `1 ≤ k < N/2`).
    Freq(u32),
    /// Two-dimensional `S^f · R(kθ)` (O(2) and D_N, `1 ≤ k < N/2`).
    FlipFreq(u32),
    /// One-dimensional `cos(freq·θ)`, times `-1` on flips when `flip_sign`
    /// is set. Only defined for `freq = N/2` with `N` even.
    Alternating { freq: u32, flip_sign: bool },
}

impl Irrep {
    pub fn dim(&self) -> usize {
        match self {
            Irrep::Freq(_) | Irrep::FlipFreq(_) => 2,
            _ => 1,
        }
    }

    /// Angular frequency `k`; zero for `Trivial` and `Sign`.
    pub fn frequency(&self) -> u32 {
        match *self {
            Irrep::Trivial | Irrep::Sign => 0,
            Irrep::Freq(k) | Irrep::FlipFreq(k) => k,
            Irrep::Alternating { freq, .. } => freq,
        }
    }

    /// Whether the irrep changes sign under the flip (the `j = 1` family).
    pub fn flip_sign(&self) -> bool {
        matches!(self, Irrep::Sign | Irrep::Alternating { flip_sign: true, .. })
    }

    /// The matrix `ψ(g)`, without checking which group `g` came from.
    ///
    /// Fails only when the irrep cannot act on flipped elements.
    pub fn matrix(&self, g: &GroupElement) -> Result<DMatrix<f64>> {
        let flip_factor = if g.flip { -1.0 } else { 1.0 };
        Ok(match *self {
            Irrep::Trivial => DMatrix::from_element(1, 1, 1.0),
            Irrep::Sign => DMatrix::from_element(1, 1, flip_factor),
            Irrep::Alternating { freq, flip_sign } => {
                let (c, _) = g.rotation.times(freq as i64).cos_sin();
                let s = if flip_sign { flip_factor } else { 1.0 };
                DMatrix::from_element(1, 1, c * s)
            }
            Irrep::Freq(k) => {
                if g.flip {
                    return Err(Error::IncompatibleIrrep {
                        irrep: self.to_string(),
                        context: format!("flipped element {g}"),
                    });
                }
                let (c, s) = g.rotation.times(k as i64).cos_sin();
                DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
            }
            Irrep::FlipFreq(k) => {
                let (c, s) = g.rotation.times(k as i64).cos_sin();
                if g.flip {
                    DMatrix::from_row_slice(2, 2, &[c, -s, -s, -c])
                } else {
                    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
                }
            }
        })
    }

    pub fn character(&self, g: &GroupElement) -> Result<f64> {
        Ok(self.matrix(g)?.trace())
    }
}

/// `ψ(g)`, checking that `ψ` is an irrep of `group` and `g ∈ group`.
pub fn irrep_matrix(group: &GroupSpec, psi: &Irrep, g: &GroupElement) -> Result<DMatrix<f64>> {
    group.check_irrep(psi)?;
    if !group.contains(g) {
        return Err(Error::IncompatibleIrrep {
            irrep: psi.to_string(),
            context: format!("element {g} outside {group}"),
        });
    }
    psi.matrix(g)
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Irrep::Trivial => write!(f, "trivial"),
            Irrep::Sign => write!(f, "sign"),
            Irrep::Freq(k) => write!(f, "freq({k})"),
            Irrep::FlipFreq(k) => write!(f, "flipfreq({k})"),
            Irrep::Alternating { freq, flip_sign: false } => write!(f, "alt({freq})"),
            Irrep::Alternating { freq, flip_sign: true } => write!(f, "altsign({freq})"),
        }
    }
}

impl FromStr for Irrep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "trivial" => return Ok(Irrep::Trivial),
            "sign" => return Ok(Irrep::Sign),
            _ => {}
        }
        let bad = || Error::Parse(format!("unknown irrep '{s}'"));
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let k: u32 = s[open + 1..s.len() - 1].parse().map_err(|_| bad())?;
        match &s[..open] {
            "freq" if k >= 1 => Ok(Irrep::Freq(k)),
            "flipfreq" if k >= 1 => Ok(Irrep::FlipFreq(k)),
            "alt" if k >= 1 => Ok(Irrep::Alternating { freq: k, flip_sign: false }),
            "altsign" if k >= 1 => Ok(Irrep::Alternating { freq: k, flip_sign: true }),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Rotation;

    #[test]
    fn spec_examples() {
        let c4 = GroupSpec::cyclic(4);
        let r = GroupElement::rotation_turns(1, 4);
        assert_eq!(irrep_matrix(&c4, &Irrep::Trivial, &r).unwrap()[(0, 0)], 1.0);
        let m = irrep_matrix(&c4, &Irrep::Freq(1), &r).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        let alt = Irrep::Alternating { freq: 2, flip_sign: false };
        assert_eq!(irrep_matrix(&c4, &alt, &r).unwrap()[(0, 0)], -1.0);
        let c5 = GroupSpec::cyclic(5);
        assert!(matches!(
            irrep_matrix(&c5, &alt, &GroupElement::identity()),
            Err(Error::IncompatibleIrrep { .. })
        ));
    }

    #[test]
    fn homomorphism_on_all_groups() {
        let groups = [
            GroupSpec::cyclic(2),
            GroupSpec::cyclic(7),
            GroupSpec::dihedral(4),
            GroupSpec::dihedral(6),
            GroupSpec::so2().with_samples(12),
            GroupSpec::o2().with_samples(10),
            GroupSpec::reflection(),
        ];
        for g in &groups {
            let elems = g.elements();
            for psi in g.irreps_up_to(5) {
                for a in &elems {
                    for b in &elems {
                        let lhs = psi.matrix(a).unwrap() * psi.matrix(b).unwrap();
                        let rhs = psi.matrix(&a.compose(b)).unwrap();
                        assert!((lhs - rhs).amax() < 1e-12, "{g} {psi}");
                    }
                }
            }
        }
    }

    #[test]
    fn continuous_homomorphism() {
        let a = GroupElement::new(Rotation::radians(0.7), true);
        let b = GroupElement::rotation_radians(2.1);
        let psi = Irrep::FlipFreq(3);
        let lhs = psi.matrix(&a).unwrap() * psi.matrix(&b).unwrap();
        assert!((lhs - psi.matrix(&a.compose(&b)).unwrap()).amax() < 1e-12);
    }

    #[test]
    fn parse_round_trip() {
        for psi in [
            Irrep::Trivial,
            Irrep::Sign,
            Irrep::Freq(3),
            Irrep::FlipFreq(2),
            Irrep::Alternating { freq: 4, flip_sign: true },
        ] {
            assert_eq!(psi.to_string().parse::<Irrep>().unwrap(), psi);
        }
        assert!("freq(0)".parse::<Irrep>().is_err());
    }
}
