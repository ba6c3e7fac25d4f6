use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::element::{GroupElement, Rotation};
use super::irrep::Irrep;
use crate::error::{Error, Result};

/// Default number of equispaced samples standing in for SO(2)/O(2).
pub const DEFAULT_SAMPLE_COUNT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Cyclic(u32),
    Dihedral(u32),
    SO2,
    O2,
    /// The two-element group `{identity, reflection about the x₁-axis}`.
    Reflection,
}

/// A point group `G ≤ O(2)` together with the number of samples used when
/// it is continuous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub sample_count: usize,
}

impl GroupSpec {
    pub fn new(kind: GroupKind) -> Self {
        GroupSpec { kind, sample_count: DEFAULT_SAMPLE_COUNT }
    }

    pub fn cyclic(n: u32) -> Self {
        assert!(n >= 1, "cyclic group order must be positive");
        Self::new(GroupKind::Cyclic(n))
    }

    pub fn dihedral(n: u32) -> Self {
        assert!(n >= 1, "dihedral group order must be positive");
        Self::new(GroupKind::Dihedral(n))
    }

    pub fn so2() -> Self {
        Self::new(GroupKind::SO2)
    }

    pub fn o2() -> Self {
        Self::new(GroupKind::O2)
    }

    pub fn reflection() -> Self {
        Self::new(GroupKind::Reflection)
    }

    pub fn with_samples(mut self, sample_count: usize) -> Self {
        assert!(sample_count > 0);
        self.sample_count = sample_count;
        self
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.kind, GroupKind::SO2 | GroupKind::O2)
    }

    pub fn has_flip(&self) -> bool {
        matches!(self.kind, GroupKind::Dihedral(_) | GroupKind::O2 | GroupKind::Reflection)
    }

    /// Order of the rotation subgroup; `None` for SO(2)/O(2).
    pub fn rotation_order(&self) -> Option<u32> {
        match self.kind {
            GroupKind::Cyclic(n) | GroupKind::Dihedral(n) => Some(n),
            GroupKind::Reflection => Some(1),
            GroupKind::SO2 | GroupKind::O2 => None,
        }
    }

    pub fn order(&self) -> Option<usize> {
        match self.kind {
            GroupKind::Cyclic(n) => Some(n as usize),
            GroupKind::Dihedral(n) => Some(2 * n as usize),
            GroupKind::Reflection => Some(2),
            GroupKind::SO2 | GroupKind::O2 => None,
        }
    }

    /// Number of rotations enumerated by [`elements`](Self::elements).
    fn enumerated_rotations(&self) -> u64 {
        match self.rotation_order() {
            Some(n) => n as u64,
            None => self.sample_count as u64,
        }
    }

    /// All elements of a finite group, or `sample_count` equispaced
    /// rotations (each also composed with the flip for O(2)).
    ///
    /// Rotations come first in increasing angle, then the same rotations
    /// followed by the flip.
    pub fn elements(&self) -> Vec<GroupElement> {
        let n = self.enumerated_rotations();
        let rotations: Vec<Rotation> = (0..n).map(|k| Rotation::turns(k as i64, n)).collect();
        let mut out: Vec<GroupElement> =
            rotations.iter().map(|&r| GroupElement::new(r, false)).collect();
        if self.has_flip() {
            // rotation first, then the flip: S · R(θ)
            out.extend(rotations.iter().map(|&r| GroupElement::new(r, true)));
        }
        out
    }

    /// The smallest positive rotation that generates the enumerated rotations.
    pub fn rotation_generator(&self) -> GroupElement {
        GroupElement::rotation_turns(1, self.enumerated_rotations())
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        if g.flip && !self.has_flip() {
            return false;
        }
        match self.kind {
            GroupKind::SO2 | GroupKind::O2 => true,
            _ => {
                let n = self.rotation_order().unwrap() as u64;
                match g.rotation {
                    Rotation::Turns { num, den } => (num * n).is_multiple_of(den),
                    Rotation::Radians(_) => false,
                }
            }
        }
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements().iter().position(|e| e == g)
    }

    /// Uniformly random element (exact turns for finite groups).
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        match self.kind {
            GroupKind::SO2 => GroupElement::rotation_radians(rng.random_range(0.0..std::f64::consts::TAU)),
            GroupKind::O2 => GroupElement::new(
                Rotation::radians(rng.random_range(0.0..std::f64::consts::TAU)),
                rng.random_bool(0.5),
            ),
            _ => {
                let elems = self.elements();
                elems[rng.random_range(0..elems.len())]
            }
        }
    }

    /// Irreducible representations, in canonical order. Continuous groups
    /// list frequencies up to `max_freq`.
    pub fn irreps_up_to(&self, max_freq: u32) -> Vec<Irrep> {
        let mut out = vec![Irrep::Trivial];
        match self.kind {
            GroupKind::Cyclic(n) => {
                out.extend((1..).take_while(|k| 2 * k < n).filter(|&k| k <= max_freq).map(Irrep::Freq));
                if n % 2 == 0 && n / 2 <= max_freq {
                    out.push(Irrep::Alternating { freq: n / 2, flip_sign: false });
                }
            }
            GroupKind::Dihedral(n) => {
                out.push(Irrep::Sign);
                out.extend(
                    (1..).take_while(|k| 2 * k < n).filter(|&k| k <= max_freq).map(Irrep::FlipFreq),
                );
                if n % 2 == 0 && n / 2 <= max_freq {
                    out.push(Irrep::Alternating { freq: n / 2, flip_sign: false });
                    out.push(Irrep::Alternating { freq: n / 2, flip_sign: true });
                }
            }
            GroupKind::SO2 => out.extend((1..=max_freq).map(Irrep::Freq)),
            GroupKind::O2 => {
                out.push(Irrep::Sign);
                out.extend((1..=max_freq).map(Irrep::FlipFreq));
            }
            GroupKind::Reflection => out.push(Irrep::Sign),
        }
        out
    }

    /// All irreps of a finite group; for continuous groups all frequencies
    /// resolvable by the sample set.
    pub fn irreps(&self) -> Vec<Irrep> {
        let max = match self.kind {
            GroupKind::SO2 | GroupKind::O2 => (self.sample_count as u32).saturating_sub(1) / 2,
            _ => u32::MAX,
        };
        self.irreps_up_to(max)
    }

    pub fn supports_irrep(&self, psi: &Irrep) -> bool {
        match (self.kind, *psi) {
            (_, Irrep::Trivial) => true,
            (GroupKind::Cyclic(n), Irrep::Freq(k)) => k >= 1 && 2 * k < n,
            (GroupKind::Cyclic(n), Irrep::Alternating { freq, flip_sign: false }) => 2 * freq == n,
            (GroupKind::Dihedral(_), Irrep::Sign) => true,
            (GroupKind::Dihedral(n), Irrep::FlipFreq(k)) => k >= 1 && 2 * k < n,
            (GroupKind::Dihedral(n), Irrep::Alternating { freq, .. }) => 2 * freq == n,
            (GroupKind::SO2, Irrep::Freq(k)) => k >= 1,
            (GroupKind::O2, Irrep::Sign) => true,
            (GroupKind::O2, Irrep::FlipFreq(k)) => k >= 1,
            (GroupKind::Reflection, Irrep::Sign) => true,
            _ => false,
        }
    }

    pub fn check_irrep(&self, psi: &Irrep) -> Result<()> {
        if self.supports_irrep(psi) {
            Ok(())
        } else {
            Err(Error::IncompatibleIrrep { irrep: psi.to_string(), context: self.to_string() })
        }
    }

    /// Whether every element of `sub` lies in `self`.
    pub fn is_subgroup(&self, sub: &GroupSpec) -> bool {
        if !sub.is_finite() {
            return !self.is_finite() && (self.has_flip() || !sub.has_flip());
        }
        sub.elements().iter().all(|g| self.contains(g))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Cyclic(n) => write!(f, "C{n}"),
            GroupKind::Dihedral(n) => write!(f, "D{n}"),
            GroupKind::SO2 => write!(f, "SO2"),
            GroupKind::O2 => write!(f, "O2"),
            GroupKind::Reflection => write!(f, "FLIP"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let upper = t.to_ascii_uppercase();
        let parse_n = |rest: &str| -> Result<u32> {
            match rest.parse::<u32>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(Error::Parse(format!("bad group order in '{t}'"))),
            }
        };
        match upper.as_str() {
            "SO2" | "SO(2)" => Ok(GroupSpec::so2()),
            "O2" | "O(2)" => Ok(GroupSpec::o2()),
            "FLIP" | "REFLECTION" | "{±1}" => Ok(GroupSpec::reflection()),
            _ if upper.starts_with('C') => Ok(GroupSpec::cyclic(parse_n(&upper[1..])?)),
            _ if upper.starts_with('D') => Ok(GroupSpec::dihedral(parse_n(&upper[1..])?)),
            _ => Err(Error::Parse(format!("unknown group '{t}'"))),
        }
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
