use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::decompose::{decompose_action, Decomposition};
use super::element::GroupElement;
use super::irrep::Irrep;
use super::spec::GroupSpec;
use crate::error::{Error, Result};
use crate::linalg::block_diag;

/// How a representation was constructed.
#[derive(Clone, Debug, PartialEq)]
pub enum RepName {
    Trivial,
    Vector,
    Regular,
    /// Permutation action on the cosets `G/H`.
    Quotient(GroupSpec),
    Irrep,
    Custom,
}

impl fmt::Display for RepName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepName::Trivial => write!(f, "trivial"),
            RepName::Vector => write!(f, "vector"),
            RepName::Regular => write!(f, "regular"),
            RepName::Quotient(h) => write!(f, "quotient:{h}"),
            RepName::Irrep => write!(f, "irrep"),
            RepName::Custom => write!(f, "custom"),
        }
    }
}

/// Exact permutation action on cosets `gH`, stored by coset representatives.
#[derive(Clone, Debug)]
struct CosetAction {
    elements: Vec<GroupElement>,
    /// `coset_of[i]` is the coset index of `elements[i]`.
    coset_of: Vec<usize>,
    representatives: Vec<GroupElement>,
}

impl CosetAction {
    fn new(group: &GroupSpec, sub: &GroupSpec) -> Self {
        let elements = group.elements();
        let sub_elems = sub.elements();
        let mut coset_of = vec![usize::MAX; elements.len()];
        let mut representatives = Vec::new();
        for (i, g) in elements.iter().enumerate() {
            if coset_of[i] != usize::MAX {
                continue;
            }
            let idx = representatives.len();
            representatives.push(*g);
            for h in &sub_elems {
                let gh = g.compose(h);
                let j = elements.iter().position(|e| *e == gh).expect("subgroup closure");
                coset_of[j] = idx;
            }
        }
        CosetAction { elements, coset_of, representatives }
    }

    fn coset_index(&self, g: &GroupElement) -> Option<usize> {
        self.elements.iter().position(|e| e == g).map(|i| self.coset_of[i])
    }

    fn matrix(&self, g: &GroupElement) -> Result<DMatrix<f64>> {
        let n = self.representatives.len();
        let mut m = DMatrix::zeros(n, n);
        for (c, r) in self.representatives.iter().enumerate() {
            let row = self
                .coset_index(&g.compose(r))
                .ok_or_else(|| Error::InvalidArgument(format!("element {g} is not in the group")))?;
            m[(row, c)] = 1.0;
        }
        Ok(m)
    }
}

/// A finite-dimensional real representation `ρ(g) = Q⁻¹ (⊕ψᵢ(g)) Q`.
#[derive(Clone, Debug)]
pub struct Rep {
    group: GroupSpec,
    name: RepName,
    irreps: Vec<Irrep>,
    q: DMatrix<f64>,
    q_inv: DMatrix<f64>,
    cosets: Option<CosetAction>,
}

impl Rep {
    /// Direct sum of irreps with the given change of basis.
    pub fn from_irreps(group: GroupSpec, irreps: Vec<Irrep>, q: DMatrix<f64>) -> Result<Rep> {
        for psi in &irreps {
            group.check_irrep(psi)?;
        }
        let dim: usize = irreps.iter().map(Irrep::dim).sum();
        if q.nrows() != dim || q.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "change of basis is {}x{} but the irreps have total dimension {dim}",
                q.nrows(),
                q.ncols()
            )));
        }
        let q_inv = q
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("change of basis is singular".into()))?;
        Ok(Rep { group, name: RepName::Custom, irreps, q, q_inv, cosets: None })
    }

    fn named(group: GroupSpec, name: RepName, irreps: Vec<Irrep>) -> Rep {
        let dim: usize = irreps.iter().map(Irrep::dim).sum();
        Rep {
            group,
            name,
            irreps,
            q: DMatrix::identity(dim, dim),
            q_inv: DMatrix::identity(dim, dim),
            cosets: None,
        }
    }

    pub fn trivial(group: GroupSpec) -> Rep {
        Rep::named(group, RepName::Trivial, vec![Irrep::Trivial])
    }

    pub fn irrep(group: GroupSpec, psi: Irrep) -> Result<Rep> {
        group.check_irrep(&psi)?;
        Ok(Rep::named(group, RepName::Irrep, vec![psi]))
    }

    /// The defining action on ℝ², `ρ(g) = g`.
    pub fn vector(group: GroupSpec) -> Rep {
        use super::spec::GroupKind::*;
        let irreps = match group.kind {
            SO2 => vec![Irrep::Freq(1)],
            O2 => vec![Irrep::FlipFreq(1)],
            Cyclic(1) => vec![Irrep::Trivial, Irrep::Trivial],
            Cyclic(2) => vec![Irrep::Alternating { freq: 1, flip_sign: false }; 2],
            Cyclic(_) => vec![Irrep::Freq(1)],
            Dihedral(1) | Reflection => vec![Irrep::Trivial, Irrep::Sign],
            Dihedral(2) => vec![
                Irrep::Alternating { freq: 1, flip_sign: false },
                Irrep::Alternating { freq: 1, flip_sign: true },
            ],
            Dihedral(_) => vec![Irrep::FlipFreq(1)],
        };
        Rep::named(group, RepName::Vector, irreps)
    }

    pub fn direct_sum(reps: &[Rep]) -> Result<Rep> {
        let group = reps
            .first()
            .map(|r| r.group)
            .ok_or_else(|| Error::InvalidArgument("empty direct sum".into()))?;
        if reps.iter().any(|r| r.group != group) {
            return Err(Error::InvalidArgument("direct sum of reps of different groups".into()));
        }
        let irreps = reps.iter().flat_map(|r| r.irreps.iter().copied()).collect();
        let q = block_diag(&reps.iter().map(|r| r.q.clone()).collect::<Vec<_>>());
        Rep::from_irreps(group, irreps, q)
    }

    /// A copy with the same irreps and `Q` replaced by `Q · t`, so that the
    /// new `ρ'(g) = t⁻¹ ρ(g) t`.
    pub fn conjugated(&self, t: &DMatrix<f64>) -> Result<Rep> {
        Rep::from_irreps(self.group, self.irreps.clone(), &self.q * t)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn name(&self) -> &RepName {
        &self.name
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn q_inv(&self) -> &DMatrix<f64> {
        &self.q_inv
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn is_permutation(&self) -> bool {
        self.cosets.is_some()
    }

    /// Block-diagonal irrep matrix `⊕ψᵢ(g)`.
    pub fn block_matrix(&self, g: &GroupElement) -> Result<DMatrix<f64>> {
        Ok(block_diag(&self.irreps.iter().map(|p| p.matrix(g)).collect::<Result<Vec<_>>>()?))
    }

    /// `ρ(g)`; exact permutation matrices for regular and quotient reps.
    pub fn matrix(&self, g: &GroupElement) -> Result<DMatrix<f64>> {
        if let Some(c) = &self.cosets {
            return c.matrix(g);
        }
        let b = self.block_matrix(g)?;
        if self.q_is_identity() {
            Ok(b)
        } else {
            Ok(&self.q_inv * b * &self.q)
        }
    }

    pub fn q_is_identity(&self) -> bool {
        self.q == DMatrix::identity(self.dim(), self.dim())
    }
}

/// Regular representation: one basis vector per group element, in the
/// enumeration order of [`GroupSpec::elements`].
pub fn regular_rep(group: &GroupSpec) -> Result<Rep> {
    let trivial = match group.kind {
        super::spec::GroupKind::SO2 | super::spec::GroupKind::O2 => {
            return Err(Error::InfiniteGroup(group.to_string()))
        }
        _ => GroupSpec::cyclic(1),
    };
    let mut rep = quotient_rep(group, &trivial)?;
    rep.name = RepName::Regular;
    Ok(rep)
}

/// Permutation representation on the cosets `G/H`, ordered by the first
/// element of each coset in the enumeration of `G`.
pub fn quotient_rep(group: &GroupSpec, sub: &GroupSpec) -> Result<Rep> {
    if !group.is_finite() {
        return Err(Error::InfiniteGroup(group.to_string()));
    }
    if !sub.is_finite() {
        return Err(Error::InfiniteGroup(sub.to_string()));
    }
    if !group.is_subgroup(sub) {
        return Err(Error::NotASubgroup { sub: sub.to_string(), group: group.to_string() });
    }
    let cosets = CosetAction::new(group, sub);
    let dim = cosets.representatives.len();
    let Decomposition { irreps, q, q_inv } =
        decompose_action(group, dim, |g| cosets.matrix(g).expect("enumerated element"))?;
    Ok(Rep { group: *group, name: RepName::Quotient(*sub), irreps, q, q_inv, cosets: Some(cosets) })
}

/// The irreps and change of basis `Q` with `Q ρ(g) Q⁻¹ = ⊕ψᵢ(g)`.
///
/// Reps carry their decomposition from construction, so this is a lookup
/// that is idempotent on already-decomposed reps.
pub fn decompose(rho: &Rep) -> (Vec<Irrep>, DMatrix<f64>) {
    (rho.irreps.clone(), rho.q.clone())
}

/// Decomposes an arbitrary matrix-valued action of `group` into irreps.
pub fn decompose_matrices<F>(group: &GroupSpec, dim: usize, rho: F) -> Result<Rep>
where
    F: Fn(&GroupElement) -> DMatrix<f64>,
{
    let d = decompose_action(group, dim, rho)?;
    Ok(Rep { group: *group, name: RepName::Custom, irreps: d.irreps, q: d.q, q_inv: d.q_inv, cosets: None })
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    group: GroupSpec,
    name: String,
    irreps: Vec<String>,
    #[serde(rename = "Q")]
    q: Vec<Vec<f64>>,
}

impl Serialize for Rep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RepJson {
            group: self.group,
            name: self.name.to_string(),
            irreps: self.irreps.iter().map(Irrep::to_string).collect(),
            q: self.q.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = RepJson::deserialize(d)?;
        let g = j.group;
        let irreps: Vec<Irrep> =
            j.irreps.iter().map(|s| s.parse()).collect::<Result<_>>().map_err(D::Error::custom)?;
        let rebuilt = match j.name.as_str() {
            "trivial" => Ok(Rep::trivial(g)),
            "vector" => Ok(Rep::vector(g)),
            "regular" => regular_rep(&g),
            "irrep" if irreps.len() == 1 => Rep::irrep(g, irreps[0]),
            name if name.starts_with("quotient:") => {
                name["quotient:".len()..].parse().and_then(|h: GroupSpec| quotient_rep(&g, &h))
            }
            _ => {
                let n = j.q.len();
                if j.q.iter().any(|r| r.len() != n) {
                    return Err(D::Error::custom("Q must be square"));
                }
                let q = DMatrix::from_fn(n, n, |a, b| j.q[a][b]);
                Rep::from_irreps(g, irreps.clone(), q)
            }
        }
        .map_err(D::Error::custom)?;
        if rebuilt.irreps != irreps {
            return Err(D::Error::custom("irreps do not match the named representation"));
        }
        Ok(rebuilt)
    }
}

/// Parses the CLI shorthand `trivial | vector | regular | quotient:N/M |
/// irrep:k | irrep:j,k` for representations of `group`.
///
/// `quotient:N/M` is the action of `group` on cosets of `C_M`, where `N`
/// must be the order of the rotation subgroup of `group`. `irrep:k` is the
/// frequency-`k` irrep that is invariant under the flip; `irrep:1,k`
/// selects the flip-sign variant of dihedral groups.
pub fn parse_rep(group: &GroupSpec, s: &str) -> Result<Rep> {
    let s = s.trim();
    match s {
        "trivial" => return Ok(Rep::trivial(*group)),
        "vector" => return Ok(Rep::vector(*group)),
        "regular" => return regular_rep(group),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("quotient:") {
        let (n, m) = rest
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("expected quotient:N/M, got '{s}'")))?;
        let parse = |t: &str| -> Result<u32> {
            t.trim().parse::<u32>().ok().filter(|&v| v >= 1).ok_or_else(|| Error::Parse(format!("bad order '{t}' in '{s}'")))
        };
        let (n, m) = (parse(n)?, parse(m)?);
        if group.rotation_order() != Some(n) {
            return Err(Error::InvalidArgument(format!("'{s}' needs a group with {n} rotations, got {group}")));
        }
        return quotient_rep(group, &GroupSpec::cyclic(m));
    }
    if let Some(rest) = s.strip_prefix("irrep:") {
        let (j, k) = match rest.split_once(',') {
            Some((j, k)) => (j.trim(), k.trim()),
            None => ("0", rest.trim()),
        };
        let bad = || Error::Parse(format!("bad irrep index in '{s}'"));
        let j: u32 = j.parse().map_err(|_| bad())?;
        let k: u32 = k.parse().map_err(|_| bad())?;
        if j > 1 {
            return Err(bad());
        }
        let psi = irrep_by_index(group, j == 1, k)
            .ok_or_else(|| Error::IncompatibleIrrep { irrep: s.to_string(), context: group.to_string() })?;
        return Rep::irrep(*group, psi);
    }
    Err(Error::Parse(format!("unknown representation '{s}'")))
}

/// The irrep of `group` with angular frequency `k` and the given flip
/// behaviour, if there is one.
pub fn irrep_by_index(group: &GroupSpec, flip_sign: bool, k: u32) -> Option<Irrep> {
    let candidates: Vec<Irrep> = if k == 0 {
        vec![if flip_sign { Irrep::Sign } else { Irrep::Trivial }]
    } else {
        vec![
            Irrep::Freq(k),
            Irrep::FlipFreq(k),
            Irrep::Alternating { freq: k, flip_sign },
        ]
    };
    candidates.into_iter().find(|p| {
        group.supports_irrep(p) && (p.dim() == 2 && !flip_sign || p.dim() == 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn perm(rows: &[&[f64]]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j])
    }

    #[test]
    fn regular_examples() {
        let c2 = regular_rep(&GroupSpec::cyclic(2)).unwrap();
        let m = c2.matrix(&GroupElement::rotation_turns(1, 2)).unwrap();
        assert_eq!(m, perm(&[&[0.0, 1.0], &[1.0, 0.0]]));

        let c4 = regular_rep(&GroupSpec::cyclic(4)).unwrap();
        let m = c4.matrix(&GroupElement::rotation_turns(1, 4)).unwrap();
        let shift = perm(&[
            &[0.0, 0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        assert_eq!(m, shift);
        for g in [GroupSpec::cyclic(3), GroupSpec::dihedral(4), GroupSpec::reflection()] {
            let r = regular_rep(&g).unwrap();
            let n = g.order().unwrap();
            assert_eq!(r.matrix(&GroupElement::identity()).unwrap(), DMatrix::identity(n, n));
        }
        assert!(matches!(regular_rep(&GroupSpec::so2()), Err(Error::InfiniteGroup(_))));
    }

    #[test]
    fn regular_c4_decomposition() {
        let r = regular_rep(&GroupSpec::cyclic(4)).unwrap();
        assert_eq!(
            r.irreps(),
            &[Irrep::Trivial, Irrep::Freq(1), Irrep::Alternating { freq: 2, flip_sign: false }]
        );
        for g in GroupSpec::cyclic(4).elements() {
            let lhs = r.q() * r.matrix(&g).unwrap() * r.q_inv();
            assert!((lhs - r.block_matrix(&g).unwrap()).amax() < 1e-10);
        }
    }

    #[test]
    fn quotient_examples() {
        let c4 = GroupSpec::cyclic(4);
        assert_eq!(quotient_rep(&c4, &GroupSpec::cyclic(2)).unwrap().dim(), 2);
        let full = quotient_rep(&c4, &GroupSpec::cyclic(1)).unwrap();
        let reg = regular_rep(&c4).unwrap();
        for g in c4.elements() {
            assert_eq!(full.matrix(&g).unwrap(), reg.matrix(&g).unwrap());
        }
        let one = quotient_rep(&c4, &c4).unwrap();
        assert_eq!(one.dim(), 1);
        assert_eq!(one.irreps(), &[Irrep::Trivial]);
        assert!(matches!(
            quotient_rep(&c4, &GroupSpec::cyclic(3)),
            Err(Error::NotASubgroup { .. })
        ));
        let d4_flip = quotient_rep(&GroupSpec::dihedral(4), &GroupSpec::reflection()).unwrap();
        assert_eq!(d4_flip.dim(), 4);
    }

    #[test]
    fn already_decomposed_is_identity() {
        let g = GroupSpec::cyclic(8);
        let r = Rep::from_irreps(g, vec![Irrep::Trivial, Irrep::Freq(1)], DMatrix::identity(3, 3)).unwrap();
        let (irreps, q) = decompose(&r);
        assert_eq!(irreps, vec![Irrep::Trivial, Irrep::Freq(1)]);
        assert_eq!(q, DMatrix::identity(3, 3));
        let single = Rep::irrep(g, Irrep::Freq(3)).unwrap();
        assert_eq!(decompose(&single).1, DMatrix::identity(2, 2));
    }

    #[test]
    fn decompose_recovers_conjugated_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in [GroupSpec::cyclic(6), GroupSpec::dihedral(5), GroupSpec::so2().with_samples(16)] {
            let irreps: Vec<Irrep> = g.irreps_up_to(3);
            let dim: usize = irreps.iter().map(Irrep::dim).sum();
            let t = DMatrix::from_fn(dim, dim, |i, j| {
                rng.random_range(-0.5..0.5) + if i == j { 2.0 } else { 0.0 }
            });
            let base = Rep::from_irreps(g, irreps.clone(), t).unwrap();
            let d = decompose_matrices(&g, dim, |e| base.matrix(e).unwrap()).unwrap();
            assert_eq!(d.irreps(), irreps.as_slice());
            for e in g.elements() {
                let rebuilt = d.q_inv() * d.block_matrix(&e).unwrap() * d.q();
                assert!((rebuilt - base.matrix(&e).unwrap()).amax() < 1e-10);
            }
        }
    }

    #[test]
    fn homomorphism_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let groups = [GroupSpec::cyclic(16), GroupSpec::dihedral(8), GroupSpec::reflection(), GroupSpec::o2()];
        for g in groups {
            let mut reps = vec![Rep::trivial(g), Rep::vector(g)];
            if g.is_finite() {
                reps.push(regular_rep(&g).unwrap());
            }
            for rep in &reps {
                for _ in 0..1000 {
                    let a = g.random_element(&mut rng);
                    let b = g.random_element(&mut rng);
                    let lhs = rep.matrix(&a).unwrap() * rep.matrix(&b).unwrap();
                    let rhs = rep.matrix(&a.compose(&b)).unwrap();
                    assert!((lhs - rhs).amax() <= 1e-10);
                    let m = rep.matrix(&a).unwrap();
                    let n = m.nrows();
                    assert!((m.transpose() * &m - DMatrix::identity(n, n)).amax() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn vector_rep_is_element_matrix() {
        for g in [
            GroupSpec::cyclic(2),
            GroupSpec::cyclic(4),
            GroupSpec::dihedral(2),
            GroupSpec::dihedral(3),
            GroupSpec::reflection(),
            GroupSpec::o2().with_samples(8),
        ] {
            let v = Rep::vector(g);
            for e in g.elements() {
                let m = v.matrix(&e).unwrap();
                let a = e.matrix();
                let expected = DMatrix::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]]);
                assert!((m - expected).amax() < 1e-15, "{g} {e}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let g = GroupSpec::dihedral(4);
        for rep in [
            Rep::trivial(g),
            Rep::vector(g),
            regular_rep(&g).unwrap(),
            quotient_rep(&g, &GroupSpec::cyclic(2)).unwrap(),
            Rep::irrep(g, Irrep::Sign).unwrap(),
        ] {
            let s = serde_json::to_string(&rep).unwrap();
            let back: Rep = serde_json::from_str(&s).unwrap();
            assert_eq!(back.irreps(), rep.irreps());
            assert_eq!(back.q(), rep.q());
            assert_eq!(back.name(), rep.name());
        }
    }

    #[test]
    fn shorthand() {
        let c8 = GroupSpec::cyclic(8);
        assert_eq!(parse_rep(&c8, "quotient:8/2").unwrap().dim(), 4);
        assert!(parse_rep(&c8, "quotient:4/2").is_err());
        assert_eq!(parse_rep(&c8, "irrep:4").unwrap().irreps()[0], Irrep::Alternating { freq: 4, flip_sign: false });
        assert_eq!(parse_rep(&c8, "irrep:2").unwrap().irreps()[0], Irrep::Freq(2));
        let d4 = GroupSpec::dihedral(4);
        assert_eq!(parse_rep(&d4, "irrep:1,0").unwrap().irreps()[0], Irrep::Sign);
        assert_eq!(parse_rep(&d4, "irrep:1").unwrap().irreps()[0], Irrep::FlipFreq(1));
        assert!(parse_rep(&d4, "irrep:1,1").is_err());
        assert!(parse_rep(&c8, "irrep:5").is_err());
    }
}
