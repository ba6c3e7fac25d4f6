//! PDO analogues of lifting and group convolutions on the regular
//! representation.

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::poly::{Poly, PolyMatrix};

fn finite_elements(group: &GroupSpec) -> Result<Vec<crate::group::GroupElement>> {
    if !group.is_finite() {
        return Err(Error::InfiniteGroup(group.to_string()));
    }
    Ok(group.elements())
}

/// The `|G| × 1` column with entries `H(A_k⁻¹ x)`, steerable from the
/// trivial to the regular representation.
pub fn pdo_econv_lift(h: &Poly, group: &GroupSpec) -> Result<PolyMatrix> {
    let elems = finite_elements(group)?;
    Ok(PolyMatrix::column(elems.iter().map(|a| h.compose_linear(&a.inverse().matrix())).collect()))
}

/// The `|G| × |G|` matrix with entries `H_{A_i⁻¹A_j}(A_i⁻¹ x)`, steerable
/// from the regular representation to itself. `family[k]` belongs to the
/// `k`-th enumerated element.
pub fn pdo_econv_hidden(family: &[Poly], group: &GroupSpec) -> Result<PolyMatrix> {
    let elems = finite_elements(group)?;
    if family.len() != elems.len() {
        return Err(Error::WrongFamilySize { expected: elems.len(), got: family.len() });
    }
    let index = |g: &crate::group::GroupElement| elems.iter().position(|e| e == g).expect("closed group");
    Ok(PolyMatrix::from_fn(elems.len(), elems.len(), |i, j| {
        let ai_inv = elems[i].inverse();
        let h = &family[index(&ai_inv.compose(&elems[j]))];
        h.compose_linear(&ai_inv.matrix())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::steerability_residual;
    use crate::group::{regular_rep, Rep};

    #[test]
    fn lift_examples() {
        let c1 = GroupSpec::cyclic(1);
        assert_eq!(pdo_econv_lift(&Poly::x1(), &c1).unwrap(), PolyMatrix::column(vec![Poly::x1()]));
        let c4 = GroupSpec::cyclic(4);
        let lift = pdo_econv_lift(&Poly::x1(), &c4).unwrap();
        assert_eq!(lift, PolyMatrix::column(vec![Poly::x1(), Poly::x2(), -Poly::x1(), -Poly::x2()]));
        let reg = regular_rep(&c4).unwrap();
        assert!(steerability_residual(&lift, &Rep::trivial(c4), &reg, &c4).unwrap() <= 1e-9);
        assert!(matches!(pdo_econv_lift(&Poly::x1(), &GroupSpec::so2()), Err(Error::InfiniteGroup(_))));
    }

    #[test]
    fn hidden_examples() {
        let c2 = GroupSpec::cyclic(2);
        let m = pdo_econv_hidden(&[Poly::x1(), Poly::zero()], &c2).unwrap();
        let want = PolyMatrix::from_rows(vec![vec![Poly::x1(), Poly::zero()], vec![Poly::zero(), -Poly::x1()]]).unwrap();
        assert_eq!(m, want);

        let d4 = GroupSpec::dihedral(4);
        let ones = pdo_econv_hidden(&vec![Poly::one(); 8], &d4).unwrap();
        assert!(ones.entries().iter().all(|p| *p == Poly::one()));
        let reg = regular_rep(&d4).unwrap();
        assert!(steerability_residual(&ones, &reg, &reg, &d4).unwrap() <= 1e-9);
        assert!(matches!(
            pdo_econv_hidden(&[Poly::one()], &d4),
            Err(Error::WrongFamilySize { expected: 8, got: 1 })
        ));
    }
}
