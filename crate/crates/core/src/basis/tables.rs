//! Closed-form solutions of the steerability constraint for a single pair
//! of irreps, built from `T̃_j`, `Ũ_j` and powers of `r²`.

use crate::group::{GroupSpec, Irrep};
use crate::poly::{tcheb, ucheb, Poly, PolyMatrix};

/// What the constraint sees of an irrep.
#[derive(Clone, Copy, Debug)]
enum Shape {
    /// One-dimensional; `half` marks the `cos(Nθ/2)` irreps.
    OneDim { half: bool, flip_sign: bool },
    TwoDim { freq: i64 },
}

fn shape(psi: &Irrep) -> Shape {
    match *psi {
        Irrep::Trivial => Shape::OneDim { half: false, flip_sign: false },
        Irrep::Sign => Shape::OneDim { half: false, flip_sign: true },
        Irrep::Alternating { flip_sign, .. } => Shape::OneDim { half: true, flip_sign },
        Irrep::Freq(k) | Irrep::FlipFreq(k) => Shape::TwoDim { freq: k as i64 },
    }
}

/// An angular solution before the `r^{2k}` factor.
pub(crate) struct AngularEntry {
    pub freq: i64,
    pub matrix: PolyMatrix,
}

/// All `j = base + tN` with `|j| ≤ max`, ascending in `|j|` (ties: positive
/// first). `N = None` stands for the continuous groups, where `t = 0`.
fn shifted(base: i64, n: Option<i64>, max: i64) -> Vec<i64> {
    let mut out = match n {
        None => vec![base],
        Some(n) => {
            let lo = (-max - base).div_euclid(n) - 1;
            let hi = (max - base).div_euclid(n) + 1;
            (lo..=hi).map(|t| base + t * n).collect()
        }
    };
    out.retain(|j| j.abs() <= max);
    out.sort_by_key(|&j| (j.abs(), -j));
    out
}

/// All `j = t̂N (+ offset)` with `t̂ ≥ 0` and `j ≤ max`.
fn nonneg(offset: i64, n: Option<i64>, max: i64) -> Vec<i64> {
    match n {
        None => {
            if offset <= max {
                vec![offset]
            } else {
                vec![]
            }
        }
        Some(n) => (0..).map(|t| offset + t * n).take_while(|&j| j <= max).collect(),
    }
}

fn row(a: Poly, b: Poly) -> PolyMatrix {
    PolyMatrix::row(vec![a, b])
}

fn col(a: Poly, b: Poly) -> PolyMatrix {
    PolyMatrix::column(vec![a, b])
}

fn square(a: Poly, b: Poly, c: Poly, d: Poly) -> PolyMatrix {
    PolyMatrix::from_rows(vec![vec![a, b], vec![c, d]]).expect("2x2")
}

/// Angular (harmonic, homogeneous) solutions for `psi_in → psi_out` whose
/// degree is at most `max_order`, in table order.
pub(crate) fn angular_solutions(
    group: &GroupSpec,
    psi_in: &Irrep,
    psi_out: &Irrep,
    max_order: u32,
) -> Vec<AngularEntry> {
    let n = group.rotation_order().map(i64::from);
    let half_n = n.map_or(0, |n| n / 2);
    let flip = group.has_flip();
    let max = max_order as i64;
    let mut out = Vec::new();
    let mut push = |freq: i64, matrix: PolyMatrix| {
        if !matrix.is_zero() {
            out.push(AngularEntry { freq, matrix });
        }
    };
    let half = |h: bool| if h { half_n } else { 0 };

    match (shape(psi_out), shape(psi_in)) {
        (Shape::OneDim { half: ho, flip_sign: so }, Shape::OneDim { half: hi, flip_sign: si }) => {
            let sign = so ^ si;
            for j in nonneg(half(ho ^ hi), n, max) {
                let t = PolyMatrix::row(vec![tcheb(j)]);
                let u = PolyMatrix::row(vec![ucheb(j)]);
                if flip {
                    push(j, if sign { u } else { t });
                } else {
                    push(j, t);
                    push(j, u);
                }
            }
        }
        (Shape::OneDim { half: ho, flip_sign: so }, Shape::TwoDim { freq }) => {
            for j in shifted(freq + half(ho), n, max) {
                let a = row(tcheb(j), ucheb(j));
                let b = row(-ucheb(j), tcheb(j));
                if flip {
                    push(j, if so { b } else { a });
                } else {
                    push(j, a);
                    push(j, b);
                }
            }
        }
        (Shape::TwoDim { freq }, Shape::OneDim { half: hi, flip_sign: si }) => {
            for j in shifted(freq + half(hi), n, max) {
                let a = col(tcheb(j), ucheb(j));
                let b = col(-ucheb(j), tcheb(j));
                if flip {
                    push(j, if si { b } else { a });
                } else {
                    push(j, a);
                    push(j, b);
                }
            }
        }
        (Shape::TwoDim { freq: m }, Shape::TwoDim { freq: k }) => {
            for j in shifted(m - k, n, max) {
                push(j, square(tcheb(j), -ucheb(j), ucheb(j), tcheb(j)));
                if !flip {
                    push(j, square(-ucheb(j), -tcheb(j), tcheb(j), -ucheb(j)));
                }
            }
            for j in shifted(m + k, n, max) {
                push(j, square(tcheb(j), ucheb(j), ucheb(j), -tcheb(j)));
                if !flip {
                    push(j, square(-ucheb(j), tcheb(j), tcheb(j), ucheb(j)));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_enumeration() {
        assert_eq!(shifted(1, Some(4), 3), vec![1, -3]);
        assert_eq!(shifted(0, Some(2), 2), vec![0, 2, -2]);
        assert_eq!(shifted(1, None, 3), vec![1]);
        assert_eq!(shifted(5, None, 3), Vec::<i64>::new());
        assert_eq!(nonneg(0, Some(4), 8), vec![0, 4, 8]);
        assert_eq!(nonneg(2, Some(4), 8), vec![2, 6]);
        assert_eq!(nonneg(0, None, 8), vec![0]);
    }

    #[test]
    fn div_and_curl_rows() {
        let so2 = GroupSpec::so2();
        let sols = angular_solutions(&so2, &Irrep::Freq(1), &Irrep::Trivial, 1);
        assert_eq!(sols.len(), 2);
        assert_eq!(sols[0].matrix, row(Poly::x1(), Poly::x2()));
        assert_eq!(sols[1].matrix, row(-Poly::x2(), Poly::x1()));
    }

    #[test]
    fn flip_groups_pick_one_row() {
        let o2 = GroupSpec::o2();
        let div = angular_solutions(&o2, &Irrep::FlipFreq(1), &Irrep::Trivial, 1);
        assert_eq!(div.len(), 1);
        assert_eq!(div[0].matrix, row(Poly::x1(), Poly::x2()));
        let curl = angular_solutions(&o2, &Irrep::FlipFreq(1), &Irrep::Sign, 1);
        assert_eq!(curl[0].matrix, row(-Poly::x2(), Poly::x1()));
    }
}
