//! Linearized bivariate systems `A(X, Y) = B(X, Y) = 0` whose common zeros
//! over GF(2^m) are the linear space of a quadratic component function.
//!
//! For a component `f = Tr(lambda F1 + mu F2)` the bilinear form
//! `f(z + w) + f(z) + f(w) + f(0)` can be written `Tr(x L1(w)) + Tr(y L2(w))`;
//! its radical is the common kernel of `L1` and `L2`, and `A`, `B` are those
//! maps raised to a Frobenius power so that only non-negative twists appear.

use serde::{Deserialize, Serialize};

use crate::bitlinalg;
use crate::error::{Error, Result};
use crate::families::{coprime_to, Family, FamilyParams};
use crate::gf2m::FieldSpec;

/// `f(X, Y) = sum_e C_e X^(2^(ek)) + D_e Y^(2^(ek))`, trailing zero pairs trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedBivariate {
    field: FieldSpec,
    k: u32,
    coefficients: Vec<(u32, u32)>,
}

impl LinearizedBivariate {
    pub fn new(field: FieldSpec, k: u32, coefficients: Vec<(u32, u32)>) -> Result<Self> {
        for &(c, d) in &coefficients {
            field.check(c)?;
            field.check(d)?;
        }
        let mut coefficients = coefficients;
        while coefficients.last() == Some(&(0, 0)) {
            coefficients.pop();
        }
        Ok(Self { field, k, coefficients })
    }

    fn from_terms(field: FieldSpec, k: u32, x_terms: &[(usize, u32)], y_terms: &[(usize, u32)]) -> Self {
        let top = x_terms.iter().chain(y_terms).map(|&(e, _)| e).max().unwrap_or(0);
        let mut coefficients = vec![(0, 0); top + 1];
        for &(e, c) in x_terms {
            coefficients[e].0 ^= c;
        }
        for &(e, d) in y_terms {
            coefficients[e].1 ^= d;
        }
        Self::new(field, k, coefficients).expect("coefficients come from field arithmetic")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn coefficients(&self) -> &[(u32, u32)] {
        &self.coefficients
    }

    /// Top index `d`; `None` for the zero polynomial.
    pub fn top_index(&self) -> Option<u32> {
        self.coefficients.len().checked_sub(1).map(|d| d as u32)
    }

    pub fn eval(&self, x: u32, y: u32) -> u32 {
        let f = &self.field;
        let (mut xp, mut yp) = (x, y);
        let mut acc = 0;
        for &(c, d) in &self.coefficients {
            acc ^= f.mul(c, xp) ^ f.mul(d, yp);
            xp = f.frobenius_pow(xp, i64::from(self.k));
            yp = f.frobenius_pow(yp, i64::from(self.k));
        }
        acc
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: u32) -> Result<Self> {
        self.compatible(other)?;
        let len = self.coefficients.len().max(other.coefficients.len());
        let get = |v: &[(u32, u32)], e: usize| v.get(e).copied().unwrap_or((0, 0));
        let f = &self.field;
        let coefficients = (0..len)
            .map(|e| {
                let (c1, d1) = get(&self.coefficients, e);
                let (c2, d2) = get(&other.coefficients, e);
                (c1 ^ f.mul(c, c2), d1 ^ f.mul(c, d2))
            })
            .collect();
        Self::new(self.field, self.k, coefficients)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left_m: self.field.m(),
                left_poly: self.field.reduction_polynomial(),
                right_m: other.field.m(),
                right_poly: other.field.reduction_polynomial(),
            });
        }
        if self.k % self.field.m() != other.k % other.field.m() {
            return Err(Error::InvalidParameters(format!(
                "Frobenius steps differ: k={} vs k={}",
                self.k, other.k
            )));
        }
        Ok(())
    }
}

/// Projective point `(px : py : 0)`, first nonzero coordinate equal to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InfinityPoint {
    #[serde(with = "crate::gf2m::hex")]
    pub px: u32,
    #[serde(with = "crate::gf2m::hex")]
    pub py: u32,
}

impl InfinityPoint {
    pub fn normalized(field: &FieldSpec, px: u32, py: u32) -> Result<Self> {
        if px != 0 {
            let s = field.inv(px)?;
            Ok(Self {
                px: 1,
                py: field.mul(py, s),
            })
        } else if py != 0 {
            Ok(Self { px: 0, py: 1 })
        } else {
            Err(Error::ZeroTopForm)
        }
    }
}

/// The zero at infinity of the top form `C_d X^(2^dk) + D_d Y^(2^dk)`.
pub fn infinity_point(f: &LinearizedBivariate) -> Result<InfinityPoint> {
    let d = f.top_index().ok_or(Error::ZeroTopForm)?;
    let (c, dd) = f.coefficients[d as usize];
    let shift = -(i64::from(d) * i64::from(f.k));
    let field = &f.field;
    InfinityPoint::normalized(field, field.frobenius_pow(dd, shift), field.frobenius_pow(c, shift))
}

fn system_columns(a: &LinearizedBivariate, b: &LinearizedBivariate) -> Vec<u64> {
    let m = a.field.m();
    (0..2 * m)
        .map(|e| {
            let (x, y) = if e < m { (1 << e, 0) } else { (0, 1 << (e - m)) };
            u64::from(a.eval(x, y)) | u64::from(b.eval(x, y)) << m
        })
        .collect()
}

/// Basis of the common zeros of `A` and `B` in GF(2^m)^2, as `(X, Y)` pairs.
pub fn common_zero_basis(a: &LinearizedBivariate, b: &LinearizedBivariate) -> Result<Vec<(u32, u32)>> {
    a.compatible(b)?;
    let m = a.field.m();
    let mask = a.field.mask();
    Ok(bitlinalg::kernel_basis(&system_columns(a, b))
        .into_iter()
        .map(|v| ((v as u32) & mask, (v >> m) as u32))
        .collect())
}

pub fn kernel_dimension(a: &LinearizedBivariate, b: &LinearizedBivariate) -> Result<u32> {
    Ok(common_zero_basis(a, b)?.len() as u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BezoutReport {
    pub kernel_dim: u32,
    pub degree_sum: u32,
    pub distinct_infinity: bool,
    /// Evaluated only when distinct points at infinity rule out a common component.
    pub bound_satisfied: Option<bool>,
}

/// Compares the kernel dimension with `d1 + d2`; requires `gcd(k, m) = 1`.
pub fn bezout_bound_check(a: &LinearizedBivariate, b: &LinearizedBivariate) -> Result<BezoutReport> {
    a.compatible(b)?;
    if !coprime_to(a.field.m(), i64::from(a.k)) {
        return Err(Error::InvalidParameters(format!(
            "gcd(k={}, m={}) != 1",
            a.k,
            a.field.m()
        )));
    }
    let kernel_dim = kernel_dimension(a, b)?;
    let degree_sum = a.top_index().unwrap_or(0) + b.top_index().unwrap_or(0);
    let distinct_infinity = match (infinity_point(a), infinity_point(b)) {
        (Ok(p), Ok(q)) => p != q,
        _ => false,
    };
    Ok(BezoutReport {
        kernel_dim,
        degree_sum,
        distinct_infinity,
        bound_satisfied: distinct_infinity.then_some(kernel_dim <= degree_sum),
    })
}

/// How the variables of `(A, B)` map to the function's input `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// `X = x`, `Y = y`.
    Direct,
    /// `X = y`, `Y = x`.
    Swapped,
}

/// Special branches of the per-family analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairCase {
    Generic,
    /// `mu = 0`: only the `XY` coordinate contributes and the system forces `X = Y = 0`.
    MuZero,
    /// `lambda = 0` for Zhou–Pott: `A` reduces to `mu Y + mu^(2^k) Y^(2^2k)`.
    LambdaZero,
    /// Carlet 2011 with `UV = ST`: both points at infinity coincide.
    CoincidentInfinity {
        lambda_zero: bool,
    },
    /// Butterfly with `beta = (1 + alpha)^3` and `lambda = mu`.
    ButterflyExceptional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedPair {
    pub a: LinearizedBivariate,
    pub b: LinearizedBivariate,
    pub case: PairCase,
    pub orientation: Orientation,
}

impl DerivedPair {
    /// Basis of the common zeros as input points `(x, y)` of the function.
    pub fn linear_space_basis(&self) -> Result<Vec<(u32, u32)>> {
        let basis = common_zero_basis(&self.a, &self.b)?;
        Ok(match self.orientation {
            Orientation::Direct => basis,
            Orientation::Swapped => basis.into_iter().map(|(x, y)| (y, x)).collect(),
        })
    }

    pub fn kernel_dimension(&self) -> Result<u32> {
        kernel_dimension(&self.a, &self.b)
    }
}

/// The `(A, B)` system of component `(lambda, mu)` of a family member.
pub fn derive_pair(params: &FamilyParams, lambda: u32, mu: u32) -> Result<DerivedPair> {
    if lambda == 0 && mu == 0 {
        return Err(Error::ZeroSelector);
    }
    params.validate()?;
    let f = params.field;
    f.check(lambda)?;
    f.check(mu)?;
    let fr = |a: u32, e: i64| f.frobenius_pow(a, e);
    let mul = |a: u32, b: u32| f.mul(a, b);
    match params.family {
        Family::Taniguchi { k, alpha, beta } => {
            let ki = i64::from(k);
            let lk = fr(lambda, ki);
            let ma = mul(mu, alpha);
            let mb = mul(mu, beta);
            let a = LinearizedBivariate::from_terms(
                f,
                k,
                &[(0, fr(ma, -ki)), (1, lk)],
                &[(0, fr(mu, -2 * ki)), (2, fr(mu, -ki))],
            );
            let b = LinearizedBivariate::from_terms(f, k, &[(0, mb), (2, fr(mb, ki))], &[(1, lk), (2, ma)]);
            let case = if mu == 0 { PairCase::MuZero } else { PairCase::Generic };
            Ok(DerivedPair {
                a,
                b,
                case,
                orientation: Orientation::Swapped,
            })
        }
        Family::Carlet11 { i, j, s, t, u, v } => {
            let m = i64::from(f.m());
            let ii = i64::from(i);
            let k = (i64::from(j) - ii).rem_euclid(m);
            let tilde = |c: u32| fr(mul(mu, c), -ii);
            let (st, tt, ut, vt) = (tilde(s), tilde(t), tilde(u), tilde(v));
            let lk = fr(lambda, k);
            let a = LinearizedBivariate::from_terms(
                f,
                k as u32,
                &[(0, st), (2, fr(st, k))],
                &[(0, vt), (1, lk), (2, fr(ut, k))],
            );
            let b = LinearizedBivariate::from_terms(
                f,
                k as u32,
                &[(0, ut), (1, lk), (2, fr(vt, k))],
                &[(0, tt), (2, fr(tt, k))],
            );
            let case = if mu == 0 {
                PairCase::MuZero
            } else if mul(u, v) == mul(s, t) {
                PairCase::CoincidentInfinity {
                    lambda_zero: lambda == 0,
                }
            } else {
                PairCase::Generic
            };
            Ok(DerivedPair {
                a,
                b,
                case,
                orientation: Orientation::Direct,
            })
        }
        Family::ZhouPott { k, j, alpha } => {
            let ki = i64::from(k);
            let ji = i64::from(j);
            let lk = fr(lambda, ki);
            let ma = mul(mu, alpha);
            let a = LinearizedBivariate::from_terms(f, k, &[(1, lk)], &[(0, mu), (2, fr(mu, ki))]);
            let b = LinearizedBivariate::from_terms(f, k, &[(0, fr(ma, -ji)), (2, fr(ma, ki - ji))], &[(1, lk)]);
            let case = if mu == 0 {
                PairCase::MuZero
            } else if lambda == 0 {
                PairCase::LambdaZero
            } else {
                PairCase::Generic
            };
            Ok(DerivedPair {
                a,
                b,
                case,
                orientation: Orientation::Swapped,
            })
        }
        Family::Butterfly { alpha, beta } => {
            let d = f.pow(alpha, 3) ^ beta;
            let a2 = f.square(alpha);
            let c1 = lambda ^ mul(mu, d);
            let c2 = mul(lambda, alpha) ^ mul(mu, a2);
            let c3 = mul(lambda, a2) ^ mul(mu, alpha);
            let c4 = mul(lambda, d) ^ mu;
            let a = LinearizedBivariate::from_terms(f, 1, &[(0, c1), (2, f.square(c1))], &[(0, c2), (2, f.square(c3))]);
            let b = LinearizedBivariate::from_terms(f, 1, &[(0, c3), (2, f.square(c2))], &[(0, c4), (2, f.square(c4))]);
            let case = if lambda == mu && beta == f.pow(1 ^ alpha, 3) {
                PairCase::ButterflyExceptional
            } else {
                PairCase::Generic
            };
            Ok(DerivedPair {
                a,
                b,
                case,
                orientation: Orientation::Direct,
            })
        }
        Family::CarletGeneral(_) => Err(Error::Unsupported(
            "no hardcoded (A, B) derivation for the general form".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_function;
    use crate::vbf::{component_truth_table, linear_space_dimension, map_components, ComponentSelector};

    fn gf(m: u32) -> FieldSpec {
        FieldSpec::new(m).unwrap()
    }

    fn poly(field: FieldSpec, k: u32, c: &[(u32, u32)]) -> LinearizedBivariate {
        LinearizedBivariate::new(field, k, c.to_vec()).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let field = gf(3);
        let x = poly(field, 1, &[(1, 0)]);
        let y = poly(field, 1, &[(0, 1)]);
        assert_eq!(kernel_dimension(&x, &y).unwrap(), 0);
        let x2x = poly(field, 1, &[(1, 0), (1, 0)]);
        assert_eq!(common_zero_basis(&x2x, &y).unwrap(), vec![(1, 0)]);
        assert!(kernel_dimension(&x, &poly(gf(4), 1, &[(0, 1)])).is_err());
    }

    #[test]
    fn infinity_examples() {
        let field = gf(5);
        let p = poly(field, 1, &[(3, 4), (0, 7)]);
        assert_eq!(infinity_point(&p).unwrap(), InfinityPoint { px: 1, py: 0 });
        assert_eq!(infinity_point(&poly(field, 1, &[])), Err(Error::ZeroTopForm));
        // (C X + D Y)^(2^dk) vanishes at the reported point
        let q = poly(field, 2, &[(1, 1), (0, 0), (9, 21)]);
        let pt = infinity_point(&q).unwrap();
        let c = field.frobenius_pow(9, -4);
        let d = field.frobenius_pow(21, -4);
        assert_eq!(field.mul(c, pt.px) ^ field.mul(d, pt.py), 0);
    }

    #[test]
    fn bezout_same_curve_not_asserted() {
        let field = gf(5);
        let a = poly(field, 1, &[(3, 4), (5, 6)]);
        let r = bezout_bound_check(&a, &a).unwrap();
        assert!(!r.distinct_infinity);
        assert_eq!(r.bound_satisfied, None);
        assert!(bezout_bound_check(&poly(gf(4), 2, &[(1, 1)]), &poly(gf(4), 2, &[(1, 0)])).is_err());
    }

    #[test]
    fn taniguchi_marker_and_infinity_points() {
        let field = gf(5);
        let p = FamilyParams::taniguchi(field, 2, 3, 7).unwrap();
        assert_eq!(derive_pair(&p, 0, 0), Err(Error::ZeroSelector));
        let pair = derive_pair(&p, 5, 0).unwrap();
        assert_eq!(pair.case, PairCase::MuZero);
        assert_eq!(pair.kernel_dimension().unwrap(), 0);
        for mu in field.nonzero_elements() {
            let pair = derive_pair(&p, 1, mu).unwrap();
            let p1 = infinity_point(&pair.a).unwrap();
            let p2 = infinity_point(&pair.b).unwrap();
            assert_eq!(p1, InfinityPoint { px: 1, py: 0 });
            let expected = InfinityPoint::normalized(
                &field,
                field.frobenius_pow(field.mul(mu, 3), -4),
                field.frobenius_pow(field.mul(mu, 7), -2),
            )
            .unwrap();
            assert_eq!(p2, expected);
            assert_ne!(p1, p2);
        }
    }

    #[test]
    fn carlet_infinity_eta() {
        let field = gf(5);
        let (i, j) = (1, 3);
        let (s, t, u, v) = (3, 5, 7, 11);
        let p = FamilyParams::carlet11(field, i, j, s, t, u, v).unwrap();
        let mu = 6;
        let pair = derive_pair(&p, 9, mu).unwrap();
        let tilde = |c: u32| field.frobenius_pow(field.mul(mu, c), -1);
        // (eta : 1 : 0) normalizes to (1 : 1/eta : 0)
        let pt = infinity_point(&pair.a).unwrap();
        assert_eq!(pt.px, 1);
        let eta = field.inv(pt.py).unwrap();
        assert_eq!(field.frobenius_pow(eta, 2), field.div(tilde(u), tilde(s)).unwrap());
    }

    #[test]
    fn zhou_pott_lambda_zero() {
        let field = gf(4);
        let p = FamilyParams::zhou_pott(field, 1, 2, 2).unwrap();
        let pair = derive_pair(&p, 0, 6).unwrap();
        assert_eq!(pair.case, PairCase::LambdaZero);
        assert_eq!(pair.a.coefficients(), &[(0, 6), (0, 0), (0, field.square(6))]);
    }

    #[test]
    fn butterfly_coefficients() {
        let field = gf(5);
        let (alpha, beta, lambda, mu) = (3, 9, 4, 17);
        let p = FamilyParams::butterfly(field, alpha, beta).unwrap();
        let pair = derive_pair(&p, lambda, mu).unwrap();
        let d = field.pow(alpha, 3) ^ beta;
        let c1 = lambda ^ field.mul(mu, d);
        assert_eq!(pair.a.coefficients()[0].0, c1);
        assert_eq!(pair.a.coefficients()[2].0, field.square(c1));
        assert_eq!(pair.b.coefficients()[0].1, field.mul(lambda, d) ^ mu);
        assert!(derive_pair(&p.to_general_form().unwrap_or(p.clone()), 1, 1).is_ok());
    }

    fn assert_triangle(p: &FamilyParams) {
        let f = build_function(p).unwrap();
        let field = p.field;
        let disagreements: Vec<_> = map_components(&f, |sel, table, spectrum| {
            let pair = derive_pair(p, sel.lambda, sel.mu).unwrap();
            let kernel = pair.kernel_dimension().unwrap();
            let brute = linear_space_dimension(table);
            let level = spectrum.plateau_level();
            (sel, kernel, brute, level)
        })
        .into_iter()
        .filter(|&(_, k, b, l)| l != Some(k) || b != k)
        .collect();
        assert!(
            disagreements.is_empty(),
            "{p:?}: {:?}",
            &disagreements[..disagreements.len().min(5)]
        );
        // kernels as sets, in function coordinates
        for c in [1u32, 5, 17, (1 << (2 * field.m())) - 1] {
            let sel = ComponentSelector::from_index(&field, c).unwrap();
            let table = component_truth_table(&f, sel).unwrap();
            let pair = derive_pair(p, sel.lambda, sel.mu).unwrap();
            for (x, y) in pair.linear_space_basis().unwrap() {
                let a = f.index(x, y);
                let flip = table[a] ^ table[0];
                assert!((0..table.len()).all(|z| table[z ^ a] ^ table[z] == flip));
            }
        }
    }

    #[test]
    fn triangle_small_instances() {
        assert_triangle(&FamilyParams::taniguchi(gf(3), 1, 3, 5).unwrap());
        assert_triangle(&FamilyParams::taniguchi(gf(3), 2, 0, 5).unwrap());
        assert_triangle(&FamilyParams::carlet11(gf(3), 0, 1, 3, 5, 6, 2).unwrap());
        assert_triangle(&FamilyParams::carlet11(gf(4), 2, 1, 3, 5, 6, 2).unwrap());
        assert_triangle(&FamilyParams::zhou_pott(gf(4), 1, 2, 2).unwrap());
        assert_triangle(&FamilyParams::zhou_pott(gf(3), 2, 1, 5).unwrap());
        assert_triangle(&FamilyParams::butterfly(gf(3), 3, 6).unwrap());
    }
}
