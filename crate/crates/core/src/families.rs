//! The quadratic families `F(X, Y) = (XY, G(X, Y))` and the closed butterfly,
//! with parameter validation, direct evaluators and APN criteria.
//!
//! | family          | second coordinate / map                                             |
//! |-----------------|---------------------------------------------------------------------|
//! | Taniguchi       | `G = X^(2^3k + 2^2k) + a X^(2^2k) Y^(2^k) + b Y^(2^k + 1)`          |
//! | Carlet 2011     | `G = S X^(2^i+2^j) + U X^(2^i) Y^(2^j) + V X^(2^j) Y^(2^i) + T Y^(2^i+2^j)` |
//! | Zhou–Pott       | `G = X^(2^k + 1) + a Y^((2^k + 1) 2^j)`                             |
//! | general form    | `G = P(X^(2^k+1)) + Q(X^(2^k) Y) + R(X Y^(2^k)) + S(Y^(2^k+1))`     |
//! | closed butterfly| `(R(X, Y), R(Y, X))`, `R(X, Y) = (X + a Y)^3 + b Y^3`               |
//!
//! The first three embed into the general form; [`FamilyParams::to_general_form`]
//! produces that embedding and the truth tables of both routes agree.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::bitlinalg;
use crate::error::{Error, Result};
use crate::gf2m::{hex, FieldSpec};
use crate::vbf::{TableLimits, VectorialFunction};

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn coprime_to(m: u32, k: i64) -> bool {
    gcd(k.unsigned_abs() as u32 % m, m) == 1
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

/// `L(x) = sum_e c_e x^(2^e)`, `e = 0 .. m-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearizedUnivariate {
    #[serde(with = "hex::vec")]
    coefficients: Vec<u32>,
}

impl LinearizedUnivariate {
    /// Coefficients `c_0, c_1, ...`; missing trailing entries are zero.
    pub fn new(field: &FieldSpec, coefficients: Vec<u32>) -> Result<Self> {
        if coefficients.len() > field.m() as usize {
            return Err(invalid(format!(
                "{} coefficients for a linearized polynomial over GF(2^{})",
                coefficients.len(),
                field.m()
            )));
        }
        for &c in &coefficients {
            field.check(c)?;
        }
        let mut coefficients = coefficients;
        coefficients.resize(field.m() as usize, 0);
        Ok(Self { coefficients })
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Self {
            coefficients: vec![0; field.m() as usize],
        }
    }

    /// `c x^(2^e)` with `e` reduced modulo `m`.
    pub fn monomial(field: &FieldSpec, e: i64, c: u32) -> Self {
        let mut l = Self::zero(field);
        l.coefficients[e.rem_euclid(i64::from(field.m())) as usize] = c;
        l
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    pub fn eval(&self, field: &FieldSpec, x: u32) -> u32 {
        let mut acc = 0;
        let mut power = x;
        for &c in &self.coefficients {
            if c != 0 {
                acc ^= field.mul(c, power);
            }
            power = field.square(power);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// Coefficients of `Y -> L(s Y)`.
    pub fn compose_scalar(&self, field: &FieldSpec, s: u32) -> Self {
        let mut power = s;
        let coefficients = self
            .coefficients
            .iter()
            .map(|&c| {
                let out = field.mul(c, power);
                power = field.square(power);
                out
            })
            .collect();
        Self { coefficients }
    }

    fn columns(&self, field: &FieldSpec) -> Vec<u64> {
        (0..field.m()).map(|i| u64::from(self.eval(field, 1 << i))).collect()
    }

    pub fn kernel_basis(&self, field: &FieldSpec) -> Vec<u32> {
        bitlinalg::kernel_basis(&self.columns(field))
            .into_iter()
            .map(|v| v as u32)
            .collect()
    }

    pub fn is_permutation(&self, field: &FieldSpec) -> bool {
        bitlinalg::kernel_dimension(&self.columns(field)) == 0
    }
}

/// Payload of the general `(XY, P(X^(2^k+1)) + Q(X^(2^k)Y) + R(XY^(2^k)) + S(Y^(2^k+1)))` form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralForm {
    pub k: u32,
    pub p: LinearizedUnivariate,
    pub q: LinearizedUnivariate,
    pub r: LinearizedUnivariate,
    pub s: LinearizedUnivariate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Taniguchi {
        k: u32,
        #[serde(with = "hex")]
        alpha: u32,
        #[serde(with = "hex")]
        beta: u32,
    },
    Carlet11 {
        i: u32,
        j: u32,
        #[serde(with = "hex")]
        s: u32,
        #[serde(with = "hex")]
        t: u32,
        #[serde(with = "hex")]
        u: u32,
        #[serde(with = "hex")]
        v: u32,
    },
    ZhouPott {
        k: u32,
        j: u32,
        #[serde(with = "hex")]
        alpha: u32,
    },
    Butterfly {
        #[serde(with = "hex")]
        alpha: u32,
        #[serde(with = "hex")]
        beta: u32,
    },
    CarletGeneral(GeneralForm),
}

/// A family member over a concrete field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub field: FieldSpec,
    #[serde(flatten)]
    pub family: Family,
}

impl FamilyParams {
    pub fn new(field: FieldSpec, family: Family) -> Result<Self> {
        let params = Self { field, family };
        params.validate()?;
        Ok(params)
    }

    pub fn taniguchi(field: FieldSpec, k: u32, alpha: u32, beta: u32) -> Result<Self> {
        Self::new(field, Family::Taniguchi { k, alpha, beta })
    }

    pub fn carlet11(field: FieldSpec, i: u32, j: u32, s: u32, t: u32, u: u32, v: u32) -> Result<Self> {
        Self::new(field, Family::Carlet11 { i, j, s, t, u, v })
    }

    pub fn zhou_pott(field: FieldSpec, k: u32, j: u32, alpha: u32) -> Result<Self> {
        Self::new(field, Family::ZhouPott { k, j, alpha })
    }

    pub fn butterfly(field: FieldSpec, alpha: u32, beta: u32) -> Result<Self> {
        Self::new(field, Family::Butterfly { alpha, beta })
    }

    pub fn general(field: FieldSpec, form: GeneralForm) -> Result<Self> {
        Self::new(field, Family::CarletGeneral(form))
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            Family::Taniguchi { .. } => "taniguchi",
            Family::Carlet11 { .. } => "carlet11",
            Family::ZhouPott { .. } => "zhou-pott",
            Family::Butterfly { .. } => "butterfly",
            Family::CarletGeneral(_) => "carlet-general",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let field = &self.field;
        let m = field.m();
        match &self.family {
            // beta = 0 is admitted: the map is still defined and simply not APN.
            Family::Taniguchi { k, alpha, beta } => {
                field.check(*alpha)?;
                field.check(*beta)?;
                if !coprime_to(m, i64::from(*k)) {
                    return Err(invalid(format!("taniguchi: gcd(k={k}, m={m}) != 1")));
                }
            }
            Family::Carlet11 { i, j, s, t, u, v } => {
                for &e in [s, t, u, v] {
                    field.check(e)?;
                }
                if !coprime_to(m, i64::from(*i) - i64::from(*j)) {
                    return Err(invalid(format!(
                        "carlet11: gcd(i-j={}, m={m}) != 1",
                        i64::from(*i) - i64::from(*j)
                    )));
                }
                if *s == 0 || *t == 0 {
                    return Err(invalid("carlet11: S T must be nonzero"));
                }
            }
            Family::ZhouPott { k, alpha, .. } => {
                field.check(*alpha)?;
                if !coprime_to(m, i64::from(*k)) {
                    return Err(invalid(format!("zhou-pott: gcd(k={k}, m={m}) != 1")));
                }
                if *alpha == 0 {
                    return Err(invalid("zhou-pott: alpha must be nonzero"));
                }
            }
            Family::Butterfly { alpha, beta } => {
                field.check(*alpha)?;
                field.check(*beta)?;
                if m.is_multiple_of(2) {
                    return Err(invalid(format!("butterfly: m={m} must be odd")));
                }
                if *alpha == 0 || *beta == 0 {
                    return Err(invalid("butterfly: alpha and beta must be nonzero"));
                }
            }
            Family::CarletGeneral(form) => {
                if !coprime_to(m, i64::from(form.k)) {
                    return Err(invalid(format!("carlet-general: gcd(k={}, m={m}) != 1", form.k)));
                }
                for l in [&form.p, &form.q, &form.r, &form.s] {
                    if l.coefficients.len() != m as usize {
                        return Err(invalid("carlet-general: coefficient vectors must have length m"));
                    }
                    for &c in &l.coefficients {
                        field.check(c)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// `F(x, y)` by the family's own formula.
    pub fn evaluate(&self, x: u32, y: u32) -> (u32, u32) {
        let f = &self.field;
        let fr = |a: u32, e: u32| f.frobenius_pow(a, i64::from(e));
        match &self.family {
            Family::Taniguchi { k, alpha, beta } => {
                let (x2k, x3k, yk) = (fr(x, 2 * k), fr(x, 3 * k), fr(y, *k));
                let g = f.mul(x3k, x2k) ^ f.mul(*alpha, f.mul(x2k, yk)) ^ f.mul(*beta, f.mul(yk, y));
                (f.mul(x, y), g)
            }
            Family::Carlet11 { i, j, s, t, u, v } => {
                let (xi, xj, yi, yj) = (fr(x, *i), fr(x, *j), fr(y, *i), fr(y, *j));
                let g = f.mul(*s, f.mul(xi, xj))
                    ^ f.mul(*u, f.mul(xi, yj))
                    ^ f.mul(*v, f.mul(xj, yi))
                    ^ f.mul(*t, f.mul(yi, yj));
                (f.mul(x, y), g)
            }
            Family::ZhouPott { k, j, alpha } => {
                let x_part = f.mul(fr(x, *k), x);
                let y_part = pow_reduced(f, y, zhou_pott_exponent(f, *k, *j));
                (f.mul(x, y), x_part ^ f.mul(*alpha, y_part))
            }
            Family::Butterfly { alpha, beta } => (
                butterfly_half(f, *alpha, *beta, x, y),
                butterfly_half(f, *alpha, *beta, y, x),
            ),
            Family::CarletGeneral(form) => (f.mul(x, y), general_g(f, form, x, y)),
        }
    }

    /// The same map written in the general `P, Q, R, S` form, when it has one.
    pub fn to_general_form(&self) -> Option<FamilyParams> {
        let f = &self.field;
        let mono = |e: i64, c: u32| LinearizedUnivariate::monomial(f, e, c);
        let zero = LinearizedUnivariate::zero(f);
        let form = match &self.family {
            Family::Taniguchi { k, alpha, beta } => GeneralForm {
                k: *k,
                p: mono(2 * i64::from(*k), 1),
                q: mono(i64::from(*k), *alpha),
                r: zero,
                s: mono(0, *beta),
            },
            Family::ZhouPott { k, j, alpha } => GeneralForm {
                k: *k,
                p: mono(0, 1),
                q: zero.clone(),
                r: zero,
                s: mono(i64::from(*j), *alpha),
            },
            Family::Carlet11 { i, j, s, t, u, v } => {
                let i = i64::from(*i);
                GeneralForm {
                    k: (i64::from(*j) - i).rem_euclid(i64::from(f.m())) as u32,
                    p: mono(i, *s),
                    q: mono(i, *v),
                    r: mono(i, *u),
                    s: mono(i, *t),
                }
            }
            Family::CarletGeneral(form) => form.clone(),
            Family::Butterfly { .. } => return None,
        };
        Some(FamilyParams {
            field: *f,
            family: Family::CarletGeneral(form),
        })
    }
}

fn butterfly_half(f: &FieldSpec, alpha: u32, beta: u32, x: u32, y: u32) -> u32 {
    let s = x ^ f.mul(alpha, y);
    f.mul(f.square(s), s) ^ f.mul(beta, f.mul(f.square(y), y))
}

fn general_g(f: &FieldSpec, form: &GeneralForm, x: u32, y: u32) -> u32 {
    let xk = f.frobenius_pow(x, i64::from(form.k));
    let yk = f.frobenius_pow(y, i64::from(form.k));
    form.p.eval(f, f.mul(xk, x))
        ^ form.q.eval(f, f.mul(xk, y))
        ^ form.r.eval(f, f.mul(x, yk))
        ^ form.s.eval(f, f.mul(yk, y))
}

/// `(2^k + 1) 2^j` reduced modulo `2^m - 1`.
fn zhou_pott_exponent(f: &FieldSpec, k: u32, j: u32) -> u64 {
    let order = u64::from(f.mask());
    let m = u64::from(f.m());
    ((1u64 << (u64::from(k) % m)) + 1) * (1u64 << (u64::from(j) % m)) % order
}

// The exponent is a positive integer before reduction, so a zero base maps
// to zero even when the reduced exponent is 0.
fn pow_reduced(f: &FieldSpec, base: u32, reduced_exp: u64) -> u32 {
    if base == 0 {
        0
    } else {
        f.pow(base, reduced_exp)
    }
}

pub fn build_function(params: &FamilyParams) -> Result<VectorialFunction> {
    build_function_with(params, TableLimits::default())
}

pub fn build_function_with(params: &FamilyParams, limits: TableLimits) -> Result<VectorialFunction> {
    params.validate()?;
    VectorialFunction::tabulate(params.field, limits, |x, y| params.evaluate(x, y))
}

fn count_roots(field: &FieldSpec, g: impl Fn(u32) -> u32) -> usize {
    field.elements().filter(|&x| g(x) == 0).count()
}

/// Number of roots of `G(X, 1) = X^(2^k+1) + alpha X + beta`.
pub fn taniguchi_root_count(field: &FieldSpec, k: u32, alpha: u32, beta: u32) -> Result<usize> {
    FamilyParams::taniguchi(*field, k, alpha, beta)?;
    let e = 1u64 + (1u64 << (k % field.m()));
    Ok(count_roots(field, |x| field.pow(x, e) ^ field.mul(alpha, x) ^ beta))
}

/// APN iff `X^(2^k+1) + alpha X + beta` has no root in the field.
pub fn taniguchi_is_apn(field: &FieldSpec, k: u32, alpha: u32, beta: u32) -> Result<bool> {
    Ok(taniguchi_root_count(field, k, alpha, beta)? == 0)
}

/// Number of roots of `G(X, 1) = S X^(2^i+2^j) + U X^(2^i) + V X^(2^j) + T`.
pub fn carlet11_root_count(field: &FieldSpec, i: u32, j: u32, s: u32, t: u32, u: u32, v: u32) -> Result<usize> {
    FamilyParams::carlet11(*field, i, j, s, t, u, v)?;
    Ok(count_roots(field, |x| carlet11_g1(field, i, j, s, t, u, v, x)))
}

/// APN iff `S X^(2^i+2^j) + U X^(2^i) + V X^(2^j) + T` has no root.
pub fn carlet11_is_apn(field: &FieldSpec, i: u32, j: u32, s: u32, t: u32, u: u32, v: u32) -> Result<bool> {
    Ok(carlet11_root_count(field, i, j, s, t, u, v)? == 0)
}

#[allow(clippy::too_many_arguments)]
fn carlet11_g1(field: &FieldSpec, i: u32, j: u32, s: u32, t: u32, u: u32, v: u32, x: u32) -> u32 {
    let xi = field.frobenius_pow(x, i64::from(i));
    let xj = field.frobenius_pow(x, i64::from(j));
    field.mul(s, field.mul(xi, xj)) ^ field.mul(u, xi) ^ field.mul(v, xj) ^ t
}

/// The nonzero `alpha` with `U = alpha T`, `V = alpha^(2^(j-i)) T` and
/// `S = alpha^(2^(j-i)+1) T`, if these relations hold.
pub fn carlet11_degenerate_triple(field: &FieldSpec, i: u32, j: u32, s: u32, t: u32, u: u32, v: u32) -> Option<u32> {
    if t == 0 || u == 0 {
        return None;
    }
    let alpha = field.div(u, t).ok()?;
    let (expected_s, _, expected_v) = carlet11_degenerate_coefficients(field, i, j, t, alpha);
    (v == expected_v && s == expected_s).then_some(alpha)
}

/// `(S, U, V)` of the degenerate triple generated by `T` and `alpha`.
pub fn carlet11_degenerate_coefficients(field: &FieldSpec, i: u32, j: u32, t: u32, alpha: u32) -> (u32, u32, u32) {
    let twist = field.frobenius_pow(alpha, i64::from(j) - i64::from(i));
    let u = field.mul(alpha, t);
    let v = field.mul(twist, t);
    let s = field.mul(field.mul(twist, alpha), t);
    (s, u, v)
}

/// `j` even and `alpha` a non-cube; defined for even `m` only.
pub fn zhoupott_apn_predicate(field: &FieldSpec, k: u32, j: u32, alpha: u32) -> Result<bool> {
    FamilyParams::zhou_pott(*field, k, j, alpha)?;
    if field.m() % 2 == 1 {
        return Err(invalid(format!(
            "zhou-pott APN predicate requires m even (m={})",
            field.m()
        )));
    }
    Ok(j.is_multiple_of(2) && !field.is_cube(alpha))
}

/// `T_{a,b}(Y) = P(a^(2^k+1) Y) + Q(a^(2^k) b Y) + R(a b^(2^k) Y) + S(b^(2^k+1) Y)`.
pub fn tab_map(field: &FieldSpec, form: &GeneralForm, a: u32, b: u32) -> Result<LinearizedUnivariate> {
    if a == 0 && b == 0 {
        return Err(invalid("T_{a,b} needs (a, b) != (0, 0)"));
    }
    let ak = field.frobenius_pow(a, i64::from(form.k));
    let bk = field.frobenius_pow(b, i64::from(form.k));
    Ok(form
        .p
        .compose_scalar(field, field.mul(ak, a))
        .add(&form.q.compose_scalar(field, field.mul(ak, b)))
        .add(&form.r.compose_scalar(field, field.mul(a, bk)))
        .add(&form.s.compose_scalar(field, field.mul(bk, b))))
}

/// Membership bitset of `{u^(2^k+1) (t^(2^k) + t)}`, cached per field and `k`.
pub fn sigma_set(field: &FieldSpec, k: u32) -> Arc<Vec<bool>> {
    type Cache = RwLock<HashMap<(FieldSpec, u32), Arc<Vec<bool>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (*field, k % field.m());
    if let Some(hit) = cache.read().expect("sigma cache poisoned").get(&key) {
        return Arc::clone(hit);
    }
    let mut set = vec![false; field.order() as usize];
    let e = 1u64 + (1u64 << key.1);
    let hyperplane: Vec<u32> = field
        .elements()
        .map(|t| field.frobenius_pow(t, i64::from(key.1)) ^ t)
        .collect();
    for u in field.elements() {
        let ue = field.pow(u, e);
        for &h in &hyperplane {
            set[field.mul(ue, h) as usize] = true;
        }
    }
    let set = Arc::new(set);
    cache
        .write()
        .expect("sigma cache poisoned")
        .entry(key)
        .or_insert(set)
        .clone()
}

/// The kernel criterion for the general form: for odd `m` every `T_{a,b}`
/// must be a permutation; for even `m` no kernel may meet the set
/// `{u^(2^k+1) (t^(2^k) + t)}` outside zero.
pub fn carlet_general_is_apn(field: &FieldSpec, form: &GeneralForm) -> Result<bool> {
    FamilyParams::general(*field, form.clone())?;
    let sigma = field.m().is_multiple_of(2).then(|| sigma_set(field, form.k));
    for a in field.elements() {
        for b in field.elements() {
            if a == 0 && b == 0 {
                continue;
            }
            let basis = tab_map(field, form, a, b)?.kernel_basis(field);
            if basis.is_empty() {
                continue;
            }
            match &sigma {
                None => return Ok(false),
                Some(sigma) => {
                    let basis: Vec<u64> = basis.iter().map(|&v| u64::from(v)).collect();
                    if bitlinalg::span(&basis).into_iter().skip(1).any(|v| sigma[v as usize]) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Criterion applied to any family with a general-form embedding.
pub fn criterion_is_apn(params: &FamilyParams) -> Result<bool> {
    let general = params.to_general_form().ok_or_else(|| {
        Error::Unsupported(format!(
            "{} is not of the (XY, P+Q+R+S) form; no kernel criterion",
            params.name()
        ))
    })?;
    match &general.family {
        Family::CarletGeneral(form) => carlet_general_is_apn(&params.field, form),
        _ => unreachable!("to_general_form returns the general family"),
    }
}

/// `beta = (1 + alpha)^3`, the branch with a large linear space.
pub fn butterfly_degenerate(field: &FieldSpec, alpha: u32, beta: u32) -> Result<bool> {
    FamilyParams::butterfly(*field, alpha, beta)?;
    Ok(beta == field.pow(1 ^ alpha, 3))
}
