//! Truncated multivariate Taylor arithmetic (jets) in up to three variables.
//!
//! A [`Jet3`] holds the Taylor coefficients of a smooth function at a point,
//! up to total degree three. Arithmetic is exact truncated-series algebra, so
//! for polynomial inputs of degree within the order the stored coefficients
//! equal the analytic derivatives divided by multi-index factorials, with no
//! finite-difference error. Every derivative taken anywhere in the crate goes
//! through this type.
//!
//! Each jet carries an `order` up to which its coefficients are trustworthy;
//! binary operations propagate the order conservatively (with a valuation
//! refinement so that multiplying by a series without constant term does not
//! discard a usable degree). Coefficients above `order` are kept at zero.

use crate::error::{Error, Result};

/// Highest total degree a jet can carry.
pub const MAX_ORDER: usize = 3;
/// Number of multi-indices `m` with `|m| <= 3` in three variables.
pub const NCOEFF: usize = 20;

/// Multi-indices in graded lexicographic order.
pub const MULTI_INDEX: [[usize; 3]; NCOEFF] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [2, 0, 0],
    [1, 1, 0],
    [1, 0, 1],
    [0, 2, 0],
    [0, 1, 1],
    [0, 0, 2],
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

const DEGREE: [usize; NCOEFF] = [0, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3];
const COUNT: [usize; MAX_ORDER + 1] = [1, 4, 10, 20];

const fn build_lut() -> [[[usize; 4]; 4]; 4] {
    let mut lut = [[[usize::MAX; 4]; 4]; 4];
    let mut k = 0;
    while k < NCOEFF {
        let m = MULTI_INDEX[k];
        lut[m[0]][m[1]][m[2]] = k;
        k += 1;
    }
    lut
}
const INDEX_OF: [[[usize; 4]; 4]; 4] = build_lut();

#[inline]
fn idx(m: [usize; 3]) -> usize {
    INDEX_OF[m[0]][m[1]][m[2]]
}

fn factorial(n: usize) -> f64 {
    match n {
        0 | 1 => 1.0,
        2 => 2.0,
        3 => 6.0,
        _ => (1..=n).map(|k| k as f64).product(),
    }
}

/// Taylor coefficients of a scalar function at a point, total degree `<= order`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet3 {
    nvars: u8,
    order: u8,
    coeffs: [f64; NCOEFF],
}

impl Jet3 {
    /// A constant; exact at every order.
    pub fn constant(value: f64, nvars: usize) -> Self {
        let mut coeffs = [0.0; NCOEFF];
        coeffs[0] = value;
        Jet3 {
            nvars: nvars as u8,
            order: MAX_ORDER as u8,
            coeffs,
        }
    }

    /// The coordinate function `x_i` expanded at `value`.
    pub fn variable(value: f64, var: usize, nvars: usize, order: usize) -> Self {
        assert!(var < nvars && nvars <= 3 && order <= MAX_ORDER);
        let mut coeffs = [0.0; NCOEFF];
        coeffs[0] = value;
        if order >= 1 {
            coeffs[1 + var] = 1.0;
        }
        Jet3 {
            nvars: nvars as u8,
            order: order as u8,
            coeffs,
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Jet3::constant(0.0, nvars)
    }

    /// Rebuild a jet from raw coefficients (used by the ODE state packing).
    pub fn from_parts(nvars: usize, order: usize, coeffs: [f64; NCOEFF]) -> Self {
        Jet3 {
            nvars: nvars as u8,
            order: order as u8,
            coeffs,
        }
        .with_order(order)
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Raw Taylor coefficient for the multi-index `m`.
    pub fn coeff(&self, m: [usize; 3]) -> f64 {
        self.coeffs[idx(m)]
    }

    pub fn coeffs(&self) -> &[f64; NCOEFF] {
        &self.coeffs
    }

    /// First partial derivative `∂f/∂x_i`.
    pub fn d1(&self, i: usize) -> f64 {
        self.coeffs[1 + i]
    }

    /// Second partial derivative `∂²f/∂x_i∂x_j` (factorials applied).
    pub fn d2(&self, i: usize, j: usize) -> f64 {
        let mut m = [0usize; 3];
        m[i] += 1;
        m[j] += 1;
        let fac = if i == j { 2.0 } else { 1.0 };
        self.coeffs[idx(m)] * fac
    }

    /// Third partial derivative `∂³f/∂x_i∂x_j∂x_k`.
    pub fn d3(&self, i: usize, j: usize, k: usize) -> f64 {
        let mut m = [0usize; 3];
        m[i] += 1;
        m[j] += 1;
        m[k] += 1;
        let fac = factorial(m[0]) * factorial(m[1]) * factorial(m[2]);
        self.coeffs[idx(m)] * fac
    }

    /// Analytic partial derivative for an arbitrary multi-index.
    pub fn derivative(&self, m: [usize; 3]) -> f64 {
        let fac = factorial(m[0]) * factorial(m[1]) * factorial(m[2]);
        self.coeffs[idx(m)] * fac
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Smallest total degree carrying a nonzero coefficient; `MAX_ORDER + 1`
    /// for the zero jet.
    fn valuation(&self) -> usize {
        for k in 0..COUNT[self.order()] {
            if self.coeffs[k] != 0.0 {
                return DEGREE[k];
            }
        }
        MAX_ORDER + 1
    }

    fn with_order(mut self, order: usize) -> Self {
        let order = order.min(MAX_ORDER);
        for k in COUNT[order]..NCOEFF {
            self.coeffs[k] = 0.0;
        }
        self.order = order as u8;
        self
    }

    /// Truncate to a lower order (higher coefficients zeroed).
    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order());
        self.with_order(order)
    }

    /// Jet of `∂f/∂x_i`, one order lower.
    pub fn partial(&self, i: usize) -> Self {
        let ord = self.order().saturating_sub(1);
        let mut out = Jet3 {
            nvars: self.nvars,
            order: ord as u8,
            coeffs: [0.0; NCOEFF],
        };
        for k in 0..COUNT[ord] {
            let mut m = MULTI_INDEX[k];
            m[i] += 1;
            out.coeffs[k] = self.coeffs[idx(m)] * m[i] as f64;
        }
        out
    }

    /// Zero every coefficient that involves variable `i` (evaluation of the
    /// jet family at the base value of that variable).
    pub fn restrict_var(&self, i: usize) -> Self {
        let mut out = *self;
        for k in 0..NCOEFF {
            if MULTI_INDEX[k][i] > 0 {
                out.coeffs[k] = 0.0;
            }
        }
        out
    }

    /// Formal antiderivative in variable `i`, with zero constant of
    /// integration in that variable. Raises the trustworthy order by one.
    pub fn integrate_var(&self, i: usize) -> Self {
        let ord = (self.order() + 1).min(MAX_ORDER);
        let mut out = Jet3 {
            nvars: self.nvars,
            order: ord as u8,
            coeffs: [0.0; NCOEFF],
        };
        for k in 0..COUNT[self.order()] {
            if DEGREE[k] + 1 > MAX_ORDER {
                continue;
            }
            let mut m = MULTI_INDEX[k];
            m[i] += 1;
            out.coeffs[idx(m)] = self.coeffs[k] / m[i] as f64;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            *c *= s;
        }
        out
    }

    pub fn recip(&self) -> Result<Self> {
        let v = self.value();
        if v == 0.0 || !v.is_finite() {
            return Err(Error::Domain {
                what: format!("reciprocal of {v}"),
                subtree: String::new(),
            });
        }
        let t = [
            1.0 / v,
            -1.0 / (v * v),
            1.0 / (v * v * v),
            -1.0 / (v * v * v * v),
        ];
        Ok(self.compose_univariate(t))
    }

    pub fn div(&self, rhs: &Jet3) -> Result<Self> {
        Ok(*self * rhs.recip()?)
    }

    /// `φ(self)` where `t` holds the Taylor coefficients of `φ` at
    /// `self.value()` (that is, `φ⁽ᵏ⁾/k!`).
    fn compose_univariate(&self, t: [f64; 4]) -> Self {
        let mut h = *self;
        h.coeffs[0] = 0.0;
        // Horner over the truncated algebra.
        let mut acc = Jet3::constant(t[3], self.nvars());
        for k in (0..3).rev() {
            acc = acc * h + Jet3::constant(t[k], self.nvars());
        }
        acc.with_order(self.order())
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose_univariate([s, c, -s / 2.0, -c / 6.0])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose_univariate([c, -s, -c / 2.0, s / 6.0])
    }

    pub fn tan(&self) -> Self {
        let t = self.value().tan();
        let d1 = 1.0 + t * t;
        let d2 = 2.0 * t * d1;
        let d3 = 2.0 * d1 * (1.0 + 3.0 * t * t);
        self.compose_univariate([t, d1, d2 / 2.0, d3 / 6.0])
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose_univariate([e, e, e / 2.0, e / 6.0])
    }

    pub fn ln(&self) -> Result<Self> {
        let v = self.value();
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::Domain {
                what: format!("log of {v}"),
                subtree: String::new(),
            });
        }
        Ok(self.compose_univariate([
            v.ln(),
            1.0 / v,
            -1.0 / (2.0 * v * v),
            1.0 / (3.0 * v * v * v),
        ]))
    }

    pub fn sqrt(&self) -> Result<Self> {
        let v = self.value();
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::Domain {
                what: format!("sqrt of {v}"),
                subtree: String::new(),
            });
        }
        let r = v.sqrt();
        Ok(self.compose_univariate([r, 0.5 / r, -1.0 / (8.0 * r * v), 1.0 / (16.0 * r * v * v)]))
    }

    /// Integer power by repeated multiplication; exact for polynomial input.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut acc = Jet3::constant(1.0, self.nvars());
        let mut base = *self;
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        Ok(acc)
    }

    /// Real power; positive base required for non-integer exponents.
    pub fn powf(&self, e: f64) -> Result<Self> {
        if e.fract() == 0.0 && e.abs() <= 1e6 {
            return self.powi(e as i64);
        }
        let v = self.value();
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::Domain {
                what: format!("{v}^{e} with non-integer exponent"),
                subtree: String::new(),
            });
        }
        let p = v.powf(e);
        Ok(self.compose_univariate([
            p,
            e * p / v,
            e * (e - 1.0) * p / (v * v) / 2.0,
            e * (e - 1.0) * (e - 2.0) * p / (v * v * v) / 6.0,
        ]))
    }

    pub fn atan(&self) -> Self {
        let v = self.value();
        let d = 1.0 + v * v;
        let d1 = 1.0 / d;
        let d2 = -2.0 * v / (d * d);
        let d3 = (6.0 * v * v - 2.0) / (d * d * d);
        self.compose_univariate([v.atan(), d1, d2 / 2.0, d3 / 6.0])
    }

    /// Two-argument arctangent with the usual quadrant conventions. The
    /// expansion follows the branch through the base point, so the base values
    /// must not both vanish.
    pub fn atan2(y: &Jet3, x: &Jet3) -> Result<Self> {
        let (y0, x0) = (y.value(), x.value());
        if y0 == 0.0 && x0 == 0.0 {
            return Err(Error::Domain {
                what: "atan2(0, 0)".into(),
                subtree: String::new(),
            });
        }
        let base = y0.atan2(x0);
        if x0.abs() >= y0.abs() {
            let ratio = y.div(x)?;
            let offset = base - (y0 / x0).atan();
            Ok(ratio.atan() + Jet3::constant(offset, y.nvars()))
        } else {
            let ratio = x.div(y)?;
            let offset = base + (x0 / y0).atan();
            Ok(Jet3::constant(offset, y.nvars()) - ratio.atan())
        }
    }

    /// Substitute `inner` for the variables of `self`. The constant terms of
    /// the inner jets must equal the expansion point of `self`; they are
    /// discarded here.
    pub fn compose(&self, inner: &[Jet3; 3]) -> Self {
        let nv = inner[0].nvars().max(inner[1].nvars()).max(inner[2].nvars());
        let mut pows = [[Jet3::constant(1.0, nv); MAX_ORDER + 1]; 3];
        let mut used_order = MAX_ORDER;
        for i in 0..3 {
            let mut h = inner[i];
            h.coeffs[0] = 0.0;
            h.nvars = nv as u8;
            for d in 1..=MAX_ORDER {
                pows[i][d] = pows[i][d - 1] * h;
            }
            // Only inner jets the outer actually touches constrain the order.
            let touches =
                (0..COUNT[self.order()]).any(|k| self.coeffs[k] != 0.0 && MULTI_INDEX[k][i] > 0);
            if touches {
                used_order = used_order.min(inner[i].order());
            }
        }
        let mut out = Jet3::zero(nv);
        for k in 0..COUNT[self.order()] {
            let a = self.coeffs[k];
            if a == 0.0 {
                continue;
            }
            let m = MULTI_INDEX[k];
            let term = pows[0][m[0]] * pows[1][m[1]] * pows[2][m[2]];
            out = out + term.scale(a);
        }
        out.with_order(used_order.min(self.order()))
    }
}

impl std::ops::Add for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        let order = self.order().min(rhs.order());
        let mut out = Jet3 {
            nvars: self.nvars.max(rhs.nvars),
            order: order as u8,
            coeffs: [0.0; NCOEFF],
        };
        for k in 0..COUNT[order] {
            out.coeffs[k] = self.coeffs[k] + rhs.coeffs[k];
        }
        out
    }
}

impl std::ops::Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        self + rhs.scale(-1.0)
    }
}

impl std::ops::Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        // Valuation-aware order: the error of `self` starts at degree
        // order+1 and is shifted up by the valuation of `rhs`.
        let order = (self.order() + rhs.valuation())
            .min(rhs.order() + self.valuation())
            .min(MAX_ORDER);
        let mut out = Jet3 {
            nvars: self.nvars.max(rhs.nvars),
            order: order as u8,
            coeffs: [0.0; NCOEFF],
        };
        for i in 0..COUNT[self.order().min(order)] {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            let mi = MULTI_INDEX[i];
            let dmax = order - DEGREE[i];
            for j in 0..COUNT[dmax.min(rhs.order())] {
                let b = rhs.coeffs[j];
                if b == 0.0 {
                    continue;
                }
                let mj = MULTI_INDEX[j];
                out.coeffs[idx([mi[0] + mj[0], mi[1] + mj[1], mi[2] + mj[2]])] += a * b;
            }
        }
        out
    }
}

impl std::ops::Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: f64) -> Jet3 {
        self.scale(rhs)
    }
}

/// Directional derivative `Σ_l dir_l ∂f/∂x_l` as a jet (one order lower).
pub fn dir_derivative(f: &Jet3, dir: &[Jet3; 3]) -> Jet3 {
    let mut out = Jet3::zero(f.nvars());
    for l in 0..3 {
        out = out + dir[l] * f.partial(l);
    }
    out
}

/// Invert a jet map `F : ℝ³ → ℝ³` around `base` (where `F` was expanded).
/// Returns jets of the inverse in the deviation of the image coordinates,
/// with constant terms equal to `base`.
pub fn invert_map3(f: &[Jet3; 3], base: [f64; 3]) -> Result<[Jet3; 3]> {
    let order = f.iter().map(|j| j.order()).min().unwrap();
    let mut jac = [[0.0; 3]; 3];
    for m in 0..3 {
        for k in 0..3 {
            jac[m][k] = f[m].d1(k);
        }
    }
    let jinv = crate::linalg::inv3(&jac)
        .ok_or_else(|| Error::Singular("jet map inversion: singular Jacobian".into()))?;

    let nv = f[0].nvars();
    let mut g: [Jet3; 3] = std::array::from_fn(|i| {
        let mut gi = Jet3::constant(base[i], nv);
        for j in 0..3 {
            let var = Jet3::variable(0.0, j, 3, order);
            gi = gi + var.scale(jinv[i][j]);
        }
        gi.with_order(order)
    });

    for _ in 0..order {
        // e = F(G(x)) - x, with x measured from F(base)
        let mut e = [Jet3::zero(nv); 3];
        for m in 0..3 {
            let comp = f[m].compose(&g);
            let x_m = Jet3::variable(f[m].value(), m, 3, order);
            e[m] = comp - x_m;
        }
        for i in 0..3 {
            let mut corr = Jet3::zero(nv);
            for m in 0..3 {
                corr = corr + e[m].scale(jinv[i][m]);
            }
            g[i] = (g[i] - corr).with_order(order);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(v: f64, i: usize) -> Jet3 {
        Jet3::variable(v, i, 3, 3)
    }

    #[test]
    fn square_polynomial_is_exact() {
        // x² at x = 2: value 4, f' = 4, f'' = 2
        let x = Jet3::variable(2.0, 0, 1, 2);
        let f = x * x;
        assert_eq!(f.value(), 4.0);
        assert_eq!(f.d1(0), 4.0);
        assert_eq!(f.d2(0, 0), 2.0);
    }

    #[test]
    fn sin_maclaurin() {
        let x = Jet3::variable(0.0, 0, 1, 3);
        let f = x.sin();
        assert_eq!(f.value(), 0.0);
        assert_eq!(f.d1(0), 1.0);
        assert_eq!(f.d2(0, 0), 0.0);
        // Taylor coefficient of degree 3 is -1/3!
        assert!((f.coeff([3, 0, 0]) + 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn division_and_recip() {
        let x = var(1.3, 0);
        let one = (x.div(&x)).unwrap();
        assert!((one.value() - 1.0).abs() < 1e-15);
        for k in 1..NCOEFF {
            assert!(one.coeffs()[k].abs() < 1e-14);
        }
    }

    #[test]
    fn mixed_partials_of_product() {
        // f = x*y²*z at (2, 3, 5): ∂³f/∂x∂y∂z... check several
        let (x, y, z) = (var(2.0, 0), var(3.0, 1), var(5.0, 2));
        let f = x * y * y * z;
        assert_eq!(f.value(), 2.0 * 9.0 * 5.0);
        // ∂f/∂x = y² z = 45, ∂²f/∂x∂y = 2yz = 30, ∂³f/∂x∂y∂z = 2y = 6
        assert_eq!(f.d1(0), 45.0);
        assert_eq!(f.d2(0, 1), 30.0);
        assert_eq!(f.d3(0, 1, 2), 6.0);
    }

    #[test]
    fn valuation_preserves_order_through_zero_constant_factor() {
        // s has zero constant term; s * h with h order 1 stays exact to
        // total degree 2.
        let s = Jet3::variable(0.0, 2, 3, 3);
        let h = var(1.0, 0).truncated(1);
        let p = s * h;
        assert_eq!(p.order(), 2);
        assert_eq!(p.coeff([1, 0, 1]), 1.0);
    }

    #[test]
    fn compose_chain_rule() {
        // outer φ(u, v) = u·v expanded at (2, 3); inner u = x², v = x + 3x³ - 1... keep in-range
        let u0 = 2.0;
        let v0 = 3.0;
        let u = Jet3::variable(u0, 0, 3, 3);
        let v = Jet3::variable(v0, 1, 3, 3);
        let outer = u * v;
        // inner as functions of t (var 0): u = 2 + t², v = 3 + t
        let t = Jet3::variable(0.0, 0, 3, 3);
        let iu = Jet3::constant(2.0, 3) + t * t;
        let iv = Jet3::constant(3.0, 3) + t;
        let comp = outer.compose(&[iu, iv, Jet3::zero(3)]);
        // f(t) = (2 + t²)(3 + t) = 6 + 2t + 3t² + t³
        assert!((comp.value() - 6.0).abs() < 1e-14);
        assert!((comp.d1(0) - 2.0).abs() < 1e-14);
        assert!((comp.d2(0, 0) - 6.0).abs() < 1e-14);
        assert!((comp.d3(0, 0, 0) - 6.0).abs() < 1e-14);
    }

    #[test]
    fn invert_quadratic_map() {
        // F(t) = (t1 + t2², t2 + 0.3 t3, t3 + 0.1 t1 t2) at base (0.2, 0.4, -0.3)
        let base = [0.2, 0.4, -0.3];
        let t: [Jet3; 3] = std::array::from_fn(|i| var(base[i], i));
        let f = [
            t[0] + t[1] * t[1],
            t[1] + t[2].scale(0.3),
            t[2] + (t[0] * t[1]).scale(0.1),
        ];
        let g = invert_map3(&f, base).unwrap();
        // G(F(t)) should be the identity around base
        for i in 0..3 {
            let round = g[i].compose(&f);
            let expect = t[i];
            for k in 0..NCOEFF {
                assert!(
                    (round.coeffs()[k] - expect.coeffs()[k]).abs() < 1e-12,
                    "component {i}, coeff {k}"
                );
            }
        }
    }

    #[test]
    fn integrate_then_differentiate() {
        let x = var(1.5, 0);
        let y = var(-0.5, 1);
        let f = (x * y + x).truncated(2);
        let int = f.integrate_var(2);
        assert_eq!(int.order(), 3);
        let back = int.partial(2);
        for k in 0..COUNT[2] {
            assert!((back.coeffs()[k] - f.coeffs()[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn atan2_quadrants() {
        for &(y0, x0) in &[
            (1.0, 2.0),
            (1.0, -2.0),
            (-1.5, -0.3),
            (2.0, 0.0),
            (-2.0, 0.1),
        ] {
            let y = var(y0, 0);
            let x = var(x0, 1);
            let a = Jet3::atan2(&y, &x).unwrap();
            assert!((a.value() - y0.atan2(x0)).abs() < 1e-14);
            // d/dy atan2 = x/(x²+y²), d/dx = -y/(x²+y²)
            let r2 = x0 * x0 + y0 * y0;
            assert!((a.d1(0) - x0 / r2).abs() < 1e-12);
            assert!((a.d1(1) + y0 / r2).abs() < 1e-12);
        }
    }
}
