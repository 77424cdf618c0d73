//! Compensated (double-double) arithmetic for argument reduction.
//!
//! Fractional parts of products like `n / (2 pi)` must stay accurate for
//! integers up to 1e7, far past where a plain `f64` product retains its
//! low-order bits. A value is carried as an unevaluated sum `hi + lo` with
//! `|lo|` below half an ulp of `hi`, giving roughly 32 significant digits
//! through products and sums of exactly representable inputs.

/// Error-free sum: `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free sum under the assumption `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product via fused multiply-add: `a * b = p + e` exactly.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// 2 pi to double-double precision.
pub const TWO_PI: Dd = Dd {
    hi: 6.283185307179586,
    lo: 2.4492935982947064e-16,
};

/// 1 / (2 pi) to double-double precision.
pub const INV_2PI: Dd = Dd {
    hi: 0.15915494309189535,
    lo: -9.839338337591243e-18,
};

impl Dd {
    pub fn new(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact product of two `f64` values.
    pub fn from_prod(a: f64, b: f64) -> Self {
        let (p, e) = two_prod(a, b);
        Dd::new(p, e)
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        Dd::new(s, e)
    }

    pub fn add_f64(self, x: f64) -> Dd {
        let (s, e) = two_sum(self.hi, x);
        Dd::new(s, e + self.lo)
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        Dd::new(p, e)
    }

    pub fn mul_f64(self, x: f64) -> Dd {
        let (p, e) = two_prod(self.hi, x);
        Dd::new(p, e + self.lo * x)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Fractional part in `[0, 1)`. The integer part of `hi` subtracts
    /// exactly, so all precision lands in the fraction.
    pub fn frac(self) -> Dd {
        let f = self.hi - self.hi.floor();
        let (s, e) = two_sum(f, self.lo);
        let mut r = Dd::new(s, e);
        if r.hi >= 1.0 {
            r = r.add_f64(-1.0);
        } else if r.hi < 0.0 {
            r = r.add_f64(1.0);
        }
        // Guard the boundary after renormalization.
        if r.hi >= 1.0 {
            r = Dd::from_f64(0.0);
        } else if r.hi < 0.0 {
            r = Dd::from_f64(0.0);
        }
        r
    }
}

/// Fractional part of the exact product `a * b` of two `f64` values,
/// accurate to double-double precision.
pub fn frac_prod(a: f64, b: f64) -> f64 {
    Dd::from_prod(a, b).frac().to_f64()
}

/// Fractional part of `a * c` where `c` is a double-double constant.
pub fn frac_prod_dd(a: f64, c: Dd) -> f64 {
    c.mul_f64(a).frac().to_f64()
}
