//! Truncated Taylor arithmetic in one variable, up to third derivatives.
//!
//! Curve families are written once as ordinary arithmetic on [`Jet3`] and
//! yield exact `f, f', f'', f'''` without hand-derived formulas.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet3 {
    pub const fn constant(v: f64) -> Jet3 {
        Jet3 {
            v,
            d1: 0.0,
            d2: 0.0,
            d3: 0.0,
        }
    }

    /// The independent variable seeded at `t`.
    pub const fn var(t: f64) -> Jet3 {
        Jet3 {
            v: t,
            d1: 1.0,
            d2: 0.0,
            d3: 0.0,
        }
    }

    /// Compose with a scalar function given its value and first three
    /// derivatives at `self.v` (Faà di Bruno, third order).
    fn compose(self, f0: f64, f1: f64, f2: f64, f3: f64) -> Jet3 {
        let (a1, a2, a3) = (self.d1, self.d2, self.d3);
        Jet3 {
            v: f0,
            d1: f1 * a1,
            d2: f2 * a1 * a1 + f1 * a2,
            d3: f3 * a1 * a1 * a1 + 3.0 * f2 * a1 * a2 + f1 * a3,
        }
    }

    pub fn sin(self) -> Jet3 {
        let (s, c) = self.v.sin_cos();
        self.compose(s, c, -s, -c)
    }

    pub fn cos(self) -> Jet3 {
        let (s, c) = self.v.sin_cos();
        self.compose(c, -s, -c, s)
    }

    pub fn exp(self) -> Jet3 {
        let e = self.v.exp();
        self.compose(e, e, e, e)
    }

    pub fn sqrt(self) -> Jet3 {
        let r = self.v.sqrt();
        self.compose(r, 0.5 / r, -0.25 / (r * self.v), 0.375 / (r * self.v * self.v))
    }

    pub fn atan(self) -> Jet3 {
        let x = self.v;
        let q = 1.0 / (1.0 + x * x);
        self.compose(
            x.atan(),
            q,
            -2.0 * x * q * q,
            (6.0 * x * x - 2.0) * q * q * q,
        )
    }

    pub fn acos(self) -> Jet3 {
        let x = self.v;
        let w = 1.0 - x * x;
        let r = w.sqrt();
        self.compose(
            x.acos(),
            -1.0 / r,
            -x / (w * r),
            -(1.0 + 2.0 * x * x) / (w * w * r),
        )
    }

    /// Two-argument arctangent. The value is `atan2(y, x)`; derivatives
    /// come from whichever of `atan(y/x)` or `-atan(x/y)` is well
    /// conditioned at this point (they differ by a constant).
    pub fn atan2(y: Jet3, x: Jet3) -> Jet3 {
        let branch = if x.v.abs() >= y.v.abs() {
            (y / x).atan()
        } else {
            -(x / y).atan()
        };
        Jet3 {
            v: y.v.atan2(x.v),
            ..branch
        }
    }

    pub fn powi(self, n: i32) -> Jet3 {
        let x = self.v;
        let nf = n as f64;
        self.compose(
            x.powi(n),
            nf * x.powi(n - 1),
            nf * (nf - 1.0) * x.powi(n - 2),
            nf * (nf - 1.0) * (nf - 2.0) * x.powi(n - 3),
        )
    }

    pub fn scale(self, k: f64) -> Jet3 {
        Jet3 {
            v: self.v * k,
            d1: self.d1 * k,
            d2: self.d2 * k,
            d3: self.d3 * k,
        }
    }

    pub fn offset(self, k: f64) -> Jet3 {
        Jet3 {
            v: self.v + k,
            ..self
        }
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        Jet3 {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
            d3: self.d3 + o.d3,
        }
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        self + (-o)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(-1.0)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, o: Jet3) -> Jet3 {
        Jet3 {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
            d3: self.d3 * o.v + 3.0 * self.d2 * o.d1 + 3.0 * self.d1 * o.d2 + self.v * o.d3,
        }
    }
}

impl Div for Jet3 {
    type Output = Jet3;
    fn div(self, o: Jet3) -> Jet3 {
        let x = o.v;
        let inv = o.compose(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x), -6.0 / (x * x * x * x));
        self * inv
    }
}
