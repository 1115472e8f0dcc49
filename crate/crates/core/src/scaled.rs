//! Numbers carried as mantissa·e^{exponent}, for products of Airy factors
//! whose individual e^{±ζ} pieces would overflow.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::airy::AiryValues;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Scaled {
    pub mant: f64,
    pub exp: f64,
}

impl Scaled {
    pub fn new(mant: f64, exp: f64) -> Self {
        Scaled { mant, exp }
    }

    pub fn real(v: f64) -> Self {
        Scaled { mant: v, exp: 0.0 }
    }

    pub fn value(self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else {
            self.mant * self.exp.exp()
        }
    }

    pub fn ai(v: &AiryValues) -> Self {
        Scaled::new(v.ai_s, -v.zeta)
    }

    pub fn aip(v: &AiryValues) -> Self {
        Scaled::new(v.aip_s, -v.zeta)
    }

    pub fn bi(v: &AiryValues) -> Self {
        Scaled::new(v.bi_s, v.zeta)
    }

    pub fn bip(v: &AiryValues) -> Self {
        Scaled::new(v.bip_s, v.zeta)
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, o: Scaled) -> Scaled {
        if self.mant == 0.0 {
            return o;
        }
        if o.mant == 0.0 {
            return self;
        }
        let e = self.exp.max(o.exp);
        Scaled::new(self.mant * (self.exp - e).exp() + o.mant * (o.exp - e).exp(), e)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled::new(-self.mant, self.exp)
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, o: Scaled) -> Scaled {
        self + (-o)
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, o: Scaled) -> Scaled {
        Scaled::new(self.mant * o.mant, self.exp + o.exp)
    }
}

impl Mul<f64> for Scaled {
    type Output = Scaled;
    fn mul(self, c: f64) -> Scaled {
        Scaled::new(self.mant * c, self.exp)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, o: Scaled) -> Scaled {
        Scaled::new(self.mant / o.mant, self.exp - o.exp)
    }
}
