//! Double-double arithmetic (about 106 bits of mantissa) for the ascending
//! Bessel series, where alternating terms up to `e^x` cancel down to `O(1)`.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct DDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DDouble {
    pub const ZERO: DDouble = DDouble { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        DDouble { hi: x, lo: 0.0 }
    }

    /// Exact product of two doubles.
    pub fn product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        DDouble { hi, lo }
    }

    /// Exact sum of two doubles.
    pub fn sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        DDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn div(self, other: DDouble) -> DDouble {
        let q1 = self.hi / other.hi;
        let r = self - other * DDouble::from_f64(q1);
        let q2 = r.hi / other.hi;
        let r = r - other * DDouble::from_f64(q2);
        let q3 = r.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DDouble { hi, lo } + DDouble::from_f64(q3)
    }
}

impl Add for DDouble {
    type Output = DDouble;
    #[inline]
    fn add(self, o: DDouble) -> DDouble {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        DDouble { hi, lo }
    }
}

impl Neg for DDouble {
    type Output = DDouble;
    fn neg(self) -> DDouble {
        DDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DDouble {
    type Output = DDouble;
    #[inline]
    fn sub(self, o: DDouble) -> DDouble {
        self + (-o)
    }
}

impl Mul for DDouble {
    type Output = DDouble;
    #[inline]
    fn mul(self, o: DDouble) -> DDouble {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        DDouble { hi, lo }
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct DdComplex {
    pub re: DDouble,
    pub im: DDouble,
}

impl DdComplex {
    pub fn new(re: DDouble, im: DDouble) -> Self {
        DdComplex { re, im }
    }

    pub fn scale(self, s: DDouble) -> Self {
        DdComplex::new(self.re * s, self.im * s)
    }

    pub fn mul(self, o: DdComplex) -> Self {
        DdComplex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    pub fn div(self, o: DdComplex) -> Self {
        let den = o.re * o.re + o.im * o.im;
        let num = self.mul(DdComplex::new(o.re, -o.im));
        DdComplex::new(num.re.div(den), num.im.div(den))
    }

    pub fn add(self, o: DdComplex) -> Self {
        DdComplex::new(self.re + o.re, self.im + o.im)
    }

    pub fn norm(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}
