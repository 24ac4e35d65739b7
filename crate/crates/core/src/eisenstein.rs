//! Exact values in Z[ω], ω = e^{2πi/3}.
//!
//! Every additive character of GF(3^r) takes values in {1, ω, ω²}, so every
//! character sum in this crate is an Eisenstein integer `a + bω`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// `re + w·ω`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Eisenstein {
    pub re: i64,
    pub w: i64,
}

impl Eisenstein {
    pub const ZERO: Eisenstein = Eisenstein { re: 0, w: 0 };
    pub const ONE: Eisenstein = Eisenstein { re: 1, w: 0 };
    pub const OMEGA: Eisenstein = Eisenstein { re: 0, w: 1 };

    pub const fn new(re: i64, w: i64) -> Self {
        Eisenstein { re, w }
    }

    /// λ summed over a multiset whose traces fall into the three fibers
    /// with the given multiplicities: `N0 + N1 ω + N2 ω²`.
    pub fn from_trace_counts(counts: [i64; 3]) -> Self {
        let [n0, n1, n2] = counts;
        Eisenstein::new(n0 - n2, n1 - n2)
    }

    /// ω^k for a trace value k.
    pub fn root(k: u8) -> Self {
        match k % 3 {
            0 => Eisenstein::ONE,
            1 => Eisenstein::OMEGA,
            _ => Eisenstein::new(-1, -1),
        }
    }

    /// Multiplication by ω: ω(a + bω) = -b + (a - b)ω.
    pub fn mul_omega(self) -> Self {
        Eisenstein::new(-self.w, self.re - self.w)
    }

    pub fn conj(self) -> Self {
        // conj(ω) = ω² = -1 - ω
        Eisenstein::new(self.re - self.w, -self.w)
    }

    /// The value as a rational integer, if the ω-component vanishes.
    pub fn as_integer(self) -> Option<i64> {
        (self.w == 0).then_some(self.re)
    }

    pub fn is_real(self) -> bool {
        self.w == 0
    }
}

impl Add for Eisenstein {
    type Output = Eisenstein;
    fn add(self, o: Eisenstein) -> Eisenstein {
        Eisenstein::new(self.re + o.re, self.w + o.w)
    }
}

impl AddAssign for Eisenstein {
    fn add_assign(&mut self, o: Eisenstein) {
        self.re += o.re;
        self.w += o.w;
    }
}

impl Sub for Eisenstein {
    type Output = Eisenstein;
    fn sub(self, o: Eisenstein) -> Eisenstein {
        Eisenstein::new(self.re - o.re, self.w - o.w)
    }
}

impl Neg for Eisenstein {
    type Output = Eisenstein;
    fn neg(self) -> Eisenstein {
        Eisenstein::new(-self.re, -self.w)
    }
}

impl Mul for Eisenstein {
    type Output = Eisenstein;
    fn mul(self, o: Eisenstein) -> Eisenstein {
        // ω² = -1 - ω
        let (a, b, c, d) = (self.re, self.w, o.re, o.w);
        Eisenstein::new(a * c - b * d, a * d + b * c - b * d)
    }
}

impl Mul<i64> for Eisenstein {
    type Output = Eisenstein;
    fn mul(self, k: i64) -> Eisenstein {
        Eisenstein::new(self.re * k, self.w * k)
    }
}

impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.w) {
            (re, 0) => write!(f, "{re}"),
            (0, w) => write!(f, "{w}ω"),
            (re, w) if w < 0 => write!(f, "{re} - {}ω", -w),
            (re, w) => write!(f, "{re} + {w}ω"),
        }
    }
}
