use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `a + bω` in Z[ω] with ω a primitive cube root of unity, ω² = −1 − ω.
///
/// Every character value of the supported stabilizer groups lies here.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Eis {
    pub a: i64,
    pub b: i64,
}

pub const OMEGA: Eis = Eis { a: 0, b: 1 };
pub const OMEGA2: Eis = Eis { a: -1, b: -1 };

impl Eis {
    pub const fn int(a: i64) -> Eis {
        Eis { a, b: 0 }
    }

    pub fn conj(self) -> Eis {
        // ω̄ = ω² = −1 − ω
        Eis {
            a: self.a - self.b,
            b: -self.b,
        }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn as_int(self) -> Option<i64> {
        (self.b == 0).then_some(self.a)
    }
}

impl From<i64> for Eis {
    fn from(a: i64) -> Eis {
        Eis::int(a)
    }
}

impl Add for Eis {
    type Output = Eis;
    fn add(self, o: Eis) -> Eis {
        Eis {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }
}

impl Sub for Eis {
    type Output = Eis;
    fn sub(self, o: Eis) -> Eis {
        self + (-o)
    }
}

impl Neg for Eis {
    type Output = Eis;
    fn neg(self) -> Eis {
        Eis {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Mul for Eis {
    type Output = Eis;
    fn mul(self, o: Eis) -> Eis {
        Eis {
            a: self.a * o.a - self.b * o.b,
            b: self.a * o.b + self.b * o.a - self.b * o.b,
        }
    }
}

impl fmt::Display for Eis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}ω"),
            (a, b) if b < 0 => write!(f, "{a}-{}ω", -b),
            (a, b) => write!(f, "{a}+{b}ω"),
        }
    }
}
