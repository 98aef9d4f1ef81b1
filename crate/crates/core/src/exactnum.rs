//! Exact arithmetic in a real quadratic field `Q(√d)`.
//!
//! Every squared distance and squared scale in a metric model is a [`QuadRat`],
//! so entourage membership `d(x, y)² ≤ r²` is decided without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `rat + root·√radicand` with both parts kept in lowest terms.
///
/// `BigRational` already normalizes (positive denominator, reduced), so two
/// values are equal exactly when their parts and radicands agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadRat {
    rat: BigRational,
    root: BigRational,
    radicand: u64,
}

/// Returns true if `d ≥ 2` has no repeated prime factor.
pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl QuadRat {
    pub fn new(rat: BigRational, root: BigRational, radicand: u64) -> Result<Self> {
        if !is_square_free(radicand) {
            return Err(Error::Usage(format!(
                "radicand {radicand} is not a square-free integer ≥ 2"
            )));
        }
        Ok(Self { rat, root, radicand })
    }

    pub fn from_ints(rat: i64, root: i64, radicand: u64) -> Result<Self> {
        Self::new(BigRational::from_integer(rat.into()), BigRational::from_integer(root.into()), radicand)
    }

    pub fn rational(rat: BigRational, radicand: u64) -> Result<Self> {
        Self::new(rat, BigRational::zero(), radicand)
    }

    pub fn zero(radicand: u64) -> Result<Self> {
        Self::rational(BigRational::zero(), radicand)
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn root_part(&self) -> &BigRational {
        &self.root
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.root.is_zero()
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.radicand != other.radicand {
            return Err(Error::Usage(format!(
                "mixed radicands √{} and √{}",
                self.radicand, other.radicand
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self { rat: &self.rat + &other.rat, root: &self.root + &other.root, radicand: self.radicand })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let d = BigRational::from_integer(BigInt::from(self.radicand));
        let rat = &self.rat * &other.rat + &self.root * &other.root * d;
        let root = &self.rat * &other.root + &self.root * &other.rat;
        Ok(Self { rat, root, radicand: self.radicand })
    }

    pub fn neg(&self) -> Self {
        Self { rat: -&self.rat, root: -&self.root, radicand: self.radicand }
    }

    /// Exact sign of the real number `rat + root·√d`.
    pub fn signum(&self) -> Ordering {
        let a = self.rat.cmp(&BigRational::zero());
        let b = self.root.cmp(&BigRational::zero());
        match (a, b) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                // opposite signs: compare a² with b²·d
                let d = BigRational::from_integer(BigInt::from(self.radicand));
                let a2 = &self.rat * &self.rat;
                let b2d = &self.root * &self.root * d;
                if a == Ordering::Greater {
                    a2.cmp(&b2d)
                } else {
                    b2d.cmp(&a2)
                }
            }
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering> {
        Ok(self.sub(other)?.signum())
    }

    /// Floating-point approximation; for display and search heuristics only.
    pub fn approx(&self) -> f64 {
        ratio_to_f64(&self.rat) + ratio_to_f64(&self.root) * (self.radicand as f64).sqrt()
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}√{}", fmt_ratio(&self.rat), fmt_ratio(&self.root), self.radicand)
    }
}

fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

impl QuadRat {
    /// Shortest form accepted by [`QuadRat::parse`]: `p`, `q√d` or `p ± q√d`.
    pub fn canonical(&self) -> String {
        let d = self.radicand;
        let coef = |q: &BigRational| if q.is_one() { String::new() } else { fmt_ratio(q) };
        match (self.rat.is_zero(), self.root.is_zero()) {
            (_, true) => fmt_ratio(&self.rat),
            (true, false) if (-&self.root).is_one() => format!("-√{d}"),
            (true, false) => format!("{}√{d}", coef(&self.root)),
            (false, false) if self.root.is_negative() => format!("{} - {}√{d}", fmt_ratio(&self.rat), coef(&-&self.root)),
            (false, false) => format!("{} + {}√{d}", fmt_ratio(&self.rat), coef(&self.root)),
        }
    }

    /// Parses `p`, `q√d`, `p + q√d` or `p - q√d`, where `p` and `q` are
    /// integers or fractions. A bare rational takes `default_radicand`.
    pub fn parse(s: &str, default_radicand: u64) -> Result<Self> {
        let s = s.trim();
        let (rat_txt, root_txt, neg_root) = if let Some((l, r)) = s.split_once(" + ") {
            (Some(l), Some(r), false)
        } else if let Some((l, r)) = s.split_once(" - ") {
            (Some(l), Some(r), true)
        } else if s.contains('√') {
            (None, Some(s), false)
        } else {
            (Some(s), None, false)
        };
        let rat = match rat_txt {
            Some(t) => parse_ratio(t)?,
            None => BigRational::zero(),
        };
        let (root, radicand) = match root_txt {
            Some(t) => {
                let (coef, d) = t
                    .split_once('√')
                    .ok_or_else(|| Error::Parse(format!("expected `q√d` in `{s}`")))?;
                let d: u64 = d.trim().parse().map_err(|_| Error::Parse(format!("bad radicand in `{s}`")))?;
                let coef = coef.trim();
                let mut q = match coef {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    _ => parse_ratio(coef)?,
                };
                if neg_root {
                    q = -q;
                }
                (q, d)
            }
            None => (BigRational::zero(), default_radicand),
        };
        Self::new(rat, root, radicand)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadRat {
        QuadRat::parse(s, 3).unwrap()
    }

    #[test]
    fn canonical_round_trips() {
        for txt in ["0", "-3/4", "√3", "-√3", "1/2√3", "1 + √3", "1/2 - 3/4√3"] {
            let v = q(txt);
            assert_eq!(v.canonical(), txt);
            assert_eq!(q(&v.canonical()), v);
        }
    }

    #[test]
    fn field_ops() {
        assert_eq!(q("1 + 1√3").mul(&q("1 + 1√3")).unwrap(), q("4 + 2√3"));
        let x = q("-5/7 + 2/9√3");
        assert_eq!(x.add(&x.neg()).unwrap(), q("0 + 0√3"));
        assert_eq!(q("1/2 + 0√3").mul(&q("0 + 1√3")).unwrap(), q("0 + 1/2√3"));
    }

    #[test]
    fn comparisons() {
        assert_eq!(q("0 + 1√3").cmp_exact(&q("7/4 + 0√3")).unwrap(), Ordering::Less);
        assert_eq!(q("2 + 0√3").cmp_exact(&q("0 + 1√3")).unwrap(), Ordering::Greater);
        let x = q("3/5 - 2/3√3");
        assert_eq!(x.cmp_exact(&x).unwrap(), Ordering::Equal);
    }

    #[test]
    fn mixed_radicands_rejected() {
        let a = QuadRat::from_ints(1, 1, 2).unwrap();
        let b = QuadRat::from_ints(1, 1, 3).unwrap();
        assert!(matches!(a.add(&b), Err(Error::Usage(_))));
        assert!(matches!(a.cmp_exact(&b), Err(Error::Usage(_))));
        assert!(QuadRat::from_ints(1, 1, 12).is_err());
    }

    #[test]
    fn text_form() {
        let x = q("6/4 + -2/4√3");
        assert_eq!(x.to_string(), "3/2 + -1/2√3");
        assert_eq!(q(&x.to_string()), x);
        assert_eq!(q("1/2 - 1/2√3"), q("1/2 + -1/2√3"));
        assert_eq!(q("√3"), q("0 + 1√3"));
        assert!(QuadRat::parse("1/0", 3).is_err());
        assert!(QuadRat::parse("x + 1√3", 3).is_err());
    }
}
