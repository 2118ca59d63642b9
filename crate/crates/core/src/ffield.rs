//! Finite fields `F_q` for small prime powers, realized as lookup tables.
//!
//! Elements are indices `0..q`. For `q = p^e` with `e > 1` the index of the
//! residue class `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is `sum c_k p^k`, so
//! index 0 is zero and index 1 is one in every field. The modulus is the
//! lexicographically least monic irreducible polynomial of degree `e`.

use crate::error::{Error, Result};

/// A field element, stored as its canonical index.
pub type Elem = u8;

/// Default ceiling on `q` for [`make_field`].
pub const DEFAULT_MAX_Q: u64 = 16;

/// Hard ceiling: element indices must fit in [`Elem`].
pub const ABSOLUTE_MAX_Q: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    e: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let p = smallest_factor(q);
        let mut rest = q;
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrimePower(q));
        }
        Ok(PrimePower { p, e, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `q^n` as a prime power over the same characteristic.
    pub fn pow(&self, n: u32) -> PrimePower {
        PrimePower {
            p: self.p,
            e: self.e * n,
            q: self.q.pow(n),
        }
    }
}

fn smallest_factor(n: u64) -> u64 {
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return f;
        }
        f += 1;
    }
    n
}

/// All prime powers in `2..=max`, ascending.
pub fn prime_powers_up_to(max: u64) -> Vec<PrimePower> {
    (2..=max).filter_map(|q| PrimePower::new(q).ok()).collect()
}

/// Addition, multiplication, negation and inversion tables for `F_q`.
///
/// Immutable after construction; share freely between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTable {
    order: PrimePower,
    /// Coefficients of the monic modulus, lowest degree first (length `e + 1`).
    modulus: Vec<u64>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// Builds `F_q` with the default size limit.
pub fn make_field(q: PrimePower) -> Result<FieldTable> {
    FieldTable::with_limit(q, DEFAULT_MAX_Q)
}

impl FieldTable {
    /// Convenience wrapper: parse `q` and build with the default limit.
    pub fn new(q: u64) -> Result<Self> {
        make_field(PrimePower::new(q)?)
    }

    pub fn with_limit(order: PrimePower, max_q: u64) -> Result<Self> {
        let max = max_q.min(ABSOLUTE_MAX_Q);
        if order.q > max {
            return Err(Error::FieldTooLarge { q: order.q, max });
        }
        let p = order.p;
        let e = order.e as usize;
        let q = order.q as usize;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            least_irreducible(p, e)
        };

        let digits = |x: usize| -> Vec<u64> {
            let mut v = vec![0u64; e];
            let mut r = x as u64;
            for d in v.iter_mut() {
                *d = r % p;
                r /= p;
            }
            v
        };
        let undigits = |v: &[u64]| -> Elem {
            v.iter().rev().fold(0u64, |acc, &c| acc * p + c) as Elem
        };

        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum);
                mul[a * q + b] = if e == 1 {
                    ((a as u64 * b as u64) % p) as Elem
                } else {
                    undigits(&poly_mul_mod(&da, &db, &modulus, p))
                };
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as Elem;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as Elem;
                }
            }
        }
        Ok(FieldTable {
            order,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> PrimePower {
        self.order
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.order.q as usize
    }

    /// Modulus coefficients, lowest degree first. `[0, 1]` for prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q()).map(|x| x as Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q() + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q() + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.inv[a as usize])
    }

    /// Inverse of a value the caller already knows to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, mut n: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Single entry point over the four table operations.
    pub fn apply(&self, op: FieldOp, a: Elem, b: Elem) -> Result<Elem> {
        let q = self.q();
        if a as usize >= q || (matches!(op, FieldOp::Add | FieldOp::Mul) && b as usize >= q) {
            return Err(Error::Domain(format!("operand out of range for F_{q}")));
        }
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
}

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // modulus is monic: x^e = -(m_0 + ... + m_{e-1} x^{e-1})
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (t, &m) in modulus[..e].iter().enumerate() {
            prod[k - e + t] = (prod[k - e + t] + (p - m) * c) % p;
        }
    }
    prod.truncate(e);
    prod
}

/// Remainder of `f` modulo the monic `g` over `F_p`; coefficients lowest first.
fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if c != 0 {
            for (t, &gc) in g.iter().enumerate() {
                r[shift + t] = (r[shift + t] + (p - gc % p) * c) % p;
            }
        }
        r.pop();
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `code`, with the highest lower coefficient most significant.
fn monic_from_code(code: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut v = vec![0u64; deg + 1];
    let mut r = code;
    for c in v.iter_mut().take(deg) {
        *c = r % p;
        r /= p;
    }
    v[deg] = 1;
    v
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for dg in 1..=deg / 2 {
        for code in 0..p.pow(dg as u32) {
            let g = monic_from_code(code, dg, p);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u64, e: usize) -> Vec<u64> {
    (0..p.pow(e as u32))
        .map(|code| monic_from_code(code, e, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SUPPORTED: [u64; 8] = [2, 3, 4, 5, 7, 8, 9, 16];

    #[test]
    fn prime_power_parsing() {
        let pp = PrimePower::new(9).unwrap();
        assert_eq!((pp.p(), pp.e(), pp.q()), (3, 2, 9));
        assert_eq!(PrimePower::new(6), Err(Error::NotPrimePower(6)));
        assert_eq!(PrimePower::new(1), Err(Error::NotPrimePower(1)));
        assert!(PrimePower::new(0).is_err());
        let qs: Vec<u64> = prime_powers_up_to(16).iter().map(|p| p.q()).collect();
        assert_eq!(qs, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]);
    }

    #[test]
    fn size_limit() {
        assert_eq!(
            FieldTable::new(32),
            Err(Error::FieldTooLarge { q: 32, max: 16 })
        );
        assert!(FieldTable::with_limit(PrimePower::new(256).unwrap(), 256).is_ok());
        assert!(FieldTable::with_limit(PrimePower::new(512).unwrap(), 1024).is_err());
    }

    #[test]
    fn f2_is_xor_and() {
        let f = FieldTable::new(2).unwrap();
        for a in 0..2u8 {
            for b in 0..2u8 {
                assert_eq!(f.add(a, b), a ^ b);
                assert_eq!(f.mul(a, b), a & b);
            }
        }
    }

    #[test]
    fn small_examples() {
        let f5 = FieldTable::new(5).unwrap();
        assert_eq!(f5.inv(2), Ok(3));
        let f3 = FieldTable::new(3).unwrap();
        assert_eq!(f3.apply(FieldOp::Add, 2, 2), Ok(1));
        assert_eq!(f3.apply(FieldOp::Mul, 2, 2), Ok(1));
        let f7 = FieldTable::new(7).unwrap();
        assert_eq!(f7.apply(FieldOp::Inv, 3, 0), Ok(5));
        assert!(matches!(f7.inv(0), Err(Error::Domain(_))));
        assert!(f7.apply(FieldOp::Add, 7, 0).is_err());
    }

    #[test]
    fn f4_units_are_cube_roots_of_unity() {
        let f = FieldTable::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        for x in 1..4u8 {
            let cube = f.mul(x, f.mul(x, x));
            assert_eq!(cube, 1);
        }
    }

    #[test]
    fn moduli_are_least_irreducibles() {
        // x^3 + x + 1, x^2 + 1 over F_3, x^4 + x + 1
        assert_eq!(FieldTable::new(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldTable::new(9).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldTable::new(16).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn axioms_hold_exhaustively() {
        for q in SUPPORTED {
            let f = FieldTable::new(q).unwrap();
            let els: Vec<Elem> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.pow(a, q - 1), 1, "q={q} a={a}");
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        for q in SUPPORTED {
            assert_eq!(FieldTable::new(q).unwrap(), FieldTable::new(q).unwrap());
        }
    }
}
