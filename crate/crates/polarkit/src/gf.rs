//! Exact arithmetic in small finite fields GF(p^e).
//!
//! Elements are encoded as integers in `[0, p^e)` whose base-p digits are the
//! coefficients of the representing polynomial, constant term least
//! significant. Multiplication goes through exp/log tables for a fixed
//! multiplicative generator, so all operations are exact table lookups.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size. All target computations use q <= 256,
/// and the cap keeps every table comfortably in cache.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

/// Default irreducible moduli for characteristic 2, constant term first.
/// Fixed so that results are reproducible bit for bit.
const DEFAULT_MODULI_CHAR2: [&[u16]; 8] = [
    &[0, 1],                   // X
    &[1, 1, 1],                // X^2+X+1
    &[1, 1, 0, 1],             // X^3+X+1
    &[1, 1, 0, 0, 1],          // X^4+X+1
    &[1, 0, 1, 0, 0, 1],       // X^5+X^2+1
    &[1, 1, 0, 0, 0, 0, 1],    // X^6+X+1
    &[1, 1, 0, 0, 0, 0, 0, 1], // X^7+X+1
    &[1, 0, 1, 1, 1, 0, 0, 0, 1], // X^8+X^4+X^3+X^2+1
];

/// A small finite field GF(p^e) with full exp/log tables.
#[derive(Debug)]
pub struct Field {
    p: u16,
    e: u32,
    q: u32,
    modulus: Vec<u16>,
    exp: Vec<u16>,
    log: Vec<u32>,
    generator: u16,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for Field {}

fn is_prime(p: u16) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p as u32 {
        if p as u32 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomials over GF(p) as coefficient vectors, constant term first.
mod poly {
    /// Degree, or 0 for the zero polynomial.
    pub fn deg(a: &[u16]) -> usize {
        a.iter().rposition(|&c| c != 0).unwrap_or(0)
    }

    pub fn rem(a: &[u16], m: &[u16], p: u16) -> Vec<u16> {
        let dm = deg(m);
        let inv_lead = inv_mod_p(m[dm], p);
        let mut r: Vec<u32> = a.iter().map(|&c| c as u32).collect();
        while deg32(&r) >= dm && !is_zero(&r) {
            let dr = deg32(&r);
            if dr < dm {
                break;
            }
            let factor = (r[dr] * inv_lead as u32) % p as u32;
            for i in 0..=dm {
                let sub = (factor * m[i] as u32) % p as u32;
                r[dr - dm + i] = (r[dr - dm + i] + p as u32 - sub) % p as u32;
            }
        }
        r.truncate(dm.max(1));
        r.resize(dm.max(1), 0);
        r.iter().map(|&c| c as u16).collect()
    }

    pub fn mul(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
        let mut out = vec![0u32; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u32 * y as u32) % p as u32;
            }
        }
        out.iter().map(|&c| c as u16).collect()
    }

    fn deg32(a: &[u32]) -> usize {
        a.iter().rposition(|&c| c != 0).unwrap_or(0)
    }
    fn is_zero(a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn inv_mod_p(a: u16, p: u16) -> u16 {
        // p is a small prime; a != 0 mod p
        let mut r = 1u32;
        let mut base = a as u32 % p as u32;
        let mut k = p as u32 - 2;
        while k > 0 {
            if k & 1 == 1 {
                r = r * base % p as u32;
            }
            base = base * base % p as u32;
            k >>= 1;
        }
        r as u16
    }
}

/// Encode a coefficient vector as a base-p digit integer.
fn encode(coeffs: &[u16], p: u16) -> u16 {
    let mut acc = 0u32;
    for &c in coeffs.iter().rev() {
        acc = acc * p as u32 + c as u32;
    }
    acc as u16
}

fn decode(x: u16, p: u16, e: u32) -> Vec<u16> {
    let mut out = Vec::with_capacity(e as usize);
    let mut v = x as u32;
    for _ in 0..e {
        out.push((v % p as u32) as u16);
        v /= p as u32;
    }
    out
}

impl Field {
    /// Build GF(p^e) with the default modulus for (p, e).
    pub fn new(p: u16, e: u32) -> Result<Arc<Field>> {
        Self::with_modulus(p, e, None)
    }

    /// Build GF(p^e), optionally with a caller-supplied monic irreducible
    /// modulus (coefficient list, constant term first).
    pub fn with_modulus(p: u16, e: u32, modulus: Option<Vec<u16>>) -> Result<Arc<Field>> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if e == 0 || e > 8 {
            return Err(Error::InvalidParameter(format!(
                "extension degree {e} outside 1..=8"
            )));
        }
        let q = (p as u64).pow(e);
        if q > MAX_FIELD_SIZE as u64 {
            return Err(Error::Resource(format!(
                "field size {q} exceeds cap {MAX_FIELD_SIZE}"
            )));
        }
        let q = q as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 {
                    return Err(Error::InvalidParameter(
                        "modulus must be monic of degree e".into(),
                    ));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidParameter(
                        "modulus coefficients must lie in [0, p)".into(),
                    ));
                }
                m
            }
            None => Self::default_modulus(p, e)?,
        };
        Self::check_irreducible(&modulus, p)?;

        // Multiplication of raw encodings via polynomial arithmetic; used
        // only while seeding the exp/log tables.
        let raw_mul = |a: u16, b: u16| -> u16 {
            let prod = poly::mul(&decode(a, p, e), &decode(b, p, e), p);
            encode(&poly::rem(&prod, &modulus, p), p)
        };

        // Find the least multiplicative generator.
        let order = q - 1;
        let mut generator = 0u16;
        'cand: for g in 2..q as u32 {
            let g = g as u16;
            let mut x = g;
            for k in 1..order {
                x = raw_mul(x, g);
                if x == 1 && k + 1 < order {
                    continue 'cand;
                }
            }
            if x == 1 || order == 1 {
                generator = g;
                break;
            }
        }
        if order == 1 {
            generator = 1;
        }
        if generator == 0 {
            return Err(Error::Internal("no multiplicative generator found".into()));
        }

        let mut exp = vec![0u16; order.max(1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u16;
        for i in 0..order {
            exp[i as usize] = x;
            log[x as usize] = i;
            x = raw_mul(x, generator);
        }
        if x != 1 {
            return Err(Error::Internal("exp table does not close".into()));
        }

        Ok(Arc::new(Field {
            p,
            e,
            q,
            modulus,
            exp,
            log,
            generator,
        }))
    }

    fn default_modulus(p: u16, e: u32) -> Result<Vec<u16>> {
        if p == 2 {
            return Ok(DEFAULT_MODULI_CHAR2[e as usize - 1].to_vec());
        }
        if e == 1 {
            return Ok(vec![0, 1]);
        }
        // Deterministic: least monic polynomial (by encoding of its
        // coefficient tail) that is irreducible.
        let pe = (p as u64).pow(e);
        for tail in 0..pe {
            let mut coeffs = decode_u64(tail, p, e);
            coeffs.push(1);
            if Self::check_irreducible(&coeffs, p).is_ok() {
                return Ok(coeffs);
            }
        }
        Err(Error::Internal("no irreducible modulus found".into()))
    }

    /// Exhaustive root/factor check; cheap at these sizes.
    fn check_irreducible(m: &[u16], p: u16) -> Result<()> {
        let e = m.len() - 1;
        if e == 1 {
            return Ok(());
        }
        // Roots in GF(p) are degree-1 factors.
        for r in 0..p {
            let mut acc = 0u32;
            for &c in m.iter().rev() {
                acc = (acc * r as u32 + c as u32) % p as u32;
            }
            if acc == 0 {
                return Err(Error::InvalidParameter(format!(
                    "modulus is reducible: {r} is a root"
                )));
            }
        }
        // Trial division by every monic polynomial of degree 2..=e/2.
        for d in 2..=e / 2 {
            let count = (p as u64).pow(d as u32);
            for tail in 0..count {
                let mut f = decode_u64(tail, p, d as u32);
                f.push(1);
                let r = poly::rem(m, &f, p);
                if r.iter().all(|&c| c == 0) {
                    return Err(Error::InvalidParameter(format!(
                        "modulus is reducible: divisible by degree-{d} factor {f:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u16 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    /// Field size p^e.
    pub fn size(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }
    pub fn generator(&self) -> u16 {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.q as u16
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0u32;
        let mut pa = a as u32;
        let mut pb = b as u32;
        let mut mult = 1u32;
        for _ in 0..self.e {
            let d = (pa + pb) % self.p as u32;
            out += d * mult;
            mult *= self.p as u32;
            pa /= self.p as u32;
            pb /= self.p as u32;
        }
        out as u16
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        if self.p == 2 {
            return a;
        }
        let mut out = 0u32;
        let mut pa = a as u32;
        let mut mult = 1u32;
        for _ in 0..self.e {
            let d = pa % self.p as u32;
            out += if d == 0 { 0 } else { (self.p as u32 - d) * mult };
            mult *= self.p as u32;
            pa /= self.p as u32;
        }
        out as u16
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let mut s = self.log[a as usize] + self.log[b as usize];
        if s >= order {
            s -= order;
        }
        self.exp[s as usize]
    }

    /// Multiplicative inverse. Panics on zero; callers validate first.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero");
        let order = self.q - 1;
        let l = self.log[a as usize];
        self.exp[((order - l) % order) as usize]
    }

    #[inline]
    pub fn div(&self, a: u16, b: u16) -> u16 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u16, mut k: u64) -> u16 {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let order = (self.q - 1) as u64;
        k %= order;
        let l = self.log[a as usize] as u64;
        self.exp[((l * k) % order) as usize]
    }

    /// Square root; unique in characteristic 2 where squaring is bijective.
    pub fn sqrt(&self, a: u16) -> u16 {
        assert!(self.p == 2, "square roots implemented for characteristic 2");
        self.pow(a, (self.q as u64) / 2)
    }

    /// Absolute trace to the prime field GF(p): x + x^p + ... + x^{p^{e-1}}.
    pub fn abs_trace(&self, a: u16) -> u16 {
        let mut acc = 0u16;
        let mut x = a;
        for _ in 0..self.e {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        acc
    }

    /// Least element of trace 1, so that X^2 + X + delta is irreducible.
    /// Characteristic 2 only; such an element always exists.
    pub fn find_delta(&self) -> u16 {
        assert!(self.p == 2, "delta search applies to even characteristic");
        self.elements()
            .find(|&d| self.abs_trace(d) == 1)
            .expect("trace is surjective onto GF(2)")
    }
}

fn decode_u64(x: u64, p: u16, e: u32) -> Vec<u16> {
    let mut out = Vec::with_capacity(e as usize);
    let mut v = x;
    for _ in 0..e {
        out.push((v % p as u64) as u16);
        v /= p as u64;
    }
    out
}

/// The quadratic extension GF(q^2) over GF(q), with the relative trace
/// T(z) = z + z^q and a GF(q)-basis {1, xi}.
#[derive(Debug)]
pub struct QuadExtension {
    pub sub: Arc<Field>,
    pub ext: Arc<Field>,
    /// Image of the sub generator's power basis root inside ext.
    beta: u16,
    embed_tbl: Vec<u16>,
    section_tbl: Vec<Option<u16>>,
    /// Least element of ext outside the embedded subfield.
    pub xi: u16,
    /// xi^2 = c0 + c1*xi with c0, c1 given as subfield elements.
    pub xi_sq: (u16, u16),
}

impl QuadExtension {
    pub fn new(sub: Arc<Field>) -> Result<QuadExtension> {
        let ext = Field::new(sub.p(), sub.e() * 2)?;
        Self::with_ext(sub, ext)
    }

    pub fn with_ext(sub: Arc<Field>, ext: Arc<Field>) -> Result<QuadExtension> {
        if ext.p() != sub.p() || ext.e() != 2 * sub.e() {
            return Err(Error::InvalidParameter(
                "extension must be quadratic over the subfield".into(),
            ));
        }
        // The embedding sends the subfield's defining root to a root of the
        // subfield modulus inside ext; take the least such root.
        let p = sub.p();
        let beta = ext
            .elements()
            .find(|&b| {
                let mut acc = 0u16;
                // evaluate sub.modulus at b inside ext
                for &c in sub.modulus().iter().rev() {
                    acc = ext.add(ext.mul(acc, b), c % p);
                }
                acc == 0
            })
            .ok_or_else(|| Error::Internal("subfield modulus has no root in extension".into()))?;

        let mut embed_tbl = vec![0u16; sub.size() as usize];
        let mut section_tbl = vec![None; ext.size() as usize];
        for x in sub.elements() {
            let digits = decode(x, p, sub.e());
            let mut acc = 0u16;
            for &c in digits.iter().rev() {
                acc = ext.add(ext.mul(acc, beta), c);
            }
            embed_tbl[x as usize] = acc;
            section_tbl[acc as usize] = Some(x);
        }

        let xi = ext
            .elements()
            .find(|&z| section_tbl[z as usize].is_none())
            .ok_or_else(|| Error::Internal("extension equals subfield".into()))?;

        // Decompose xi^2 over the basis {1, xi}: xi^2 = c0 + c1 xi.
        let xi2 = ext.mul(xi, xi);
        let mut xi_sq = None;
        for c1s in sub.elements() {
            let c1 = embed_tbl[c1s as usize];
            let c0 = ext.sub(xi2, ext.mul(c1, xi));
            if let Some(c0s) = section_tbl[c0 as usize] {
                xi_sq = Some((c0s, c1s));
                break;
            }
        }
        let xi_sq =
            xi_sq.ok_or_else(|| Error::Internal("xi^2 does not decompose over {1, xi}".into()))?;

        let emb = QuadExtension {
            sub,
            ext,
            beta,
            embed_tbl,
            section_tbl,
            xi,
            xi_sq,
        };
        emb.self_check()?;
        Ok(emb)
    }

    fn self_check(&self) -> Result<()> {
        // Ring homomorphism and trace-in-image checks, exhaustive.
        for a in self.sub.elements() {
            for b in self.sub.elements() {
                if self.embed(self.sub.add(a, b)) != self.ext.add(self.embed(a), self.embed(b))
                    || self.embed(self.sub.mul(a, b))
                        != self.ext.mul(self.embed(a), self.embed(b))
                {
                    return Err(Error::Internal("embedding is not a ring map".into()));
                }
            }
        }
        for z in self.ext.elements() {
            let t = self.trace_raw(z);
            if self.section(t).is_none() {
                return Err(Error::Internal("trace escapes the subfield".into()));
            }
        }
        Ok(())
    }

    pub fn beta(&self) -> u16 {
        self.beta
    }

    #[inline]
    pub fn embed(&self, x: u16) -> u16 {
        self.embed_tbl[x as usize]
    }

    #[inline]
    pub fn section(&self, z: u16) -> Option<u16> {
        self.section_tbl[z as usize]
    }

    /// z + z^q inside the extension field.
    #[inline]
    pub fn trace_raw(&self, z: u16) -> u16 {
        let q = self.sub.size() as u64;
        self.ext.add(z, self.ext.pow(z, q))
    }

    /// Relative trace landing in the subfield.
    #[inline]
    pub fn trace(&self, z: u16) -> u16 {
        self.section(self.trace_raw(z))
            .expect("trace lands in the subfield")
    }

    /// Write z = a + b*xi with a, b subfield elements.
    pub fn coords(&self, z: u16) -> (u16, u16) {
        for b in self.sub.elements() {
            let rest = self.ext.sub(z, self.ext.mul(self.embed(b), self.xi));
            if let Some(a) = self.section(rest) {
                return (a, b);
            }
        }
        unreachable!("{{1, xi}} is a basis")
    }

    /// Rebuild z from subfield coordinates over {1, xi}.
    pub fn from_coords(&self, a: u16, b: u16) -> u16 {
        self.ext
            .add(self.embed(a), self.ext.mul(self.embed(b), self.xi))
    }
}
