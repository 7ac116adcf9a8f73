//! Arithmetic in `Z_p` and its unit group.
//!
//! Every routine here is a pure function of its arguments. Primes are bounded
//! by `2^31` so that products of two residues fit in a `u64`; primality
//! testing itself works for any `u64`.

use std::collections::BTreeSet;

use thiserror::Error;

/// Largest modulus accepted by the residue routines.
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumTheoryError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} exceeds the supported modulus bound 2^31")]
    TooLarge(u64),
    #[error("generator {g} is not a unit modulo {p}")]
    BadGenerator { p: u64, g: i64 },
    #[error("element {g} is not a unit modulo {p}")]
    NotUnit { p: u64, g: u64 },
    #[error("{p} is not congruent to {residue} modulo {modulus}")]
    WrongResidue { p: u64, modulus: u64, residue: u64 },
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("inconsistent representation 4p = (2c-3d)^2 + 27d^2 for p = {p}: {found} solutions")]
    SignatureInconsistent { p: u64, found: usize },
}

pub type Result<T> = std::result::Result<T, NumTheoryError>;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of a unit modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduce a signed integer into `0..m`.
pub fn reduce(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p > MAX_PRIME {
        return Err(NumTheoryError::TooLarge(p));
    }
    if p < 3 || !is_prime(p) {
        return Err(NumTheoryError::NotOddPrime(p));
    }
    Ok(())
}

fn check_unit(p: u64, g: u64) -> Result<()> {
    if g == 0 || g >= p {
        return Err(NumTheoryError::NotUnit { p, g });
    }
    Ok(())
}

/// Multiplicative order of the unit `g` modulo the prime `p`.
pub fn multiplicative_order(p: u64, g: u64) -> u64 {
    let mut order = p - 1;
    for q in prime_factors(p - 1) {
        while order.is_multiple_of(q) && pow_mod(g, order / q, p) == 1 {
            order /= q;
        }
    }
    order
}

/// A prime modulus together with its least primitive root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldContext {
    pub p: u64,
    pub omega: u64,
}

impl FieldContext {
    pub fn new(p: u64) -> Result<Self> {
        Ok(FieldContext {
            p,
            omega: primitive_root(p)?,
        })
    }

    /// `omega^e mod p`.
    pub fn omega_pow(&self, e: u64) -> u64 {
        pow_mod(self.omega, e, self.p)
    }
}

/// Least generator of `Z_p^*`.
pub fn primitive_root(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let factors = prime_factors(p - 1);
    let g = (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root");
    Ok(g)
}

/// The subgroup `(Z_p^*)^k` of k-th power residues.
pub fn power_class(p: u64, k: u64) -> Result<BTreeSet<u64>> {
    check_odd_prime(p)?;
    if k == 0 {
        return Err(NumTheoryError::ZeroExponent);
    }
    let omega = primitive_root(p)?;
    let step = gcd(k, p - 1);
    let generator = pow_mod(omega, step, p);
    let size = (p - 1) / step;
    let mut out = BTreeSet::new();
    let mut x = 1;
    for _ in 0..size {
        out.insert(x);
        x = mul_mod(x, generator, p);
    }
    Ok(out)
}

/// A subgroup of `Z_p^*` with the generators it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupDesc {
    pub p: u64,
    pub generators: Vec<u64>,
    pub elements: BTreeSet<u64>,
}

impl SubgroupDesc {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.contains(&(x % self.p))
    }

    /// Index of the subgroup in `Z_p^*`.
    pub fn index(&self) -> u64 {
        (self.p - 1) / self.order()
    }

    /// One element from each pair `{h, -h}`, the smaller of the two. Only
    /// meaningful when `-1` is in the subgroup.
    pub fn half_representatives(&self) -> Vec<u64> {
        self.elements
            .iter()
            .copied()
            .filter(|&h| h < self.p - h)
            .collect()
    }
}

/// Closure of `gens` under multiplication modulo `p`. Generators are signed so
/// that `-1` can be written directly.
pub fn subgroup_generated(p: u64, gens: &[i64]) -> Result<SubgroupDesc> {
    check_odd_prime(p)?;
    let mut reduced = Vec::with_capacity(gens.len());
    for &g in gens {
        let r = reduce(g, p);
        if r == 0 {
            return Err(NumTheoryError::BadGenerator { p, g });
        }
        reduced.push(r);
    }
    Ok(closure(p, reduced))
}

fn closure(p: u64, generators: Vec<u64>) -> SubgroupDesc {
    let mut elements = BTreeSet::from([1u64]);
    let mut frontier = vec![1u64];
    while let Some(x) = frontier.pop() {
        for &g in &generators {
            let y = mul_mod(x, g, p);
            if elements.insert(y) {
                frontier.push(y);
            }
        }
    }
    SubgroupDesc {
        p,
        generators,
        elements,
    }
}

/// Order of the coset `gH` in `Z_p^* / H`.
pub fn order_in_quotient(p: u64, g: u64, h: &SubgroupDesc) -> Result<u64> {
    check_odd_prime(p)?;
    check_unit(p, g)?;
    let mut x = g;
    let mut d = 1;
    while !h.contains(x) {
        x = mul_mod(x, g, p);
        d += 1;
    }
    Ok(d)
}

/// Representatives `omega^0, .., omega^(t-1)` of the `t` cosets of `G` in
/// `Z_p^*`.
pub fn coset_reps(p: u64, g: &SubgroupDesc) -> Result<Vec<u64>> {
    let ctx = FieldContext::new(p)?;
    let t = (p - 1) / g.order();
    Ok((0..t).map(|e| ctx.omega_pow(e)).collect())
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// The pair `(c mod 6, d mod 6)` for the unique `c, d` with `d > 0`,
/// `gcd(c, d) = 1`, `c = 2 (mod 3)` and `4p = (2c - 3d)^2 + 27 d^2`.
pub fn t_signature(p: u64) -> Result<(u8, u8)> {
    check_odd_prime(p)?;
    if p % 6 != 1 {
        return Err(NumTheoryError::WrongResidue {
            p,
            modulus: 6,
            residue: 1,
        });
    }
    let four_p = 4 * p as i64;
    let d_max = isqrt((4 * p).div_ceil(27)) + 1;
    let mut found = Vec::new();
    for d in 1..=d_max as i64 {
        let rest = four_p - 27 * d * d;
        if rest < 0 {
            break;
        }
        let u = isqrt(rest as u64) as i64;
        if u * u != rest {
            continue;
        }
        let roots: &[i64] = if u == 0 { &[0] } else { &[u, -u] };
        for &root in roots {
            let twice_c = 3 * d + root;
            if twice_c % 2 != 0 {
                continue;
            }
            let c = twice_c / 2;
            if c.rem_euclid(3) == 2 && gcd(c.unsigned_abs(), d as u64) == 1 {
                found.push((c, d));
            }
        }
    }
    match found.as_slice() {
        [(c, d)] => Ok((c.rem_euclid(6) as u8, d.rem_euclid(6) as u8)),
        _ => Err(NumTheoryError::SignatureInconsistent {
            p,
            found: found.len(),
        }),
    }
}

/// The nine values the signature can take.
pub const T_SIGNATURES: [(u8, u8); 9] = [
    (2, 1),
    (2, 3),
    (2, 5),
    (5, 0),
    (5, 1),
    (5, 2),
    (5, 3),
    (5, 4),
    (5, 5),
];

/// Whether 2, 3 and 6 are cubic residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubeStatus {
    pub two: bool,
    pub three: bool,
    pub six: bool,
}

impl CubeStatus {
    /// 1, 2, 3 represent the three cubic cosets.
    pub fn splits_123(&self) -> bool {
        !self.two && !self.three && self.six
    }

    /// 1, 3, 4 represent the three cubic cosets.
    pub fn splits_134(&self) -> bool {
        !self.two && !self.three && !self.six
    }
}

fn is_cube(p: u64, x: u64) -> bool {
    pow_mod(x, (p - 1) / 3, p) == 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeClassification {
    pub p: u64,
    pub residue_mod_6: u64,
    pub residue_mod_8: u64,
    /// Present only when `p = 1 (mod 6)`.
    pub cube_status: Option<CubeStatus>,
    pub t_signature: Option<(u8, u8)>,
    /// Present only when `p = 1 (mod 4)` and a witness exists.
    pub quartic_run_witness: Option<u64>,
    /// `p >= 7` and neither 4 nor 32 lies in the subgroup generated by
    /// `{-1, 6}`; `K_p` then splits into a mix of `±{1,2,3}` and
    /// `±{1,2,3,4}` circulants.
    pub mixed_class: bool,
    /// Order of `2H` in `Z_p^*/H` with `H = <-1, 6>`; absent for `p < 5`.
    pub mixed_run_length: Option<u64>,
}

impl PrimeClassification {
    /// `K_p` factors into `Cay(Z_p; ±{1,2,3})`.
    pub fn is_pm123_class(&self) -> bool {
        self.cube_status.is_some_and(|c| c.splits_123())
    }

    /// `K_p` factors into `Cay(Z_p; ±{1,3,4})`.
    pub fn is_pm134_class(&self) -> bool {
        self.cube_status.is_some_and(|c| c.splits_134())
    }

    /// `K_2p - I` factors into `Cay(Z_2p; ±{1,2,3,4})` (apart from p = 13).
    pub fn is_dihedral_1234_class(&self) -> bool {
        self.residue_mod_8 == 5
    }

    pub fn class_label(&self) -> String {
        match (
            self.cube_status,
            self.is_pm123_class(),
            self.is_pm134_class(),
        ) {
            (None, _, _) => "none (p ≢ 1 mod 6)".to_string(),
            (Some(_), true, _) => "cubic ±{1,2,3}".to_string(),
            (Some(_), _, true) => "cubic ±{1,3,4}".to_string(),
            (Some(_), _, _) => "neither".to_string(),
        }
    }
}

/// Order of `2H` in `Z_p^*/H` where `H = <-1, 6>`.
pub fn mixed_run_length(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    if p < 5 {
        return Err(NumTheoryError::NotUnit { p, g: 6 % p });
    }
    let h = subgroup_generated(p, &[-1, 6])?;
    order_in_quotient(p, 2, &h)
}

pub fn classify_prime(p: u64) -> Result<PrimeClassification> {
    check_odd_prime(p)?;
    let cube_status = (p % 6 == 1).then(|| CubeStatus {
        two: is_cube(p, 2),
        three: is_cube(p, 3),
        six: is_cube(p, 6),
    });
    let t_signature = match cube_status {
        Some(_) => Some(t_signature(p)?),
        None => None,
    };
    let quartic_run_witness = if p % 4 == 1 {
        quartic_run_witness(p)?
    } else {
        None
    };
    let (mixed_class, mixed_run_length) = if p >= 5 {
        let h = subgroup_generated(p, &[-1, 6])?;
        let d = order_in_quotient(p, 2, &h)?;
        (p >= 7 && !h.contains(4) && !h.contains(32 % p), Some(d))
    } else {
        (false, None)
    };
    Ok(PrimeClassification {
        p,
        residue_mod_6: p % 6,
        residue_mod_8: p % 8,
        cube_status,
        t_signature,
        quartic_run_witness,
        mixed_class,
        mixed_run_length,
    })
}

/// Least `x` such that `x, x+1, x+2, x+3` lie in the four distinct cosets of
/// the quartic residues. `None` when no such `x` exists (only 13 and 17 in the
/// tested range).
pub fn quartic_run_witness(p: u64) -> Result<Option<u64>> {
    check_odd_prime(p)?;
    if p % 4 != 1 {
        return Err(NumTheoryError::WrongResidue {
            p,
            modulus: 4,
            residue: 1,
        });
    }
    let e = (p - 1) / 4;
    // The quartic character of y identifies its coset.
    let chars: Vec<u64> = (1..p).take(3).map(|y| pow_mod(y, e, p)).collect();
    let mut window = [0u64; 4];
    window[1..].copy_from_slice(&chars);
    for x in 1..=p.saturating_sub(4) {
        window.rotate_left(1);
        window[3] = pow_mod(x + 3, e, p);
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| window[i] != window[j]));
        if distinct {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
