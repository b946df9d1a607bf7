//! Dense polynomials over the prime field F_p, only as much as the
//! irreducibility test needs. Coefficients are stored lowest degree first and
//! kept trimmed (no trailing zeros; the zero polynomial is empty).

pub(crate) type FpPoly = Vec<u64>;

fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

fn mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
fn rem(a: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    let mut r = a.clone();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let q = r[dr] * lead_inv % p;
        let shift = dr - dm;
        for (k, &c) in m.iter().enumerate() {
            r[shift + k] = (r[shift + k] + p - q * c % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn pow_x_mod(exp_power_of_p: u32, m: &FpPoly, p: u64) -> FpPoly {
    // x^(p^k) mod m by k successive p-th powerings.
    let mut acc = rem(&vec![0, 1], m, p);
    for _ in 0..exp_power_of_p {
        acc = pow_poly_mod(&acc, p, m, p);
    }
    acc
}

fn pow_poly_mod(a: &FpPoly, mut exp: u64, m: &FpPoly, p: u64) -> FpPoly {
    let mut acc: FpPoly = rem(&vec![1], m, p);
    let mut base = rem(a, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(&mul(&acc, &base, p), m, p);
        }
        base = rem(&mul(&base, &base, p), m, p);
        exp >>= 1;
    }
    acc
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial of degree >= 1.
pub(crate) fn is_irreducible(f: &FpPoly, p: u64) -> bool {
    let mut f = f.clone();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let m = (f.len() - 1) as u32;
    if m == 1 {
        return true;
    }
    let x: FpPoly = vec![0, 1];
    if sub(&pow_x_mod(m, &f, p), &rem(&x, &f, p), p) != FpPoly::new() {
        return false;
    }
    prime_divisors(m).into_iter().all(|q| {
        let h = sub(&pow_x_mod(m / q, &f, p), &x, p);
        gcd(&h, &f, p).len() == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Trial division by every monic polynomial of degree <= deg/2.
    fn irreducible_by_trial_division(f: &FpPoly, p: u64) -> bool {
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut g: FpPoly = (0..d).map(|i| idx / p.pow(i as u32) % p).collect();
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for &(p, deg) in &[(2u64, 2usize), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
            let count = p.pow(deg as u32);
            for idx in 0..count {
                let mut f: FpPoly = (0..deg).map(|i| idx / p.pow(i as u32) % p).collect();
                f.push(1);
                assert_eq!(
                    is_irreducible(&f, p),
                    irreducible_by_trial_division(&f, p),
                    "p={p} f={f:?}"
                );
            }
        }
    }
}
