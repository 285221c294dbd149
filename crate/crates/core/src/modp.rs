//! Arithmetic modulo the Mersenne prime `2^61 - 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

pub(crate) const P: u64 = (1 << 61) - 1;

pub(crate) fn add(a: u64, b: u64) -> u64 {
    (a + b) % P
}

pub(crate) fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

pub(crate) fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

pub(crate) fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub(crate) fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

pub(crate) fn residue(c: &BigInt) -> u64 {
    c.mod_floor(&BigInt::from(P)).to_u64().expect("reduced residue fits")
}
