//! Big integers serialize as decimal strings so JSON reports stay readable.

use num_bigint::{BigInt, BigUint};
use serde::Serializer;

pub fn bigint_string<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn biguint_string<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn bigint_vec_string<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}
