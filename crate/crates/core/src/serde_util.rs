//! Big integers travel through JSON as decimal strings.

use num_bigint::{BigInt, BigUint};
use serde::Serializer;

pub(crate) fn biguint_str<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn bigint_vec_str<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}
