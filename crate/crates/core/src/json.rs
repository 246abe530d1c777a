//! Serde helpers: integers are written as JSON numbers when they fit in `i64`
//! and as decimal strings otherwise.

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::Serializer;

use crate::exact_lattice::IntVec;

pub fn big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(x) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}

struct Big<'a>(&'a BigInt);

impl serde::Serialize for Big<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        big(self.0, s)
    }
}

pub fn big_slice<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&Big(x))?;
    }
    seq.end()
}

pub fn big_pair<S: Serializer>(p: &(BigInt, BigInt), s: S) -> Result<S::Ok, S::Error> {
    big_slice(&[p.0.clone(), p.1.clone()], s)
}

pub fn int_vec<S: Serializer>(v: &IntVec, s: S) -> Result<S::Ok, S::Error> {
    big_slice(v.entries(), s)
}

/// Map with integer keys, written as a JSON object in ascending key order.
pub fn big_keyed_map<S: Serializer>(
    m: &std::collections::BTreeMap<BigInt, usize>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), v)?;
    }
    map.end()
}
