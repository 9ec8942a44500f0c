//! Serialization of exact values as their canonical strings.

use std::fmt::Display;

use serde::Serializer;

pub fn rational<S: Serializer, T: Display>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}
