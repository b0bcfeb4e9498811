use std::collections::HashSet;

use crate::cfront::KEYWORDS;
use crate::rng::Rng;

const FIRST: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
const REST: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";

/// Random C identifier: 1 to 5 characters, letters, digits and underscores,
/// starting with a letter or underscore. Never a reserved word.
pub fn gen_identifier(rng: &mut Rng) -> String {
    loop {
        let len = rng.range_i64(1, 5) as usize;
        let mut name = String::with_capacity(len);
        name.push(*rng.choose(FIRST) as char);
        for _ in 1..len {
            name.push(*rng.choose(REST) as char);
        }
        if !KEYWORDS.contains(&name.as_str()) && name != "main" {
            return name;
        }
    }
}

/// Identifier not present in `used`; inserts the pick.
pub fn gen_unique_identifier(rng: &mut Rng, used: &mut HashSet<String>) -> String {
    loop {
        let name = gen_identifier(rng);
        if used.insert(name.clone()) {
            return name;
        }
    }
}
