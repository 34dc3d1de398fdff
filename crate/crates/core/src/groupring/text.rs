//! Sparse text and JSON forms of group-ring elements.
//!
//! Text: `term (('+'|'-') term)*` with `term := [c '*'] 'z^' k`, for example
//! `z^5 + z^6 + 2*z^12`. A leading `-` is accepted so that every printed
//! element parses back; the zero element prints as `0`.
//!
//! JSON: `{"m": 30, "coeffs": {"5": 1, "6": 1}}`, omitted exponents are zero.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GroupRingElement;
use crate::error::{Error, Result};

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            if a != 1 {
                write!(f, "{a}*")?;
            }
            write!(f, "z^{k}")?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn parse_err(token: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        token: token.to_string(),
        reason: reason.into(),
    }
}

fn parse_term(m: usize, raw: &str) -> Result<(usize, i64)> {
    let term = raw.trim();
    if term.is_empty() {
        return Err(parse_err(raw, "missing term"));
    }
    let (coeff, power) = match term.split_once('*') {
        Some((c, rest)) => {
            let c = c.trim();
            let value: i64 = c
                .parse()
                .map_err(|_| parse_err(c, "coefficient must be a positive integer"))?;
            if value < 1 {
                return Err(parse_err(c, "coefficient must be a positive integer"));
            }
            (value, rest.trim())
        }
        None => (1, term),
    };
    let exp = power
        .strip_prefix("z^")
        .ok_or_else(|| parse_err(power, "expected `z^k`"))?
        .trim();
    let k: usize = exp
        .parse()
        .map_err(|_| parse_err(exp, "exponent must be a nonnegative integer"))?;
    if k >= m {
        return Err(parse_err(exp, format!("exponent must be below m = {m}")));
    }
    Ok((k, coeff))
}

/// Parses the sparse text form over modulus `m`.
pub fn parse_element(input: &str, m: usize) -> Result<GroupRingElement> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    let text = input.trim();
    if text == "0" {
        return GroupRingElement::zero(m);
    }
    if text.is_empty() {
        return Err(parse_err(input, "empty element"));
    }

    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut start = 0;
    let (body, lead) = match text.strip_prefix('-') {
        Some(rest) => (rest, -1),
        None => (text, 1),
    };
    sign *= lead;
    for (i, ch) in body.char_indices() {
        if ch == '+' || ch == '-' {
            let (k, c) = parse_term(m, &body[start..i])?;
            terms.push((k, sign * c));
            sign = if ch == '+' { 1 } else { -1 };
            start = i + ch.len_utf8();
        }
    }
    let (k, c) = parse_term(m, &body[start..])?;
    terms.push((k, sign * c));
    GroupRingElement::from_terms(m, &terms)
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    m: usize,
    coeffs: BTreeMap<usize, i64>,
}

impl Serialize for GroupRingElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson {
            m: self.modulus(),
            coeffs: self.terms().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupRingElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ElementJson::deserialize(deserializer)?;
        if raw.m == 0 {
            return Err(D::Error::custom("modulus must be positive"));
        }
        if let Some((&k, _)) = raw.coeffs.iter().find(|(&k, _)| k >= raw.m) {
            return Err(D::Error::custom(format!("exponent {k} out of range for m = {}", raw.m)));
        }
        let terms: Vec<_> = raw.coeffs.into_iter().collect();
        GroupRingElement::from_terms(raw.m, &terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_example() {
        let x = parse_element("z^5 + z^6 + 2*z^12", 30).unwrap();
        assert_eq!(x, GroupRingElement::from_terms(30, &[(5, 1), (6, 1), (12, 2)]).unwrap());
        assert_eq!(x.to_string(), "z^5 + z^6 + 2*z^12");
    }

    #[test]
    fn parse_signs_and_zero() {
        let x = parse_element("-z^1 + 3*z^2 - z^0", 4).unwrap();
        assert_eq!(x.coeffs(), &[-1, -1, 3, 0]);
        assert_eq!(x.to_string(), "-z^0 - z^1 + 3*z^2");
        assert!(parse_element("0", 7).unwrap().is_zero());
        assert_eq!(GroupRingElement::zero(3).unwrap().to_string(), "0");
        // repeated exponents accumulate
        assert_eq!(parse_element("z^1+z^1", 3).unwrap().coeffs(), &[0, 2, 0]);
    }

    #[test]
    fn parse_errors_name_the_token() {
        match parse_element("z^0 + z^31", 30) {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "31"),
            other => panic!("{other:?}"),
        }
        match parse_element("z^0 + y^2", 30) {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "y^2"),
            other => panic!("{other:?}"),
        }
        match parse_element("0*z^2", 30) {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "0"),
            other => panic!("{other:?}"),
        }
        assert!(parse_element("z^1 +", 3).is_err());
        assert!(parse_element("", 3).is_err());
    }

    #[test]
    fn json_form() {
        let x = GroupRingElement::from_terms(30, &[(5, 1), (6, 1)]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"m":30,"coeffs":{"5":1,"6":1}}"#);
        let back: GroupRingElement = serde_json::from_str(r#"{"m": 30, "coeffs": {"5": 1, "6": 1}}"#).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<GroupRingElement>(r#"{"m":3,"coeffs":{"3":1}}"#).is_err());
        assert!(serde_json::from_str::<GroupRingElement>(r#"{"m":0,"coeffs":{}}"#).is_err());
    }

    proptest! {
        #[test]
        fn text_and_json_round_trip(c in prop::collection::vec(-9i64..=9, 1..50)) {
            let x = GroupRingElement::from_coeffs(c).unwrap();
            let text = x.to_string();
            prop_assert_eq!(parse_element(&text, x.modulus()).unwrap(), x.clone());
            let json = serde_json::to_string(&x).unwrap();
            prop_assert_eq!(serde_json::from_str::<GroupRingElement>(&json).unwrap(), x);
        }
    }
}
