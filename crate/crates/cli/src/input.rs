use std::fs;
use std::path::PathBuf;

use clap::Args;
use num_bigint::BigInt;
use sumset_core::{BigIntegerSet, BigRational, BigRationalSet, IntegerSet, RationalSet};

use crate::CliError;

/// Where the input set (or sets) come from.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct SetInput {
    /// Comma-separated elements, integers or p/q rationals, e.g. `0,2,18,25`.
    #[arg(long, value_parser = parse_set_arg, allow_hyphen_values = true)]
    pub set: Option<Elements>,
    /// File with one comma-separated set per line; blank lines and `#` comments are skipped.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

/// One parsed `--set` value.
#[derive(Clone, Debug)]
pub struct Elements(pub Vec<BigRational>);

fn parse_set_arg(s: &str) -> Result<Elements, String> {
    parse_set(s).map(Elements)
}

pub fn parse_set(s: &str) -> Result<Vec<BigRational>, String> {
    let s = s.trim().trim_start_matches('{').trim_end_matches('}');
    s.split(',')
        .map(|tok| parse_element(tok.trim()))
        .collect::<Result<Vec<_>, _>>()
}

fn parse_element(tok: &str) -> Result<BigRational, String> {
    let bad = || format!("`{tok}` is not an integer or p/q rational");
    match tok.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(format!("`{tok}` has a zero denominator"));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(tok.parse().map_err(|_| bad())?)),
    }
}

impl SetInput {
    /// The raw element lists, one per set.
    pub fn load(&self) -> Result<Vec<Vec<BigRational>>, CliError> {
        if let Some(set) = &self.set {
            return Ok(vec![set.0.clone()]);
        }
        let path = self.file.as_ref().expect("clap enforces one of --set/--file");
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let sets = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| parse_set(l).map_err(|e| CliError::Usage(format!("{}:{}: {e}", path.display(), i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        if sets.is_empty() {
            return Err(CliError::Usage(format!("{} contains no sets", path.display())));
        }
        Ok(sets)
    }
}

pub fn to_integer_set(elements: &[BigRational]) -> Result<BigIntegerSet, CliError> {
    let ints = elements
        .iter()
        .map(|x| {
            x.is_integer()
                .then(|| x.to_integer())
                .ok_or_else(|| CliError::Usage(format!("`{x}` is not an integer; this command needs an integer set")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    IntegerSet::new(ints).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn to_rational_set(elements: &[BigRational]) -> Result<BigRationalSet, CliError> {
    RationalSet::new(elements.to_vec()).map_err(|e| CliError::Usage(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_rationals() {
        let v = parse_set("0, -3/6, 7").unwrap();
        assert_eq!(v[1], BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_set("{0,2,18,25}").unwrap().len(), 4);
        assert!(parse_set("1,x").is_err());
        assert!(parse_set("1/0").is_err());
    }

    #[test]
    fn integer_conversion_rejects_fractions() {
        assert!(to_integer_set(&parse_set("1,1/2").unwrap()).is_err());
        assert!(to_integer_set(&parse_set("3,1,2").unwrap()).is_ok());
        assert!(to_integer_set(&parse_set("1,1").unwrap()).is_err());
    }
}
