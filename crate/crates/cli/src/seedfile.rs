//! Seed files: JSON with a row-major extended exchange matrix, frozen rows after the mutable ones.
//!
//! Optional `vars` store each cluster variable as numerator and denominator term lists over the
//! initial variables, e.g. `{"num": [["1", [0,1]], ["1", [0,0]]], "den": [["1", [1,0]]]}`.

use std::path::Path;
use std::str::FromStr;

use cluster_core::algebra::{rf_make, LaurentPolynomial, Rat, RationalFunction};
use cluster_core::exchange::{find_symmetrizer, ExchangeMatrix};
use cluster_core::seed::Seed;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type Term = (String, Vec<i64>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarEntry {
    pub num: Vec<Term>,
    pub den: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedFile {
    pub n: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frozen_names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<VarEntry>>,
}

/// A validated seed with the display names of all m initial variables.
#[derive(Debug, Clone)]
pub struct LoadedSeed {
    pub seed: Seed,
    pub names: Vec<String>,
    pub mutable_names: Option<Vec<String>>,
    pub frozen_names: Option<Vec<String>>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn default_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

fn poly_from_terms(m: usize, terms: &[Term]) -> Result<LaurentPolynomial, CliError> {
    let mut out = Vec::with_capacity(terms.len());
    for (c, e) in terms {
        let c = Rat::from_str(c).map_err(|_| bad(format!("bad coefficient {c:?}")))?;
        if e.len() != m {
            return Err(bad(format!("exponent vector {e:?} should have length {m}")));
        }
        out.push((e.clone(), c));
    }
    Ok(LaurentPolynomial::from_terms(m, out))
}

fn poly_to_terms(p: &LaurentPolynomial) -> Vec<Term> {
    p.terms().iter().map(|(e, c)| (c.to_string(), e.clone())).collect()
}

impl SeedFile {
    pub fn validate(&self) -> Result<LoadedSeed, CliError> {
        let n = self.n;
        if n == 0 {
            return Err(bad("n must be positive"));
        }
        if self.b.len() < n {
            return Err(bad(format!("B has {} rows, fewer than n = {n}", self.b.len())));
        }
        if let Some((i, r)) = self.b.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(bad(format!("row {} of B has {} entries, expected {n}", i + 1, r.len())));
        }
        let matrix = ExchangeMatrix::new(self.b.clone(), n).map_err(|e| bad(e.to_string()))?;
        find_symmetrizer(&matrix).map_err(|_| bad("principal part of B is not skew-symmetrizable"))?;
        let m = matrix.m();
        if self.names.as_ref().is_some_and(|v| v.len() != n) {
            return Err(bad(format!("names should list {n} mutable variables")));
        }
        if self.frozen_names.as_ref().is_some_and(|v| v.len() != m - n) {
            return Err(bad(format!("frozen_names should list {} frozen variables", m - n)));
        }
        let mut names = default_names(m);
        if let Some(v) = &self.names {
            names[..n].clone_from_slice(v);
        }
        if let Some(v) = &self.frozen_names {
            names[n..].clone_from_slice(v);
        }
        let seed = match &self.vars {
            None => Seed::initial(matrix),
            Some(vars) => {
                if vars.len() != m {
                    return Err(bad(format!("vars should list {m} variables")));
                }
                let mut rfs = Vec::with_capacity(m);
                for v in vars {
                    let num = poly_from_terms(m, &v.num)?;
                    let den = poly_from_terms(m, &v.den)?;
                    if num.is_zero() {
                        return Err(bad("a cluster variable cannot be zero"));
                    }
                    rfs.push(rf_make(&num, &den).map_err(|e| bad(e.to_string()))?);
                }
                Seed::new(rfs, matrix).map_err(|e| bad(e.to_string()))?
            }
        };
        Ok(LoadedSeed { seed, names, mutable_names: self.names.clone(), frozen_names: self.frozen_names.clone() })
    }

    /// The file describing `seed`; variables are written out unless the seed is initial.
    pub fn from_seed(seed: &Seed, names: &[String], mutable: Option<Vec<String>>, frozen: Option<Vec<String>>) -> Self {
        let vars = (seed.vars() != Seed::initial(seed.matrix().clone()).vars()).then(|| {
            seed.vars()
                .iter()
                .map(|v| VarEntry {
                    num: poly_to_terms(v.numerator()),
                    den: poly_to_terms(v.denominator()),
                    display: Some(v.format_with(names)),
                })
                .collect()
        });
        SeedFile { n: seed.n(), b: seed.matrix().rows().to_vec(), names: mutable, frozen_names: frozen, vars }
    }
}

pub fn load(path: &Path) -> Result<LoadedSeed, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let file: SeedFile = serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    file.validate()
}

pub fn display_vars(vars: &[RationalFunction], names: &[String]) -> Vec<String> {
    vars.iter().map(|v| v.format_with(names)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use cluster_core::exchange::random_exchange_matrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn a2() -> SeedFile {
        SeedFile { n: 2, b: vec![vec![0, 1], vec![-1, 0]], names: None, frozen_names: None, vars: None }
    }

    #[test]
    fn round_trip_after_mutation() {
        let loaded = a2().validate().unwrap();
        let s = loaded.seed.mutate_path(&[0, 1]).unwrap();
        let file = SeedFile::from_seed(&s, &loaded.names, None, None);
        let text = serde_json::to_string(&file).unwrap();
        let back: SeedFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.validate().unwrap().seed, s);
    }

    #[test]
    fn rejects_bad_shapes() {
        let mut f = a2();
        f.b = vec![vec![0, 1]];
        assert!(f.validate().is_err());
        let mut f = a2();
        f.b = vec![vec![0, 1], vec![1, 0]];
        assert!(f.validate().is_err());
        let mut f = a2();
        f.names = Some(vec!["a".into()]);
        assert!(f.validate().is_err());
    }

    proptest! {
        #[test]
        fn written_seeds_reload_equal(seed in any::<u64>(), n in 1usize..=3, f in 0usize..=2, len in 0usize..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = random_exchange_matrix(n, f, 2, &mut rng);
            let path: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
            let s = Seed::initial(b).mutate_path(&path).unwrap();
            let names = default_names(n + f);
            let text = serde_json::to_string_pretty(&SeedFile::from_seed(&s, &names, None, None)).unwrap();
            let back: SeedFile = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.validate().unwrap().seed, s);
        }
    }
}
